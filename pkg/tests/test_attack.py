"""Attack columns, circulant completion, reference data, JSON specs."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qutrit_pingpong.attack import (
    REFERENCE_ATTACKS,
    AttackColumn,
    AttackOperator,
    ColumnAttack,
    DetectionReport,
    NoAttack,
    SymmetricAttack,
    attack_from_dict,
    attack_to_dict,
    blended_detection,
    column_z_from_x,
    complete_circulant,
    detection_from_column,
    load_attack,
    normalized_column,
    symmetric_column,
    verify_reference_attacks,
)
from qutrit_pingpong.qutrit import OMEGA, NumericalError


def test_column_requires_unit_norm():
    with pytest.raises(ValueError):
        AttackColumn(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        AttackColumn(float("nan"), 0.0, 0.0)


def test_normalized_column_rescales():
    col = normalized_column(3.0, 4.0, 0.0)
    assert abs(col.c0 - 0.6) < 1e-15
    assert abs(col.c1 - 0.8) < 1e-15


def test_normalized_column_rejects_zero():
    with pytest.raises(ValueError):
        normalized_column(0.0, 0.0, 0.0)


def test_detection_is_leaked_weight():
    col = AttackColumn(math.sqrt(0.7), math.sqrt(0.2), math.sqrt(0.1))
    assert abs(detection_from_column(col) - 0.3) < 1e-12


def test_detection_of_undisturbed_column_is_zero():
    assert detection_from_column(AttackColumn(1.0, 0.0, 0.0)) == 0.0


def test_detection_of_tabulated_columns():
    general = normalized_column(-0.910684, 0.244017, -0.333333)
    assert abs(detection_from_column(general) - 0.170655) < 5e-5
    sym = normalized_column(-0.953939 + 0.1j, -0.2j, -0.2j)
    assert abs(detection_from_column(sym) - 0.08) < 5e-5


def test_symmetric_column_shares_disturbance_equally():
    col = symmetric_column(0.4)
    assert abs(abs(col.c1) ** 2 - 0.2) < 1e-15
    assert abs(abs(col.c2) ** 2 - 0.2) < 1e-15
    assert abs(detection_from_column(col) - 0.4) < 1e-15


@pytest.mark.parametrize("d", [-0.1, 0.7, 1.0])
def test_symmetric_column_range(d):
    with pytest.raises(ValueError):
        symmetric_column(d)


def test_attack_operator_rejects_non_unitary():
    with pytest.raises(ValueError):
        AttackOperator(np.ones((3, 3)), "z")


def test_attack_operator_rejects_uneven_moduli():
    # unitary, but the main diagonal mixes weights 0, 0, 1
    swap = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    with pytest.raises(ValueError):
        AttackOperator(swap, "z")


def test_attack_operator_rejects_unknown_basis():
    with pytest.raises(ValueError):
        AttackOperator(np.eye(3, dtype=complex), "q")


def test_identity_is_a_valid_attack_operator():
    op = AttackOperator(np.eye(3, dtype=complex), "z")
    assert detection_from_column(op.column()) == 0.0


def test_completion_matches_symmetric_family():
    for d in np.linspace(0.0, 2.0 / 3.0, 14):
        op = complete_circulant(symmetric_column(float(d)))
        got = np.abs(op.m[:, 0]) ** 2
        want = np.array(symmetric_column(float(d)).moduli_squared())
        assert np.abs(got - want).max() < 1e-10


def test_completion_of_lossless_column_is_identity():
    op = complete_circulant(AttackColumn(1.0, 0.0, 0.0))
    assert np.abs(op.m - np.eye(3)).max() < 1e-9


def test_completion_of_uniform_column_up_to_gauge():
    # the maximally leaking column has a closed-form circulant realization;
    # the solver may return it with a different global phase or with the two
    # free eigenphases conjugated, both of which leave the moduli untouched
    op = complete_circulant(symmetric_column(2.0 / 3.0))
    got = op.m[:, 0]
    want = np.array([0.577350, -0.288675 + 0.5j, -0.288675 + 0.5j])
    assert abs(abs(got[0]) - abs(want[0])) < 1e-6
    residuals = []
    for cand in (want, want.conj()):
        phase = got[0] / cand[0]
        residuals.append(np.abs(got - phase * cand).max())
    assert min(residuals) < 1e-6


def test_completion_output_is_circulant():
    op = complete_circulant(symmetric_column(0.3))
    for j in range(3):
        for k in range(3):
            assert op.m[j, k] == op.m[(j + 1) % 3, (k + 1) % 3]


def test_completion_keeps_representation_label():
    op = complete_circulant(symmetric_column(0.1), representation="x")
    assert op.representation == "x"


def test_completion_recovers_random_feasible_columns():
    rng = np.random.default_rng(424242)
    fourier = np.array([[OMEGA ** ((l * m) % 3) for m in range(3)] for l in range(3)])
    for _ in range(60):
        phases = rng.uniform(-math.pi, math.pi, size=2)
        eig = np.array([1.0, np.exp(1j * phases[0]), np.exp(1j * phases[1])])
        col_vals = fourier @ eig / 3.0
        col = AttackColumn(*(complex(v) for v in col_vals))
        op = complete_circulant(col)
        got = np.abs(op.m[:, 0]) ** 2
        assert np.abs(got - np.array(col.moduli_squared())).max() < 1e-10


def test_completion_rejects_infeasible_column():
    with pytest.raises(NumericalError):
        complete_circulant(AttackColumn(0.0, 1.0 / math.sqrt(2), 1.0 / math.sqrt(2)))


def test_completion_rejects_unknown_representation():
    with pytest.raises(ValueError):
        complete_circulant(symmetric_column(0.2), representation="w")


@given(st.integers(min_value=0, max_value=10_000))
def test_cross_representation_moduli_sum_to_one(seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    v /= np.linalg.norm(v)
    col = AttackColumn(*(complex(x) for x in v))
    m = column_z_from_x(col)
    assert all(x >= 0.0 for x in m)
    assert abs(sum(m) - 1.0) < 1e-12


def test_cross_representation_of_uniform_column_is_deterministic():
    # equal x entries concentrate all computational weight on "no shift"
    col = AttackColumn(*[1.0 / math.sqrt(3.0)] * 3)
    m0, m1, m2 = column_z_from_x(col)
    assert abs(m0 - 1.0) < 1e-12
    assert abs(m1) < 1e-12 and abs(m2) < 1e-12


def test_cross_representation_of_concentrated_column_is_flat():
    m = column_z_from_x(AttackColumn(1.0, 0.0, 0.0))
    assert max(abs(x - 1.0 / 3.0) for x in m) < 1e-12


def test_reference_rows_all_reproduce():
    checks = verify_reference_attacks()
    assert len(checks) == 18
    assert all(c.passed for c in checks)
    assert max(c.deviation for c in checks) < 5e-5


def test_reference_rows_contain_both_shapes():
    symmetric = [r for r in REFERENCE_ATTACKS if r.symmetric]
    general = [r for r in REFERENCE_ATTACKS if not r.symmetric]
    assert len(symmetric) == 6
    assert len(general) == 12


def test_reference_last_row_has_reduced_computational_leak():
    row = REFERENCE_ATTACKS[-1]
    assert row.symmetric
    assert abs(row.d_z - 0.222222) < 1e-9
    col = normalized_column(row.a, row.b, row.c)
    m0, _, _ = column_z_from_x(col)
    assert abs((1.0 - m0) - row.d_z) < 5e-5


def test_reference_rows_saturate_one_basis():
    # every stored row leaks maximally in at least one control basis
    for row in REFERENCE_ATTACKS:
        assert abs(max(row.d_x, row.d_z) - 2.0 / 3.0) < 5e-5


def test_blended_detection_mixes_rates():
    rep = DetectionReport(d_z=0.0, d_x=2.0 / 3.0)
    assert abs(blended_detection(rep, 0.5, 0.5) - 1.0 / 3.0) < 1e-15


def test_blended_detection_saturated_and_silent_cases():
    full = DetectionReport(d_z=2.0 / 3.0, d_x=2.0 / 3.0)
    for q_z in (0.0, 0.3, 1.0):
        assert abs(blended_detection(full, q_z, 1.0 - q_z) - 2.0 / 3.0) < 1e-15
    silent = DetectionReport(d_z=0.0, d_x=0.0)
    assert blended_detection(silent, 0.5, 0.5) == 0.0


def test_blended_detection_validates_weights():
    rep = DetectionReport(d_z=0.1, d_x=0.2)
    with pytest.raises(ValueError):
        blended_detection(rep, 0.7, 0.7)
    with pytest.raises(ValueError):
        blended_detection(rep, -0.5, 1.5)


def test_blended_detection_needs_both_rates():
    with pytest.raises(ValueError):
        blended_detection(DetectionReport(d_z=0.1), 0.5, 0.5)


def test_detection_report_checks_blended_consistency():
    with pytest.raises(ValueError):
        DetectionReport(d_z=0.0, d_x=2.0 / 3.0, blended=((0.5, 0.5), 0.5))
    rep = DetectionReport(d_z=0.0, d_x=2.0 / 3.0, blended=((0.5, 0.5), 1.0 / 3.0))
    assert rep.blended[1] == pytest.approx(1.0 / 3.0)


def test_detection_report_rejects_non_probability():
    with pytest.raises(ValueError):
        DetectionReport(d_z=1.5)


def test_attack_spec_round_trips():
    specs = [
        NoAttack(),
        SymmetricAttack(0.25),
        ColumnAttack("x", symmetric_column(0.3)),
    ]
    for spec in specs:
        again = attack_from_dict(attack_to_dict(spec))
        assert type(again) is type(spec)
    col = attack_from_dict(attack_to_dict(specs[2]))
    assert col.basis == "x"
    assert np.abs(col.column.as_array() - specs[2].column.as_array()).max() < 1e-15


def test_symmetric_attack_validates_range():
    with pytest.raises(ValueError):
        SymmetricAttack(0.9)


def test_column_attack_validates_basis():
    with pytest.raises(ValueError):
        ColumnAttack("q", symmetric_column(0.1))


@pytest.mark.parametrize(
    "payload",
    [
        {"type": "mystery"},
        {"type": "symmetric"},
        {"type": "symmetric", "d_z": "big"},
        {"type": "symmetric", "d_z": 0.1, "stray": 1},
        {"type": "column", "basis": "z"},
        {"type": "column", "basis": "z", "values": [[1, 0], [0, 0]]},
        {"type": "column", "basis": "z", "values": [[1, 0], [0, 0], ["x", 0]]},
        {"type": "none", "extra": True},
        [],
    ],
)
def test_attack_from_dict_rejects_malformed(payload):
    with pytest.raises(ValueError):
        attack_from_dict(payload)


def test_load_attack_from_file(tmp_path):
    path = tmp_path / "attack.json"
    path.write_text(json.dumps({"type": "symmetric", "d_z": 0.5}))
    spec = load_attack(path)
    assert isinstance(spec, SymmetricAttack)
    assert spec.d_z == 0.5


def test_load_attack_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ValueError):
        load_attack(path)
