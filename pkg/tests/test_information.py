"""Frequency tables, entropies, ensemble spectra, leak curves."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qutrit_pingpong.attack import AttackColumn, symmetric_column
from qutrit_pingpong.information import (
    FREQUENCY_PRESETS,
    TRIT_TO_BIT,
    DensityMatrix9,
    FrequencyTable,
    InfoResult,
    assemble_rho,
    cubic_coefficients,
    factorized_eigenvalues,
    holevo_information,
    info_curve,
    load_frequency_table,
    source_entropy,
)
from qutrit_pingpong.qutrit import hermitian_eigenvalues, solve_cubic

_ENTROPY_EXPECTATIONS = {
    "uniform": 2.0,
    "tiered": 1.9206,
    "sparse": 1.4392,
    "peaked": 1.0864,
    "two-bigram": 0.57938,
}


def _random_column(rng) -> AttackColumn:
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    v /= np.linalg.norm(v)
    return AttackColumn(*(complex(x) for x in v))


def test_frequency_table_validation():
    with pytest.raises(ValueError):
        FrequencyTable(np.full((3, 3), 0.2))
    with pytest.raises(ValueError):
        FrequencyTable(-np.full((3, 3), 1.0 / 9.0))
    with pytest.raises(ValueError):
        FrequencyTable(np.full((2, 3), 1.0 / 6.0))


def test_frequency_groups_collect_shift_classes():
    freq = FREQUENCY_PRESETS["tiered"]
    for j in range(3):
        assert freq.group(j) == (freq.p[0, j], freq.p[1, j], freq.p[2, j])
    assert abs(sum(freq.group_sums()) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        freq.group(3)


def test_flat_layout_is_row_major():
    freq = FREQUENCY_PRESETS["peaked"]
    flat = freq.flat()
    for i in range(3):
        for j in range(3):
            assert flat[3 * i + j] == freq.p[i, j]


def test_presets_are_well_formed():
    assert set(_ENTROPY_EXPECTATIONS) == set(FREQUENCY_PRESETS)
    for freq in FREQUENCY_PRESETS.values():
        assert abs(float(freq.p.sum()) - 1.0) < 1e-12


@pytest.mark.parametrize("name", sorted(_ENTROPY_EXPECTATIONS))
def test_preset_entropies(name):
    h = source_entropy(FREQUENCY_PRESETS[name]).value
    assert abs(h - _ENTROPY_EXPECTATIONS[name]) < 1e-3


def test_uniform_entropy_is_two_trits_exactly():
    assert source_entropy(FrequencyTable.uniform()).value == pytest.approx(2.0, abs=1e-14)


def test_entropy_unit_conversion():
    freq = FREQUENCY_PRESETS["tiered"]
    trits = source_entropy(freq, "trit")
    bits = source_entropy(freq, "bit")
    assert abs(bits.value - trits.value * TRIT_TO_BIT) < 1e-12
    assert abs(trits.in_bits() - bits.value) < 1e-12
    assert abs(bits.in_trits() - trits.value) < 1e-12


def test_info_result_validation():
    with pytest.raises(ValueError):
        InfoResult(1.0, "nat")
    with pytest.raises(ValueError):
        InfoResult(2.5, "trit")
    with pytest.raises(ValueError):
        InfoResult(-0.5, "bit")


def test_load_frequency_table(tmp_path):
    path = tmp_path / "freq.json"
    path.write_text(json.dumps({"p": [[1 / 9] * 3] * 3}))
    freq = load_frequency_table(path)
    assert np.abs(freq.p - 1.0 / 9.0).max() < 1e-12


def test_load_frequency_table_renormalizes_rounding(tmp_path):
    p = np.full((3, 3), 0.1111111111)
    path = tmp_path / "freq.json"
    path.write_text(json.dumps({"p": p.tolist()}))
    freq = load_frequency_table(path)
    assert abs(float(freq.p.sum()) - 1.0) < 1e-15


@pytest.mark.parametrize(
    "payload",
    [
        {"p": [[0.5, 0.5, 0.5]] * 3},
        {"p": [[-0.1, 0.6, 0.5], [0, 0, 0], [0, 0, 0]]},
        {"p": [[1.0, 0.0], [0.0, 0.0]]},
        {"q": []},
        [1, 2, 3],
    ],
)
def test_load_frequency_table_rejects_malformed(tmp_path, payload):
    path = tmp_path / "freq.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ValueError):
        load_frequency_table(path)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix9(np.eye(9, dtype=complex))  # trace 9
    neg = np.zeros((9, 9), dtype=complex)
    neg[0, 0], neg[1, 1] = 1.5, -0.5
    with pytest.raises(ValueError):
        DensityMatrix9(neg)


def test_assembled_ensemble_is_a_density_matrix():
    rng = np.random.default_rng(5)
    for _ in range(5):
        col = _random_column(rng)
        p = rng.random((3, 3))
        freq = FrequencyTable(p / p.sum())
        rho = assemble_rho(col, freq)
        assert abs(float(np.trace(rho.m).real) - 1.0) < 1e-12


def test_cubic_coefficients_uniform_symmetric_case():
    # all moduli 1/3, all class frequencies 1/9: eigenvalue 1/9 three times
    c2, c1, c0 = cubic_coefficients((1 / 3, 1 / 3, 1 / 3), (1 / 9, 1 / 9, 1 / 9))
    assert c2 == pytest.approx(-1 / 3)
    assert c1 == pytest.approx(3 * (1 / 3) * (1 / 27), abs=1e-15)
    assert c0 == pytest.approx(-27 * (1 / 27) * (1 / 729), abs=1e-18)


def test_degenerate_shift_classes_pin_zero_eigenvalues():
    moduli = symmetric_column(0.5).moduli_squared()

    # a class with a single occupied bigram is pure: its cubic drops the
    # constant and linear terms and the spectrum is (frequency, 0, 0)
    c2, c1, c0 = cubic_coefficients(moduli, (0.0, 2.0 / 9.0, 0.0))
    assert c1 == 0.0 and c0 == 0.0
    roots = solve_cubic(c2, c1, c0)
    assert abs(roots[0] - 2.0 / 9.0) < 1e-12
    assert abs(roots[1]) < 1e-12 and abs(roots[2]) < 1e-12

    # an empty class contributes three exact zeros
    empty = cubic_coefficients(moduli, (0.0, 0.0, 0.0))
    assert empty == (0.0, 0.0, 0.0)
    assert solve_cubic(*empty) == (0.0, 0.0, 0.0)

    spread = factorized_eigenvalues(symmetric_column(0.5), FREQUENCY_PRESETS["two-bigram"])
    assert abs(spread[0] - 2.0 / 3.0) < 1e-12
    assert abs(spread[1] - 1.0 / 3.0) < 1e-12
    assert np.abs(spread[2:]).max() < 1e-12


def test_factorized_spectrum_matches_dense_diagonalization():
    rng = np.random.default_rng(99)
    for _ in range(30):
        col = _random_column(rng)
        p = rng.random((3, 3))
        freq = FrequencyTable(p / p.sum())
        lam_fact = factorized_eigenvalues(col, freq)
        lam_dense = hermitian_eigenvalues(assemble_rho(col, freq))
        assert np.abs(lam_fact - lam_dense).max() < 1e-10


@given(st.integers(min_value=0, max_value=100_000))
def test_factorized_spectrum_is_a_distribution(seed):
    rng = np.random.default_rng(seed)
    col = _random_column(rng)
    p = rng.random((3, 3))
    freq = FrequencyTable(p / p.sum())
    lam = factorized_eigenvalues(col, freq)
    assert lam.min() > -1e-10
    assert abs(float(lam.sum()) - 1.0) < 1e-9


def test_maximal_attack_leaks_the_source_entropy():
    for freq in FREQUENCY_PRESETS.values():
        leak = holevo_information(symmetric_column(2.0 / 3.0), freq).value
        assert abs(leak - source_entropy(freq).value) < 1e-9


def test_invisible_attack_leaks_class_entropy_only():
    for freq in FREQUENCY_PRESETS.values():
        leak = holevo_information(symmetric_column(0.0), freq).value
        sums = freq.group_sums()
        want = -sum(s * math.log(s) for s in sums if s > 0.0) / math.log(3.0)
        assert abs(leak - want) < 1e-9


def test_leak_in_bits_scales_by_log2_of_three():
    freq = FREQUENCY_PRESETS["sparse"]
    col = symmetric_column(0.4)
    trits = holevo_information(col, freq).value
    bits = holevo_information(col, freq, unit="bit").value
    assert abs(bits - trits * TRIT_TO_BIT) < 1e-12


def test_curves_monotone_for_all_presets():
    for freq in FREQUENCY_PRESETS.values():
        values = [v for _, v in info_curve(freq)]
        assert len(values) == 67
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_two_bigram_curve_is_flat():
    values = [v for _, v in info_curve(FREQUENCY_PRESETS["two-bigram"])]
    assert max(values) - min(values) < 1e-9
    assert abs(values[0] - 0.57938) < 1e-4


def test_curve_rejects_out_of_range_grid():
    with pytest.raises(ValueError):
        info_curve(FrequencyTable.uniform(), [0.0, 0.8])
