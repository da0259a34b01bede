"""Full-state protocol simulator.

Tracks the complete 81-amplitude joint state of the home qutrit, the
travelling qutrit and a 9-level probe ancilla. Message cycles apply a
coding operation to the travelling qutrit and decode by projecting onto
the entangled pair basis; control cycles measure both qutrits in paired
bases and flag any disallowed outcome pair. Attacks enter either as a
circulant unitary on the travelling qutrit alone or as an
entangling-probe branching map. All outcome distributions are exact Born
probabilities; sampling inverts their cumulative sums.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .attack import (
    AttackSpec,
    ColumnAttack,
    NoAttack,
    SymmetricAttack,
    attack_from_dict,
    attack_to_dict,
    complete_circulant,
)
from .information import FrequencyTable, FREQUENCY_PRESETS
from .qutrit import (
    BASIS_LABELS,
    PARTNER_BASIS,
    Unitary3,
    bell_state,
    coding_unitary,
    control_correlations,
    mub,
)

ANCILLA_DIM = 9

_STATE_NORM_TOL = 1e-10


@dataclass(frozen=True)
class JointState:
    """Pure state of (home, travel, ancilla) as a (3, 3, 9) amplitude array."""

    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=np.complex128)
        if arr.shape != (3, 3, ANCILLA_DIM):
            raise ValueError(f"joint state must have shape (3, 3, 9), got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("joint state amplitudes must be finite")
        norm = float((np.abs(arr) ** 2).sum())
        if abs(norm - 1.0) > _STATE_NORM_TOL:
            raise ValueError(f"joint state must be normalized, squared norm {norm!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)


def initial_state() -> JointState:
    """Shared entangled pair with the probe ancilla parked in its ready slot."""
    amps = np.zeros((3, 3, ANCILLA_DIM), dtype=np.complex128)
    amps[:, :, 0] = bell_state(0, 0).amp
    return JointState(amps)


def apply_travel_unitary(state: JointState, u: Unitary3) -> JointState:
    return JointState(np.einsum("ts,hsn->htn", u.m, state.amps))


def apply_branch_attack(state: JointState, e: np.ndarray) -> JointState:
    """Entangling-probe attack in computational coordinates.

    e[m, n] is the amplitude for rewriting travel state n into m; the probe
    remembers the (n, m) branch in pointer slot 3n + m. Each column of e
    must be a unit vector (the map is then an isometry; e itself need not
    be unitary). The ancilla must still be in its ready slot.
    """
    e = np.asarray(e, dtype=np.complex128)
    if e.shape != (3, 3):
        raise ValueError(f"branch coefficients must be 3x3, got {e.shape}")
    if not np.isfinite(e).all():
        raise ValueError("branch coefficients must be finite")
    col_norms = (np.abs(e) ** 2).sum(axis=0)
    if np.abs(col_norms - 1.0).max() > 1e-9:
        raise ValueError(f"branch columns must be unit vectors, squared norms {col_norms.tolist()}")
    occupied = float((np.abs(state.amps[:, :, 1:]) ** 2).sum())
    if occupied > _STATE_NORM_TOL:
        raise ValueError("ancilla is no longer in its ready slot; cannot attack twice")
    out = np.zeros((3, 3, ANCILLA_DIM), dtype=np.complex128)
    for n in range(3):
        for m in range(3):
            out[:, m, 3 * n + m] += e[m, n] * state.amps[:, n, 0]
    return JointState(out)


@dataclass(frozen=True)
class ControlTable:
    """Exact joint outcome distribution of one control-basis choice.

    joint[a, b] is the probability that the receiver sees a on the
    travelling qutrit and the sender sees b on the home qutrit; allowed
    holds the (a, b) pairs an unattacked channel can produce.
    """

    alice_basis: str
    bob_basis: str
    joint: np.ndarray
    allowed: frozenset

    def __post_init__(self):
        arr = np.asarray(self.joint, dtype=float)
        if arr.shape != (3, 3):
            raise ValueError("joint distribution must be 3x3")
        if (arr < -1e-12).any() or abs(float(arr.sum()) - 1.0) > 1e-10:
            raise ValueError("joint distribution must be a probability table")
        arr = arr.clip(min=0.0)
        arr.setflags(write=False)
        object.__setattr__(self, "joint", arr)
        object.__setattr__(self, "allowed", frozenset(self.allowed))

    def detection_probability(self) -> float:
        ok = sum(self.joint[a, b] for (a, b) in self.allowed)
        return max(0.0, 1.0 - float(ok))


def control_distribution(state: JointState, alice_basis: str) -> ControlTable:
    """Joint control-round distribution for a travel-side basis choice.

    The sender measures the home qutrit in the partner basis; allowed pairs
    come from the ideal-state correlation rules.
    """
    if alice_basis not in BASIS_LABELS:
        raise ValueError(f"unknown basis {alice_basis!r}")
    bob_basis = PARTNER_BASIS[alice_basis]
    a_mat = mub(alice_basis).matrix
    b_mat = mub(bob_basis).matrix
    overlaps = np.einsum("hb,ta,htn->abn", b_mat.conj(), a_mat.conj(), state.amps)
    joint = (np.abs(overlaps) ** 2).sum(axis=2)
    allowed = control_correlations(alice_basis).allowed_pairs()
    return ControlTable(alice_basis, bob_basis, joint, frozenset(allowed))


def detection_probability(state: JointState, alice_basis: str) -> float:
    """Exact probability that one control round in this basis flags the channel."""
    return control_distribution(state, alice_basis).detection_probability()


_BELLS = None


def _bell_stack() -> np.ndarray:
    global _BELLS
    if _BELLS is None:
        stack = np.empty((9, 3, 3), dtype=np.complex128)
        for i in range(3):
            for j in range(3):
                stack[3 * i + j] = bell_state(i, j).amp
        stack.setflags(write=False)
        _BELLS = stack
    return _BELLS


def decode_distribution(state: JointState, bigram: tuple[int, int]) -> np.ndarray:
    """Receiver-side decode distribution after encoding the given bigram.

    Returns the nine probabilities of reading entangled-pair outcome
    (i, j), flattened as 3i + j. Without an attack the distribution is a
    point mass on the encoded bigram.
    """
    i, j = bigram
    encoded = apply_travel_unitary(state, coding_unitary(i, j))
    overlaps = np.einsum("kht,htn->kn", _bell_stack().conj(), encoded.amps)
    probs = (np.abs(overlaps) ** 2).sum(axis=1)
    return probs


@dataclass(frozen=True)
class ProtocolConfig:
    """Run parameters for the simulator.

    q is the probability a cycle is a control cycle; basis_weights splits
    control cycles between the computational and phase bases. The ancilla
    mode selects how a column attack acts: "branch" entangles a probe,
    "none" applies a circulant unitary completion to the travel qutrit.
    """

    cycles: int
    seed: int
    freq: FrequencyTable = field(default_factory=FrequencyTable.uniform)
    attack: AttackSpec = field(default_factory=NoAttack)
    q: float = 0.25
    basis_weights: tuple[float, float] = (0.5, 0.5)
    ancilla: str = "branch"

    def __post_init__(self):
        if not isinstance(self.cycles, int) or isinstance(self.cycles, bool) or self.cycles < 1:
            raise ValueError(f"cycles must be a positive integer, got {self.cycles!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not isinstance(self.freq, FrequencyTable):
            raise ValueError("freq must be a FrequencyTable")
        if not isinstance(self.attack, (NoAttack, SymmetricAttack, ColumnAttack)):
            raise ValueError(f"not an attack specification: {self.attack!r}")
        if not (isinstance(self.q, (int, float)) and math.isfinite(self.q) and 0.0 <= self.q <= 1.0):
            raise ValueError(f"q must lie in [0, 1], got {self.q!r}")
        object.__setattr__(self, "q", float(self.q))
        bw = tuple(float(w) for w in self.basis_weights)
        if len(bw) != 2 or any(not math.isfinite(w) or w < 0.0 for w in bw):
            raise ValueError(f"basis_weights must be two non-negative numbers, got {self.basis_weights!r}")
        if abs(bw[0] + bw[1] - 1.0) > 1e-12:
            raise ValueError(f"basis_weights must sum to 1, got {bw!r}")
        object.__setattr__(self, "basis_weights", bw)
        if self.ancilla not in ("branch", "none"):
            raise ValueError(f"ancilla mode must be 'branch' or 'none', got {self.ancilla!r}")

    def to_dict(self) -> dict:
        return {
            "cycles": self.cycles,
            "seed": self.seed,
            "freq": {"p": [[float(x) for x in row] for row in self.freq.p]},
            "attack": attack_to_dict(self.attack),
            "q": self.q,
            "basis_weights": list(self.basis_weights),
            "ancilla": self.ancilla,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProtocolConfig":
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        known = {"cycles", "seed", "freq", "attack", "q", "basis_weights", "ancilla"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unexpected config fields: {sorted(extra)}")
        for name in ("cycles", "seed"):
            if name not in data:
                raise ValueError(f"config needs a {name!r} field")
        freq = FrequencyTable.uniform()
        if "freq" in data:
            spec = data["freq"]
            if isinstance(spec, dict) and set(spec) == {"preset"}:
                name = spec["preset"]
                if name not in FREQUENCY_PRESETS:
                    raise ValueError(
                        f"unknown frequency preset {name!r}; choose from {sorted(FREQUENCY_PRESETS)}"
                    )
                freq = FREQUENCY_PRESETS[name]
            elif isinstance(spec, dict) and set(spec) == {"p"}:
                arr = np.asarray(spec["p"], dtype=float)
                if arr.shape != (3, 3) or not np.isfinite(arr).all() or (arr < 0).any():
                    raise ValueError("freq.p must be a non-negative 3x3 array")
                total = float(arr.sum())
                if abs(total - 1.0) > 1e-9:
                    raise ValueError(f"freq.p sums to {total!r}, not 1")
                freq = FrequencyTable(arr / total)
            else:
                raise ValueError("freq must be {'preset': name} or {'p': 3x3 array}")
        attack: AttackSpec = NoAttack()
        if "attack" in data:
            attack = attack_from_dict(data["attack"])
        kwargs = {}
        if "q" in data:
            kwargs["q"] = data["q"]
        if "basis_weights" in data:
            bw = data["basis_weights"]
            if not (isinstance(bw, list) and len(bw) == 2):
                raise ValueError("basis_weights must be a two-element list")
            kwargs["basis_weights"] = tuple(bw)
        if "ancilla" in data:
            kwargs["ancilla"] = data["ancilla"]
        return cls(cycles=data["cycles"], seed=data["seed"], freq=freq, attack=attack, **kwargs)


def load_protocol_config(path) -> ProtocolConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {path}: invalid JSON ({exc})") from exc
    return ProtocolConfig.from_dict(data)


def _shift_matrix(column: np.ndarray) -> np.ndarray:
    e = np.empty((3, 3), dtype=np.complex128)
    for n in range(3):
        for m in range(3):
            e[m, n] = column[(m - n) % 3]
    return e


def attack_state(config: ProtocolConfig) -> JointState:
    """Joint state after the eavesdropper touches the travelling qutrit once."""
    state = initial_state()
    attack = config.attack
    if isinstance(attack, NoAttack):
        return state
    if isinstance(attack, SymmetricAttack):
        column, basis = attack.column(), "z"
    else:
        column, basis = attack.column, attack.basis
    if config.ancilla == "none":
        op = complete_circulant(column, representation=basis)
        m = mub(basis).matrix
        u = m @ op.m @ m.conj().T
        return apply_travel_unitary(state, Unitary3(u))
    e = _shift_matrix(column.as_array())
    m = mub(basis).matrix
    rotated = JointState(np.einsum("tn,htk->hnk", m.conj(), state.amps))
    branched = apply_branch_attack(rotated, e)
    return JointState(np.einsum("tm,hmk->htk", m, branched.amps))


@dataclass(frozen=True)
class CycleRecord:
    """One transcript line; unused fields are None."""

    cycle: int
    mode: str
    basis: str | None = None
    alice: int | None = None
    bob: int | None = None
    detected: bool | None = None
    sent: tuple[int, int] | None = None
    decoded: tuple[int, int] | None = None


TRANSCRIPT_HEADER = "cycle,mode,basis,alice,bob,detected,sent,decoded"


def write_transcript(records, path) -> None:
    """Write cycle records as CSV; bigrams appear as two-digit strings."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TRANSCRIPT_HEADER + "\n")
        for r in records:
            if r.mode == "control":
                row = (
                    f"{r.cycle},control,{r.basis},{r.alice},{r.bob},"
                    f"{1 if r.detected else 0},,"
                )
            else:
                row = (
                    f"{r.cycle},message,,,,,"
                    f"{r.sent[0]}{r.sent[1]},{r.decoded[0]}{r.decoded[1]}"
                )
            fh.write(row + "\n")


def rounds_for_confidence(d: float, target: float = 0.99) -> int:
    """Fewest control rounds that reach the target detection confidence.

    Solves for the smallest r with 1 - (1 - d)^r >= target. A non-positive
    d means an undetectable attack, which is an error here.
    """
    if not (isinstance(d, (int, float)) and math.isfinite(d)):
        raise ValueError(f"detection probability must be a finite number, got {d!r}")
    if not (isinstance(target, (int, float)) and 0.0 < target < 1.0):
        raise ValueError(f"confidence target must lie in (0, 1), got {target!r}")
    if d <= 0.0:
        raise ValueError("undetectable attack: detection probability must be positive")
    if d >= 1.0:
        return 1
    r = max(1, math.ceil(math.log1p(-target) / math.log1p(-d)))
    while 1.0 - (1.0 - d) ** r < target:
        r += 1
    while r > 1 and 1.0 - (1.0 - d) ** (r - 1) >= target:
        r -= 1
    return r


@dataclass(frozen=True)
class BasisStats:
    """Control statistics for one basis, with the exact prediction attached."""

    rounds: int
    detections: int
    predicted: float
    empirical: float | None
    three_sigma: float | None
    within_band: bool | None


@dataclass(frozen=True, eq=False)
class RunReport:
    """Everything a simulation run produces apart from the raw transcript."""

    config: dict
    cycles: int
    control_rounds: int
    message_rounds: int
    detections: int
    first_detection_cycle: int | None
    basis_stats: dict
    confusion: np.ndarray
    correct_messages: int
    rounds_to_detection: int | None

    def as_dict(self) -> dict:
        stats = {}
        for basis, s in self.basis_stats.items():
            stats[basis] = {
                "rounds": s.rounds,
                "detections": s.detections,
                "predicted": s.predicted,
                "empirical": s.empirical,
                "three_sigma": s.three_sigma,
                "within_band": s.within_band,
            }
        return {
            "config": self.config,
            "cycles": self.cycles,
            "control_rounds": self.control_rounds,
            "message_rounds": self.message_rounds,
            "detections": self.detections,
            "first_detection_cycle": self.first_detection_cycle,
            "basis_stats": stats,
            "confusion": [[int(x) for x in row] for row in self.confusion],
            "correct_messages": self.correct_messages,
            "rounds_to_detection": self.rounds_to_detection,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def _cumulative(probs: np.ndarray) -> list[float]:
    total = float(probs.sum())
    cum, acc = [], 0.0
    for p in probs:
        acc += float(p)
        cum.append(acc / total if total > 0 else 0.0)
    cum[-1] = 1.0
    return cum


def _draw(cum: list[float], u: float) -> int:
    return min(bisect_right(cum, u), len(cum) - 1)


def run(config: ProtocolConfig, keep_transcript: bool = False):
    """Simulate the protocol; returns a RunReport (and the transcript if kept).

    The post-attack state is the same every cycle, so all outcome
    distributions are computed once up front and each cycle only draws
    from them. Identical configs reproduce identical reports.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    state = attack_state(config)

    control_tables = {basis: control_distribution(state, basis) for basis in ("z", "x")}
    alice_cum = {}
    bob_cond_cum = {}
    for basis, table in control_tables.items():
        marg = table.joint.sum(axis=1)
        alice_cum[basis] = _cumulative(marg)
        conds = []
        for a in range(3):
            row = table.joint[a]
            conds.append(_cumulative(row) if row.sum() > 0 else _cumulative(np.ones(3)))
        bob_cond_cum[basis] = conds

    decode_cum = []
    for i in range(3):
        for j in range(3):
            decode_cum.append(_cumulative(decode_distribution(state, (i, j))))
    bigram_cum = _cumulative(config.freq.flat())

    q_z, _ = config.basis_weights
    detections = 0
    first_detection = None
    control_counts = {"z": 0, "x": 0}
    detect_counts = {"z": 0, "x": 0}
    message_rounds = 0
    correct = 0
    confusion = np.zeros((9, 9), dtype=np.int64)
    transcript: list[CycleRecord] = []

    for cycle in range(1, config.cycles + 1):
        if rng.random() < config.q:
            basis = "z" if rng.random() < q_z else "x"
            a = _draw(alice_cum[basis], rng.random())
            b = _draw(bob_cond_cum[basis][a], rng.random())
            hit = (a, b) not in control_tables[basis].allowed
            control_counts[basis] += 1
            if hit:
                detect_counts[basis] += 1
                detections += 1
                if first_detection is None:
                    first_detection = cycle
            if keep_transcript:
                transcript.append(CycleRecord(cycle, "control", basis=basis, alice=a, bob=b, detected=hit))
        else:
            k = _draw(bigram_cum, rng.random())
            sent = (k // 3, k % 3)
            out = _draw(decode_cum[k], rng.random())
            decoded = (out // 3, out % 3)
            confusion[k, out] += 1
            message_rounds += 1
            if decoded == sent:
                correct += 1
            if keep_transcript:
                transcript.append(CycleRecord(cycle, "message", sent=sent, decoded=decoded))

    basis_stats = {}
    for basis in ("z", "x"):
        n = control_counts[basis]
        p = control_tables[basis].detection_probability()
        if n > 0:
            emp = detect_counts[basis] / n
            band = 3.0 * math.sqrt(p * (1.0 - p) / n)
            basis_stats[basis] = BasisStats(n, detect_counts[basis], p, emp, band, abs(emp - p) <= band)
        else:
            basis_stats[basis] = BasisStats(0, 0, p, None, None, None)

    total_control = sum(control_counts.values())
    blended_emp = detections / total_control if total_control else 0.0
    rtd = rounds_for_confidence(blended_emp) if blended_emp > 0.0 else None

    report = RunReport(
        config=config.to_dict(),
        cycles=config.cycles,
        control_rounds=total_control,
        message_rounds=message_rounds,
        detections=detections,
        first_detection_cycle=first_detection,
        basis_stats=basis_stats,
        confusion=confusion,
        correct_messages=correct,
        rounds_to_detection=rtd,
    )
    if keep_transcript:
        return report, transcript
    return report
