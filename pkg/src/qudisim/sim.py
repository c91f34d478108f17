"""Circuit execution: exact evolution, shot sampling, depolarizing noise.

Noise is simulated with Monte-Carlo trajectories, never density
matrices: after each gate, with probability lambda, one uniformly
random non-identity Weyl operator of the gate's joint dimension is
applied to the gate's wires.  Branch weights of the depolarizing Kraus
set do not depend on the state (every branch is a scaled unitary), so
this sampling is unbiased over shots.

Seeding: shot i draws from two child streams of SeedSequence([seed, i])
- one for error events, one for the measurement outcome - so results
are reproducible, independent of execution order, and the zero-noise
limit reproduces the noiseless histogram exactly.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import (
    MixedRadixState,
    apply_unitary_to_array,
    digit_string,
    new_zero_state,
)
from .errors import (
    DimensionTooLarge,
    InvalidArguments,
    InvalidDimension,
    InvalidStrength,
    NoiseOnUnloweredCircuit,
)
from .gates import KIND_HADAMARD, Circuit, gate_unitary

#: Largest total dimension for which a full circuit unitary is built.
MAX_UNITARY_DIM = 4096

_NOISE_DIMS = (2, 3, 4, 6, 9)


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing strengths for one-wire and two-wire gates."""

    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self) -> None:
        for name, lam in (("lambda1", self.lambda1), ("lambda2", self.lambda2)):
            if not 0.0 <= lam <= 1.0:
                raise InvalidStrength(f"{name}={lam} outside [0, 1]")


@dataclass
class ShotHistogram:
    """Counts of measured digit strings (one character per wire)."""

    counts: dict[str, int] = field(default_factory=dict)
    shots: int = 0

    def record(self, outcome: str) -> None:
        self.counts[outcome] = self.counts.get(outcome, 0) + 1
        self.shots += 1

    def merge(self, other: "ShotHistogram") -> None:
        for outcome, count in other.counts.items():
            self.counts[outcome] = self.counts.get(outcome, 0) + count
        self.shots += other.shots

    def probabilities(self) -> dict[str, float]:
        if self.shots == 0:
            return {}
        return {k: v / self.shots for k, v in self.counts.items()}

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["outcome_digits", "count"])
            for outcome in sorted(self.counts):
                writer.writerow([outcome, self.counts[outcome]])

    @staticmethod
    def from_csv(path) -> "ShotHistogram":
        hist = ShotHistogram()
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != ["outcome_digits", "count"]:
                raise InvalidArguments(f"unexpected histogram header {header!r}")
            for row in reader:
                if not row:
                    continue
                outcome, count = row[0], int(row[1])
                hist.counts[outcome] = hist.counts.get(outcome, 0) + count
                hist.shots += count
        return hist


def apply_circuit(circuit: Circuit, amps: np.ndarray) -> np.ndarray:
    """Evolve a flat vector, or the columns of a matrix, through a circuit."""
    dims = circuit.spec.dims
    for op in circuit.ops:
        op.validate(circuit.spec)
        amps = apply_unitary_to_array(
            amps, dims, op.wires(), gate_unitary(op, circuit.spec), check_unitary=False
        )
    return amps


def run_exact(circuit: Circuit) -> MixedRadixState:
    """Final state of the circuit applied to the all-zero state."""
    state = new_zero_state(circuit.spec)
    amps = apply_circuit(circuit, state.amplitudes)
    out = MixedRadixState(circuit.spec, amps)
    norm = out.norm()
    if abs(norm - 1.0) > 1e-10:
        raise InvalidArguments(f"state norm drifted to {norm}")
    return out


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Ordered product of the embedded gate unitaries (small systems only)."""
    dim = circuit.spec.total_dim
    if dim > MAX_UNITARY_DIM:
        raise DimensionTooLarge(f"total dimension {dim} exceeds {MAX_UNITARY_DIM}")
    return apply_circuit(circuit, np.eye(dim, dtype=complex))


def weyl_operator(dim: int, a: int, b: int) -> np.ndarray:
    """X^a Z^b on one dim-sized space: |j> -> w^(b j) |j+a mod dim>."""
    omega = np.exp(2j * np.pi / dim)
    mat = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        mat[(j + a) % dim, j] = omega ** (b * j)
    return mat


def depolarizing_kraus(dim: int, lam: float) -> list[np.ndarray]:
    """Kraus set {sqrt(1-lam) I} + {sqrt(lam/(d^2-1)) X^a Z^b, (a,b) != 0}."""
    if dim not in _NOISE_DIMS:
        raise InvalidDimension(f"depolarizing channel supports dims {_NOISE_DIMS}, got {dim}")
    if not 0.0 <= lam <= 1.0:
        raise InvalidStrength(f"strength {lam} outside [0, 1]")
    ops = [np.sqrt(1.0 - lam) * np.eye(dim, dtype=complex)]
    weight = np.sqrt(lam / (dim * dim - 1))
    for a in range(dim):
        for b in range(dim):
            if a == 0 and b == 0:
                continue
            ops.append(weight * weyl_operator(dim, a, b))
    return ops


# --- trajectory engine ----------------------------------------------------
#
# All gates in this package are either computational-basis permutations
# (the X / controlled-X family) or single-wire dense unitaries
# (Hadamards), so a trajectory state stays sparse: permutations and Weyl
# errors never grow the support, and a Hadamard grows it at most by its
# wire dimension.  States are kept as parallel (index, amplitude) arrays.


@dataclass
class _CompiledOp:
    # permutation data (None for dense single-wire ops)
    ctrl_strides: np.ndarray | None
    ctrl_dims: np.ndarray | None
    ctrl_states: np.ndarray | None
    t_stride: int
    t_dim: int
    table: np.ndarray | None        # target digit map for permutations
    matrix: np.ndarray | None       # dense matrix for hadamards
    # noise support: (strides, dims) of the op's wires, big-endian
    support_strides: tuple[int, ...] = ()
    support_dims: tuple[int, ...] = ()
    joint_dim: int = 1
    is_two_wire: bool = False


def _compile_ops(circuit: Circuit) -> list[_CompiledOp]:
    spec = circuit.spec
    strides = spec.strides()
    compiled = []
    for op in circuit.ops:
        op.validate(spec)
        wires = op.wires()
        sup_strides = tuple(strides[w] for w in wires)
        sup_dims = tuple(spec.dims[w] for w in wires)
        joint = 1
        for d in sup_dims:
            joint *= d
        if op.kind == KIND_HADAMARD:
            compiled.append(_CompiledOp(
                None, None, None, strides[op.target], spec.dims[op.target],
                None, gate_unitary(op, spec),
                support_strides=sup_strides, support_dims=sup_dims,
                joint_dim=joint, is_two_wire=len(wires) == 2))
        else:
            perm = op.variant.permutation(spec.dims[op.target])
            compiled.append(_CompiledOp(
                np.array([strides[c.wire] for c in op.controls], dtype=np.int64),
                np.array([spec.dims[c.wire] for c in op.controls], dtype=np.int64),
                np.array([c.state for c in op.controls], dtype=np.int64),
                strides[op.target], spec.dims[op.target],
                np.array(perm, dtype=np.int64), None,
                support_strides=sup_strides, support_dims=sup_dims,
                joint_dim=joint, is_two_wire=len(wires) == 2))
    return compiled


def _apply_perm(idx: np.ndarray, amp: np.ndarray, op: _CompiledOp):
    if len(op.ctrl_strides):
        mask = np.ones(len(idx), dtype=bool)
        for stride, dim, state in zip(op.ctrl_strides, op.ctrl_dims, op.ctrl_states):
            mask &= (idx // stride) % dim == state
        if not mask.any():
            return idx, amp
        sub = idx[mask]
        t = (sub // op.t_stride) % op.t_dim
        idx = idx.copy()
        idx[mask] = sub + (op.table[t] - t) * op.t_stride
    else:
        t = (idx // op.t_stride) % op.t_dim
        idx = idx + (op.table[t] - t) * op.t_stride
    return idx, amp


def _apply_dense_single(idx: np.ndarray, amp: np.ndarray, op: _CompiledOp):
    t = (idx // op.t_stride) % op.t_dim
    base = idx - t * op.t_stride
    spread = np.arange(op.t_dim, dtype=np.int64) * op.t_stride
    new_idx = (base[:, None] + spread[None, :]).ravel()
    new_amp = (amp[:, None] * op.matrix[:, t].T).ravel()
    uniq, inv = np.unique(new_idx, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=complex)
    np.add.at(acc, inv, new_amp)
    keep = np.abs(acc) > 1e-14
    return uniq[keep], acc[keep]


def _apply_weyl(idx: np.ndarray, amp: np.ndarray, op: _CompiledOp, a: int, b: int):
    joint = np.zeros(len(idx), dtype=np.int64)
    for stride, dim in zip(op.support_strides, op.support_dims):
        joint = joint * dim + (idx // stride) % dim
    amp = amp * np.exp(2j * np.pi * b * joint / op.joint_dim)
    shifted = (joint + a) % op.joint_dim
    idx = idx.copy()
    delta = shifted
    for stride, dim in zip(reversed(op.support_strides), reversed(op.support_dims)):
        old = (idx // stride) % dim
        new = delta % dim
        delta //= dim
        idx += (new - old) * stride
    return idx, amp


def _trajectory_outcome(compiled, hits, rng_err, rng_out) -> int:
    idx = np.zeros(1, dtype=np.int64)
    amp = np.ones(1, dtype=complex)
    for i, op in enumerate(compiled):
        if op.matrix is not None:
            idx, amp = _apply_dense_single(idx, amp, op)
        else:
            idx, amp = _apply_perm(idx, amp, op)
        if hits[i]:
            pick = int(rng_err.integers(op.joint_dim * op.joint_dim - 1))
            a, b = divmod(pick + 1, op.joint_dim)
            idx, amp = _apply_weyl(idx, amp, op, a, b)
    probs = np.abs(amp) ** 2
    cum = np.cumsum(probs)
    pos = int(np.searchsorted(cum, rng_out.random() * cum[-1], side="right"))
    return int(idx[min(pos, len(idx) - 1)])


def _shot_children(seed: int, shot: int):
    return np.random.SeedSequence(entropy=[seed, shot]).spawn(2)


def sample_shots(
    circuit: Circuit,
    shots: int,
    noise: NoiseModel | None = None,
    seed: int = 0,
    threads: int = 1,
) -> ShotHistogram:
    """Measure all wires ``shots`` times; deterministic for a fixed seed."""
    if shots < 1:
        raise InvalidArguments(f"shots must be >= 1, got {shots}")
    spec = circuit.spec

    exact = run_exact(circuit)
    probs = np.abs(exact.amplitudes) ** 2
    cum = np.cumsum(probs)

    compiled = None
    lam = None
    if noise is not None:
        for op in circuit.ops:
            if len(op.wires()) > 2:
                raise NoiseOnUnloweredCircuit(
                    "noise attaches to elementary gates; lower the circuit first"
                )
        compiled = _compile_ops(circuit)
        lam = np.array(
            [noise.lambda2 if op.is_two_wire else noise.lambda1 for op in compiled]
        )

    strings: dict[int, str] = {}

    def outcome_string(index: int) -> str:
        s = strings.get(index)
        if s is None:
            s = digit_string(index, spec)
            strings[index] = s
        return s

    def run_range(lo: int, hi: int) -> ShotHistogram:
        hist = ShotHistogram()
        for i in range(lo, hi):
            err_seed, out_seed = _shot_children(seed, i)
            if compiled is None:
                rng_out = np.random.default_rng(out_seed)
                pos = int(np.searchsorted(cum, rng_out.random() * cum[-1], side="right"))
                hist.record(outcome_string(min(pos, len(cum) - 1)))
                continue
            rng_err = np.random.default_rng(err_seed)
            hits = rng_err.random(len(compiled)) < lam
            rng_out = np.random.default_rng(out_seed)
            if not hits.any():
                pos = int(np.searchsorted(cum, rng_out.random() * cum[-1], side="right"))
                hist.record(outcome_string(min(pos, len(cum) - 1)))
            else:
                index = _trajectory_outcome(compiled, hits, rng_err, rng_out)
                hist.record(outcome_string(index))
        return hist

    if threads <= 1:
        return run_range(0, shots)

    chunk = max(1, (shots + threads - 1) // threads)
    ranges = [(lo, min(lo + chunk, shots)) for lo in range(0, shots, chunk)]
    total = ShotHistogram()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(lambda r: run_range(*r), ranges):
            total.merge(part)
    return total
