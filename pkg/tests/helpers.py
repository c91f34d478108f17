"""Shared test oracles, kept independent of the implementation paths they check."""
from __future__ import annotations

import itertools

import numpy as np

from qudisim.core import WireSpec, digits_to_index
from qudisim.decompose import Strategy, lower_toffoli
from qudisim.encoding import RgbImage
from qudisim.gates import KIND_HADAMARD, ControlSpec, GateOp, XVariant
from qudisim.sim import apply_circuit

NON_IDENTITY_QUTRIT_FLIPS = (
    XVariant.PLUS1,
    XVariant.PLUS2,
    XVariant.SWAP01,
    XVariant.SWAP12,
    XVariant.SWAP02,
)


def classical_gate_action(op: GateOp, dims, digits):
    """Truth-table action of an X-family gate on a digit tuple."""
    assert op.kind != KIND_HADAMARD
    digits = list(digits)
    if all(digits[c.wire] == c.state for c in op.controls):
        perm = op.variant.permutation(dims[op.target])
        digits[op.target] = perm[digits[op.target]]
    return tuple(digits)


def truth_table_unitary(op: GateOp, spec: WireSpec) -> np.ndarray:
    """Local matrix over (controls..., target) built by basis enumeration."""
    wires = op.wires()
    local_dims = [spec.dims[w] for w in wires]
    size = int(np.prod(local_dims))
    mat = np.zeros((size, size), dtype=complex)
    for col, local in enumerate(itertools.product(*[range(d) for d in local_dims])):
        digits = [0] * spec.num_wires
        for w, d in zip(wires, local):
            digits[w] = d
        out = classical_gate_action(op, spec.dims, digits)
        row = 0
        for w, d in zip(wires, [out[w] for w in wires]):
            row = row * spec.dims[w] + d
        mat[row, col] = 1.0
    return mat


def make_toffoli(ctrl_dims, states, target_dim, variant):
    """(spec, gate) with controls on wires 0..n-1 and target on wire n."""
    spec = WireSpec(tuple(ctrl_dims) + (target_dim,))
    gate = GateOp.controlled_flip(
        [ControlSpec(i, s) for i, s in enumerate(states)], len(ctrl_dims), variant
    )
    return spec, gate


def verify_lowering(spec, gate, strategy, **kwargs):
    """Check a lowered gate against the original on the ancilla-zero sector.

    Evolves every original basis state (as columns) through the lowered
    circuit and demands the exact 0/1 permutation the gate defines, with
    ancillas returned to zero and no amplitude off the sector.
    Returns the lowered circuit for count assertions.
    """
    lowered = lower_toffoli(spec, gate, strategy, **kwargs)
    lspec = lowered.circuit.spec
    pad = (0,) * (lspec.num_wires - spec.num_wires)
    columns = list(itertools.product(*[range(d) for d in spec.dims]))
    block = np.zeros((lspec.total_dim, len(columns)), dtype=complex)
    for j, digits in enumerate(columns):
        block[digits_to_index(digits + pad, lspec), j] = 1.0
    out = apply_circuit(lowered.circuit, block)
    expected = np.zeros_like(block)
    for j, digits in enumerate(columns):
        image = classical_gate_action(gate, spec.dims, digits)
        expected[digits_to_index(image + pad, lspec), j] = 1.0
    deviation = np.abs(out - expected).max()
    assert deviation <= 1e-12, (
        f"lowered circuit deviates by {deviation} for {strategy} on "
        f"dims={spec.dims} states={[c.state for c in gate.controls]} "
        f"variant={gate.variant}"
    )
    return lowered


def enumerate_toffoli_cases(n):
    """All (ctrl_dims, states, target_dim, variant) combos for n controls."""
    for ctrl_dims in itertools.product((2, 3), repeat=n):
        for states in itertools.product(*[range(d) for d in ctrl_dims]):
            for target_dim in (2, 3):
                flips = NON_IDENTITY_QUTRIT_FLIPS if target_dim == 3 else (XVariant.SWAP01,)
                for variant in flips:
                    yield ctrl_dims, states, target_dim, variant


def applicable_strategies(ctrl_dims):
    n1 = sum(1 for d in ctrl_dims if d == 2)
    n2 = len(ctrl_dims) - n1
    out = [Strategy.ANCILLA_CHAIN]
    if n1 >= 1:
        out.append(Strategy.EFFECTIVE_QUTRIT)
    if n2 == 0:
        out.append(Strategy.QUBIT_ANCILLA)
    return out


def noncanonical_count(ctrl_dims, states):
    return sum(1 for d, s in zip(ctrl_dims, states) if s != d - 1)


def random_image(rng: np.random.Generator, height: int, width: int) -> RgbImage:
    return RgbImage(rng.integers(0, 256, size=(height, width, 3)))
