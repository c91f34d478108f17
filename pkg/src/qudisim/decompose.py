"""Lowering of generalized Toffoli gates to one- and two-wire gates.

Three strategies, all built around the same idea: accumulate the AND of
the controls somewhere three-valued, fire one controlled flip from it,
then uncompute.

* ANCILLA_CHAIN: n controls need n-1 auxiliary qutrits.  The first two
  controls each conditionally increment ancilla 1, which therefore reads
  |2> exactly when both match; from there ancilla i-1 (at |2>) and
  control i+1 each conditionally increment ancilla i.  Canonical
  activations (qubit |1>, qutrit |2>) cost 4n-3 two-wire gates; each
  non-canonical control adds a self-inverse X sandwich, 2 gates, for
  4n-3+2k total (max 6n-3 at k=n).

* EFFECTIVE_QUTRIT: requires at least one control qubit.  The AND of the
  qubits is chained through their own (transiently used) third levels:
  qubit i, when active, applies swap12 to qubit i+1, so the last qubit
  reads |2> when all qubits match.  Each control qutrit then folds in
  through one auxiliary qutrit (2 gates per pair).  Cost 2n+2n2-1+2k
  with n2 auxiliary qutrits.  Note: the alternate closed form
  2n+2n2-2+2k undercounts the emitted sequence by exactly one (the final
  pair's uncompute cannot be elided); tests pin the emitted count.

* QUBIT_ANCILLA: requires all-qubit controls.  Pairwise binary Toffoli
  gates accumulate the AND into n1-1 auxiliary qubits; a single
  two-wire controlled flip hits the target.  The binary Toffolis are
  retained as three-wire units (2*n1-1+2k ops) unless
  ``lower_binary_toffolis`` rewrites each one as 5 two-wire gates using
  one extra shared qutrit.

Promoted qubit wires (EFFECTIVE_QUTRIT) become dimension 3 in the
lowered wire layout; every lowered block restores them to {0, 1}, so at
circuit boundaries they behave as qubits.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import WireSpec
from .errors import InvalidArguments, StrategyInapplicable, TooFewControls
from .gates import (
    KIND_HADAMARD,
    KIND_X,
    Circuit,
    ControlSpec,
    GateOp,
    XVariant,
    swap_variant,
)

ROLE_ANCILLA = "ancilla"


class Strategy(str, Enum):
    ANCILLA_CHAIN = "ancilla-chain"
    EFFECTIVE_QUTRIT = "effective-qutrit"
    QUBIT_ANCILLA = "qubit-ancilla"


@dataclass
class LoweredCircuit:
    """A lowered gate sequence over the original wires plus ancillas."""

    circuit: Circuit
    ancilla_wires: tuple[int, ...]
    promoted_wires: tuple[int, ...]
    elementary_gate_count: int
    toffoli_count: int


def canonical_state(dim: int) -> int:
    """Highest digit of a wire: 1 on qubits, 2 on qutrits."""
    return dim - 1


def _check_counts(n1: int, n2: int) -> None:
    if n1 < 0 or n2 < 0:
        raise InvalidArguments("control counts must be non-negative")
    if n1 + n2 < 2:
        raise InvalidArguments(f"need at least 2 controls, got {n1 + n2}")


def _check_strategy(n1: int, n2: int, strategy: Strategy) -> None:
    if strategy is Strategy.EFFECTIVE_QUTRIT and n1 < 1:
        raise StrategyInapplicable("effective-qutrit lowering needs at least one control qubit")
    if strategy is Strategy.QUBIT_ANCILLA and n2 > 0:
        raise StrategyInapplicable("qubit-ancilla lowering needs all-qubit controls")


def ancilla_requirement(n1: int, n2: int, strategy: Strategy) -> tuple[int, int]:
    """(qutrit ancillas, qubit ancillas) for n1 control qubits, n2 qutrits."""
    _check_counts(n1, n2)
    _check_strategy(n1, n2, strategy)
    n = n1 + n2
    if strategy is Strategy.ANCILLA_CHAIN:
        return (n - 1, 0)
    if strategy is Strategy.EFFECTIVE_QUTRIT:
        return (n2, 0)
    return (0, n1 - 1)


def predicted_gate_count(n1: int, n2: int, k: int, strategy: Strategy) -> int:
    """Emitted op count for k non-canonical controls.

    QUBIT_ANCILLA counts each retained binary Toffoli as one unit.
    """
    _check_counts(n1, n2)
    _check_strategy(n1, n2, strategy)
    n = n1 + n2
    if not 0 <= k <= n:
        raise InvalidArguments(f"k must lie in 0..{n}, got {k}")
    if strategy is Strategy.ANCILLA_CHAIN:
        return 4 * n - 3 + 2 * k
    if strategy is Strategy.EFFECTIVE_QUTRIT:
        return 2 * n + 2 * n2 - 1 + 2 * k
    return 2 * n1 - 1 + 2 * k


def effective_qutrit_alt_count(n1: int, n2: int, k: int) -> int:
    """Alternate closed form 2n+2n2-2+2k for the effective-qutrit strategy.

    Kept for comparison only; it is one below the emitted count for every
    configuration (see the module docstring).
    """
    _check_counts(n1, n2)
    n = n1 + n2
    if not 0 <= k <= n:
        raise InvalidArguments(f"k must lie in 0..{n}, got {k}")
    return 2 * n + 2 * n2 - 2 + 2 * k


def _sandwich_ops(controls, dims) -> list[GateOp]:
    """Self-inverse X gates mapping each activation to the canonical digit."""
    ops = []
    for ctrl in controls:
        canon = canonical_state(dims[ctrl.wire])
        if ctrl.state != canon:
            ops.append(GateOp.x(ctrl.wire, swap_variant(ctrl.state, canon)))
    return ops


def _cx(wire: int, state: int, target: int, variant: XVariant) -> GateOp:
    return GateOp.controlled_flip([ControlSpec(wire, state)], target, variant)


def _invert(op: GateOp) -> GateOp:
    return GateOp.controlled_flip(op.controls, op.target, op.variant.inverse)


def _chain_parts(controls, dims, ancillas):
    """Ancilla-chain compute ops; the AND lands on the last ancilla at |2>."""
    fwd = [
        _cx(controls[0].wire, canonical_state(dims[controls[0].wire]), ancillas[0], XVariant.PLUS1),
        _cx(controls[1].wire, canonical_state(dims[controls[1].wire]), ancillas[0], XVariant.PLUS1),
    ]
    for i in range(1, len(controls) - 1):
        fwd.append(_cx(ancillas[i - 1], 2, ancillas[i], XVariant.PLUS1))
        fwd.append(_cx(controls[i + 1].wire, canonical_state(dims[controls[i + 1].wire]),
                       ancillas[i], XVariant.PLUS1))
    return fwd, ancillas[-1], 2


def _effective_qutrit_parts(qubits, qutrits, dims, ancillas):
    """Qubit chain through third levels, then one ancilla pair per qutrit."""
    fwd = []
    for i in range(len(qubits) - 1):
        state = 1 if i == 0 else 2
        fwd.append(_cx(qubits[i].wire, state, qubits[i + 1].wire, XVariant.SWAP12))
    holder = qubits[-1].wire
    holder_state = 1 if len(qubits) == 1 else 2
    for j, ctrl in enumerate(qutrits):
        fwd.append(_cx(holder, holder_state, ancillas[j], XVariant.PLUS1))
        fwd.append(_cx(ctrl.wire, 2, ancillas[j], XVariant.PLUS1))
        holder, holder_state = ancillas[j], 2
    return fwd, holder, holder_state


def _qubit_ancilla_parts(qubits, ancillas):
    """Binary Toffolis accumulate the AND into the last qubit ancilla."""
    fwd = [GateOp.controlled_flip(
        [ControlSpec(qubits[0].wire, 1), ControlSpec(qubits[1].wire, 1)],
        ancillas[0], XVariant.SWAP01)]
    for i in range(1, len(qubits) - 1):
        fwd.append(GateOp.controlled_flip(
            [ControlSpec(ancillas[i - 1], 1), ControlSpec(qubits[i + 1].wire, 1)],
            ancillas[i], XVariant.SWAP01))
    return fwd, ancillas[-1], 1


def _lower_binary_toffoli(op: GateOp, spare_qutrit: int) -> list[GateOp]:
    """Rewrite a 2-control binary Toffoli as 5 two-wire gates."""
    (c1, c2), t = op.controls, op.target
    return [
        _cx(c1.wire, c1.state, spare_qutrit, XVariant.PLUS1),
        _cx(c2.wire, c2.state, spare_qutrit, XVariant.PLUS1),
        _cx(spare_qutrit, 2, t, op.variant),
        _cx(c2.wire, c2.state, spare_qutrit, XVariant.PLUS2),
        _cx(c1.wire, c1.state, spare_qutrit, XVariant.PLUS2),
    ]


def _emit_lowered(gates: list[GateOp], dims, ancillas, strategy: Strategy,
                  lower_binary_toffolis: bool, spare_qutrit: int | None) -> list[GateOp]:
    """Op sequence for gates sharing one control pattern.

    A single gate gives the standard sandwich / compute / flip /
    uncompute block; several gates with identical controls share one
    compute-uncompute pair and fire one flip each.  ``dims`` are the
    logical wire dimensions before promotion, so control qubits keep
    canonical activation |1> even on a promoted wire.
    """
    controls = gates[0].controls
    qubits = [c for c in controls if dims[c.wire] == 2]
    qutrits = [c for c in controls if dims[c.wire] == 3]
    sandwich = _sandwich_ops(controls, dims)
    if strategy is Strategy.ANCILLA_CHAIN:
        fwd, holder, holder_state = _chain_parts(list(controls), dims, ancillas)
    elif strategy is Strategy.EFFECTIVE_QUTRIT:
        fwd, holder, holder_state = _effective_qutrit_parts(qubits, qutrits, dims, ancillas)
    else:
        fwd, holder, holder_state = _qubit_ancilla_parts(qubits, ancillas)
    mids = [_cx(holder, holder_state, g.target, g.variant) for g in gates]
    bwd = [_invert(op) for op in reversed(fwd)]
    body = fwd + mids + bwd
    if strategy is Strategy.QUBIT_ANCILLA and lower_binary_toffolis:
        expanded = []
        for op in body:
            if len(op.controls) == 2:
                expanded.extend(_lower_binary_toffoli(op, spare_qutrit))
            else:
                expanded.append(op)
        body = expanded
    return sandwich + body + list(reversed(sandwich))


def _classify(gate: GateOp, dims) -> tuple[int, int]:
    n1 = sum(1 for c in gate.controls if dims[c.wire] == 2)
    n2 = len(gate.controls) - n1
    return n1, n2


def lower_circuit(
    circuit: Circuit,
    strategy: Strategy,
    *,
    lower_binary_toffolis: bool = False,
    share_chains: bool = False,
) -> LoweredCircuit:
    """Lower every multi-control gate in a circuit, sharing one ancilla pool.

    Every lowered block restores its ancillas to |0>, so a single pool
    sized for the widest gate serves the whole circuit.  Hadamards on
    promoted wires are re-emitted with subdim=2.  With ``share_chains``,
    consecutive gates with identical controls share one compute and
    uncompute of the control AND, firing one flip each in between; the
    per-gate count formulas then no longer apply.
    """
    dims = list(circuit.spec.dims)
    n_orig = len(dims)
    toffolis = [op for op in circuit.ops if op.num_controls >= 2]
    for op in toffolis:
        op.validate(circuit.spec)

    promoted: set[int] = set()
    pool_qutrits = 0
    pool_qubits = 0
    need_spare = False
    for op in toffolis:
        n1, n2 = _classify(op, dims)
        _check_strategy(n1, n2, strategy)
        nq3, nq2 = ancilla_requirement(n1, n2, strategy)
        pool_qutrits = max(pool_qutrits, nq3)
        pool_qubits = max(pool_qubits, nq2)
        if strategy is Strategy.EFFECTIVE_QUTRIT:
            qubit_wires = [c.wire for c in op.controls if dims[c.wire] == 2]
            promoted.update(qubit_wires[1:])
        if strategy is Strategy.QUBIT_ANCILLA and lower_binary_toffolis:
            need_spare = True

    ext_dims = list(dims)
    for w in promoted:
        ext_dims[w] = 3
    qutrit_pool = [n_orig + i for i in range(pool_qutrits)]
    qubit_pool = [n_orig + pool_qutrits + i for i in range(pool_qubits)]
    spare = None
    ext_dims += [3] * pool_qutrits + [2] * pool_qubits
    logical_dims = list(dims) + [3] * pool_qutrits + [2] * pool_qubits
    if need_spare:
        spare = len(ext_dims)
        ext_dims.append(3)
        logical_dims.append(3)
    roles = circuit.spec.roles
    if roles is not None:
        roles = tuple(roles) + (ROLE_ANCILLA,) * (len(ext_dims) - n_orig)
    ext_spec = WireSpec(tuple(ext_dims), roles)
    ancilla_wires = tuple(range(n_orig, len(ext_dims)))

    ops: list[GateOp] = []
    position = 0
    while position < len(circuit.ops):
        op = circuit.ops[position]
        if op.num_controls >= 2:
            group = [op]
            if share_chains:
                while (
                    position + len(group) < len(circuit.ops)
                    and circuit.ops[position + len(group)].num_controls >= 2
                    and circuit.ops[position + len(group)].controls == op.controls
                ):
                    group.append(circuit.ops[position + len(group)])
            n1, n2 = _classify(op, dims)
            if strategy is Strategy.QUBIT_ANCILLA:
                block_anc = qubit_pool[: n1 - 1]
            elif strategy is Strategy.EFFECTIVE_QUTRIT:
                block_anc = qutrit_pool[:n2]
            else:
                block_anc = qutrit_pool[: n1 + n2 - 1]
            ops.extend(_emit_lowered(group, logical_dims, block_anc, strategy,
                                     lower_binary_toffolis, spare))
            position += len(group)
            continue
        if op.kind == KIND_HADAMARD and op.target in promoted:
            ops.append(GateOp.hadamard(op.target, subdim=2))
        elif op.kind == KIND_X and op.target in promoted and op.variant is XVariant.PLUS1:
            # +1 on the qubit subspace of a promoted wire is the 0<->1 swap
            ops.append(GateOp.x(op.target, XVariant.SWAP01))
        else:
            ops.append(op)
        position += 1

    lowered = Circuit(ext_spec)
    for op in ops:
        lowered.add(op)
    elementary = sum(1 for op in ops if len(op.wires()) <= 2)
    return LoweredCircuit(
        circuit=lowered,
        ancilla_wires=ancilla_wires,
        promoted_wires=tuple(sorted(promoted)),
        elementary_gate_count=elementary,
        toffoli_count=len(ops) - elementary,
    )


def lower_toffoli(
    spec: WireSpec,
    gate: GateOp,
    strategy: Strategy,
    *,
    lower_binary_toffolis: bool = False,
) -> LoweredCircuit:
    """Lower one generalized Toffoli over ``spec`` plus fresh ancillas."""
    gate.validate(spec)
    if gate.num_controls < 2:
        raise TooFewControls(f"lowering needs >= 2 controls, got {gate.num_controls}")
    return lower_circuit(
        Circuit(spec, [gate]), strategy, lower_binary_toffolis=lower_binary_toffolis
    )
