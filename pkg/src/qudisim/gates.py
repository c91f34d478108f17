"""Gate matrices and symbolic circuit operations.

The X family on a qutrit has six members: the identity, the two cyclic
shifts |x> -> |x+1 mod 3> and |x> -> |x+2 mod 3>, and the three pair
swaps.  On a qubit wire only the identity and the 0<->1 flip exist.
Controlled gates are block permutations: identity on every control
digit except the activation digit, whose block carries the flip.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import reduce

import numpy as np

from .core import WireSpec
from .errors import (
    InvalidArguments,
    InvalidControlState,
    InvalidFlipVariant,
    UnsupportedDimension,
)

KIND_X = "x"
KIND_HADAMARD = "hadamard"
KIND_CONTROLLED_X = "controlled_x"
KIND_TOFFOLI = "toffoli"


class XVariant(str, Enum):
    """The six single-qutrit X gates (PLUS0 is the identity)."""

    PLUS0 = "plus0"
    PLUS1 = "plus1"
    PLUS2 = "plus2"
    SWAP01 = "swap01"
    SWAP12 = "swap12"
    SWAP02 = "swap02"

    def permutation(self, dim: int) -> tuple[int, ...]:
        """Digit map of the gate: digit d goes to permutation[d]."""
        if dim == 3:
            return _QUTRIT_PERMS[self]
        if dim == 2:
            if self is XVariant.PLUS0:
                return (0, 1)
            if self in (XVariant.PLUS1, XVariant.SWAP01):
                return (1, 0)
            raise InvalidFlipVariant(f"{self.value} is undefined on a qubit wire")
        raise UnsupportedDimension(f"no X family for dimension {dim}")

    def matrix(self, dim: int = 3) -> np.ndarray:
        perm = self.permutation(dim)
        mat = np.zeros((dim, dim), dtype=complex)
        for col, row in enumerate(perm):
            mat[row, col] = 1.0
        return mat

    @property
    def inverse(self) -> "XVariant":
        if self is XVariant.PLUS1:
            return XVariant.PLUS2
        if self is XVariant.PLUS2:
            return XVariant.PLUS1
        return self

    @property
    def is_identity(self) -> bool:
        return self is XVariant.PLUS0


_QUTRIT_PERMS = {
    XVariant.PLUS0: (0, 1, 2),
    XVariant.PLUS1: (1, 2, 0),
    XVariant.PLUS2: (2, 0, 1),
    XVariant.SWAP01: (1, 0, 2),
    XVariant.SWAP12: (0, 2, 1),
    XVariant.SWAP02: (2, 1, 0),
}

_SWAPS = {
    frozenset((0, 1)): XVariant.SWAP01,
    frozenset((1, 2)): XVariant.SWAP12,
    frozenset((0, 2)): XVariant.SWAP02,
}


def swap_variant(a: int, b: int) -> XVariant:
    """The self-inverse X gate exchanging digits a and b (identity if equal)."""
    if a == b:
        return XVariant.PLUS0
    try:
        return _SWAPS[frozenset((a, b))]
    except KeyError:
        raise InvalidFlipVariant(f"no swap between digits {a} and {b}") from None


def shift_variant(frm: int, to: int) -> XVariant:
    """The cyclic qutrit shift taking digit ``frm`` to digit ``to``."""
    return (XVariant.PLUS0, XVariant.PLUS1, XVariant.PLUS2)[(to - frm) % 3]


def ternary_x_matrix(variant: XVariant) -> np.ndarray:
    """3x3 permutation matrix of one of the six qutrit X gates."""
    return variant.matrix(3)


def hadamard_matrix(dim: int) -> np.ndarray:
    """Discrete-Fourier Hadamard on a qubit (dim 2) or qutrit (dim 3)."""
    if dim == 2:
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    if dim == 3:
        w = np.exp(2j * np.pi / 3)
        return np.array(
            [[1, 1, 1], [1, w, w.conjugate()], [1, w.conjugate(), w]], dtype=complex
        ) / np.sqrt(3)
    raise UnsupportedDimension(f"no Hadamard for dimension {dim}")


def controlled_x_matrix(
    control_dim: int, control_state: int, target_dim: int, flip: XVariant
) -> np.ndarray:
    """Two-wire controlled flip, control digit most significant.

    Block diagonal: identity on every control digit except
    ``control_state``, whose block is the flip matrix.
    """
    if control_dim not in (2, 3) or target_dim not in (2, 3):
        raise UnsupportedDimension(f"dims ({control_dim},{target_dim}) unsupported")
    if not 0 <= control_state < control_dim:
        raise InvalidControlState(
            f"control state {control_state} invalid on a dimension-{control_dim} wire"
        )
    flip_mat = flip.matrix(target_dim)
    size = control_dim * target_dim
    mat = np.zeros((size, size), dtype=complex)
    for c in range(control_dim):
        block = flip_mat if c == control_state else np.eye(target_dim)
        mat[c * target_dim:(c + 1) * target_dim, c * target_dim:(c + 1) * target_dim] = block
    return mat


@dataclass(frozen=True)
class ControlSpec:
    """A control wire together with its activation digit."""

    wire: int
    state: int


@dataclass(frozen=True)
class GateOp:
    """One named gate application.

    ``subdim`` marks a Hadamard that acts on the lowest ``subdim`` levels
    of its wire and leaves higher levels alone; it is set when a qubit
    wire has been promoted to a qutrit by the effective-qutrit lowering.
    """

    kind: str
    target: int
    variant: XVariant | None = None
    controls: tuple[ControlSpec, ...] = ()
    subdim: int | None = None

    @staticmethod
    def x(target: int, variant: XVariant) -> "GateOp":
        return GateOp(KIND_X, target, variant)

    @staticmethod
    def hadamard(target: int, subdim: int | None = None) -> "GateOp":
        return GateOp(KIND_HADAMARD, target, subdim=subdim)

    @staticmethod
    def controlled_flip(
        controls: tuple[ControlSpec, ...] | list[ControlSpec],
        target: int,
        variant: XVariant,
    ) -> "GateOp":
        """X (no controls), controlled-X (one) or generalized Toffoli (more)."""
        controls = tuple(controls)
        if not controls:
            return GateOp.x(target, variant)
        kind = KIND_CONTROLLED_X if len(controls) == 1 else KIND_TOFFOLI
        return GateOp(kind, target, variant, controls)

    def wires(self) -> tuple[int, ...]:
        return tuple(c.wire for c in self.controls) + (self.target,)

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    def validate(self, spec: WireSpec) -> None:
        wires = self.wires()
        if len(set(wires)) != len(wires):
            raise InvalidArguments(f"controls and target must be distinct wires, got {wires}")
        for w in wires:
            if not 0 <= w < spec.num_wires:
                raise InvalidArguments(f"wire {w} out of range for {spec.num_wires}-wire circuit")
        if self.kind == KIND_HADAMARD:
            if self.variant is not None or self.controls:
                raise InvalidArguments("hadamard takes no variant and no controls")
            if self.subdim is not None and (
                self.subdim != 2 or spec.dims[self.target] != 3
            ):
                raise InvalidArguments("subdim is only meaningful as 2 on a qutrit wire")
            return
        if self.kind not in (KIND_X, KIND_CONTROLLED_X, KIND_TOFFOLI):
            raise InvalidArguments(f"unknown gate kind {self.kind!r}")
        if self.subdim is not None:
            raise InvalidArguments("subdim only applies to hadamard gates")
        expected = {KIND_X: 0, KIND_CONTROLLED_X: 1}.get(self.kind)
        if expected is not None and len(self.controls) != expected:
            raise InvalidArguments(f"{self.kind} requires exactly {expected} control(s)")
        if self.kind == KIND_TOFFOLI and len(self.controls) < 2:
            raise InvalidArguments("toffoli requires at least two controls")
        if self.variant is None:
            raise InvalidArguments(f"{self.kind} requires an X variant")
        self.variant.permutation(spec.dims[self.target])  # raises if invalid
        for ctrl in self.controls:
            if not 0 <= ctrl.state < spec.dims[ctrl.wire]:
                raise InvalidControlState(
                    f"control state {ctrl.state} invalid on dimension-{spec.dims[ctrl.wire]} "
                    f"wire {ctrl.wire}"
                )


def gate_unitary(op: GateOp, spec: WireSpec) -> np.ndarray:
    """Matrix of ``op`` over its own wires, controls first then target.

    For flips: P (x) X + (I - P) (x) I, where P projects every control
    onto its activation digit.
    """
    op.validate(spec)
    target_dim = spec.dims[op.target]
    if op.kind == KIND_HADAMARD:
        base = hadamard_matrix(op.subdim or target_dim)
        if op.subdim is not None and op.subdim < target_dim:
            mat = np.eye(target_dim, dtype=complex)
            mat[: op.subdim, : op.subdim] = base
            return mat
        return base

    flip = op.variant.matrix(target_dim)
    projectors = []
    for ctrl in op.controls:
        dim = spec.dims[ctrl.wire]
        proj = np.zeros((dim, dim), dtype=complex)
        proj[ctrl.state, ctrl.state] = 1.0
        projectors.append(proj)
    match = reduce(np.kron, projectors, np.eye(1, dtype=complex))
    ident = np.eye(match.shape[0], dtype=complex)
    return np.kron(match, flip) + np.kron(ident - match, np.eye(target_dim, dtype=complex))


@dataclass
class Circuit:
    """An ordered gate list over a fixed wire layout."""

    spec: WireSpec
    ops: list[GateOp] = field(default_factory=list)

    def add(self, op: GateOp) -> None:
        op.validate(self.spec)
        self.ops.append(op)

    def validate(self) -> None:
        for op in self.ops:
            op.validate(self.spec)

    def __len__(self) -> int:
        return len(self.ops)
