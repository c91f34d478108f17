"""Mixed-radix registers and the dense state vector they index.

Wires carry dimension 2 (qubit) or 3 (qutrit).  Digit strings are
big-endian: wire 0 is the most significant digit of a flat index, so a
measured digit string reads left to right in wire order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DigitOutOfRange,
    DimensionTooLarge,
    IndexOutOfRange,
    InvalidArguments,
    NotUnitary,
    ShapeMismatch,
)

#: Hard cap on state-vector length.
MAX_AMPLITUDES = 1 << 28

#: Tolerance for unitarity and norm checks.
ATOL = 1e-10


@dataclass(frozen=True)
class WireSpec:
    """Ordered wire dimensions with optional per-wire role labels."""

    dims: tuple[int, ...]
    roles: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d not in (2, 3) for d in self.dims):
            raise InvalidArguments(f"wire dimensions must be 2 or 3, got {self.dims}")
        if self.roles is not None:
            object.__setattr__(self, "roles", tuple(str(r) for r in self.roles))
            if len(self.roles) != len(self.dims):
                raise InvalidArguments("roles must have one entry per wire")
        total = 1
        for d in self.dims:
            total *= d
            if total > MAX_AMPLITUDES:
                raise DimensionTooLarge(
                    f"register of {self.dims} exceeds the {MAX_AMPLITUDES}-amplitude cap"
                )

    @property
    def num_wires(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        total = 1
        for d in self.dims:
            total *= d
        return total

    def strides(self) -> tuple[int, ...]:
        """Positional weights: flat index = sum(digit[i] * stride[i])."""
        out = []
        acc = 1
        for d in reversed(self.dims):
            out.append(acc)
            acc *= d
        return tuple(reversed(out))


def digits_to_index(digits: Sequence[int], spec: WireSpec) -> int:
    """Fold big-endian digits into a flat index."""
    if len(digits) != spec.num_wires:
        raise InvalidArguments(f"expected {spec.num_wires} digits, got {len(digits)}")
    index = 0
    for digit, dim in zip(digits, spec.dims):
        if not 0 <= digit < dim:
            raise DigitOutOfRange(f"digit {digit} out of range for dimension-{dim} wire")
        index = index * dim + digit
    return index


def index_to_digits(index: int, spec: WireSpec) -> tuple[int, ...]:
    """Inverse of :func:`digits_to_index`."""
    if not 0 <= index < spec.total_dim:
        raise IndexOutOfRange(f"index {index} out of range for total dimension {spec.total_dim}")
    digits = []
    for dim in reversed(spec.dims):
        index, digit = divmod(index, dim)
        digits.append(digit)
    return tuple(reversed(digits))


def digit_string(index: int, spec: WireSpec) -> str:
    """Render a flat index as one character per wire, wire 0 first."""
    return "".join(str(d) for d in index_to_digits(index, spec))


@dataclass(eq=False)
class MixedRadixState:
    """Complex amplitudes over the product space of a :class:`WireSpec`.

    Value-semantic: operations return new states and never alias the
    input amplitude buffer.
    """

    spec: WireSpec
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.spec.total_dim,):
            raise ShapeMismatch(
                f"amplitude vector of shape {self.amplitudes.shape} does not match "
                f"total dimension {self.spec.total_dim}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "MixedRadixState":
        return MixedRadixState(self.spec, self.amplitudes.copy())


def new_zero_state(spec: WireSpec) -> MixedRadixState:
    """All wires in digit 0."""
    amps = np.zeros(spec.total_dim, dtype=complex)
    amps[0] = 1.0
    return MixedRadixState(spec, amps)


def apply_unitary_to_array(
    amps: np.ndarray,
    dims: Sequence[int],
    wires: Sequence[int],
    matrix: np.ndarray,
    *,
    check_unitary: bool = True,
) -> np.ndarray:
    """Apply ``matrix`` to the listed wires of a flat array.

    ``amps`` may be a vector of length prod(dims) or a matrix whose first
    axis has that length (columns evolve independently).  The matrix acts
    on the wires in the order they are listed.
    """
    dims = tuple(int(d) for d in dims)
    wires = [int(w) for w in wires]
    nwires = len(dims)
    if len(set(wires)) != len(wires):
        raise InvalidArguments(f"duplicate wires in {wires}")
    if any(w < 0 or w >= nwires for w in wires):
        raise InvalidArguments(f"wire index out of range in {wires} for {nwires} wires")
    sub = 1
    for w in wires:
        sub *= dims[w]
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (sub, sub):
        raise ShapeMismatch(f"matrix shape {matrix.shape} does not match wire dims product {sub}")
    if check_unitary:
        dev = np.max(np.abs(matrix @ matrix.conj().T - np.eye(sub)))
        if dev > ATOL:
            raise NotUnitary(f"matrix deviates from unitarity by {dev:.3e}")

    amps = np.asarray(amps, dtype=complex)
    total = 1
    for d in dims:
        total *= d
    if amps.shape[0] != total:
        raise ShapeMismatch(f"array leading dimension {amps.shape[0]} != total dimension {total}")
    tail = amps.shape[1:]

    tensor = amps.reshape(dims + tail)
    dest = list(range(len(wires)))
    tensor = np.moveaxis(tensor, wires, dest)
    rest = tensor.shape[len(wires):]
    flat = matrix @ tensor.reshape(sub, -1)
    tensor = flat.reshape(tuple(dims[w] for w in wires) + rest)
    tensor = np.moveaxis(tensor, dest, wires)
    return np.ascontiguousarray(tensor.reshape(amps.shape))


def apply_local_unitary(
    state: MixedRadixState, wires: Sequence[int], matrix: np.ndarray
) -> MixedRadixState:
    """Apply a unitary to selected wires, identity elsewhere."""
    out = apply_unitary_to_array(state.amplitudes, state.spec.dims, wires, matrix)
    return MixedRadixState(state.spec, out)
