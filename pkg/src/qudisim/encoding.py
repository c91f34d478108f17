"""RGB image encoding into a hybrid qubit-qutrit register, and back.

Register layout (wire 0 first, most significant digit first):

    6 intensity qutrits | 1 channel qutrit | m row digits | n column digits

The channel digit means 0=R, 1=G, 2=B.  Intensity is the base-3
expansion of the 0..255 channel value, most significant trit on wire 0.
Row and column registers use radix 3 or 2 depending on whether the
image extent is a power of 3 or of 2 (1 is allowed and uses no wires).

The encoded state places amplitude 1/sqrt(3*M*N) on exactly one basis
state per (pixel, channel): |intensity trits>|channel>|row,col>.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MixedRadixState, WireSpec, digits_to_index
from .decompose import Strategy, lower_circuit
from .errors import (
    InvalidArguments,
    InvalidDims,
    LayoutMismatch,
    ValueOutOfRange,
)
from .gates import Circuit, ControlSpec, GateOp, XVariant
from .sim import ShotHistogram

CHANNEL_NAMES = ("R", "G", "B")

ROLE_CHANNEL = "channel"
ROLE_POSITION_QUBIT = "position_qubit"
ROLE_POSITION_QUTRIT = "position_qutrit"

_INTENSITY_WIRES = 6


def intensity_to_trits(value: int) -> tuple[int, ...]:
    """Base-3 digits of a 0..255 value, most significant first."""
    if not 0 <= value <= 255:
        raise ValueOutOfRange(f"intensity {value} outside 0..255")
    digits = []
    for _ in range(_INTENSITY_WIRES):
        value, digit = divmod(value, 3)
        digits.append(digit)
    return tuple(reversed(digits))


def trits_to_intensity(trits) -> int:
    """Inverse of :func:`intensity_to_trits`; may exceed 255 for raw digits."""
    if len(trits) != _INTENSITY_WIRES:
        raise InvalidArguments(f"expected {_INTENSITY_WIRES} trits, got {len(trits)}")
    value = 0
    for t in trits:
        if not 0 <= t <= 2:
            raise InvalidArguments(f"trit {t} outside 0..2")
        value = value * 3 + t
    return value


def _radix_exponent(extent: int) -> tuple[int | None, int]:
    """(radix, exponent) with radix None when extent == 1."""
    if extent < 1:
        return None, -1
    if extent == 1:
        return None, 0
    for radix in (3, 2):
        e, v = 0, extent
        while v % radix == 0:
            v //= radix
            e += 1
        if v == 1:
            return radix, e
    return None, -1


@dataclass(frozen=True)
class RegisterLayout:
    """Wire layout for an M x N image."""

    height: int
    width: int
    m: int                  # row digits
    n: int                  # column digits
    y_dim: int | None       # row radix (None when m == 0)
    x_dim: int | None

    @staticmethod
    def for_dims(height: int, width: int) -> "RegisterLayout":
        y_dim, m = _radix_exponent(height)
        x_dim, n = _radix_exponent(width)
        if m < 0 or n < 0:
            raise InvalidDims(
                f"image dims {height}x{width} unsupported: each extent must be a power "
                f"of 3 or of 2 (rows-of-3 x cols-of-2, all powers of 2, or all powers of 3)"
            )
        return RegisterLayout(height, width, m, n, y_dim, x_dim)

    @property
    def num_wires(self) -> int:
        return _INTENSITY_WIRES + 1 + self.m + self.n

    @property
    def channel_wire(self) -> int:
        return _INTENSITY_WIRES

    @property
    def intensity_wires(self) -> tuple[int, ...]:
        return tuple(range(_INTENSITY_WIRES))

    @property
    def y_wires(self) -> tuple[int, ...]:
        return tuple(range(_INTENSITY_WIRES + 1, _INTENSITY_WIRES + 1 + self.m))

    @property
    def x_wires(self) -> tuple[int, ...]:
        start = _INTENSITY_WIRES + 1 + self.m
        return tuple(range(start, start + self.n))

    def intensity_wire(self, trit_index: int) -> int:
        """Wire holding the trit of significance 3**trit_index."""
        if not 0 <= trit_index < _INTENSITY_WIRES:
            raise InvalidArguments(f"trit index {trit_index} outside 0..5")
        return _INTENSITY_WIRES - 1 - trit_index

    def wire_spec(self) -> WireSpec:
        dims = [3] * _INTENSITY_WIRES + [3]
        roles = [f"intensity{5 - i}" for i in range(_INTENSITY_WIRES)] + [ROLE_CHANNEL]
        for _ in range(self.m):
            dims.append(self.y_dim)
            roles.append(ROLE_POSITION_QUTRIT if self.y_dim == 3 else ROLE_POSITION_QUBIT)
        for _ in range(self.n):
            dims.append(self.x_dim)
            roles.append(ROLE_POSITION_QUTRIT if self.x_dim == 3 else ROLE_POSITION_QUBIT)
        return WireSpec(tuple(dims), tuple(roles))

    def position_digits(self, y: int, x: int) -> tuple[int, ...]:
        digits = []
        v = y
        for _ in range(self.m):
            v, d = divmod(v, self.y_dim)
            digits.append(d)
        row = tuple(reversed(digits))
        digits = []
        v = x
        for _ in range(self.n):
            v, d = divmod(v, self.x_dim)
            digits.append(d)
        return row + tuple(reversed(digits))

    def parse_position(self, digits) -> tuple[int, int]:
        y = 0
        for d in digits[: self.m]:
            y = y * self.y_dim + d
        x = 0
        for d in digits[self.m:]:
            x = x * self.x_dim + d
        return y, x


def layout_for(height: int, width: int) -> RegisterLayout:
    return RegisterLayout.for_dims(height, width)


@dataclass(eq=False)
class RgbImage:
    """M x N 8-bit RGB raster whose extents fit a supported radix pattern."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise InvalidDims(f"pixel array must be (M, N, 3), got {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueOutOfRange("channel values must lie in 0..255")
        self.pixels = arr.astype(np.int64)
        layout_for(arr.shape[0], arr.shape[1])  # raises InvalidDims if unsupported

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def layout(self) -> RegisterLayout:
        return layout_for(self.height, self.width)

    def __eq__(self, other) -> bool:
        return isinstance(other, RgbImage) and np.array_equal(self.pixels, other.pixels)


def demo_image() -> RgbImage:
    """3x2 demo image; every channel value has five nonzero trits."""
    return RgbImage(np.array([
        [(121, 122, 124), (125, 130, 131)],
        [(133, 134, 148), (149, 151, 152)],
        [(157, 158, 160), (161, 202, 203)],
    ]))


def _stage1(circuit: Circuit, layout: RegisterLayout) -> None:
    for w in layout.y_wires:
        circuit.add(GateOp.hadamard(w))
    for w in layout.x_wires:
        circuit.add(GateOp.hadamard(w))
    circuit.add(GateOp.hadamard(layout.channel_wire))


def pixel_controls(layout: RegisterLayout, y: int, x: int, channel: int) -> list[ControlSpec]:
    """Position-plus-channel control list selecting one (pixel, channel) branch."""
    pos = layout.position_digits(y, x)
    controls = [
        ControlSpec(w, d) for w, d in zip(layout.y_wires + layout.x_wires, pos)
    ]
    controls.append(ControlSpec(layout.channel_wire, channel))
    return controls


def build_encoding_circuit(image: RgbImage, lower: Strategy | None = None) -> Circuit:
    """Hadamard stage plus one controlled flip per nonzero intensity trit.

    With ``lower`` given, every multi-control gate is replaced by its
    lowered sequence over a shared ancilla pool.
    """
    layout = image.layout()
    circuit = Circuit(layout.wire_spec())
    _stage1(circuit, layout)
    for y in range(layout.height):
        for x in range(layout.width):
            for channel in range(3):
                trits = intensity_to_trits(int(image.pixels[y, x, channel]))
                controls = pixel_controls(layout, y, x, channel)
                for wire_offset, trit in enumerate(trits):
                    if trit == 0:
                        continue
                    flip = XVariant.PLUS1 if trit == 1 else XVariant.PLUS2
                    circuit.add(GateOp.controlled_flip(controls, wire_offset, flip))
    if lower is not None:
        return lower_circuit(circuit, lower).circuit
    return circuit


def expected_state(image: RgbImage) -> MixedRadixState:
    """Analytic encoded state: 3*M*N equal amplitudes, zero elsewhere."""
    layout = image.layout()
    spec = layout.wire_spec()
    amps = np.zeros(spec.total_dim, dtype=complex)
    amp = 1.0 / np.sqrt(3 * layout.height * layout.width)
    for y in range(layout.height):
        for x in range(layout.width):
            pos = layout.position_digits(y, x)
            for channel in range(3):
                trits = intensity_to_trits(int(image.pixels[y, x, channel]))
                digits = trits + (channel,) + pos
                amps[digits_to_index(digits, spec)] = amp
    return MixedRadixState(spec, amps)


def default_threshold(shots: int, height: int, width: int) -> int:
    """Separates true outcomes (about shots/(3MN)) from stray noise hits."""
    return max(2, shots // (30 * height * width))


@dataclass
class DecodedImage:
    """Decoder output: per-channel values (-1 when unobserved) + diagnostics."""

    values: np.ndarray          # (M, N, 3), -1 for missing
    spurious_mass: float
    threshold: int
    shots: int
    conflicts: int

    @property
    def complete(self) -> bool:
        return bool((self.values >= 0).all())

    def channel_coverage(self) -> np.ndarray:
        """Observed channels per pixel, 0..3."""
        return (self.values >= 0).sum(axis=2)

    def to_image(self) -> RgbImage:
        from .errors import IncompleteDecode

        if not self.complete:
            missing = int((self.values < 0).sum())
            raise IncompleteDecode(f"{missing} pixel channels unobserved above threshold")
        return RgbImage(self.values)


def decode(
    histogram: ShotHistogram,
    height: int,
    width: int,
    threshold: int | None = None,
) -> DecodedImage:
    """Rebuild an image from measured digit strings.

    Outcomes below threshold, with out-of-range digits, nonzero ancilla
    digits, an intensity above 255, or losing a duplicate conflict all
    count toward the spurious mass.
    """
    layout = layout_for(height, width)
    spec = layout.wire_spec()
    if threshold is None:
        threshold = default_threshold(histogram.shots, height, width)

    best: dict[tuple[int, int, int], tuple[int, int]] = {}  # (y,x,c) -> (count, value)
    conflicts = 0
    accepted_mass = 0

    entries = []
    for outcome, count in histogram.counts.items():
        if count < threshold:
            continue
        if len(outcome) < layout.num_wires:
            raise LayoutMismatch(
                f"outcome {outcome!r} shorter than the {layout.num_wires}-wire layout"
            )
        digits = [int(ch) for ch in outcome]
        if any(d != 0 for d in digits[layout.num_wires:]):
            continue  # ancilla left excited: noise artifact
        digits = digits[: layout.num_wires]
        if any(d >= dim for d, dim in zip(digits, spec.dims)):
            continue
        value = trits_to_intensity(digits[:_INTENSITY_WIRES])
        if value > 255:
            continue
        channel = digits[layout.channel_wire]
        y, x = layout.parse_position(digits[_INTENSITY_WIRES + 1:])
        entries.append((count, y, x, channel, value))

    # highest count wins a slot; ties break toward the smaller value
    for count, y, x, channel, value in sorted(entries, key=lambda e: (-e[0], e[4])):
        key = (y, x, channel)
        if key in best:
            conflicts += 1
        else:
            best[key] = (count, value)
            accepted_mass += count

    values = np.full((height, width, 3), -1, dtype=np.int64)
    for (y, x, channel), (_, value) in best.items():
        values[y, x, channel] = value

    spurious = 0.0
    if histogram.shots:
        spurious = 1.0 - accepted_mass / histogram.shots
    return DecodedImage(values, spurious, threshold, histogram.shots, conflicts)


def representation_gate_counts(n: int, m: int) -> dict[str, int]:
    """Closed-form elementary-gate totals for the four RGB encodings.

    The first three assume a 2^n x 2^n image; the last a 3^m x 2^n one.
    Formulas are evaluated verbatim, including degenerate small n.
    """
    if n < 0 or m < 0:
        raise InvalidArguments("n and m must be non-negative")
    return {
        "MCQI": 24 * 2 ** (4 * n) - 9 * 2 ** (2 * n) + 2 * n + 2,
        "NCQI": 2 * n + 24 * 2 ** (2 * n) * 48 * (n - 1),
        "OCQR": 2 * n + 2 + 24 * 2 ** (2 * n) * 48 * n,
        "HQDQR": m + n + 1 + 18 * (2 ** n * 3 ** m) * (6 * (m + n) + 3),
    }


def encoding_gate_bound(layout: RegisterLayout) -> int:
    """Worst-case elementary gates to encode an image on this layout."""
    p = layout.m + layout.n
    return p + 1 + 18 * layout.height * layout.width * (6 * p + 3)
