"""Image operations applied to an already-built encoding circuit.

Channel swapping is one X gate on the channel wire.  A single-channel
intensity transform is compiled per pixel from the original image: for
each pixel the trits that differ between old and new value get one
controlled cyclic shift each, sharing the position-plus-channel
controls.
"""
from __future__ import annotations

from enum import Enum
from typing import Callable

from .encoding import CHANNEL_NAMES, RgbImage, intensity_to_trits, pixel_controls
from .errors import InvalidArguments, LayoutMismatch, TransformOutOfRange
from .gates import Circuit, GateOp, XVariant, shift_variant


class ChannelPair(str, Enum):
    RG = "RG"
    RB = "RB"
    GB = "GB"

    @property
    def swap(self) -> XVariant:
        return {
            ChannelPair.RG: XVariant.SWAP01,
            ChannelPair.RB: XVariant.SWAP02,
            ChannelPair.GB: XVariant.SWAP12,
        }[self]


def _channel_wire(circuit: Circuit) -> int:
    roles = circuit.spec.roles
    if roles is None:
        raise LayoutMismatch("circuit carries no wire roles; not an encoding circuit")
    hits = [i for i, role in enumerate(roles) if role == "channel"]
    if len(hits) != 1:
        raise LayoutMismatch(f"expected exactly one channel wire, found {len(hits)}")
    return hits[0]


def _channel_index(channel: str) -> int:
    try:
        return CHANNEL_NAMES.index(channel)
    except ValueError:
        raise InvalidArguments(f"channel must be one of {CHANNEL_NAMES}, got {channel!r}") from None


def channel_swap(circuit: Circuit, pair: ChannelPair) -> Circuit:
    """Append the channel-wire swap exchanging two color channels."""
    out = Circuit(circuit.spec, list(circuit.ops))
    out.add(GateOp.x(_channel_wire(circuit), ChannelPair(pair).swap))
    return out


def one_channel_op(
    circuit: Circuit,
    image: RgbImage,
    channel: str,
    transform: Callable[[int], int],
) -> Circuit:
    """Append gates mapping one channel's value v to transform(v) per pixel."""
    _channel_wire(circuit)  # layout sanity
    c = _channel_index(channel)
    layout = image.layout()
    out = Circuit(circuit.spec, list(circuit.ops))
    for y in range(layout.height):
        for x in range(layout.width):
            old = int(image.pixels[y, x, c])
            new = transform(old)
            if not isinstance(new, int) or not 0 <= new <= 255:
                raise TransformOutOfRange(f"transform({old}) = {new!r} outside 0..255")
            if new == old:
                continue
            controls = pixel_controls(layout, y, x, c)
            old_trits = intensity_to_trits(old)
            new_trits = intensity_to_trits(new)
            for wire, (a, b) in enumerate(zip(old_trits, new_trits)):
                if a != b:
                    out.add(GateOp.controlled_flip(controls, wire, shift_variant(a, b)))
    return out


def invert_transform(value: int) -> int:
    return 255 - value
