"""Encoding compression by minimizing position covers per intensity plane.

For each (channel, trit significance, trit value) plane, the set of
pixel positions is covered by product terms over the position digits
(binary or ternary variables).  Adjacent terms - identical except in
one variable - merge their literal sets there; a variable whose literal
set reaches its full domain drops out of the control list.  Merging
starts from disjoint singletons and unions disjoint boxes, so the final
terms still partition the plane: every position is flipped exactly
once, which is what keeps the compressed circuit equivalent.

The result is not guaranteed globally minimal, only never larger than
the one-term-per-position cover.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .encoding import (
    RegisterLayout,
    RgbImage,
    _stage1,
    intensity_to_trits,
)
from .errors import InvalidArguments
from .gates import Circuit, ControlSpec, GateOp, XVariant


@dataclass(frozen=True)
class ProductTerm:
    """Per-variable literal sets; a full-domain set is a don't-care."""

    literals: tuple[frozenset[int], ...]

    def covers(self, digits) -> bool:
        return all(d in lits for d, lits in zip(digits, self.literals))

    def expand(self) -> set[tuple[int, ...]]:
        return set(product(*[sorted(lits) for lits in self.literals]))

    def sort_key(self):
        return tuple(tuple(sorted(lits)) for lits in self.literals)


@dataclass
class Cover:
    """Disjoint product terms over the position variables of one plane."""

    terms: list[ProductTerm]
    domains: tuple[int, ...]
    context: tuple[int, int, int] | None = None  # (channel, trit index, value)

    def positions(self) -> set[tuple[int, ...]]:
        out: set[tuple[int, ...]] = set()
        for term in self.terms:
            out |= term.expand()
        return out


def bitplanes(image: RgbImage) -> dict[tuple[int, int, int], set[tuple[int, int]]]:
    """(channel, trit significance, value in {1,2}) -> pixel positions."""
    planes: dict[tuple[int, int, int], set[tuple[int, int]]] = {}
    for y in range(image.height):
        for x in range(image.width):
            for channel in range(3):
                trits = intensity_to_trits(int(image.pixels[y, x, channel]))
                for sig in range(6):
                    value = trits[5 - sig]
                    if value:
                        planes.setdefault((channel, sig, value), set()).add((y, x))
    return planes


def _position_domains(layout: RegisterLayout) -> tuple[int, ...]:
    return (layout.y_dim,) * layout.m + (layout.x_dim,) * layout.n


def minimize_cover(positions, layout: RegisterLayout) -> Cover:
    """Merge position singletons into an exact disjoint cover."""
    domains = _position_domains(layout)
    for (y, x) in positions:
        if not (0 <= y < layout.height and 0 <= x < layout.width):
            raise InvalidArguments(f"position ({y},{x}) outside the image grid")
    terms = [
        ProductTerm(tuple(frozenset((d,)) for d in layout.position_digits(y, x)))
        for (y, x) in sorted(positions)
    ]
    changed = True
    while changed:
        changed = False
        terms.sort(key=ProductTerm.sort_key)
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                merged = _try_merge(terms[i], terms[j])
                if merged is not None:
                    terms[i] = merged
                    del terms[j]
                    changed = True
                    break
            if changed:
                break
    terms.sort(key=ProductTerm.sort_key)
    return Cover(terms, domains)


def _try_merge(a: ProductTerm, b: ProductTerm) -> ProductTerm | None:
    diff = None
    for v, (la, lb) in enumerate(zip(a.literals, b.literals)):
        if la != lb:
            if diff is not None:
                return None
            diff = v
    if diff is None:
        return None
    if a.literals[diff] & b.literals[diff]:
        return None  # overlapping boxes never arise from disjoint input
    merged = list(a.literals)
    merged[diff] = a.literals[diff] | b.literals[diff]
    return ProductTerm(tuple(merged))


def term_gates(
    term: ProductTerm, layout: RegisterLayout, channel: int, target_wire: int, flip: XVariant
) -> list[GateOp]:
    """Emit the controlled flips for one term.

    A full-domain variable contributes no control; a partial multi-digit
    literal set is expanded one gate per digit (controls carry a single
    activation digit each).
    """
    domains = _position_domains(layout)
    position_wires = layout.y_wires + layout.x_wires
    choices = []
    for wire, lits, dom in zip(position_wires, term.literals, domains):
        if len(lits) == dom:
            continue
        choices.append([(wire, d) for d in sorted(lits)])
    gates = []
    for combo in product(*choices):
        controls = [ControlSpec(w, d) for w, d in combo]
        controls.append(ControlSpec(layout.channel_wire, channel))
        gates.append(GateOp.controlled_flip(controls, target_wire, flip))
    return gates


def compressed_encoding_circuit(image: RgbImage) -> tuple[Circuit, float]:
    """Minimized encoding circuit and its compression ratio.

    ratio = 1 - emitted flips / uncompressed flips (0/0 gives 0).
    """
    layout = image.layout()
    circuit = Circuit(layout.wire_spec())
    _stage1(circuit, layout)
    planes = bitplanes(image)
    uncompressed = sum(len(p) for p in planes.values())
    emitted = 0
    for channel in range(3):
        for sig in range(5, -1, -1):
            for value in (1, 2):
                positions = planes.get((channel, sig, value))
                if not positions:
                    continue
                cover = minimize_cover(positions, layout)
                flip = XVariant.PLUS1 if value == 1 else XVariant.PLUS2
                target = layout.intensity_wire(sig)
                for term in cover.terms:
                    for gate in term_gates(term, layout, channel, target, flip):
                        circuit.add(gate)
                        emitted += 1
    ratio = 0.0 if uncompressed == 0 else 1.0 - emitted / uncompressed
    return circuit, ratio


def compression_report(image: RgbImage) -> list[tuple[str, int, int, int]]:
    """Per-plane rows (plane label, positions, terms, gates) for the CLI."""
    layout = image.layout()
    planes = bitplanes(image)
    rows = []
    for channel in range(3):
        for sig in range(5, -1, -1):
            for value in (1, 2):
                positions = planes.get((channel, sig, value))
                if not positions:
                    continue
                cover = minimize_cover(positions, layout)
                gates = sum(
                    len(term_gates(t, layout, channel, layout.intensity_wire(sig),
                                   XVariant.PLUS1))
                    for t in cover.terms
                )
                label = f"{'RGB'[channel]}:t{sig}={value}"
                rows.append((label, len(positions), len(cover.terms), gates))
    return rows
