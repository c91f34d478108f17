"""Circuit JSON round-trip.

Schema:
    {"wires": [{"dim": 2|3, "role": str|null}, ...],
     "ops":   [{"kind": ..., "controls": [{"wire": i, "state": d}, ...],
                "target": i, "variant": str|null, "subdim": 2?}, ...]}

``controls``/``variant``/``subdim`` are omitted where empty or null.
"""
from __future__ import annotations

import json

from .core import WireSpec
from .errors import InvalidArguments
from .gates import KIND_HADAMARD, Circuit, ControlSpec, GateOp, XVariant


def circuit_to_dict(circuit: Circuit) -> dict:
    roles = circuit.spec.roles
    wires = [
        {"dim": dim, "role": roles[i] if roles else None}
        for i, dim in enumerate(circuit.spec.dims)
    ]
    ops = []
    for op in circuit.ops:
        entry: dict = {"kind": op.kind, "target": op.target}
        if op.controls:
            entry["controls"] = [{"wire": c.wire, "state": c.state} for c in op.controls]
        if op.variant is not None:
            entry["variant"] = op.variant.value
        if op.subdim is not None:
            entry["subdim"] = op.subdim
        ops.append(entry)
    return {"wires": wires, "ops": ops}


def circuit_from_dict(data: dict) -> Circuit:
    try:
        wires = data["wires"]
        ops = data["ops"]
    except (KeyError, TypeError):
        raise InvalidArguments("circuit JSON needs 'wires' and 'ops'") from None
    dims = tuple(int(w["dim"]) for w in wires)
    roles = tuple(w.get("role") for w in wires)
    spec = WireSpec(dims, None if all(r is None for r in roles) else
                    tuple(r or "" for r in roles))
    circuit = Circuit(spec)
    for entry in ops:
        kind = entry["kind"]
        controls = tuple(
            ControlSpec(int(c["wire"]), int(c["state"]))
            for c in entry.get("controls", [])
        )
        variant = entry.get("variant")
        if kind == KIND_HADAMARD:
            op = GateOp.hadamard(int(entry["target"]), subdim=entry.get("subdim"))
        else:
            op = GateOp(kind, int(entry["target"]), XVariant(variant), controls)
        circuit.add(op)
    return circuit


def save_circuit(circuit: Circuit, path) -> None:
    with open(path, "w") as handle:
        json.dump(circuit_to_dict(circuit), handle, indent=1)
        handle.write("\n")


def load_circuit(path) -> Circuit:
    with open(path) as handle:
        return circuit_from_dict(json.load(handle))
