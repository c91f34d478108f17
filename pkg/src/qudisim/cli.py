"""Command-line pipeline: encode, simulate, decode, report, ops.

Exit codes: 0 success, 2 input or dimension error, 3 configuration
error, 4 decode failure.  The seed comes from --seed, then the
QUDISIM_SEED environment variable, then 0.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import compress, imgops, plots, ppm, serialize
from .decompose import Strategy, lower_circuit
from .encoding import (
    RgbImage,
    build_encoding_circuit,
    decode,
    encoding_gate_bound,
    representation_gate_counts,
)
from .errors import (
    IncompleteDecode,
    InvalidArguments,
    InvalidDims,
    InvalidStrength,
    LayoutMismatch,
    NoiseOnUnloweredCircuit,
    PpmError,
    QudisimError,
    StrategyInapplicable,
    ValueOutOfRange,
)
from .sim import NoiseModel, ShotHistogram, sample_shots

EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_DECODE = 4

_INPUT_ERRORS = (InvalidDims, PpmError, ValueOutOfRange, LayoutMismatch)
_CONFIG_ERRORS = (
    NoiseOnUnloweredCircuit,
    StrategyInapplicable,
    InvalidStrength,
    InvalidArguments,
)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QUDISIM_SEED")
    if not env:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InvalidArguments(f"QUDISIM_SEED={env!r} is not an integer") from None


def _parse_ops(specs: list[str]):
    """Parse repeated --op flags: swap=RG|RB|GB or invert=R|G|B."""
    parsed = []
    for spec in specs:
        name, _, value = spec.partition("=")
        if name == "swap" and value in ("RG", "RB", "GB"):
            parsed.append(("swap", value))
        elif name == "invert" and value in ("R", "G", "B"):
            parsed.append(("invert", value))
        else:
            raise InvalidArguments(f"unknown --op {spec!r} (use swap=RG or invert=R)")
    return parsed


def _apply_ops(circuit, image, op_specs):
    for name, value in _parse_ops(op_specs):
        if name == "swap":
            circuit = imgops.channel_swap(circuit, imgops.ChannelPair(value))
        else:
            circuit = imgops.one_channel_op(circuit, image, value, imgops.invert_transform)
    return circuit


def cmd_encode(args) -> int:
    try:
        image = RgbImage(ppm.read_ppm(args.image))
    except _INPUT_ERRORS as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        if args.compress:
            circuit, ratio = compress.compressed_encoding_circuit(image)
            print(f"compression_ratio: {ratio:.6f}")
            if args.compress_report:
                with open(args.compress_report, "w") as handle:
                    handle.write("plane,positions,terms,gates\n")
                    for label, npos, nterms, ngates in compress.compression_report(image):
                        handle.write(f"{label},{npos},{nterms},{ngates}\n")
        else:
            circuit = build_encoding_circuit(image)
        circuit = _apply_ops(circuit, image, args.op)
        toffolis = sum(1 for op in circuit.ops if op.num_controls >= 2)
        print(f"wires: {circuit.spec.num_wires}")
        print(f"toffoli_ops: {toffolis}")
        if args.lower:
            lowered = lower_circuit(circuit, Strategy(args.lower),
                                    lower_binary_toffolis=args.lower_toffolis,
                                    share_chains=args.share_chains)
            circuit = lowered.circuit
            print(f"elementary_ops: {lowered.elementary_gate_count}")
            if lowered.toffoli_count:
                print(f"retained_toffolis: {lowered.toffoli_count}")
        print(f"gate_bound: {encoding_gate_bound(image.layout())}")
        serialize.save_circuit(circuit, args.output)
    except _CONFIG_ERRORS as exc:
        return _fail(EXIT_CONFIG, str(exc))
    return 0


def cmd_simulate(args) -> int:
    try:
        circuit = serialize.load_circuit(args.circuit)
    except (OSError, ValueError, QudisimError) as exc:
        return _fail(EXIT_INPUT, f"cannot load circuit: {exc}")
    noise = None
    if args.noise_l1 or args.noise_l2:
        try:
            noise = NoiseModel(args.noise_l1, args.noise_l2)
        except InvalidStrength as exc:
            return _fail(EXIT_CONFIG, str(exc))
    try:
        hist = sample_shots(circuit, args.shots, noise=noise, seed=_seed(args),
                            threads=args.threads)
    except _CONFIG_ERRORS as exc:
        return _fail(EXIT_CONFIG, str(exc))
    hist.to_csv(args.output)
    print(f"shots: {hist.shots}")
    print(f"distinct_outcomes: {len(hist.counts)}")
    if args.plot:
        plots.histogram_figure(hist, args.plot, expected_level=_expected_level(circuit))
    return 0


def _expected_level(circuit) -> float | None:
    """1/(3*M*N) for encoding circuits, recognized by their wire roles.

    Logical position dims come from the role names, since a promoted
    position qubit carries dimension 3 in a lowered circuit.
    """
    roles = circuit.spec.roles
    if roles is None or roles.count("channel") != 1:
        return None
    pixels = 1
    for role in roles:
        if role == "position_qubit":
            pixels *= 2
        elif role == "position_qutrit":
            pixels *= 3
    return 1.0 / (3 * pixels)


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError:
        raise InvalidArguments(f"--dims must look like 3x2, got {text!r}") from None


def cmd_decode(args) -> int:
    try:
        height, width = _parse_dims(args.dims)
        hist = ShotHistogram.from_csv(args.histogram)
        decoded = decode(hist, height, width, threshold=args.threshold)
    except (OSError, ValueError, InvalidArguments, InvalidDims, LayoutMismatch) as exc:
        return _fail(EXIT_INPUT, str(exc))
    if args.diagnostics:
        diag = {
            "shots": decoded.shots,
            "threshold": decoded.threshold,
            "spurious_mass": decoded.spurious_mass,
            "conflicts": decoded.conflicts,
            "channel_coverage": decoded.channel_coverage().tolist(),
        }
        with open(args.diagnostics, "w") as handle:
            json.dump(diag, handle, indent=1)
            handle.write("\n")
    print(f"spurious_mass: {decoded.spurious_mass:.6f}")
    try:
        image = decoded.to_image()
    except IncompleteDecode as exc:
        return _fail(EXIT_DECODE, str(exc))
    ppm.write_ppm(args.output, image.pixels)
    return 0


def cmd_report(args) -> int:
    counts = representation_gate_counts(args.n, args.m)
    print("representation,elementary_gates")
    for name in ("MCQI", "NCQI", "OCQR", "HQDQR"):
        print(f"{name},{counts[name]}")
    if args.plot:
        plots.gate_count_figure(args.m, args.n, args.plot)
    return 0


def cmd_ops(args) -> int:
    try:
        circuit = serialize.load_circuit(args.circuit)
        image = RgbImage(ppm.read_ppm(args.image)) if args.image else None
    except (OSError, ValueError, QudisimError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        parsed = _parse_ops(args.op)
        if any(name == "invert" for name, _ in parsed) and image is None:
            raise InvalidArguments("invert needs --image (the original input image)")
        circuit = _apply_ops(circuit, image, args.op)
    except _CONFIG_ERRORS + (LayoutMismatch,) as exc:
        return _fail(EXIT_CONFIG, str(exc))
    serialize.save_circuit(circuit, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qudisim",
        description="Hybrid qubit-qutrit RGB image encoder, simulator and decoder",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="build an encoding circuit from a PPM image")
    enc.add_argument("image", help="input image (PPM, P3 or P6, maxval 255)")
    enc.add_argument("-o", "--output", required=True, help="circuit JSON path")
    enc.add_argument("--compress", action="store_true",
                     help="minimize position covers before emitting gates")
    enc.add_argument("--compress-report", metavar="CSV",
                     help="write per-plane term counts")
    enc.add_argument("--lower", choices=[s.value for s in Strategy],
                     help="lower multi-control gates to elementary gates")
    enc.add_argument("--lower-toffolis", action="store_true",
                     help="with qubit-ancilla lowering, also expand binary Toffolis")
    enc.add_argument("--share-chains", action="store_true",
                     help="let consecutive gates with identical controls share "
                          "one ancilla-chain computation")
    enc.add_argument("--op", action="append", default=[], metavar="OP",
                     help="image operation, e.g. swap=RG or invert=R (repeatable)")
    enc.set_defaults(func=cmd_encode)

    simp = sub.add_parser("simulate", help="sample measurement shots from a circuit")
    simp.add_argument("circuit", help="circuit JSON path")
    simp.add_argument("-o", "--output", required=True, help="histogram CSV path")
    simp.add_argument("--shots", type=int, default=5000)
    simp.add_argument("--seed", type=int, default=None)
    simp.add_argument("--noise-l1", type=float, default=0.0,
                      help="single-wire depolarizing strength")
    simp.add_argument("--noise-l2", type=float, default=0.0,
                      help="two-wire depolarizing strength")
    simp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    simp.add_argument("--plot", metavar="PNG", help="render the histogram to a figure")
    simp.set_defaults(func=cmd_simulate)

    dec = sub.add_parser("decode", help="rebuild an image from a histogram")
    dec.add_argument("histogram", help="histogram CSV path")
    dec.add_argument("--dims", required=True, help="image dimensions, e.g. 3x2")
    dec.add_argument("-o", "--output", required=True, help="output PPM path")
    dec.add_argument("--threshold", type=int, default=None,
                     help="minimum count for a real outcome")
    dec.add_argument("--diagnostics", metavar="JSON", help="write decode diagnostics")
    dec.set_defaults(func=cmd_decode)

    rep = sub.add_parser("report", help="gate-count comparison of RGB encodings")
    rep.add_argument("--m", type=int, required=True, help="row exponent (rows = 3^m)")
    rep.add_argument("--n", type=int, required=True, help="column exponent (cols = 2^n)")
    rep.add_argument("--plot", metavar="PNG", help="render counts versus n")
    rep.set_defaults(func=cmd_report)

    ops = sub.add_parser("ops", help="apply image operations to a circuit")
    ops.add_argument("circuit", help="circuit JSON path")
    ops.add_argument("-o", "--output", required=True, help="transformed circuit path")
    ops.add_argument("--image", help="original image (needed by invert)")
    ops.add_argument("--op", action="append", default=[], metavar="OP", required=False,
                     help="swap=RG / invert=R, repeatable")
    ops.set_defaults(func=cmd_ops)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        return _fail(EXIT_INPUT, str(exc))
    except QudisimError as exc:
        return _fail(EXIT_CONFIG, str(exc))


if __name__ == "__main__":
    sys.exit(main())
