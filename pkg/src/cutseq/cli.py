"""Command line front end with versioned JSON reports.

Every invocation prints one envelope on standard output: the schema
tag, the echoed canonical inputs, operation specific outputs, and a
list of diagnostic strings.  Identical arguments produce byte-identical
bytes; the only state consulted is the CUTSEQ_PRECISION variable.  With
no subcommand, JSON requests are read from standard input, one per
line, each answered with its own envelope.

Exit codes: 0 on success, 2 for invalid input or usage, 3 when a
search is inconclusive (equivalence within the depth bound).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from mpmath import mp

from ._precision import working_precision
from .cf import (
    Digit,
    DigitStream,
    cf_evaluate,
    ecf_expand,
    eecf_expand,
    gcf_expand,
    ocf_expand,
    rcf_expand,
    validate_stream,
)
from .convert import rcf_to_ecf, rcf_to_gcf, rcf_to_ocf
from .dynamics import (
    SYSTEMS,
    NotWithinBound,
    birkhoff_average,
    check_invariance,
    closed_length,
    equivalent,
    measure_mass,
    purely_periodic_ecf,
    purely_periodic_ocf,
)
from .exact import Mat2, Surd, classify_subgroup
from .geodesic import (
    OrientedGeodesic,
    cutting_sequence,
    in_section,
    lift_to_section,
    parse_cutting_sequence,
    word_text,
)
from .render import render_svg

__all__ = ["SCHEMA_VERSION", "main"]

SCHEMA_VERSION = "cutseq/1"

_DECIMAL_DIGITS = 30
_EXPANDERS = {
    "rcf": rcf_expand,
    "ocf": ocf_expand,
    "gcf": gcf_expand,
    "ecf": ecf_expand,
    "eecf": eecf_expand,
}
_CONVERTERS = {"ocf": rcf_to_ocf, "gcf": rcf_to_gcf, "ecf": rcf_to_ecf}


def _report(command: str, inputs: dict, outputs: dict, diagnostics: Sequence[str]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "diagnostics": list(diagnostics),
    }


def _decimal(value: mp.mpf) -> str:
    return mp.nstr(value, _DECIMAL_DIGITS)


def _literal(value) -> str:
    if isinstance(value, Surd):
        return value.literal()
    return str(Fraction(value))


def _parse_exact(text: str) -> Surd:
    return Surd.parse(text)


def _digit_pairs(obj) -> tuple[Digit, ...]:
    if not isinstance(obj, (list, tuple)):
        raise ValueError("digits must be a JSON array of [a, eps] pairs")
    digits = []
    for item in obj:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise ValueError(f"digit {item!r} is not an [a, eps] pair")
        a, eps = item
        if not (isinstance(a, int) and isinstance(eps, int)):
            raise ValueError(f"digit {item!r} must hold integers")
        digits.append(Digit(a, eps))
    return tuple(digits)


def _stream_from_json(obj) -> DigitStream:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError('streams are JSON objects with "kind", "preperiod", "period"')
    leading = obj.get("leading")
    stream = DigitStream(
        obj["kind"],
        Digit(*leading) if leading is not None else None,
        _digit_pairs(obj.get("preperiod", ())),
        _digit_pairs(obj.get("period", ())),
        bool(obj.get("truncated", False)),
    )
    validate_stream(stream)
    return stream


def _stream_json(stream: DigitStream) -> dict:
    return {
        "kind": stream.kind,
        "leading": list(stream.leading) if stream.leading else None,
        "preperiod": [list(d) for d in stream.preperiod],
        "period": [list(d) for d in stream.period],
        "truncated": stream.truncated,
        "notes": list(stream.notes),
    }


def _endpoint(value):
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        return Surd.parse(value)
    raise ValueError(
        'region endpoints must be integers or exact literals such as "1/3" or "(1+1*sqrt(5))/2"'
    )


def _region(text: str) -> tuple:
    obj = json.loads(text)
    if not isinstance(obj, list):
        raise ValueError("regions are JSON arrays of endpoints")
    return tuple(_endpoint(v) for v in obj)


# -- subcommand handlers --------------------------------------------------------


def _cmd_expand(args):
    value = _parse_exact(args.value)
    stream = _EXPANDERS[args.kind](value, args.depth)
    inputs = {"kind": args.kind, "value": _literal(value), "depth": args.depth}
    diagnostics = [f"expansion truncated after {args.depth} digits"] if stream.truncated else []
    return inputs, {"stream": _stream_json(stream)}, diagnostics, 0


def _cmd_evaluate(args):
    stream = _stream_from_json(json.loads(args.stream))
    value = cf_evaluate(stream)
    numeric = value.to_mpf() if isinstance(value, Surd) else mp.mpf(value.numerator) / value.denominator
    outputs = {"value": _literal(value), "decimal": _decimal(numeric)}
    return {"stream": _stream_json(stream)}, outputs, [], 0


def _cmd_convert(args):
    stream = _stream_from_json(json.loads(args.stream))
    if stream.kind != "rcf":
        raise ValueError(f"conversion starts from rcf streams, got {stream.kind}")
    converted = _CONVERTERS[args.to](stream)
    inputs = {"stream": _stream_json(stream), "to": args.to}
    return inputs, {"stream": _stream_json(converted)}, list(converted.notes), 0


def _cmd_code(args):
    g = OrientedGeodesic(_parse_exact(args.forward), _parse_exact(args.backward))
    diagnostics = []
    if not in_section(g, args.parity):
        diagnostics.append("geodesic lifted to the section before coding")
    groups = cutting_sequence(g, args.groups, args.parity, args.direction)
    words = [word_text(word) for _, word in groups]
    text = "".join(words) if args.direction == "forward" else "".join(reversed(words))
    inputs = {
        "forward": g.forward.literal(),
        "backward": g.backward.literal(),
        "parity": args.parity,
        "direction": args.direction,
        "groups": args.groups,
    }
    outputs = {
        "groups": [
            {"label": tag.label, "k": tag.k, "word": text_group}
            for (tag, _), text_group in zip(groups, words)
        ],
        "text": text,
    }
    return inputs, outputs, diagnostics, 0


def _cmd_parse(args):
    stream = parse_cutting_sequence(args.word, args.direction, args.parity, args.forward_sign)
    inputs = {
        "word": args.word,
        "parity": args.parity,
        "direction": args.direction,
        "forward_sign": args.forward_sign,
    }
    return inputs, {"stream": _stream_json(stream)}, list(stream.notes), 0


def _cmd_lift(args):
    g = OrientedGeodesic(_parse_exact(args.forward), _parse_exact(args.backward))
    matrix, lifted = lift_to_section(g, args.parity, args.max_moves)
    inputs = {
        "forward": g.forward.literal(),
        "backward": g.backward.literal(),
        "parity": args.parity,
    }
    outputs = {
        "matrix": [[matrix.a, matrix.b], [matrix.c, matrix.d]],
        "forward": lifted.forward.literal(),
        "backward": lifted.backward.literal(),
    }
    return inputs, outputs, [], 0


def _cmd_length(args):
    period = _digit_pairs(json.loads(args.period))
    report = closed_length(period, args.kind)
    gap = abs(report.via_product - report.via_trace) / report.via_trace
    inputs = {"kind": args.kind, "period": [list(d) for d in period]}
    outputs = {
        "length": _decimal(report.length),
        "via_trace": _decimal(report.via_trace),
        "via_product": _decimal(report.via_product),
        "relative_gap": _decimal(gap),
        "multiplicity": report.multiplicity,
    }
    diagnostics = [] if gap <= 1e-9 else ["product and trace routes disagree"]
    return inputs, outputs, diagnostics, 0


def _cmd_equiv(args):
    alpha = _parse_exact(args.alpha)
    beta = _parse_exact(args.beta)
    inputs = {
        "alpha": alpha.literal(),
        "beta": beta.literal(),
        "group": args.group,
        "depth_bound": args.depth_bound,
    }
    try:
        result = equivalent(alpha, beta, args.group, args.depth_bound)
    except NotWithinBound as exc:
        outputs = {
            "within_bound": False,
            "depth_alpha": exc.depth_alpha,
            "depth_beta": exc.depth_beta,
        }
        return inputs, outputs, [str(exc)], 3
    witness = result.witness
    outputs = {
        "within_bound": True,
        "r": result.r,
        "s": result.s,
        "witness": [[witness.a, witness.b], [witness.c, witness.d]],
    }
    return inputs, outputs, [], 0


def _cmd_periodic(args):
    value = _parse_exact(args.value)
    check = purely_periodic_ocf if args.kind == "ocf" else purely_periodic_ecf
    outputs = {
        "purely_periodic": check(value),
        "conjugate": value.conjugate().literal(),
    }
    return {"kind": args.kind, "value": value.literal()}, outputs, [], 0


def _cmd_measure_check(args):
    region = _region(args.region)
    report = check_invariance(args.system, region, tol=args.tol, branches=args.branches)
    inputs = {
        "system": args.system,
        "region": [str(v) if isinstance(v, int) else v.literal() for v in region],
        "tol": args.tol,
    }
    outputs = {
        "mass": _decimal(report.mass),
        "pulled_back": _decimal(report.pulled_back),
        "difference": _decimal(report.difference),
        "passed": report.passed,
    }
    diagnostics = [] if report.passed else ["pulled back mass drifted beyond tolerance"]
    return inputs, outputs, diagnostics, 0


def _cmd_birkhoff(args):
    interval = _region(args.interval)
    try:
        seed = Surd.parse(args.seed)
    except ValueError:
        with working_precision(args.dps):
            seed = mp.mpf(args.seed)
    report = birkhoff_average(args.system, interval, seed, args.steps, dps=args.dps)
    expected = measure_mass(args.system, interval, normalized=True)
    inputs = {
        "system": args.system,
        "interval": [str(v) if isinstance(v, int) else v.literal() for v in interval],
        "seed": args.seed,
        "steps": args.steps,
        "dps": args.dps,
    }
    outputs = {
        "average": _decimal(report.average),
        "steps": report.steps,
        "requested": report.requested,
        "expected_frequency": _decimal(expected),
    }
    diagnostics = []
    if report.steps < report.requested:
        diagnostics.append(f"orbit reached a branch boundary after {report.steps} steps")
    return inputs, outputs, diagnostics, 0


def _cmd_render(args):
    parts = args.window.split(",")
    if len(parts) != 3:
        raise ValueError("window is xmin,xmax,ymax")
    window = tuple(float(part) for part in parts)
    geodesics = []
    for pair in args.geodesic:
        ends = pair.split(":")
        if len(ends) != 2:
            raise ValueError('geodesics are "forward:backward" literal pairs')
        geodesics.append(OrientedGeodesic(Surd.parse(ends[0]), Surd.parse(ends[1])))
    svg = render_svg(window, args.depth, geodesics, args.parity, args.letter_groups)
    inputs = {
        "window": list(window),
        "depth": args.depth,
        "parity": args.parity,
        "geodesics": args.geodesic,
    }
    return inputs, {"svg": svg}, [], 0


def _cmd_classify(args):
    rows = json.loads(args.matrix)
    if not (
        isinstance(rows, list)
        and len(rows) == 2
        and all(isinstance(r, list) and len(r) == 2 for r in rows)
    ):
        raise ValueError("matrices are JSON arrays [[a, b], [c, d]]")
    matrix = Mat2(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    membership = classify_subgroup(matrix)
    outputs = {
        "full_modular": membership.full_modular,
        "gamma_odd": membership.gamma_odd,
        "theta": membership.theta,
    }
    return {"matrix": rows}, outputs, [], 0


_HANDLERS = {
    "expand": _cmd_expand,
    "evaluate": _cmd_evaluate,
    "convert": _cmd_convert,
    "code": _cmd_code,
    "parse": _cmd_parse,
    "lift": _cmd_lift,
    "length": _cmd_length,
    "equiv": _cmd_equiv,
    "periodic": _cmd_periodic,
    "measure-check": _cmd_measure_check,
    "birkhoff": _cmd_birkhoff,
    "render": _cmd_render,
    "classify": _cmd_classify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutseq",
        description="continued fraction dynamics and geodesic coding with exact arithmetic",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("expand", help="digit expansion of an exact value")
    p.add_argument("--kind", required=True, choices=sorted(_EXPANDERS))
    p.add_argument("--value", required=True, help='literal like "(1+1*sqrt(2))/1" or "7/3"')
    p.add_argument("--depth", type=int, default=256)

    p = sub.add_parser("evaluate", help="exact value of a digit stream")
    p.add_argument("--stream", required=True, help="stream JSON")

    p = sub.add_parser("convert", help="rewrite an rcf stream into another system")
    p.add_argument("--stream", required=True, help="rcf stream JSON")
    p.add_argument("--to", required=True, choices=sorted(_CONVERTERS))

    p = sub.add_parser("code", help="crossing words of a geodesic")
    p.add_argument("--forward", required=True)
    p.add_argument("--backward", required=True)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--groups", type=int, default=8)
    p.add_argument("--direction", choices=("forward", "backward"), default="forward")

    p = sub.add_parser("parse", help="digits encoded by a crossing word")
    p.add_argument("--word", required=True)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--direction", choices=("forward", "backward"), default="forward")
    p.add_argument("--forward-sign", type=int, choices=(1, -1), default=None)

    p = sub.add_parser("lift", help="move a geodesic onto the section")
    p.add_argument("--forward", required=True)
    p.add_argument("--backward", required=True)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--max-moves", type=int, default=64)

    p = sub.add_parser("length", help="closed geodesic length two ways")
    p.add_argument("--period", required=True, help="JSON digit pairs [[3,-1],[1,1],[1,1]]")
    p.add_argument("--kind", required=True, choices=("ocf", "ecf"))

    p = sub.add_parser("equiv", help="group orbit test through expansion tails")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--group", choices=("odd", "even"), default="odd")
    p.add_argument("--depth-bound", type=int, default=None)

    p = sub.add_parser("periodic", help="purely periodic expansion test")
    p.add_argument("--value", required=True)
    p.add_argument("--kind", required=True, choices=("ocf", "ecf"))

    p = sub.add_parser("measure-check", help="invariant mass of a region two ways")
    p.add_argument("--system", required=True, choices=SYSTEMS)
    p.add_argument("--region", required=True, help='JSON endpoints, e.g. ["1/4","1/3"]')
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--branches", type=int, default=40)

    p = sub.add_parser("birkhoff", help="orbit frequency of an interval")
    p.add_argument("--system", required=True, choices=("odd_digit", "odd_dual"))
    p.add_argument("--interval", required=True, help="JSON endpoints")
    p.add_argument("--seed", required=True, help="exact literal or decimal orbit start")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--dps", type=int, default=100)

    p = sub.add_parser("render", help="SVG of the shaded tessellation")
    p.add_argument("--window", default="-1.5,1.5,1.6", help="xmin,xmax,ymax")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--geodesic", action="append", default=[], help='repeatable "forward:backward"')
    p.add_argument("--letter-groups", type=int, default=8)
    p.add_argument("--output", choices=("json", "svg"), default="svg")

    p = sub.add_parser("classify", help="subgroup membership of an integer matrix")
    p.add_argument("--matrix", required=True, help="JSON [[a,b],[c,d]]")
    return parser


def _run(args, out) -> int:
    command = args.command
    try:
        with working_precision(None):
            inputs, outputs, diagnostics, code = _HANDLERS[command](args)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        print(json.dumps(_report(command, {}, {}, [str(exc)]), sort_keys=True), file=out)
        return 2
    if command == "render" and args.output == "svg":
        print(outputs["svg"], file=out)
        return code
    print(json.dumps(_report(command, inputs, outputs, diagnostics), sort_keys=True), file=out)
    return code


def _batch(parser: argparse.ArgumentParser, lines, out) -> int:
    worst = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            command = request["command"]
            flags = request.get("args", {})
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            print(f"cutseq: bad batch line: {exc}", file=sys.stderr)
            worst = 2
            continue
        argv = [str(command)]
        for key, value in sorted(flags.items()):
            flag = "--" + str(key).replace("_", "-")
            if isinstance(value, bool):
                if value:
                    argv.append(flag)
            elif isinstance(value, (list, dict)):
                argv.extend((flag, json.dumps(value)))
            else:
                argv.extend((flag, str(value)))
        try:
            args = parser.parse_args(argv)
        except SystemExit:
            worst = 2
            continue
        code = _run(args, out)
        if code == 2 or (code == 3 and worst == 0):
            worst = code
    return worst


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    if not argv:
        if sys.stdin.isatty():
            parser.print_usage(sys.stderr)
            return 2
        return _batch(parser, sys.stdin, sys.stdout)
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    return _run(args, sys.stdout)
