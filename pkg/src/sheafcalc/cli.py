"""Batch command-line front end.

Exit codes: 0 success, 2 input validation failure, 3 domain error (for
example a filtration level inside the eigenvalue exclusion band).  JSON
output is canonical (sorted keys, fixed separators) so identical inputs
produce byte-identical results.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import metrics, morse, ops
from .domains import (
    Ball,
    Ellipsoid,
    ScaledBall,
    domain_barcode,
    domain_from_json,
    eigen_count,
    inclusion_cone_rank,
    nonsqueeze_check,
    sheaf_invariant,
    transfer_is_iso,
)
from .errors import DomainError, ValidationError
from .exactnum import parse_scalar, scalar_to_json
from .intervals import (
    GradedBarcode,
    barcode_from_json,
    barcode_to_json,
    canonicalize,
    convert_convention,
    ray_sections,
    spec,
    stalk,
)
from .plot import svg_barcode, text_barcode

FIELD_ENV = "SHEAFCALC_FIELD"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _read_barcode(path: str) -> GradedBarcode:
    try:
        obj = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return barcode_from_json(obj)


def _emit(args, payload: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _emit_barcode(args, b: GradedBarcode, title: str = "") -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "svg":
        _emit(args, svg_barcode(b, title))
    elif fmt == "text":
        _emit(args, text_barcode(b))
    else:
        _emit(args, _dump(barcode_to_json(b)))


def _field(args) -> int:
    if args.field is not None:
        return args.field
    env = os.environ.get(FIELD_ENV)
    return int(env) if env else 2


def _scalar_json_map(values) -> list:
    return [scalar_to_json(v) for v in values]


# -- subcommand handlers ------------------------------------------------------


def _cmd_barcode(args) -> int:
    b = _read_barcode(args.input)
    if args.stalk is not None:
        _emit(args, _dump(stalk(b, parse_scalar(args.stalk)).to_json()))
    elif args.sections is not None:
        _emit(args, _dump(ray_sections(b, parse_scalar(args.sections)).to_json()))
    elif args.spectrum:
        _emit(args, _dump({"spec": _scalar_json_map(spec(b))}))
    elif args.convention:
        _emit_barcode(args, convert_convention(b, args.convention))
    else:
        _emit_barcode(args, canonicalize(b))
    return 0


def _cmd_ops(args) -> int:
    a = _read_barcode(args.a)
    unary_scalar = {
        "torsion": ops.torsion,
        "capacity": ops.capacity,
        "capacity-prime": ops.capacity_prime,
    }
    if args.op in unary_scalar:
        _emit(args, _dump({args.op: scalar_to_json(unary_scalar[args.op](a))}))
        return 0
    if args.op == "adjoint":
        _emit_barcode(args, ops.adjoint(a))
        return 0
    if args.op == "shift-t":
        if args.c is None:
            raise ValidationError("shift-t needs --c")
        _emit_barcode(args, ops.shift_t(a, parse_scalar(args.c)))
        return 0
    if args.op == "shift-deg":
        if args.k is None:
            raise ValidationError("shift-deg needs --k")
        _emit_barcode(args, ops.shift_deg(a, args.k))
        return 0
    if args.op == "tau-rank":
        if args.c is None:
            raise ValidationError("tau-rank needs --c")
        _emit(args, _dump(ops.tau_rank(a, parse_scalar(args.c)).to_json()))
        return 0
    if args.b is None:
        raise ValidationError(f"{args.op} needs a second barcode")
    b = _read_barcode(args.b)
    binary = {
        "convolve": ops.convolve,
        "convolve-np": ops.convolve_np,
        "hom-star": ops.hom_star,
        "rhom-sheaf": ops.rhom_sheaf,
    }
    if args.op in binary:
        _emit_barcode(args, binary[args.op](a, b))
        return 0
    if args.op == "rhom-total":
        _emit(args, _dump(ops.rhom_total(a, b).to_json()))
        return 0
    raise ValidationError(f"unknown op {args.op!r}")


def _cmd_dist(args) -> int:
    if args.b is None:
        # combined {"b1": ..., "b2": ...} wire format
        try:
            obj = json.loads(_read_text(args.a))
            b1 = barcode_from_json(obj["b1"])
            b2 = barcode_from_json(obj["b2"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValidationError(f"{args.a}: expected {{'b1':…,'b2':…}} ({exc})") from exc
    else:
        b1 = _read_barcode(args.a)
        b2 = _read_barcode(args.b)
    if args.delta is not None:
        ok, witness = metrics.delta_matched(b1, b2, parse_scalar(args.delta))
        payload = {"delta_matched": ok}
        if witness is not None:
            payload["witness"] = {
                "delta": scalar_to_json(witness.delta),
                "pairs": [list(p) for p in witness.pairs],
                "erased_left": list(witness.erased_left),
                "erased_right": list(witness.erased_right),
            }
        _emit(args, _dump(payload))
        return 0
    d = metrics.bottleneck(b1, b2)
    payload = {"bottleneck": scalar_to_json(d)}
    from .exactnum import Infinity

    if not isinstance(d, Infinity):
        _, witness = metrics.delta_matched(b1, b2, d)
        payload["witness"] = {
            "delta": scalar_to_json(witness.delta),
            "pairs": [list(p) for p in witness.pairs],
            "erased_left": list(witness.erased_left),
            "erased_right": list(witness.erased_right),
        }
    _emit(args, _dump(payload))
    return 0


def _parse_complex(text: str):
    text = text.strip()
    if text.startswith("{"):
        obj = json.loads(text)
        try:
            values = [Fraction(v) for v in obj["values"]]
            simplices = [tuple(sorted(s)) for s in obj["simplices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError("complex JSON needs 'values' and 'simplices'") from exc
        K = morse.SimplicialComplex.from_maximal(len(values), simplices)
        return K, morse.VertexFunction(tuple(values))
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        nv, ns = (int(x) for x in lines[0].split())
        values = [Fraction(x) for x in lines[1].split()]
        if len(values) != nv:
            raise ValidationError(f"expected {nv} vertex values")
        maximal = []
        for ln in lines[2 : 2 + ns]:
            parts = [int(x) for x in ln.split()]
            if parts[0] != len(parts) - 1:
                raise ValidationError(f"bad simplex line {ln!r}")
            maximal.append(tuple(parts[1:]))
    except (ValueError, IndexError) as exc:
        raise ValidationError(f"malformed complex file: {exc}") from exc
    K = morse.SimplicialComplex.from_maximal(nv, maximal)
    return K, morse.VertexFunction(tuple(values))


def _cmd_morse(args) -> int:
    p = _field(args)
    if args.route == "front":
        obj = json.loads(_read_text(args.input))
        front = morse.FrontRegion(
            tuple(Fraction(v) for v in obj["xs"]),
            tuple(Fraction(v) for v in obj["t_minus"]),
            tuple(Fraction(v) for v in obj["t_plus"]),
        )
        if args.capacity:
            _emit(args, _dump({"front_capacity": scalar_to_json(morse.front_capacity(front))}))
        else:
            _emit_barcode(args, morse.front_hom_star(front, p))
        return 0
    K, f = _parse_complex(_read_text(args.input))
    routes = {
        "sublevel": morse.sublevel_barcode,
        "superlevel": morse.superlevel_barcode,
        "sheaf": morse.sheaf_route_barcode,
    }
    b = routes[args.route](K, f, p)
    if args.two_critical_bound:
        _emit(args, _dump({"c0_two_critical_bound": scalar_to_json(morse.c0_two_critical_bound(b))}))
    else:
        _emit_barcode(args, b, title=f"{args.route} barcode")
    return 0


def _parse_domain(args):
    if getattr(args, "spec_json", None):
        return domain_from_json(json.loads(args.spec_json))
    if args.domain is None:
        raise ValidationError("need a domain kind or --spec-json")
    if args.n is None or args.r is None:
        raise ValidationError("need --n and --r")
    if args.domain == "ball":
        return Ball(args.n, Fraction(args.r))
    if args.domain == "ellipsoid":
        if args.R is None:
            raise ValidationError("ellipsoid needs --R")
        return Ellipsoid(args.n, Fraction(args.r), Fraction(args.R))
    if args.domain == "scaled-ball":
        if args.c is None:
            raise ValidationError("scaled-ball needs --c")
        return ScaledBall(Fraction(args.c), Ball(args.n, Fraction(args.r)))
    raise ValidationError(f"unknown domain {args.domain!r}")


def _cmd_domain(args) -> int:
    from .domains import domain_stalk

    d = _parse_domain(args)
    if args.stalk is not None:
        _emit(args, _dump(domain_stalk(d, parse_scalar(args.stalk)).to_json()))
        return 0
    if args.invariant is not None:
        h = sheaf_invariant(d, parse_scalar(args.invariant))
        _emit(args, _dump(h.to_json()))
        return 0
    if args.transfer is not None:
        t1, t2 = (parse_scalar(x) for x in args.transfer)
        _emit(args, _dump({"transfer_is_iso": transfer_is_iso(d, t1, t2)}))
        return 0
    if args.eigen is not None:
        if not isinstance(d, Ball):
            raise ValidationError("eigen counts are defined for plain balls")
        _emit(args, _dump({"eigen_count": eigen_count(Fraction(args.eigen), d.r, args.M)}))
        return 0
    if args.cone is not None:
        if not isinstance(d, Ball) or args.c is None:
            raise ValidationError("mapping-cone ranks need a ball plus --c")
        h = inclusion_cone_rank(d.r, Fraction(args.c), Fraction(args.cone), d.n, args.M)
        _emit(args, _dump(h.to_json()))
        return 0
    if args.tmax is None:
        raise ValidationError("domain barcode needs --tmax")
    b = domain_barcode(d, parse_scalar(args.tmax))
    _emit_barcode(args, b, title=f"{args.domain} barcode")
    return 0


def _cmd_nonsqueeze(args) -> int:
    v = nonsqueeze_check(args.n, Fraction(args.r1), Fraction(args.r2), Fraction(args.R))
    payload = {
        "obstructed": v.obstructed,
        "verdict": v.verdict,
        "trace": list(v.trace),
    }
    if v.chosen_T is not None:
        payload["T"] = scalar_to_json(v.chosen_T)
        payload["ball_invariant"] = v.ball_invariant.to_json()
        payload["ellipsoid_invariant"] = v.ellipsoid_invariant.to_json()
    _emit(args, _dump(payload))
    return 0


def _cmd_plot(args) -> int:
    b = _read_barcode(args.input)
    if args.format == "text":
        _emit(args, text_barcode(b))
    else:
        _emit(args, svg_barcode(b, args.title))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sheafcalc",
        description="Exact barcode calculus for constructible sheaves on the line",
    )
    ap.add_argument("--field", "-p", type=int, default=None, help=f"field characteristic (default: ${FIELD_ENV} or 2)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "svg", "text"), default="json")
        sp.add_argument("--output", "-o", default=None)

    sp = sub.add_parser("barcode", help="canonicalize / query a barcode")
    sp.add_argument("input")
    sp.add_argument("--stalk", default=None, metavar="T")
    sp.add_argument("--sections", default=None, metavar="C")
    sp.add_argument("--spec", dest="spectrum", action="store_true")
    sp.add_argument("--convention", choices=("left-closed", "right-closed"), default=None)
    common(sp)
    sp.set_defaults(func=_cmd_barcode)

    sp = sub.add_parser("ops", help="Tamarkin operations on barcodes")
    sp.add_argument(
        "op",
        choices=(
            "convolve", "convolve-np", "hom-star", "adjoint", "rhom-total",
            "rhom-sheaf", "shift-t", "shift-deg", "torsion", "tau-rank",
            "capacity", "capacity-prime",
        ),
    )
    sp.add_argument("a")
    sp.add_argument("b", nargs="?", default=None)
    sp.add_argument("--c", default=None, help="scalar parameter (shift-t, tau-rank)")
    sp.add_argument("--k", type=int, default=None, help="degree shift (shift-deg)")
    common(sp)
    sp.set_defaults(func=_cmd_ops)

    sp = sub.add_parser("dist", help="bottleneck / interleaving distance")
    sp.add_argument("a", help="barcode file, or combined {'b1':…,'b2':…} file")
    sp.add_argument("b", nargs="?", default=None)
    sp.add_argument("--delta", default=None, help="test delta-matching instead")
    common(sp)
    sp.set_defaults(func=_cmd_dist)

    sp = sub.add_parser("morse", help="barcodes of filtered complexes and fronts")
    sp.add_argument("route", choices=("sublevel", "superlevel", "sheaf", "front"))
    sp.add_argument("input")
    sp.add_argument("--two-critical-bound", action="store_true")
    sp.add_argument("--capacity", action="store_true", help="front capacity")
    common(sp)
    sp.set_defaults(func=_cmd_morse)

    sp = sub.add_parser("domain", help="ball/ellipsoid invariants")
    sp.add_argument("domain", nargs="?", choices=("ball", "ellipsoid", "scaled-ball"))
    sp.add_argument("--spec-json", default=None, help='e.g. {"ball":{"n":2,"r":"1"}}')
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--r", default=None)
    sp.add_argument("--R", default=None)
    sp.add_argument("--c", default=None)
    sp.add_argument("--tmax", default=None, help="barcode cutoff, e.g. 3pi")
    sp.add_argument("--stalk", default=None, metavar="T")
    sp.add_argument("--invariant", default=None, metavar="T")
    sp.add_argument("--transfer", nargs=2, default=None, metavar=("T1", "T2"))
    sp.add_argument("--eigen", default=None, metavar="T")
    sp.add_argument("--cone", default=None, metavar="T", help="rescaling mapping-cone rank (with --c)")
    sp.add_argument("--M", type=int, default=16)
    common(sp)
    sp.set_defaults(func=_cmd_domain)

    sp = sub.add_parser("nonsqueeze", help="ball-into-cylinder obstruction check")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r1", required=True)
    sp.add_argument("--r2", required=True)
    sp.add_argument("--R", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_nonsqueeze)

    sp = sub.add_parser("plot", help="render a barcode file")
    sp.add_argument("input")
    sp.add_argument("--title", default="")
    sp.add_argument("--format", choices=("svg", "text"), default="svg")
    sp.add_argument("--output", "-o", default=None)
    sp.set_defaults(func=_cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
