"""Command-line front end: surface files in, machine-readable reports out.

Input files are flat JSON objects

    {"order": 4,
     "coefficients": {"0,2": "1", "3,0": "1", "1,3": "0.25"},
     "mode": "exact"}

with one key per monomial exponent pair and coefficients written as exact
rationals "p/q", integers, or decimal strings.  In exact mode decimals are
converted exactly; with "mode": {"rationalize": "1e-9"} each decimal becomes
the smallest-denominator rational within the tolerance.

Reports are JSON on stdout (one object, sorted keys, rationals as strings),
plus a short human summary on stderr unless --quiet is given.  Exit codes:
0 success, 1 domain error (reported in JSON under "error"), 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bde import (asymptotic_bde, bde_bifurcation_type, flecnodal_branches,
                  folded_singularity, parabolic_curve)
from .classify import classify, normal_form_template, reduce_to_normal_form
from .errors import (InsufficientOrder, InvariantViolation,
                     IrrationalNormalization, MongeStrataError, ParseError)
from .fields import best_rational_within
from .germs import EquiType, equisingularity_type
from .jets import BivariateJet, MongeJet
from .projection import Viewpoint, central_projection_jet, special_viewpoints
from .transform import apply_transform, prenormalize_2jet, random_stabilizer


def _parse_rational(text, rationalize: Fraction | None):
    if isinstance(text, (int, float)):
        text = repr(text)
    text = str(text).strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        value = Fraction(text)  # exact decimal/integer/scientific parsing
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse rational {text!r}: {exc}") from exc
    if rationalize is not None and "." in text or rationalize is not None and "e" in text.lower():
        return best_rational_within(value, rationalize)
    return value


def parse_surface(text: str) -> MongeJet:
    """Validated Monge jet from the JSON surface schema."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("surface file must be a JSON object")
    if "order" not in data or not isinstance(data["order"], int):
        raise ParseError("missing integer field 'order'")
    order = data["order"]
    if order < 2:
        raise InvariantViolation("order must be at least 2")
    mode = data.get("mode", "exact")
    rationalize = None
    if isinstance(mode, dict) and "rationalize" in mode:
        rationalize = Fraction(str(mode["rationalize"]))
        if rationalize < 0:
            raise ParseError("rationalize tolerance must be nonnegative")
    elif mode != "exact":
        raise ParseError(f"unknown mode {mode!r}")
    coeffs = data.get("coefficients", {})
    if not isinstance(coeffs, dict):
        raise ParseError("'coefficients' must be an object keyed by 'i,j'")
    table = {}
    for key, val in coeffs.items():
        try:
            i, j = (int(p) for p in str(key).split(","))
        except ValueError as exc:
            raise ParseError(f"bad exponent key {key!r}") from exc
        if i < 0 or j < 0:
            raise ParseError(f"negative exponent in key {key!r}")
        if i + j > order:
            raise InvariantViolation(f"coefficient {key!r} exceeds the stated order")
        c = _parse_rational(val, rationalize)
        if c == 0:
            continue
        if (i, j) in ((0, 0), (1, 0), (0, 1)):
            raise InvariantViolation(
                f"coefficient {key!r} must vanish for a Monge jet (f(0)=0, df(0)=0)")
        table[(i, j)] = c
    return MongeJet.from_terms(table, order)


# --- serialization ---------------------------------------------------------

def _ser(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_ser(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _ser(v) for k, v in value.items()}
    if isinstance(value, BivariateJet):
        return {"order": value.order,
                "coefficients": {f"{i},{j}": _ser(c)
                                 for (i, j), c in sorted(value.coeffs.items())}}
    if isinstance(value, MongeJet):
        return _ser(value.jet)
    if isinstance(value, Viewpoint):
        kind = "infinite" if value.at_infinity else "finite"
        return {kind: [_ser(c) for c in value.coords]}
    if isinstance(value, EquiType):
        return {"tag": value.tag, "p": value.p, "codim": value.codim}
    return str(value)


def _emit(report: dict, args) -> None:
    indent = 2 if args.pretty else None
    sys.stdout.write(json.dumps(_ser(report), sort_keys=True, indent=indent) + "\n")


def _summary(line: str, args) -> None:
    if not args.quiet:
        sys.stderr.write(line + "\n")


def _transform_dict(t) -> dict:
    return {name: _ser(getattr(t, name))
            for name in ("u1", "u2", "u3", "v1", "v2", "v3", "c", "w1", "w2", "w3")}


def _label_report(label) -> dict:
    return {"class": label.name, "codim": label.codim,
            "jet_order": label.jet_order, "projection_type": label.projection_type}


def _load(path: str, args) -> MongeJet:
    f = parse_surface(Path(path).read_text(encoding="utf-8"))
    if args.order is not None:
        if args.order > f.order:
            raise InvariantViolation(
                f"--order {args.order} exceeds the file's stated order {f.order}")
        f = f.truncate(args.order)
    return f


# --- subcommands -----------------------------------------------------------

def _cmd_classify(args) -> int:
    f = _load(args.file, args)
    report = {"input_order": f.order, "warnings": []}
    label = classify(f)
    report.update(_label_report(label))
    try:
        svs = special_viewpoints_for(f)
        report["special_viewpoints"] = [
            {"viewpoint": _ser(vp), "type": _ser(et)} for vp, et in svs]
    except MongeStrataError as exc:
        report["warnings"].append(f"special_viewpoints: {type(exc).__name__}: {exc}")
    _emit(report, args)
    _summary(f"class {label.name} (codim {label.codim}, p = {label.jet_order}, "
             f"projection {label.projection_type})", args)
    return 0


def special_viewpoints_for(f: MongeJet):
    """Special viewpoints of the prenormalized jet (identity on failure)."""
    _t, g, _k = prenormalize_2jet(f) if f.order >= 3 else (None, f, None)
    return special_viewpoints(g)


def _cmd_reduce(args) -> int:
    f = _load(args.file, args)
    extension = os.environ.get("MONGE_STRATA_EXT") == "1"
    res = reduce_to_normal_form(f, one_root_extension=extension)
    report = {
        "input_order": f.order,
        **_label_report(res.label),
        "normal_form": _ser(res.normal),
        "moduli": _ser(res.moduli),
        "transform": _transform_dict(res.transform),
        "exceptional": res.exceptional,
        "warnings": [],
    }
    _emit(report, args)
    _summary(f"reduced to {res.label.name}: moduli {_ser(res.moduli)}", args)
    return 0


def _parse_viewpoint(text: str) -> Viewpoint:
    text = text.strip()
    infinite = text.startswith("inf:")
    if infinite:
        text = text[4:]
    parts = text.split(",")
    if len(parts) != 3:
        raise ParseError("viewpoint needs three comma-separated rationals")
    coords = [_parse_rational(p, None) for p in parts]
    return Viewpoint.infinite(*coords) if infinite else Viewpoint.finite(*coords)


def _cmd_project(args) -> int:
    f = _load(args.file, args)
    vp = _parse_viewpoint(args.viewpoint)
    germ = central_projection_jet(f, vp, f.order)
    report = {"viewpoint": _ser(vp),
              "germ": {"first": _ser(germ.first), "second": _ser(germ.second)},
              "warnings": []}
    try:
        et = equisingularity_type(germ)
        report["equisingularity_type"] = _ser(et)
        summary = et.tag
    except MongeStrataError as exc:
        report["warnings"].append(f"equisingularity_type: {type(exc).__name__}: {exc}")
        summary = "undetermined"
    _emit(report, args)
    _summary(f"projection type {summary}", args)
    return 0


def _cmd_bde(args) -> int:
    f = _load(args.file, args)
    k = max(f.order - 2, 1)
    bde = asymptotic_bde(f, k)
    report = {"bde": {"a": _ser(bde.a), "b": _ser(bde.b), "c": _ser(bde.c)},
              "warnings": []}
    try:
        curve = parabolic_curve(f, k)
        report["parabolic_curve"] = {"defining": _ser(curve.defining),
                                     "singularity": curve.singularity}
    except MongeStrataError as exc:
        report["warnings"].append(f"parabolic_curve: {type(exc).__name__}: {exc}")
    summary = "bde computed"
    try:
        local = bde_bifurcation_type(f)
        report["bde_type"] = {"tag": local.tag,
                              "lambda": _ser(local.lam), "lambda1": _ser(local.lam1),
                              "lambda2": _ser(local.lam2), "lambda3": _ser(local.lam3)}
        summary = local.tag
    except MongeStrataError as exc:
        report["warnings"].append(f"bde_type: {type(exc).__name__}: {exc}")
    _emit(report, args)
    _summary(summary, args)
    return 0


def _cmd_curves(args) -> int:
    f = _load(args.file, args)
    report = {"warnings": []}
    k = max(f.order - 2, 1)
    try:
        curve = parabolic_curve(f, k)
        report["parabolic_curve"] = {"defining": _ser(curve.defining),
                                     "singularity": curve.singularity}
    except MongeStrataError as exc:
        report["warnings"].append(f"parabolic_curve: {type(exc).__name__}: {exc}")
    if f.order >= 3:
        try:
            t, g, kind = prenormalize_2jet(f)
            if kind.kind == "hyperbolic":
                res = flecnodal_branches(g, max(g.order - 3, 1))
                report["flecnodal"] = {
                    "prenormalizing_transform": _transform_dict(t),
                    "branches": [
                        {"defining": _ser(br.defining), "singularity": br.singularity}
                        for br in res.branches],
                    "tangent_branches": res.tangent,
                    "morse": res.morse,
                }
        except MongeStrataError as exc:
            report["warnings"].append(f"flecnodal: {type(exc).__name__}: {exc}")
    _emit(report, args)
    _summary("curve data written", args)
    return 0


def _cmd_check_invariance(args) -> int:
    f = _load(args.file, args)
    base = classify(f)
    passed, failed = 0, []
    for s in range(args.samples):
        t = random_stabilizer(args.seed + s, 2)
        lab = classify(apply_transform(t, f, f.order))
        if lab.name == base.name:
            passed += 1
        else:
            failed.append({"seed": args.seed + s, "got": lab.name})
    report = {"class": base.name, "samples": args.samples, "passed": passed,
              "failed": failed, "warnings": []}
    _emit(report, args)
    _summary(f"{passed}/{args.samples} label-invariant", args)
    return 0 if passed == args.samples else 1


def _cmd_batch(args) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise ParseError(f"{args.dir!r} is not a directory")
    files = sorted(p for p in directory.iterdir() if p.suffix == ".json")
    results, histogram = [], {}
    for path in files:
        entry = {"file": path.name}
        try:
            f = parse_surface(path.read_text(encoding="utf-8"))
            if args.order is not None and args.order <= f.order:
                f = f.truncate(args.order)
            label = classify(f)
            entry.update(_label_report(label))
            histogram[label.name] = histogram.get(label.name, 0) + 1
        except MongeStrataError as exc:
            entry["error"] = type(exc).__name__
            entry["message"] = str(exc)
            histogram["<error>"] = histogram.get("<error>", 0) + 1
        results.append(entry)
    report = {"results": results, "histogram": histogram, "warnings": []}
    _emit(report, args)
    _summary(f"{len(files)} files: " +
             ", ".join(f"{k}: {v}" for k, v in sorted(histogram.items())), args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monge-strata",
        description="Exact projective classification of surface jets in 3-space")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="surface JSON file")
        p.add_argument("--json", action="store_true", default=True,
                       help="JSON report on stdout (default)")
        p.add_argument("--pretty", action="store_true", help="indent the JSON report")
        p.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
        p.add_argument("--order", type=int, default=None,
                       help="truncate the input jet to this order first")

    p = sub.add_parser("classify", help="stratum label and special viewpoints")
    common(p)
    p.set_defaults(fn=_cmd_classify)
    p = sub.add_parser("reduce", help="normal form, moduli and the reducing transform")
    common(p)
    p.set_defaults(fn=_cmd_reduce)
    p = sub.add_parser("project", help="central projection germ from a viewpoint")
    common(p)
    p.add_argument("--viewpoint", required=True,
                   help="finite 'a,b,c' or direction 'inf:a,b,c'")
    p.set_defaults(fn=_cmd_project)
    p = sub.add_parser("bde", help="asymptotic equation, parabolic curve, local type")
    common(p)
    p.set_defaults(fn=_cmd_bde)
    p = sub.add_parser("curves", help="parabolic and flecnodal curve jets")
    common(p)
    p.set_defaults(fn=_cmd_curves)
    p = sub.add_parser("check-invariance", help="classify under random group elements")
    common(p)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_check_invariance)
    p = sub.add_parser("batch", help="classify every .json file of a directory")
    common(p, with_file=False)
    p.add_argument("dir", help="directory of surface JSON files")
    p.set_defaults(fn=_cmd_batch)
    return parser


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, InvariantViolation) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"cannot read input: {exc}\n")
        return 2
    except MongeStrataError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, IrrationalNormalization):
            payload["defining"] = [str(c) for c in exc.defining]
        if isinstance(exc, InsufficientOrder):
            payload["needed_order"] = exc.needed
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
