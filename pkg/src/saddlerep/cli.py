"""Command line front end.

Exit codes: 0 success, 1 the checked property is refuted (verify finds a
gap, sign finds a wrong-sign direction, families fail to sandwich),
2 input error. Data goes to stdout, diagnostics to stderr. ``-`` as the
input file reads stdin, so ``build-saddle`` can be piped into ``verify``.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import analysis, saddle
from .config import DEFAULT_TOLERANCES, Tolerances
from .document import Document, DocumentError, parse, serialize
from .geometry import MalformedInputError, NumericalFailureError, minimal_generators
from .oracle import SphereSampler
from .phfunc import ApproximationFamilies, MaxOfLinear, MinOfLinear, SaddleFamily

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _vec_text(v) -> str:
    return "(" + ", ".join(_fmt(x) for x in np.asarray(v).ravel()) + ")"


def _vec_json(v):
    return None if v is None else [float(x) for x in np.asarray(v).ravel()]


def _read(path: str) -> Document:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text)


def _family(doc: Document, tol: Tolerances) -> SaddleFamily:
    """Saddle family of a document; DC pairs go through the DC construction."""
    if doc.kind == "saddle":
        return doc.payload
    if doc.kind == "dc":
        return saddle.from_dc(doc.payload, tol)
    raise InputError("this command needs a saddle or dc document, got families")


def _sampler(args, dim: int) -> SphereSampler:
    return SphereSampler(dim, args.samples, args.seed, "uniform")


def _emit(args, report: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _write_doc(args, doc: Document) -> None:
    text = serialize(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _values_at(doc: Document, X: np.ndarray) -> dict:
    p = doc.payload
    if doc.kind == "dc":
        return {"dc": p(X)}
    if doc.kind == "saddle":
        return {"infsup": p.infsup(X), "supinf": p.supinf(X)}
    return {"inf_upper": p.inf_upper(X), "sup_lower": p.sup_lower(X)}


def cmd_eval(args, tol) -> int:
    doc = _read(args.file)
    n = doc.dim
    if args.grid:
        if n != 2:
            raise InputError("--grid is only available for dim = 2")
        theta = 2 * np.pi * np.arange(args.grid) / args.grid
        X = np.column_stack([np.cos(theta), np.sin(theta)])
        vals = _values_at(doc, X)
        if args.json:
            report = {"angle": theta.tolist(), "x": X.tolist(), **{k: v.tolist() for k, v in vals.items()}}
            _emit(args, report, "")
        else:
            header = "angle\tx1\tx2\t" + "\t".join(vals)
            rows = [
                "\t".join([_fmt(theta[k]), _fmt(X[k, 0]), _fmt(X[k, 1])] + [_fmt(v[k]) for v in vals.values()])
                for k in range(len(theta))
            ]
            _emit(args, {}, "\n".join([header] + rows))
        return EXIT_OK
    if args.at is None:
        raise InputError("eval needs --at x1,...,xn or --grid N")
    try:
        x = np.array([float(t) for t in args.at.split(",")])
    except ValueError as exc:
        raise InputError(f"cannot parse --at {args.at!r}") from exc
    if x.size != n or not np.all(np.isfinite(x)):
        raise InputError(f"--at needs {n} finite coordinates, got {args.at!r}")
    vals = {k: float(v[0]) for k, v in _values_at(doc, x[None, :]).items()}
    text = "\n".join(f"{k} = {_fmt(v)}" for k, v in vals.items())
    _emit(args, {"at": x.tolist(), **vals}, text)
    return EXIT_OK


def cmd_build_saddle(args, tol) -> int:
    doc = _read(args.file)
    if doc.kind == "dc":
        F = saddle.from_dc(doc.payload, tol)
    elif doc.kind == "families":
        try:
            F = saddle.build_from_approximations(doc.payload, tol)
        except saddle.ConstructionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            print(f"separating direction: {_vec_text(exc.certificate.direction)}", file=sys.stderr)
            return EXIT_REFUTED
    elif doc.kind == "saddle":
        # already a family: pass through so pipelines accept any input
        F = doc.payload
    else:
        raise InputError("build-saddle needs a dc, families or saddle document")
    _write_doc(args, Document("saddle", F, doc.name, doc.description))
    return EXIT_OK


def cmd_convert_dc(args, tol) -> int:
    doc = _read(args.file)
    if doc.kind != "saddle":
        raise InputError("convert-dc needs a saddle document")
    _write_doc(args, Document("dc", saddle.saddle_to_dc(doc.payload, tol), doc.name, doc.description))
    return EXIT_OK


def cmd_verify(args, tol) -> int:
    doc = _read(args.file)
    if doc.kind != "saddle":
        raise InputError("verify needs a saddle document")
    F = doc.payload
    rep = saddle.verify_saddle(F, _sampler(args, F.dim), exact2d=args.exact2d, tol=tol)
    report = {
        "is_saddle": rep.is_saddle,
        "max_gap": rep.max_gap,
        "witness": _vec_json(rep.witness),
        "exact": rep.exact,
        "evaluated": rep.evaluated,
        "tol_verify": tol.verify,
    }
    text = (
        f"is_saddle: {str(rep.is_saddle).lower()}\n"
        f"max_gap: {_fmt(rep.max_gap)}\n"
        f"witness: {_vec_text(rep.witness)}\n"
        f"mode: {'exact' if rep.exact else 'sampled'} ({rep.evaluated} directions)"
    )
    _emit(args, report, text)
    return EXIT_OK if rep.is_saddle else EXIT_REFUTED


def _sign_json(res):
    if res.holds:
        return {"holds": True, "certificates": [_vec_json(c) for c in res.certificates]}
    return {"holds": False, "index": res.index, "witness": _vec_json(res.witness), "value": res.value}


def cmd_sign(args, tol) -> int:
    doc = _read(args.file)
    F = _family(doc, tol)
    nonneg = analysis.check_nonnegative(F, tol)
    nonpos = analysis.check_nonpositive(F, tol)
    lines = []
    for label, res, axis in (("nonnegative", nonneg, "row"), ("nonpositive", nonpos, "column")):
        if res.holds:
            lines.append(f"{label}: yes (0 in the hull of every {axis})")
        else:
            lines.append(f"not {label}: {axis} {res.index}, witness {_vec_text(res.witness)}, value {_fmt(res.value)}")
    _emit(args, {"nonnegative": _sign_json(nonneg), "nonpositive": _sign_json(nonpos)}, "\n".join(lines))
    wanted = nonpos if args.nonpositive else nonneg
    return EXIT_OK if wanted.holds else EXIT_REFUTED


def _direction(args, tol, mode) -> int:
    doc = _read(args.file)
    F = _family(doc, tol)
    fn = analysis.steepest_descent if mode == "descent" else analysis.steepest_ascent
    rep = fn(F, analysis.fallback_sampler(F.dim, args.seed), tol=tol)
    report = {
        "mode": rep.mode,
        "direction": _vec_json(rep.direction),
        "value": rep.value,
        "approximate": rep.approximate,
        "index": rep.index,
        "certificate": _vec_json(rep.certificate),
    }
    text = (
        f"mode: {rep.mode}\n"
        f"direction: {_vec_text(rep.direction)}\n"
        f"value: {_fmt(rep.value)}{' (approximate, sampled)' if rep.approximate else ''}"
    )
    _emit(args, report, text)
    return EXIT_OK


def cmd_info(args, tol) -> int:
    doc = _read(args.file)
    p = doc.payload
    report = {"kind": doc.kind, "dim": doc.dim}
    if doc.name is not None:
        report["name"] = doc.name
    if doc.kind == "dc":
        report.update(plus=len(p.plus), minus=len(p.minus))
    elif doc.kind == "saddle":
        report.update(rows=p.rows, cols=p.cols)
    else:
        report.update(upper=len(p.upper), lower=len(p.lower))
    if doc.kind != "families":
        report["lipschitz_M"] = analysis.lipschitz_constant(_family(doc, tol)).M
    text = "\n".join(f"{k}: {_fmt(v) if isinstance(v, float) else v}" for k, v in report.items())
    _emit(args, report, text)
    return EXIT_OK


def cmd_reduce(args, tol) -> int:
    doc = _read(args.file)
    p = doc.payload
    if doc.kind == "saddle":
        out = saddle.reduce(p, _sampler(args, p.dim), tol)
    elif doc.kind == "dc":
        out = p.reduced(tol)
    else:
        out = ApproximationFamilies(
            tuple(MaxOfLinear(minimal_generators(f.generators, tol)) for f in p.upper),
            tuple(MinOfLinear(minimal_generators(f.generators, tol)) for f in p.lower),
        )
    _write_doc(args, Document(doc.kind, out, doc.name, doc.description))
    return EXIT_OK


COMMANDS = {
    "eval": (cmd_eval, "evaluate a document at a point (or on an angular grid)"),
    "build-saddle": (cmd_build_saddle, "dc or families document -> saddle document (saddle input passes through)"),
    "convert-dc": (cmd_convert_dc, "saddle document -> dc document"),
    "verify": (cmd_verify, "check that both readings of a saddle family agree"),
    "sign": (cmd_sign, "nonnegativity / nonpositivity with certificates"),
    "descent": (lambda a, t: _direction(a, t, "descent"), "steepest descent direction"),
    "ascent": (lambda a, t: _direction(a, t, "ascent"), "steepest ascent direction"),
    "info": (cmd_info, "dimensions, sizes and Lipschitz bound"),
    "reduce": (cmd_reduce, "drop redundant generators / rows / columns"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-lp", type=float, default=DEFAULT_TOLERANCES.lp)
    common.add_argument("--tol-verify", type=float, default=DEFAULT_TOLERANCES.verify)
    common.add_argument("--samples", type=int, default=2000, help="sphere samples for verify/reduce")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--exact2d", action="store_true", help="exact verification for dim <= 2")
    common.add_argument("--json", action="store_true", help="machine-readable report")

    parser = argparse.ArgumentParser(prog="saddlerep", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file", help="input document, or - for stdin")
        if name == "eval":
            sp.add_argument("--at", help="comma-separated point")
            sp.add_argument("--grid", type=int, help="dump values on N equally spaced angles (dim 2)")
        if name in ("build-saddle", "convert-dc", "reduce"):
            sp.add_argument("-o", "--output", help="write the document here instead of stdout")
        if name == "sign":
            sp.add_argument("--nonpositive", action="store_true", help="exit status reflects nonpositivity")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.samples < 1:
            raise InputError("--samples must be positive")
        tol = DEFAULT_TOLERANCES.with_(lp=args.tol_lp, verify=args.tol_verify)
        return COMMANDS[args.command][0](args, tol)
    except (InputError, DocumentError, MalformedInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
