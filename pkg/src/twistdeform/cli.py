"""Command-line front end.

Every command prints one JSON report embedding the tool version, the parsed
configuration and the tolerance.  Exit status is 0 when the checked
statement holds, 1 when it fails and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .admissibility import admissible_on, scan_sphere
from .cpn import (
    DegeneracyError,
    chart_grid,
    closedness_residual,
    deformed_bivector,
    deformed_form,
    field_csv,
    fubini_study_field,
    invert_form,
    moment_map,
    nondegeneracy_scan,
)
from .exterior import Multivector, is_r_matrix
from .grassmann import GrassmannInstance, canonical_r_matrix, verify_instance
from .lie import (
    LieAlgebra,
    LieAlgebraError,
    as_fraction,
    build_abelian,
    build_su,
    build_torus,
    validate,
)
from .volume import numeric_volume, pipeline_volume, sweep_csv

OUTPUT_DIR_ENV = "TWISTDEFORM_OUTPUT_DIR"


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


# --------------------------------------------------------------------------
# argument parsing


def parse_algebra(text: str) -> LieAlgebra:
    """``su<n>``, ``abelian<n>``, ``torus<n>`` or a path to an algebra JSON file."""
    m = re.fullmatch(r"(su|abelian|torus)\(?(\d+)\)?", text.strip())
    try:
        if m:
            kind, n = m.group(1), int(m.group(2))
            return {"su": build_su, "abelian": build_abelian, "torus": build_torus}[kind](n)
        path = Path(text)
        if path.is_file():
            return LieAlgebra.from_json(path.read_text())
    except (LieAlgebraError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError("algebra", str(exc)) from exc
    raise ConfigError("algebra", f"unknown algebra {text!r}")


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:\.\d*)?(?:/\d+)?)?\s*\*?\s*([A-Za-z]\w*)\s*")


def parse_combination(g: LieAlgebra, text: str) -> tuple[Fraction, ...]:
    """Rational combination of basis labels such as ``2Z1-Z2`` or ``(X12 + 1/2 Y12)``."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    out = [Fraction(0)] * g.dim
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise ConfigError("twist", f"cannot parse {text!r} at {body[pos:]!r}")
        sign, coef, label = m.groups()
        if pos and not sign:
            raise ConfigError("twist", f"missing operator before {label!r} in {text!r}")
        try:
            k = g.index(label)
        except (LieAlgebraError, ValueError) as exc:
            raise ConfigError("twist", f"unknown basis label {label!r}") from exc
        c = Fraction(coef) if coef else Fraction(1)
        out[k] += -c if sign == "-" else c
        pos = m.end()
    return tuple(out)


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in ";, ":
            if cur.strip():
                terms.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        terms.append(cur.strip())
    return terms


def parse_twist(g: LieAlgebra, text: str) -> Multivector:
    """Twist mini-language.

    * ``lij=v`` (or ``li_j=v``) adds ``v/2 e_i ^ e_j``, 1-based indices;
    * ``A^B:c`` adds ``c/2 A ^ B`` for labels or bracketed combinations;
    * ``canonical`` is ``1/(4n) sum X_ij ^ Y_ij`` on su(n);
    * ``0`` is the zero twist.
    Terms are separated by ``;``, ``,`` or spaces.
    """
    text = text.strip()
    if text in ("0", "zero", ""):
        return Multivector.zero(g, 2)
    if text == "canonical":
        m = re.fullmatch(r"su\((\d+)\)", g.name or "")
        if not m:
            raise ConfigError("twist", "canonical twist needs a builtin su(n)")
        return canonical_r_matrix(int(m.group(1)))
    t = Multivector.zero(g, 2)
    for term in _split_terms(text):
        m = re.fullmatch(r"l(\d+)_(\d+)=(.+)", term) or re.fullmatch(r"l(\d)(\d)=(.+)", term)
        try:
            if m:
                i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
                if not (0 <= i < g.dim and 0 <= j < g.dim) or i == j:
                    raise ConfigError("twist", f"bad index pair in {term!r}")
                v = as_fraction(m.group(3))
                t = t + Multivector(g, 2, {(i, j): v / 2})
                continue
            body, _, coef = term.rpartition(":") if ":" in term else (term, "", "1")
            left, sep, right = body.partition("^")
            if not sep:
                raise ConfigError("twist", f"cannot parse twist term {term!r}")
            A = Multivector.from_vector(g, parse_combination(g, left))
            B = Multivector.from_vector(g, parse_combination(g, right))
            t = t + (A ^ B) * (as_fraction(coef) / 2)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("twist", f"{term!r}: {exc}") from exc
    return t


def parse_range(text: str, field: str = "range") -> list[float]:
    """``a,b,c`` or inclusive ``start:stop:step`` (exact rational stepping)."""
    try:
        if ":" in text:
            start, stop, step = (Fraction(s) for s in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            count = int((stop - start) / step) + 1
            values = [float(start + k * step) for k in range(count)]
        else:
            values = [float(Fraction(s)) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(field, f"{text!r}: {exc}") from exc
    if not values:
        raise ConfigError(field, "empty range")
    return values


def _positive(field: str, value: float):
    if not value > 0:
        raise ConfigError(field, "must be positive")


def _chart_dim(g: LieAlgebra) -> int:
    if g.matrices is None:
        raise ConfigError("algebra", f"{g!r} has no action on CP^n")
    return g.matrices[0].shape[0] - 1


def _twist_norm(t: Multivector) -> float:
    return math.sqrt(sum(float(2 * v) ** 2 for v in t.terms.values()))


# --------------------------------------------------------------------------
# commands; each returns (result dict, verdict, tolerance or None)


def cmd_validate(args):
    g = parse_algebra(args.algebra)
    rep = validate(g)
    return {"algebra": g.name or args.algebra, "dim": g.dim, **rep.to_dict()}, rep.ok, "exact"


def cmd_rmatrix(args):
    g = parse_algebra(args.algebra)
    rep = is_r_matrix(parse_twist(g, args.twist))
    return rep.to_dict(), rep.is_r_matrix, "exact"


def _image_samples(g, args):
    kind, _, arg = args.image.partition(":")
    if kind == "sphere":
        try:
            radius = float(arg or 0.5)
        except ValueError as exc:
            raise ConfigError("image", str(exc)) from exc
        _positive("image", radius)
        return "sphere", radius
    if kind == "moment":
        n = _chart_dim(g)
        num = int(arg or 9)
        if num < 1:
            raise ConfigError("image", "grid size must be >= 1")
        pts = chart_grid(n, args.box, num)
        return "points", np.array([moment_map(g, p) for p in pts])
    path = Path(args.image)
    if path.is_file():
        pts = np.loadtxt(path, delimiter=",", ndmin=2)
        return "points", pts
    raise ConfigError("image", f"unknown image {args.image!r}")


def _admissible_report(g, t, args):
    kind, data = _image_samples(g, args)
    try:
        if kind == "sphere":
            return scan_sphere(g, t, radius=data, n_samples=args.samples, tol=args.tol, refine=args.refine)
        return admissible_on(g, t, data, tol=args.tol)
    except ValueError as exc:
        raise ConfigError("image", str(exc)) from exc


def cmd_admissible(args):
    _positive("tol", args.tol)
    if args.samples < 1:
        raise ConfigError("samples", "must be >= 1")
    g = parse_algebra(args.algebra)
    t = parse_twist(g, args.twist)
    rep = _admissible_report(g, t, args)
    if args.csv:
        _write(args.csv, rep.to_csv())
    return rep.to_dict(), rep.verdict, args.tol


def cmd_deform(args):
    _positive("tol", args.tol)
    g = parse_algebra(args.algebra)
    t = parse_twist(g, args.twist)
    n = _chart_dim(g)
    if args.random:
        rng = np.random.default_rng(args.seed)
        pts = rng.uniform(-args.box, args.box, size=(args.random, 2 * n))
    else:
        if args.num ** (2 * n) > 200_000:
            raise ConfigError("num", "grid too large; use --random")
        pts = chart_grid(n, args.box, args.num)
    bivector = deformed_bivector(invert_form(fubini_study_field(n)), t)
    nd = nondegeneracy_scan(bivector, pts)
    result = {"n": n, "twist": json.loads(t.to_json()), "nondegeneracy": nd.to_dict()}
    closed = True
    if nd.nondegenerate:
        form = deformed_form(t, n)
        try:
            stride = max(1, len(pts) // args.closed_points)
            res = max(closedness_residual(form, p, h=1e-4) for p in pts[::stride])
        except DegeneracyError as exc:
            raise ConfigError("twist", str(exc)) from exc
        closed = res < args.tol
        result["closedness_residual"] = res
        if args.csv:
            _write(args.csv, field_csv(form, pts))
    result["closed"] = closed
    return result, nd.nondegenerate and closed, args.tol


def cmd_volume(args):
    _positive("tol", args.tol)
    fn = pipeline_volume if args.pipeline else numeric_volume
    try:
        r = fn(args.lam)
    except (ValueError, ArithmeticError) as exc:
        raise ConfigError("lambda", str(exc)) from exc
    return r.to_dict(), r.rel_error < args.tol, args.tol


def _grassmann_pairs(args):
    if args.r is not None:
        if args.n is None:
            raise ConfigError("n", "--r needs --n")
        return [(args.n, args.r)]
    ns = [args.n] if args.n is not None else range(2, args.max_n + 1)
    return [(n, r) for n in ns for r in range(1, n)]


def cmd_grassmann(args):
    out = []
    for n, r in _grassmann_pairs(args):
        try:
            out.append(verify_instance(GrassmannInstance.build(n, r)))
        except ValueError as exc:
            raise ConfigError("n", str(exc)) from exc
    return {"instances": [o.to_dict() for o in out]}, all(o.ok for o in out), "exact"


def cmd_sweep(args):
    if args.target == "volume":
        lams = parse_range(args.range)
        fn = pipeline_volume if args.pipeline else numeric_volume
        try:
            rows = [fn(l) for l in lams]
        except (ValueError, ArithmeticError) as exc:
            raise ConfigError("range", str(exc)) from exc
        if args.csv:
            _write(args.csv, sweep_csv(rows))
        return (
            {"columns": ["lambda", "numeric", "closed", "k_lambda", "rel_error"],
             "rows": [r.to_dict() for r in rows]},
            all(r.rel_error < args.tol for r in rows),
            args.tol,
        )
    if args.target == "admissible":
        g = parse_algebra(args.algebra)
        t = parse_twist(g, args.twist)
        norm = _twist_norm(t)
        if norm == 0:
            raise ConfigError("twist", "cannot rescale the zero twist")
        values = parse_range(args.range)
        rows = []
        for v in values:
            scale = v / norm if args.by == "norm" else v
            rep = _admissible_report(g, t * Fraction(scale), args)
            rows.append({args.by: v, "min_abs": rep.min_abs, "verdict": rep.verdict,
                         "n_samples": int(len(rep.samples))})
        if args.csv:
            lines = [f"{args.by},min_abs,verdict"] + [
                f"{r[args.by]!r},{r['min_abs']!r},{str(r['verdict']).lower()}" for r in rows
            ]
            _write(args.csv, "\n".join(lines) + "\n")
        return {"columns": [args.by, "min_abs", "verdict", "n_samples"], "rows": rows}, None, args.tol
    if args.target == "grassmann":
        return cmd_grassmann(args)
    raise ConfigError("target", f"unknown sweep target {args.target!r}")


# --------------------------------------------------------------------------


def _resolve(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _write(path: str, text: str):
    p = _resolve(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise ConfigError("output", str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twistdeform", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"twistdeform {__version__}")
    p.add_argument("-o", "--output", help=f"write the JSON report here (relative to ${OUTPUT_DIR_ENV} if set)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def algebra(sp, default="su2"):
        sp.add_argument("--algebra", default=default, help="su<n>, abelian<n>, torus<n> or JSON file")

    def admissible_opts(sp):
        sp.add_argument("--image", default="sphere:0.5", help="sphere:R, moment:NUM or CSV file of dual points")
        sp.add_argument("--samples", type=int, default=10_000)
        sp.add_argument("--refine", type=int, default=8, help="local minimisations added to sphere scans")
        sp.add_argument("--box", type=float, default=3.0, help="chart half-width for moment:NUM")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--csv")

    sp = sub.add_parser("validate-algebra", help="antisymmetry and Jacobi residuals")
    algebra(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("rmatrix", help="exact Schouten square and ad-invariance")
    algebra(sp)
    sp.add_argument("--twist", required=True)
    sp.set_defaults(func=cmd_rmatrix)

    sp = sub.add_parser("admissible", help="scan det A_t over a set of dual points")
    algebra(sp)
    sp.add_argument("--twist", required=True)
    admissible_opts(sp)
    sp.set_defaults(func=cmd_admissible)

    sp = sub.add_parser("deform", help="deform Fubini-Study on the chart U_1 and check it")
    algebra(sp)
    sp.add_argument("--twist", required=True)
    sp.add_argument("--box", type=float, default=3.0)
    sp.add_argument("--num", type=int, default=21, help="grid points per coordinate")
    sp.add_argument("--random", type=int, default=0, help="use this many seeded random points instead")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--closed-points", type=int, default=50)
    sp.add_argument("--tol", type=float, default=1e-5, help="closedness tolerance")
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_deform)

    sp = sub.add_parser("volume", help="symplectic volume of the deformed CP^1")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--pipeline", action="store_true", help="take the density from the chart pipeline")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("grassmann", help="canonical r-matrix on Gr(r; C^n)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--max-n", type=int, default=4)
    sp.set_defaults(func=cmd_grassmann)

    sp = sub.add_parser("sweep", help="tabulate a command over a parameter range")
    sp.add_argument("target", choices=["volume", "admissible", "grassmann"])
    sp.add_argument("--range", default="-0.9:0.9:0.3", help="a,b,c or start:stop:step")
    sp.add_argument("--pipeline", action="store_true")
    algebra(sp)
    sp.add_argument("--twist", default="l12=1")
    sp.add_argument("--by", choices=["norm", "scale"], default="norm")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--max-n", type=int, default=4)
    admissible_opts(sp)
    sp.set_defaults(func=cmd_sweep, tol=None)
    return p


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command == "sweep" and args.tol is None:
            args.tol = 1e-6 if args.target == "volume" else 1e-9
        result, verdict, tol = args.func(args)
        if verdict is None:
            # plain tabulations have nothing to assert
            verdict = True
    except ConfigError as exc:
        diag = {"error": {"field": exc.field, "message": exc.message}, "version": __version__}
        print(json.dumps(diag, sort_keys=True), file=sys.stderr)
        return 2
    report = {
        "tool": "twistdeform",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "tolerance": tol,
        "verdict": bool(verdict),
        "result": result,
    }
    text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    try:
        if args.output:
            _write(args.output, text)
        else:
            stdout.write(text)
    except ConfigError as exc:
        print(json.dumps({"error": {"field": exc.field, "message": exc.message}}), file=sys.stderr)
        return 2
    return 0 if verdict else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
