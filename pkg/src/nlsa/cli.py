"""Command-line front end.

Exit codes: 0 success, 1 input/parse error, 2 mathematical property failure.
All output is canonical and byte-stable across runs; --json switches every
command to a machine-readable report on stdout.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .algebra import NLieSuperalgebra, series
from .cohomology import cohomology_dims
from .extensions import ExtensionData, build_extension
from .linalg import GradedSubspace, unit_vec
from .metric import (MetricAlgebra, form_properties, isotropic_ideal_abelian_check,
                     maximal_isotropic_stable, nilpotent_pipeline,
                     reconstruct_tstar, tstar_equivalence, tstar_extension,
                     verify_isometric_isomorphism)
from .representation import (Representation, cached_adjoint, cached_coadjoint,
                             cached_trivial)
from .scalars import format_scalar
from .serialize import (SerializationError, algebra_dumps, algebra_loads,
                        canonical_dumps, cochain_dumps, cochain_loads,
                        form_dumps, form_loads)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MATH = 2


class InputError(Exception):
    pass


class MathError(Exception):
    pass


def _fixture_dir() -> Path:
    env = os.environ.get("NLSA_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).parent / "fixtures"


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    candidate = _fixture_dir() / path
    if candidate.exists():
        return candidate
    raise InputError(f"no such file: {path} (also tried {candidate})")


def _load_algebra(path: str) -> NLieSuperalgebra:
    try:
        return algebra_loads(_resolve(path).read_text(encoding="utf-8"))
    except SerializationError as exc:
        raise InputError(f"{path}: {exc}") from None


def _module(g: NLieSuperalgebra, name: str) -> Representation:
    if name == "adjoint":
        return cached_adjoint(g)
    if name == "coadjoint":
        return cached_coadjoint(g)
    if name == "trivial":
        return cached_trivial(g)
    raise InputError(f"unknown module {name!r} (adjoint, coadjoint, trivial)")


def _subspace_from_names(g: NLieSuperalgebra, names: str) -> GradedSubspace:
    rows = []
    for nm in names.split(","):
        nm = nm.strip()
        try:
            rows.append(unit_vec(g.space.index(nm)))
        except KeyError:
            raise InputError(f"unknown basis name {nm!r} in --ideal") from None
    return GradedSubspace(g.space, rows)


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.json:
        sys.stdout.write(canonical_dumps(payload))
    else:
        for line in text_lines:
            print(line)


def _write(path: Path, content: str) -> None:
    path.write_text(content, encoding="utf-8")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    g = _load_algebra(args.file)
    report = g.check_axioms()
    payload = {
        "name": g.name,
        "ok": report.ok,
        "failures": [{"axiom": f.axiom, "witness": list(f.witness),
                      "detail": f.detail} for f in report.failures],
    }
    lines = [f"algebra: {g.name or args.file}",
             f"axioms: {'pass' if report.ok else 'FAIL'}"]
    for f in report.failures:
        lines.append(f"  {f.axiom} fails at ({', '.join(f.witness)}): "
                     f"{f.detail}")
    _emit(args, lines, payload)
    return EXIT_OK if report.ok else EXIT_MATH


def cmd_series(args) -> int:
    g = _load_algebra(args.file)
    sr = series(g)
    solv = sr.solvable_length
    nilp = sr.nilpotent_length
    payload = {
        "name": g.name,
        "derived_dims": [s.dim for s in sr.derived],
        "lower_central_dims": [s.dim for s in sr.lower_central],
        "centralizer_dims": [s.dim for s in sr.centralizer_series],
        "solvable_length": solv,
        "nilpotent_length": nilp,
    }
    lines = [
        f"algebra: {g.name or args.file}",
        "solvable length: " + (str(solv) if solv is not None else "not solvable"),
        "nilpotent length: " + (str(nilp) if nilp is not None
                                else "not nilpotent"),
        "derived dims: " + " ".join(str(s.dim) for s in sr.derived),
        "lower central dims: " + " ".join(str(s.dim) for s in sr.lower_central),
        "centralizer dims: " + " ".join(
            str(s.dim) for s in sr.centralizer_series),
    ]
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    g = _load_algebra(args.file)
    rho = _module(g, args.module)
    parities = [0, 1] if args.parity == "both" else [int(args.parity)]
    results = []
    for p in parities:
        dims = cohomology_dims(rho, args.degree, p,
                               wedge_compatible=args.wedge_compatible)
        results.append(dims)
    payload = {
        "name": g.name,
        "module": args.module,
        "degree": args.degree,
        "wedge_compatible": args.wedge_compatible,
        "blocks": [{
            "parity": d.parity,
            "dim_cochains": d.dim_cochains,
            "dim_cocycles": d.dim_cocycles,
            "dim_coboundaries": d.dim_coboundaries,
            "dim_cohomology": d.dim_cohomology,
        } for d in results],
    }
    lines = [f"algebra: {g.name or args.file}",
             f"module: {args.module}  degree: {args.degree}  "
             f"complex: {'wedge-compatible' if args.wedge_compatible else 'full'}"]
    for d in results:
        lines.append(
            f"parity {d.parity}: dim C = {d.dim_cochains}, "
            f"dim Z = {d.dim_cocycles}, dim B = {d.dim_coboundaries}, "
            f"dim H = {d.dim_cohomology}")
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_tstar(args) -> int:
    g = _load_algebra(args.file)
    theta = None
    if args.theta:
        rho = cached_coadjoint(g)
        try:
            theta = cochain_loads(_resolve(args.theta).read_text("utf-8"), rho)
        except SerializationError as exc:
            raise InputError(f"{args.theta}: {exc}") from None
    try:
        ext = tstar_extension(g, theta)
    except ValueError as exc:
        raise MathError(str(exc)) from None
    prefix = args.output or (Path(args.file).stem + "_tstar")
    alg_path = Path(prefix + ".json")
    form_path = Path(prefix + "_form.json")
    _write(alg_path, algebra_dumps(ext.total.algebra))
    _write(form_path, form_dumps(ext.total.form))
    payload = {
        "base": g.name,
        "total_dim": ext.total.algebra.dim,
        "theta_zero": ext.theta.is_zero(),
        "algebra_file": str(alg_path),
        "form_file": str(form_path),
    }
    lines = [f"T*-extension of {g.name or args.file}: dim {ext.total.dim}",
             f"theta: {'zero' if ext.theta.is_zero() else 'nonzero'}",
             f"wrote {alg_path}",
             f"wrote {form_path}"]
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_extend(args) -> int:
    base = _load_algebra(args.base)
    fiber = _load_algebra(args.fiber)
    if fiber.constants:
        raise MathError("the fiber must be abelian (zero bracket)")
    if args.action != "trivial":
        raise InputError("only the trivial action is available from files")
    action = Representation(base, fiber.space, {}, kind="trivial")
    rho = action
    try:
        cocycle = cochain_loads(_resolve(args.cocycle).read_text("utf-8"), rho)
    except SerializationError as exc:
        raise InputError(f"{args.cocycle}: {exc}") from None
    try:
        total = build_extension(ExtensionData(base, action, cocycle))
    except ValueError as exc:
        raise MathError(str(exc)) from None
    prefix = args.output or (Path(args.base).stem + "_ext")
    out = Path(prefix + ".json")
    _write(out, algebra_dumps(total))
    payload = {"base": base.name, "fiber": fiber.name,
               "total_dim": total.dim, "algebra_file": str(out)}
    lines = [f"extension of {base.name} by {fiber.name}: dim {total.dim}",
             f"wrote {out}"]
    _emit(args, lines, payload)
    return EXIT_OK


def _load_metric(args) -> MetricAlgebra:
    g = _load_algebra(args.file)
    try:
        form = form_loads(_resolve(args.form).read_text("utf-8"), g.space)
    except SerializationError as exc:
        raise InputError(f"{args.form}: {exc}") from None
    props = form_properties(g, form)
    if not props.all_ok:
        raise MathError(f"the form is not metric: {props}")
    return MetricAlgebra(g, form)


def cmd_reconstruct(args) -> int:
    m = _load_metric(args)
    g = m.algebra
    try:
        if args.ideal:
            ideal = _subspace_from_names(g, args.ideal)
            rec = reconstruct_tstar(m, ideal)
            verified = verify_isometric_isomorphism(
                m, rec.extension.total, rec.phi_columns)
            used_line = False
            bound = None
            qlen = series(rec.quotient).nilpotent_length
        else:
            result = nilpotent_pipeline(m)
            rec = result.reconstruction
            verified = result.isometry_verified
            used_line = result.used_line_extension
            bound = result.bound
            qlen = result.quotient_length
    except ValueError as exc:
        raise MathError(str(exc)) from None
    prefix = args.output or (Path(args.file).stem + "_reconstructed")
    qpath = Path(prefix + "_quotient.json")
    tpath = Path(prefix + "_theta.json")
    _write(qpath, algebra_dumps(rec.quotient))
    _write(tpath, cochain_dumps(rec.theta))
    payload = {
        "quotient_dim": rec.quotient.dim,
        "quotient_nilpotent_length": qlen,
        "bound": bound,
        "theta_zero": rec.theta.is_zero(),
        "line_extension_used": used_line,
        "isometry_verified": verified,
        "quotient_file": str(qpath),
        "theta_file": str(tpath),
    }
    lines = [f"quotient dim: {rec.quotient.dim}",
             f"quotient nilpotent length: {qlen}"
             + (f" (bound {bound})" if bound is not None else ""),
             f"theta: {'zero' if rec.theta.is_zero() else 'nonzero'}",
             f"isometry verified: {verified}",
             f"wrote {qpath}",
             f"wrote {tpath}"]
    _emit(args, lines, payload)
    return EXIT_OK if verified else EXIT_MATH


def cmd_isotropic(args) -> int:
    m = _load_metric(args)
    g = m.algebra
    try:
        if args.ideal:
            ideal = _subspace_from_names(g, args.ideal)
            rep = isotropic_ideal_abelian_check(m, ideal)
            payload = {
                "mode": "lagrangian-check",
                "is_ideal": rep.is_ideal,
                "is_abelian": rep.is_abelian,
                "equivalence_holds": rep.equivalence_holds,
                "self_perpendicular": rep.self_perpendicular,
            }
            lines = [f"ideal: {rep.is_ideal}",
                     f"abelian: {rep.is_abelian}",
                     f"ideal iff abelian: {rep.equivalence_holds}",
                     f"equals own orthogonal: {rep.self_perpendicular}"]
            _emit(args, lines, payload)
            return EXIT_OK if rep.equivalence_holds else EXIT_MATH
        start = GradedSubspace.zero(g.space)
        w = maximal_isotropic_stable(m, start)
    except ValueError as exc:
        raise MathError(str(exc)) from None
    rows = [{g.space.names[i]: format_scalar(c) for i, c in sorted(r.items())}
            for r in w.rows]
    payload = {"mode": "maximal-isotropic-stable", "dim": w.dim, "rows": rows}
    lines = [f"maximal isotropic stable subspace: dim {w.dim}"]
    for r in rows:
        lines.append("  " + " + ".join(f"{v}*{k}" for k, v in r.items()))
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_equivalence(args) -> int:
    g = _load_algebra(args.file)
    rho = cached_coadjoint(g)
    thetas = []
    for pth in (args.theta1, args.theta2):
        try:
            thetas.append(cochain_loads(_resolve(pth).read_text("utf-8"), rho))
        except SerializationError as exc:
            raise InputError(f"{pth}: {exc}") from None
    try:
        tstar_extension(g, thetas[0])
        tstar_extension(g, thetas[1])
    except ValueError as exc:
        raise MathError(f"input cocycle rejected: {exc}") from None
    res = tstar_equivalence(g, thetas[0], thetas[1])
    payload = {
        "equivalent": res.equivalent,
        "isometric": res.isometric,
        "induced_form_zero": (res.equivalent and all(
            c == 0 for row in res.induced_gram for c in row)),
    }
    lines = [f"equivalent: {res.equivalent}",
             f"isometrically equivalent: {res.isometric}"]
    if res.equivalent and args.output:
        tpath = Path(args.output + "_thetaprime.json")
        _write(tpath, cochain_dumps(res.theta_prime))
        payload["theta_prime_file"] = str(tpath)
        lines.append(f"wrote {tpath}")
    _emit(args, lines, payload)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nlsa",
        description="Exact workbench for first-class n-Lie superalgebras")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true",
                       help="emit a machine-readable JSON report")

    p = sub.add_parser("validate", help="check the algebra axioms")
    p.add_argument("file")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("series", help="derived/lower-central series and lengths")
    p.add_argument("file")
    common(p)
    p.set_defaults(fn=cmd_series)

    p = sub.add_parser("cohomology", help="cochain/cocycle/cohomology dimensions")
    p.add_argument("file")
    p.add_argument("--module", default="trivial",
                   choices=["trivial", "adjoint", "coadjoint"])
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--parity", default="both", choices=["0", "1", "both"])
    p.add_argument("--wedge-compatible", action="store_true",
                   help="restrict to the wedge-compatible subcomplex")
    common(p)
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("tstar", help="build a T*-extension")
    p.add_argument("file")
    p.add_argument("--theta", help="cochain file with the twisting cocycle")
    p.add_argument("--output", help="output file prefix")
    common(p)
    p.set_defaults(fn=cmd_tstar)

    p = sub.add_parser("extend", help="build an abelian extension from a cocycle")
    p.add_argument("base")
    p.add_argument("fiber")
    p.add_argument("cocycle")
    p.add_argument("--action", default="trivial", choices=["trivial"])
    p.add_argument("--output", help="output file prefix")
    common(p)
    p.set_defaults(fn=cmd_extend)

    p = sub.add_parser("reconstruct",
                       help="exhibit a metric algebra as a T*-extension")
    p.add_argument("file")
    p.add_argument("--form", required=True)
    p.add_argument("--ideal",
                   help="comma-separated basis names spanning the ideal; "
                        "omitted: run the nilpotent pipeline")
    p.add_argument("--output", help="output file prefix")
    common(p)
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("isotropic",
                       help="maximal isotropic stable subspace, or --ideal check")
    p.add_argument("file")
    p.add_argument("--form", required=True)
    p.add_argument("--ideal", help="check this half-dimensional subspace "
                                   "instead of growing one")
    common(p)
    p.set_defaults(fn=cmd_isotropic)

    p = sub.add_parser("equivalence",
                       help="decide equivalence of two T*-extensions")
    p.add_argument("file")
    p.add_argument("theta1")
    p.add_argument("theta2")
    p.add_argument("--output", help="output file prefix")
    common(p)
    p.set_defaults(fn=cmd_equivalence)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathError as exc:
        print(f"property failure: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
