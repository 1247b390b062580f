"""Batch command line front end.

Subcommands: mp, check, solve, gen, verify.  Instances and matrices travel
as the versioned JSON documents in formats.py; reports are JSON too, with a
short human summary on stdout whenever --output redirects the machine copy.

Exit codes are a stable contract:

    0  success (for `check`, any verdict; the verdict is in the report)
    2  parse or parameter error
    3  an operand is not MP-invertible
    4  the instance is unsolvable (report still written)
    5  the standing hypotheses fail (report still written)
    6  `verify` rejected the claimed solution
"""

import argparse
import datetime
import os
import sys
from typing import Optional

from . import formats
from .formats import (FormatError, Instance, KINDS, RECT_KINDS, SQUARE_KINDS,
                      SYM_KINDS)
from .matrix import (BACKENDS, CONJUGATE_TRANSPOSE, EXACT, FLOAT, INVOLUTIONS,
                     Matrix, MatrixRing, mp_inverse)
from .oracle import (GenerationError, PAIR_FAMILIES, RECT_FAMILIES,
                     oracle_solve, random_rect_instance, random_sym_instance,
                     random_square_instance, verify_family_against_oracle)
from .rect import RectProblem, check_rect_hypotheses, solve_rect
from .ring import NotMpInvertibleError
from .solvers import (HypothesesFailError, UnsolvableError, check_hypotheses,
                      solvability_conditions, solve, solve_sym_left,
                      solve_sym_right, sym_solvability_conditions)

DEFAULT_TOL = 1e-9
TOL_ENV_VAR = "STAR_SOLVE_TOL"
# float residuals within [tol/BAND, tol*BAND] are too close to call
INDETERMINATE_BAND = 1e3

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_NOT_MP_INVERTIBLE = 3
EXIT_UNSOLVABLE = 4
EXIT_HYPOTHESES_FAIL = 5
EXIT_VERIFY_FAIL = 6

DEFAULT_SAMPLES = 3
ORACLE_TRIALS = 5


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _resolve_tol(args) -> float:
    raw = args.tol
    if raw is None:
        env = os.environ.get(TOL_ENV_VAR)
        if env is not None:
            try:
                raw = float(env)
            except ValueError:
                raise FormatError(f"{TOL_ENV_VAR} must be a float, got {env!r}")
    if raw is None:
        return DEFAULT_TOL
    if not raw > 0:
        raise FormatError(f"tolerance must be positive, got {raw}")
    return raw


def _in_band(residual_max: float, tol: Optional[float]) -> bool:
    if tol is None:
        return False
    return tol / INDETERMINATE_BAND <= residual_max <= tol * INDETERMINATE_BAND


def _sign_of(kind: str) -> str:
    return "plus" if kind in ("plus", "sym_right", "sym_left", "rect_plus") else "minus"


def _ring_for(inst: Instance) -> MatrixRing:
    return MatrixRing(inst.size, inst.backend, inst.involution)


def _instance_summary(inst: Instance) -> dict:
    return {
        "kind": inst.kind,
        "backend": inst.backend,
        "involution": inst.involution,
        "dims": list(inst.dims) if inst.dims is not None else None,
        "shapes": {name: list(m.shape) for name, m in sorted(inst.operands.items())},
    }


def _condition_entries(conditions) -> list:
    return [{"name": c.name,
             "ok": c.ok,
             "residual_max_abs": float(c.residual.max_abs())}
            for c in conditions]


def _hypotheses_section(report) -> dict:
    return {
        "range_ok": report.range_ok,
        "hermitian_ok": report.hermitian_ok,
        "range_defect_max_abs": float(report.range_defect.max_abs()),
        "hermitian_defect_max_abs": float(report.hermitian_defect.max_abs()),
        "tolerance": report.tol,
    }


def _indeterminate(report, conditions) -> bool:
    pairs = [(c.residual.max_abs(), c.tol) for c in conditions]
    if report is not None:
        pairs.append((report.range_defect.max_abs(), report.tol))
        pairs.append((report.hermitian_defect.max_abs(), report.tol))
    return any(_in_band(res, tol) for res, tol in pairs)


def _emit(doc: dict, args, summary_lines) -> None:
    if args.output:
        formats.write_doc(doc, args.output)
        for line in summary_lines:
            print(line)
        print(f"report written to {args.output}")
    else:
        sys.stdout.write(formats.dumps_doc(doc))


def _instance_lhs(inst: Instance, x: Matrix) -> Matrix:
    """Left side of the instance's equation at a candidate x."""
    kind = inst.kind
    a = inst.operand("a")
    b = inst.operand("b")
    if kind in SQUARE_KINDS or kind in RECT_KINDS:
        first = a @ x @ b.star()
        second = b @ x.star() @ a.star()
        return first.sub(second) if _sign_of(kind) == "minus" else first.add(second)
    if kind == "sym_right":
        return (x @ a.star()).add(a @ x.star())
    return (a.star() @ x).add(x.star() @ a)


def _instance_rhs(inst: Instance) -> Matrix:
    return inst.operand("c") if inst.kind in SQUARE_KINDS + RECT_KINDS else inst.operand("b")


def _conditions_for(inst: Instance, rtol: float):
    """(hypothesis report or None, condition tuple) without solving."""
    sign = _sign_of(inst.kind)
    if inst.kind in SQUARE_KINDS:
        ring = _ring_for(inst)
        report = check_hypotheses(ring, inst.operand("a"), inst.operand("b"), rtol=rtol)
        if not report.ok:
            return report, ()
        return report, solvability_conditions(sign, report, inst.operand("c"), rtol=rtol)
    if inst.kind in SYM_KINDS:
        ring = _ring_for(inst)
        side = "right" if inst.kind == "sym_right" else "left"
        conds = sym_solvability_conditions(ring, side, inst.operand("a"),
                                           inst.operand("b"), rtol=rtol)
        return None, conds
    problem = RectProblem(inst.operand("a"), inst.operand("b"), inst.operand("c"))
    report = check_rect_hypotheses(problem, rtol=rtol)
    if not report.ok:
        return report, ()
    return report, solvability_conditions(sign, report, inst.operand("c"), rtol=rtol)


def _solve_instance(inst: Instance, rtol: float):
    sign = _sign_of(inst.kind)
    if inst.kind in SQUARE_KINDS:
        ring = _ring_for(inst)
        return solve(ring, sign, inst.operand("a"), inst.operand("b"),
                     inst.operand("c"), rtol=rtol)
    if inst.kind == "sym_right":
        return solve_sym_right(_ring_for(inst), inst.operand("a"),
                               inst.operand("b"), rtol=rtol)
    if inst.kind == "sym_left":
        return solve_sym_left(_ring_for(inst), inst.operand("a"),
                              inst.operand("b"), rtol=rtol)
    problem = RectProblem(inst.operand("a"), inst.operand("b"), inst.operand("c"))
    return solve_rect(problem, sign=sign, rtol=rtol)


def _oracle_triple(inst: Instance):
    """(sign, A, B, rhs) of the real-linearized system for this instance."""
    a = inst.operand("a")
    if inst.kind in SQUARE_KINDS or inst.kind in RECT_KINDS:
        return _sign_of(inst.kind), a, inst.operand("b"), inst.operand("c")
    eye = Matrix.identity(a.rows, inst.involution, inst.backend)
    if inst.kind == "sym_right":
        return "plus", eye, a, inst.operand("b")
    return "plus", a.star(), eye, inst.operand("b")


def _base_report(command: str, inst: Instance, tol_rtol: float) -> dict:
    return {
        "version": formats.FORMAT_VERSION,
        "command": command,
        "generated_at": _utc_now(),
        "instance": _instance_summary(inst),
        "tolerance": tol_rtol if inst.backend == FLOAT else None,
    }


# -- mp ------------------------------------------------------------------


def cmd_mp(args) -> int:
    rtol = _resolve_tol(args)
    m = formats.load_matrix(args.input)
    ring = MatrixRing(max(m.rows, m.cols), m.backend, m.involution)
    dagger = mp_inverse(m)
    names = ("axa_minus_a", "xax_minus_x", "ax_hermitian_defect", "xa_hermitian_defect")
    defects = ring.penrose_defects(m, dagger)
    doc = {
        "version": formats.FORMAT_VERSION,
        "command": "mp",
        "generated_at": _utc_now(),
        "backend": m.backend,
        "involution": m.involution,
        "shape": list(m.shape),
        "mp_inverse": formats.encode_matrix(dagger),
        "penrose_residuals": {name: float(d.max_abs())
                              for name, d in zip(names, defects)},
        "tolerance": rtol if m.backend == FLOAT else None,
    }
    worst = max(doc["penrose_residuals"].values())
    _emit(doc, args, [
        f"mp-inverse of {m.rows}x{m.cols} {m.backend} matrix ({m.involution})",
        f"penrose residual max |entry| = {worst:.3e}",
    ])
    return EXIT_OK


# -- check ---------------------------------------------------------------


def _verdict(report, conditions) -> tuple:
    if report is not None and not report.ok:
        return "hypotheses_failed", list(report.failed_names())
    failed = [c.name for c in conditions if not c.ok]
    return ("unsolvable", failed) if failed else ("solvable", [])


def cmd_check(args) -> int:
    rtol = _resolve_tol(args)
    inst = formats.load_instance(args.input)
    report, conditions = _conditions_for(inst, rtol)
    verdict, failed = _verdict(report, conditions)
    doc = _base_report("check", inst, rtol)
    doc.update({
        "hypotheses": _hypotheses_section(report) if report is not None else None,
        "verdict": verdict,
        "failed_conditions": failed,
        "conditions": _condition_entries(conditions),
        "indeterminate": inst.backend == FLOAT and _indeterminate(report, conditions),
    })
    lines = [f"{inst.kind} instance, {inst.backend} backend, {inst.involution}",
             f"verdict: {verdict}" + (f" ({', '.join(failed)})" if failed else "")]
    if doc["indeterminate"]:
        lines.append("indeterminate: residuals too close to the tolerance to call")
    _emit(doc, args, lines)
    return EXIT_OK


# -- solve ---------------------------------------------------------------


def _sample_section(fam, base_seed: int, count: int) -> list:
    samples = []
    for i in range(count):
        seed = base_seed + i
        x = fam.sample(seed)
        residual = fam.residual(x)
        verified = fam.is_solution(x)
        if not verified:
            raise RuntimeError(f"sample for seed {seed} failed re-verification")
        samples.append({
            "seed": seed,
            "solution": formats.encode_matrix(x),
            "residual_max_abs": float(residual.max_abs()),
            "verified": True,
        })
    return samples


def _oracle_section(inst: Instance, fam) -> dict:
    if inst.backend != EXACT:
        raise FormatError("--oracle needs the exact backend")
    sign, oa, ob, rhs = _oracle_triple(inst)
    result = oracle_solve(sign, oa, ob, rhs)
    agreement = verify_family_against_oracle(fam, result, trials=ORACLE_TRIALS)
    if not (result.solvable and agreement.ok):
        raise RuntimeError("oracle cross-check failed on a solved instance")
    return {
        "solvable": result.solvable,
        "real_dimension": result.real_dimension,
        "agreement": agreement.as_dict(),
    }


def cmd_solve(args) -> int:
    rtol = _resolve_tol(args)
    inst = formats.load_instance(args.input)
    if args.oracle and inst.backend != EXACT:
        raise FormatError("--oracle needs the exact backend")
    doc = _base_report("solve", inst, rtol)

    try:
        fam = _solve_instance(inst, rtol)
    except HypothesesFailError as exc:
        doc.update({
            "hypotheses": _hypotheses_section(exc.report),
            "verdict": "hypotheses_failed",
            "failed_conditions": list(exc.report.failed_names()),
            "conditions": [],
            "indeterminate": inst.backend == FLOAT and _indeterminate(exc.report, ()),
        })
        _emit(doc, args, [f"{inst.kind} instance: hypotheses failed "
                          f"({', '.join(doc['failed_conditions'])})"])
        return EXIT_HYPOTHESES_FAIL
    except UnsolvableError as exc:
        doc.update({
            "hypotheses": (_hypotheses_section(exc.report)
                           if exc.report is not None else None),
            "verdict": "unsolvable",
            "failed_conditions": list(exc.failed),
            "conditions": _condition_entries(exc.conditions),
            "indeterminate": inst.backend == FLOAT and
                             _indeterminate(exc.report, exc.conditions),
        })
        _emit(doc, args, [f"{inst.kind} instance: unsolvable "
                          f"({', '.join(exc.failed)})"])
        return EXIT_UNSOLVABLE

    if not fam.is_solution(fam.x0):
        raise RuntimeError("particular solution failed re-verification")
    _, conditions = _conditions_for(inst, rtol)
    residual = fam.residual(fam.x0)
    base_seed = args.seed if args.seed is not None else 0
    doc.update({
        "hypotheses": (_hypotheses_section(fam.report)
                       if fam.report is not None else None),
        "verdict": "solvable",
        "failed_conditions": [],
        "conditions": _condition_entries(conditions),
        "indeterminate": inst.backend == FLOAT and
                         _indeterminate(fam.report, conditions),
        "x0": formats.encode_matrix(fam.x0),
        "residual_max_abs": float(residual.max_abs()),
        "samples": _sample_section(fam, base_seed, args.samples),
    })
    lines = [f"{inst.kind} instance, {inst.backend} backend, {inst.involution}",
             "verdict: solvable",
             f"x0 residual max |entry| = {doc['residual_max_abs']:.3e}",
             f"{args.samples} sample solutions verified"]
    if args.oracle:
        doc["oracle"] = _oracle_section(inst, fam)
        lines.append(f"oracle agreement: ok "
                     f"(real dimension {doc['oracle']['real_dimension']})")
    _emit(doc, args, lines)
    return EXIT_OK


# -- gen -----------------------------------------------------------------


def _parse_dims(kind: str, raw: Optional[str]):
    if kind in RECT_KINDS:
        if raw is None:
            return (2, 2, 2)
        parts = raw.split(",")
        if len(parts) != 3:
            raise FormatError(f"rect kinds need --dims m,n,p, got {raw!r}")
        try:
            dims = tuple(int(p) for p in parts)
        except ValueError:
            raise FormatError(f"--dims must be integers, got {raw!r}")
        if any(d < 1 for d in dims):
            raise FormatError(f"--dims must be positive, got {raw!r}")
        return dims
    if raw is None:
        return 2
    try:
        size = int(raw)
    except ValueError:
        raise FormatError(f"--dims must be a single integer for {kind!r}, got {raw!r}")
    if size < 1:
        raise FormatError(f"--dims must be positive, got {raw!r}")
    return size


def cmd_gen(args) -> int:
    import random as _random
    kind = args.kind
    if kind not in KINDS:
        raise FormatError(f"--kind must be one of {KINDS}, got {kind!r}")
    if args.backend not in BACKENDS:
        raise FormatError(f"--backend must be one of {BACKENDS}")
    if args.involution not in INVOLUTIONS:
        raise FormatError(f"--involution must be one of {INVOLUTIONS}")
    dims = _parse_dims(kind, args.dims)
    rng = _random.Random(args.seed)
    sign = _sign_of(kind)

    if kind in SQUARE_KINDS:
        family = args.family or "unitary"
        if family not in PAIR_FAMILIES:
            raise FormatError(f"--family must be one of {PAIR_FAMILIES} for {kind!r}")
        a, b, c = random_square_instance(rng, sign, dims, family,
                                         args.force_solvable, args.involution)
        operands, inst_dims = {"a": a, "b": b, "c": c}, None
    elif kind in SYM_KINDS:
        if args.family is not None:
            raise FormatError("--family does not apply to sym kinds")
        side = "right" if kind == "sym_right" else "left"
        a, b = random_sym_instance(rng, side, dims, args.force_solvable,
                                   args.involution)
        operands, inst_dims = {"a": a, "b": b}, None
    else:
        family = args.family or "coisometry"
        if family not in RECT_FAMILIES:
            raise FormatError(f"--family must be one of {RECT_FAMILIES} for {kind!r}")
        problem = random_rect_instance(rng, dims, family, args.force_solvable,
                                       args.involution, sign)
        operands, inst_dims = {"a": problem.a, "b": problem.b, "c": problem.c}, dims

    if args.backend == FLOAT:
        operands = {name: m.to_float() for name, m in operands.items()}
    inst = formats.make_instance(kind, args.backend, args.involution, operands,
                                 inst_dims, args.seed)
    doc = formats.instance_to_doc(inst)
    if args.output:
        formats.write_doc(doc, args.output)
        shape = f"dims {dims}" if kind in RECT_KINDS else f"size {dims}"
        print(f"wrote {kind} instance ({args.backend}, {args.involution}, "
              f"{shape}, seed {args.seed}) to {args.output}")
    else:
        sys.stdout.write(formats.dumps_doc(doc))
    return EXIT_OK


# -- verify ---------------------------------------------------------------


def cmd_verify(args) -> int:
    rtol = _resolve_tol(args)
    inst = formats.load_instance(args.input)
    x = formats.load_matrix(args.solution)
    if x.backend != inst.backend or x.involution != inst.involution:
        raise FormatError("solution tags do not match the instance")
    if inst.kind in RECT_KINDS:
        m, n, p = inst.dims
        expected = (n, p)
    else:
        expected = inst.operand("a").shape
    if x.shape != expected:
        raise FormatError(f"solution must have shape {expected}, got {x.shape}")

    residual = _instance_lhs(inst, x).sub(_instance_rhs(inst))
    residual_max = float(residual.max_abs())
    if inst.backend == EXACT:
        verified = residual.is_zero()
        tol_abs = None
    else:
        scale = max([residual_max] + [m.max_abs() for m in inst.operands.values()]
                    + [x.max_abs()])
        tol_abs = rtol * (1.0 + scale)
        verified = residual_max <= tol_abs

    doc = {
        "version": formats.FORMAT_VERSION,
        "command": "verify",
        "generated_at": _utc_now(),
        "instance": _instance_summary(inst),
        "solution_shape": list(x.shape),
        "tolerance": tol_abs,
        "residual_max_abs": residual_max,
        "verified": verified,
    }
    _emit(doc, args, [
        f"residual max |entry| = {residual_max:.3e}",
        "verdict: verified" if verified else "verdict: FAILED",
    ])
    return EXIT_OK if verified else EXIT_VERIFY_FAIL


# -- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starsolve",
        description="Solve a x b* -/+ b x* a* = c and its symmetric special "
                    "cases over exact or float matrix rings.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, output=True):
        if output:
            p.add_argument("--output", help="write the JSON report here "
                           "(summary goes to stdout); default prints JSON")
        p.add_argument("--tol", type=float, default=None,
                       help=f"relative float tolerance (default {DEFAULT_TOL}, "
                            f"or {TOL_ENV_VAR})")

    p_mp = sub.add_parser("mp", help="Moore-Penrose inverse of one matrix")
    p_mp.add_argument("--input", required=True, help="matrix file (JSON)")
    common(p_mp)
    p_mp.set_defaults(func=cmd_mp)

    p_check = sub.add_parser("check", help="hypotheses and solvability verdict, "
                                           "without solving")
    p_check.add_argument("--input", required=True, help="instance file (JSON)")
    common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_solve = sub.add_parser("solve", help="particular solution plus seeded "
                                           "samples from the general family")
    p_solve.add_argument("--input", required=True, help="instance file (JSON)")
    p_solve.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                         help=f"family samples to draw (default {DEFAULT_SAMPLES})")
    p_solve.add_argument("--seed", type=int, default=None,
                         help="base seed for the samples (default 0)")
    p_solve.add_argument("--oracle", action="store_true",
                         help="cross-check against the exact linearization oracle")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a random instance whose "
                                       "operands satisfy the hypotheses")
    p_gen.add_argument("--kind", required=True, choices=KINDS)
    p_gen.add_argument("--family", default=None,
                       help="generator family (square: %s; rect: %s)"
                            % (", ".join(PAIR_FAMILIES), ", ".join(RECT_FAMILIES)))
    p_gen.add_argument("--dims", default=None,
                       help="size n, or m,n,p for rect kinds (default 2)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--force-solvable", action="store_true",
                       help="build c from a random solution so the instance "
                            "is solvable by construction")
    p_gen.add_argument("--backend", default=EXACT, choices=BACKENDS)
    p_gen.add_argument("--involution", default=CONJUGATE_TRANSPOSE,
                       choices=INVOLUTIONS)
    p_gen.add_argument("--output", help="write the instance here (default stdout)")
    p_gen.set_defaults(func=cmd_gen, tol=None)

    p_verify = sub.add_parser("verify", help="substitute a claimed solution "
                                             "into an instance's equation")
    p_verify.add_argument("--input", required=True, help="instance file (JSON)")
    p_verify.add_argument("--solution", required=True, help="matrix file (JSON)")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, GenerationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except NotMpInvertibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_MP_INVERTIBLE


if __name__ == "__main__":
    sys.exit(main())
