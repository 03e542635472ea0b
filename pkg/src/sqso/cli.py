"""Command-line interface.

    sqso validate MODEL
    sqso classify MODEL
    sqso simulate MODEL --x0 X0 [--steps N] [--tol T] [--out CSV]
    sqso lyapunov MODEL [--side A|B|both]
    sqso omega MODEL --x0 X0 [--steps N] [--side A|B|both] [--allow-uncertified]
    sqso template NAME [--b ...] [--y ...]

MODEL is a JSON file ``{"m": 3, "A": [["1", "0", "0"], ...], "B": [...]}``
with rational-string entries, or ``builtin:NAME`` for a bundled model.
Reports go to stdout as JSON.  Exit codes: 0 success, 1 usage/IO error,
2 domain rejection.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import fixtures
from .dynamics import DEFAULT_CONV_TOL, DEFAULT_MAX_STEPS, detect_limit, iterate
from .errors import RationalParseError, SqsoError, UncertifiedError
from .lyapunov import (Side, check_certificate_preconditions, cone_extreme_rays,
                       rowsum_candidate)
from .numerics import RationalMatrix, rat_format, rat_parse
from .omega import StopConfig, omega_upper_set
from .operators import Admissibility, SqsoPair, classify, validate_pair

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
X0_SUM_TOL = Fraction(1, 10**9)


class UsageError(Exception):
    pass


class DomainRejection(Exception):
    def __init__(self, message: str, report: Optional[dict] = None):
        super().__init__(message)
        self.report = report


def _fmt_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not np.isfinite(v):
            return json.dumps(str(v))
        return format(v, ".17g")
    if isinstance(v, Fraction):
        return json.dumps(rat_format(v))
    return json.dumps(str(v))


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_fmt_scalar(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return _fmt_scalar(obj)


def load_model(source: str) -> tuple[dict, RationalMatrix, RationalMatrix]:
    if source.startswith("builtin:"):
        try:
            data = fixtures.builtin_model(source[len("builtin:"):])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    else:
        try:
            data = json.loads(Path(source).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read model {source!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"model {source!r} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not {"A", "B"} <= data.keys():
        raise UsageError("model needs keys 'A' and 'B'")
    try:
        A = RationalMatrix.from_rows(data["A"])
        B = RationalMatrix.from_rows(data["B"])
    except (RationalParseError, TypeError, SqsoError) as exc:
        raise UsageError(f"bad matrix entry: {exc}") from None
    m = data.get("m", A.rows)
    if not (A.shape == B.shape == (m, m)):
        raise UsageError(f"model matrices must both be {m}x{m}, got {A.shape} and {B.shape}")
    return data, A, B


def parse_x0(text: str, m: int) -> tuple[np.ndarray, dict]:
    try:
        vals = [rat_parse(t) for t in text.split(",")]
    except RationalParseError as exc:
        raise UsageError(f"bad --x0: {exc}") from None
    if len(vals) != m:
        raise UsageError(f"--x0 has {len(vals)} coordinates, model has m={m}")
    if any(v < 0 for v in vals):
        raise UsageError("--x0 coordinates must be nonnegative")
    total = sum(vals)
    if abs(total - 1) > X0_SUM_TOL:
        raise UsageError(f"--x0 sums to {float(total)!r}, not 1 (tolerance 1e-9)")
    echo = {"x0": [float(v) for v in vals]}
    if total != 1:
        # exact rescale of an input already within 1e-9 of the simplex; reported, not silent
        vals = [v / total for v in vals]
        echo["x0_rescaled"] = True
    return np.array([float(v) for v in vals]), echo


def _pair(A, B, allow: Sequence[Admissibility]) -> SqsoPair:
    pair = validate_pair(A, B)
    if pair.admissibility not in allow:
        raise DomainRejection(f"pair is {pair.admissibility.value}; this command needs "
                              + " or ".join(a.value for a in allow),
                              {"admissibility": pair.admissibility.value})
    return pair


def _pair_summary(pair: SqsoPair) -> dict:
    return {
        "admissibility": pair.admissibility.value,
        "det_A": pair.det_a,
        "det_B": pair.det_b,
        "rows_identical_A": pair.a_rows_identical,
        "rows_identical_B": pair.b_rows_identical,
        "in_script_A": pair.in_script_a,
    }


def cmd_validate(args, A, B):
    pair = validate_pair(A, B)
    status = EXIT_DOMAIN if pair.admissibility is Admissibility.INVALID else EXIT_OK
    return _pair_summary(pair), status


def cmd_classify(args, A, B):
    pair = _pair(A, B, [Admissibility.STRICT])
    cl = classify(pair)
    res = {"case": cl.case.value}
    if cl.point is not None:
        res["point"] = list(cl.point)
    if cl.matrix is not None:
        res["matrix"] = [list(r) for r in cl.matrix.entries]
        res["identical_rows_in"] = cl.via
    return res, EXIT_OK


def cmd_simulate(args, A, B):
    pair = _pair(A, B, [Admissibility.STRICT, Admissibility.WEAK])
    x0, echo = parse_x0(args.x0, pair.m)
    args._echo.update(echo)
    traj = iterate(pair, x0, max_steps=args.steps, conv_tol=args.tol)
    if args.out:
        write_trajectory_csv(args.out, traj)
    lim = detect_limit(traj, pair)
    limit = {"kind": lim.kind.value}
    if lim.point is not None:
        limit["point"] = lim.point
        limit["residual"] = lim.residual
    if lim.period is not None:
        limit["period"] = lim.period
        limit["representatives"] = lim.representatives
    return {
        "stop_reason": traj.stop_reason.value,
        "period": traj.period,
        "steps": traj.n_steps,
        "final_point": traj.final,
        "last_delta": float(traj.step_deltas[-1]) if traj.n_steps else None,
        "limit": limit,
    }, EXIT_OK


def write_trajectory_csv(path, traj) -> None:
    m = traj.points.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step"] + [f"x_{k + 1}" for k in range(m)] + ["delta"])
        for n, x in enumerate(traj.points):
            delta = "" if n == 0 else format(float(traj.step_deltas[n - 1]), ".17g")
            w.writerow([n] + [format(float(v), ".17g") for v in x] + [delta])


def _sides(side: str) -> list[Side]:
    return [Side.A, Side.B] if side == "both" else [Side(side)]


def cmd_lyapunov(args, A, B):
    pair = _pair(A, B, [Admissibility.STRICT, Admissibility.WEAK])
    report = check_certificate_preconditions(pair)
    sides = {}
    for s in _sides(args.side):
        M = A if s is Side.A else B
        basis = cone_extreme_rays(M, s)
        cand = rowsum_candidate(M)
        entry = {
            "rays": [list(r) for r in basis.rays],
            "count": len(basis),
            "rowsum_candidate": list(cand) if cand is not None else None,
        }
        if basis.is_trivial:
            entry["note"] = f"cone is {{0}}: no nonzero c with c >= 0 and {s.value}c <= c"
        sides[s.value] = entry
    return {"preconditions": report.as_dict(), "certified": report.certified,
            "sides": sides}, EXIT_OK


def _ints(c):
    return [int(v) if v.denominator == 1 else v for v in c]


def cmd_omega(args, A, B):
    pair = _pair(A, B, [Admissibility.STRICT, Admissibility.WEAK])
    report = check_certificate_preconditions(pair)
    if not report.certified and not args.allow_uncertified:
        raise DomainRejection("pair fails the certificate hypotheses; rerun with "
                              "--allow-uncertified for an exploratory estimate",
                              {"preconditions": report.as_dict()})
    x0, echo = parse_x0(args.x0, pair.m)
    args._echo.update(echo)
    bases = [cone_extreme_rays(A if s is Side.A else B, s) for s in _sides(args.side)]
    est = omega_upper_set(pair, bases, x0, StopConfig(max_steps=args.steps),
                          require_certified=not args.allow_uncertified)
    return {
        "certified": report.certified,
        "lambdas": [{"ray": _ints(c), "source": s.value if s else None,
                     "lambda": e.value, "step": e.step,
                     "last_decrement": e.last_decrement,
                     "criterion_met": e.criterion_met}
                    for c, s, e in zip(est.rays, est.sources, est.lambdas)],
        "ray_rank": est.ray_rank,
        "ray_matrix_rank": est.ray_matrix_rank,
        "resolved_point": est.resolved_point,
        "solve_residual": est.solve_residual,
        "level_set": [{"c": _ints(c), "lambda": lam} for c, lam in est.level_set],
        "empirical_points": est.empirical_points,
        "trajectory": {"steps": est.trajectory.n_steps,
                       "stop_reason": est.trajectory.stop_reason.value},
        "note": est.note,
    }, EXIT_OK


def cmd_template(args):
    try:
        if args.name == "b-family":
            b = args.b.split(",") if args.b else ["2/3", "5/6", "1"]
            A, B = fixtures.B_FAMILY_A, fixtures.b_family_factor(b)
        elif args.name == "y-family":
            A, B = fixtures.y_family_matrices(args.b or "1",
                                                 args.y.split(",") if args.y else ["0", "1/2", "1"])
        else:
            d = fixtures.builtin_model(args.name)
            return d
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc.args[0])) from None
    return fixtures.model_dict(A, B, label=f"{args.name} template")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sqso", description="Separable quadratic stochastic operators")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="admissibility of a matrix pair")
    s.add_argument("model")
    s = sub.add_parser("classify", help="constant / linear / nonlinear case")
    s.add_argument("model")
    s = sub.add_parser("simulate", help="iterate the operator and report the limit")
    s.add_argument("model")
    s.add_argument("--x0", required=True, help="comma-separated start point")
    s.add_argument("--steps", type=int, default=DEFAULT_MAX_STEPS)
    s.add_argument("--tol", type=float, default=DEFAULT_CONV_TOL)
    s.add_argument("--out", help="trajectory CSV path")
    s = sub.add_parser("lyapunov", help="extreme rays of the certificate cones")
    s.add_argument("model")
    s.add_argument("--side", choices=["A", "B", "both"], default="both")
    s = sub.add_parser("omega", help="level-set bound of the omega-limit set")
    s.add_argument("model")
    s.add_argument("--x0", required=True)
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--side", choices=["A", "B", "both"], default="both")
    s.add_argument("--allow-uncertified", action="store_true")
    s = sub.add_parser("template", help="emit a model JSON for a bundled family")
    s.add_argument("name", choices=list(fixtures.BUILTIN_MODELS))
    s.add_argument("--b", help="b (y-family) or b_1,b_2,b_3 (b-family)")
    s.add_argument("--y", help="y_1,y_2,y_3 (y-family)")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "lyapunov": cmd_lyapunov,
    "omega": cmd_omega,
}


def run_command(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        if args.command == "template":
            stdout.write(dumps(cmd_template(args)) + "\n")
            return EXIT_OK
        data, A, B = load_model(args.model)
        if args.command in ("simulate", "omega") and args.steps < 1:
            raise UsageError("--steps must be >= 1")
        args._echo = {"model": args.model, "label": data.get("label", ""), "m": A.rows}
        for key in ("side", "steps", "tol", "out"):
            if getattr(args, key, None) is not None:
                args._echo[key] = getattr(args, key)
        try:
            results, status = COMMANDS[args.command](args, A, B)
        except DomainRejection as exc:
            results, status = dict(exc.report or {}, error=str(exc)), EXIT_DOMAIN
            stderr.write(f"sqso {args.command}: {exc}\n")
        except (UncertifiedError, SqsoError) as exc:
            results, status = {"error": str(exc)}, EXIT_DOMAIN
            stderr.write(f"sqso {args.command}: {exc}\n")
    except UsageError as exc:
        stderr.write(f"sqso: error: {exc}\n")
        return EXIT_USAGE
    report = {"command": args.command, "inputs": args._echo, "results": results, "status": status}
    stdout.write(dumps(report) + "\n")
    return status


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
