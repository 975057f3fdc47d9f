"""``shorted`` command-line front end.

Exit codes: 0 success, 1 negative verdict or failed property, 2 invalid input.
Reports go to stdout; diagnostics go to stderr.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blockdecomp import decompose
from .complement import (
    Route,
    Verdict,
    ball_bound,
    check_complementable,
    schur,
    singleton_probe,
    verify_structure,
)
from .corpus import EXAMPLES, make_example
from .epclass import block_pinv, ep_equivalence_report, is_ep, is_hypo_ep
from .errors import HypothesisFailed, IllPosedSchur, InvalidInput, NotComplementable, ShortedError
from .fileio import (
    dump,
    load_matrix,
    matrix_from_json,
    load_subspace,
    load_vector,
    matrix_to_json,
    report_to_json,
    subspace_to_json,
)
from .numerics import DEFAULT_TOL, TolPolicy
from .properties import run_suite

ENV_TOL_EQ = "SHORTED_TOL_EQ"

OK, NEGATIVE, INVALID = 0, 1, 2


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; raising lets run() return the code instead
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--tol-rank", type=float, default=default, help="relative rank threshold")
    parser.add_argument("--tol-eq", type=float, default=default, help=f"equality tolerance (env {ENV_TOL_EQ})")
    parser.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS if suppress else "json")


def _operands(p):
    p.add_argument("t", help="operator T (MatrixFile JSON)")
    p.add_argument("m", help="subspace M of the domain (SubspaceFile JSON)")
    p.add_argument("n", help="subspace N of the codomain (SubspaceFile JSON)")


def build_parser():
    parser = _Parser(prog="shorted", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"shorted {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, operands=True):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        if operands:
            _operands(p)
        return p

    add("decompose", "blocks A, B, C, D of T relative to (M, N)")
    p = add("check", "complementability report")
    p.add_argument("--interior", type=int, help="restrict C and B* to the leading coordinates of M and N")
    p = add("schur", "Schur complement")
    p.add_argument("--route", choices=[r.value for r in Route], default=Route.PINV.value)
    p.add_argument("--unsafe", action="store_true", help="skip the complementability check")
    p = add("probe", "singleton probe for a vector x in M")
    p.add_argument("--x", required=True, help="vector x (MatrixFile JSON with one column, or a list)")
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    add("bounds", "ball inclusion constants against |C|/γ(D)")
    add("structure", "range, nullspace, factorization, idempotence and adjoint checks")
    add("pinv-block", "Moore-Penrose inverse from the block formula")
    p = add("classify", "EP and hypo-EP flags", operands=False)
    p.add_argument("t", help="square operator T (MatrixFile JSON)")
    add("ep-report", "hypo-EP status of T, its Schur complement and the augmented operators")
    p = add("corpus", "build a labelled example", operands=False)
    p.add_argument("--name", choices=sorted(EXAMPLES), help="example name (omit to list)")
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--emit", metavar="DIR", help="write t.json, m.json, n.json and expected.json to DIR")
    p = add("verify", "seeded property suite", operands=False)
    p.add_argument("--seeds", type=int, default=200, help="number of random cases")
    p.add_argument("--max-dim", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def _tolerance(args):
    eq = args.tol_eq
    if eq is None and os.environ.get(ENV_TOL_EQ):
        raw = os.environ[ENV_TOL_EQ]
        try:
            eq = float(raw)
        except ValueError:
            raise InvalidInput(f"environment {ENV_TOL_EQ}={raw!r} is not a number") from None
    return TolPolicy(
        rank_rtol=DEFAULT_TOL.rank_rtol if args.tol_rank is None else args.tol_rank,
        eq_rtol=DEFAULT_TOL.eq_rtol if eq is None else eq,
        abs_floor=DEFAULT_TOL.abs_floor,
    )


def _load_block(args, tol):
    t = load_matrix(args.t)
    m, n = load_subspace(args.m, tol), load_subspace(args.n, tol)
    if t.shape[1] != m.ambient:
        raise InvalidInput(f"{args.m}: field 'ambient' is {m.ambient} but T has {t.shape[1]} columns")
    if t.shape[0] != n.ambient:
        raise InvalidInput(f"{args.n}: field 'ambient' is {n.ambient} but T has {t.shape[0]} rows")
    return t, m, n, decompose(t, m, n)


# ---------------------------------------------------------------------------
# subcommands: each returns (payload dict, exit code)


def _cmd_decompose(args, tol):
    _, m, n, blk = _load_block(args, tol)
    payload = {"dim_m": m.dim, "dim_n": n.dim}
    payload.update({k: matrix_to_json(getattr(blk, k)) for k in "abcd"})
    return payload, OK


def _cmd_check(args, tol):
    *_, blk = _load_block(args, tol)
    report = check_complementable(blk, tol, args.interior)
    return report_to_json(report), OK if report.verdict is Verdict.COMPLEMENTABLE else NEGATIVE


def _negative_verdict(exc):
    verdict = exc.report.verdict.value if exc.report is not None else type(exc).__name__
    payload = {"verdict": verdict, "error": str(exc)}
    if exc.report is not None:
        payload["report"] = report_to_json(exc.report)
    return payload, NEGATIVE


def _cmd_schur(args, tol):
    *_, blk = _load_block(args, tol)
    try:
        res = schur(blk, Route(args.route), tol, unsafe=args.unsafe)
    except (NotComplementable, IllPosedSchur) as exc:
        return _negative_verdict(exc)
    payload = report_to_json(res)
    payload["verdict"] = Verdict.COMPLEMENTABLE.value if not args.unsafe else "unchecked"
    return payload, OK


def _cmd_probe(args, tol):
    *_, blk = _load_block(args, tol)
    x = load_vector(args.x)
    res = singleton_probe(blk, x, args.trials, tol, args.seed)
    return report_to_json(res), OK if res.kind == "Point" else NEGATIVE


def _cmd_bounds(args, tol):
    *_, blk = _load_block(args, tol)
    try:
        rep = ball_bound(blk, tol)
    except (NotComplementable, IllPosedSchur) as exc:
        return _negative_verdict(exc)
    return report_to_json(rep), OK if rep.holds else NEGATIVE


def _cmd_structure(args, tol):
    t, m, n, _ = _load_block(args, tol)
    try:
        rep = verify_structure(t, m, n, tol)
    except (NotComplementable, IllPosedSchur) as exc:
        return _negative_verdict(exc)
    ok = rep.range_identity and rep.null_identity and rep.idempotent and rep.adjoint_duality
    return report_to_json(rep), OK if ok else NEGATIVE


def _cmd_pinv_block(args, tol):
    *_, blk = _load_block(args, tol)
    try:
        x = block_pinv(blk, tol)
    except (NotComplementable, IllPosedSchur) as exc:
        return _negative_verdict(exc)
    except HypothesisFailed as exc:
        return {"hypothesis_failed": exc.which, "defect": exc.defect}, NEGATIVE
    return {"pinv": matrix_to_json(x)}, OK


def _cmd_classify(args, tol):
    t = load_matrix(args.t)
    if t.shape[0] != t.shape[1]:
        raise InvalidInput(f"{args.t}: fields 'rows' and 'cols' must agree for EP classification")
    ep, ep_def = is_ep(t, tol)
    hypo, hypo_def = is_hypo_ep(t, tol)
    return {"is_ep": ep, "ep_defect": ep_def, "is_hypo_ep": hypo, "hypo_ep_defect": hypo_def}, OK


def _cmd_ep_report(args, tol):
    t, m, n, _ = _load_block(args, tol)
    try:
        rep = ep_equivalence_report(t, m, n, tol)
    except (NotComplementable, IllPosedSchur) as exc:
        return _negative_verdict(exc)
    ok = rep.equivalences_consistent and rep.unconditional_holds
    return report_to_json(rep), OK if ok else NEGATIVE


def _cmd_corpus(args, tol):
    if args.name is None:
        return {"examples": sorted(EXAMPLES)}, OK
    case = make_example(args.name, args.dim)
    report = case.check(tol)
    matches = report.verdict is case.expected.verdict
    payload = {
        "name": case.name,
        "dim": case.dim,
        "expected_verdict": case.expected.verdict.value,
        "verdict": report.verdict.value,
        "matches": matches,
    }
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        dump(matrix_to_json(case.t), out / "t.json")
        dump(subspace_to_json(case.m), out / "m.json")
        dump(subspace_to_json(case.n), out / "n.json")
        expected = {k: v for k, v in payload.items() if k != "matches"}
        expected["ep_facts"] = case.expected.ep_facts
        expected["check_interior"] = case.expected.check_interior
        dump(expected, out / "expected.json")
        payload["emitted"] = [str(out / f) for f in ("t.json", "m.json", "n.json", "expected.json")]
    return payload, OK if matches else NEGATIVE


def _cmd_verify(args, tol):
    if args.seeds < 1:
        raise InvalidInput("--seeds must be positive")
    if args.max_dim < 4:
        raise InvalidInput("--max-dim must be at least 4")
    outcomes, summary = run_suite(args.seeds, args.max_dim, args.seed, tol, max(1, args.jobs))
    payload = {
        "cases": summary.cases,
        "passed": summary.passed_cases,
        "failed": summary.cases - summary.passed_cases,
        "checks": summary.check_counts,
        "failures": summary.failures,
    }
    return payload, OK if summary.ok else NEGATIVE


COMMANDS = {
    "decompose": _cmd_decompose,
    "check": _cmd_check,
    "schur": _cmd_schur,
    "probe": _cmd_probe,
    "bounds": _cmd_bounds,
    "structure": _cmd_structure,
    "pinv-block": _cmd_pinv_block,
    "classify": _cmd_classify,
    "ep-report": _cmd_ep_report,
    "corpus": _cmd_corpus,
    "verify": _cmd_verify,
}


def _text(value, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(value, dict) and {"rows", "cols", "data"} <= value.keys():
        with np.printoptions(precision=6, suppress=True, linewidth=120):
            mat = matrix_from_json(value)
            if not np.any(mat.imag):
                mat = mat.real
            return [pad + line for line in str(mat).splitlines()]
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return lines
    if isinstance(value, list):
        for item in value:
            lines.extend(_text(item, indent) if isinstance(item, (dict, list)) else [f"{pad}- {_scalar(item)}"])
        return lines
    return [pad + _scalar(value)]


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return ", ".join(_scalar(x) for x in v)
    return "-" if v is None else str(v)


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        parser.print_usage(stderr)
        print(exc, file=stderr)
        return INVALID
    try:
        tol = _tolerance(args)
        payload, code = COMMANDS[args.command](args, tol)
    except (InvalidInput, _Usage) as exc:
        print(f"shorted {args.command}: invalid input: {exc}", file=stderr)
        return INVALID
    except ShortedError as exc:
        print(f"shorted {args.command}: {exc}", file=stderr)
        return NEGATIVE
    document = {"command": args.command, "exit_code": code, **payload}
    if args.format == "json":
        print(dump(document), file=stdout)
    else:
        print("\n".join(_text(document)), file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
