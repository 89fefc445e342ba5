"""Command-line front end: classify, factor, extend, demos, random generators,
and the seeded verification sweep.

Exit codes: 0 success; 1 a computed verdict failed; 2 unusable input
(parse, shape, parameter); 3 a structural gate rejected the operator;
4 the Cayley inverse stayed multivalued through its retries.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time

import numpy as np

from . import suites
from .conjugation import canonical, random_conjugation, verify
from .errors import (
    DomainNotJInvariant,
    JLabError,
    MultivaluedRelation,
    NotInvariant,
    NotJImaginary,
    NotJUnitary,
)
from .examples import growth_probe, jacobi_imag, norm_growth
from .extension import extend as extend_op
from .extension import random_jimaginary_partial, ranges_defects
from .fileio import (
    read_conjugation,
    read_matrix,
    read_partial_operator,
    write_conjugation,
    write_json,
    write_matrix,
    write_partial_operator,
)
from .jclass import CLASS_NAMES, classify, default_tol
from .polar import (
    random_j_real_unitary,
    random_j_unitary,
    random_positive_j_unitary,
    refined_polar,
)
from .report import ResidualReport

GATE_ERRORS = (NotJUnitary, NotJImaginary, DomainNotJInvariant, NotInvariant)


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()[:16]


def _run_report(args, report, inputs, seed=None, elapsed=0.0):
    doc = report.to_dict()
    doc["command"] = " ".join(args._echo)
    doc["inputs"] = {str(p): _digest(p) for p in inputs}
    doc["seed"] = seed
    doc["elapsed_seconds"] = elapsed
    if args.report:
        write_json(args.report, doc)
    return doc


def _resolve_tol(args):
    return default_tol() if args.tol is None else float(args.tol)


def _load_conjugation(args, dim):
    if args.canonical:
        return canonical(dim)
    j = read_conjugation(args.conjugation)
    axioms = verify(j)
    if not axioms.passed:
        raise JLabError(
            f"{args.conjugation}: matrix is not a conjugation "
            f"(worst axiom residual {axioms.worst():.3e})"
        )
    return j


def _print_report(report):
    for item in report.items:
        verdict = "pass" if item.passed else "FAIL"
        print(f"{item.name:<28} {item.residual:12.3e}  (<= {item.threshold:.1e})  {verdict}")
    for key, val in report.extras.items():
        print(f"{key}: {val}")


def cmd_classify(args):
    start = time.perf_counter()
    a = read_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise JLabError(f"{args.matrix}: operator must be square, got {a.shape}")
    j = _load_conjugation(args, a.shape[0])
    tol = _resolve_tol(args)
    prof = classify(j, a, tol)
    print(f"dimension {a.shape[0]}, tolerance {tol:.1e}")
    rep = ResidualReport(extras={"invertible": prof.invertible, "cond": prof.cond})
    for name in CLASS_NAMES:
        r = prof.residual(name)
        if r is None:
            print(f"{name:<22}          n/a  fail (singular)")
        else:
            verdict = "pass" if prof.passes(name) else "fail"
            print(f"{name:<22} {r:12.3e}  {verdict}")
            rep.add(name, r, tol)
    cond = "n/a" if prof.cond is None else f"{prof.cond:.3e}"
    print(f"invertible: {'yes' if prof.invertible else 'no'} (cond {cond})")
    _run_report(args, rep, [args.matrix], elapsed=time.perf_counter() - start)
    return 0


def cmd_polar(args):
    start = time.perf_counter()
    a = read_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise JLabError(f"{args.matrix}: operator must be square, got {a.shape}")
    j = _load_conjugation(args, a.shape[0])
    parts = refined_polar(j, a, _resolve_tol(args))
    write_matrix(f"{args.out}.U.json", parts.u)
    write_matrix(f"{args.out}.B.json", parts.b)
    print(f"wrote {args.out}.U.json and {args.out}.B.json")
    _print_report(parts.report)
    _run_report(args, parts.report, [args.matrix], elapsed=time.perf_counter() - start)
    return 0 if parts.report.passed else 1


def cmd_extend(args):
    start = time.perf_counter()
    t = read_partial_operator(args.operator)
    j = _load_conjugation(args, t.ambient)
    result = extend_op(j, t, retry_budget=args.retries, tol=_resolve_tol(args))
    write_matrix(f"{args.out}.A.json", result.a_tilde)
    write_matrix(f"{args.out}.V.json", result.v)
    write_matrix(f"{args.out}.W.json", result.w)
    print(f"wrote {args.out}.A.json, {args.out}.V.json, {args.out}.W.json")
    _print_report(result.report)
    _run_report(args, result.report, [args.operator], elapsed=time.perf_counter() - start)
    return 0 if result.report.passed else 1


def cmd_demo_unbounded(args):
    start = time.perf_counter()
    if args.levels < 1:
        raise JLabError(f"--levels must be at least 1, got {args.levels}")
    rows = growth_probe(args.levels)
    lines = ["k,computed,formula,rel_err"]
    lines += [f"{k},{c!r},{f!r},{e!r}" for k, c, f, e in rows]
    for line in lines:
        print(line)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    rep = ResidualReport(extras={"levels": args.levels})
    tol = _resolve_tol(args)
    rep.add("growth_match", max(e for _, _, _, e in rows), tol)
    norms = norm_growth(args.levels)
    rep.add("norm_match", max(e for _, _, _, e in norms), tol)
    monotone = all(b[1] > a[1] for a, b in zip(rows, rows[1:]))
    rep.add("growth_monotone", 0.0 if monotone else 1.0, 0.5)
    _run_report(args, rep, [], elapsed=time.perf_counter() - start)
    return 0 if rep.passed else 1


def cmd_demo_jacobi(args):
    start = time.perf_counter()
    alphas = None
    if args.alphas:
        alphas = [float(x) for x in args.alphas.split(",")]
    j, t = jacobi_imag(args.n, args.d, alphas)
    defect = ranges_defects(t)
    print(f"defect numbers {defect.defect_numbers}")
    result = extend_op(j, t, retry_budget=args.retries, tol=_resolve_tol(args))
    if args.out:
        write_matrix(f"{args.out}.A.json", result.a_tilde)
        print(f"wrote {args.out}.A.json")
    _print_report(result.report)
    _run_report(args, result.report, [], elapsed=time.perf_counter() - start)
    return 0 if result.report.passed else 1


def cmd_random(args):
    start = time.perf_counter()
    if args.dim < 1:
        raise JLabError(f"--dim must be positive, got {args.dim}")
    kind = args.kind
    if kind == "conjugation":
        write_conjugation(args.out, random_conjugation(args.dim, args.seed))
    else:
        j = canonical(args.dim)
        if kind == "j-real-unitary":
            write_matrix(args.out, random_j_real_unitary(j, args.dim, args.seed))
        elif kind == "positive-j-unitary":
            write_matrix(args.out, random_positive_j_unitary(j, args.dim, args.seed))
        elif kind == "j-unitary":
            write_matrix(args.out, random_j_unitary(j, args.dim, args.seed))
        elif kind == "j-imaginary-partial":
            d = args.domain if args.domain is not None else max(1, args.dim // 2)
            write_partial_operator(
                args.out, random_jimaginary_partial(j, d, args.seed)
            )
        else:  # argparse choices make this unreachable
            raise JLabError(f"unknown kind {kind}")
    print(f"wrote {args.out}")
    rep = ResidualReport(extras={"kind": kind, "dim": args.dim})
    _run_report(args, rep, [args.out], seed=args.seed, elapsed=time.perf_counter() - start)
    return 0


def cmd_verify_suite(args):
    start = time.perf_counter()
    if args.trials < 0:
        raise JLabError(f"--trials must be non-negative, got {args.trials}")
    if args.maxdim < 1:
        raise JLabError(f"--maxdim must be positive, got {args.maxdim}")
    outcome = suites.run_verify_program(
        args.trials, args.maxdim, args.seed, corrupt_index=args.corrupt_trial
    )
    rep = ResidualReport(extras={"trials": args.trials, "seed": args.seed})
    for suite_name, entry in outcome["summary"].items():
        if suite_name == "extension_multivalued_fraction":
            frac, cap, ok = entry
            rep.add("extension_multivalued_fraction", frac, cap)
            continue
        for key, (worst, thr, _ok) in entry.items():
            rep.add(f"{suite_name}.{key}", worst, thr)
    _print_report(rep)
    for suite_name, seed, key, val in outcome["failures"]:
        print(f"FAIL {suite_name} trial seed {seed}: {key} = {val:.3e}")
    _run_report(args, rep, [], seed=args.seed, elapsed=time.perf_counter() - start)
    return 0 if outcome["passed"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jlab",
        description="Conjugation-structured operator laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, conj=True):
        p.add_argument("--tol", type=float, default=None, help="verdict tolerance")
        p.add_argument("--report", default=None, help="write a JSON run report here")
        if conj:
            grp = p.add_mutually_exclusive_group(required=True)
            grp.add_argument("--conjugation", help="conjugation file")
            grp.add_argument(
                "--canonical", action="store_true", help="use entrywise conjugation"
            )

    p = sub.add_parser("classify", help="profile an operator against all classes")
    p.add_argument("matrix")
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("polar", help="refined polar decomposition of a J-unitary")
    p.add_argument("matrix")
    p.add_argument("--out", default="polar", help="output file prefix")
    add_common(p)
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("extend", help="self-adjoint J-imaginary extension")
    p.add_argument("operator")
    p.add_argument("--out", default="extension", help="output file prefix")
    p.add_argument("--retries", type=int, default=None, help="Cayley attempt budget")
    add_common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("demo", help="worked examples")
    demo_sub = p.add_subparsers(dest="demo", required=True)
    pu = demo_sub.add_parser("unbounded", help="resolvent growth of the truncation family")
    pu.add_argument("--levels", type=int, required=True)
    pu.add_argument("--csv", default=None, help="also write the CSV here")
    add_common(pu, conj=False)
    pu.set_defaults(func=cmd_demo_unbounded)
    pj = demo_sub.add_parser("jacobi", help="imaginary Jacobi matrix extension")
    pj.add_argument("--n", type=int, required=True)
    pj.add_argument("--d", type=int, required=True)
    pj.add_argument("--alphas", default=None, help="comma-separated couplings")
    pj.add_argument("--out", default=None, help="output file prefix")
    pj.add_argument("--retries", type=int, default=None)
    add_common(pj, conj=False)
    pj.set_defaults(func=cmd_demo_jacobi)

    p = sub.add_parser("random", help="seeded generators")
    p.add_argument(
        "--kind",
        required=True,
        choices=[
            "conjugation",
            "j-real-unitary",
            "positive-j-unitary",
            "j-unitary",
            "j-imaginary-partial",
        ],
    )
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--domain", type=int, default=None, help="domain dimension")
    add_common(p, conj=False)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("verify-suite", help="seeded property program")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--maxdim", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt-trial", type=int, default=None, help="self-test hook")
    add_common(p, conj=False)
    p.set_defaults(func=cmd_verify_suite)

    return parser


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args._echo = ["jlab"] + list(argv)
    try:
        return args.func(args)
    except MultivaluedRelation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except GATE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (JLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
