"""Command line front end.

Exit codes: 0 success, 1 domain-level failure (invalid presentation or a
failed check), 2 usage or I/O error. Everything written to stdout is a
deterministic function of the inputs; ``--timings`` goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import A2Error, NoTorsionFreeGroup, NotAProjectivePlane, ParseError
from .ktheory import analyse, betti_chi
from .plane import difference_set_plane, format_plane, make_plane, parse_plane
from .presentation import (
    TORSION_CRITERION,
    PointLineCorrespondence,
    format_correspondence,
    format_presentation,
    parse_correspondence,
    parse_presentation,
    search,
    verify,
)
from .transition import matrix_m, matrix_n

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_unverified(path):
    try:
        return parse_presentation(_read(path), verify_result=False)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_verify(args, out):
    tp = _load_unverified(args.file)
    report = verify(tp)
    if report.valid:
        print(report.summary(), file=out)
        return EXIT_OK
    print("invalid", file=out)
    for v in report.violations:
        print(f"  {v}", file=out)
    return EXIT_FAIL


def _render_text(report):
    d = report.to_dict()
    lines = [
        f"q={d['q']}",
        f"cells={d['cells']}",
        f"torsion_free={'true' if d['torsion_free'] else 'false'}",
        f"torsion_criterion={TORSION_CRITERION}",
        f"rank={d['rank']}",
        "torsion=" + ",".join(map(str, d["torsion"])),
        f"k_groups={d['k_groups']}",
        f"k0_rank={d['k0_rank']}",
        f"harmonic_dim={d['harmonic_dim']}",
        f"chi={d['chi']}",
        f"beta2={d['beta2']}",
    ]
    lines.extend(f"lemma.{name}={verdict}" for name, verdict in d["lemmas"].items())
    theorem = d["theorem"]
    lines.append("theorem=" + ("skipped" if theorem.startswith("skipped") else theorem))
    return "\n".join(lines) + "\n"


def report_failed(report):
    exact_fail = any(v.startswith("fail") and not v.endswith("(empirical)")
                     for v in report.lemmas.values())
    return exact_fail or report.theorem.startswith("fail")


def cmd_ktheory(args, out):
    tp = _load_unverified(args.file)
    validation = verify(tp)
    if not validation.valid:
        print(validation.summary(), file=out)
        return EXIT_FAIL
    if args.dump_matrices:
        target = Path(args.dump_matrices)
        target.mkdir(parents=True, exist_ok=True)
        for mat in (matrix_m(tp), matrix_n(tp)):
            (target / f"{mat.kind}.txt").write_text(mat.dump())
    report = analyse(tp)
    if args.json:
        out.write(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n")
    else:
        out.write(_render_text(report))
    if args.timings:
        for key, secs in report.timings.items():
            print(f"timing.{key}={secs:.3f}s (non-canonical)", file=sys.stderr)
    return EXIT_FAIL if report_failed(report) else EXIT_OK


def cmd_search(args, out):
    if args.q < 2:
        raise UsageError("--q must be at least 2")
    if args.all_lambdas and args.lambda_file:
        raise UsageError("--all-lambdas conflicts with --lambda-file")
    if args.lambda_file:
        try:
            corr = parse_correspondence(_read(args.lambda_file))
        except ParseError as exc:
            raise UsageError(f"{args.lambda_file}: {exc}") from None
        if corr.plane.q != args.q:
            raise UsageError(f"lambda file has q={corr.plane.q}, expected {args.q}")
        plane, lam = corr.plane, corr
    elif args.q == 2:
        plane = difference_set_plane(2)
        lam = None if args.all_lambdas else PointLineCorrespondence.identity(plane)
    else:
        raise UsageError("--lambda-file is required for q >= 3")
    limit = None if args.exhaustive else args.limit
    if limit is not None and limit < 0:
        raise UsageError("--limit must be non-negative")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    names = []
    for seq, tp in enumerate(search(plane, lam, limit=limit,
                                    torsion_free_only=args.torsion_free_only), 1):
        name = f"tp_{args.q}_{seq:04d}.tp"
        (outdir / name).write_text(format_presentation(tp))
        names.append(name)
    index = "".join(n + "\n" for n in names) + f"count={len(names)}\n"
    (outdir / "index.txt").write_text(index)
    print(f"count={len(names)}", file=out)
    return EXIT_OK


def cmd_betti(args, out):
    try:
        beta2, chi = betti_chi(args.q)
    except NoTorsionFreeGroup:
        print(f"no torsion-free group of order {args.q}", file=out)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"beta2={beta2} chi={chi}", file=out)
    return EXIT_OK


def cmd_plane(args, out):
    if args.file:
        try:
            plane = parse_plane(_read(args.file))
        except NotAProjectivePlane as exc:
            print(f"not a projective plane: {exc}", file=out)
            return EXIT_FAIL
        print(f"valid: q={plane.q} points={plane.n}", file=out)
        return EXIT_OK
    if args.q is None:
        raise UsageError("plane needs --q or --file")
    plane = difference_set_plane(args.q) if args.difference_set else make_plane(args.q)
    if args.with_lambda:
        out.write(format_correspondence(PointLineCorrespondence.identity(plane)))
    else:
        out.write(format_plane(plane))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="a2k", description="K-theory of boundary algebras of triangle presentations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a presentation file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ktheory", help="full K-theory pipeline and checks")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true", help="print timings to stderr")
    p.add_argument("--dump-matrices", metavar="DIR", help="write M.txt and N.txt to DIR")
    p.set_defaults(func=cmd_ktheory)

    p = sub.add_parser("search", help="enumerate triangle presentations")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--lambda-file", help="file with q, plane and lambda rows")
    p.add_argument("--all-lambdas", action="store_true",
                   help="q=2 only: try every bijection instead of the canonical one")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--limit", type=int)
    group.add_argument("--exhaustive", action="store_true")
    p.add_argument("--torsion-free-only", action="store_true")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("betti", help="beta2 and Euler characteristic for order q")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("plane", help="print or validate a projective plane")
    p.add_argument("--q", type=int)
    p.add_argument("--difference-set", action="store_true",
                   help="cyclic difference-set model instead of PG(2,q) coordinates")
    p.add_argument("--with-lambda", action="store_true",
                   help="emit a lambda file (lambda(i) = line i) for use with search")
    p.add_argument("--file", help="validate an incidence file instead")
    p.set_defaults(func=cmd_plane)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAProjectivePlane as exc:
        print(f"invalid plane: {exc}", file=out)
        return EXIT_FAIL
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except A2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
