"""Command-line driver.

Exit codes: 0 certified (or expectation met), 1 conditions violated (or
image not stabilized, or demo mismatch), 2 unknown, 3 error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import certifier as cert
from .demos import DEMOS, run_demo
from .jobs import JobError, dumps, image_report, jsonable, load_job, run_certify, run_image, run_oracle, verdict_report

EXIT_OK, EXIT_VIOLATED, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3
_STATUS_EXIT = {cert.CERTIFIED: EXIT_OK, cert.VIOLATED: EXIT_VIOLATED, cert.UNKNOWN: EXIT_UNKNOWN}


def _emit(report: dict, out: str | None) -> None:
    if out:
        Path(out).write_text(dumps(report), encoding="utf-8")


def cmd_certify(args) -> int:
    job = load_job(args.job)
    verdict, linear = run_certify(job, args.budget)
    report = {"command": "certify", "function": job.function, **verdict_report(verdict)}
    if linear is not None:
        report["linear"] = verdict_report(linear)
    print(f"verdict: {verdict.status}")
    if verdict.conclusion and verdict.certified:
        print(f"conclusion: {verdict.conclusion}")
    if verdict.witness is not None:
        w = verdict.witness
        print(f"failed condition: {w.condition} on box {list(w.box)} (enclosure {list(w.enclosure)})")
    if linear is not None:
        print(f"linear check: {linear.status}, {linear.conclusion or ''}".rstrip(", "))
    print(f"boxes explored: {verdict.stats.boxes}, max depth {verdict.stats.max_depth}")
    _emit(report, args.out)
    return _STATUS_EXIT[verdict.status]


def cmd_image(args) -> int:
    job = load_job(args.job)
    report, verdict = run_image(job, args.kmax, args.force)
    if report is None:
        print(f"refusing: certifier returned {verdict.status}; pass --force for a non-rigorous corner image",
              file=sys.stderr)
        _emit({"command": "image", "refused": True, "certify": verdict_report(verdict)}, args.out)
        return EXIT_ERROR
    if not report.rigorous:
        print("warning: not certified; images use the four-corner fallback and are not rigorous")
    for e in report.levels:
        print(f"k={e.k:2d}  components={e.components:5d}  hull=[{e.image.hull.lo:.12g}, {e.image.hull.hi:.12g}]")
    print(f"stabilized: {report.stabilized}")
    _emit({"command": "image", "function": job.function, **image_report(report)}, args.out)
    return EXIT_OK if report.stabilized else EXIT_VIOLATED


def cmd_oracle(args) -> int:
    job = load_job(args.job)
    depth = args.depth if args.depth is not None else job.oracle_depth
    img = run_oracle(job, depth)
    print(f"depth {depth}: {len(img)} components, hull [{img.hull.lo:.12g}, {img.hull.hi:.12g}]")
    _emit({"command": "oracle", "function": job.function, "depth": depth,
           "components": len(img), "image": img.to_list()}, args.out)
    return EXIT_OK


def cmd_demo(args) -> int:
    res = run_demo(args.name)
    for c in res.checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"[{mark}] {c.description}" + (f" ({c.detail})" if c.detail else ""))
    print(f"demo {res.name}: {'ok' if res.passed else 'MISMATCH'}")
    _emit({"command": "demo", "name": res.name, "passed": res.passed,
           "checks": [{"description": c.description, "passed": c.passed, "detail": c.detail} for c in res.checks],
           "report": jsonable(res.report)}, args.out)
    return EXIT_OK if res.passed else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moranimg", description="Certify and compute images of fractal pairs under f(x, y).")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="check the derivative conditions")
    c.add_argument("--job", required=True)
    c.add_argument("--budget", type=int, default=None, help="leaf boxes per condition")
    c.set_defaults(func=cmd_certify)

    i = sub.add_parser("image", help="finite-level images and stabilization")
    i.add_argument("--job", required=True)
    i.add_argument("--kmax", type=int, default=None)
    i.add_argument("--force", action="store_true", help="compute even when not certified (non-rigorous)")
    i.set_defaults(func=cmd_image)

    o = sub.add_parser("oracle", help="brute-force image from sampled points")
    o.add_argument("--job", required=True)
    o.add_argument("--depth", type=int, default=None)
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("demo", help="run a pre-registered demo")
    d.add_argument("name", choices=sorted(DEMOS))
    d.set_defaults(func=cmd_demo)

    for s in (c, i, o, d):
        s.add_argument("--out", default=None, help="write the JSON report here")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (JobError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
