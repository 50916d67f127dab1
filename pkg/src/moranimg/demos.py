"""Pre-registered jobs with pinned parameters and the outcomes they must reproduce."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import certifier as cert
from .interval import Interval, IntervalSet, normalize, set_equal, subset_of
from .jobs import SCHEMA, image_report, job_from_dict, run_certify, run_image, run_oracle, verdict_report
from .oracle import brute_force_image, max_gap, sample_points

CANTOR_MORAN = {"kind": "moran", "c": "1/3", "n": 2, "kappa": "0"}
CANTOR_IFS = {"kind": "ifs", "lambda": "1/3", "a": ["0", "2/3"]}
EXAMPLE9_K = {"kind": "general_ifs", "maps": [["1/3", "0"], ["1/4", "0"], ["1/3", "2/3"]]}

EXAMPLE9_F = "x^2 + y^2 + 6*x + 3*y + 0.5*x*y"
EXAMPLE10_F = "sin(-0.5*x*y) + 12*x + 6*y"

def job_dict(function: str, fractal: dict, **extra) -> dict:
    d = {"schema": SCHEMA, "function": function, "fractal1": fractal, "fractal2": fractal}
    d.update(extra)
    return d

JOBS = {
    "steinhaus-sum": job_dict("x + y", CANTOR_MORAN, image={"k_max": 10}),
    "steinhaus-diff": job_dict("x - y", CANTOR_MORAN, image={"k_max": 10}),
    "cantor-product": job_dict("x * y", CANTOR_IFS, image={"k_max": 4}, oracle={"depth": 6}),
    "cantor-quotient-truncation": job_dict("x / y", CANTOR_IFS, oracle={"depth": 8}),
    "corollary7-constants": job_dict("x + 0.5*y", CANTOR_IFS),
    "example9": job_dict(EXAMPLE9_F, EXAMPLE9_K, sub_ifs={"lambda": "1/3", "a": ["0", "2/3"]},
                         words=["1", "3"], oracle={"depth": 6}),
    "example10": job_dict(EXAMPLE10_F, CANTOR_IFS, image={"k_max": 8}),
}

@dataclass
class Check:
    description: str
    passed: bool
    detail: str = ""

@dataclass
class DemoResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    report: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, description: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(description, bool(passed), detail))

def _single(img: IntervalSet, lo: float, hi: float, tol: float) -> bool:
    return set_equal(img, normalize([(lo, hi)]), tol)

def _steinhaus(name: str, lo: float, hi: float) -> DemoResult:
    res = DemoResult(name)
    job = job_from_dict(JOBS[name])
    verdict, linear = run_certify(job)
    res.check("derivative conditions certified", verdict.certified, verdict.status)
    res.check("linear check certified", linear is not None and linear.certified)
    res.check("c_k + xi_k >= 1 at every level",
              linear is not None and linear.constants["c_plus_xi_at_least_one"])
    report, _ = run_image(job)
    ok = report is not None and all(_single(e.image, lo, hi, 1e-9) for e in report.levels)
    res.check(f"f(C_k, D_k) = [{lo:g}, {hi:g}] for k = 0..{job.k_max}", ok)
    res.check("one component at every level", report is not None and all(e.components == 1 for e in report.levels))
    res.report = {"certify": verdict_report(verdict), "linear": verdict_report(linear) if linear else None,
                  "image": image_report(report) if report else None}
    return res

def demo_steinhaus_sum() -> DemoResult:
    return _steinhaus("steinhaus-sum", 0.0, 2.0)

def demo_steinhaus_diff() -> DemoResult:
    return _steinhaus("steinhaus-diff", -1.0, 1.0)

def demo_cantor_product() -> DemoResult:
    res = DemoResult("cantor-product")
    job = job_from_dict(JOBS["cantor-product"])
    verdict, _ = run_certify(job)
    res.check("not certified", not verdict.certified, verdict.status)
    w = verdict.witness
    res.check("witness near y = 0", w is not None and w.box[2] <= 1e-9, str(w))
    report, _ = run_image(job, force=True)
    counts = [e.components for e in report.levels]
    res.check("at least two components for k = 1..4", all(c >= 2 for c in counts[1:]), str(counts))
    oracle = run_oracle(job)
    inside = [iv for iv in oracle if iv.hi > 1 / 3 and iv.lo < 4 / 9]
    res.check("no oracle value in (1/3, 4/9)", not inside)
    res.report = {"certify": verdict_report(verdict), "image": image_report(report),
                  "oracle": {"components": len(oracle)}}
    return res

def demo_cantor_quotient() -> DemoResult:
    res = DemoResult("cantor-quotient-truncation")
    job = job_from_dict(JOBS["cantor-quotient-truncation"])
    xs = sample_points(job.fractal1, job.oracle_depth)
    ys = xs[xs >= 2 / 3 - 1e-12]
    values = brute_force_image(job.bundle, job.fractal1, job.fractal2, job.oracle_depth, 0.0, points=(xs, ys))
    gap = max_gap(values, 2 / 3, 1.5)
    res.check("denominators from [2/3, 1] cover [2/3, 3/2] with max gap < 0.02", gap < 0.02, f"max gap {gap:.3g}")
    res.report = {"oracle": {"max_gap": gap, "samples": [int(xs.size), int(ys.size)]}}
    return res

def demo_corollary7() -> DemoResult:
    res = DemoResult("corollary7-constants")
    k = cert.cantor_corollary_constants()
    res.check("ratio bounds are (1/3, 1)", k.ratio_bounds == (Fraction(1, 3), Fraction(1)))
    coeffs = set(k.coefficients)
    res.check("form coefficients proportional to (1, -6, 9) and (1, -2, 1)",
              coeffs == {(1, -6, 9), (1, -2, 1)},
              "; ".join("(" + ", ".join(str(v) for v in c) + ")" for c in sorted(coeffs)))
    job = job_from_dict(JOBS["corollary7-constants"])
    verdict, _ = run_certify(job)
    res.check("x + 0.5 y certified on the Cantor pair", verdict.certified)
    res.report = {"ratio_bounds": list(k.ratio_bounds), "forms": k.forms, "coefficients": k.coefficients,
                  "certify": verdict_report(verdict)}
    return res

def demo_example9() -> DemoResult:
    res = DemoResult("example9")
    job = job_from_dict(JOBS["example9"])
    verdict, _ = run_certify(job)
    res.check("sandwich certified with words 1, 3", verdict.certified, verdict.status)
    H = verdict.image
    res.check("H = [0, 11.5]", H is not None and abs(H.lo) <= 1e-9 and abs(H.hi - 11.5) <= 1e-9, str(H))
    oracle = run_oracle(job)
    H = H or Interval(0.0, 11.5)
    res.check("oracle inside H", subset_of(oracle, normalize([H]), 1e-9))
    gap = max_gap(oracle, H.lo, H.hi)
    res.check("oracle covers H with max gap < 0.05", gap < 0.05, f"max gap {gap:.3g}")
    res.report = {"certify": verdict_report(verdict), "oracle": {"max_gap": gap, "components": len(oracle)}}
    return res

def demo_example10() -> DemoResult:
    res = DemoResult("example10")
    job = job_from_dict(JOBS["example10"])
    report, verdict = run_image(job)
    res.check("certified within the default budget", verdict.certified, verdict.status)
    top = math.sin(-0.5) + 18
    ok = report is not None and _single(report.final, 0.0, top, 1e-6)
    res.check("f(C_8, C_8) = [0, sin(-0.5) + 18] within 1e-6", ok,
              "" if report is None else str(report.final))
    res.report = {"certify": verdict_report(verdict), "image": image_report(report) if report else None}
    return res

DEMOS = {
    "steinhaus-sum": demo_steinhaus_sum,
    "steinhaus-diff": demo_steinhaus_diff,
    "cantor-product": demo_cantor_product,
    "cantor-quotient-truncation": demo_cantor_quotient,
    "corollary7-constants": demo_corollary7,
    "example9": demo_example9,
    "example10": demo_example10,
}

def run_demo(name: str) -> DemoResult:
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}")
    return DEMOS[name]()
