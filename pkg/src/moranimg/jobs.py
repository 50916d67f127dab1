"""Job files, the pipelines they drive, and JSON-ready reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import certifier as cert
from .expr import parse, partial_bundle
from .expr.calculus import PartialBundle
from .expr.nodes import Const
from .fractal import (
    GeneralIFS,
    HomogeneousIFS,
    MoranClass,
    PeriodicSequence,
    cylinders,
    level_intervals,
    parse_word,
    realize,
    to_fraction,
)
from .image import LevelImageReport, stabilization_report
from .interval import IMAGE_TOL, IntervalSet
from .oracle import brute_force_image

SCHEMA = "moranimg.job/1"


class JobError(ValueError):
    """The job file is malformed or describes an invalid fractal."""


# -- fractal specs -------------------------------------------------------------


def _sequence(raw, cast) -> PeriodicSequence:
    if isinstance(raw, dict):
        return PeriodicSequence(tuple(cast(v) for v in raw.get("preperiod", [])),
                                tuple(cast(v) for v in raw["period"]))
    if isinstance(raw, list):
        return PeriodicSequence((), tuple(cast(v) for v in raw))
    return PeriodicSequence((), (cast(raw),))


def _num(v) -> Fraction:
    # JSON numbers arrive as floats; read them by their decimal text
    return to_fraction(v)


def parse_fractal(spec: dict):
    kind = spec.get("kind")
    try:
        if kind == "moran":
            return MoranClass(_sequence(spec["c"], _num), _sequence(spec["n"], int), _num(spec.get("kappa", 0)))
        if kind == "ifs":
            return HomogeneousIFS(_num(spec["lambda"]), tuple(_num(v) for v in spec["a"]))
        if kind == "general_ifs":
            return GeneralIFS(tuple((_num(r), _num(t)) for r, t in spec["maps"]))
    except (KeyError, TypeError) as exc:
        raise JobError(f"fractal spec is missing or has a bad field: {exc}") from exc
    except ValueError as exc:
        raise JobError(f"invalid {kind} fractal: {exc}") from exc
    raise JobError(f"unknown fractal kind {kind!r}")


@dataclass
class Job:
    function: str
    fractal1: Any
    fractal2: Any
    sub_ifs: HomogeneousIFS | None = None
    words: list | None = None
    restrict_level: int = 0
    budget: int = cert.DEFAULT_BUDGET
    k_max: int = 8
    merge_tol: float = IMAGE_TOL
    strategy: str = "uniform"
    seed: int = 1
    oracle_depth: int = 8
    oracle_tol: float = 1e-9
    bundle: PartialBundle = field(init=False, repr=False)

    def __post_init__(self):
        try:
            self.bundle = partial_bundle(parse(self.function))
        except ValueError as exc:
            raise JobError(f"bad function: {exc}") from exc

    @property
    def kind(self) -> str:
        k1, k2 = type(self.fractal1), type(self.fractal2)
        if k1 is MoranClass and k2 is MoranClass:
            return "moran"
        if k1 is HomogeneousIFS and k2 is HomogeneousIFS:
            return "ifs"
        if k1 is GeneralIFS and k2 is GeneralIFS:
            return "general_ifs"
        raise JobError("fractal1 and fractal2 must be of the same kind")


def job_from_dict(d: dict) -> Job:
    if d.get("schema") != SCHEMA:
        raise JobError(f"schema must be {SCHEMA!r}, got {d.get('schema')!r}")
    try:
        f1 = parse_fractal(d["fractal1"])
        f2 = parse_fractal(d.get("fractal2", d["fractal1"]))
        sub = words = None
        if "sub_ifs" in d:
            sub = parse_fractal({"kind": "ifs", **d["sub_ifs"]})
            words = [parse_word(w) for w in d["words"]]
        cfg_c = d.get("certify", {})
        cfg_i = d.get("image", {})
        cfg_o = d.get("oracle", {})
        job = Job(
            function=d["function"],
            fractal1=f1,
            fractal2=f2,
            sub_ifs=sub,
            words=words,
            restrict_level=int(d.get("domain", {}).get("restrict_level", 0)),
            budget=int(cfg_c.get("budget", cert.DEFAULT_BUDGET)),
            k_max=int(cfg_i.get("k_max", 8)),
            merge_tol=float(cfg_i.get("merge_tol", IMAGE_TOL)),
            strategy=str(cfg_i.get("strategy", "uniform")),
            seed=int(cfg_i.get("seed", 1)),
            oracle_depth=int(cfg_o.get("depth", 8)),
            oracle_tol=float(cfg_o.get("merge_tol", 1e-9)),
        )
    except KeyError as exc:
        raise JobError(f"missing field {exc}") from exc
    kind = job.kind  # raises when the two fractals differ in kind
    if kind == "general_ifs" and job.sub_ifs is None:
        raise JobError("general IFS jobs need an explicit sub_ifs and words")
    if job.restrict_level < 0:
        raise JobError("restrict_level must be >= 0")
    return job


def load_job(path: str | Path) -> Job:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise JobError(f"cannot read job file {path}: {exc}") from exc
    return job_from_dict(raw)


# -- pipelines --------------------------------------------------------------------


def _realizations(job: Job, depth: int):
    seed2 = job.seed + 1 if job.strategy == "random" else None
    seed1 = job.seed if job.strategy == "random" else None
    return (realize(job.fractal1, max(depth, 1), job.strategy, seed1),
            realize(job.fractal2, max(depth, 1), job.strategy, seed2))


def job_domain(job: Job) -> cert.DomainSpec:
    p = job.restrict_level
    if p == 0:
        return cert.DomainSpec.unit_square()
    if job.kind == "moran":
        r1, r2 = _realizations(job, p)
        return cert.DomainSpec.from_levels(level_intervals(r1, p), level_intervals(r2, p))
    return cert.DomainSpec.from_levels(cylinders(job.fractal1, p), cylinders(job.fractal2, p))


def run_certify(job: Job, budget: int | None = None) -> tuple[cert.Verdict, cert.Verdict | None]:
    """Main verdict, plus the closed-form linear check when f is linear."""
    budget = budget or job.budget
    b = job.bundle
    kind = job.kind
    if kind == "moran":
        if job.fractal1 != job.fractal2:
            raise JobError("both Moran sets must come from one class")
        verdict = cert.certify_moran(b, job.fractal1, job_domain(job), budget, start=max(job.restrict_level, 1))
    elif kind == "ifs":
        verdict = cert.certify_sss(b, job.fractal1, job.fractal2, job_domain(job), budget)
    else:
        if job.fractal1 != job.fractal2:
            raise JobError("the sandwich argument needs f(K, K)")
        verdict = cert.certify_sandwich(b, job.fractal1, job.sub_ifs, job.words, budget)
    linear = None
    if kind == "moran" and b.is_linear and _const(b.fx) not in (None, 0) and _const(b.fy) not in (None, 0):
        linear = cert.certify_linear(job.fractal1, _const(b.fy) / _const(b.fx))
    return verdict, linear


def _const(e):
    return e.value if isinstance(e, Const) else None


def image_sources(job: Job, k_max: int):
    if job.kind == "moran":
        return _realizations(job, k_max)
    return job.fractal1, job.fractal2


def run_image(job: Job, k_max: int | None = None, force: bool = False) -> tuple[LevelImageReport | None, cert.Verdict]:
    """Level images; refuses (returns None) unless certified or forced."""
    k_max = job.k_max if k_max is None else k_max
    verdict, _ = run_certify(job)
    if verdict.certified:
        sc = verdict.sign_case
    elif force:
        sc = None
    else:
        return None, verdict
    return stabilization_report(job.bundle, sc, image_sources(job, k_max), k_max, job.merge_tol), verdict


def run_oracle(job: Job, depth: int | None = None) -> IntervalSet:
    depth = job.oracle_depth if depth is None else depth
    src1, src2 = job.fractal1, job.fractal2
    if job.kind == "moran":
        src1, src2 = _realizations(job, depth)
    return brute_force_image(job.bundle, src1, src2, depth, job.oracle_tol)


# -- reports ----------------------------------------------------------------------


def jsonable(v):
    """Plain JSON types; Fractions become exact strings like "1/3"."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, IntervalSet):
        return v.to_list()
    if hasattr(v, "to_list"):
        return v.to_list()
    if hasattr(v, "item"):
        return v.item()
    return v


def verdict_report(v: cert.Verdict) -> dict:
    out = {
        "verdict": v.status,
        "sign_case": None if v.sign_case is None else v.sign_case.case,
        "delta": None if v.sign_case is None else v.sign_case.delta,
        "conclusion": v.conclusion,
        "conditions": [
            {"id": c.id, "expression": c.expression, "status": c.status,
             "boxes": c.stats.boxes, "max_depth": c.stats.max_depth}
            for c in v.conditions
        ],
        "constants": jsonable(v.constants),
        "stats": {"boxes": v.stats.boxes, "max_depth": v.stats.max_depth},
    }
    if v.witness is not None:
        out["witness"] = {"condition": v.witness.condition, "box": list(v.witness.box),
                          "enclosure": list(v.witness.enclosure)}
    if v.image is not None:
        out["image"] = v.image.to_list()
    return out


def image_report(r: LevelImageReport) -> dict:
    return {
        "rigorous": r.rigorous,
        "stabilized": r.stabilized,
        "nested": r.nested,
        "levels": [
            {"k": e.k, "image": e.image.to_list(), "components": e.components,
             "hausdorff_to_previous": e.distance_to_previous,
             "equal_to_previous": e.equal_to_previous, "nested_in_previous": e.nested_in_previous}
            for e in r.levels
        ],
    }


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"
