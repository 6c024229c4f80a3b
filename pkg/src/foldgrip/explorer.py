"""Design-space search for geometries that switch in the right order.

A design is scored by the smallest of its three signed margins, all taken
at the clip pin:

* forward: ``forward_at_clip - snap``
* motor: ``motor_limit - forward_at_clip``
* reverse: ``snap - reverse_at_clip``

The score is positive exactly when both switching directions are valid.
Parameters are addressed as ``"<section>.<field>"``, e.g. ``"clip.h_nail"``.
"""
from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from foldgrip.beams import (
    ClipDesign,
    LowerLinkDesign,
    forward_pass_force,
    reverse_pass_force,
    snap_force_closed,
)
from foldgrip.errors import DesignError, GridTooLarge
from foldgrip.linkage import (
    ActuatorSpec,
    ForceBudget,
    LinkageGeometry,
    SwitchVerdict,
    motor_force_limit,
    validate_switching,
)

log = logging.getLogger(__name__)

SECTIONS = {
    "clip": ("clip", ClipDesign),
    "lower_link": ("lower", LowerLinkDesign),
    "linkage": ("geom", LinkageGeometry),
    "actuator": ("act", ActuatorSpec),
}


@dataclass(frozen=True)
class DesignPoint:
    clip: ClipDesign
    lower: LowerLinkDesign
    geom: LinkageGeometry
    act: ActuatorSpec

    def get(self, name: str) -> float:
        section, key = _split(name)
        return getattr(getattr(self, SECTIONS[section][0]), key)

    def with_params(self, params: dict[str, float]) -> "DesignPoint":
        """Copy with the named parameters replaced; re-validates every part."""
        updates: dict[str, dict[str, float]] = {}
        for name, value in params.items():
            section, key = _split(name)
            updates.setdefault(section, {})[key] = value
        parts = {}
        for section, values in updates.items():
            attr = SECTIONS[section][0]
            if "n_b" in values:
                values["n_b"] = int(round(values["n_b"]))
            parts[attr] = dataclasses.replace(getattr(self, attr), **values)
        return dataclasses.replace(self, **parts)

    def flat(self) -> dict[str, float]:
        out = {}
        for section, (attr, _) in SECTIONS.items():
            for key, value in dataclasses.asdict(getattr(self, attr)).items():
                out[f"{section}.{key}"] = value
        return out


def _split(name: str) -> tuple[str, str]:
    section, _, key = name.partition(".")
    if section not in SECTIONS:
        raise KeyError(f"unknown parameter section in {name!r}")
    cls = SECTIONS[section][1]
    if key not in {f.name for f in dataclasses.fields(cls)}:
        raise KeyError(f"unknown parameter {name!r}")
    return section, key


@dataclass(frozen=True)
class Evaluation:
    point: DesignPoint
    budget: ForceBudget
    verdict: SwitchVerdict
    reverse_margin_at_clip: float
    objective: float

    @property
    def feasible(self) -> bool:
        return self.verdict.forward_ok and self.verdict.reverse_ok

    def margins(self) -> dict[str, float]:
        return {
            "forward_margin": self.verdict.forward_margin,
            "motor_margin": self.verdict.motor_margin,
            "reverse_margin": self.verdict.reverse_margin,
            "objective": self.objective,
        }


def evaluate(p: DesignPoint) -> Evaluation:
    budget = ForceBudget.from_forces(
        snap=snap_force_closed(p.clip),
        forward=forward_pass_force(p.lower),
        reverse=reverse_pass_force(p.lower),
        motor_limit=motor_force_limit(p.act, p.geom),
        geom=p.geom,
    )
    verdict = validate_switching(budget)
    reverse_at_clip = verdict.reverse_margin * p.geom.l_23 / p.geom.l_clip
    objective = min(verdict.forward_margin, verdict.motor_margin, reverse_at_clip)
    return Evaluation(p, budget, verdict, reverse_at_clip, objective)


# --- search space ------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        _split(self.name)
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"axis {self.name}: bounds must be finite")
        if self.lo > self.hi:
            raise ValueError(f"axis {self.name}: empty range [{self.lo}, {self.hi}]")
        if self.n < 1:
            raise ValueError(f"axis {self.name}: resolution must be >= 1, got {self.n}")

    def values(self) -> list[float]:
        if self.n == 1:
            return [self.lo if self.lo == self.hi else 0.5 * (self.lo + self.hi)]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.n)]


@dataclass(frozen=True)
class SearchSpace:
    """Box over a subset of parameters; everything else stays at ``base``."""

    base: DesignPoint
    axes: tuple[Axis, ...] = ()
    max_points: int = 10**6

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate axes in {names}")
        # canonical order keeps scans independent of how axes were listed
        object.__setattr__(self, "axes", tuple(sorted(self.axes, key=lambda a: a.name)))

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.axes]

    @property
    def size(self) -> int:
        return math.prod(a.n for a in self.axes)

    def bounds(self) -> list[tuple[float, float]]:
        return [(a.lo, a.hi) for a in self.axes]


@dataclass(frozen=True)
class GridRow:
    index: int
    params: dict[str, float]
    evaluation: Evaluation | None
    error: str | None = None

    @property
    def feasible(self) -> bool:
        return self.evaluation is not None and self.evaluation.feasible


@dataclass
class SearchReport:
    rows: list[GridRow]
    feasible_points: list[Evaluation] = field(default_factory=list)
    best: Evaluation | None = None

    @property
    def objective(self) -> float:
        return self.best.objective if self.best else -math.inf

    @property
    def feasible_fraction(self) -> float:
        return len(self.feasible_points) / len(self.rows) if self.rows else 0.0


def _evaluate_params(args):
    base, params = args
    try:
        return evaluate(base.with_params(params)), None
    except DesignError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def grid_scan(space: SearchSpace, workers: int | None = None) -> SearchReport:
    """Evaluate every grid point; rows come back in grid-index order."""
    if space.size > space.max_points:
        raise GridTooLarge(f"grid has {space.size} points, cap is {space.max_points}")
    names = space.names
    combos = [dict(zip(names, values)) for values in itertools.product(*(a.values() for a in space.axes))]
    jobs = [(space.base, params) for params in combos]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_params, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_evaluate_params(job) for job in jobs]

    report = SearchReport(rows=[])
    for index, (params, (ev, err)) in enumerate(zip(combos, results)):
        report.rows.append(GridRow(index, params, ev, err))
        if ev is None:
            continue
        if ev.feasible:
            report.feasible_points.append(ev)
        if report.best is None or ev.objective > report.best.objective:
            report.best = ev
    log.info("scanned %d points, %d feasible", len(report.rows), len(report.feasible_points))
    return report


# --- local refinement ----------------------------------------------------------


@dataclass(frozen=True)
class RefineResult:
    point: DesignPoint
    evaluation: Evaluation
    evaluations: int
    exhausted: bool


class _BudgetSpent(Exception):
    pass


def refine(start: DesignPoint, space: SearchSpace, budget_evals: int) -> RefineResult:
    """Nelder-Mead on the box of ``space`` maximizing the min-margin objective.

    The start point is always a candidate, so the result is never worse. A
    candidate replaces the incumbent only when strictly better; earlier
    evaluations win ties. ``exhausted`` is set when the evaluation budget ran
    out before the simplex converged.
    """
    start_eval = evaluate(start)
    best = [start_eval]
    if budget_evals <= 0 or not space.axes:
        return RefineResult(start, start_eval, 0, budget_evals <= 0 and bool(space.axes))

    lo = np.array([a.lo for a in space.axes])
    span = np.array([a.hi - a.lo for a in space.axes])
    span[span == 0] = 1.0
    names = space.names
    count = [0]

    def to_params(u):
        x = lo + np.clip(u, 0.0, 1.0) * span
        return dict(zip(names, (float(v) for v in x)))

    def cost(u):
        if count[0] >= budget_evals:
            raise _BudgetSpent
        count[0] += 1
        try:
            ev = evaluate(start.with_params(to_params(u)))
        except DesignError:
            return 1e30
        if ev.objective > best[0].objective:
            best[0] = ev
        return -ev.objective

    u0 = np.clip((np.array([start.get(n) for n in names]) - lo) / span, 0.0, 1.0)
    simplex = [u0]
    for i in range(len(names)):
        v = u0.copy()
        v[i] = v[i] + 0.1 if v[i] + 0.1 <= 1.0 else v[i] - 0.1
        simplex.append(v)
    exhausted = False
    try:
        minimize(
            cost,
            u0,
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * len(names),
            options={"initial_simplex": np.array(simplex), "maxfev": budget_evals, "xatol": 1e-9, "fatol": 1e-12},
        )
    except _BudgetSpent:
        exhausted = True
    else:
        exhausted = count[0] >= budget_evals
    return RefineResult(best[0].point, best[0], count[0], exhausted)


# --- sensitivity -----------------------------------------------------------------


SENSITIVITY_FIELDS = (
    "snap",
    "forward",
    "reverse",
    "motor_limit",
    "forward_margin",
    "motor_margin",
    "reverse_margin",
    "objective",
)


def _observables(ev: Evaluation) -> dict[str, float]:
    b = ev.budget
    out = {"snap": b.snap, "forward": b.forward, "reverse": b.reverse, "motor_limit": b.motor_limit}
    out.update(ev.margins())
    return out


def sensitivity(p: DesignPoint, param: str, rel_step: float = 1e-4) -> dict[str, float]:
    """Central-difference slopes of forces and margins with respect to ``param``."""
    x = p.get(param)
    h = rel_step * abs(x) if x != 0 else rel_step
    up = _observables(evaluate(p.with_params({param: x + h})))
    down = _observables(evaluate(p.with_params({param: x - h})))
    return {k: (up[k] - down[k]) / (2 * h) for k in SENSITIVITY_FIELDS}
