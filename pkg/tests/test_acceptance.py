"""Acceptance suite: one test per criterion, named ``test_criterion_<id>_<topic>``.

The terminal summary prints a PASS/FAIL line per criterion (see conftest).
"""
import math
import time

import pytest
from scipy.integrate import quad

from foldgrip.beams import (
    forward_pass_force,
    reverse_pass_force,
    snap_force_closed,
    snap_force_stepwise,
)
from foldgrip.cli import main
from foldgrip.explorer import Axis, SearchSpace, evaluate, grid_scan, refine
from foldgrip.linkage import ActuatorSpec, ForceBudget, motor_force_limit, validate_switching
from foldgrip.reference import SNAP_FORCE_REPORTED, TABLE2_MEASURED, TABLE2_THEORETICAL, table1_path
from foldgrip.switching import (
    INSERTION_STATE,
    Strategy,
    WorkspaceScenario,
    claw_load_check,
    final_state,
    grasp_feasibility,
    max_claw_load,
    simulate_forward_active,
    simulate_reverse,
    trace_ok,
)

from conftest import random_budget, random_clip, random_lower

GRID_AXES = ("clip.h_nail", "lower_link.h_low", "lower_link.theta_pr")


def test_criterion_1_motor_force_limit(table1):
    f = motor_force_limit(table1.act, table1.geom)
    assert f == pytest.approx(TABLE2_THEORETICAL["motor_limit"], rel=0.01)


def test_criterion_2_forward_pass_force(table1):
    assert table1.lower.n_b == 2
    f = forward_pass_force(table1.lower)
    assert f == pytest.approx(TABLE2_THEORETICAL["forward"], rel=0.03)


def test_criterion_3_ordering_verdicts(table1):
    for row in (TABLE2_THEORETICAL, TABLE2_MEASURED):
        v = validate_switching(ForceBudget.from_forces(geom=table1.geom, **row))
        assert (v.forward_ok, v.reverse_ok) == (True, True)
    b = ForceBudget.from_forces(geom=table1.geom, **TABLE2_THEORETICAL)
    assert b.reverse < b.snap_at_pin < b.forward
    assert round(b.snap_at_pin, 2) == 4.24


def test_criterion_4_snap_force_self_consistency(table1, rng, capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        clip = random_clip(rng)
        closed = snap_force_closed(clip)
        step = snap_force_stepwise(clip, 10**4).force
        worst = max(worst, abs(step - closed) / closed)
    assert worst < 1e-3

    snap = snap_force_closed(table1.clip)
    assert snap == pytest.approx(76.25, rel=1e-3)
    assert main(["analyze", str(table1_path())]) in (0, 2)
    out = capsys.readouterr().out
    ratio = snap / SNAP_FORCE_REPORTED
    assert f"closed form {snap:.4g} N, reported {SNAP_FORCE_REPORTED:g} N, ratio {ratio:.4g}" in out
    assert time.perf_counter() - t0 < 10


def test_criterion_5_reverse_force_quadrature(table1, rng):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        low = random_lower(rng)
        tan_pr = math.tan(math.radians(low.theta_pr))
        c = low.n_b * low.E_low * low.l_low * low.b_low * low.h_low**3 * tan_pr**2 / 2
        L = low.l_low
        val, _ = quad(lambda x: c / (x**2 * (L - x) ** 2), low.l_low11, L - low.l_low2, epsrel=1e-12, limit=200)
        worst = max(worst, abs(reverse_pass_force(low) - val) / val)
    assert worst < 1e-6
    flat = table1.with_params({"lower_link.theta_pr": 0.0}).lower
    assert reverse_pass_force(flat) == 0.0
    assert time.perf_counter() - t0 < 10


def test_criterion_6_simulator_validator_equivalence(table1, rng):
    t0 = time.perf_counter()
    for _ in range(1000):
        budget, geom = random_budget(rng)
        act = ActuatorSpec(rng.uniform(50, 500), rng.uniform(3, 20))
        v = validate_switching(budget)
        fwd = simulate_forward_active(budget, act, geom)
        back = simulate_reverse(budget, act, geom)
        assert trace_ok(fwd) == v.forward_ok
        assert trace_ok(back) == v.reverse_ok
        if trace_ok(fwd) and trace_ok(back):
            assert final_state(back, final_state(fwd, INSERTION_STATE)) == INSERTION_STATE
    b = ForceBudget.from_forces(geom=table1.geom, **TABLE2_THEORETICAL)
    fwd = simulate_forward_active(b, table1.act, table1.geom)
    back = simulate_reverse(b, table1.act, table1.geom)
    assert final_state(back, final_state(fwd)) == INSERTION_STATE
    assert time.perf_counter() - t0 < 5


def test_criterion_7_feasibility_rules():
    assert grasp_feasibility(WorkspaceScenario(w1=4, w2=10)).strategy is Strategy.STRATEGY1
    assert grasp_feasibility(WorkspaceScenario(w1=2, w2=10, object_slidable=True)).strategy is Strategy.STRATEGY2
    assert grasp_feasibility(WorkspaceScenario(w1=0.9, w2=10)).strategy is Strategy.INFEASIBLE
    assert grasp_feasibility(WorkspaceScenario(w1=4, w2=10, chamfer=1.0)).feasible
    assert not grasp_feasibility(WorkspaceScenario(w1=4, w2=10, chamfer=0.5)).feasible


def test_criterion_8_claw_capacity():
    chk = claw_load_check(18.6, 12.0)
    assert chk.moment == pytest.approx(223.2, rel=1e-12)
    assert not chk.ok
    assert chk.margin == pytest.approx(-0.2, abs=1e-9)
    assert max_claw_load(12.0) == pytest.approx(18.58, rel=5e-3)


def _bracketing_space(p):
    axes = tuple(Axis(n, 0.5 * p.get(n), 1.5 * p.get(n), 3) for n in GRID_AXES)
    return SearchSpace(p, axes)


def test_criterion_9a_grid_contains_table1_in_feasible_set(table1):
    report = grid_scan(_bracketing_space(table1))
    hits = [ev for ev in report.feasible_points if all(math.isclose(ev.point.get(n), table1.get(n)) for n in GRID_AXES)]
    assert len(hits) == 1


def test_criterion_9b_feasible_points_revalidate(table1):
    report = grid_scan(_bracketing_space(table1))
    assert report.feasible_points
    for ev in report.feasible_points:
        again = evaluate(ev.point)
        v = validate_switching(again.budget)
        assert v.forward_ok and v.reverse_ok
        assert again.objective == ev.objective


def test_criterion_9c_refine_never_degrades(table1, rng):
    t0 = time.perf_counter()
    space = _bracketing_space(table1)
    starts = [table1] + [
        table1.with_params({a.name: rng.uniform(a.lo, a.hi) for a in space.axes}) for _ in range(10)
    ]
    for start in starts:
        res = refine(start, space, 150)
        assert res.evaluation.objective >= evaluate(start).objective
    assert time.perf_counter() - t0 < 30
