"""Quasi-static event sequences for the mode-switching procedures.

The slide base is driven slowly, so the force at the clip pin ramps up and
each mechanism threshold fires once the ramp reaches it. Only the order of
events and whether the motor can supply each one is modelled; slide-base
travel is not. Fingertip angles are the symbolic end points 0 and 90 deg.

Three procedures are covered:

* active: the motor alone folds the finger (insertion -> grasping)
* passive: motor off, fingertip rotated by contact with a support surface,
  then the motor finishes the fold
* reverse: the motor pulls the finger back to insertion mode
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from foldgrip.linkage import (
    ActuatorSpec,
    ForceBudget,
    LinkageGeometry,
    pin_to_clip,
    required_torque,
)


class Mode(str, enum.Enum):
    INSERTION = "InsertionMode"
    MIDDLE_PERPENDICULAR = "MiddlePerpendicular"
    CLIP_SNAPPED = "ClipSnapped"
    GRASPING = "GraspingMode"


class Claw(str, enum.Enum):
    STOWED = "Stowed"
    EMERGED = "Emerged"


class EventLabel(str, enum.Enum):
    SLIDE_TRANSLATE = "SlideTranslate"
    PIN_STOP = "PinStop"
    CLIP_SNAP = "ClipSnap"
    FINGERTIP_ROTATED = "FingertipRotated"
    PROTRUSION_PASS_DOWN = "ProtrusionPassDown"
    PROTRUSION_PASS_UP = "ProtrusionPassUp"
    CLIP_UNLOCK = "ClipUnlock"
    CONTACT_SUPPORT = "ContactSupport"
    PASSIVE_ROTATE = "PassiveRotate"


@dataclass(frozen=True)
class GripperState:
    mode: Mode = Mode.INSERTION
    claw: Claw = Claw.STOWED
    fingertip_angle: float = 0.0  # degrees

    def __post_init__(self):
        if not 0 <= self.fingertip_angle <= 90:
            raise ValueError(f"fingertip_angle must lie in [0, 90], got {self.fingertip_angle}")
        if self.claw is Claw.EMERGED and self.mode not in (Mode.CLIP_SNAPPED, Mode.GRASPING):
            raise ValueError(f"claw cannot be emerged in {self.mode.value}")
        if self.mode is Mode.GRASPING and self.fingertip_angle != 90:
            raise ValueError("grasping mode requires the fingertip at 90 deg")


INSERTION_STATE = GripperState()
GRASPING_STATE = GripperState(Mode.GRASPING, Claw.EMERGED, 90.0)


@dataclass(frozen=True)
class SwitchEvent:
    label: EventLabel
    required_clip_force: float  # N at the clip pin
    required_torque: float  # N*mm, zero for torque-off events
    feasible: bool
    state: GripperState  # state after the event; unchanged when infeasible
    violation: str | None = None
    passive: bool = False


def trace_ok(trace) -> bool:
    """True when every event of the trace is feasible."""
    return all(ev.feasible for ev in trace)


def final_state(trace, start: GripperState = INSERTION_STATE) -> GripperState:
    return trace[-1].state if trace else start


def trace_records(trace) -> list[dict]:
    """Flatten a trace into ordered records for tabular export."""
    return [
        {
            "step": i,
            "event": ev.label.value,
            "force_N": ev.required_clip_force,
            "torque_Nmm": ev.required_torque,
            "feasible": ev.feasible,
            "state": ev.state.mode.value,
            "violation": ev.violation or "",
        }
        for i, ev in enumerate(trace, start=1)
    ]


class _Tracer:
    def __init__(self, act, geom, motor_limit, state):
        self.act = act
        self.geom = geom
        self.motor_limit = motor_limit
        self.state = state
        self.events: list[SwitchEvent] = []

    def active(self, label, force, new_state, violation=None):
        """Append a motor-driven event; returns False once the trace must stop."""
        torque = required_torque(force, self.act, self.geom)
        if violation is None and not force < self.motor_limit:
            violation = f"needs {force:.4g} N at the clip, motor limit {self.motor_limit:.4g} N"
        feasible = violation is None
        if feasible:
            self.state = new_state
        self.events.append(SwitchEvent(label, force, torque, feasible, self.state, violation))
        return feasible

    def passive(self, label, new_state):
        self.state = new_state
        self.events.append(SwitchEvent(label, 0.0, 0.0, True, self.state, passive=True))


def _fold_tail(tr: _Tracer, budget: ForceBudget) -> None:
    # clip-side ramp from the stop position to grasping mode; the lower of the
    # two thresholds fires first
    if not budget.snap < budget.forward_at_clip:
        tr.active(
            EventLabel.PROTRUSION_PASS_DOWN,
            budget.forward_at_clip,
            tr.state,
            violation="ordering: connect pin passes the protrusion before the clip snaps",
        )
        return
    snapped = GripperState(Mode.CLIP_SNAPPED, Claw.EMERGED, tr.state.fingertip_angle)
    if not tr.active(EventLabel.CLIP_SNAP, budget.snap, snapped):
        return
    rotated = GripperState(Mode.CLIP_SNAPPED, Claw.EMERGED, 90.0)
    if not tr.active(EventLabel.FINGERTIP_ROTATED, budget.snap, rotated):
        return
    tr.active(EventLabel.PROTRUSION_PASS_DOWN, budget.forward_at_clip, GRASPING_STATE)


def simulate_forward_active(budget: ForceBudget, act: ActuatorSpec, geom: LinkageGeometry) -> tuple[SwitchEvent, ...]:
    """Insertion to grasping mode by motor rotation only.

    A feasible trace is SlideTranslate, PinStop, ClipSnap, FingertipRotated,
    ProtrusionPassDown. The trace stops at the first infeasible event.
    """
    tr = _Tracer(act, geom, budget.motor_limit, INSERTION_STATE)
    tr.active(EventLabel.SLIDE_TRANSLATE, 0.0, INSERTION_STATE)
    tr.active(EventLabel.PIN_STOP, 0.0, GripperState(Mode.MIDDLE_PERPENDICULAR))
    _fold_tail(tr, budget)
    return tuple(tr.events)


def simulate_forward_passive(
    budget: ForceBudget, act: ActuatorSpec, geom: LinkageGeometry, descent_contact: bool = True
) -> tuple[SwitchEvent, ...]:
    """Insertion to grasping mode with the fingertip rotated by surface contact.

    The motor is off while the gripper descends. Without surface contact
    nothing moves and the trace is empty.
    """
    if not descent_contact:
        return ()
    tr = _Tracer(act, geom, budget.motor_limit, INSERTION_STATE)
    tr.passive(EventLabel.CONTACT_SUPPORT, INSERTION_STATE)
    # the back-driven slide base takes the middle link as far as the slide translation would
    tr.passive(EventLabel.PASSIVE_ROTATE, INSERTION_STATE)
    tr.active(EventLabel.PIN_STOP, 0.0, GripperState(Mode.MIDDLE_PERPENDICULAR))
    _fold_tail(tr, budget)
    return tuple(tr.events)


def simulate_reverse(budget: ForceBudget, act: ActuatorSpec, geom: LinkageGeometry) -> tuple[SwitchEvent, ...]:
    """Grasping back to insertion mode.

    The connect pin must climb the gradual slope before the clip unlocks.
    Event feasibility here is the ordering only: the motor torque is reported
    but a grasping-mode start implies the fold, which needed more force.
    """
    tr = _Tracer(act, geom, float("inf"), GRASPING_STATE)
    reverse_at_clip = pin_to_clip(budget.reverse, geom)
    if not budget.reverse < budget.snap_at_pin:
        tr.active(
            EventLabel.CLIP_UNLOCK,
            budget.snap,
            tr.state,
            violation="ordering: clip unlocks before the connect pin passes the protrusion",
        )
        return tuple(tr.events)
    if not budget.reverse < budget.forward:
        tr.active(
            EventLabel.PROTRUSION_PASS_UP,
            reverse_at_clip,
            tr.state,
            violation="upward pass force is not below the downward pass force",
        )
        return tuple(tr.events)
    tr.active(EventLabel.PROTRUSION_PASS_UP, reverse_at_clip, GripperState(Mode.CLIP_SNAPPED, Claw.EMERGED, 90.0))
    tr.active(EventLabel.CLIP_UNLOCK, budget.snap, GripperState(Mode.MIDDLE_PERPENDICULAR, Claw.STOWED, 90.0))
    tr.active(EventLabel.FINGERTIP_ROTATED, 0.0, GripperState(Mode.MIDDLE_PERPENDICULAR, Claw.STOWED, 0.0))
    tr.active(EventLabel.SLIDE_TRANSLATE, 0.0, INSERTION_STATE)
    return tuple(tr.events)


# --- narrow-space rules -----------------------------------------------------


class Strategy(str, enum.Enum):
    STRATEGY1 = "Strategy1"
    STRATEGY2 = "Strategy2"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class WorkspaceScenario:
    """Gaps around the target object, mm.

    ``w1`` is the gap the fingertip enters, ``w2`` the gap on the far side of
    the object. ``chamfer`` is the edge the fingertip must slip under.
    """

    w1: float
    w2: float
    w_body: float = 6.0
    w_tip: float = 1.0
    chamfer: float = 1.0
    object_slidable: bool = True
    strategy1_min_gap: float = 4.0

    def __post_init__(self):
        for name in ("w1", "w2", "w_body", "w_tip", "chamfer", "strategy1_min_gap"):
            if getattr(self, name) < 0:
                raise ValueError(f"workspace.{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class FeasibilityResult:
    strategy: Strategy
    reason: str

    @property
    def feasible(self) -> bool:
        return self.strategy is not Strategy.INFEASIBLE


def grasp_feasibility(s: WorkspaceScenario) -> FeasibilityResult:
    if s.w1 < s.w_tip:
        return FeasibilityResult(Strategy.INFEASIBLE, f"gap w1={s.w1} mm is narrower than the fingertip ({s.w_tip} mm)")
    if s.chamfer < s.w_tip:
        return FeasibilityResult(
            Strategy.INFEASIBLE, f"chamfer {s.chamfer} mm is below the fingertip thickness ({s.w_tip} mm)"
        )
    if s.w1 + s.w2 <= s.w_body:
        return FeasibilityResult(
            Strategy.INFEASIBLE, f"w1 + w2 = {s.w1 + s.w2} mm does not exceed the body width ({s.w_body} mm)"
        )
    if s.w1 >= s.strategy1_min_gap:
        return FeasibilityResult(Strategy.STRATEGY1, f"body enters directly (w1 >= {s.strategy1_min_gap} mm)")
    if s.object_slidable:
        return FeasibilityResult(
            Strategy.STRATEGY2, "fingertip first, then push the object aside to open room for the body"
        )
    return FeasibilityResult(Strategy.INFEASIBLE, "gap only admits the fingertip and the object cannot be displaced")


@dataclass(frozen=True)
class ClawCapacity:
    max_moment: float = 223.0  # N*mm at the lower claw base
    reference_arm: float = 12.0  # mm from the fingertip pivot

    def __post_init__(self):
        if not self.max_moment > 0:
            raise ValueError(f"claw.max_moment must be > 0, got {self.max_moment}")
        if not self.reference_arm > 0:
            raise ValueError(f"claw.reference_arm must be > 0, got {self.reference_arm}")


@dataclass(frozen=True)
class ClawCheck:
    ok: bool
    moment: float  # N*mm
    margin: float  # max_moment - moment, N*mm


def claw_load_check(load: float, arm: float | None = None, cap: ClawCapacity | None = None) -> ClawCheck:
    """Compare the moment of ``load`` at ``arm`` with the claw capacity."""
    cap = cap or ClawCapacity()
    if arm is None:
        arm = cap.reference_arm
    if not (load > 0 and arm > 0):
        raise ValueError(f"load and arm must be > 0, got {load}, {arm}")
    moment = load * arm
    return ClawCheck(ok=moment <= cap.max_moment, moment=moment, margin=cap.max_moment - moment)


def max_claw_load(arm: float | None = None, cap: ClawCapacity | None = None) -> float:
    """Largest load (N) the lower claw holds at ``arm`` mm."""
    cap = cap or ClawCapacity()
    if arm is None:
        arm = cap.reference_arm
    return cap.max_moment / arm
