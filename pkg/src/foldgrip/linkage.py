"""Lever-arm moment balances between motor, clip pin and connect pin.

The middle link pivots about the joint to the upper link. The clip pin acts
at ``l_clip`` from that joint and the connect pin at ``l_23``, so a force at
one point is re-expressed at the other by ``l_clip * f_clip = l_23 * f_3``.
The motor drives the slide base through a rack and pinion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from foldgrip.errors import InvalidGeometry, NonPositiveInput


@dataclass(frozen=True)
class LinkageGeometry:
    l_clip: float  # clip pin to upper/middle joint, mm
    l_12: float  # upper link arm, mm
    l_23: float  # middle link arm to the connect pin, mm
    theta_2: float  # angle between upper and middle links, degrees

    def __post_init__(self):
        for name in ("l_clip", "l_12", "l_23"):
            if not getattr(self, name) > 0:
                raise NonPositiveInput(f"linkage.{name} must be > 0, got {getattr(self, name)!r}")
        if not 0 < self.theta_2 < 90:
            raise InvalidGeometry(f"linkage.theta_2 must lie in (0, 90) degrees, got {self.theta_2}")


@dataclass(frozen=True)
class ActuatorSpec:
    tau_m_max: float  # maximum motor torque, N*mm
    r_pg: float  # pinion pitch radius, mm

    def __post_init__(self):
        for name in ("tau_m_max", "r_pg"):
            if not getattr(self, name) > 0:
                raise NonPositiveInput(f"actuator.{name} must be > 0, got {getattr(self, name)!r}")


def pin_to_clip(f3: float, geom: LinkageGeometry) -> float:
    """Connect-pin force expressed at the clip pin."""
    if f3 < 0:
        raise ValueError(f"force must be >= 0, got {f3}")
    return geom.l_23 * f3 / geom.l_clip


def clip_to_pin(f_clip: float, geom: LinkageGeometry) -> float:
    """Clip-pin force expressed at the connect pin."""
    if f_clip < 0:
        raise ValueError(f"force must be >= 0, got {f_clip}")
    return geom.l_clip * f_clip / geom.l_23


def _torque_to_clip_gain(act: ActuatorSpec, geom: LinkageGeometry) -> float:
    # clip force per unit motor torque
    return geom.l_12 * math.cos(math.radians(geom.theta_2)) / (geom.l_clip * act.r_pg)


def motor_force_limit(act: ActuatorSpec, geom: LinkageGeometry) -> float:
    """Largest clip-pin force the motor can produce, N."""
    return _torque_to_clip_gain(act, geom) * act.tau_m_max


def required_torque(f_clip: float, act: ActuatorSpec, geom: LinkageGeometry) -> float:
    """Motor torque (N*mm) needed to hold ``f_clip`` at the clip pin."""
    if f_clip < 0:
        raise ValueError(f"force must be >= 0, got {f_clip}")
    return f_clip / _torque_to_clip_gain(act, geom)


@dataclass(frozen=True)
class ForceBudget:
    """The four forces that gate switching, plus their moment equivalents.

    ``snap`` and ``motor_limit`` act at the clip pin; ``forward`` and
    ``reverse`` act at the connect pin.
    """

    snap: float
    forward: float
    reverse: float
    motor_limit: float
    forward_at_clip: float
    snap_at_pin: float

    def __post_init__(self):
        for name in ("snap", "forward", "reverse", "motor_limit", "forward_at_clip", "snap_at_pin"):
            if getattr(self, name) < 0:
                raise ValueError(f"ForceBudget.{name} must be >= 0, got {getattr(self, name)}")

    @classmethod
    def from_forces(cls, snap, forward, reverse, motor_limit, geom: LinkageGeometry) -> "ForceBudget":
        return cls(
            snap=snap,
            forward=forward,
            reverse=reverse,
            motor_limit=motor_limit,
            forward_at_clip=pin_to_clip(forward, geom),
            snap_at_pin=clip_to_pin(snap, geom),
        )

    def scaled(self, factor: float) -> "ForceBudget":
        return ForceBudget(*(factor * getattr(self, f) for f in (
            "snap", "forward", "reverse", "motor_limit", "forward_at_clip", "snap_at_pin")))


@dataclass(frozen=True)
class SwitchVerdict:
    forward_ok: bool
    reverse_ok: bool
    forward_margin: float  # forward_at_clip - snap, N at the clip pin
    motor_margin: float  # motor_limit - forward_at_clip, N at the clip pin
    reverse_margin: float  # snap_at_pin - reverse, N at the connect pin


def validate_switching(budget: ForceBudget) -> SwitchVerdict:
    """Check the lock/unlock ordering in both switching directions.

    Insertion to grasping needs ``snap < forward_at_clip < motor_limit``: the
    clip must lock before the connect pin escapes, within motor reach.

    Grasping to insertion needs the connect pin to climb back over the
    protrusion before the clip unlocks. The two forces act at different
    points, so the snap force is first carried over to the connect pin
    (``snap_at_pin``), then ``reverse < snap_at_pin`` and ``reverse < forward``
    are required. All comparisons are strict.
    """
    forward_margin = budget.forward_at_clip - budget.snap
    motor_margin = budget.motor_limit - budget.forward_at_clip
    reverse_margin = budget.snap_at_pin - budget.reverse
    return SwitchVerdict(
        forward_ok=forward_margin > 0 and motor_margin > 0,
        reverse_ok=reverse_margin > 0 and budget.reverse < budget.forward,
        forward_margin=forward_margin,
        motor_margin=motor_margin,
        reverse_margin=reverse_margin,
    )
