"""Contact forces that lock and unlock the folding mechanism.

Three forces decide the order of the mode transitions:

* ``snap_force_closed`` -- force needed to push the clip pin through the
  aperture of the spring clip (two cantilevered bow-shaped nails).
* ``forward_pass_force`` -- force needed for the connect pin to pass
  downward over the steep side of the protrusion in the slotted lower link
  (simply supported beams, contact direction rotating with the pin).
* ``reverse_pass_force`` -- force needed to pass upward over the gradual
  side of the protrusion (contact direction fixed, contact position moving).

Each closed form has a stepwise twin that accumulates the incremental
equilibrium step by step; the two must agree as the step count grows.

Units: mm, N, N/mm^2 (MPa). Angles are degrees at the API boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from foldgrip.errors import (
    ApertureTooWide,
    InvalidGeometry,
    InvalidSlopeRange,
    NonPositiveInput,
    SlotTooWide,
)


def _require_positive(owner: str, **values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise NonPositiveInput(f"{owner}.{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class ClipDesign:
    """Spring clip: two bow-shaped nails and the clip pin pushed between them."""

    l_nail: float  # nail length, mm
    b_nail: float  # nail width, mm
    h_nail: float  # nail thickness, mm
    w_nail: float  # aperture between the nails, mm
    r_clip: float  # clip pin radius, mm
    E_nail: float  # Young's modulus, N/mm^2

    def __post_init__(self):
        _require_positive(
            "clip",
            l_nail=self.l_nail,
            b_nail=self.b_nail,
            h_nail=self.h_nail,
            w_nail=self.w_nail,
            r_clip=self.r_clip,
            E_nail=self.E_nail,
        )
        if self.w_nail >= 2 * self.r_clip:
            raise ApertureTooWide(
                f"clip.w_nail={self.w_nail} >= 2*r_clip={2 * self.r_clip}: "
                "the pin never touches the nails"
            )


@dataclass(frozen=True)
class LowerLinkDesign:
    """Slotted lower link with the protrusion and the connect pin riding in it."""

    l_low: float  # supported beam length, mm
    l_low1: float  # support to forward contact point, mm
    l_low2: float  # protrusion span (equals 2*r_cp), mm
    b_low: float  # beam width, mm
    h_low: float  # beam thickness, mm
    w_low: float  # slot width at the protrusion, mm
    r_cp: float  # connect pin radius, mm
    theta_pr: float  # slope of the gradual side, degrees
    l_low11: float  # slot edge to start of the gradual slope, mm
    E_low: float  # Young's modulus, N/mm^2
    n_b: int = 2  # parallel beams either side of the slot

    def __post_init__(self):
        _require_positive(
            "lower_link",
            l_low=self.l_low,
            l_low1=self.l_low1,
            l_low2=self.l_low2,
            b_low=self.b_low,
            h_low=self.h_low,
            w_low=self.w_low,
            r_cp=self.r_cp,
            l_low11=self.l_low11,
            E_low=self.E_low,
            n_b=self.n_b,
        )
        if not 0 <= self.theta_pr < 90:
            raise InvalidGeometry(
                f"lower_link.theta_pr must lie in [0, 90) degrees, got {self.theta_pr}"
            )
        if self.l_low1 + self.l_low2 > self.l_low * (1 + 1e-9):
            raise InvalidGeometry(
                f"lower_link.l_low1 + l_low2 = {self.l_low1 + self.l_low2} exceeds l_low = {self.l_low}"
            )
        if not math.isclose(self.l_low2, 2 * self.r_cp, rel_tol=1e-6):
            raise InvalidGeometry(
                f"lower_link.l_low2={self.l_low2} must equal 2*r_cp={2 * self.r_cp}"
            )
        if self.w_low >= 2 * self.r_cp:
            raise SlotTooWide(
                f"lower_link.w_low={self.w_low} >= 2*r_cp={2 * self.r_cp}: "
                "the connect pin passes the protrusion freely"
            )
        if self.l_low11 >= self.l_low - self.l_low2:
            raise InvalidSlopeRange(
                f"lower_link.l_low11={self.l_low11} must be < l_low - l_low2 = "
                f"{self.l_low - self.l_low2}"
            )


@dataclass(frozen=True)
class StepwiseResult:
    force: float  # N
    steps: int
    terminal_deflection: float  # mm, beam deflection accumulated at completion


def first_contact_angle(r_pin: float, aperture: float) -> float:
    """Angle (degrees) between the aperture axis and the pin-centre line at first contact.

    Follows from ``r_pin * cos(theta) = aperture / 2``.
    """
    if not (r_pin > 0 and aperture > 0):
        raise NonPositiveInput(f"r_pin and aperture must be > 0, got {r_pin!r}, {aperture!r}")
    if aperture >= 2 * r_pin:
        raise ApertureTooWide(f"aperture {aperture} >= 2*r_pin {2 * r_pin}")
    return math.degrees(math.acos(aperture / (2 * r_pin)))


def _sweep_integral(theta1: float) -> float:
    # integral of sin(t)*tan(t) dt from 0 to theta1 (radians)
    s = math.sin(theta1)
    return math.atanh(s) - s


def clip_stiffness(clip: ClipDesign) -> float:
    """Tip stiffness 3EI/l^3 of one nail, N/mm, with I = b*h^3/12."""
    inertia = clip.b_nail * clip.h_nail**3 / 12
    return 3 * clip.E_nail * inertia / clip.l_nail**3


def lower_link_stiffness(low: LowerLinkDesign, position: float | np.ndarray | None = None):
    """Point stiffness 3EIL/(a^2 b^2) of one simply supported beam, N/mm.

    ``position`` is the distance ``a`` of the load from a support. With no
    position the forward contact geometry is used (a = l_low1, b = l_low2).
    """
    inertia = low.b_low * low.h_low**3 / 12
    if position is None:
        a, b = low.l_low1, low.l_low2
    else:
        a, b = position, low.l_low - position
    return 3 * low.E_low * low.l_low * inertia / (a**2 * b**2)


def stiffness_constants(design: ClipDesign | LowerLinkDesign) -> dict[str, float]:
    """Report the incremental stiffness both with and without the 1/12 of I.

    The printed incremental equilibrium writes ``3 E b h^3 / l^3`` while the
    printed closed forms carry ``b h^3 / 12``. Everything in this module uses
    the latter; this function exists so the other reading can be inspected.
    """
    if isinstance(design, ClipDesign):
        consistent = clip_stiffness(design)
    else:
        consistent = lower_link_stiffness(design)
    return {
        "consistent": consistent,
        "without_twelfth": 12 * consistent,
        "ratio": 12.0,
    }


def snap_force_closed(clip: ClipDesign) -> float:
    """Snap force of the spring clip, N (both nails, pin pushed along the aperture axis)."""
    theta1 = math.radians(first_contact_angle(clip.r_clip, clip.w_nail))
    prefactor = clip.r_clip * clip.E_nail * clip.b_nail * clip.h_nail**3 / (2 * clip.l_nail**3)
    return prefactor * _sweep_integral(theta1)


def _rotating_contact_stepwise(k: float, r_pin: float, theta1_deg: float, n_steps: int) -> StepwiseResult:
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")
    theta = np.linspace(math.radians(theta1_deg), 0.0, n_steps + 1)
    # deflection relative to first contact; exact chord form of the increment
    d_omega = np.diff(r_pin * np.cos(theta))
    tan_mid = 0.5 * (np.tan(theta[:-1]) + np.tan(theta[1:]))
    # df*cos = k*domega on each nail, axial share 2*df*sin
    force = float(np.sum(2 * k * d_omega * tan_mid))
    return StepwiseResult(force=force, steps=n_steps, terminal_deflection=float(np.sum(d_omega)))


def snap_force_stepwise(clip: ClipDesign, n_steps: int) -> StepwiseResult:
    """Snap force accumulated over ``n_steps`` uniform steps of the contact angle."""
    theta1 = first_contact_angle(clip.r_clip, clip.w_nail)
    return _rotating_contact_stepwise(clip_stiffness(clip), clip.r_clip, theta1, n_steps)


def forward_pass_force(low: LowerLinkDesign) -> float:
    """Force for the connect pin to pass downward over the protrusion, N."""
    theta1 = math.radians(first_contact_angle(low.r_cp, low.w_low))
    prefactor = (
        low.r_cp * low.E_low * low.l_low * low.b_low * low.h_low**3
        / (2 * low.l_low1**2 * low.l_low2**2)
    )
    return low.n_b * prefactor * _sweep_integral(theta1)


def forward_pass_force_stepwise(low: LowerLinkDesign, n_steps: int) -> StepwiseResult:
    theta1 = first_contact_angle(low.r_cp, low.w_low)
    res = _rotating_contact_stepwise(lower_link_stiffness(low), low.r_cp, theta1, n_steps)
    return StepwiseResult(res.force * low.n_b, res.steps, res.terminal_deflection)


def _reverse_antiderivative(x: float, length: float) -> float:
    # antiderivative of 1 / (x^2 (L - x)^2)
    return (1 / (length - x) - 1 / x) / length**2 + 2 / length**3 * math.log(x / (length - x))


def reverse_pass_force(low: LowerLinkDesign) -> float:
    """Force for the connect pin to pass upward over the gradual slope, N.

    The contact direction stays normal to the slope while the contact point
    travels from ``l_low11`` to ``l_low - l_low2``.
    """
    if low.theta_pr == 0:
        return 0.0
    length = low.l_low
    start, stop = low.l_low11, low.l_low - low.l_low2
    tan_pr = math.tan(math.radians(low.theta_pr))
    prefactor = low.E_low * length * low.b_low * low.h_low**3 * tan_pr**2 / 2
    span = _reverse_antiderivative(stop, length) - _reverse_antiderivative(start, length)
    return low.n_b * prefactor * span


def reverse_pass_force_stepwise(low: LowerLinkDesign, n_steps: int) -> StepwiseResult:
    """Stepwise twin of ``reverse_pass_force``: uniform steps in contact position."""
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")
    positions = np.linspace(low.l_low11, low.l_low - low.l_low2, n_steps + 1)
    tan_pr = math.tan(math.radians(low.theta_pr))
    d_omega = np.diff(positions) * tan_pr
    k = lower_link_stiffness(low, positions)
    k_mid = 0.5 * (k[:-1] + k[1:])
    # constant direction: df*cos = k*domega, axial share 2*df*sin
    force = float(np.sum(2 * k_mid * d_omega * tan_pr)) * low.n_b
    return StepwiseResult(force=force, steps=n_steps, terminal_deflection=float(np.sum(d_omega)))
