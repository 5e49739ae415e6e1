"""Impulse-based contact resolution for a spinning ball on a plane.

A collision is resolved in the rest frame of the surface. The normal
velocity reverses scaled by the restitution coefficient; Coulomb friction
acts on the contact-point slip and either arrests it entirely (stick) or
saturates at mu_s * J_n (slide). The friction impulse's torque about the
ball center updates the spin. The returned ImpulseRecord makes the
momentum balance exact and splits the dissipated energy into non-negative
force work and torque work, so the energy balance closes to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import BallProperties, BallState, cross3, speed3


class NotApproaching(ValueError):
    """Ball is not moving toward the surface."""


class OutsideRacket(ValueError):
    """Contact point lies beyond the racket disk radius."""


@dataclass(frozen=True)
class ContactParams:
    """Normal restitution and friction coefficients for one surface."""

    e_n: float = 0.93
    mu_s: float = 0.25
    mu_r: float = 0.0  # rolling friction, reserved

    def __post_init__(self):
        if not (0.0 < self.e_n <= 1.0):
            raise ValueError("e_n must be in (0, 1]")
        if self.mu_s < 0 or self.mu_r < 0:
            raise ValueError("friction coefficients must be non-negative")


# Order-of-magnitude literature values; override via config.
TABLE_CONTACT = ContactParams(e_n=0.93, mu_s=0.25)
RACKET_CONTACT = ContactParams(e_n=0.82, mu_s=0.6)

DEFAULT_RACKET_RADIUS = 0.085


@dataclass(frozen=True)
class SurfaceFrame:
    """A contact plane: origin, outward unit normal, and its own velocity."""

    origin: np.ndarray
    normal: np.ndarray
    surface_velocity: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=np.float64))
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=np.float64))
        object.__setattr__(self, "surface_velocity",
                           np.asarray(self.surface_velocity, dtype=np.float64))
        if abs(speed3(self.normal) - 1.0) > 1e-9:
            raise ValueError("surface normal must be a unit vector")

    @staticmethod
    def table(height: float) -> "SurfaceFrame":
        return SurfaceFrame(np.array([0.0, 0.0, height]),
                            np.array([0.0, 0.0, 1.0]), np.zeros(3))


@dataclass(frozen=True)
class ImpulseRecord:
    """Impulses applied to the ball and the energy dissipated doing so.

    J_lin is the total linear impulse (normal + friction), J_ang the
    angular impulse of the friction torque about the center. W_f collects
    the force work lost to normal restitution and interface slip; W_m is
    the torque work of rolling friction (zero while mu_r is unmodeled).
    Both works are non-negative by construction.
    """

    J_lin: np.ndarray
    J_ang: np.ndarray
    W_f: float
    W_m: float


def resolve_bounce(s: BallState, frame: SurfaceFrame, cp: ContactParams,
                   props: BallProperties) -> tuple[BallState, ImpulseRecord]:
    """Resolve a ball-plane collision; spin-aware, stick/slide Coulomb friction.

    Raises NotApproaching when the relative normal velocity is not inbound.
    """
    n = frame.normal
    u = frame.surface_velocity
    v_rel = s.v - u
    v_n = float(v_rel @ n)
    if v_n >= 0.0:
        raise NotApproaching(f"relative normal velocity {v_n:.6g} >= 0")

    m, r, inertia = props.m_b, props.r_b, props.I_b

    # Normal impulse: v_n' = -e_n v_n.
    j_n = -m * (1.0 + cp.e_n) * v_n

    # Contact-point slip: tangential velocity of the ball material point.
    v_t = v_rel - v_n * n
    slip = v_t + cross3(s.w, -r * n)
    slip_mag = float(speed3(slip))

    # Impulse that would arrest the slip entirely. The effective mass
    # 1/(1/m + r^2/I) evaluates to (2/5) m for a hollow sphere.
    k_eff = 1.0 / (1.0 / m + r * r / inertia)
    j_stick = k_eff * slip_mag

    if slip_mag == 0.0:
        j_t = np.zeros(3)
    elif cp.mu_s * j_n >= j_stick:
        j_t = -k_eff * slip
    else:
        j_t = -(cp.mu_s * j_n / slip_mag) * slip

    j_lin = j_n * n + j_t
    j_ang = cross3(-r * n, j_t)

    v_post = s.v + j_lin / m
    w_post = s.w + j_ang / inertia
    post = BallState(s.p, v_post, w_post)

    # Dissipation bookkeeping (surface rest frame, exact identities):
    #   normal hysteresis  = -j_n (v_n + v_n') / 2
    #   interface friction = -j_t . (slip + slip') / 2
    slip_post = slip + j_t * (1.0 / m + r * r / inertia)
    w_normal = -j_n * (v_n + (-cp.e_n * v_n)) / 2.0
    w_slip = -float(j_t @ (slip + slip_post)) / 2.0
    rec = ImpulseRecord(J_lin=j_lin, J_ang=j_ang,
                        W_f=w_normal + w_slip, W_m=0.0)
    return post, rec


def resolve_racket_hit(s: BallState, racket: SurfaceFrame, cp: ContactParams,
                       props: BallProperties,
                       radius: float | None = DEFAULT_RACKET_RADIUS
                       ) -> tuple[BallState, ImpulseRecord]:
    """Resolve a hit on a moving rigid disk of infinite mass.

    The ball is shifted into the racket's rest frame, bounced off the
    plane, and shifted back. The impulse record is frame-invariant; its
    energy terms refer to the racket rest frame. Pass radius=None to skip
    the disk containment check.
    """
    n = racket.normal
    d = s.p - racket.origin
    if radius is not None:
        in_plane = d - (d @ n) * n
        if float(speed3(in_plane)) > radius:
            raise OutsideRacket(
                f"contact offset {float(speed3(in_plane)):.4f} m exceeds "
                f"disk radius {radius:.4f} m")

    # Hit on the back face: resolve against the flipped normal.
    side = 1.0 if float(d @ n) >= 0.0 else -1.0
    shifted = BallState(s.p, s.v - racket.surface_velocity, s.w)
    rest_frame = SurfaceFrame(racket.origin, side * n, np.zeros(3))
    post, rec = resolve_bounce(shifted, rest_frame, cp, props)
    return BallState(post.p, post.v + racket.surface_velocity, post.w), rec


def verify_conservation(pre: BallState, post: BallState, rec: ImpulseRecord,
                        props: BallProperties) -> tuple[float, np.ndarray]:
    """Residuals of the energy and momentum balances for one collision.

    Energy: dKE_lin + dKE_ang + W_f + W_m, evaluated in the frame the
    record was produced in (the surface rest frame). Momentum: the full
    3-vector m dv - J_lin; its tangent-plane projection is the certified
    quantity since the normal reaction is carried by J_lin itself here.
    """
    m, inertia = props.m_b, props.I_b
    ke_lin = 0.5 * m * (float(speed3(post.v)) ** 2 - float(speed3(pre.v)) ** 2)
    ke_ang = 0.5 * inertia * (float(speed3(post.w)) ** 2
                              - float(speed3(pre.w)) ** 2)
    energy_residual = ke_lin + ke_ang + rec.W_f + rec.W_m
    momentum_residual = m * (post.v - pre.v) - rec.J_lin
    return energy_residual, momentum_residual


__all__ = [
    "ContactParams", "SurfaceFrame", "ImpulseRecord",
    "NotApproaching", "OutsideRacket",
    "TABLE_CONTACT", "RACKET_CONTACT", "DEFAULT_RACKET_RADIUS",
    "resolve_bounce", "resolve_racket_hit", "verify_conservation",
]
