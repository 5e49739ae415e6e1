"""Ball free-flight dynamics: gravity, quadratic air drag, Magnus lift.

All state is float64. The same array kernels serve single balls and
batches of balls, so scalar and batched integration are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

if TYPE_CHECKING:
    from .rally import TableGeometry

GRAVITY = np.array([0.0, 0.0, -9.81])

# Default integrator step: 1/360 s (three substeps per 1/120 s control period).
DEFAULT_DT = 1.0 / 360.0

# Spin magnitude cap enforced by the simulator after contact updates.
W_MAX_DEFAULT = 600.0


def _as_vec3(x) -> np.ndarray:
    v = np.array(x, dtype=np.float64)  # copy: states must not alias buffers
    if v.shape != (3,):
        raise ValueError(f"expected 3-vector, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class BallState:
    """Position (m), linear velocity (m/s) and angular velocity (rad/s)."""

    p: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _as_vec3(self.p))
        object.__setattr__(self, "v", _as_vec3(self.v))
        object.__setattr__(self, "w", _as_vec3(self.w))

    @property
    def finite(self) -> bool:
        return bool(np.isfinite(self.p).all() and np.isfinite(self.v).all()
                    and np.isfinite(self.w).all())


@dataclass(frozen=True)
class AeroCoefficients:
    """Drag coefficient k_d (1/m) and Magnus coefficient k_m (s)."""

    k_d: float = 0.1
    k_m: float = 0.04

    def __post_init__(self):
        if self.k_d < 0 or self.k_m < 0:
            raise ValueError("aero coefficients must be non-negative")


def hollow_sphere_inertia(mass: float, radius: float) -> float:
    return (2.0 / 3.0) * mass * radius * radius


@dataclass(frozen=True)
class BallProperties:
    """Mass, radius and moment of inertia; defaults are a standard 40 mm ball."""

    m_b: float = 2.7e-3
    r_b: float = 0.02
    I_b: float = hollow_sphere_inertia(2.7e-3, 0.02)

    def __post_init__(self):
        if self.m_b <= 0 or self.r_b <= 0 or self.I_b <= 0:
            raise ValueError("ball properties must be positive")


def cross3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise cross product for (..., 3) arrays.

    Written out explicitly so scalar and batched callers execute the same
    floating-point operations in the same order.
    """
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=np.float64)
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def speed3(v: np.ndarray) -> np.ndarray:
    """|v| for (..., 3) arrays, fixed evaluation order."""
    return np.sqrt(v[..., 0] * v[..., 0] + v[..., 1] * v[..., 1]
                   + v[..., 2] * v[..., 2])


def aero_accel_arrays(v: np.ndarray, w: np.ndarray, k_d, k_m,
                      g: np.ndarray = GRAVITY) -> np.ndarray:
    """Acceleration g - k_d|v|v + k_m (w x v) on (..., 3) arrays."""
    k_d = np.asarray(k_d, dtype=np.float64)[..., None]
    k_m = np.asarray(k_m, dtype=np.float64)[..., None]
    return g - k_d * speed3(v)[..., None] * v + k_m * cross3(w, v)


def step_arrays(p: np.ndarray, v: np.ndarray, w: np.ndarray, k_d, k_m,
                dt: float, g: np.ndarray = GRAVITY):
    """One semi-implicit Euler step; spin is untouched in free flight."""
    v_new = v + aero_accel_arrays(v, w, k_d, k_m, g) * dt
    p_new = p + v_new * dt
    return p_new, v_new


def aero_accel(s: BallState, a: AeroCoefficients,
               g: np.ndarray = GRAVITY) -> np.ndarray:
    """Acceleration of the ball: g - k_d|v|v + k_m (w x v)."""
    return aero_accel_arrays(s.v, s.w, a.k_d, a.k_m, g)


def step_ball(s: BallState, a: AeroCoefficients, dt: float,
              g: np.ndarray = GRAVITY) -> BallState:
    """Advance one step: v' = v + a(s) dt, p' = p + v' dt, w' = w."""
    if dt < 0:
        raise ValueError("dt must be >= 0")
    if dt == 0.0:
        return s
    p, v = step_arrays(s.p, s.v, s.w, a.k_d, a.k_m, dt, g)
    return BallState(p, v, s.w)


@dataclass(frozen=True)
class SurfaceEvent:
    """First surface reached during free flight."""

    surface: str          # "table" | "net" | "floor"
    time: float           # seconds from the start of the flight
    ball: BallState       # state at contact (position linearly interpolated)


def _segment_events(p0: np.ndarray, p1: np.ndarray, geom: "TableGeometry",
                    r_b: float) -> Optional[tuple[str, float]]:
    """Earliest table/net/floor hit on the segment p0 -> p1, or None.

    Returns (surface, fraction). The table occupies z = geom.height over
    |x| <= length/2, |y| <= width/2; the net is the x = 0 plane between the
    table surface and geom.height + geom.net_height; the floor is z = 0.
    Candidates are ordered by crossing fraction; ties resolve
    table < net < floor.
    """
    hits: list[tuple[float, int, str]] = []

    lo0 = p0[2] - r_b
    lo1 = p1[2] - r_b

    # Table plane: lower point descends through z = height inside the rectangle.
    if lo0 > geom.height >= lo1 and lo1 != lo0:
        s = (geom.height - lo0) / (lo1 - lo0)
        x = p0[0] + s * (p1[0] - p0[0])
        y = p0[1] + s * (p1[1] - p0[1])
        if abs(x) <= geom.length / 2 and abs(y) <= geom.width / 2:
            hits.append((s, 0, "table"))

    # Net plane: center crosses x = 0 below the net top, above the table.
    if (p0[0] > 0.0) != (p1[0] > 0.0) and p1[0] != p0[0]:
        s = (0.0 - p0[0]) / (p1[0] - p0[0])
        y = p0[1] + s * (p1[1] - p0[1])
        z = p0[2] + s * (p1[2] - p0[2])
        if (abs(y) <= geom.width / 2
                and geom.height <= z < geom.height + geom.net_height):
            hits.append((s, 1, "net"))

    # Floor: lower point reaches z = 0.
    if lo0 > 0.0 >= lo1 and lo1 != lo0:
        s = (0.0 - lo0) / (lo1 - lo0)
        hits.append((s, 2, "floor"))

    if not hits:
        return None
    s, _, surface = min(hits)
    return surface, s


def simulate_flight(s: BallState, a: AeroCoefficients, dt: float, t_max: float,
                    geom: "TableGeometry",
                    props: BallProperties = BallProperties(),
                    g: np.ndarray = GRAVITY):
    """Integrate until the ball reaches a surface or t_max elapses.

    Returns (samples, event) where samples is a list of (t, BallState)
    including the initial state, and event is a SurfaceEvent or None.
    Contact time and position are linearly interpolated inside the
    offending step so the table is not tunneled through at coarse dt.
    """
    if dt <= 0 or t_max <= 0:
        raise ValueError("dt and t_max must be positive")
    samples = [(0.0, s)]
    cur = s
    t = 0.0
    n_steps = int(np.ceil(t_max / dt))
    for _ in range(n_steps):
        h = min(dt, t_max - t)
        if h <= 0:
            break
        nxt = step_ball(cur, a, h, g)
        hit = _segment_events(cur.p, nxt.p, geom, props.r_b)
        if hit is not None:
            surface, frac = hit
            p_c = cur.p + frac * (nxt.p - cur.p)
            contact = BallState(p_c, nxt.v, nxt.w)
            t_c = t + frac * h
            samples.append((t_c, contact))
            return samples, SurfaceEvent(surface, t_c, contact)
        t += h
        samples.append((t, nxt))
        cur = nxt
    return samples, None


def clamp_spin(w: np.ndarray, w_max: float = W_MAX_DEFAULT) -> np.ndarray:
    """Rescale w to |w| <= w_max; identity when already within the cap."""
    mag = float(speed3(w))
    if mag <= w_max or mag == 0.0:
        return w
    return w * (w_max / mag)


def rk4_flight_reference(s: BallState, a: AeroCoefficients, dt: float,
                         n_steps: int, g: np.ndarray = GRAVITY) -> BallState:
    """Classical RK4 integrator, used only as a test oracle."""

    def deriv(p, v):
        return v, aero_accel_arrays(v, s.w, a.k_d, a.k_m, g)

    p, v = s.p.copy(), s.v.copy()
    for _ in range(n_steps):
        k1p, k1v = deriv(p, v)
        k2p, k2v = deriv(p + 0.5 * dt * k1p, v + 0.5 * dt * k1v)
        k3p, k3v = deriv(p + 0.5 * dt * k2p, v + 0.5 * dt * k2v)
        k4p, k4v = deriv(p + dt * k3p, v + dt * k3v)
        p = p + (dt / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        v = v + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
    return BallState(p, v, s.w)


__all__ = [
    "GRAVITY", "DEFAULT_DT", "W_MAX_DEFAULT",
    "BallState", "AeroCoefficients", "BallProperties", "SurfaceEvent",
    "hollow_sphere_inertia", "cross3", "speed3",
    "aero_accel", "aero_accel_arrays", "step_ball", "step_arrays",
    "simulate_flight", "clamp_spin", "rk4_flight_reference",
]
