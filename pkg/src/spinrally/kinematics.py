"""Configurable serial kinematic chain and racket pose computation.

Joints are prismatic or revolute about a fixed local axis, each preceded
by a fixed translation in the parent frame. The racket is a rigid disk
attached to the last frame. Only kinematics live here; joint dynamics are
the arena's concern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import speed3


def rotation_about(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    x, y, z = axis
    c, s = np.cos(angle), np.sin(angle)
    t = 1.0 - c
    return np.array([
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ])


def quat_from_matrix(r: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) of a rotation matrix, w >= 0."""
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    if tr > 0.0:
        s = np.sqrt(tr + 1.0) * 2.0
        q = np.array([0.25 * s, (r[2, 1] - r[1, 2]) / s,
                      (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s])
    elif r[0, 0] >= r[1, 1] and r[0, 0] >= r[2, 2]:
        s = np.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2.0
        q = np.array([(r[2, 1] - r[1, 2]) / s, 0.25 * s,
                      (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s])
    elif r[1, 1] >= r[2, 2]:
        s = np.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2.0
        q = np.array([(r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s,
                      0.25 * s, (r[1, 2] + r[2, 1]) / s])
    else:
        s = np.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2.0
        q = np.array([(r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s,
                      (r[1, 2] + r[2, 1]) / s, 0.25 * s])
    if q[0] < 0.0:
        q = -q
    return q / np.sqrt(float(q @ q))


@dataclass(frozen=True)
class RacketPose:
    """Racket center, orientation quaternion (w,x,y,z), and linear velocity."""

    position: np.ndarray
    orientation: np.ndarray
    linear_velocity: np.ndarray


@dataclass(frozen=True)
class JointSpec:
    kind: str                # "revolute" | "prismatic"
    axis: tuple
    offset: tuple            # fixed translation in the parent frame
    q_min: float
    q_max: float
    vel_limit: float
    torque_limit: float

    def __post_init__(self):
        if self.kind not in ("revolute", "prismatic"):
            raise ValueError(f"unknown joint kind {self.kind!r}")
        a = np.asarray(self.axis, dtype=np.float64)
        if abs(float(speed3(a)) - 1.0) > 1e-9:
            raise ValueError("joint axis must be a unit vector")
        if self.q_min >= self.q_max:
            raise ValueError("q_min must be below q_max")


@dataclass(frozen=True)
class ChainConfig:
    """A serial chain plus the racket disk on its end effector."""

    base: tuple
    joints: tuple
    racket_offset: tuple = (0.08, 0.0, 0.0)
    racket_normal: tuple = (1.0, 0.0, 0.0)   # in the last joint frame
    racket_radius: float = 0.085
    capsule_radius: float = 0.05
    home_q: tuple = ()

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    def limits(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([j.q_min for j in self.joints])
        hi = np.array([j.q_max for j in self.joints])
        return lo, hi

    def vel_limits(self) -> np.ndarray:
        return np.array([j.vel_limit for j in self.joints])

    def torque_limits(self) -> np.ndarray:
        return np.array([j.torque_limit for j in self.joints])

    def home(self) -> np.ndarray:
        if self.home_q:
            return np.asarray(self.home_q, dtype=np.float64)
        lo, hi = self.limits()
        return (lo + hi) / 2.0


def forward_kinematics(chain: ChainConfig, q: np.ndarray,
                       qd: np.ndarray | None = None):
    """Racket pose and the world positions of every joint origin.

    Returns (RacketPose, joint_points) where joint_points is an
    (n_joints + 2, 3) array: base, each joint origin after its offset, and
    the racket center; consecutive pairs delimit the body capsules.
    """
    q = np.asarray(q, dtype=np.float64)
    if qd is None:
        qd = np.zeros_like(q)
    qd = np.asarray(qd, dtype=np.float64)
    if q.shape != (chain.n_joints,) or qd.shape != q.shape:
        raise ValueError("q/qd shape mismatch with chain")

    p = np.asarray(chain.base, dtype=np.float64).copy()
    r = np.eye(3)
    points = [p.copy()]
    # (world axis, joint origin, kind) per joint, for the Jacobian.
    jac_info = []
    for spec, qi in zip(chain.joints, q):
        p = p + r @ np.asarray(spec.offset, dtype=np.float64)
        axis_w = r @ np.asarray(spec.axis, dtype=np.float64)
        jac_info.append((axis_w, p.copy(), spec.kind))
        if spec.kind == "revolute":
            r = r @ rotation_about(np.asarray(spec.axis, dtype=np.float64), qi)
        else:
            p = p + axis_w * qi
        points.append(p.copy())

    racket_p = p + r @ np.asarray(chain.racket_offset, dtype=np.float64)
    points.append(racket_p.copy())

    vel = np.zeros(3)
    for (axis_w, origin, kind), qdi in zip(jac_info, qd):
        if kind == "prismatic":
            vel = vel + axis_w * qdi
        else:
            vel = vel + np.cross(axis_w * qdi, racket_p - origin)

    pose = RacketPose(position=racket_p,
                      orientation=quat_from_matrix(r),
                      linear_velocity=vel)
    return pose, np.stack(points)


def _rotations_about(axis: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """(n, 3, 3) Rodrigues rotations about one fixed unit axis."""
    x, y, z = axis
    c = np.cos(angles)
    s = np.sin(angles)
    t = 1.0 - c
    r = np.empty((angles.shape[0], 3, 3))
    r[:, 0, 0] = t * x * x + c
    r[:, 0, 1] = t * x * y - s * z
    r[:, 0, 2] = t * x * z + s * y
    r[:, 1, 0] = t * x * y + s * z
    r[:, 1, 1] = t * y * y + c
    r[:, 1, 2] = t * y * z - s * x
    r[:, 2, 0] = t * x * z - s * y
    r[:, 2, 1] = t * y * z + s * x
    r[:, 2, 2] = t * z * z + c
    return r


def forward_kinematics_batched(chain: ChainConfig, q: np.ndarray,
                               qd: np.ndarray):
    """Vectorized FK over a batch of configurations.

    q, qd: (n, n_joints). Returns (racket_p, racket_n, racket_v, quats,
    points) with shapes (n,3), (n,3), (n,3), (n,4), (n, n_joints+2, 3).
    Lane-for-lane this matches forward_kinematics bit for bit.
    """
    q = np.asarray(q, dtype=np.float64)
    qd = np.asarray(qd, dtype=np.float64)
    n = q.shape[0]
    p = np.broadcast_to(np.asarray(chain.base, dtype=np.float64),
                        (n, 3)).copy()
    r = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
    points = [p.copy()]
    axes_w, origins, kinds = [], [], []
    for j, spec in enumerate(chain.joints):
        off = np.asarray(spec.offset, dtype=np.float64)
        axis = np.asarray(spec.axis, dtype=np.float64)
        p = p + r @ off
        axis_w = r @ axis
        axes_w.append(axis_w)
        origins.append(p.copy())
        kinds.append(spec.kind)
        if spec.kind == "revolute":
            r = r @ _rotations_about(axis, q[:, j])
        else:
            p = p + axis_w * q[:, j][:, None]
        points.append(p.copy())

    racket_p = p + r @ np.asarray(chain.racket_offset, dtype=np.float64)
    points.append(racket_p.copy())
    racket_n = r @ np.asarray(chain.racket_normal, dtype=np.float64)
    racket_n = racket_n / np.sqrt((racket_n * racket_n).sum(axis=1))[:, None]

    vel = np.zeros((n, 3))
    for j, (axis_w, origin, kind) in enumerate(zip(axes_w, origins, kinds)):
        if kind == "prismatic":
            vel = vel + axis_w * qd[:, j][:, None]
        else:
            vel = vel + np.cross(axis_w * qd[:, j][:, None],
                                 racket_p - origin)

    quats = np.empty((n, 4))
    for i in range(n):
        quats[i] = quat_from_matrix(r[i])
    return racket_p, racket_n, vel, quats, np.stack(points, axis=1)


def racket_normal_world(chain: ChainConfig, q: np.ndarray) -> np.ndarray:
    """World-frame unit normal of the racket disk."""
    r = np.eye(3)
    for spec, qi in zip(chain.joints, q):
        if spec.kind == "revolute":
            r = r @ rotation_about(np.asarray(spec.axis, dtype=np.float64), qi)
    n = r @ np.asarray(chain.racket_normal, dtype=np.float64)
    return n / float(speed3(n))


def default_chain() -> ChainConfig:
    """Two rails plus a five-revolute arm; the stock 7-joint robot."""
    joints = (
        JointSpec("prismatic", (0, 1, 0), (0, 0, 0), -0.8, 0.8, 3.0, 250.0),
        JointSpec("prismatic", (0, 0, 1), (0, 0, 0.4), 0.2, 1.0, 3.0, 250.0),
        JointSpec("revolute", (0, 0, 1), (0.1, 0, 0.1), -1.6, 1.6, 8.0, 80.0),
        JointSpec("revolute", (0, 1, 0), (0.08, 0, 0.05), -1.8, 1.8, 10.0, 60.0),
        JointSpec("revolute", (0, 1, 0), (0.3, 0, 0), -2.0, 2.0, 12.0, 40.0),
        JointSpec("revolute", (0, 1, 0), (0.25, 0, 0), -1.8, 1.8, 15.0, 20.0),
        JointSpec("revolute", (1, 0, 0), (0.08, 0, 0), -2.5, 2.5, 15.0, 15.0),
    )
    return ChainConfig(base=(-1.7, 0.0, 0.0), joints=joints,
                       racket_offset=(0.08, 0.0, 0.0),
                       home_q=(0.0, 0.45, 0.0, 0.0, 0.0, 0.0, 0.0))


def lite_chain() -> ChainConfig:
    """Four-joint chain used for small desk-scale training runs."""
    joints = (
        JointSpec("prismatic", (0, 1, 0), (0, 0, 0), -0.8, 0.8, 4.0, 300.0),
        JointSpec("prismatic", (0, 0, 1), (0, 0, 0.4), 0.2, 1.0, 4.0, 300.0),
        JointSpec("revolute", (0, 0, 1), (0.15, 0, 0.15), -1.2, 1.2, 10.0, 80.0),
        JointSpec("revolute", (0, 1, 0), (0.35, 0, 0), -1.5, 1.5, 10.0, 60.0),
    )
    return ChainConfig(base=(-1.7, 0.0, 0.0), joints=joints,
                       racket_offset=(0.15, 0.0, 0.0),
                       home_q=(0.0, 0.4, 0.0, 0.0))


CHAIN_PRESETS = {"default7": default_chain, "lite4": lite_chain}


__all__ = [
    "JointSpec", "ChainConfig", "RacketPose", "CHAIN_PRESETS",
    "rotation_about", "quat_from_matrix", "forward_kinematics",
    "forward_kinematics_batched", "racket_normal_world",
    "default_chain", "lite_chain",
]
