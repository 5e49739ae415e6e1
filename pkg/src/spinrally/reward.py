"""Stage-indexed reward matrix, performance penalty, and their sum.

The reward of a control step is the row of an 8x3 matrix selected by the
current trajectory state (one-hot product) and the column selected by the
curriculum stage. Rows for instantaneous states pay out once, on the step
the state is entered; rows for continuous states pay out every step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rally import Tag


@dataclass(frozen=True)
class RewardConstants:
    """Hyperparameters of the reward matrix and performance penalty."""

    a21: float = 1.0
    a22: float = 0.25
    a23: float = 0.1
    a31: float = 10.0
    a32: float = 4.0
    a33: float = 1.0
    a41: float = 1.0
    a42: float = 0.25
    a43: float = 0.1
    a51: float = 25.0
    a52: float = 50.0
    a53: float = 10.0
    a63: float = 1.0
    a73: float = 30.0
    b73: float = 40.0
    c: float = 0.02
    d: float = 0.02
    e: float = 0.1


# Racket-velocity bonus saturates here to keep the matrix bounded.
V_RHB_CLIP = 10.0


@dataclass(frozen=True)
class RewardFeatures:
    """Geometric features feeding the matrix entries.

    d_rb: racket-to-ball distance (m); d_bt: ball-to-target distance (m);
    v_rhb_x: racket x-velocity at ball contact (m/s, signed);
    e_lt: landing-point-to-target error (m).
    """

    d_rb: float = 0.0
    d_bt: float = 0.0
    v_rhb_x: float = 0.0
    e_lt: float = 0.0

    def __post_init__(self):
        if self.d_rb < 0 or self.d_bt < 0 or self.e_lt < 0:
            raise ValueError("distances must be non-negative")


def _proximity(dist: float) -> float:
    return 1.0 / (1.0 + dist * dist) ** 2


def build_R(f: RewardFeatures, k: RewardConstants = RewardConstants()
            ) -> np.ndarray:
    """The 8x3 reward matrix, rows in trajectory-state order T0..T30."""
    near_rb = _proximity(f.d_rb)
    near_bt = _proximity(f.d_bt)
    near_lt = _proximity(f.e_lt)
    v_hit = float(np.clip(f.v_rhb_x, -V_RHB_CLIP, V_RHB_CLIP))
    return np.array([
        [0.0, 0.0, 0.0],
        [k.a21 * near_rb, k.a22 * near_rb, k.a23 * near_rb],
        [k.a31, k.a32, k.a33],
        [k.a41 * near_rb, k.a42 * near_rb, k.a43 * near_rb],
        [k.a51, k.a52 + v_hit, k.a53],
        [0.0, 0.0, k.a63 * near_bt],
        [0.0, 0.0, k.a73 + k.b73 * near_lt],
        [0.0, 0.0, 0.0],
    ])


def stage_reward(state: Tag, f: RewardFeatures, stage: int,
                 k: RewardConstants = RewardConstants()) -> float:
    """Reward of the current state for curriculum stage 1, 2 or 3.

    Equivalent to one_hot(state) @ build_R(f, k) evaluated at the stage
    column; the caller enforces the once-per-entry rule for instantaneous
    states by construction of its stepping loop.
    """
    if stage not in (1, 2, 3):
        raise ValueError(f"stage must be 1, 2 or 3, got {stage}")
    return float(build_R(f, k)[state.value, stage - 1])


def performance_reward(torques: np.ndarray, action: np.ndarray,
                       prev_action: np.ndarray, contact_count: int,
                       k: RewardConstants = RewardConstants()) -> float:
    """Penalty -(c sum|tau| + d sum(da^2) + e N), applied every step."""
    torques = np.asarray(torques, dtype=np.float64)
    action = np.asarray(action, dtype=np.float64)
    prev_action = np.asarray(prev_action, dtype=np.float64)
    if action.shape != prev_action.shape:
        raise ValueError("action shapes must match")
    da = action - prev_action
    return -(k.c * float(np.sum(np.abs(torques)))
             + k.d * float(np.sum(da * da))
             + k.e * contact_count)


def total_reward(stage_part: float, performance_part: float) -> float:
    """Final per-step reward: task reward plus performance penalty."""
    return stage_part + performance_part


__all__ = [
    "RewardConstants", "RewardFeatures", "V_RHB_CLIP",
    "build_R", "stage_reward", "performance_reward", "total_reward",
]
