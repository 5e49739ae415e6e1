"""Streaming mean/variance of observation vectors with pairwise merging.

The single-sample update is Welford's recurrence; chunks accumulated on
different workers combine exactly with the pairwise-merge form, which is
associative up to rounding. Normalization uses the population variance.
"""

from __future__ import annotations

import numpy as np

# Count a stage reset falls back to: large enough to keep the statistics,
# small enough that a shifted observation distribution re-adapts quickly.
RESET_COUNT_FLOOR = 10_000

NORM_CLIP = 10.0
MIN_STD = 1e-6


class RunningMoments:
    """Count, mean and second central moment (M2) per vector component."""

    def __init__(self, dim: int):
        self.dim = dim
        self.count = 0.0
        self.mean = np.zeros(dim)
        self.m2 = np.zeros(dim)

    def copy(self) -> "RunningMoments":
        out = RunningMoments(self.dim)
        out.count = self.count
        out.mean = self.mean.copy()
        out.m2 = self.m2.copy()
        return out

    def update(self, x: np.ndarray) -> None:
        """Welford single-sample update."""
        x = np.asarray(x, dtype=np.float64)
        self.count += 1.0
        delta = x - self.mean
        self.mean = self.mean + delta / self.count
        self.m2 = self.m2 + delta * (x - self.mean)

    def update_batch(self, xs: np.ndarray) -> None:
        """Fold a (n, dim) chunk in via a pairwise merge of its two-pass stats."""
        xs = np.asarray(xs, dtype=np.float64)
        if xs.ndim != 2 or xs.shape[1] != self.dim:
            raise ValueError(f"expected (n, {self.dim}) batch")
        n = xs.shape[0]
        if n == 0:
            return
        chunk = RunningMoments(self.dim)
        chunk.count = float(n)
        chunk.mean = xs.mean(axis=0)
        chunk.m2 = ((xs - chunk.mean) ** 2).sum(axis=0)
        merged = merge_moments(self, chunk)
        self.count, self.mean, self.m2 = merged.count, merged.mean, merged.m2

    @property
    def variance(self) -> np.ndarray:
        if self.count < 2:
            return np.ones(self.dim)
        return self.m2 / self.count

    @property
    def std(self) -> np.ndarray:
        return np.sqrt(self.variance)


def update_moments(m: RunningMoments, x: np.ndarray) -> RunningMoments:
    """Functional single-sample update; returns a new instance."""
    out = m.copy()
    out.update(x)
    return out


def merge_moments(a: RunningMoments, b: RunningMoments) -> RunningMoments:
    """Exact combination of two disjoint streams (Chan's pairwise form)."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.count == 0:
        return b.copy()
    if b.count == 0:
        return a.copy()
    out = RunningMoments(a.dim)
    out.count = a.count + b.count
    delta = b.mean - a.mean
    out.mean = a.mean + delta * (b.count / out.count)
    out.m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / out.count)
    return out


def normalize(x: np.ndarray, m: RunningMoments) -> np.ndarray:
    """Standardize x by the running stats, clipped to +-NORM_CLIP.

    Passes x through unchanged until two samples have been seen.
    """
    x = np.asarray(x, dtype=np.float64)
    if m.count < 2:
        return x.copy()
    z = (x - m.mean) / np.maximum(m.std, MIN_STD)
    return np.clip(z, -NORM_CLIP, NORM_CLIP)


def reset_moment_count(m: RunningMoments,
                       floor: float = RESET_COUNT_FLOOR) -> RunningMoments:
    """Drop the sample count to the floor, keeping mean and variance.

    Restores adaptivity when the observation distribution shifts at a
    curriculum stage boundary. Counts at or below the floor are left
    alone; there is nothing to forget yet.
    """
    out = m.copy()
    if out.count > floor:
        out.m2 = out.m2 * (floor / out.count)
        out.count = float(floor)
    return out


__all__ = [
    "RunningMoments", "RESET_COUNT_FLOOR", "NORM_CLIP", "MIN_STD",
    "update_moments", "merge_moments", "normalize", "reset_moment_count",
]
