"""Valid-rally seed discovery and the bounded seed buffer.

Candidate launches are sampled uniformly, flown forward in lockstep
batches until their first surface contact, and kept when the flight
crosses the net and first touches the robot court. Because each seed
stores its own aerodynamic coefficients, replaying a stored seed is
bit-identical to the flight that validated it.
"""

from __future__ import annotations

import csv
import threading
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import AeroCoefficients, BallProperties, BallState, step_arrays
from .rally import (EventKind, RallyEvent, TableGeometry, flight_crossings,
                    is_valid_rally)

ROLLOUT_DT = 1.0 / 360.0
ROLLOUT_T_MAX = 3.0


@dataclass(frozen=True)
class RallySeed:
    """Initial ball state plus the aero coefficients that shaped it."""

    p0: np.ndarray
    v0: np.ndarray
    w0: np.ndarray
    aero: AeroCoefficients

    def __post_init__(self):
        object.__setattr__(self, "p0", np.asarray(self.p0, dtype=np.float64))
        object.__setattr__(self, "v0", np.asarray(self.v0, dtype=np.float64))
        object.__setattr__(self, "w0", np.asarray(self.w0, dtype=np.float64))

    def ball(self) -> BallState:
        return BallState(self.p0, self.v0, self.w0)


@dataclass(frozen=True)
class SeedRanges:
    """Uniform sampling bounds for candidate launches (min, max per field)."""

    p0_x: tuple = (0.3, 1.3)
    p0_y: tuple = (-0.6, 0.6)
    p0_z: tuple = (0.9, 1.3)
    v0_x: tuple = (-8.0, -3.0)
    v0_y: tuple = (-2.0, 2.0)
    v0_z: tuple = (-1.0, 3.0)
    w0: tuple = (-400.0, 400.0)   # per axis
    k_d: tuple = (0.05, 0.2)
    k_m: tuple = (0.01, 0.08)

    def as_bounds(self) -> list[tuple[float, float]]:
        return [self.p0_x, self.p0_y, self.p0_z,
                self.v0_x, self.v0_y, self.v0_z,
                self.w0, self.w0, self.w0, self.k_d, self.k_m]


def sample_candidates(rng: np.random.Generator, ranges: SeedRanges,
                      n: int) -> list[RallySeed]:
    """Draw n candidates; fields are sampled in a fixed field-major order."""
    cols = [rng.uniform(lo, hi, size=n) for lo, hi in ranges.as_bounds()]
    m = np.stack(cols, axis=1)
    return [RallySeed(m[i, 0:3], m[i, 3:6], m[i, 6:9],
                      AeroCoefficients(k_d=m[i, 9], k_m=m[i, 10]))
            for i in range(n)]


def sample_candidate(rng: np.random.Generator, ranges: SeedRanges) -> RallySeed:
    return sample_candidates(rng, ranges, 1)[0]


def rollout_candidates(seeds: list[RallySeed], geom: TableGeometry,
                       props: BallProperties = BallProperties(),
                       dt: float = ROLLOUT_DT, t_max: float = ROLLOUT_T_MAX
                       ) -> list[tuple[list[RallyEvent], bool]]:
    """Fly a batch of candidates until their first surface contact.

    All lanes advance in lockstep; finished lanes are frozen. Returns the
    per-candidate event list (opening with the launch) and validity flag.
    """
    n = len(seeds)
    if n == 0:
        return []
    p = np.stack([s.p0 for s in seeds]).astype(np.float64)
    v = np.stack([s.v0 for s in seeds]).astype(np.float64)
    w = np.stack([s.w0 for s in seeds]).astype(np.float64)
    k_d = np.array([s.aero.k_d for s in seeds])
    k_m = np.array([s.aero.k_m for s in seeds])

    events: list[list[RallyEvent]] = [
        [RallyEvent(EventKind.LAUNCH, 0.0, s.ball())] for s in seeds]
    alive = np.ones(n, dtype=bool)
    t = 0.0
    n_steps = int(np.ceil(t_max / dt))

    for _ in range(n_steps):
        if not alive.any():
            break
        p_new, v_new = step_arrays(p, v, w, k_d, k_m, dt)
        c = flight_crossings(p, p_new, geom, props.r_b)

        # First crossing per lane; ties resolve table < net < floor, the
        # same order the scalar classifier uses.
        fracs = np.stack([c.s_table, c.s_net, c.s_floor])
        first_s = np.min(fracs, axis=0)
        touched = alive & (np.isfinite(first_s) | c.out)

        for i in np.nonzero(touched)[0]:
            i = int(i)
            done = False
            if np.isfinite(first_s[i]):
                order = [(float(fracs[j, i]), j) for j in range(3)]
                order.sort()
                for s_c, j in order:
                    if not np.isfinite(s_c):
                        break
                    p_c = p[i] + s_c * (p_new[i] - p[i])
                    ball = BallState(p_c, v_new[i], w[i])
                    if j == 0:
                        kind = (EventKind.BOUNCE_OPPONENT_COURT
                                if c.table_court[i] > 0
                                else EventKind.BOUNCE_ROBOT_COURT)
                    elif j == 1:
                        kind = (EventKind.NET_CONTACT if c.net_is_contact[i]
                                else EventKind.NET_CROSSED)
                    else:
                        kind = EventKind.FLOOR_CONTACT
                    events[i].append(RallyEvent(kind, t + s_c * dt, ball))
                    if kind is not EventKind.NET_CROSSED:
                        done = True
                        break
            if not done and bool(c.out[i]):
                events[i].append(RallyEvent(
                    EventKind.OUT_OF_BOUNDS, t + dt,
                    BallState(p_new[i], v_new[i], w[i])))
                done = True
            if done:
                alive[i] = False
        p = np.where(alive[:, None], p_new, p)
        v = np.where(alive[:, None], v_new, v)
        t += dt

    return [(events[i], is_valid_rally(events[i])) for i in range(n)]


def rollout_candidate(seed: RallySeed, geom: TableGeometry,
                      props: BallProperties = BallProperties(),
                      dt: float = ROLLOUT_DT, t_max: float = ROLLOUT_T_MAX
                      ) -> tuple[list[RallyEvent], bool]:
    """Single-candidate rollout; exactly the batch path with one lane."""
    return rollout_candidates([seed], geom, props, dt, t_max)[0]


class SeedBuffer:
    """Bounded FIFO of validated seeds; thread-safe and never blocking."""

    def __init__(self, capacity: int):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._items: deque[RallySeed] = deque()
        self._lock = threading.Lock()

    def push_valid(self, seed: RallySeed) -> bool:
        """Append a seed; returns False (dropping it) when full."""
        with self._lock:
            if len(self._items) >= self.capacity:
                return False
            self._items.append(seed)
            return True

    def pop(self) -> Optional[RallySeed]:
        """Pop the oldest seed, or None when empty."""
        with self._lock:
            if not self._items:
                return None
            return self._items.popleft()

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


@dataclass
class GeneratorStats:
    candidates: int = 0
    valid: int = 0

    @property
    def valid_rate(self) -> float:
        return self.valid / self.candidates if self.candidates else 0.0

    def merge(self, other: "GeneratorStats") -> None:
        self.candidates += other.candidates
        self.valid += other.valid


def generate_into(buffer: SeedBuffer, rng: np.random.Generator,
                  ranges: SeedRanges, geom: TableGeometry,
                  props: BallProperties = BallProperties(),
                  n_candidates: int = 64, dt: float = ROLLOUT_DT,
                  t_max: float = ROLLOUT_T_MAX) -> GeneratorStats:
    """One deterministic generator round: sample, fly, push valid seeds.

    Valid seeds are pushed in lane order, so a fixed rng yields a fixed
    buffer content; the training loop relies on this for reproducibility.
    """
    stats = GeneratorStats()
    if n_candidates <= 0:
        return stats
    seeds = sample_candidates(rng, ranges, n_candidates)
    results = rollout_candidates(seeds, geom, props, dt, t_max)
    for seed, (_, valid) in zip(seeds, results):
        stats.candidates += 1
        if valid:
            stats.valid += 1
            buffer.push_valid(seed)
    return stats


def run_generator(worker_count: int, buffer: SeedBuffer, ranges: SeedRanges,
                  stop: threading.Event, geom: TableGeometry,
                  props: BallProperties = BallProperties(),
                  base_seed: int = 0, batch: int = 32,
                  dt: float = ROLLOUT_DT, t_max: float = ROLLOUT_T_MAX
                  ) -> GeneratorStats:
    """Run worker threads that fill the buffer until the stop signal.

    Each worker owns an independent rng stream, so the set of seeds each
    worker produces is reproducible even though their interleaving in the
    buffer is not. Returns exact aggregate counts.
    """
    if worker_count <= 0:
        raise ValueError("worker_count must be positive")
    stats = [GeneratorStats() for _ in range(worker_count)]

    def work(idx: int):
        rng = np.random.Generator(np.random.PCG64(base_seed + idx))
        while not stop.is_set():
            stats[idx].merge(generate_into(
                buffer, rng, ranges, geom, props, batch, dt, t_max))

    threads = [threading.Thread(target=work, args=(i,), daemon=True)
               for i in range(worker_count)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    total = GeneratorStats()
    for st in stats:
        total.merge(st)
    return total


SEED_CSV_HEADER = ["p0_x", "p0_y", "p0_z", "v0_x", "v0_y", "v0_z",
                   "w0_x", "w0_y", "w0_z", "k_d", "k_m"]


def save_seeds(path, seeds: list[RallySeed]) -> None:
    """Write seeds to CSV, one seed per row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SEED_CSV_HEADER)
        for s in seeds:
            writer.writerow([repr(float(x)) for x in
                             (*s.p0, *s.v0, *s.w0, s.aero.k_d, s.aero.k_m)])


def load_seeds(path) -> list[RallySeed]:
    """Read a seed CSV written by save_seeds."""
    seeds = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        if header != SEED_CSV_HEADER:
            raise ValueError(f"unexpected seed CSV header: {header}")
        for row in reader:
            vals = [float(x) for x in row]
            seeds.append(RallySeed(vals[0:3], vals[3:6], vals[6:9],
                                   AeroCoefficients(k_d=vals[9], k_m=vals[10])))
    return seeds


__all__ = [
    "RallySeed", "SeedRanges", "SeedBuffer", "GeneratorStats",
    "ROLLOUT_DT", "ROLLOUT_T_MAX", "SEED_CSV_HEADER",
    "sample_candidate", "sample_candidates",
    "rollout_candidate", "rollout_candidates",
    "generate_into", "run_generator", "save_seeds", "load_seeds",
]
