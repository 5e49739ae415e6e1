"""Rally bookkeeping: table geometry, event classification, and the
8-state trajectory cycle that drives rewards and episode termination.

Axis convention (used everywhere in the package): the robot defends the
x < 0 half, the opponent the x > 0 half, the net sits in the x = 0 plane,
z points up, the floor is z = 0 and the table surface z = geom.height.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .dynamics import BallState


class Tag(Enum):
    """Trajectory states, in cycle order. Even indices are instantaneous."""

    T0 = 0    # ball at its initial state
    T01 = 1   # opponent hitting period (inbound flight)
    T1 = 2    # ball hits the robot court
    T12 = 3   # robot catching period
    T2 = 4    # ball hits the robot's racket
    T23 = 5   # robot hitting period (return flight)
    T3 = 6    # ball hits the opponent court
    T30 = 7   # opponent catching period

    @property
    def instantaneous(self) -> bool:
        return self.value % 2 == 0

    @property
    def successor(self) -> "Tag":
        return Tag((self.value + 1) % 8)


# Continuous states in observation one-hot order.
CONTINUOUS_TAGS = (Tag.T01, Tag.T12, Tag.T23, Tag.T30)


class EventKind(str, Enum):
    LAUNCH = "launch"
    NET_CROSSED = "net_crossed"
    BOUNCE_ROBOT_COURT = "bounce_robot_court"
    BOUNCE_OPPONENT_COURT = "bounce_opponent_court"
    RACKET_CONTACT = "racket_contact"
    BODY_CONTACT = "body_contact"
    NET_CONTACT = "net_contact"
    FLOOR_CONTACT = "floor_contact"
    OUT_OF_BOUNDS = "out_of_bounds"


@dataclass(frozen=True)
class RallyEvent:
    kind: EventKind
    time: float
    ball: BallState


@dataclass(frozen=True)
class Terminal:
    """Episode-ending outcome with a machine-readable snake_case reason."""

    reason: str


@dataclass(frozen=True)
class TableGeometry:
    """Table dimensions in meters; defaults are the standard 2.74 m table."""

    length: float = 2.74
    width: float = 1.525
    height: float = 0.76
    net_height: float = 0.1525

    def __post_init__(self):
        if min(self.length, self.width, self.height, self.net_height) <= 0:
            raise ValueError("geometry dimensions must be positive")

    @property
    def net_top(self) -> float:
        return self.height + self.net_height


# Play volume beyond which the ball counts as gone.
OOB_MARGIN = 1.0
OOB_CEILING = 4.0


# Legal transitions; everything else terminates.
_LEGAL = {
    (Tag.T0, EventKind.LAUNCH): Tag.T01,
    (Tag.T01, EventKind.NET_CROSSED): Tag.T01,
    (Tag.T01, EventKind.BOUNCE_ROBOT_COURT): Tag.T1,
    (Tag.T12, EventKind.RACKET_CONTACT): Tag.T2,
    (Tag.T23, EventKind.NET_CROSSED): Tag.T23,
    (Tag.T23, EventKind.BOUNCE_OPPONENT_COURT): Tag.T3,
    (Tag.T30, EventKind.LAUNCH): Tag.T0,
}

# Failure reasons for events arriving in a continuous state.
_FAIL = {
    (Tag.T01, EventKind.LAUNCH): "double_launch",
    (Tag.T01, EventKind.BOUNCE_OPPONENT_COURT): "wrong_first_bounce",
    (Tag.T01, EventKind.RACKET_CONTACT): "hit_before_bounce",
    (Tag.T01, EventKind.FLOOR_CONTACT): "missed_robot_court",
    (Tag.T01, EventKind.OUT_OF_BOUNDS): "missed_robot_court",
    (Tag.T12, EventKind.LAUNCH): "double_launch",
    (Tag.T12, EventKind.NET_CROSSED): "missed_ball",
    (Tag.T12, EventKind.BOUNCE_ROBOT_COURT): "double_bounce",
    (Tag.T12, EventKind.BOUNCE_OPPONENT_COURT): "missed_ball",
    (Tag.T12, EventKind.FLOOR_CONTACT): "missed_ball",
    (Tag.T12, EventKind.OUT_OF_BOUNDS): "missed_ball",
    (Tag.T23, EventKind.LAUNCH): "double_launch",
    (Tag.T23, EventKind.BOUNCE_ROBOT_COURT): "wrong_return_bounce",
    (Tag.T23, EventKind.RACKET_CONTACT): "double_hit",
    (Tag.T23, EventKind.FLOOR_CONTACT): "missed_opponent_court",
    (Tag.T23, EventKind.OUT_OF_BOUNDS): "missed_opponent_court",
    (Tag.T30, EventKind.NET_CROSSED): "ended_after_return",
    (Tag.T30, EventKind.BOUNCE_ROBOT_COURT): "ended_after_return",
    (Tag.T30, EventKind.BOUNCE_OPPONENT_COURT): "ended_after_return",
    (Tag.T30, EventKind.RACKET_CONTACT): "double_hit",
    (Tag.T30, EventKind.FLOOR_CONTACT): "ended_after_return",
    (Tag.T30, EventKind.OUT_OF_BOUNDS): "ended_after_return",
}

# Every reason advance_state can emit (documented in the CLI reference).
TERMINAL_REASONS = tuple(sorted(set(_FAIL.values())
                                | {"net_contact", "body_contact",
                                   "out_of_order_event"}))


def advance_state(cur: Tag, ev: Optional[RallyEvent]
                  ) -> Union[Tag, Terminal]:
    """Advance the trajectory state by one event or one clock tick.

    ev=None is a clock tick: instantaneous states move to their continuous
    successor, continuous states stay put. Events advance the cycle one
    position at most; anything out of order terminates the rally.
    """
    if ev is None:
        return cur.successor if cur.instantaneous else cur
    k = ev.kind
    nxt = _LEGAL.get((cur, k))
    if nxt is not None:
        return nxt
    if k is EventKind.NET_CONTACT:
        return Terminal("net_contact")
    if k is EventKind.BODY_CONTACT:
        return Terminal("body_contact")
    if cur.instantaneous:
        # Callers tick instantaneous states before delivering events;
        # direct hits are protocol violations, not physics.
        return Terminal("out_of_order_event")
    return Terminal(_FAIL[(cur, k)])


@dataclass(frozen=True)
class FlightCrossings:
    """Per-lane surface crossings of one integration step, as fractions.

    Fractions are in [0, 1] where a crossing exists and +inf elsewhere.
    Inputs are (n, 3) position arrays; every field is an (n,) array.
    """

    s_table: np.ndarray       # descending lower-point crossing inside the top
    table_court: np.ndarray   # +1 opponent half, -1 robot half (x=0 -> +1)
    s_net: np.ndarray         # center crossing of the x=0 plane
    net_is_contact: np.ndarray  # True: hits the net band; False: clears it
    s_floor: np.ndarray       # descending lower-point crossing of z=0
    out: np.ndarray           # end position left the play volume


def flight_crossings(p0: np.ndarray, p1: np.ndarray, geom: TableGeometry,
                     r_b: float) -> FlightCrossings:
    """Vectorized surface-crossing tests shared by all stepping paths."""
    p0 = np.atleast_2d(np.asarray(p0, dtype=np.float64))
    p1 = np.atleast_2d(np.asarray(p1, dtype=np.float64))
    n = p0.shape[0]
    inf = np.full(n, np.inf)

    lo0 = p0[:, 2] - r_b
    lo1 = p1[:, 2] - r_b
    dlo = lo1 - lo0

    with np.errstate(divide="ignore", invalid="ignore"):
        # Table top.
        desc = (lo0 > geom.height) & (geom.height >= lo1) & (dlo != 0.0)
        s_t = np.where(desc, (geom.height - lo0) / np.where(dlo == 0, 1, dlo),
                       np.inf)
        x_t = p0[:, 0] + s_t * (p1[:, 0] - p0[:, 0])
        y_t = p0[:, 1] + s_t * (p1[:, 1] - p0[:, 1])
        on_table = desc & (np.abs(x_t) <= geom.length / 2) \
            & (np.abs(y_t) <= geom.width / 2)
        s_table = np.where(on_table, s_t, inf)
        table_court = np.where(x_t > 0, 1, -1).astype(np.int64)
        table_court[x_t == 0.0] = 1  # net-tape tie-break: opponent court

        # Net plane.
        dx = p1[:, 0] - p0[:, 0]
        crosses = ((p0[:, 0] > 0.0) != (p1[:, 0] > 0.0)) & (dx != 0.0)
        s_n = np.where(crosses, (0.0 - p0[:, 0]) / np.where(dx == 0, 1, dx),
                       np.inf)
        y_n = p0[:, 1] + s_n * (p1[:, 1] - p0[:, 1])
        z_n = p0[:, 2] + s_n * (p1[:, 2] - p0[:, 2])
        net_is_contact = crosses & (np.abs(y_n) <= geom.width / 2) \
            & (z_n >= geom.height) & (z_n < geom.net_top)
        s_net = np.where(crosses, s_n, inf)

        # Floor.
        hits_floor = (lo0 > 0.0) & (0.0 >= lo1) & (dlo != 0.0)
        s_floor = np.where(hits_floor, (0.0 - lo0) / np.where(dlo == 0, 1, dlo),
                           inf)

    out = (np.abs(p1[:, 0]) > geom.length / 2 + OOB_MARGIN) \
        | (np.abs(p1[:, 1]) > geom.width / 2 + OOB_MARGIN) \
        | (p1[:, 2] > OOB_CEILING)

    return FlightCrossings(s_table=s_table, table_court=table_court,
                           s_net=s_net, net_is_contact=net_is_contact,
                           s_floor=s_floor, out=out)


def flight_events_for_step(prev: BallState, nxt: BallState,
                           geom: TableGeometry, r_b: float,
                           t0: float = 0.0, dt: float = 0.0
                           ) -> list[RallyEvent]:
    """Chronological surface events of one step (0, 1 or 2 events).

    A net clearance is the only non-terminal crossing, so at most one
    further event can follow it inside the same step. Out-of-bounds is
    reported at the end of the step, after any crossing.
    """
    c = flight_crossings(prev.p[None, :], nxt.p[None, :], geom, r_b)
    candidates: list[tuple[float, int, EventKind]] = []
    if np.isfinite(c.s_table[0]):
        kind = (EventKind.BOUNCE_OPPONENT_COURT if c.table_court[0] > 0
                else EventKind.BOUNCE_ROBOT_COURT)
        candidates.append((float(c.s_table[0]), 0, kind))
    if np.isfinite(c.s_net[0]):
        kind = (EventKind.NET_CONTACT if c.net_is_contact[0]
                else EventKind.NET_CROSSED)
        candidates.append((float(c.s_net[0]), 1, kind))
    if np.isfinite(c.s_floor[0]):
        candidates.append((float(c.s_floor[0]), 2, EventKind.FLOOR_CONTACT))
    candidates.sort()

    events: list[RallyEvent] = []
    for frac, _, kind in candidates:
        p_c = prev.p + frac * (nxt.p - prev.p)
        events.append(RallyEvent(kind, t0 + frac * dt,
                                 BallState(p_c, nxt.v, nxt.w)))
        if kind is not EventKind.NET_CROSSED:
            return events
    if bool(c.out[0]):
        events.append(RallyEvent(EventKind.OUT_OF_BOUNDS, t0 + dt, nxt))
    return events


def classify_event(prev: BallState, nxt: BallState, geom: TableGeometry,
                   r_b: float = 0.02, racket_contact: bool = False,
                   body_contact: bool = False, t: float = 0.0
                   ) -> Optional[RallyEvent]:
    """First event of one integrator step, or None.

    Robot contact flags (detected by the arena's collision tests) take
    precedence over surface crossings; racket beats body when both fire.
    """
    if racket_contact:
        return RallyEvent(EventKind.RACKET_CONTACT, t, nxt)
    if body_contact:
        return RallyEvent(EventKind.BODY_CONTACT, t, nxt)
    events = flight_events_for_step(prev, nxt, geom, r_b, t0=t, dt=0.0)
    return events[0] if events else None


# Kinds that end a free flight (everything except launch and a clean
# net clearance).
SURFACE_CONTACT_KINDS = frozenset(EventKind) - {EventKind.LAUNCH,
                                                EventKind.NET_CROSSED}


def is_valid_rally(events: Sequence[RallyEvent]) -> bool:
    """True iff the stream opens with launch, clears the net, and first
    touches the robot court; prefix-monotone by construction."""
    it = iter(events)
    for ev in it:
        if ev.kind is EventKind.LAUNCH:
            break
        return False
    else:
        return False
    crossed = False
    for ev in it:
        if ev.kind is EventKind.NET_CROSSED:
            crossed = True
        elif ev.kind is EventKind.BOUNCE_ROBOT_COURT:
            return crossed
        else:
            return False
    return False


__all__ = [
    "Tag", "CONTINUOUS_TAGS", "EventKind", "RallyEvent", "Terminal",
    "TableGeometry", "TERMINAL_REASONS", "OOB_MARGIN", "OOB_CEILING",
    "SURFACE_CONTACT_KINDS", "advance_state", "classify_event",
    "flight_crossings", "flight_events_for_step", "is_valid_rally",
]
