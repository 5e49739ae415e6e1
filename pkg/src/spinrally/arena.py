"""The rally environment: robot chain under PD control, ball-robot
coupling, noisy/delayed ball sensing, rewards, and episode control.

Environments step in lockstep batches; all heavy math is vectorized over
the batch while event handling stays per environment. A control step is
1/120 s split into three 1/360 s physics substeps. Episode resets draw a
validated launch from the shared seed buffer and fall back to a random
launch when the buffer is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .contact import (ContactParams, NotApproaching, RACKET_CONTACT,
                      SurfaceFrame, TABLE_CONTACT, resolve_bounce,
                      resolve_racket_hit)
from .dynamics import (BallProperties, BallState, W_MAX_DEFAULT,
                       clamp_spin, step_arrays)
from .kinematics import (ChainConfig, RacketPose, forward_kinematics,
                         forward_kinematics_batched, lite_chain)
from .rally import (CONTINUOUS_TAGS, EventKind, RallyEvent, TableGeometry,
                    Tag, Terminal, advance_state, flight_events_for_step,
                    is_valid_rally)
from .reward import (RewardConstants, RewardFeatures, performance_reward,
                     stage_reward, total_reward)
from .seedgen import SeedBuffer, SeedRanges, sample_candidate


class NonFiniteAction(ValueError):
    """An action contained NaN or infinity."""


@dataclass(frozen=True)
class PDGains:
    """Per-joint PD gains and torque saturation."""

    kp: np.ndarray
    kd: np.ndarray
    torque_limit: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kp", np.asarray(self.kp, dtype=np.float64))
        object.__setattr__(self, "kd", np.asarray(self.kd, dtype=np.float64))
        object.__setattr__(self, "torque_limit",
                           np.asarray(self.torque_limit, dtype=np.float64))


def default_gains(chain: ChainConfig) -> PDGains:
    """Snappy rails, softer arm; saturation from the chain's joint specs."""
    kp = np.array([200.0 if j.kind == "prismatic" else 80.0
                   for j in chain.joints])
    kd = np.array([30.0 if j.kind == "prismatic" else 8.0
                   for j in chain.joints])
    return PDGains(kp=kp, kd=kd, torque_limit=chain.torque_limits())


def pd_control(q: np.ndarray, qd: np.ndarray, q_target: np.ndarray,
               gains: PDGains) -> np.ndarray:
    """tau = kp (q_target - q) - kd qd, clamped to the torque limits."""
    tau = gains.kp * (q_target - q) - gains.kd * qd
    return np.clip(tau, -gains.torque_limit, gains.torque_limit)


@dataclass(frozen=True)
class NoiseLatencyConfig:
    """Gaussian sensor noise, per-episode delay range, and dropout."""

    sigma_ball_pos: float = 0.0
    sigma_ball_vel: float = 0.0
    delay_min: int = 0
    delay_max: int = 0
    dropout_prob: float = 0.0

    def __post_init__(self):
        if not (0 <= self.delay_min <= self.delay_max):
            raise ValueError("need 0 <= delay_min <= delay_max")
        if self.sigma_ball_pos < 0 or self.sigma_ball_vel < 0:
            raise ValueError("sigmas must be non-negative")
        if not (0.0 <= self.dropout_prob < 1.0):
            raise ValueError("dropout_prob must be in [0, 1)")


def sense_ball(truth: list, delay: int, cfg: NoiseLatencyConfig,
               rng: np.random.Generator,
               last_emitted: Optional[tuple] = None):
    """One sensor sample: delayed truth plus noise, zero-order hold on dropout.

    truth is a sequence of (position, velocity) ground-truth pairs, most
    recent last. Returns ((pos, vel), dropped).
    """
    if not truth:
        raise ValueError("need at least one truth sample")
    if cfg.dropout_prob > 0.0 and last_emitted is not None \
            and rng.uniform() < cfg.dropout_prob:
        return last_emitted, True
    p, v = truth[max(0, len(truth) - 1 - delay)]
    p = p + cfg.sigma_ball_pos * rng.standard_normal(3)
    v = v + cfg.sigma_ball_vel * rng.standard_normal(3)
    return (p, v), False


@dataclass(frozen=True)
class ObsLayout:
    """Slices of the flat observation vector for a given joint count."""

    n_joints: int

    @property
    def dim(self) -> int:
        return 2 * self.n_joints + 23

    def slices(self) -> dict:
        j = self.n_joints
        idx = {}
        start = 0
        for name, width in (("q", j), ("qd", j), ("racket_pos", 3),
                            ("racket_quat", 4), ("racket_vel", 3),
                            ("ball_pos", 3), ("ball_vel", 3), ("target", 2),
                            ("state_index", 1), ("state_onehot", 4)):
            idx[name] = slice(start, start + width)
            start += width
        return idx


def parse_observation(vec: np.ndarray, n_joints: int) -> dict:
    """Split a flat observation back into its named blocks."""
    layout = ObsLayout(n_joints)
    vec = np.asarray(vec, dtype=np.float64)
    if vec.shape != (layout.dim,):
        raise ValueError(f"expected ({layout.dim},) observation")
    return {name: vec[sl].copy() for name, sl in layout.slices().items()}


def state_onehot(tag: Tag) -> np.ndarray:
    """One-hot over the continuous states; zeros while instantaneous."""
    oh = np.zeros(4)
    if not tag.instantaneous:
        oh[CONTINUOUS_TAGS.index(tag)] = 1.0
    return oh


@dataclass
class ArenaConfig:
    """Everything the environment needs; defaults give the stock setup."""

    geometry: TableGeometry = field(default_factory=TableGeometry)
    chain: ChainConfig = field(default_factory=lite_chain)
    gains: Optional[PDGains] = None
    props: BallProperties = field(default_factory=BallProperties)
    table_contact: ContactParams = TABLE_CONTACT
    racket_contact: ContactParams = RACKET_CONTACT
    noise: NoiseLatencyConfig = field(default_factory=NoiseLatencyConfig)
    ranges: SeedRanges = field(default_factory=SeedRanges)
    reward_k: RewardConstants = field(default_factory=RewardConstants)
    control_dt: float = 1.0 / 120.0
    substeps: int = 3
    max_seconds: float = 3.0
    target_inset: float = 0.1
    w_max: float = W_MAX_DEFAULT
    joint_inertia: float = 1.0

    def __post_init__(self):
        if self.gains is None:
            self.gains = default_gains(self.chain)

    @property
    def n_joints(self) -> int:
        return self.chain.n_joints

    @property
    def obs_dim(self) -> int:
        return ObsLayout(self.chain.n_joints).dim

    @property
    def max_steps(self) -> int:
        return int(round(self.max_seconds / self.control_dt))


def _point_capsule_distances(p: np.ndarray, seg_a: np.ndarray,
                             seg_b: np.ndarray) -> np.ndarray:
    """Distances from points p (n,3) to segments (n,s,3)-(n,s,3)."""
    d = seg_b - seg_a
    l2 = (d * d).sum(axis=2)
    rel = p[:, None, :] - seg_a
    t = np.where(l2 > 0.0, (rel * d).sum(axis=2) / np.where(l2 == 0, 1, l2),
                 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = seg_a + t[:, :, None] * d
    diff = p[:, None, :] - closest
    return np.sqrt((diff * diff).sum(axis=2))


class BatchedArena:
    """n_envs rally environments advanced in lockstep."""

    def __init__(self, cfg: ArenaConfig, n_envs: int, base_seed: int = 0,
                 seed_buffer: Optional[SeedBuffer] = None, stage: int = 1):
        self.cfg = cfg
        self.n = n_envs
        self.stage = stage
        self.buffer = seed_buffer
        self.rngs = [np.random.Generator(np.random.PCG64(base_seed + i))
                     for i in range(n_envs)]
        j = cfg.n_joints
        self.q = np.zeros((n_envs, j))
        self.qd = np.zeros((n_envs, j))
        self.ball_p = np.zeros((n_envs, 3))
        self.ball_v = np.zeros((n_envs, 3))
        self.ball_w = np.zeros((n_envs, 3))
        self.k_d = np.zeros(n_envs)
        self.k_m = np.zeros(n_envs)
        self.target = np.zeros((n_envs, 2))
        self.tags: list[Tag] = [Tag.T0] * n_envs
        self.steps = np.zeros(n_envs, dtype=np.int64)
        self.prev_action = np.zeros((n_envs, j))
        self.delay = np.zeros(n_envs, dtype=np.int64)
        self.random_fallback = np.zeros(n_envs, dtype=bool)
        # Sensor ring: (env, slot, [p, v]); slot 0 is the oldest.
        self._ring = np.zeros((n_envs, cfg.noise.delay_max + 1, 6))
        self._last_emitted: list = [None] * n_envs
        self.events: list[list[RallyEvent]] = [[] for _ in range(n_envs)]
        self.event_kinds: list[list[str]] = [[] for _ in range(n_envs)]
        self.episode_reward = np.zeros(n_envs)
        self.reached_t2 = np.zeros(n_envs, dtype=bool)
        self.reached_t3 = np.zeros(n_envs, dtype=bool)
        self.target_error = np.full(n_envs, np.nan)
        self._pending_v_rhb = np.zeros(n_envs)
        self._pending_e_lt = np.zeros(n_envs)
        self._lo, self._hi = cfg.chain.limits()
        self._vel_lim = cfg.chain.vel_limits()
        # Filled by _fk_all.
        self.racket_p = np.zeros((n_envs, 3))
        self.racket_n = np.zeros((n_envs, 3))
        self.racket_v = np.zeros((n_envs, 3))
        self.racket_quat = np.zeros((n_envs, 4))
        self.joint_points = None

    # -- helpers ---------------------------------------------------------

    def set_stage(self, stage: int) -> None:
        if stage not in (1, 2, 3):
            raise ValueError("stage must be 1, 2 or 3")
        self.stage = stage

    def action_to_targets(self, action: np.ndarray) -> np.ndarray:
        """Affine [-1, 1] -> [q_min, q_max] per joint."""
        a = np.clip(action, -1.0, 1.0)
        return self._lo + (a + 1.0) * 0.5 * (self._hi - self._lo)

    def targets_to_action(self, q: np.ndarray) -> np.ndarray:
        return 2.0 * (q - self._lo) / (self._hi - self._lo) - 1.0

    def _fk_all(self) -> None:
        rp, rn, rv, quat, pts = forward_kinematics_batched(
            self.cfg.chain, self.q, self.qd)
        self.racket_p, self.racket_n, self.racket_v = rp, rn, rv
        self.racket_quat, self.joint_points = quat, pts

    def _push_truth(self) -> None:
        self._ring[:, :-1] = self._ring[:, 1:]
        self._ring[:, -1, 0:3] = self.ball_p
        self._ring[:, -1, 3:6] = self.ball_v

    def _fill_truth(self, i: int) -> None:
        self._ring[i, :, 0:3] = self.ball_p[i]
        self._ring[i, :, 3:6] = self.ball_v[i]

    def _sensed(self, i: int):
        slot = self._ring.shape[1] - 1 - int(self.delay[i])
        p = self._ring[i, slot, 0:3].copy()
        v = self._ring[i, slot, 3:6].copy()
        cfg = self.cfg.noise
        rng = self.rngs[i]
        if cfg.dropout_prob > 0.0 and self._last_emitted[i] is not None \
                and rng.uniform() < cfg.dropout_prob:
            return self._last_emitted[i]
        if cfg.sigma_ball_pos > 0.0:
            p = p + cfg.sigma_ball_pos * rng.standard_normal(3)
        if cfg.sigma_ball_vel > 0.0:
            v = v + cfg.sigma_ball_vel * rng.standard_normal(3)
        self._last_emitted[i] = (p, v)
        return p, v

    def build_observation(self, i: int) -> np.ndarray:
        sp, sv = self._sensed(i)
        tag = self.tags[i]
        return np.concatenate([
            self.q[i], self.qd[i], self.racket_p[i], self.racket_quat[i],
            self.racket_v[i], sp, sv, self.target[i],
            np.array([float(tag.value)]), state_onehot(tag)])

    # -- episode control --------------------------------------------------

    def reset_env(self, i: int) -> None:
        cfg = self.cfg
        rng = self.rngs[i]
        self.q[i] = cfg.chain.home()
        self.qd[i] = 0.0
        seed = self.buffer.pop() if self.buffer is not None else None
        if seed is None:
            seed = sample_candidate(rng, cfg.ranges)
            self.random_fallback[i] = True
        else:
            self.random_fallback[i] = False
        self.ball_p[i] = seed.p0
        self.ball_v[i] = seed.v0
        self.ball_w[i] = seed.w0
        self.k_d[i] = seed.aero.k_d
        self.k_m[i] = seed.aero.k_m
        geom = cfg.geometry
        self.target[i, 0] = rng.uniform(cfg.target_inset,
                                        geom.length / 2 - cfg.target_inset)
        self.target[i, 1] = rng.uniform(-geom.width / 2 + cfg.target_inset,
                                        geom.width / 2 - cfg.target_inset)
        self.delay[i] = rng.integers(cfg.noise.delay_min,
                                     cfg.noise.delay_max + 1)
        self.tags[i] = Tag.T0
        self.steps[i] = 0
        ball = BallState(self.ball_p[i], self.ball_v[i], self.ball_w[i])
        self.events[i] = [RallyEvent(EventKind.LAUNCH, 0.0, ball)]
        self.event_kinds[i] = [EventKind.LAUNCH.value]
        self.episode_reward[i] = 0.0
        self.reached_t2[i] = False
        self.reached_t3[i] = False
        self.target_error[i] = np.nan
        self.prev_action[i] = self.targets_to_action(self.q[i])
        self._fill_truth(i)
        self._last_emitted[i] = None

    def reset_all(self) -> np.ndarray:
        for i in range(self.n):
            self.reset_env(i)
        self._fk_all()
        return np.stack([self.build_observation(i) for i in range(self.n)])

    # -- stepping ---------------------------------------------------------

    def _substep(self, q_target: np.ndarray, collected: list):
        """One physics substep for the whole batch; appends per-env events."""
        cfg = self.cfg
        h = cfg.control_dt / cfg.substeps

        tau = pd_control(self.q, self.qd, q_target, cfg.gains)
        self.qd = self.qd + (tau / cfg.joint_inertia) * h
        self.qd = np.clip(self.qd, -self._vel_lim, self._vel_lim)
        q_new = self.q + self.qd * h
        q_clipped = np.clip(q_new, self._lo, self._hi)
        self.qd = np.where(q_new == q_clipped, self.qd, 0.0)
        self.q = q_clipped
        self._fk_all()

        p0 = self.ball_p
        p1, v1 = step_arrays(p0, self.ball_v, self.ball_w,
                             self.k_d, self.k_m, h)
        w1 = self.ball_w

        # Swept racket-face test against the end-of-substep racket pose.
        rel0 = p0 - self.racket_p
        rel1 = p1 - self.racket_p
        d0 = (rel0 * self.racket_n).sum(axis=1)
        d1 = (rel1 * self.racket_n).sum(axis=1)
        side = np.where(d0 >= 0.0, 1.0, -1.0)
        tgt = side * cfg.props.r_b
        denom = d1 - d0
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(denom != 0.0, (tgt - d0) / np.where(denom == 0, 1,
                                                             denom), np.inf)
        crossing = np.isfinite(s) & (s >= 0.0) & (s <= 1.0) \
            & (denom * side < 0.0)
        started_on = (np.abs(d0) <= cfg.props.r_b) & (denom * side < 0.0)
        s = np.where(started_on, 0.0, s)
        cand = crossing | started_on

        hit_racket = np.zeros(self.n, dtype=bool)
        if cand.any():
            p_c = p0 + s[:, None].clip(0.0, 1.0) * (p1 - p0)
            off = p_c - self.racket_p
            radial = off - (off * self.racket_n).sum(axis=1)[:, None] \
                * self.racket_n
            rad_ok = np.sqrt((radial * radial).sum(axis=1)) \
                <= cfg.chain.racket_radius
            cand &= rad_ok
            for i in np.nonzero(cand)[0]:
                i = int(i)
                ball_c = BallState(p_c[i], v1[i], w1[i])
                frame = SurfaceFrame(self.racket_p[i], self.racket_n[i],
                                     self.racket_v[i])
                try:
                    post, _ = resolve_racket_hit(ball_c, frame,
                                                 cfg.racket_contact,
                                                 cfg.props, radius=None)
                except NotApproaching:
                    continue
                hit_racket[i] = True
                w_post = clamp_spin(post.w, cfg.w_max)
                p1[i] = post.p + post.v * (1.0 - float(s[i])) * h
                v1[i] = post.v
                w1 = w1.copy() if w1 is self.ball_w else w1
                w1[i] = w_post
                collected[i].append(
                    ("racket", RallyEvent(EventKind.RACKET_CONTACT, 0.0,
                                          BallState(post.p, post.v, w_post)),
                     float(self.racket_v[i][0])))

        # Body capsules: endpoint proximity test (links are thick relative
        # to one substep of ball travel, so no swept test is needed).
        body_dists = _point_capsule_distances(
            p1, self.joint_points[:, :-1], self.joint_points[:, 1:])
        body_hit = (body_dists.min(axis=1)
                    <= cfg.props.r_b + cfg.chain.capsule_radius) \
            & ~hit_racket
        for i in np.nonzero(body_hit)[0]:
            i = int(i)
            collected[i].append(
                ("body", RallyEvent(EventKind.BODY_CONTACT, 0.0,
                                    BallState(p1[i], v1[i], w1[i])), None))

        # Surface crossings for everyone who did not just get struck.
        # With t0=0 and dt=1 the event time is the crossing fraction.
        for i in range(self.n):
            if hit_racket[i] or body_hit[i]:
                continue
            prev = BallState(p0[i], self.ball_v[i], self.ball_w[i])
            nxt = BallState(p1[i], v1[i], w1[i])
            for ev in flight_events_for_step(prev, nxt, cfg.geometry,
                                             cfg.props.r_b, t0=0.0, dt=1.0):
                if ev.kind in (EventKind.BOUNCE_ROBOT_COURT,
                               EventKind.BOUNCE_OPPONENT_COURT):
                    frame = SurfaceFrame.table(cfg.geometry.height)
                    try:
                        post, _ = resolve_bounce(ev.ball, frame,
                                                 cfg.table_contact, cfg.props)
                    except NotApproaching:
                        collected[i].append(("flight", ev, None))
                        break
                    w_post = clamp_spin(post.w, cfg.w_max)
                    frac = min(max(float(ev.time), 0.0), 1.0)
                    p1[i] = ev.ball.p + post.v * (1.0 - frac) * h
                    v1[i] = post.v
                    w1[i] = w_post
                    collected[i].append(("flight", ev, None))
                    break
                collected[i].append(("flight", ev, None))
                if ev.kind is not EventKind.NET_CROSSED:
                    break

        self.ball_p, self.ball_v, self.ball_w = p1, v1, w1
        return np.abs(tau).sum(axis=1)

    def step(self, actions: np.ndarray):
        """Advance every environment one control period.

        Returns (obs, rewards, dones, infos); environments that finish are
        reset automatically and their returned observation is the fresh one.
        """
        cfg = self.cfg
        actions = np.asarray(actions, dtype=np.float64)
        if actions.shape != (self.n, cfg.n_joints):
            raise ValueError(f"expected ({self.n}, {cfg.n_joints}) actions")
        if not np.isfinite(actions).all():
            raise NonFiniteAction("actions must be finite")

        q_target = self.action_to_targets(actions)
        collected: list[list] = [[] for _ in range(self.n)]
        tau_abs = np.zeros(self.n)
        for _ in range(cfg.substeps):
            tau_abs += self._substep(q_target, collected)
        tau_abs /= cfg.substeps
        self.steps += 1

        rewards = np.zeros(self.n)
        dones = np.zeros(self.n, dtype=bool)
        infos: list[dict] = [{} for _ in range(self.n)]

        for i in range(self.n):
            tag = self.tags[i]
            if tag.instantaneous:
                tag = advance_state(tag, None)
            terminal_reason = None
            contact_count = 0
            stage_part = 0.0
            t_now = float(self.steps[i]) * cfg.control_dt

            for source, ev, extra in collected[i]:
                ev = RallyEvent(ev.kind, t_now, ev.ball)
                self.events[i].append(ev)
                self.event_kinds[i].append(ev.kind.value)
                if ev.kind is EventKind.BODY_CONTACT:
                    contact_count += 1
                if tag.instantaneous:
                    tag = advance_state(tag, None)
                res = advance_state(tag, ev)
                if isinstance(res, Terminal):
                    terminal_reason = res.reason
                    break
                tag = res
                if tag.instantaneous:
                    feats = self._features(i, v_rhb_x=extra, event=ev)
                    stage_part += stage_reward(tag, feats, self.stage,
                                               cfg.reward_k)
                    if tag is Tag.T2:
                        self.reached_t2[i] = True
                    elif tag is Tag.T3:
                        self.reached_t3[i] = True
                        self.target_error[i] = feats.e_lt

            self.tags[i] = tag
            if terminal_reason is None and not tag.instantaneous:
                stage_part += stage_reward(tag, self._features(i),
                                           self.stage, cfg.reward_k)

            perf = performance_reward(
                np.array([tau_abs[i]]), actions[i], self.prev_action[i],
                contact_count, cfg.reward_k)
            rewards[i] = total_reward(stage_part, perf)
            self.episode_reward[i] += rewards[i]

            success = tag is Tag.T3 and terminal_reason is None
            timeout = self.steps[i] >= cfg.max_steps
            done = terminal_reason is not None or success or timeout
            if done:
                if terminal_reason is None and not success:
                    terminal_reason = "time_limit"
                infos[i] = {
                    "terminal_reason": terminal_reason,
                    "success": success,
                    "reached_t2": bool(self.reached_t2[i]),
                    "reached_t3": bool(self.reached_t3[i]),
                    "target_error": (float(self.target_error[i])
                                     if np.isfinite(self.target_error[i])
                                     else None),
                    "valid_inbound": self._inbound_valid(i),
                    "events": list(self.event_kinds[i]),
                    "random_fallback": bool(self.random_fallback[i]),
                    "episode_steps": int(self.steps[i]),
                    "episode_reward": float(self.episode_reward[i]),
                }
                dones[i] = True

        self._push_truth()
        obs = np.empty((self.n, cfg.obs_dim))
        reset_any = False
        for i in range(self.n):
            if dones[i]:
                self.reset_env(i)
                reset_any = True
        if reset_any:
            self._fk_all()
        for i in range(self.n):
            obs[i] = self.build_observation(i)
        return obs, rewards, dones, infos

    def _inbound_valid(self, i: int) -> bool:
        return is_valid_rally(self.events[i])

    def _features(self, i: int, v_rhb_x: Optional[float] = None,
                  event: Optional[RallyEvent] = None) -> RewardFeatures:
        diff = self.racket_p[i] - self.ball_p[i]
        d_rb = float(np.sqrt((diff * diff).sum()))
        tgt = np.array([self.target[i, 0], self.target[i, 1],
                        self.cfg.geometry.height])
        bt = self.ball_p[i] - tgt
        d_bt = float(np.sqrt((bt * bt).sum()))
        e_lt = 0.0
        if event is not None:
            dx = float(event.ball.p[0] - self.target[i, 0])
            dy = float(event.ball.p[1] - self.target[i, 1])
            e_lt = float(np.sqrt(dx * dx + dy * dy))
        return RewardFeatures(d_rb=d_rb, d_bt=d_bt,
                              v_rhb_x=v_rhb_x if v_rhb_x is not None else 0.0,
                              e_lt=e_lt)


class RallyEnv:
    """Single-environment convenience wrapper over the batched core."""

    def __init__(self, cfg: ArenaConfig, seed: int = 0,
                 seed_buffer: Optional[SeedBuffer] = None, stage: int = 1):
        self._batch = BatchedArena(cfg, 1, base_seed=seed,
                                   seed_buffer=seed_buffer, stage=stage)
        self.cfg = cfg

    @property
    def core(self) -> BatchedArena:
        return self._batch

    def set_stage(self, stage: int) -> None:
        self._batch.set_stage(stage)

    def reset(self):
        obs = self._batch.reset_all()
        info = {"random_fallback": bool(self._batch.random_fallback[0])}
        return obs[0], info

    def step(self, action: np.ndarray):
        obs, rewards, dones, infos = self._batch.step(
            np.asarray(action, dtype=np.float64)[None, :])
        return obs[0], float(rewards[0]), bool(dones[0]), infos[0]

    def racket_pose(self) -> RacketPose:
        pose, _ = forward_kinematics(self.cfg.chain, self._batch.q[0],
                                     self._batch.qd[0])
        return pose


def build_observation(env: RallyEnv) -> np.ndarray:
    """Spec-level accessor: the current observation of a single env."""
    return env.core.build_observation(0)


__all__ = [
    "NonFiniteAction", "PDGains", "NoiseLatencyConfig", "ObsLayout",
    "ArenaConfig", "BatchedArena", "RallyEnv",
    "default_gains", "pd_control", "sense_ball", "parse_observation",
    "state_onehot", "build_observation",
]
