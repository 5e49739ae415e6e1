"""Actor-critic network with observation-concatenating hidden layers.

Every hidden layer past the first takes [previous activation, observation]
as input; actor and critic share the trunk and differ only in their final
linear heads. The actor mean is tanh-bounded; the log standard deviation
is a free state-independent parameter. Forward, loss, and gradients are
implemented directly in numpy (float64), which keeps training bit-exact
for a fixed seed and lets finite differences certify the backprop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LOG_2PI = float(np.log(2.0 * np.pi))


class DivergedUpdate(RuntimeError):
    """A parameter became non-finite during an update."""


@dataclass
class PolicyParams:
    """Weights of the shared-trunk actor/critic network."""

    trunk_w: list            # layer l: (width, in_l) with in_1 = obs_dim
    trunk_b: list
    actor_w: np.ndarray      # (act_dim, width)
    actor_b: np.ndarray
    critic_w: np.ndarray     # (1, width)
    critic_b: np.ndarray
    log_std: np.ndarray      # (act_dim,)

    @property
    def obs_dim(self) -> int:
        return self.trunk_w[0].shape[1]

    @property
    def act_dim(self) -> int:
        return self.actor_w.shape[0]

    def arrays(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.trunk_w, self.trunk_b):
            out.extend([w, b])
        out.extend([self.actor_w, self.actor_b,
                    self.critic_w, self.critic_b, self.log_std])
        return out

    def flatten(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    def with_flat(self, flat: np.ndarray) -> "PolicyParams":
        """Rebuild a params object of this shape from a flat vector."""
        arrays = []
        offset = 0
        for a in self.arrays():
            n = a.size
            arrays.append(flat[offset:offset + n].reshape(a.shape).copy())
            offset += n
        if offset != flat.size:
            raise ValueError("flat vector size mismatch")
        n_trunk = len(self.trunk_w)
        return PolicyParams(
            trunk_w=[arrays[2 * i] for i in range(n_trunk)],
            trunk_b=[arrays[2 * i + 1] for i in range(n_trunk)],
            actor_w=arrays[2 * n_trunk], actor_b=arrays[2 * n_trunk + 1],
            critic_w=arrays[2 * n_trunk + 2], critic_b=arrays[2 * n_trunk + 3],
            log_std=arrays[2 * n_trunk + 4])

    @property
    def finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())


def init_params(rng: np.random.Generator, obs_dim: int, act_dim: int,
                hidden_layers: int = 2, width: int = 256,
                init_action_std: float = 0.35) -> PolicyParams:
    """Scaled-Gaussian initialization; the actor head starts near zero."""
    trunk_w, trunk_b = [], []
    in_dim = obs_dim
    for _ in range(hidden_layers):
        trunk_w.append(rng.standard_normal((width, in_dim)) / np.sqrt(in_dim))
        trunk_b.append(np.zeros(width))
        in_dim = width + obs_dim
    actor_w = 0.01 * rng.standard_normal((act_dim, width)) / np.sqrt(width)
    critic_w = rng.standard_normal((1, width)) / np.sqrt(width)
    return PolicyParams(trunk_w=trunk_w, trunk_b=trunk_b,
                        actor_w=actor_w, actor_b=np.zeros(act_dim),
                        critic_w=critic_w, critic_b=np.zeros(1),
                        log_std=np.full(act_dim, np.log(init_action_std)))


def _forward_cached(params: PolicyParams, x: np.ndarray):
    """Batched forward pass keeping activations for the backward pass."""
    hs = []
    inp = x
    inputs = []
    for w, b in zip(params.trunk_w, params.trunk_b):
        inputs.append(inp)
        h = np.tanh(inp @ w.T + b)
        hs.append(h)
        inp = np.concatenate([h, x], axis=1)
    h_last = hs[-1]
    pre_mean = h_last @ params.actor_w.T + params.actor_b
    mean = np.tanh(pre_mean)
    value = (h_last @ params.critic_w.T + params.critic_b)[:, 0]
    return mean, value, hs, inputs


def forward(params: PolicyParams, obs: np.ndarray):
    """Policy head outputs (mean, std, value) for one or many observations."""
    x = np.asarray(obs, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    mean, value, _, _ = _forward_cached(params, x)
    std = np.exp(params.log_std)
    if single:
        return mean[0], std, float(value[0])
    return mean, std, value


def sample_action(mean: np.ndarray, std: np.ndarray,
                  rng: np.random.Generator):
    """Gaussian sample clamped to [-1, 1]; log-prob of the pre-clamp draw.

    Returns (action, log_prob, raw); training stores the raw sample so
    later ratio computations reference the density actually sampled.
    """
    mean = np.asarray(mean, dtype=np.float64)
    raw = mean + std * rng.standard_normal(mean.shape)
    t = (raw - mean) / std
    logp = (-0.5 * (t * t).sum(axis=-1) - np.log(std).sum()
            - 0.5 * mean.shape[-1] * LOG_2PI)
    return np.clip(raw, -1.0, 1.0), logp, raw


def log_prob(params_log_std: np.ndarray, mean: np.ndarray,
             action: np.ndarray) -> np.ndarray:
    """Diagonal-Gaussian log density of actions under (mean, exp(log_std))."""
    std = np.exp(params_log_std)
    t = (action - mean) / std
    return (-0.5 * (t * t).sum(axis=-1) - params_log_std.sum()
            - 0.5 * mean.shape[-1] * LOG_2PI)


@dataclass
class LossConfig:
    clip_eps: float = 0.2
    value_coef: float = 0.5
    entropy_coef: float = 0.003


@dataclass
class LossStats:
    policy_loss: float
    value_loss: float
    entropy: float
    approx_kl: float
    clip_fraction: float


def ppo_loss_and_grad(params: PolicyParams, obs: np.ndarray,
                      actions: np.ndarray, logp_old: np.ndarray,
                      advantages: np.ndarray, returns: np.ndarray,
                      cfg: LossConfig = LossConfig()):
    """Clipped-surrogate + value MSE + entropy loss with exact gradients.

    Returns (loss, grad_flat, LossStats). The gradient layout matches
    PolicyParams.flatten().
    """
    x = np.asarray(obs, dtype=np.float64)
    n = x.shape[0]
    mean, value, hs, inputs = _forward_cached(params, x)
    std = np.exp(params.log_std)

    t = (actions - mean) / std
    logp = (-0.5 * (t * t).sum(axis=1) - params.log_std.sum()
            - 0.5 * params.act_dim * LOG_2PI)
    ratio = np.exp(logp - logp_old)
    clipped = np.clip(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps)
    s1 = ratio * advantages
    s2 = clipped * advantages
    policy_loss = -np.minimum(s1, s2).mean()

    v_err = value - returns
    value_loss = float((v_err * v_err).mean())
    entropy = float(params.log_std.sum()
                    + 0.5 * params.act_dim * (1.0 + LOG_2PI))
    loss = float(policy_loss + cfg.value_coef * value_loss
                 - cfg.entropy_coef * entropy)

    # d policy_loss / d ratio: the unclipped branch when it is the minimum,
    # else the clip's pass-through region.
    use_s1 = s1 <= s2
    inside = (ratio > 1.0 - cfg.clip_eps) & (ratio < 1.0 + cfg.clip_eps)
    g_ratio = -(advantages / n) * np.where(use_s1, 1.0, inside.astype(float))
    g_logp = g_ratio * ratio

    g_mean = g_logp[:, None] * (t / std)
    g_log_std = (g_logp[:, None] * (t * t - 1.0)).sum(axis=0) \
        - cfg.entropy_coef
    g_value = cfg.value_coef * 2.0 * v_err / n

    # Heads.
    g_pre_mean = g_mean * (1.0 - mean * mean)
    h_last = hs[-1]
    g_actor_w = g_pre_mean.T @ h_last
    g_actor_b = g_pre_mean.sum(axis=0)
    g_critic_w = g_value[None, :] @ h_last
    g_critic_b = np.array([g_value.sum()])
    g_h = g_pre_mean @ params.actor_w + g_value[:, None] @ params.critic_w

    # Trunk, last layer to first; the observation block of each layer's
    # input is data, so its gradient is dropped.
    g_trunk_w = [None] * len(params.trunk_w)
    g_trunk_b = [None] * len(params.trunk_b)
    width = params.trunk_w[0].shape[0]
    for layer in range(len(params.trunk_w) - 1, -1, -1):
        g_z = g_h * (1.0 - hs[layer] * hs[layer])
        g_trunk_w[layer] = g_z.T @ inputs[layer]
        g_trunk_b[layer] = g_z.sum(axis=0)
        if layer > 0:
            g_h = (g_z @ params.trunk_w[layer])[:, :width]

    grads = []
    for gw, gb in zip(g_trunk_w, g_trunk_b):
        grads.extend([gw, gb])
    grads.extend([g_actor_w, g_actor_b, g_critic_w, g_critic_b, g_log_std])
    grad_flat = np.concatenate([g.ravel() for g in grads])

    stats = LossStats(
        policy_loss=float(policy_loss), value_loss=value_loss,
        entropy=entropy, approx_kl=float(np.mean(logp_old - logp)),
        clip_fraction=float(np.mean(np.abs(ratio - 1.0) > cfg.clip_eps)))
    return loss, grad_flat, stats


class Adam:
    """Plain Adam on a flat parameter vector."""

    def __init__(self, size: int, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0
        self.beta1, self.beta2, self.eps = beta1, beta2, eps

    def step(self, flat: np.ndarray, grad: np.ndarray,
             lr: float) -> np.ndarray:
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)
        return flat - lr * m_hat / (np.sqrt(v_hat) + self.eps)


def clip_grad_norm(grad: np.ndarray, max_norm: float) -> np.ndarray:
    norm = float(np.sqrt((grad * grad).sum()))
    if norm > max_norm and norm > 0.0:
        return grad * (max_norm / norm)
    return grad


__all__ = [
    "PolicyParams", "LossConfig", "LossStats", "Adam", "DivergedUpdate",
    "init_params", "forward", "sample_action", "log_prob",
    "ppo_loss_and_grad", "clip_grad_norm", "LOG_2PI",
]
