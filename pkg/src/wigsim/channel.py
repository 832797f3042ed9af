"""Node placement, fading channel sampling, SINR, rates, and outage.

Squared channel gains combine log-distance path loss (a + b*log10(d_m) dB)
with unit-mean exponential small-scale power fading, redrawn independently
every slot. Gains are fixed within a slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

# Floor on squared gains; keeps interference denominators well-posed.
GAIN_FLOOR = 1e-30

# Salts for per-purpose RNG stream derivation.
_SALT_PLACE = 101
_SALT_CHANNEL = 211


@dataclass(frozen=True)
class ChannelConfig:
    bandwidth_hz: float = 1e6
    noise_power_w: float = 2e-12
    payload_bits: float = 1e6          # per-node payload; scalar applies to all nodes
    tau_max_s: float = 0.5
    p_max_w: float = 0.5
    energy_budget_j: float = 1.25      # long-term average supply per node per slot
    area_side_m: float = 100.0
    d_min_m: float = 1.0
    fixed_distance_m: float | None = None   # set to force every pairwise distance
    pathloss_a: float = 30.6
    pathloss_b: float = 36.7

    def __post_init__(self):
        for name in ("bandwidth_hz", "noise_power_w", "payload_bits",
                     "tau_max_s", "p_max_w", "energy_budget_j"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.area_side_m < 0 or self.d_min_m <= 0:
            raise ParameterError("area_side_m must be >= 0 and d_min_m > 0")

    def payload_of(self, node):
        bits = np.asarray(self.payload_bits, dtype=float)
        return float(bits) if bits.ndim == 0 else float(bits[node])


@dataclass(frozen=True)
class ChannelState:
    """Squared gains for every ordered node pair in one slot."""

    gains: np.ndarray      # (n, n); [u, v] is |h_uv|^2 for transmitter u, receiver v
    noise_power_w: float
    slot: int
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", self.gains.shape[0])
        self.gains.setflags(write=False)

    def gain(self, tx, rx):
        if not (0 <= tx < self.n and 0 <= rx < self.n):
            raise RuntimeError(f"missing channel gain for pair ({tx}, {rx})")
        return float(self.gains[tx, rx])


def place_nodes(n, cfg, seed):
    """Uniform i.i.d. positions in the configured square, meters."""
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    rng = np.random.default_rng([seed, _SALT_PLACE])
    return rng.uniform(0.0, cfg.area_side_m, size=(n, 2))


def pairwise_distances(positions, cfg):
    """Euclidean distances clamped below by d_min (or forced by fixed mode)."""
    n = positions.shape[0]
    if cfg.fixed_distance_m is not None:
        d = np.full((n, n), cfg.fixed_distance_m, dtype=float)
        np.fill_diagonal(d, 0.0)
        return d
    diff = positions[:, None, :] - positions[None, :, :]
    d = np.sqrt((diff ** 2).sum(axis=2))
    off = ~np.eye(n, dtype=bool)
    d[off] = np.maximum(d[off], cfg.d_min_m)
    return d


def pathloss_gain(distance_m, cfg):
    """Squared gain from the log-distance path loss at one distance."""
    loss_db = cfg.pathloss_a + cfg.pathloss_b * math.log10(distance_m)
    return 10.0 ** (-loss_db / 10.0)


def sample_channel(positions, slot, cfg, seed):
    """Draw per-pair squared gains for one slot.

    |h|^2 = pathloss(d) * g with g ~ Exp(1) i.i.d. per ordered pair; slots
    use independent draws. Gains are clamped at GAIN_FLOOR.
    """
    n = positions.shape[0]
    d = pairwise_distances(positions, cfg)
    off = ~np.eye(n, dtype=bool)
    loss_db = np.zeros((n, n))
    loss_db[off] = cfg.pathloss_a + cfg.pathloss_b * np.log10(d[off])
    pl = 10.0 ** (-loss_db / 10.0)
    rng = np.random.default_rng([seed, _SALT_CHANNEL, slot])
    fading = rng.exponential(1.0, size=(n, n))
    gains = np.maximum(pl * fading, GAIN_FLOOR)
    np.fill_diagonal(gains, GAIN_FLOOR)
    return ChannelState(gains=gains, noise_power_w=cfg.noise_power_w, slot=slot)


def sinr(link, powers, transmitters, st, cfg=None):
    """SINR at link.rx; interference from concurrently active transmitters.

    Only transmitters sharing the link's sub-slot belong in `transmitters`;
    orthogonal sub-slots do not interfere.
    """
    if link.tx not in transmitters:
        raise ParameterError(f"link transmitter {link.tx} not in active set")
    signal = st.gain(link.tx, link.rx) * powers[link.tx]
    interference = sum(st.gain(k, link.rx) * powers[k]
                       for k in transmitters if k != link.tx)
    return signal / (interference + st.noise_power_w)


def achievable_rate(snr_ratio, bandwidth_hz):
    return bandwidth_hz * math.log2(1.0 + snr_ratio)


def min_rate(payload_bits, tau_max_s):
    if tau_max_s <= 0:
        raise ParameterError(f"tau_max_s must be > 0, got {tau_max_s}")
    return payload_bits / tau_max_s


def outage_indicator(rate, required_rate):
    """1 when the link sustains the required rate (boundary counts as success)."""
    return 1 if rate >= required_rate else 0
