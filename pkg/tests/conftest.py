import numpy as np
import pytest

from wigsim.channel import ChannelConfig, ChannelState
from wigsim.graphs import DirectedLink


def make_state(gains, noise=1e-13, slot=0):
    """ChannelState with hand-picked squared gains."""
    return ChannelState(gains=np.array(gains, dtype=float),
                        noise_power_w=noise, slot=slot)


def disjoint_links(n_links):
    return [DirectedLink(2 * i, 2 * i + 1) for i in range(n_links)]


def random_state(rng, n_nodes, noise=1e-13, lo=-13.0, hi=-9.0):
    """Log-uniform random gains spanning feasible and infeasible regimes."""
    gains = 10.0 ** rng.uniform(lo, hi, size=(n_nodes, n_nodes))
    np.fill_diagonal(gains, 1e-30)
    return make_state(gains, noise=noise)


def dominant_state(rng, n_links, noise=1e-13):
    """Gains where direct paths dominate cross paths; usually feasible."""
    n = 2 * n_links
    gains = 10.0 ** rng.uniform(-13.0, -11.5, size=(n, n))
    for link in disjoint_links(n_links):
        gains[link.tx, link.rx] = 10.0 ** rng.uniform(-10.5, -9.5)
    np.fill_diagonal(gains, 1e-30)
    return make_state(gains, noise=noise)


@pytest.fixture
def channel_cfg():
    return ChannelConfig()
