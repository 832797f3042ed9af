import math

import numpy as np
import pytest
from hypothesis import given, strategies as st_h

from wigsim.channel import (ChannelConfig, GAIN_FLOOR, achievable_rate,
                            min_rate, outage_indicator, pairwise_distances,
                            pathloss_gain, place_nodes, sample_channel, sinr)
from wigsim.errors import ParameterError
from wigsim.graphs import DirectedLink


CFG = ChannelConfig()


def test_pathloss_at_table_distance():
    # direct arithmetic: 10^(-(30.6 + 36.7*log10(100)) / 10)
    expected = 10.0 ** (-(30.6 + 36.7 * math.log10(100.0)) / 10.0)
    assert expected == pytest.approx(3.981e-11, rel=1e-3)
    assert pathloss_gain(100.0, CFG) == pytest.approx(expected, rel=1e-12)


def test_fixed_distance_channel_matches_pathloss_times_fading():
    cfg = ChannelConfig(fixed_distance_m=100.0)
    pos = place_nodes(4, cfg, seed=0)
    st = sample_channel(pos, 0, cfg, seed=0)
    pl = pathloss_gain(100.0, cfg)
    off = ~np.eye(4, dtype=bool)
    fading = st.gains[off] / pl
    assert np.all(fading > 0)
    # Exp(1) draws land mostly within a few means
    assert fading.mean() < 10.0


def test_place_nodes_inside_square_and_deterministic():
    pos = place_nodes(50, CFG, seed=4)
    assert pos.shape == (50, 2)
    assert np.all(pos >= 0) and np.all(pos <= CFG.area_side_m)
    assert np.array_equal(pos, place_nodes(50, CFG, seed=4))
    assert not np.array_equal(pos, place_nodes(50, CFG, seed=5))
    with pytest.raises(ParameterError):
        place_nodes(0, CFG, seed=0)


def test_zero_area_distances_clamped():
    cfg = ChannelConfig(area_side_m=0.0, d_min_m=1.0)
    pos = place_nodes(3, cfg, seed=0)
    d = pairwise_distances(pos, cfg)
    off = ~np.eye(3, dtype=bool)
    assert np.all(d[off] == 1.0)
    assert np.all(np.diag(d) == 0.0)


def test_gain_floor():
    cfg = ChannelConfig(area_side_m=1e12, d_min_m=1.0)
    rng_pos = np.array([[0.0, 0.0], [1e12, 0.0]])
    st = sample_channel(rng_pos, 0, cfg, seed=1)
    assert st.gains[0, 1] >= GAIN_FLOOR


def test_fading_is_unit_mean_monte_carlo():
    # Exp(1) small-scale power: mean over 1e5 draws within 1%
    cfg = ChannelConfig(fixed_distance_m=100.0)
    pl = pathloss_gain(100.0, cfg)
    draws = []
    pos = place_nodes(101, cfg, seed=3)
    for t in range(10):
        st = sample_channel(pos, t, cfg, seed=3)
        off = ~np.eye(101, dtype=bool)
        draws.append(st.gains[off] / pl)
    g = np.concatenate(draws)[:100_000]
    assert g.size == 100_000
    assert 0.99 <= g.mean() <= 1.01


def test_slots_use_independent_draws():
    pos = place_nodes(5, CFG, seed=0)
    st0 = sample_channel(pos, 0, CFG, seed=0)
    st1 = sample_channel(pos, 1, CFG, seed=0)
    assert not np.array_equal(st0.gains, st1.gains)
    again = sample_channel(pos, 0, CFG, seed=0)
    assert np.array_equal(st0.gains, again.gains)


class _FakeState:
    def __init__(self, gains, noise):
        self.gains = np.asarray(gains, dtype=float)
        self.noise_power_w = noise
        self.n = self.gains.shape[0]

    def gain(self, tx, rx):
        return float(self.gains[tx, rx])


def test_sinr_single_transmitter():
    st = _FakeState([[0.0, 4.0], [1.0, 0.0]], noise=1.0)
    assert sinr(DirectedLink(0, 1), {0: 2.0}, {0}, st) == pytest.approx(8.0)


def test_sinr_with_interference():
    # direct |h|^2 P = 8, cross |h|^2 P = 3, noise 1 -> 8 / 4 = 2
    gains = np.zeros((4, 4))
    gains[0, 1] = 4.0      # direct for link 0->1 at P=2
    gains[2, 1] = 1.5      # interferer 2 at P=2 -> 3.0 received
    gains[2, 3] = 1.0
    st = _FakeState(gains, noise=1.0)
    val = sinr(DirectedLink(0, 1), {0: 2.0, 2: 2.0}, {0, 2}, st)
    assert val == pytest.approx(2.0)


def test_sinr_zero_power():
    st = _FakeState([[0.0, 4.0], [1.0, 0.0]], noise=1.0)
    assert sinr(DirectedLink(0, 1), {0: 0.0}, {0}, st) == 0.0


@given(p=st_h.floats(0.01, 10.0), q=st_h.floats(0.01, 10.0))
def test_sinr_monotone_in_powers(p, q):
    gains = np.zeros((4, 4))
    gains[0, 1] = 2.0
    gains[2, 1] = 0.5
    st = _FakeState(gains, noise=0.3)
    base = sinr(DirectedLink(0, 1), {0: p, 2: q}, {0, 2}, st)
    more_signal = sinr(DirectedLink(0, 1), {0: p * 1.5, 2: q}, {0, 2}, st)
    more_interference = sinr(DirectedLink(0, 1), {0: p, 2: q * 1.5}, {0, 2}, st)
    assert more_signal > base
    assert more_interference < base


def test_achievable_rate_examples():
    assert achievable_rate(0.0, 1e6) == 0.0
    assert achievable_rate(3.0, 1e6) == pytest.approx(2e6)
    assert achievable_rate(1.0, 1.0) == pytest.approx(1.0)


def test_min_rate_examples():
    assert min_rate(1e6, 0.5) == pytest.approx(2e6)   # Table-scale values
    assert min_rate(0.0, 1.0) == 0.0
    with pytest.raises(ParameterError):
        min_rate(1.0, 0.0)


def test_outage_boundary_is_success():
    assert outage_indicator(2e6, 2e6) == 1
    assert outage_indicator(2e6 - 1e-6, 2e6) == 0
    assert outage_indicator(0.0, 0.0) == 1
