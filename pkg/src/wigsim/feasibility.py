"""Per-case power-control feasibility problems.

Each retained link contributes one linear constraint

    |h_uv|^2 P_u - G * sum_{k != u} |h_kv|^2 P_k  >=  G * noise

with G = 2^(D / (B tau)) - 1 the SINR a link needs to carry its payload
within the delay budget. A feasible power vector activates every retained
link; among feasible vectors we return the minimizer of a queue-weighted
power sum, so the selected point also minimizes the energy term of the
slot objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import simplex
from .channel import achievable_rate
from .errors import ParameterError, SolverError

# Weight floor for the secondary objective; keeps the LP bounded and the
# selected vertex unique-ish when all queues are empty.
EPS_WEIGHT = 1e-6


def required_sinr(payload_bits, bandwidth_hz, tau_max_s):
    """SINR needed to move `payload_bits` within `tau_max_s` at bandwidth B."""
    bt = bandwidth_hz * tau_max_s
    if bt <= 0:
        raise ParameterError(f"bandwidth * tau must be > 0, got {bt}")
    return 2.0 ** (payload_bits / bt) - 1.0


@dataclass(frozen=True)
class FeasibilityInstance:
    """One sub-slot case: node-disjoint links plus the gains they see."""

    links: tuple                # case links; transmitters are all distinct
    direct: np.ndarray          # (L,) |h_uv|^2 per link
    cross: np.ndarray           # (L, L); [i, j] = |h_{tx_j -> rx_i}|^2, diag unused
    g_req: np.ndarray           # (L,) required SINR per link
    payloads: np.ndarray        # (L,) payload bits of each transmitter
    noise_w: float
    p_cap: np.ndarray           # (L,) per-transmitter power cap, watts
    bandwidth_hz: float


@dataclass(frozen=True)
class PowerSolution:
    feasible: bool
    powers: dict                # transmitter node -> watts
    rates: tuple                # achieved bits/s per case link
    energies: dict              # transmitter node -> joules (P * D / C)

    @property
    def total_energy(self):
        return sum(self.energies.values())


_EMPTY = PowerSolution(feasible=True, powers={}, rates=(), energies={})


def build_instance(case_links, st, cfg, p_caps=None):
    """Gather gains and constants for one case.

    p_caps optionally tightens the per-node power cap (array over all
    nodes); used by the per-slot-budget baseline.
    """
    links = tuple(case_links)
    L = len(links)
    txs = np.array([l.tx for l in links], dtype=np.int64)
    rxs = np.array([l.rx for l in links], dtype=np.int64)
    if L and (txs.max() >= st.n or rxs.max() >= st.n):
        raise RuntimeError("missing channel gain for a case link pair")
    if len(set(txs.tolist())) != L:
        raise ParameterError("case links must have distinct transmitters")

    direct = st.gains[txs, rxs].astype(np.float64)
    # cross[i, j]: transmitter of link j interfering at receiver of link i
    cross = st.gains[np.ix_(txs, rxs)].T.copy()
    np.fill_diagonal(cross, 0.0)
    payloads = np.array([cfg.payload_of(u) for u in txs], dtype=np.float64)
    g_req = np.array([required_sinr(d, cfg.bandwidth_hz, cfg.tau_max_s)
                      for d in payloads])
    if p_caps is None:
        cap = np.full(L, cfg.p_max_w)
    else:
        cap = np.clip(np.asarray(p_caps, dtype=np.float64)[txs], 0.0, cfg.p_max_w)
    return FeasibilityInstance(links=links, direct=direct, cross=cross,
                               g_req=g_req, payloads=payloads,
                               noise_w=st.noise_power_w, p_cap=cap,
                               bandwidth_hz=cfg.bandwidth_hz)


def prefix(inst, k):
    """Instance restricted to the first k links (a nested case)."""
    return FeasibilityInstance(
        links=inst.links[:k], direct=inst.direct[:k],
        cross=inst.cross[:k, :k], g_req=inst.g_req[:k],
        payloads=inst.payloads[:k], noise_w=inst.noise_w,
        p_cap=inst.p_cap[:k], bandwidth_hz=inst.bandwidth_hz)


def constraint_matrix(inst):
    """Rows of A P >= b in watts: one row per case link."""
    L = len(inst.links)
    a = -inst.g_req[:, None] * inst.cross
    a[np.arange(L), np.arange(L)] = inst.direct
    b = inst.g_req * inst.noise_w
    return a, b


def rates_and_energies(powers_w, inst):
    """Achieved rate per link and per-transmitter energy at given powers."""
    p = np.asarray(powers_w, dtype=np.float64)
    interference = inst.cross @ p
    xi = inst.direct * p / (interference + inst.noise_w)
    rates = np.array([achievable_rate(x, inst.bandwidth_hz) for x in xi])
    energies = {}
    for i, link in enumerate(inst.links):
        energies[link.tx] = p[i] * inst.payloads[i] / rates[i] if p[i] > 0 else 0.0
    return rates, energies


def solve_feasibility(inst, weights=None):
    """Feasibility verdict plus the weighted-minimum-power vector.

    Raises SolverError if the LP hits its iteration cap; callers treat that
    case as infeasible after logging it.
    """
    L = len(inst.links)
    if L == 0:
        return _EMPTY

    # A link that cannot reach its SINR target even interference-free at
    # its power cap makes the whole case infeasible.
    if np.any(inst.direct * inst.p_cap < inst.g_req * inst.noise_w):
        return PowerSolution(feasible=False, powers={}, rates=(), energies={})

    a, b = constraint_matrix(inst)
    # Normalize variables to [0, 1] and rows to O(1) coefficients.
    a_scaled = a * inst.p_cap[None, :]
    row_scale = np.maximum(np.abs(a_scaled).max(axis=1), np.abs(b))
    row_scale[row_scale == 0] = 1.0
    a_scaled = a_scaled / row_scale[:, None]
    b_scaled = b / row_scale

    if weights is None:
        weights = np.full(L, EPS_WEIGHT)
    costs = np.asarray(weights, dtype=np.float64) * inst.p_cap
    peak = costs.max()
    if peak > 0:
        costs = costs / peak

    status, x = simplex.solve_lp(costs, a_scaled, b_scaled, np.ones(L))
    if status == simplex.ITERATION_LIMIT:
        raise SolverError(f"simplex hit iteration cap on a {L}-link case")
    if status != simplex.OPTIMAL:
        return PowerSolution(feasible=False, powers={}, rates=(), energies={})

    p = x * inst.p_cap
    rates, energies = rates_and_energies(p, inst)
    powers = {link.tx: float(p[i]) for i, link in enumerate(inst.links)}
    return PowerSolution(feasible=True, powers=powers,
                         rates=tuple(float(r) for r in rates),
                         energies=energies)


def solution_energy(sol, inst):
    """Recompute per-transmitter energies from a solution's powers."""
    if not sol.feasible or not inst.links:
        return {}
    p = np.array([sol.powers[l.tx] for l in inst.links])
    _, energies = rates_and_energies(p, inst)
    return energies


def relative_residuals(powers_w, inst):
    """Signed constraint slack normalized by row magnitude (>= 0 is satisfied)."""
    a, b = constraint_matrix(inst)
    p = np.asarray(powers_w, dtype=np.float64)
    scale = np.maximum(np.abs(a) @ inst.p_cap, np.abs(b))
    scale[scale == 0] = 1.0
    return (a @ p - b) / scale
