"""Per-sub-slot case enumeration and slot-level topology assembly.

For each sub-slot the links are sorted by probe rate (everyone at peak
power); case j drops the j weakest links from the tail. Each nested case
gets a feasibility solve, and the slot keeps, per sub-slot, the feasible
case minimizing  -v * links + sum(z_u * e_u). The empty case (objective 0)
always qualifies, so a result always exists.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .channel import achievable_rate, sinr
from .errors import SolverError
from .feasibility import (EPS_WEIGHT, build_instance, prefix,
                          solve_feasibility, PowerSolution)

log = logging.getLogger(__name__)

_EMPTY_SOLUTION = PowerSolution(feasible=True, powers={}, rates=(), energies={})


@dataclass(frozen=True)
class CaseResult:
    retained: tuple             # links kept by the chosen case
    solution: PowerSolution
    objective: float
    case_index: int             # number of links dropped from the sorted tail


@dataclass(frozen=True)
class SlotOutcome:
    activated: frozenset        # DirectedLink set with indicator 1
    n_links: int
    energies: np.ndarray        # (n,) per-node joules for the slot
    powers: tuple               # per sub-slot: dict node -> watts
    chosen: tuple               # per sub-slot: retained link tuple

    def __post_init__(self):
        self.energies.setflags(write=False)


def sort_links_desc(links, st, cfg, probe_power=None):
    """Sub-slot links by descending achievable rate at a common probe power.

    Every transmitter in the sub-slot is assumed active at the probe power
    (peak power by default), so the ranking is power-control-free. Ties
    break by ascending (tx, rx).
    """
    links = list(links)
    probe = cfg.p_max_w if probe_power is None else probe_power
    txs = {l.tx for l in links}
    powers = {u: probe for u in txs}
    rates = [achievable_rate(sinr(l, powers, txs, st), cfg.bandwidth_hz)
             for l in links]
    order = sorted(range(len(links)),
                   key=lambda i: (-rates[i], links[i].tx, links[i].rx))
    return [links[i] for i in order]


def solve_subslot(sub_links, st, z, cfg, v, p_caps=None):
    """Best nested case for one sub-slot.

    z is the per-node queue backlog used in the case objective; the LP's
    secondary weights are max(z_u, EPS_WEIGHT). Ties go to the case with
    more links, then smaller total energy, then fewer drops.
    """
    sub_links = list(sub_links)
    n_links = len(sub_links)
    if n_links == 0:
        return CaseResult(retained=(), solution=_EMPTY_SOLUTION,
                          objective=0.0, case_index=0)

    ordered = sort_links_desc(sub_links, st, cfg)
    full_inst = build_instance(ordered, st, cfg, p_caps=p_caps)
    z = np.asarray(z, dtype=np.float64)

    best = None
    best_key = None
    for drop in range(n_links + 1):
        keep = n_links - drop
        if keep == 0:
            result = CaseResult(retained=(), solution=_EMPTY_SOLUTION,
                                objective=0.0, case_index=drop)
            key = (0.0, 0, 0.0, drop)
        else:
            inst = prefix(full_inst, keep)
            weights = np.maximum(z[[l.tx for l in inst.links]], EPS_WEIGHT)
            try:
                sol = solve_feasibility(inst, weights=weights)
            except SolverError as exc:
                log.warning("sub-slot case with %d links treated as infeasible: %s",
                            keep, exc)
                continue
            if not sol.feasible:
                continue
            cost = sum(z[u] * e for u, e in sol.energies.items())
            objective = -v * keep + cost
            result = CaseResult(retained=inst.links, solution=sol,
                                objective=objective, case_index=drop)
            key = (objective, -keep, sol.total_energy, drop)
        if best_key is None or key < best_key:
            best, best_key = result, key
    return best


def run_slot(plan, st, z, cfg, v):
    """Solve every sub-slot and combine the chosen cases into one topology."""
    n = st.n
    activated = set()
    energies = np.zeros(n)
    powers = []
    chosen = []
    for group in plan.groups:
        case = solve_subslot(group, st, z, cfg, v)
        activated.update(case.retained)
        for u, e in case.solution.energies.items():
            energies[u] += e
        powers.append(dict(case.solution.powers))
        chosen.append(case.retained)
    return SlotOutcome(activated=frozenset(activated), n_links=len(activated),
                       energies=energies, powers=tuple(powers),
                       chosen=tuple(chosen))
