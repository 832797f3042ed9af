"""Brute-force oracles for small instances, used by tests and the CLI.

The grid oracle sweeps power vectors over a regular lattice and reports
the best worst-case constraint margin; the subset oracle scores every
activation subset of a sub-slot. Both are deliberately simple so they can
catch mistakes in the production solver and case enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .feasibility import (EPS_WEIGHT, build_instance, constraint_matrix,
                          solve_feasibility)

GRID_RESOLUTION = 400


@dataclass(frozen=True)
class GridVerdict:
    feasible: bool
    best_margin: float      # max over grid of min normalized row slack
    near_boundary: bool     # best margin within one grid cell of zero
    best_powers: np.ndarray


def grid_feasibility(inst, resolution=GRID_RESOLUTION):
    """Exhaustive lattice search over [0, cap]^L at the given resolution."""
    L = len(inst.links)
    if L == 0:
        return GridVerdict(True, np.inf, False, np.zeros(0))
    if L > 3:
        raise ValueError("grid oracle supports at most 3 links")

    a, b = constraint_matrix(inst)
    scale = np.maximum(np.abs(a) @ inst.p_cap, np.abs(b))
    scale[scale == 0] = 1.0
    a = a / scale[:, None]
    b = b / scale

    axes = [np.linspace(0.0, cap, resolution + 1) for cap in inst.p_cap]
    steps = inst.p_cap / resolution
    # Largest change of any row across one grid cell, in normalized units.
    cell_slack = float((np.abs(a) * steps[None, :]).sum(axis=1).max())

    if L == 1:
        margins = a[0, 0] * axes[0] - b[0]
        best = int(np.argmax(margins))
        best_margin = float(margins[best])
        best_p = np.array([axes[0][best]])
    elif L == 2:
        g0 = a[0, 0] * axes[0][:, None] + a[0, 1] * axes[1][None, :] - b[0]
        g1 = a[1, 0] * axes[0][:, None] + a[1, 1] * axes[1][None, :] - b[1]
        margins = np.minimum(g0, g1)
        flat = int(np.argmax(margins))
        i, j = np.unravel_index(flat, margins.shape)
        best_margin = float(margins[i, j])
        best_p = np.array([axes[0][i], axes[1][j]])
    else:
        best_margin = -np.inf
        best_p = np.zeros(3)
        p1 = axes[1][:, None]
        p2 = axes[2][None, :]
        planes = [a[i, 1] * p1 + a[i, 2] * p2 - b[i] for i in range(3)]
        for i0, p0 in enumerate(axes[0]):
            margins = np.minimum.reduce([planes[i] + a[i, 0] * p0 for i in range(3)])
            flat = int(np.argmax(margins))
            if margins.flat[flat] > best_margin:
                j, k = np.unravel_index(flat, margins.shape)
                best_margin = float(margins[j, k])
                best_p = np.array([p0, axes[1][j], axes[2][k]])

    # A nonnegative margin is an exact witness (that lattice point satisfies
    # every row), so only a barely-negative margin is inconclusive: the true
    # optimum may sit between lattice points.
    if best_margin >= 0.0:
        near = best_margin <= 1e-9
    else:
        near = best_margin >= -cell_slack
    return GridVerdict(feasible=best_margin >= 0.0,
                       best_margin=best_margin,
                       near_boundary=near,
                       best_powers=best_p)


def case_objective(case_links, st, z, cfg, v, p_caps=None):
    """Objective of one activation subset, or None when infeasible."""
    if not case_links:
        return 0.0, None
    inst = build_instance(case_links, st, cfg, p_caps=p_caps)
    z = np.asarray(z, dtype=np.float64)
    weights = np.maximum(z[[l.tx for l in inst.links]], EPS_WEIGHT)
    try:
        sol = solve_feasibility(inst, weights=weights)
    except SolverError:
        return None, None
    if not sol.feasible:
        return None, None
    cost = sum(z[u] * e for u, e in sol.energies.items())
    return -v * len(case_links) + cost, sol


def best_subset(sub_links, st, z, cfg, v, p_caps=None):
    """Minimum objective over every activation subset of one sub-slot.

    Exponential in the link count; guarded to stay a test-support tool.
    """
    sub_links = list(sub_links)
    if len(sub_links) > 12:
        raise ValueError("subset oracle limited to 12 links")
    best_obj = 0.0
    best_set = ()
    for r in range(len(sub_links), 0, -1):
        for combo in itertools.combinations(sub_links, r):
            obj, _ = case_objective(combo, st, z, cfg, v, p_caps=p_caps)
            if obj is not None and obj < best_obj:
                best_obj = obj
                best_set = combo
    return best_obj, best_set
