"""Virtual energy-deficit queues and the drift-plus-penalty objective.

Each node carries a queue of cumulative energy overspend relative to its
per-slot average supply. Keeping these queues stable enforces the
long-term-average energy constraint; the per-slot surrogate objective
trades activated links against queue-weighted energy.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError


def initial_queues(n):
    """All-zero backlog at t = 0."""
    return np.zeros(n, dtype=np.float64)


def update_queues(z, energies, budgets):
    """One queue recursion step: z' = max(z + e - budget, 0) elementwise."""
    z = np.asarray(z, dtype=np.float64)
    e = np.asarray(energies, dtype=np.float64)
    if np.any(e < 0):
        raise ParameterError("slot energies must be nonnegative")
    return np.maximum(z + e - budgets, 0.0)


def lyapunov_value(z):
    """Scalar congestion measure: half the sum of squared backlogs."""
    z = np.asarray(z, dtype=np.float64)
    return 0.5 * float(np.dot(z, z))


def drift_bound(cfg, budgets):
    """Per-node worst-case drift constant, evaluated at peak power.

    Diagnostic only; reported in logs, never used in decisions.
    """
    budgets = np.asarray(budgets, dtype=np.float64)
    peak_energy = cfg.p_max_w * cfg.tau_max_s
    return 0.5 * (peak_energy ** 2 + budgets ** 2)


def drift_penalty(n_links, energies, z, v):
    """Per-slot surrogate objective: -v * n_links + sum(z * e)."""
    if n_links < 0:
        raise ParameterError(f"n_links must be >= 0, got {n_links}")
    e = np.asarray(energies, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    return -v * n_links + float(np.dot(z, e))


def mean_rate_series(history):
    """Average backlog divided by elapsed slots, for stability plots.

    history[i] is the queue vector after slot i+1; entry i of the result is
    mean(history[i]) / (i + 1). A vanishing series indicates mean-rate
    stability of the queues.
    """
    hist = np.asarray(history, dtype=np.float64)
    if hist.ndim == 1:
        hist = hist[:, None]
    t = np.arange(1, hist.shape[0] + 1, dtype=np.float64)
    return hist.mean(axis=1) / t
