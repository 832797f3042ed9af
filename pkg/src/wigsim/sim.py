"""Experiment orchestration: slot loop, strategies, metrics, comparison runs.

A run is deterministic per seed. Channel draws, sub-slot plans, placement,
and weight init all derive from (seed, slot, purpose) counters and never
from the strategy, so strategies compared under the same seed see
identical randomness (paired comparison).
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, fields, replace

import numpy as np

from . import gnn, lyapunov
from .channel import (ChannelConfig, achievable_rate, min_rate,
                      outage_indicator, place_nodes, sample_channel, sinr)
from .errors import ParameterError
from .feasibility import EPS_WEIGHT
from .graphs import directed_links, generate_synthetic, load_graph
from .greedy import SlotOutcome, run_slot, solve_subslot
from .scheduler import decompose

STRATEGIES = ("proposed", "full_power", "ecps", "no_outage")

CSV_HEADER = "slot,n_links,cum_links,mean_queue,energy_total,train_loss,test_acc,strategy,seed"

# RNG stream salts (placement/channel salts live in the channel module).
_SALT_PLAN = 307
_SALT_INIT = 409
_SALT_GRAPH = 17


@dataclass(frozen=True)
class ExperimentConfig:
    # channel / energy
    bandwidth_hz: float = 1e6
    noise_power_w: float = 2e-12
    payload_bits: float = 1e6
    tau_max_s: float = 0.5
    p_max_w: float = 0.5
    energy_budget_j: float = 1.25
    area_side_m: float = 100.0
    d_min_m: float = 1.0
    fixed_distance_m: float | None = None
    pathloss_a: float = 30.6
    pathloss_b: float = 36.7
    # control / training
    v: float = 1e-5
    slots: int = 200
    strategy: str = "proposed"
    lr: float = 0.05
    hidden_dim: int = 16
    eval_with_outage: bool = False
    seed: int = 0
    # graph source: synthetic parameters, or a pair of files
    graph_n: int = 30
    graph_classes: int = 3
    graph_p_in: float = 0.5
    graph_p_out: float = 0.05
    graph_dim: int = 8
    graph_seed: int | None = None
    edge_file: str | None = None
    feature_file: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.slots < 1:
            raise ParameterError(f"slots must be >= 1, got {self.slots}")
        if self.strategy not in STRATEGIES:
            raise ParameterError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.v < 0:
            raise ParameterError(f"v must be >= 0, got {self.v}")
        if bool(self.edge_file) != bool(self.feature_file):
            raise ParameterError("edge_file and feature_file must be given together")
        self.channel_config()   # surface channel parameter errors before slot 0

    def channel_config(self):
        return ChannelConfig(
            bandwidth_hz=self.bandwidth_hz, noise_power_w=self.noise_power_w,
            payload_bits=self.payload_bits, tau_max_s=self.tau_max_s,
            p_max_w=self.p_max_w, energy_budget_j=self.energy_budget_j,
            area_side_m=self.area_side_m, d_min_m=self.d_min_m,
            fixed_distance_m=self.fixed_distance_m,
            pathloss_a=self.pathloss_a, pathloss_b=self.pathloss_b)

    def build_graph(self):
        if self.edge_file:
            return load_graph(self.edge_file, self.feature_file)
        gseed = self.graph_seed if self.graph_seed is not None \
            else [self.seed, _SALT_GRAPH]
        return generate_synthetic(self.graph_n, self.graph_classes,
                                  self.graph_p_in, self.graph_p_out,
                                  self.graph_dim, gseed)


_BOOL_FIELDS = {"eval_with_outage"}
_INT_FIELDS = {"slots", "hidden_dim", "seed", "graph_n", "graph_classes",
               "graph_dim", "graph_seed"}
_STR_FIELDS = {"strategy", "edge_file", "feature_file", "out"}
_OPTIONAL_FIELDS = {"fixed_distance_m", "graph_seed", "edge_file",
                    "feature_file", "out"}


def parse_config_file(path):
    """Plain `key = value` lines with '#' comments -> dict of typed values."""
    names = {f.name for f in fields(ExperimentConfig)}
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in names:
                raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, val, f"{path}:{lineno}")
    return values


def _coerce(key, val, where):
    if key in _OPTIONAL_FIELDS and val.lower() in ("", "none"):
        return None
    try:
        if key in _BOOL_FIELDS:
            if val.lower() in ("true", "1", "yes"):
                return True
            if val.lower() in ("false", "0", "no"):
                return False
            raise ValueError(val)
        if key in _INT_FIELDS:
            return int(val)
        if key in _STR_FIELDS:
            return val
        return float(val)
    except ValueError as exc:
        raise ParameterError(f"{where}: bad value {val!r} for {key}") from exc


def config_from(path=None, **overrides):
    """Config file values overridden by keyword flags."""
    values = parse_config_file(path) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _sig9(x):
    """Round to the CSV's 9 significant digits so rows round-trip exactly."""
    return float(format(float(x), ".9g"))


@dataclass(frozen=True)
class MetricsRow:
    slot: int
    n_links: int
    cum_links: int
    mean_queue: float
    energy_total: float
    train_loss: float
    test_acc: float
    strategy: str
    seed: int


def _row(slot, n_links, cum_links, mean_queue, energy_total, train_loss,
         test_acc, strategy, seed):
    return MetricsRow(slot=slot, n_links=n_links, cum_links=cum_links,
                      mean_queue=_sig9(mean_queue),
                      energy_total=_sig9(energy_total),
                      train_loss=_sig9(train_loss), test_acc=_sig9(test_acc),
                      strategy=strategy, seed=seed)


def write_metrics(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(f"{r.slot},{r.n_links},{r.cum_links},"
                     f"{r.mean_queue:.9g},{r.energy_total:.9g},"
                     f"{r.train_loss:.9g},{r.test_acc:.9g},"
                     f"{r.strategy},{r.seed}\n")


def read_metrics(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ParameterError(f"{path}: unexpected metrics header {header!r}")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != 9:
                continue
            rows.append(MetricsRow(
                slot=int(parts[0]), n_links=int(parts[1]), cum_links=int(parts[2]),
                mean_queue=float(parts[3]), energy_total=float(parts[4]),
                train_loss=float(parts[5]), test_acc=float(parts[6]),
                strategy=parts[7], seed=int(parts[8])))
    return rows


def strategy_full_power(plan, st, cfg, depleted):
    """Everyone transmits at peak power until their total budget is gone.

    Links are activated by the outage test at the resulting SINRs. A failed
    transmission still burns the full delay window (P_max * tau_max); a
    successful one burns P_max * D / C.
    """
    n = st.n
    activated = set()
    energies = np.zeros(n)
    powers = []
    chosen = []
    for group in plan.groups:
        txs = {l.tx for l in group if l.tx not in depleted}
        p = {u: cfg.p_max_w for u in txs}
        kept = []
        for link in group:
            if link.tx not in txs:
                continue
            rate = achievable_rate(sinr(link, p, txs, st), cfg.bandwidth_hz)
            need = min_rate(cfg.payload_of(link.tx), cfg.tau_max_s)
            if outage_indicator(rate, need):
                activated.add(link)
                kept.append(link)
                energies[link.tx] += cfg.p_max_w * cfg.payload_of(link.tx) / rate
            else:
                energies[link.tx] += cfg.p_max_w * cfg.tau_max_s
        powers.append(p)
        chosen.append(tuple(kept))
    return SlotOutcome(activated=frozenset(activated), n_links=len(activated),
                       energies=energies, powers=tuple(powers),
                       chosen=tuple(chosen))


def strategy_ecps(plan, st, cfg, v):
    """Greedy case selection under a hard per-slot energy cap per node.

    The cap enters the LP as the linear surrogate P * tau_max <= remaining
    budget (a tightened power cap); the remaining budget is decremented by
    the true energies of the chosen case after each sub-slot. There are no
    virtual queues; the case objective uses the weight floor for all nodes.
    """
    n = st.n
    remaining = np.full(n, cfg.energy_budget_j)
    flat_weights = np.full(n, EPS_WEIGHT)
    activated = set()
    energies = np.zeros(n)
    powers = []
    chosen = []
    for group in plan.groups:
        caps = np.minimum(cfg.p_max_w,
                          np.maximum(remaining, 0.0) / cfg.tau_max_s)
        case = solve_subslot(group, st, flat_weights, cfg, v, p_caps=caps)
        for u, e in case.solution.energies.items():
            energies[u] += e
            remaining[u] -= e
        activated.update(case.retained)
        powers.append(dict(case.solution.powers))
        chosen.append(case.retained)
    return SlotOutcome(activated=frozenset(activated), n_links=len(activated),
                       energies=energies, powers=tuple(powers),
                       chosen=tuple(chosen))


def _no_outage_outcome(links, n):
    return SlotOutcome(activated=frozenset(links), n_links=len(links),
                       energies=np.zeros(n), powers=(), chosen=())


def run_experiment(cfg):
    """One full experiment; returns one MetricsRow per slot."""
    g = cfg.build_graph()
    ch = cfg.channel_config()
    links = directed_links(g)
    positions = place_nodes(g.n, ch, cfg.seed)
    model = gnn.init_model(g.features.shape[1], cfg.hidden_dim, g.n_classes,
                           [cfg.seed, _SALT_INIT])
    full_agg = gnn.full_aggregator(g)

    budgets = np.full(g.n, ch.energy_budget_j)
    total_budget = budgets * cfg.slots
    z = lyapunov.initial_queues(g.n)
    cum_energy = np.zeros(g.n)
    cum_links = 0
    rows = []

    for t in range(cfg.slots):
        st = sample_channel(positions, t, ch, cfg.seed)
        plan = decompose(links, [cfg.seed, _SALT_PLAN, t])

        if cfg.strategy == "proposed":
            outcome = run_slot(plan, st, z, ch, cfg.v)
            z = lyapunov.update_queues(z, outcome.energies, budgets)
        elif cfg.strategy == "full_power":
            depleted = {u for u in range(g.n) if cum_energy[u] > total_budget[u]}
            outcome = strategy_full_power(plan, st, ch, depleted)
        elif cfg.strategy == "ecps":
            outcome = strategy_ecps(plan, st, ch, cfg.v)
        else:
            outcome = _no_outage_outcome(links, g.n)
        cum_energy += outcome.energies
        cum_links += outcome.n_links

        agg = gnn.build_aggregator(g, outcome.activated)
        loss, grads = gnn.loss_and_grad(model, g, agg, g.train_mask)
        model = gnn.train_step(model, grads, cfg.lr)
        eval_agg = agg if cfg.eval_with_outage else full_agg
        acc = gnn.evaluate(model, g, eval_agg, g.test_mask)

        rows.append(_row(slot=t, n_links=outcome.n_links, cum_links=cum_links,
                         mean_queue=float(z.mean()),
                         energy_total=float(outcome.energies.sum()),
                         train_loss=loss, test_acc=acc,
                         strategy=cfg.strategy, seed=cfg.seed))
    return rows


def worker_count():
    """Parallelism cap from WIGSIM_THREADS (0 or unset = auto)."""
    raw = os.environ.get("WIGSIM_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    return os.cpu_count() or 1 if k <= 0 else k


def run_matrix(base_cfg, strategies, seeds):
    """Run a (strategy, seed) grid, merged in deterministic order.

    Independent experiments run in parallel processes up to worker_count().
    """
    cfgs = [replace(base_cfg, strategy=s, seed=seed)
            for s in strategies for seed in seeds]
    workers = min(worker_count(), len(cfgs))
    if workers <= 1:
        results = [run_experiment(c) for c in cfgs]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_experiment, cfgs))
    rows = []
    for chunk in results:
        rows.extend(chunk)
    return rows
