"""Command-line entry point.

Subcommands: run one experiment, compare strategies over seeds, generate
synthetic graph files, exercise the brute-force oracles, and render report
figures from a metrics CSV. Exit codes: 0 success, 1 runtime failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bruteforce, report, sim
from .channel import sample_channel
from .errors import IngestionError, ParameterError, SolverError
from .graphs import DirectedLink, generate_synthetic, save_graph


def _add_run_flags(p):
    p.add_argument("--config", help="config file of key = value lines")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--slots", type=int, default=None)
    p.add_argument("--v", type=float, default=None)
    p.add_argument("--out", default=None, help="metrics CSV path")


def build_parser():
    parser = argparse.ArgumentParser(prog="wigsim")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="run one experiment")
    _add_run_flags(p_run)
    p_run.add_argument("--strategy", choices=sim.STRATEGIES, default=None)
    p_run.add_argument("--plots", default=None,
                       help="directory for report figures rendered after the run")

    p_cmp = subs.add_parser("compare", help="run strategies over a seed list")
    _add_run_flags(p_cmp)
    p_cmp.add_argument("--seeds", type=int, default=5,
                       help="number of seeds (0..N-1)")
    p_cmp.add_argument("--strategies", nargs="+", choices=sim.STRATEGIES,
                       default=["proposed", "full_power", "ecps"])
    p_cmp.add_argument("--plots", default=None,
                       help="directory for report figures rendered after the runs")

    p_gen = subs.add_parser("gen-data", help="write synthetic graph files")
    p_gen.add_argument("--n", type=int, default=30)
    p_gen.add_argument("--classes", type=int, default=3)
    p_gen.add_argument("--p-in", type=float, default=0.5)
    p_gen.add_argument("--p-out", type=float, default=0.05)
    p_gen.add_argument("--dim", type=int, default=8)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--edge-out", default="edges.txt")
    p_gen.add_argument("--feature-out", default="features.txt")

    p_orc = subs.add_parser("oracle", help="brute-force oracles on random instances")
    p_orc.add_argument("--kind", choices=("feasibility", "subset"),
                       default="feasibility")
    p_orc.add_argument("--instances", type=int, default=20)
    p_orc.add_argument("--max-links", type=int, default=3)
    p_orc.add_argument("--seed", type=int, default=0)

    p_rep = subs.add_parser("report", help="render figures from a metrics CSV")
    p_rep.add_argument("--metrics", required=True)
    p_rep.add_argument("--out-dir", default=None,
                       help="defaults to the CSV's directory")
    return parser


def _random_small_instance(rng, max_links, cfg):
    """Node-disjoint links with synthetic fading for oracle checks."""
    n_links = int(rng.integers(1, max_links + 1))
    links = [DirectedLink(2 * i, 2 * i + 1) for i in range(n_links)]
    g = generate_synthetic(max(2 * n_links, 2), 2, 1.0, 1.0, 2,
                           int(rng.integers(1 << 30)))
    positions = rng.uniform(0, cfg.area_side_m, size=(g.n, 2))
    st = sample_channel(positions, 0, cfg, int(rng.integers(1 << 30)))
    return links, st


def _cmd_run(args):
    cfg = sim.config_from(args.config, seed=args.seed, slots=args.slots,
                          v=args.v, strategy=args.strategy, out=args.out)
    rows = sim.run_experiment(cfg)
    out = cfg.out or "metrics.csv"
    sim.write_metrics(out, rows)
    print(f"wrote {len(rows)} rows to {out}")
    if args.plots:
        for p in report.render_report(rows, args.plots):
            print(f"wrote {p}")
    return 0


def _cmd_compare(args):
    cfg = sim.config_from(args.config, slots=args.slots, v=args.v, out=args.out)
    rows = sim.run_matrix(cfg, args.strategies, list(range(args.seeds)))
    out = cfg.out or "compare.csv"
    sim.write_metrics(out, rows)
    print(f"wrote {len(rows)} rows to {out} "
          f"({len(args.strategies)} strategies x {args.seeds} seeds)")
    if args.plots:
        for p in report.render_report(rows, args.plots):
            print(f"wrote {p}")
    return 0


def _cmd_gen_data(args):
    g = generate_synthetic(args.n, args.classes, args.p_in, args.p_out,
                           args.dim, args.seed)
    save_graph(g, args.edge_out, args.feature_out)
    print(f"wrote {args.edge_out} and {args.feature_out} "
          f"(n={g.n}, edges={int(g.adjacency.sum()) // 2})")
    return 0


def _cmd_oracle(args):
    rng = np.random.default_rng(args.seed)
    cfg = sim.ExperimentConfig().channel_config()
    if args.kind == "feasibility":
        print("instance,links,solver,grid,boundary,margin")
        from .feasibility import build_instance, solve_feasibility
        for i in range(args.instances):
            links, st = _random_small_instance(rng, min(args.max_links, 3), cfg)
            inst = build_instance(links, st, cfg)
            sol = solve_feasibility(inst)
            verdict = bruteforce.grid_feasibility(inst)
            print(f"{i},{len(links)},{int(sol.feasible)},{int(verdict.feasible)},"
                  f"{int(verdict.near_boundary)},{verdict.best_margin:.3e}")
    else:
        print("instance,links,greedy_objective,subset_objective,gap")
        from .greedy import solve_subslot
        for i in range(args.instances):
            links, st = _random_small_instance(rng, min(args.max_links, 4), cfg)
            z = rng.uniform(0, 2, size=st.n)
            case = solve_subslot(links, st, z, cfg, v=1e-5)
            best_obj, _ = bruteforce.best_subset(links, st, z, cfg, v=1e-5)
            print(f"{i},{len(links)},{case.objective:.9e},{best_obj:.9e},"
                  f"{case.objective - best_obj:.3e}")
    return 0


def _cmd_report(args):
    rows = sim.read_metrics(args.metrics)
    out_dir = args.out_dir or (os.path.dirname(os.path.abspath(args.metrics)))
    stem = os.path.splitext(os.path.basename(args.metrics))[0]
    for p in report.render_report(rows, out_dir, stem=stem):
        print(f"wrote {p}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "compare": _cmd_compare,
    "gen-data": _cmd_gen_data,
    "oracle": _cmd_oracle,
    "report": _cmd_report,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, IngestionError, SolverError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
