"""Command-line front end.

Subcommands: simulate, test-pair, pvalue-matrix, estimate-k, spectrum, mc,
oracle-check. Exit codes: 0 success, 1 usage error, 2 data error,
3 numerical error. Seeded invocations are deterministic end to end.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .estimation import estimate_k
from .graph_io import GraphFormatError, adjacency, load_edge_list, max_degree
from .harness import ExperimentConfig, null_histogram, run_k_accuracy, run_size_power
from .inference import SingularCovarianceError, pvalue_matrix, test_G, test_T
from .estimation import (
    estimate_sigma1,
    estimate_sigma2,
    refine_eigenvalues,
    refined_residual,
    residual_matrix,
)
from .models import (
    build_mean_matrix,
    model1_params,
    model2_params,
    sample_adjacency,
    save_params,
)
from .oracle import ground_truth, true_sigma1, true_sigma2, with_tk
from .spectra import DegenerateNodeError, top_eigenpairs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

FULL_GRID = tuple(round(0.2 + 0.1 * i, 1) for i in range(8))

# experiment presets: (model, n, n0, rho, grid, pair modes to run)
MC_PRESETS = {
    "table1h-model1": dict(model=1, n=1500, n0=300, rho=0.2, grid=FULL_GRID),
    "table1h-model2": dict(model=2, n=1500, n0=300, rho=0.2, grid=FULL_GRID),
    "table1-model1": dict(model=1, n=3000, n0=500, rho=0.2, grid=FULL_GRID),
    "table1-model2": dict(model=2, n=3000, n0=500, rho=0.2, grid=FULL_GRID),
    "table5-model1": dict(model=1, n=3000, n0=500, rho=0.2, grid=FULL_GRID,
                          kind="k_accuracy"),
    "table5-model2": dict(model=2, n=3000, n0=500, rho=0.2, grid=FULL_GRID,
                          kind="k_accuracy"),
    "fig1-model1": dict(model=1, n=3000, n0=500, rho=0.2, grid=(0.9,),
                        kind="null_histogram"),
    "fig1-model2": dict(model=2, n=3000, n0=500, rho=0.2, grid=(0.9,),
                        kind="null_histogram"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="netpairtest",
                     description="Spectral tests for shared community-"
                                 "membership profiles of node pairs")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="sample a network from a model")
    sim.add_argument("--model", type=int, choices=(1, 2), required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--n0", type=int, required=True)
    sim.add_argument("--rho", type=float, default=0.2)
    sim.add_argument("--theta", type=float, help="degree level (model 1)")
    sim.add_argument("--r2", type=float, help="squared degree bound (model 2)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--self-loops", action="store_true")
    sim.add_argument("--out", required=True, help="edge-list output path")
    sim.add_argument("--params-out",
                     help="sidecar parameter file (default: OUT.params)")

    def graph_flags(p):
        p.add_argument("--graph", required=True, help="edge-list file")
        p.add_argument("--one-based", action="store_true",
                       help="node labels in the file (and flags) are 1-based")
        p.add_argument("--self-loops", action="store_true")

    tp = sub.add_parser("test-pair", help="test one node pair")
    graph_flags(tp)
    tp.add_argument("--method", choices=("t", "g"), required=True)
    tp.add_argument("--i", type=int, required=True)
    tp.add_argument("--j", type=int, required=True)
    tp.add_argument("--k", type=int, help="fix the community count")

    pm = sub.add_parser("pvalue-matrix", help="pairwise p-value matrix")
    graph_flags(pm)
    pm.add_argument("--method", choices=("t", "g"), required=True)
    pm.add_argument("--nodes", required=True,
                    help="comma-separated node labels")
    pm.add_argument("--k", type=int)
    pm.add_argument("--out", help="CSV output path (default: stdout)")

    ek = sub.add_parser("estimate-k", help="estimate the community count")
    graph_flags(ek)

    sp = sub.add_parser("spectrum", help="dump leading eigenpairs as CSV")
    graph_flags(sp)
    sp.add_argument("--m", type=int, default=10)
    sp.add_argument("--out", help="CSV output path (default: stdout)")

    mc = sub.add_parser("mc", help="Monte Carlo study from a preset")
    mc.add_argument("--preset", choices=sorted(MC_PRESETS), required=True)
    mc.add_argument("--reps", type=int, default=200)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--alpha", type=float, default=0.05)
    mc.add_argument("--k-mode", choices=("true_k", "estimated_k"),
                    default="true_k")
    mc.add_argument("--out", help="CSV output path (default: stdout)")

    oc = sub.add_parser("oracle-check",
                        help="ground-truth covariance trend metrics")
    oc.add_argument("--model", type=int, choices=(1, 2), default=1)
    oc.add_argument("--signal", type=float, default=0.9,
                    help="theta (model 1) or r^2 (model 2)")
    oc.add_argument("--sizes", default="500,1000,2000")
    oc.add_argument("--reps", type=int, default=20)
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--out", help="CSV output path (default: stdout)")
    return parser


def _load_graph(args):
    indexing = "one_based" if args.one_based else "zero_based"
    g = load_edge_list(args.graph, indexing=indexing,
                       self_loops=args.self_loops)
    return adjacency(g)


def _node(label: int, args) -> int:
    return label - 1 if args.one_based else label


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_simulate(args) -> int:
    if args.model == 1:
        if args.theta is None:
            raise ValueError("--theta is required for model 1")
        params = model1_params(args.n, args.n0, args.rho, args.theta)
    else:
        if args.r2 is None:
            raise ValueError("--r2 is required for model 2")
        params = model2_params(args.n, args.n0, args.rho,
                               float(np.sqrt(args.r2)), args.seed)
    h = build_mean_matrix(params)
    x = sample_adjacency(h, args.seed, args.self_loops)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# netpairtest {__version__} simulate model={args.model} "
                 f"seed={args.seed} n={args.n}\n")
        rows, cols = np.nonzero(np.triu(x, k=0 if args.self_loops else 1))
        for u, v in zip(rows, cols):
            fh.write(f"{u} {v}\n")
    save_params(params, args.params_out or args.out + ".params")
    print(f"wrote {args.out} ({int(x.sum() // 2)} edges)")
    return EXIT_OK


def _cmd_test_pair(args) -> int:
    x = _load_graph(args)
    i, j = _node(args.i, args), _node(args.j, args)
    if i == j:
        raise ValueError("--i and --j must name distinct nodes")
    runner = test_T if args.method == "t" else test_G
    res = runner(x, i, j, k_override=args.k)
    print(f"method {res.method}")
    print(f"statistic {res.statistic:.6f}")
    print(f"df {res.df}")
    print(f"p_value {res.p_value:.6f}")
    print(f"k_used {res.k_used}")
    return EXIT_OK


def _cmd_pvalue_matrix(args) -> int:
    x = _load_graph(args)
    labels = [int(tok) for tok in args.nodes.split(",")]
    nodes = [_node(l, args) for l in labels]
    pv = pvalue_matrix(x, nodes, method=args.method, k_override=args.k)
    lines = ["node," + ",".join(str(l) for l in labels)]
    for label, row in zip(labels, pv.matrix):
        lines.append(str(label) + "," + ",".join(f"{p:.4f}" for p in row))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_estimate_k(args) -> int:
    x = _load_graph(args)
    n = x.shape[0]
    spec = top_eigenpairs(x, min(n, 50))
    est = estimate_k(x, spec)
    print(f"k_hat {est.k_hat}")
    print(f"threshold {est.threshold:.6f}")
    print(f"max_degree {max_degree(x)}")
    print("eigenvalue_magnitudes " +
          ",".join(f"{abs(v):.4f}" for v in est.eigenvalues))
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    x = _load_graph(args)
    spec = top_eigenpairs(x, min(x.shape[0], args.m))
    lines = ["k,d_k," + ",".join(f"v_{l}" for l in range(1, x.shape[0] + 1))]
    for k in range(spec.m):
        entries = ",".join(f"{v:.8g}" for v in spec.vectors[:, k])
        lines.append(f"{k + 1},{spec.values[k]:.8g},{entries}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_mc(args) -> int:
    preset = MC_PRESETS[args.preset]
    kind = preset.get("kind", "size_power")
    header = (f"# netpairtest {__version__} preset={args.preset} "
              f"seed={args.seed} reps={args.reps}\n")
    if kind == "null_histogram":
        cfg = ExperimentConfig(
            model=preset["model"], n=preset["n"], n0=preset["n0"],
            rho=preset["rho"], signal_grid=preset["grid"],
            replications=args.reps, alpha=args.alpha, k_mode=args.k_mode,
            master_seed=args.seed, pair_mode="size")
        out = null_histogram(cfg)
        lines = [header.rstrip(), f"# ks_distance={out['ks_distance']:.6f} "
                                  f"df={out['df']}", "statistic"]
        lines += [f"{s:.8f}" for s in out["samples"]]
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK

    rows = [header.rstrip(),
            "model,n,signal,metric,value,replications,failures"]
    if kind == "k_accuracy":
        cfg = ExperimentConfig(
            model=preset["model"], n=preset["n"], n0=preset["n0"],
            rho=preset["rho"], signal_grid=preset["grid"],
            replications=args.reps, alpha=args.alpha, k_mode="estimated_k",
            master_seed=args.seed, pair_mode="size")
        report = run_k_accuracy(cfg)
        for pt in report.points:
            correct = pt.k_hat_counts.get(3, 0)
            under = sum(c for k, c in pt.k_hat_counts.items() if k <= 3)
            rows.append(f"{cfg.model},{cfg.n},{pt.signal},p_k_correct,"
                        f"{correct / pt.replications:.6f},{pt.replications},0")
            rows.append(f"{cfg.model},{cfg.n},{pt.signal},p_k_at_most,"
                        f"{under / pt.replications:.6f},{pt.replications},0")
    else:
        for pair_mode, metric in (("size", "size"), ("power", "power")):
            cfg = ExperimentConfig(
                model=preset["model"], n=preset["n"], n0=preset["n0"],
                rho=preset["rho"], signal_grid=preset["grid"],
                replications=args.reps, alpha=args.alpha, k_mode=args.k_mode,
                master_seed=args.seed, pair_mode=pair_mode)
            report = run_size_power(cfg)
            for pt in report.points:
                rows.append(f"{cfg.model},{cfg.n},{pt.signal},{metric},"
                            f"{pt.rejection_rate:.6f},{pt.replications},"
                            f"{pt.failures}")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    sizes = [int(tok) for tok in args.sizes.split(",")]
    rows = [f"# netpairtest {__version__} oracle-check model={args.model} "
            f"seed={args.seed}", "n,metric,value"]
    for n in sizes:
        n0 = n // 5
        if args.model == 1:
            params = model1_params(n, n0, 0.2, args.signal)
            scale = n**2 * args.signal
        else:
            params = model2_params(n, n0, 0.2, float(np.sqrt(args.signal)),
                                   args.seed)
            scale = n * float(params.theta.min()) ** 2
        gt = ground_truth(params)
        if args.model == 2:
            gt = with_tk(gt, moment_samples=100, seed=args.seed)
        i, j = 3 * n0, 3 * n0 + 1
        errs = []
        rng = np.random.SeedSequence(entropy=args.seed, spawn_key=(n,))
        for rep_ss in rng.spawn(args.reps):
            x = sample_adjacency(gt.h, np.random.default_rng(rep_ss))
            spec = top_eigenpairs(x, 3)
            w0 = residual_matrix(x, spec, 3)
            rr = refined_residual(x, spec, refine_eigenvalues(spec, w0, 3), 3)
            if args.model == 1:
                s_hat = estimate_sigma1(spec, rr, i, j, 3).matrix
                s_true = true_sigma1(gt, i, j).matrix
            else:
                s_hat = estimate_sigma2(spec, rr, i, j, 3).matrix
                s_true = true_sigma2(gt, i, j).matrix
            errs.append(scale * np.linalg.norm(s_hat - s_true, 2))
        metric = "sigma1_trend" if args.model == 1 else "sigma2_trend"
        rows.append(f"{n},{metric},{float(np.mean(errs)):.6f}")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "test-pair": _cmd_test_pair,
    "pvalue-matrix": _cmd_pvalue_matrix,
    "estimate-k": _cmd_estimate_k,
    "spectrum": _cmd_spectrum,
    "mc": _cmd_mc,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (GraphFormatError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SingularCovarianceError, DegenerateNodeError,
            ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
