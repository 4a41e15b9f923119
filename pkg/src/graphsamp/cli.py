"""Command-line interface.

Subcommands: ``gen-data``, ``learn``, ``sample``, ``reconstruct``, ``bench``.
Each writes its outputs atomically and prints a one-line JSON summary to
stdout.  Exit codes: 0 success, 1 usage/input errors, 2 numerical or
module-level failures.  All randomness flows from explicit ``--seed`` flags.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .bench import (
    ExperimentConfig,
    run_experiment,
    write_results_csv,
    write_series_csvs,
    write_summary_csv,
    write_svg_charts,
    write_timings_csv,
)
from .errors import GraphSampError, ValidationError
from .graphlearn import LearnConfig, learn_cgl, learn_ddgl
from .reconstruct import ReconstructionProblem, gamma_from_mu, glr_reconstruct
from .rng import derive_seed
from .sampler import (
    greedy_doptimal,
    random_select_bernoulli,
    random_select_fixed,
    vis_select,
    visr_select,
)
from .synthdata import add_noise, generate_layout, gp_covariance, sample_gaussian_signals


class UsageError(Exception):
    """Bad command line; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _cmd_gen_data(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    layout = generate_layout(args.n, args.seed)
    cov = gp_covariance(layout, args.r, args.variance)
    train = sample_gaussian_signals(cov, args.num_train, derive_seed(args.seed, 1))
    test = sample_gaussian_signals(cov, args.num_test, derive_seed(args.seed, 2))
    noisy = add_noise(test, args.sigma, derive_seed(args.seed, 3))
    files = {
        "layout": out / "layout.json",
        "covariance": out / "covariance.csv",
        "train_signals": out / "train_signals.csv",
        "test_signals": out / "test_signals.csv",
        "test_signals_noisy": out / "test_signals_noisy.csv",
    }
    io.write_layout_json(files["layout"], layout)
    io.write_matrix_csv(files["covariance"], cov)
    io.write_signals_csv(files["train_signals"], train.signals)
    io.write_signals_csv(files["test_signals"], test.signals)
    io.write_signals_csv(files["test_signals_noisy"], noisy.signals)
    return {"cmd": "gen-data", "n": args.n, "outputs": [str(p) for p in files.values()]}


def _cmd_learn(args):
    cov = io.read_matrix_csv(args.cov)
    cfg = LearnConfig(max_sweeps=args.max_sweeps, obj_tol=args.tol)
    fit = learn_cgl if args.model == "cgl" else learn_ddgl
    model, trace = fit(cov, cfg)
    io.write_graph_json(args.out, model)
    return {
        "cmd": "learn",
        "model": args.model,
        "objective": trace.objective_per_sweep[-1],
        "sweeps": trace.sweeps_used,
        "converged": trace.converged,
        "edges": int(np.count_nonzero(model.adjacency) // 2),
        "outputs": [args.out],
    }


def _cmd_sample(args):
    model = io.read_graph_json(args.graph)
    gamma = args.gamma if args.gamma is not None else gamma_from_mu(args.mu)
    if args.method == "greedy":
        sset = greedy_doptimal(model.operator(model.vertex_importance is not None), args.k, gamma)
    elif args.method == "vis":
        sset = vis_select(model, args.k)
    elif args.method == "visr":
        sset = visr_select(model, args.k, p=args.p)
    elif args.method == "random":
        sset = random_select_fixed(model.n, args.k, args.seed)
    else:  # bernoulli
        prob = args.prob if args.prob is not None else 1.0 / model.n
        sset = random_select_bernoulli(model.n, prob, args.seed)
    io.write_set_json(args.out, sset)
    return {
        "cmd": "sample",
        "method": args.method,
        "size": len(sset),
        "indices": [int(i) for i in sset.indices],
        "outputs": [args.out],
    }


def _cmd_reconstruct(args):
    model = io.read_graph_json(args.graph)
    sset = io.read_set_json(args.set)
    operator = model.operator(args.use_q == "true")
    signals = io.read_signals_csv(args.signals)
    k = len(sset)
    if signals.shape[1] == model.n:
        observations = signals[:, sset.indices]
    elif signals.shape[1] == k:
        observations = signals
    else:
        raise ValidationError(
            f"signals have {signals.shape[1]} columns; expected {model.n} (full) or {k} (sampled)"
        )
    recon = np.empty((signals.shape[0], model.n))
    for row in range(observations.shape[0]):
        problem = ReconstructionProblem(
            omega=operator, sampling_set=sset, mu=args.mu, observations=observations[row]
        )
        recon[row] = glr_reconstruct(problem)
    io.write_signals_csv(args.out, recon)
    return {
        "cmd": "reconstruct",
        "signals": int(recon.shape[0]),
        "use_q": args.use_q == "true",
        "outputs": [args.out],
    }


def _cmd_bench(args):
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_dict(json.load(fh))
    else:
        cfg = ExperimentConfig()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    result = run_experiment(cfg, jobs=args.jobs)
    files = [out / "results.csv", out / "timings.csv", out / "summary.csv"]
    write_results_csv(result, files[0])
    write_timings_csv(result, files[1])
    write_summary_csv(result, files[2])
    files += write_series_csvs(result, out)
    if args.emit_svg:
        files += write_svg_charts(result, out)
    run_meta = dict(result.metadata)
    run_meta["started_at_unix"] = started
    run_meta["elapsed_s"] = time.time() - started
    meta_path = out / "run_summary.json"
    io.atomic_write_text(meta_path, json.dumps(run_meta, indent=2) + "\n")
    files.append(meta_path)
    return {
        "cmd": "bench",
        "cells": len(result.rows),
        "config_hash": result.metadata["config_hash"],
        "outputs": [str(p) for p in files],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphsamp", description=__doc__)
    parser.add_argument("--version", action="version", version=f"graphsamp {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen-data", help="generate synthetic layout, covariance and signals")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--r", type=float, default=0.02)
    p.add_argument("--variance", type=float, default=10.0)
    p.add_argument("--num-train", type=int, default=1000)
    p.add_argument("--num-test", type=int, default=100)
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("learn", help="learn a graph from a covariance CSV")
    p.add_argument("--cov", required=True)
    p.add_argument("--model", choices=("cgl", "ddgl"), required=True)
    p.add_argument("--max-sweeps", type=int, default=LearnConfig.max_sweeps)
    p.add_argument("--tol", type=float, default=LearnConfig.obj_tol)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("sample", help="select a sampling set from a graph JSON")
    p.add_argument("--graph", required=True)
    p.add_argument("--method", choices=("greedy", "vis", "visr", "random", "bernoulli"), required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--gamma", type=float, default=None, help="default: 2*mu - mu^2")
    p.add_argument("--mu", type=float, default=0.01)
    p.add_argument("--p", type=int, default=None, help="repulsion hop count override")
    p.add_argument("--prob", type=float, default=None, help="bernoulli inclusion probability (default 1/N)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("reconstruct", help="reconstruct sampled signals")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--signals", required=True)
    p.add_argument("--mu", type=float, default=0.01)
    p.add_argument("--use-q", choices=("true", "false"), default="false")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("bench", help="run the full sampling/reconstruction benchmark")
    p.add_argument("--config", default=None, help="ExperimentConfig JSON (default: built-in)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--emit-svg", action="store_true")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        summary = args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except GraphSampError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
