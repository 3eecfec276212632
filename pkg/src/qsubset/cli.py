"""Command-line harness for the simulation experiments.

Five subcommands: ``tune`` (accuracy over the schedule parameter),
``select`` (search quality against single-run Grover references),
``compare`` (classical baselines on synthetic designs), ``theory``
(scaling and distribution checks), and ``run`` (one selection on a CSV
file). Every run is reproducible from its flags: row seeds derive from
(--seed, experiment, scenario, replication), so outputs are byte-stable
across reruns and thread counts.

Exit codes: 0 success, 2 usage error, 3 data error, 4 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import exhaustive_bss, forward_stepwise, fp_fn, lasso_cv, refit_beta, rte
from .datagen import SimScenario, gen_linear, load_csv
from .errors import (
    ConditionViolated,
    DataError,
    DegenerateSignal,
    DimensionTooLarge,
    NoConvergence,
)
from .hybrid import HybridConfig, select_minimum
from .qas import QasConfig
from .qsim import default_n_ops, grover_search
from .regress import SubsetIndex, build_loss_table, ols_fit, pred_error
from .theory import (
    chain_check,
    iteration_scaling,
    success_identity_check,
    success_sampled_check,
    update_cost_sweep,
)
from .util import derived_seed, substream

EXPERIMENT_IDS = {"tune": 1, "select": 2, "compare": 3, "theory": 4, "run": 5}

TUNE_COLUMNS = ["experiment", "k", "lambda", "rep", "seed", "success"]
METRICS_COLUMNS = [
    "experiment",
    "sparsity",
    "rho",
    "snr",
    "method",
    "rep",
    "seed",
    "fp",
    "fn",
    "rte",
    "subset_bitmask",
    "size",
    "grover_ops",
    "wall_time_ms",
]
THEORY_COLUMNS = ["experiment", "check", "d", "param", "stat", "value"]
RUN_COLUMNS = [
    "experiment",
    "method",
    "seed",
    "subset_bitmask",
    "size",
    "test_mse",
    "selected",
]


def _parallel(fn, tasks, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def _write_meta(path: Path, command: str, flags: dict, extra: dict) -> None:
    meta = {
        "command": command,
        "version": __version__,
        "flags": flags,
        **extra,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _timed(enabled: bool, fn):
    """Run fn(); return (result, milliseconds or None)."""
    if not enabled:
        return fn(), None
    start = time.perf_counter()
    result = fn()
    return result, round((time.perf_counter() - start) * 1e3, 3)


# ---------------------------------------------------------------- tune


def run_tune(
    d: int = 32,
    k_list=(1, 3, 5),
    lambdas=None,
    reps: int = 200,
    seed: int = 0,
    stop_constant: float = 3.0,
    threads: int = 1,
):
    """Accuracy of the voting search over a schedule-parameter grid.

    Every replication draws one shared table of iid uniform losses, and
    all node counts reuse the same node streams, so accuracies at
    different k are paired within a replication.
    """
    if lambdas is None:
        lambdas = [round(40 + i) / 100 for i in range(21)]
    k_list = [int(k) for k in k_list]
    exp_id = EXPERIMENT_IDS["tune"]

    def one(task):
        lam_idx, lam, rep = task
        rep_seed = derived_seed(seed, exp_id, lam_idx, rep)
        losses = np.random.default_rng(rep_seed).random(d)
        best = int(np.argmin(losses))
        rows = []
        for k in k_list:
            config = HybridConfig(
                n_nodes=k,
                qas=QasConfig(learning_rate=lam, stop_constant=stop_constant),
                master_seed=rep_seed,
            )
            vote = select_minimum(losses, config)
            rows.append(
                {
                    "experiment": "tune",
                    "k": k,
                    "lambda": lam,
                    "rep": rep,
                    "seed": rep_seed,
                    "success": vote.winner == best,
                }
            )
        return rows

    tasks = [
        (lam_idx, lam, rep)
        for lam_idx, lam in enumerate(lambdas)
        for rep in range(reps)
    ]
    rows = [r for chunk in _parallel(one, tasks, threads) for r in chunk]

    summary = []
    for k in k_list:
        for lam in lambdas:
            hits = [
                r["success"] for r in rows if r["k"] == k and r["lambda"] == lam
            ]
            summary.append(
                {
                    "k": k,
                    "lambda": lam,
                    "reps": len(hits),
                    "accuracy": float(np.mean(hits)),
                }
            )
    return rows, summary


def cmd_tune(args) -> int:
    lambdas = _lambda_grid(args.lambda_min, args.lambda_max, args.lambda_step)
    started = time.perf_counter()
    rows, summary = run_tune(
        d=args.d,
        k_list=args.k_list,
        lambdas=lambdas,
        reps=args.reps,
        seed=args.seed,
        stop_constant=args.stop_constant,
        threads=args.threads,
    )
    out = Path(args.out)
    _write_csv(out / "tune.csv", TUNE_COLUMNS, rows)
    _write_csv(out / "tune_summary.csv", ["k", "lambda", "reps", "accuracy"], summary)
    _write_meta(
        out / "tune.meta.json",
        "tune",
        _flags(args),
        {"rows": len(rows), "elapsed_ms": round((time.perf_counter() - started) * 1e3, 1)},
    )
    best = max(summary, key=lambda r: (r["accuracy"], -r["k"]))
    print(f"tune: wrote {len(rows)} rows to {out / 'tune.csv'}")
    print(
        f"tune: best cell k={best['k']} lambda={best['lambda']} "
        f"accuracy={best['accuracy']:.3f}"
    )
    return 0


# ---------------------------------------------------------------- select


def run_select(
    n: int = 100,
    p: int = 7,
    s: int = 4,
    rho_list=(0.25, 0.5),
    snr_list=(0.5, 1.0, 2.0, 3.0),
    sparsity: str = "strong",
    k: int = 3,
    lam: float = 0.55,
    stop_constant: float = 3.0,
    n_test: int = 2000,
    reps: int = 200,
    seed: int = 0,
    threads: int = 1,
    timings: bool = False,
):
    """Voting search against one-shot amplified references, per scenario.

    The oracle reference marks the table argmin and runs a single
    amplification; the random reference marks a uniformly drawn subset
    instead. Both consume the standard ceil(pi sqrt(D)/4) operations.

    The held-out sample is large by default so the prediction loss ranks
    subsets by population error rather than by test-set noise.
    """
    exp_id = EXPERIMENT_IDS["select"]
    scenarios = [(rho, snr) for rho in rho_list for snr in snr_list]
    dim = 1 << p
    truth = SubsetIndex((1 << s) - 1, p)

    def one(task):
        scen_idx, rep = task
        rho, snr = scenarios[scen_idx]
        rep_seed = derived_seed(seed, exp_id, scen_idx, rep)
        sample = gen_linear(
            SimScenario(
                n=n, p=p, s=s, rho=rho, snr=snr,
                sparsity_kind=sparsity, n_test=n_test, seed=rep_seed,
            )
        )
        table = build_loss_table(sample.train, sample.test)
        n_ops = default_n_ops(dim)

        def qas_run():
            config = HybridConfig(
                n_nodes=k,
                qas=QasConfig(learning_rate=lam, stop_constant=stop_constant),
                master_seed=rep_seed,
            )
            vote = select_minimum(table, config)
            return vote.winner, vote.grover_ops_total

        def oracle_run():
            target = exhaustive_bss(table)
            return grover_search(dim, target, n_ops, substream(rep_seed, 1)), n_ops

        def random_run():
            rng = substream(rep_seed, 2)
            target = int(rng.integers(dim))
            return grover_search(dim, target, n_ops, rng), n_ops

        rows = []
        for method, fn in (
            ("qas", qas_run),
            ("grover_oracle", oracle_run),
            ("grover_random", random_run),
        ):
            (selected, ops), ms = _timed(timings, fn)
            subset = SubsetIndex(selected, p)
            beta = refit_beta(sample.train, subset)
            false_pos, false_neg = fp_fn(subset, truth)
            rows.append(
                {
                    "experiment": "select",
                    "sparsity": sparsity,
                    "rho": rho,
                    "snr": snr,
                    "method": method,
                    "rep": rep,
                    "seed": rep_seed,
                    "fp": false_pos,
                    "fn": false_neg,
                    "rte": rte(beta, sample.beta_star, sample.cov, sample.noise_var),
                    "subset_bitmask": selected,
                    "size": subset.size(),
                    "grover_ops": ops,
                    "wall_time_ms": ms,
                }
            )
        return rows

    tasks = [(si, rep) for si in range(len(scenarios)) for rep in range(reps)]
    return [r for chunk in _parallel(one, tasks, threads) for r in chunk]


def cmd_select(args) -> int:
    started = time.perf_counter()
    rows = run_select(
        n=args.n,
        p=args.p,
        s=args.s,
        rho_list=args.rho_list,
        snr_list=args.snr_list,
        sparsity=args.sparsity,
        k=args.k,
        lam=getattr(args, "lambda"),
        stop_constant=args.stop_constant,
        n_test=args.n_test,
        reps=args.reps,
        seed=args.seed,
        threads=args.threads,
        timings=args.timings,
    )
    out = Path(args.out)
    _write_csv(out / "metrics.csv", METRICS_COLUMNS, rows)
    _write_meta(
        out / "select.meta.json",
        "select",
        _flags(args),
        {"rows": len(rows), "elapsed_ms": round((time.perf_counter() - started) * 1e3, 1)},
    )
    for method in ("qas", "grover_oracle", "grover_random"):
        sub = [r for r in rows if r["method"] == method]
        med = float(np.median([r["fp"] + r["fn"] for r in sub]))
        print(f"select: {method} median FP+FN = {med:g} over {len(sub)} rows")
    print(f"select: wrote {len(rows)} rows to {out / 'metrics.csv'}")
    return 0


# ---------------------------------------------------------------- compare


def run_compare(
    n: int = 100,
    p: int = 10,
    s: int = 5,
    rho_list=(0.25, 0.5),
    snr_list=(0.5, 1.0, 2.0, 3.0),
    sparsity_kinds=("strong", "weak"),
    k: int = 5,
    lam: float = 0.5,
    stop_constant: float = 3.0,
    n_test: int | None = None,
    reps: int = 100,
    seed: int = 0,
    threads: int = 1,
    timings: bool = False,
):
    """Voting search against exhaustive scan, stepwise, and the L1 path."""
    exp_id = EXPERIMENT_IDS["compare"]
    scenarios = [
        (kind, rho, snr)
        for kind in sparsity_kinds
        for rho in rho_list
        for snr in snr_list
    ]

    def one(task):
        scen_idx, rep = task
        kind, rho, snr = scenarios[scen_idx]
        rep_seed = derived_seed(seed, exp_id, scen_idx, rep)
        sample = gen_linear(
            SimScenario(
                n=n, p=p, s=s, rho=rho, snr=snr,
                sparsity_kind=kind, n_test=n_test, seed=rep_seed,
            )
        )
        truth = SubsetIndex((1 << s) - 1, p)
        table = build_loss_table(sample.train, sample.test)

        def qas_run():
            config = HybridConfig(
                n_nodes=k,
                qas=QasConfig(learning_rate=lam, stop_constant=stop_constant),
                master_seed=rep_seed,
            )
            vote = select_minimum(table, config)
            subset = SubsetIndex(vote.winner, p)
            return subset, refit_beta(sample.train, subset), vote.grover_ops_total

        def bss_run():
            subset = SubsetIndex(exhaustive_bss(table), p)
            return subset, refit_beta(sample.train, subset), 0

        def stepwise_run():
            subset = forward_stepwise(sample.train, sample.test)
            return subset, refit_beta(sample.train, subset), 0

        def lasso_run():
            fit = lasso_cv(sample.train, rng=substream(rep_seed, 3))
            return fit.subset, fit.beta, 0

        rows = []
        for method, fn in (
            ("qas", qas_run),
            ("bss", bss_run),
            ("stepwise", stepwise_run),
            ("lasso", lasso_run),
        ):
            (subset, beta, ops), ms = _timed(timings, fn)
            false_pos, false_neg = fp_fn(subset, truth)
            rows.append(
                {
                    "experiment": "compare",
                    "sparsity": kind,
                    "rho": rho,
                    "snr": snr,
                    "method": method,
                    "rep": rep,
                    "seed": rep_seed,
                    "fp": false_pos,
                    "fn": false_neg,
                    "rte": rte(beta, sample.beta_star, sample.cov, sample.noise_var),
                    "subset_bitmask": subset.value,
                    "size": subset.size(),
                    "grover_ops": ops,
                    "wall_time_ms": ms,
                }
            )
        return rows

    tasks = [(si, rep) for si in range(len(scenarios)) for rep in range(reps)]
    return [r for chunk in _parallel(one, tasks, threads) for r in chunk]


def cmd_compare(args) -> int:
    if args.sparsity == "both":
        kinds = ("strong", "weak")
    else:
        kinds = (args.sparsity,)
    started = time.perf_counter()
    rows = run_compare(
        n=args.n,
        p=args.p,
        s=args.s,
        rho_list=args.rho_list,
        snr_list=args.snr_list,
        sparsity_kinds=kinds,
        k=args.k,
        lam=getattr(args, "lambda"),
        stop_constant=args.stop_constant,
        n_test=args.n_test,
        reps=args.reps,
        seed=args.seed,
        threads=args.threads,
        timings=args.timings,
    )
    out = Path(args.out)
    _write_csv(out / "metrics.csv", METRICS_COLUMNS, rows)
    _write_meta(
        out / "compare.meta.json",
        "compare",
        _flags(args),
        {"rows": len(rows), "elapsed_ms": round((time.perf_counter() - started) * 1e3, 1)},
    )
    for method in ("qas", "bss", "stepwise", "lasso"):
        sub = [r for r in rows if r["method"] == method]
        mean_rte = float(np.mean([r["rte"] for r in sub]))
        mean_size = float(np.mean([r["size"] for r in sub]))
        print(
            f"compare: {method} mean RTE = {mean_rte:.3f}, "
            f"mean size = {mean_size:.2f} over {len(sub)} rows"
        )
    print(f"compare: wrote {len(rows)} rows to {out / 'metrics.csv'}")
    return 0


# ---------------------------------------------------------------- theory


def run_theory(
    d_list=(16, 32, 64, 128, 256, 512, 1024, 2048, 4096),
    runs: int = 500,
    cost_d_list=(64, 256, 1024),
    trials: int = 2000,
    chain_d_list=(2, 8, 32),
    chain_reps: int = 20_000,
    sample_reps: int = 20_000,
    lam: float = 0.52,
    seed: int = 0,
    threads: int = 1,
):
    """All four scaling and distribution checks as flat result rows."""
    exp_id = EXPERIMENT_IDS["theory"]
    config = QasConfig(learning_rate=lam)
    rows = []

    def add(check, d, param, stat, value):
        rows.append(
            {
                "experiment": "theory",
                "check": check,
                "d": d,
                "param": param,
                "stat": stat,
                "value": value,
            }
        )

    scaling_chunks = _parallel(
        lambda item: iteration_scaling(
            [item[1]], runs, config, derived_seed(seed, exp_id, 0, item[0])
        ),
        list(enumerate(d_list)),
        threads,
    )
    for rec in (rec for chunk in scaling_chunks for rec in chunk):
        for stat in ("mean", "median", "q90", "q90_over_log2"):
            add("iteration_scaling", rec["d"], "", stat, rec[stat])

    cost_chunks = _parallel(
        lambda item: update_cost_sweep(
            [item[1]],
            trials=trials,
            config=config,
            seed=derived_seed(seed, exp_id, 1, item[0]),
        ),
        list(enumerate(cost_d_list)),
        threads,
    )
    for rec in (rec for chunk in cost_chunks for rec in chunk):
        add("update_cost", rec["d"], rec["rank"], "mean_ops", rec["mean_ops"])
        add("update_cost", rec["d"], rec["rank"], "ratio_to_sqrt", rec["ratio"])

    for di, d in enumerate(chain_d_list):
        rec = chain_check(int(d), chain_reps, derived_seed(seed, exp_id, 2, di))
        add("descent_chain", rec["d"], "", "tv_distance", rec["tv_distance"])
        add(
            "descent_chain",
            rec["d"],
            "",
            "p_first_draw_minimum",
            rec["p_first_draw_minimum"],
        )
        add("descent_chain", rec["d"], "", "p_first_draw_exact", 1.0 / (int(d) + 1))

    identity = success_identity_check()
    add("avg_success", 0, "", "max_abs_diff", identity["max_abs_diff"])
    add(
        "avg_success",
        0,
        "",
        "min_margin_over_quarter",
        identity["min_margin_over_quarter"],
    )
    sampled = success_sampled_check(reps=sample_reps, seed=derived_seed(seed, exp_id, 3))
    add("avg_success", sampled["dim"], sampled["n_marked"], "sampled_abs_error", sampled["abs_error"])
    add("avg_success", sampled["dim"], sampled["n_marked"], "sampled_mc_sigma", sampled["mc_sigma"])
    return rows


def cmd_theory(args) -> int:
    started = time.perf_counter()
    rows = run_theory(
        d_list=args.d_list,
        runs=args.runs,
        cost_d_list=args.cost_d_list,
        trials=args.trials,
        chain_d_list=args.chain_d_list,
        chain_reps=args.chain_reps,
        sample_reps=args.sample_reps,
        lam=getattr(args, "lambda"),
        seed=args.seed,
        threads=args.threads,
    )
    out = Path(args.out)
    _write_csv(out / "theory.csv", THEORY_COLUMNS, rows)
    _write_meta(
        out / "theory.meta.json",
        "theory",
        _flags(args),
        {"rows": len(rows), "elapsed_ms": round((time.perf_counter() - started) * 1e3, 1)},
    )
    ratios = [
        r["value"]
        for r in rows
        if r["check"] == "iteration_scaling" and r["stat"] == "q90_over_log2"
    ]
    if ratios:
        print(
            f"theory: q90 iterations / log2(d) ranges "
            f"{min(ratios):.2f} .. {max(ratios):.2f}"
        )
    print(f"theory: wrote {len(rows)} rows to {out / 'theory.csv'}")
    return 0


# ---------------------------------------------------------------- run


def run_data_file(
    data,
    response: str,
    method: str = "qas",
    drop=(),
    split: float = 0.8,
    k: int = 5,
    lam: float = 0.5,
    stop_constant: float = 3.0,
    seed: int = 0,
):
    """One selection on a CSV file; returns the result row."""
    train, test = load_csv(data, response, split=split, seed=seed, drop=tuple(drop))
    p = train.p
    if method == "qas":
        table = build_loss_table(train, test)
        config = HybridConfig(
            n_nodes=k,
            qas=QasConfig(learning_rate=lam, stop_constant=stop_constant),
            master_seed=seed,
        )
        vote = select_minimum(table, config)
        subset = SubsetIndex(vote.winner, p)
        test_mse = pred_error(train, test, subset)
    elif method == "bss":
        table = build_loss_table(train, test)
        subset = SubsetIndex(exhaustive_bss(table), p)
        test_mse = pred_error(train, test, subset)
    elif method == "stepwise":
        subset = forward_stepwise(train, test)
        test_mse = pred_error(train, test, subset)
    elif method == "lasso":
        fit = lasso_cv(train, rng=substream(seed, 3))
        subset = fit.subset
        resid = test.y - test.X @ fit.beta
        test_mse = float(np.mean(resid**2))
    else:
        raise ValueError(f"unknown method {method!r}")

    names = train.column_names or tuple(f"x{j}" for j in range(p))
    selected_names = [names[j] for j in subset.indices()]
    return {
        "experiment": "run",
        "method": method,
        "seed": seed,
        "subset_bitmask": subset.value,
        "size": subset.size(),
        "test_mse": test_mse,
        "selected": ";".join(selected_names),
    }


def cmd_run(args) -> int:
    started = time.perf_counter()
    row = run_data_file(
        data=args.data,
        response=args.response,
        method=args.method,
        drop=args.drop,
        split=args.split,
        k=args.k,
        lam=getattr(args, "lambda"),
        stop_constant=args.stop_constant,
        seed=args.seed,
    )
    out = Path(args.out)
    _write_csv(out / "run.csv", RUN_COLUMNS, [row])
    _write_meta(
        out / "run.meta.json",
        "run",
        _flags(args),
        {"rows": 1, "elapsed_ms": round((time.perf_counter() - started) * 1e3, 1)},
    )
    print(f"run: method = {row['method']}")
    print(f"run: selected ({row['size']}): {row['selected'] or '(empty model)'}")
    print(f"run: test MSE = {row['test_mse']:.6g}")
    print(f"run: wrote {out / 'run.csv'}")
    return 0


# ---------------------------------------------------------------- parser


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _lambda_grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("lambda step must be positive")
    values = np.arange(lo, hi + step / 2.0, step)
    return [float(np.round(v, 10)) for v in values]


def _flags(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _add_common(sub, reps_default: int):
    sub.add_argument("--seed", type=int, default=0, help="master seed")
    sub.add_argument("--reps", type=int, default=reps_default, help="replications")
    sub.add_argument("--out", default="results", help="output directory")
    sub.add_argument("--threads", type=int, default=1, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsubset",
        description="Simulated quantum adaptive search for best subset selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tune", help="accuracy over the schedule-parameter grid")
    t.add_argument("--d", type=int, default=32, help="search space size")
    t.add_argument("--k-list", type=_ints, default=[1, 3, 5], help="node counts")
    t.add_argument("--lambda-min", type=float, default=0.40)
    t.add_argument("--lambda-max", type=float, default=0.60)
    t.add_argument("--lambda-step", type=float, default=0.01)
    t.add_argument("--stop-constant", type=float, default=3.0)
    _add_common(t, 200)
    t.set_defaults(func=cmd_tune)

    s = sub.add_parser("select", help="search quality against Grover references")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--p", type=int, default=7)
    s.add_argument("--s", type=int, default=4)
    s.add_argument("--rho-list", type=_floats, default=[0.25, 0.5])
    s.add_argument("--snr-list", type=_floats, default=[0.5, 1.0, 2.0, 3.0])
    s.add_argument("--sparsity", choices=["strong", "weak"], default="strong")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--lambda", type=float, default=0.55)
    s.add_argument("--stop-constant", type=float, default=3.0)
    s.add_argument("--n-test", type=int, default=2000, help="held-out rows per replication")
    s.add_argument("--timings", action="store_true", help="record wall times")
    _add_common(s, 200)
    s.set_defaults(func=cmd_select)

    c = sub.add_parser("compare", help="classical baselines on synthetic designs")
    c.add_argument("--n", type=int, default=100)
    c.add_argument("--p", type=int, default=10)
    c.add_argument("--s", type=int, default=5)
    c.add_argument("--rho-list", type=_floats, default=[0.25, 0.5])
    c.add_argument("--snr-list", type=_floats, default=[0.5, 1.0, 2.0, 3.0])
    c.add_argument("--sparsity", choices=["strong", "weak", "both"], default="both")
    c.add_argument("--k", type=int, default=5)
    c.add_argument("--lambda", type=float, default=0.5)
    c.add_argument("--stop-constant", type=float, default=3.0)
    c.add_argument(
        "--n-test", type=int, default=None,
        help="held-out rows per replication (default: same as --n)",
    )
    c.add_argument("--timings", action="store_true", help="record wall times")
    _add_common(c, 100)
    c.set_defaults(func=cmd_compare)

    th = sub.add_parser("theory", help="scaling and distribution checks")
    th.add_argument(
        "--d-list",
        type=_ints,
        default=[16, 32, 64, 128, 256, 512, 1024, 2048, 4096],
        help="dimensions for the iteration-scaling sweep",
    )
    th.add_argument("--runs", type=int, default=500, help="runs per dimension")
    th.add_argument("--cost-d-list", type=_ints, default=[64, 256, 1024])
    th.add_argument("--trials", type=int, default=2000, help="update-cost trials")
    th.add_argument("--chain-d-list", type=_ints, default=[2, 8, 32])
    th.add_argument("--chain-reps", type=int, default=20_000)
    th.add_argument("--sample-reps", type=int, default=20_000)
    th.add_argument("--lambda", type=float, default=0.52)
    _add_common(th, 500)
    th.set_defaults(func=cmd_theory)

    r = sub.add_parser("run", help="one selection on a CSV file")
    r.add_argument("--data", required=True, help="path to a CSV file with header")
    r.add_argument("--response", required=True, help="response column name")
    r.add_argument("--drop", type=lambda s: [t for t in s.split(",") if t], default=[])
    r.add_argument("--split", type=float, default=0.8, help="training fraction")
    r.add_argument(
        "--method", choices=["qas", "bss", "stepwise", "lasso"], default="qas"
    )
    r.add_argument("--k", type=int, default=5)
    r.add_argument("--lambda", type=float, default=0.5)
    r.add_argument("--stop-constant", type=float, default=3.0)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", default="results")
    r.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, OSError, NoConvergence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DimensionTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ConditionViolated, DegenerateSignal, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
