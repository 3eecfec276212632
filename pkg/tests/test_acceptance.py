"""End-to-end acceptance checks for the full toolkit.

Each test verifies one headline property at a stated tolerance and
prints a single PASS/FAIL line outside pytest's capture, so the lines
show up in a plain ``pytest`` run. Budgets are asserted alongside the
numbers; every check runs far below its cap on ordinary hardware.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from qsubset.baselines import fp_fn, rte
from qsubset.cli import main, run_compare, run_select, run_tune
from qsubset.datagen import toeplitz_sigma
from qsubset.hybrid import vote_bound_check, vote_lower_bound
from qsubset.qsim import closed_form_state, diffuse, flip, grover_search
from qsubset.regress import Dataset, SubsetIndex, center, predict_svd, qlp_recover
from qsubset.theory import (
    iteration_scaling,
    success_identity_check,
    update_cost_sweep,
)
from qsubset.util import substream


_CAPTURE = None


@pytest.fixture(autouse=True)
def _live_report(capsys):
    """Let report() write through the capture so PASS lines stay visible."""
    global _CAPTURE
    _CAPTURE = capsys
    yield
    _CAPTURE = None


def report(tag: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
    if _CAPTURE is not None:
        with _CAPTURE.disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)
    assert ok, line


@contextmanager
def budget(seconds: float):
    start = time.perf_counter()
    box = {}
    yield box
    box["elapsed"] = time.perf_counter() - start
    assert box["elapsed"] < seconds, f"exceeded {seconds}s budget: {box['elapsed']:.1f}s"


def test_01_closed_form_matches_statevector():
    """Two-amplitude closed form vs simulated statevector, every case."""
    with budget(30.0) as timer:
        worst = 0.0
        for p in range(1, 9):
            dim = 1 << p
            perm = np.random.default_rng(dim).permutation(dim)
            for m in range(1, dim):
                mask = np.zeros(dim, dtype=bool)
                mask[perm[:m]] = True
                amps = np.full(dim, 1.0 / math.sqrt(dim))
                for j in range(0, 41):
                    if j > 0:
                        amps = diffuse(flip(amps, mask))
                    state = closed_form_state(dim, m, j)
                    diff = max(
                        float(np.max(np.abs(amps[mask] - state.marked_amp))),
                        float(np.max(np.abs(amps[~mask] - state.unmarked_amp))),
                    )
                    worst = max(worst, diff)
    report(
        "closed form vs statevector",
        worst <= 1e-10,
        f"max abs deviation {worst:.3e} over D=2..256, M=1..D-1, ops<=40 "
        f"in {timer['elapsed']:.1f}s",
    )


def test_02_single_op_quarter_marking_is_certain():
    """One operation on a 1-of-4 marking always measures the target."""
    with budget(1.0) as timer:
        state = closed_form_state(4, 1, 1)
        rng = np.random.default_rng(0)
        hits = sum(grover_search(4, 2, 1, rng) == 2 for _ in range(10_000))
    report(
        "exact rotation at D=4",
        state.success_probability == pytest.approx(1.0, abs=1e-15) and hits == 10_000,
        f"{hits}/10000 measured draws on the marked state in {timer['elapsed']:.2f}s",
    )


def test_03_averaged_success_identity_and_quarter_bound():
    """Closed-form averaged success equals the direct mean; 1/4 bound holds."""
    with budget(5.0) as timer:
        out = success_identity_check()
    ok = (
        out["n_triples"] == 1000
        and out["max_abs_diff"] <= 1e-12
        and out["min_margin_over_quarter"] >= 0.0
        and out["n_covered"] > 0
    )
    report(
        "averaged success identity",
        ok,
        f"max abs diff {out['max_abs_diff']:.2e} on 1000 triples, "
        f"min margin over 1/4 {out['min_margin_over_quarter']:.4f} "
        f"on {out['n_covered']} covered triples in {timer['elapsed']:.1f}s",
    )


def test_04_vote_accuracy_at_default_learning_rate():
    """Five-node voting reaches 0.90 accuracy at D=32 and beats one node."""
    with budget(120.0) as timer:
        _, summary = run_tune(d=32, k_list=(1, 5), lambdas=[0.52], reps=200, seed=0)
    acc = {row["k"]: row["accuracy"] for row in summary}
    report(
        "voting accuracy at D=32",
        acc[5] >= 0.90 and acc[5] >= acc[1],
        f"K=5 accuracy {acc[5]:.3f} (need >= 0.90), K=1 accuracy {acc[1]:.3f}, "
        f"200 paired replications in {timer['elapsed']:.1f}s",
    )


def test_05_iteration_count_scales_logarithmically():
    """q90 of rounds-to-minimum grows like log2(d) across dimensions."""
    with budget(300.0) as timer:
        records = iteration_scaling((16, 64, 256, 1024, 4096), runs=500, seed=0)
    ratios = [r["q90_over_log2"] for r in records]
    spread = max(ratios) / min(ratios)
    report(
        "logarithmic iteration scaling",
        spread < 2.0,
        f"q90/log2(d) in [{min(ratios):.2f}, {max(ratios):.2f}] "
        f"(spread {spread:.2f}, need < 2) over d=16..4096, 500 runs each "
        f"in {timer['elapsed']:.1f}s",
    )


def test_06_update_cost_bounded_by_sqrt_ratio():
    """Mean operations per update stay within 16 sqrt(d / rank)."""
    with budget(300.0) as timer:
        rows = update_cost_sweep((64, 256, 1024), trials=2000, seed=0)
    worst = max(r["ratio"] for r in rows)
    report(
        "update cost vs sqrt(d/rank)",
        worst <= 16.0,
        f"max mean_ops / sqrt(d/rank) = {worst:.2f} (bound 16.0) over "
        f"d in {{64, 256, 1024}}, ranks d/8..3d/4, 2000 trials per cell "
        f"in {timer['elapsed']:.1f}s",
    )


def test_07_majority_bound_exact_and_sampled():
    """Vote lower bound sits below the exact tail and the Monte Carlo rate."""
    with budget(30.0) as timer:
        rows = vote_bound_check(
            (0.6, 0.75, 0.9), (2, 3, 4), reps=100_000, seed=0, strict=False
        )
        anchor = vote_lower_bound(0.75, 4)
    ok_rows = all(
        r["exact"] >= r["bound"] - 1e-12
        and r["empirical"] >= r["bound"] - 3.0 * r["mc_sigma"]
        for r in rows
    )
    ok = (
        ok_rows
        and len(rows) == 8
        and anchor == pytest.approx(0.897180601514912, abs=1e-12)
    )
    report(
        "majority vote lower bound",
        ok,
        f"{len(rows)} admissible (q, K) cells, bound <= exact tail and "
        f"within 3 sigma of 1e5-rep frequencies; bound(q=0.75, K=9) = "
        f"{anchor:.3f} in {timer['elapsed']:.1f}s",
    )


def test_08_selection_is_clean_at_easy_cell_and_beats_random():
    """Search keeps median support errors at zero and beats a random mark."""
    with budget(180.0) as timer:
        rows = run_select(
            n=100, p=7, s=4, rho_list=(0.25,), snr_list=(3.0,),
            sparsity="strong", k=3, lam=0.55, reps=200, seed=0,
        )
    by = {}
    for r in rows:
        by.setdefault(r["method"], []).append((r["fp"], r["fn"]))
    qas_fp = float(np.median([v[0] for v in by["qas"]]))
    qas_fn = float(np.median([v[1] for v in by["qas"]]))
    qas_mean = float(np.mean([v[0] + v[1] for v in by["qas"]]))
    rand_mean = float(np.mean([v[0] + v[1] for v in by["grover_random"]]))
    gap = rand_mean - qas_mean
    report(
        "support recovery at rho=0.25, snr=3",
        qas_fp == 0.0 and qas_fn == 0.0 and gap >= 1.0,
        f"median FP {qas_fp:g}, median FN {qas_fn:g} (need 0 and 0); "
        f"random-mark minus search mean(FP+FN) gap {gap:.2f} (need >= 1.0), "
        f"200 replications in {timer['elapsed']:.1f}s",
    )


def test_09_search_matches_exhaustive_scan():
    """Voting search lands on the exhaustive argmin in at least 90% of reps."""
    with budget(180.0) as timer:
        rows = run_compare(
            n=100, p=10, s=5, rho_list=(0.25,), snr_list=(2.0,),
            sparsity_kinds=("strong",), k=5, lam=0.5, reps=100, seed=0,
        )
    picks = {}
    for r in rows:
        picks.setdefault(r["rep"], {})[r["method"]] = r["subset_bitmask"]
    agree = sum(1 for v in picks.values() if v["qas"] == v["bss"])
    report(
        "agreement with exhaustive scan",
        agree >= 90,
        f"{agree}/100 replications select the exact argmin subset "
        f"(need >= 90) in {timer['elapsed']:.1f}s",
    )


def test_10_amplitude_route_equals_svd_and_normal_equations():
    """Amplitude-domain prediction equals SVD and normal-equation answers."""
    with budget(5.0) as timer:
        worst_qlp = 0.0
        worst_svd = 0.0
        for case in range(200):
            rng = substream(1234, case)
            d = int(rng.integers(1, 9))
            n = int(rng.integers(d + 2, 41))
            data = center(Dataset(rng.standard_normal((n, d)), rng.standard_normal(n)))
            subset = SubsetIndex((1 << d) - 1, d)
            x_new = rng.standard_normal(d)
            svd_pred = predict_svd(data, subset, x_new)
            qlp_pred = qlp_recover(data, subset, x_new).y_hat
            direct = float(
                x_new @ np.linalg.solve(data.X.T @ data.X, data.X.T @ data.y)
            )
            scale = max(abs(svd_pred), abs(direct), 1e-9)
            worst_qlp = max(worst_qlp, abs(qlp_pred - svd_pred) / scale)
            worst_svd = max(worst_svd, abs(svd_pred - direct) / scale)
    report(
        "prediction route equivalence",
        worst_qlp <= 1e-8 and worst_svd <= 1e-8,
        f"200 random full-rank problems: amplitude vs SVD rel diff "
        f"{worst_qlp:.2e}, SVD vs normal equations {worst_svd:.2e} "
        f"(need <= 1e-8) in {timer['elapsed']:.1f}s",
    )


def test_11_error_metrics_are_exact():
    """Relative test error is 1 at the truth; FP/FN match set differences."""
    with budget(1.0) as timer:
        sigma = toeplitz_sigma(6, 0.4)
        beta = np.array([1.0, 1.0, 0.5, 0.0, 0.0, 0.0])
        identity_ok = rte(beta, beta, sigma, 0.7) == 1.0
        rng = np.random.default_rng(77)
        mismatches = 0
        for _ in range(1000):
            p = int(rng.integers(1, 17))
            sel = SubsetIndex(int(rng.integers(1 << p)), p)
            tru = SubsetIndex(int(rng.integers(1 << p)), p)
            fp, fn = fp_fn(sel, tru)
            sel_set, tru_set = set(sel.indices()), set(tru.indices())
            if fp != len(sel_set - tru_set) or fn != len(tru_set - sel_set):
                mismatches += 1
    report(
        "support and error metrics",
        identity_ok and mismatches == 0,
        f"rte(beta*, beta*) == 1 exactly; 1000 random FP/FN pairs match "
        f"set differences ({mismatches} mismatches) in {timer['elapsed']:.2f}s",
    )


def test_12_cli_outputs_are_byte_identical(tmp_path):
    """Every subcommand rerun with one seed reproduces its CSVs byte for byte."""

    def run(args):
        assert main(args) == 0

    def csv_bytes(out_dir):
        return {
            f.name: f.read_bytes() for f in sorted(out_dir.glob("*.csv"))
        }

    with budget(120.0) as timer:
        data_csv = tmp_path / "data.csv"
        rng = np.random.default_rng(3)
        lines = ["a,b,c,y"]
        for _ in range(40):
            row = rng.standard_normal(3)
            y = 1.5 * row[0] - row[2] + 0.1 * rng.standard_normal()
            lines.append(",".join(repr(float(v)) for v in (*row, y)))
        data_csv.write_text("\n".join(lines) + "\n")

        commands = {
            "tune": [
                "tune", "--d", "16", "--k-list", "1,3", "--lambda-min", "0.50",
                "--lambda-max", "0.52", "--lambda-step", "0.01",
                "--reps", "20", "--seed", "7",
            ],
            "select": [
                "select", "--reps", "10", "--rho-list", "0.25",
                "--snr-list", "2.0", "--n-test", "200", "--seed", "7",
            ],
            "compare": [
                "compare", "--n", "60", "--p", "6", "--s", "3",
                "--rho-list", "0.25", "--snr-list", "2.0",
                "--sparsity", "strong", "--reps", "5", "--seed", "7",
            ],
            "theory": [
                "theory", "--d-list", "8,16", "--runs", "30",
                "--cost-d-list", "8", "--trials", "30", "--chain-d-list", "4",
                "--chain-reps", "1000", "--sample-reps", "1000", "--seed", "7",
            ],
            "run": [
                "run", "--data", str(data_csv), "--response", "y",
                "--k", "3", "--seed", "7",
            ],
        }
        threaded = {"select": "4", "theory": "3", "tune": "2", "compare": "2"}

        checked = 0
        for name, args in commands.items():
            first = tmp_path / f"{name}_first"
            second = tmp_path / f"{name}_second"
            run(args + ["--out", str(first)])
            run(args + ["--out", str(second)])
            assert csv_bytes(first), f"{name} wrote no CSV output"
            assert csv_bytes(first) == csv_bytes(second), f"{name} rerun differs"
            if name in threaded:
                parallel = tmp_path / f"{name}_threads"
                run(args + ["--out", str(parallel), "--threads", threaded[name]])
                assert csv_bytes(first) == csv_bytes(parallel), (
                    f"{name} differs across thread counts"
                )
            checked += 1
    report(
        "deterministic command line outputs",
        checked == 5,
        f"5 subcommands rerun byte-identically (4 also across thread counts) "
        f"in {timer['elapsed']:.1f}s",
    )
