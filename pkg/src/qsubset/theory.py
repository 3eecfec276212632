"""Numerical checks of the search's scaling and distribution claims.

Four families: the absorbing descent chain that abstracts benchmark
updates, iteration counts to reach the minimum on fresh random tables,
mean Grover operations until a benchmark of given rank updates, and the
closed form for the operation-averaged success probability.
"""

from __future__ import annotations

import math

import numpy as np

from .qas import QasConfig, expected_update_cost, iterations_to_solution
from .qsim import average_success_probability, closed_form_state, grover_angle
from .util import as_rng, derived_seed, substream


def descent_transition_matrix(d: int) -> np.ndarray:
    """Transition matrix of the descent abstraction on levels 0..d.

    From level j the chain moves uniformly over {j, ..., d}; level d is
    absorbing.
    """
    if d < 1:
        raise ValueError("d must be positive")
    P = np.zeros((d + 1, d + 1))
    for j in range(d + 1):
        P[j, j:] = 1.0 / (d + 1 - j)
    return P


def descent_state_distribution(d: int, steps: int) -> np.ndarray:
    """Distribution over levels after ``steps`` uniform draws (steps >= 1)."""
    if steps < 1:
        raise ValueError("steps starts at 1")
    P = descent_transition_matrix(d)
    pi = np.full(d + 1, 1.0 / (d + 1))
    for _ in range(steps - 1):
        pi = pi @ P
    return pi


def descent_pmf(d: int, max_steps: int) -> np.ndarray:
    """P(absorption exactly at step z) for z = 1..max_steps."""
    P = descent_transition_matrix(d)
    pi = np.full(d + 1, 1.0 / (d + 1))
    pmf = np.empty(max_steps)
    pmf[0] = pi[d]
    prev_absorbed = pi[d]
    for z in range(1, max_steps):
        pi = pi @ P
        pmf[z] = pi[d] - prev_absorbed
        prev_absorbed = pi[d]
    return pmf


def expected_level(d: int, steps: int) -> float:
    """Closed-form mean level after ``steps`` draws, d (1 - 2^-steps)."""
    return d * (1.0 - 2.0 ** (-steps))


def simulate_descent(d: int, rng=None) -> int:
    """Draws until the simulated descent process is absorbed at level d."""
    rng = as_rng(rng)
    level = int(rng.integers(d + 1))
    steps = 1
    while level < d:
        level += int(rng.integers(d - level + 1))
        steps += 1
    return steps


def chain_check(d: int, reps: int = 20_000, seed: int | None = None, max_steps: int = 64) -> dict:
    """Dynamic-programming absorption pmf against Monte Carlo frequencies."""
    pmf = descent_pmf(d, max_steps)
    rng = as_rng(seed)
    draws = np.array([simulate_descent(d, rng) for _ in range(reps)])
    freq = np.bincount(np.minimum(draws, max_steps), minlength=max_steps + 1)[1:]
    freq = freq / reps
    tv = 0.5 * float(np.sum(np.abs(freq - pmf)))
    return {
        "d": d,
        "reps": reps,
        "pmf": pmf,
        "freq": freq,
        "tv_distance": tv,
        "p_first_draw_minimum": float(pmf[0]),
    }


def iteration_scaling(
    d_values,
    runs: int = 500,
    config: QasConfig | None = None,
    seed: int | None = None,
) -> list[dict]:
    """Rounds-to-minimum quantiles on fresh uniform tables, per dimension.

    Each run draws its own table of iid uniform losses and counts rounds
    until the benchmark reaches the minimum, with the stopping rule
    disabled. Reported against log2(d) for the logarithmic-scaling claim.
    """
    if config is None:
        config = QasConfig()
    records = []
    for di, d in enumerate(d_values):
        d = int(d)
        iters = np.empty(runs)
        for r in range(runs):
            rng = substream(seed, di, r)
            losses = rng.random(d)
            iters[r] = iterations_to_solution(losses, config, rng)
        records.append(
            {
                "d": d,
                "runs": runs,
                "mean": float(iters.mean()),
                "median": float(np.median(iters)),
                "q90": float(np.quantile(iters, 0.9)),
                "q90_over_log2": float(np.quantile(iters, 0.9) / math.log2(d)),
            }
        )
    return records


def update_cost_sweep(
    d_values,
    rank_fractions=(0.125, 0.25, 0.5, 0.75),
    trials: int = 2000,
    config: QasConfig | None = None,
    seed: int | None = None,
) -> list[dict]:
    """Mean operations until update, against the sqrt(d / rank) reference."""
    if config is None:
        config = QasConfig()
    records = []
    for di, d in enumerate(d_values):
        d = int(d)
        ranks = sorted({max(2, int(round(f * d))) for f in rank_fractions})
        costs = expected_update_cost(d, ranks, trials, config, derived_seed(seed, di))
        for rank in ranks:
            ref = math.sqrt(d / rank)
            records.append(
                {
                    "d": d,
                    "rank": rank,
                    "trials": trials,
                    "mean_ops": costs[rank],
                    "ratio": costs[rank] / ref,
                }
            )
    return records


def success_identity_grid() -> list[tuple[int, int, int]]:
    """Deterministic grid of 1000 (dim, n_marked, max_ops) triples."""
    dims = [2**k for k in range(1, 11)]
    fractions = (0.1, 0.25, 0.5, 0.75, 0.9)
    triples = []
    for d in dims:
        for f in fractions:
            m = min(d - 1, max(1, int(round(f * d))))
            for tau in range(1, 21):
                triples.append((d, m, tau))
    return triples


def success_identity_check() -> dict:
    """Closed-form averaged success against direct summation on the grid.

    Also tracks the worst margin of the averaged success over 1/4 among
    triples whose operation count meets tau >= 1/sin(2 theta).
    """
    max_diff = 0.0
    min_margin = math.inf
    covered = 0
    for d, m, tau in success_identity_grid():
        theta = grover_angle(d, m)
        direct = float(
            np.mean(
                [math.sin((2 * j + 1) * theta) ** 2 for j in range(tau)]
            )
        )
        closed = average_success_probability(d, m, tau)
        max_diff = max(max_diff, abs(closed - direct))
        if tau >= 1.0 / math.sin(2.0 * theta):
            covered += 1
            min_margin = min(min_margin, closed - 0.25)
    return {
        "n_triples": 1000,
        "max_abs_diff": max_diff,
        "n_covered": covered,
        "min_margin_over_quarter": min_margin,
    }


def success_sampled_check(
    dim: int = 64,
    n_marked: int = 3,
    max_ops: int = 10,
    reps: int = 20_000,
    seed: int | None = None,
) -> dict:
    """Averaged success identity against sampled measurement frequencies.

    Draws the operation count uniformly from {0, ..., max_ops - 1} per
    rep and measures whether the outcome is marked.
    """
    rng = as_rng(seed)
    expected = average_success_probability(dim, n_marked, max_ops)
    hits = 0
    for _ in range(reps):
        n_ops = int(rng.integers(max_ops))
        state = closed_form_state(dim, n_marked, n_ops)
        if rng.random() < state.success_probability:
            hits += 1
    freq = hits / reps
    sigma = math.sqrt(expected * (1.0 - expected) / reps)
    return {
        "dim": dim,
        "n_marked": n_marked,
        "max_ops": max_ops,
        "reps": reps,
        "expected": expected,
        "frequency": freq,
        "mc_sigma": sigma,
        "abs_error": abs(freq - expected),
    }
