"""Adaptive Grover search for the minimum of a loss table.

The search never sees the whole marked set. Each round marks, implicitly,
every state whose loss is at or below the current benchmark's, runs a
two-level Grover amplification for a scheduled number of operations, and
keeps the measured state only when it strictly improves the benchmark.
The operation schedule grows geometrically so that late rounds exceed the
critical count for any remaining benchmark rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionViolated
from .qsim import closed_form_state, grover_angle, measure_two_level
from .regress import LossTable
from .util import as_rng, substream


@dataclass(frozen=True)
class QasConfig:
    """Tuning knobs for one adaptive search.

    ``learning_rate`` (in (0,1)) controls how fast the operation schedule
    ceil(pi/4 * learning_rate^(-m/2)) grows with the round number m;
    ``stop_constant`` stops the search once m exceeds stop_constant * ln D.
    ``max_grover_ops`` is an optional total-operation guard.
    """

    learning_rate: float = 0.52
    stop_constant: float = 3.0
    max_grover_ops: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 < self.learning_rate < 1.0:
            raise ConditionViolated(
                f"learning_rate must lie in (0, 1), got {self.learning_rate}"
            )
        if self.stop_constant <= 0.0:
            raise ConditionViolated(
                f"stop_constant must be positive, got {self.stop_constant}"
            )
        if self.max_grover_ops is not None and self.max_grover_ops < 0:
            raise ConditionViolated("max_grover_ops must be non-negative")


@dataclass(frozen=True)
class SelectionOutcome:
    """What one search returned and what it cost."""

    selected: int
    loss: float
    iterations: int
    grover_ops: int


@dataclass(frozen=True)
class QasTrace:
    """Benchmark path of one search: (round, state, loss) per improvement.

    The first entry records the initial benchmark with round 0. Losses
    along the path are strictly decreasing.
    """

    benchmark_history: tuple[tuple[int, int, float], ...] = field(repr=False)
    iterations_total: int = 0
    grover_ops_total: int = 0


def schedule_ops(step: int, learning_rate: float) -> int:
    """Grover operations allotted to round ``step``."""
    if step < 1:
        raise ValueError("step starts at 1")
    return math.ceil(math.pi / 4.0 * learning_rate ** (-step / 2.0))


def local_eval(state: int, benchmark: int, losses: np.ndarray) -> int:
    """1 when ``state`` does at least as well as ``benchmark``, else 0."""
    losses = _loss_values(losses)
    return int(losses[state] <= losses[benchmark])


def marked_count(losses: np.ndarray, benchmark: int) -> int:
    """How many states do at least as well as the benchmark."""
    losses = _loss_values(losses)
    return int(np.count_nonzero(losses <= losses[benchmark]))


def _loss_values(losses) -> np.ndarray:
    if isinstance(losses, LossTable):
        return losses.values
    return np.asarray(losses, dtype=float)


def qas_search(
    losses,
    config: QasConfig | None = None,
    rng=None,
    *,
    sort_order: np.ndarray | None = None,
    initial_benchmark: int | None = None,
) -> tuple[SelectionOutcome, QasTrace]:
    """Search a loss table for its minimizer without global knowledge.

    Parameters
    ----------
    losses : LossTable or array of shape (D,)
        The landscape to search.
    config : QasConfig
        Schedule and stopping parameters; defaults apply when omitted.
    rng : Generator, int seed, or None
        Randomness source; falls back to ``config.seed``.
    sort_order : ndarray, optional
        Precomputed stable argsort of the losses; pass it when running
        many searches over one shared table.
    initial_benchmark : int, optional
        Start from this state instead of a uniform draw. Used by the
        instrumented cost experiments.

    Returns
    -------
    (SelectionOutcome, QasTrace)
        The final benchmark with its loss and counters, plus the benchmark
        path. Exactly one random variate is consumed per round after the
        initial draw, so runs are bit-reproducible for a given seed.
    """
    if config is None:
        config = QasConfig()
    values = _loss_values(losses)
    dim = values.shape[0]
    if dim < 1:
        raise ValueError("losses must be non-empty")
    rng = as_rng(rng if rng is not None else config.seed)

    if sort_order is None:
        sort_order = np.argsort(values, kind="stable")
    sorted_values = values[sort_order]

    if initial_benchmark is None:
        bench = int(rng.integers(dim))
    else:
        bench = int(initial_benchmark)
        if not 0 <= bench < dim:
            raise ValueError("initial_benchmark out of range")
    history = [(0, bench, float(values[bench]))]

    if dim == 1:
        outcome = SelectionOutcome(
            selected=bench, loss=float(values[bench]), iterations=0, grover_ops=0
        )
        trace = QasTrace(
            benchmark_history=tuple(history), iterations_total=0, grover_ops_total=0
        )
        return outcome, trace

    limit = config.stop_constant * math.log(dim)
    ops_total = 0
    rounds = 0
    step = 1
    while True:
        n_ops = schedule_ops(step, config.learning_rate)
        if (
            config.max_grover_ops is not None
            and ops_total + n_ops > config.max_grover_ops
        ):
            break
        bench_loss = values[bench]
        n_marked = int(np.searchsorted(sorted_values, bench_loss, side="right"))
        if n_marked >= dim:
            # Everything is marked: the flip is a global phase and the
            # measurement is uniform.
            candidate = int(rng.integers(dim))
        else:
            state = closed_form_state(dim, n_marked, n_ops)
            candidate = measure_two_level(
                state, sort_order[:n_marked], sort_order[n_marked:], rng
            )
        ops_total += n_ops
        rounds = step
        if values[candidate] < bench_loss:
            bench = candidate
            history.append((step, bench, float(values[bench])))
        step += 1
        if step > limit:
            break

    outcome = SelectionOutcome(
        selected=bench,
        loss=float(values[bench]),
        iterations=rounds,
        grover_ops=ops_total,
    )
    trace = QasTrace(
        benchmark_history=tuple(history),
        iterations_total=rounds,
        grover_ops_total=ops_total,
    )
    return outcome, trace


def iterations_to_solution(
    losses,
    config: QasConfig | None = None,
    rng=None,
    max_iterations: int = 10_000,
    *,
    sort_order: np.ndarray | None = None,
) -> int:
    """Rounds until the benchmark first attains the minimum loss.

    Runs the same round dynamics as ``qas_search`` but ignores the
    stopping rule; returns 0 when the initial benchmark is already
    minimal, and ``max_iterations`` if the cap is hit first.
    """
    if config is None:
        config = QasConfig()
    values = _loss_values(losses)
    dim = values.shape[0]
    rng = as_rng(rng if rng is not None else config.seed)
    if sort_order is None:
        sort_order = np.argsort(values, kind="stable")
    sorted_values = values[sort_order]
    best = sorted_values[0]

    bench = int(rng.integers(dim))
    if values[bench] == best:
        return 0
    for step in range(1, max_iterations + 1):
        n_ops = schedule_ops(step, config.learning_rate)
        bench_loss = values[bench]
        n_marked = int(np.searchsorted(sorted_values, bench_loss, side="right"))
        if n_marked >= dim:
            candidate = int(rng.integers(dim))
        else:
            state = closed_form_state(dim, n_marked, n_ops)
            candidate = measure_two_level(
                state, sort_order[:n_marked], sort_order[n_marked:], rng
            )
        if values[candidate] < bench_loss:
            bench = candidate
            if values[bench] == best:
                return step
    return max_iterations


def update_cost_trial(
    dim: int,
    rank: int,
    config: QasConfig | None = None,
    rng=None,
    max_iterations: int = 10_000,
) -> int:
    """Grover operations spent until a benchmark of the given rank updates.

    With distinct losses a benchmark of rank r marks exactly r states, of
    which r - 1 strictly improve on it, so each round updates with
    probability sin^2((2 tau + 1) theta) (r-1)/r; when every state is
    marked (r = dim) the measurement is uniform instead. Only the update
    time is random, so the trial draws one Bernoulli per round.
    """
    if config is None:
        config = QasConfig()
    if not 2 <= rank <= dim:
        raise ValueError(f"rank must lie in [2, dim], got {rank} of {dim}")
    rng = as_rng(rng)
    ops = 0
    for step in range(1, max_iterations + 1):
        n_ops = schedule_ops(step, config.learning_rate)
        ops += n_ops
        if rank == dim:
            p_update = (dim - 1) / dim
        else:
            theta = grover_angle(dim, rank)
            p_hit = math.sin((2 * n_ops + 1) * theta) ** 2
            p_update = p_hit * (rank - 1) / rank
        if rng.random() < p_update:
            return ops
    return ops


def expected_update_cost(
    dim: int,
    ranks,
    trials: int,
    config: QasConfig | None = None,
    seed: int | None = None,
) -> dict[int, float]:
    """Mean Grover operations until update, per starting benchmark rank."""
    out: dict[int, float] = {}
    for i, rank in enumerate(ranks):
        costs = [
            update_cost_trial(dim, int(rank), config, substream(seed, i, t))
            for t in range(trials)
        ]
        out[int(rank)] = float(np.mean(costs))
    return out
