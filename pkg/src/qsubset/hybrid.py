"""Vote-boosted subset selection over a shared loss table.

An odd number of independent searches run over the same table, each from
its own derived random stream, and the plurality of their answers is the
selection. The voting bound functions quantify how fast the majority of
K = 2 xi + 1 nodes with per-node success q beats q itself.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionViolated, DomainError
from .qas import QasConfig, SelectionOutcome, qas_search
from .regress import Dataset, LossTable, build_loss_table
from .util import as_rng, substream


@dataclass(frozen=True)
class HybridConfig:
    """Node count, per-node search settings, and the master seed."""

    n_nodes: int = 5
    qas: QasConfig = field(default_factory=QasConfig)
    master_seed: int | None = None

    def __post_init__(self):
        if self.n_nodes < 1 or self.n_nodes % 2 == 0:
            raise ConditionViolated(
                f"n_nodes must be odd and positive, got {self.n_nodes}"
            )


@dataclass(frozen=True)
class VoteResult:
    """Plurality outcome of independent searches.

    ``winner_count`` is the number of votes the winner received; ties
    break toward the smallest subset code. ``node_outcomes`` carries the
    per-node searches that produced the votes, when available.
    """

    votes: tuple[int, ...]
    winner: int
    winner_count: int
    node_outcomes: tuple[SelectionOutcome, ...] = ()

    @property
    def grover_ops_total(self) -> int:
        return sum(o.grover_ops for o in self.node_outcomes)


def majority_vote(votes) -> VoteResult:
    """Plurality winner of a non-empty vote sequence, ties to smallest."""
    votes = tuple(int(v) for v in votes)
    if not votes:
        raise ValueError("votes must be non-empty")
    counts = Counter(votes)
    top = max(counts.values())
    winner = min(v for v, c in counts.items() if c == top)
    return VoteResult(votes=votes, winner=winner, winner_count=top)


def node_stream(master_seed: int | None, node: int) -> np.random.Generator:
    """Reproducible, mutually independent generator for one voting node."""
    return substream(master_seed, 0, node)


def select_minimum(losses, config: HybridConfig | None = None) -> VoteResult:
    """Run the voting search over an existing loss table or array."""
    if config is None:
        config = HybridConfig()
    values = losses.values if isinstance(losses, LossTable) else np.asarray(losses)
    order = np.argsort(values, kind="stable")
    outcomes = []
    for k in range(config.n_nodes):
        outcome, _ = qas_search(
            values, config.qas, node_stream(config.master_seed, k), sort_order=order
        )
        outcomes.append(outcome)
    vote = majority_vote(o.selected for o in outcomes)
    return VoteResult(
        votes=vote.votes,
        winner=vote.winner,
        winner_count=vote.winner_count,
        node_outcomes=tuple(outcomes),
    )


def hybrid_select(
    train: Dataset,
    test: Dataset | None = None,
    config: HybridConfig | None = None,
    loss_kind: str = "test_mse",
) -> tuple[VoteResult, LossTable]:
    """Select a column subset: build the loss table, search it, vote.

    Returns the vote result (winner is the selected subset code) together
    with the table so callers can inspect the landscape that was searched.
    """
    if config is None:
        config = HybridConfig()
    table = build_loss_table(train, test, loss_kind)
    return select_minimum(table, config), table


def kl_bernoulli(a: float, b: float) -> float:
    """KL divergence between Bernoulli(b) and Bernoulli(a) means.

    Computed as b ln(b/a) + (1-b) ln((1-b)/(1-a)); both arguments must
    lie strictly inside (0, 1).
    """
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise DomainError(f"kl_bernoulli needs arguments in (0, 1), got {a}, {b}")
    return b * math.log(b / a) + (1.0 - b) * math.log((1.0 - b) / (1.0 - a))


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def vote_lower_bound(q: float, xi: int) -> float:
    """Lower bound on the majority success of K = 2 xi + 1 voters.

    Each voter is independently correct with probability ``q``; the
    majority needs at least xi + 1 correct votes. Requires
    q > (xi + 1) / (2 xi + 1), i.e. the per-node success must exceed the
    vote threshold fraction.
    """
    if xi < 0:
        raise ValueError("xi must be non-negative")
    k_nodes = 2 * xi + 1
    threshold = (xi + 1) / k_nodes
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if q <= threshold:
        raise ConditionViolated(
            f"need q > {threshold:.6f} for a K={k_nodes} majority bound, got q={q}"
        )
    return _norm_cdf(math.sqrt(2.0 * k_nodes * kl_bernoulli(q, threshold)))


def exact_vote_success(q: float, xi: int) -> float:
    """Exact probability that at least xi + 1 of 2 xi + 1 voters succeed."""
    if xi < 0:
        raise ValueError("xi must be non-negative")
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q}")
    k_nodes = 2 * xi + 1
    return float(
        sum(
            math.comb(k_nodes, i) * q**i * (1.0 - q) ** (k_nodes - i)
            for i in range(xi + 1, k_nodes + 1)
        )
    )


def vote_bound_check(
    q_values,
    xi_values,
    reps: int = 100_000,
    seed: int | None = None,
    strict: bool = True,
) -> list[dict]:
    """Monte Carlo check of the majority bound on a (q, xi) grid.

    For each admissible cell, simulates ``reps`` votes of K = 2 xi + 1
    independent Bernoulli(q) voters and records the empirical majority
    rate next to the exact tail and the lower bound. With ``strict`` the
    check fails loudly when the empirical rate drops more than three
    Monte Carlo standard errors below the bound.
    """
    rng = as_rng(seed)
    rows = []
    for xi in xi_values:
        xi = int(xi)
        k_nodes = 2 * xi + 1
        threshold = (xi + 1) / k_nodes
        for q in q_values:
            q = float(q)
            if q <= threshold:
                continue
            bound = vote_lower_bound(q, xi)
            exact = exact_vote_success(q, xi)
            wins = (rng.random((reps, k_nodes)) < q).sum(axis=1) >= xi + 1
            empirical = float(wins.mean())
            mc_sigma = math.sqrt(max(exact * (1.0 - exact), 1e-12) / reps)
            ok = empirical >= bound - 3.0 * mc_sigma
            rows.append(
                {
                    "q": q,
                    "k": k_nodes,
                    "bound": bound,
                    "exact": exact,
                    "empirical": empirical,
                    "mc_sigma": mc_sigma,
                    "ok": ok,
                }
            )
            if strict and not ok:
                raise ConditionViolated(
                    f"majority rate {empirical:.4f} fell more than 3 sigma below "
                    f"the bound {bound:.4f} at q={q}, K={k_nodes}"
                )
    return rows
