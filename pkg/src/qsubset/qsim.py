"""Grover dynamics on a classical simulator, two ways.

The closed form tracks the two amplitudes (marked, unmarked) that a
Grover iteration preserves; the statevector route applies the sign flip
and inversion about the mean explicitly. Both start from the uniform
superposition, and tests hold them to agreement at 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateMarking, DimensionTooLarge
from .util import as_rng

# Hard guard for explicit statevectors: 2^16 amplitudes.
MAX_STATEVECTOR_DIM = 1 << 16

_NORM_TOL = 1e-12


def grover_angle(dim: int, n_marked: int) -> float:
    """Rotation angle theta with sin^2(theta) = n_marked / dim.

    Raises
    ------
    DegenerateMarking
        Unless 1 <= n_marked <= dim - 1.
    """
    if dim < 2:
        raise DegenerateMarking(f"need at least two states, got dim={dim}")
    if not 1 <= n_marked <= dim - 1:
        raise DegenerateMarking(
            f"need 1 <= n_marked <= dim - 1, got n_marked={n_marked}, dim={dim}"
        )
    return math.asin(math.sqrt(n_marked / dim))


@dataclass(frozen=True)
class TwoLevelState:
    """State after some number of Grover operations, as two amplitudes.

    Every marked basis state carries ``marked_amp`` and every unmarked
    one ``unmarked_amp``; the pair must be normalized.
    """

    dim: int
    n_marked: int
    marked_amp: float
    unmarked_amp: float

    def __post_init__(self):
        if not 1 <= self.n_marked <= self.dim - 1:
            raise DegenerateMarking(
                f"need 1 <= n_marked <= dim - 1, got {self.n_marked} of {self.dim}"
            )
        total = (
            self.n_marked * self.marked_amp**2
            + (self.dim - self.n_marked) * self.unmarked_amp**2
        )
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(f"state is not normalized: total probability {total}")

    @property
    def success_probability(self) -> float:
        """Probability that a measurement lands on a marked state."""
        return self.n_marked * self.marked_amp**2


def closed_form_state(dim: int, n_marked: int, n_ops: int) -> TwoLevelState:
    """Amplitudes after ``n_ops`` Grover operations from the uniform start.

    With theta = grover_angle(dim, n_marked) and j operations, each
    marked state has amplitude sin((2j+1) theta)/sqrt(n_marked) and each
    unmarked state cos((2j+1) theta)/sqrt(dim - n_marked).
    """
    if n_ops < 0:
        raise ValueError("n_ops must be non-negative")
    theta = grover_angle(dim, n_marked)
    phase = (2 * n_ops + 1) * theta
    return TwoLevelState(
        dim=dim,
        n_marked=n_marked,
        marked_amp=math.sin(phase) / math.sqrt(n_marked),
        unmarked_amp=math.cos(phase) / math.sqrt(dim - n_marked),
    )


@dataclass(frozen=True)
class MarkPredicate:
    """A 0/1 marking of basis states together with its marked count."""

    fn: Callable[[int], int]
    n_marked: int

    @classmethod
    def from_callable(cls, fn: Callable[[int], int], dim: int) -> "MarkPredicate":
        count = sum(1 for i in range(dim) if fn(i))
        return cls(fn=fn, n_marked=count)

    @classmethod
    def from_indices(cls, indices, dim: int) -> "MarkPredicate":
        marked = frozenset(int(i) for i in indices)
        if marked and not all(0 <= i < dim for i in marked):
            raise ValueError("marked index out of range")
        return cls(fn=lambda i: int(i in marked), n_marked=len(marked))

    def mask(self, dim: int) -> np.ndarray:
        return np.array([bool(self.fn(i)) for i in range(dim)])


def _marked_mask(marked, dim: int) -> np.ndarray:
    if isinstance(marked, MarkPredicate):
        return marked.mask(dim)
    mask = np.asarray(marked)
    if mask.dtype == bool and mask.shape == (dim,):
        return mask
    return MarkPredicate.from_indices(np.atleast_1d(mask), dim).mask(dim)


def flip(amplitudes: np.ndarray, marked_mask: np.ndarray) -> np.ndarray:
    """Negate the amplitude of every marked basis state."""
    out = amplitudes.copy()
    out[marked_mask] = -out[marked_mask]
    return out


def diffuse(amplitudes: np.ndarray) -> np.ndarray:
    """Invert every amplitude about the mean amplitude."""
    return 2.0 * amplitudes.mean() - amplitudes


def grover_statevector(dim: int, marked, n_ops: int) -> np.ndarray:
    """Explicit statevector after ``n_ops`` flip-and-diffuse operations.

    ``marked`` may be a MarkPredicate, a boolean mask of length dim, or a
    sequence of marked indices.

    Raises
    ------
    DimensionTooLarge
        If ``dim`` exceeds the 2^16-amplitude guard.
    """
    if dim > MAX_STATEVECTOR_DIM:
        raise DimensionTooLarge(f"statevector of dimension {dim} exceeds the guard")
    if dim < 1:
        raise ValueError("dim must be positive")
    if n_ops < 0:
        raise ValueError("n_ops must be non-negative")
    mask = _marked_mask(marked, dim)
    amps = np.full(dim, 1.0 / math.sqrt(dim))
    for _ in range(n_ops):
        amps = diffuse(flip(amps, mask))
    return amps


def measure_statevector(amplitudes: np.ndarray, rng=None) -> int:
    """Sample one basis state with probability equal to amplitude squared."""
    rng = as_rng(rng)
    probs = np.asarray(amplitudes, dtype=float) ** 2
    cum = np.cumsum(probs)
    u = rng.random() * cum[-1]
    return int(min(np.searchsorted(cum, u, side="right"), probs.size - 1))


def measure_two_level(
    state: TwoLevelState,
    marked_indices: np.ndarray,
    unmarked_indices: np.ndarray,
    rng=None,
) -> int:
    """Sample a basis state from a two-level superposition.

    ``marked_indices`` and ``unmarked_indices`` must partition the basis;
    only one uniform variate is consumed per measurement.
    """
    marked_indices = np.atleast_1d(np.asarray(marked_indices))
    unmarked_indices = np.atleast_1d(np.asarray(unmarked_indices))
    if marked_indices.size != state.n_marked:
        raise ValueError("marked index count does not match the state")
    if unmarked_indices.size != state.dim - state.n_marked:
        raise ValueError("unmarked index count does not match the state")
    rng = as_rng(rng)
    u = rng.random()
    p_marked_each = state.marked_amp**2
    p_marked = state.n_marked * p_marked_each
    if u < p_marked or state.unmarked_amp == 0.0:
        k = min(int(u / p_marked_each), state.n_marked - 1) if p_marked_each > 0 else 0
        return int(marked_indices[k])
    k = int((u - p_marked) / state.unmarked_amp**2)
    k = min(k, unmarked_indices.size - 1)
    return int(unmarked_indices[k])


def default_n_ops(dim: int) -> int:
    """The standard single-target operation count, ceil(pi sqrt(dim) / 4)."""
    return math.ceil(math.pi * math.sqrt(dim) / 4.0)


def grover_search(dim: int, target: int, n_ops: int | None = None, rng=None) -> int:
    """Amplify a single flagged basis state and measure.

    Runs ``n_ops`` Grover operations (default ``ceil(pi sqrt(dim)/4)``)
    with only ``target`` marked, then measures. With ``n_ops=0`` the
    measurement is uniform over all ``dim`` states.
    """
    if not 0 <= target < dim:
        raise ValueError(f"target {target} out of range for dim={dim}")
    if dim == 1:
        return 0
    if n_ops is None:
        n_ops = default_n_ops(dim)
    state = closed_form_state(dim, 1, n_ops)
    unmarked = np.concatenate([np.arange(target), np.arange(target + 1, dim)])
    return measure_two_level(state, np.array([target]), unmarked, rng)


def average_success_probability(dim: int, n_marked: int, max_ops: int) -> float:
    """Success probability averaged over a uniform operation count.

    For tau = ``max_ops`` drawn uniformly from {0, ..., tau - 1}, the
    mean probability of measuring a marked state is
    1/2 - sin(4 tau theta) / (4 tau sin(2 theta)), which is at least 1/4
    whenever tau >= 1/sin(2 theta).
    """
    if max_ops < 1:
        raise ValueError("max_ops must be at least 1")
    theta = grover_angle(dim, n_marked)
    return 0.5 - math.sin(4 * max_ops * theta) / (4 * max_ops * math.sin(2 * theta))
