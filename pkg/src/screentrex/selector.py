"""Ordinary and confidence-based Screen-T-Rex selection rules.

Ordinary: select variables appearing in more than half of the candidate sets;
the self-estimated FDR is the reciprocal of the selection count. Confidence:
build a normal bootstrap confidence interval from the pooled nonzero dummy
coefficients and select variables whose averaged coefficient falls outside
the narrowest interval that keeps the selection no larger than the ordinary
one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import ContractError, EmptyDummyPoolError
from .experiments import AggregateVotes

GAMMA_STEP = 1e-3
DEFAULT_RESAMPLES = 1000


@dataclass(frozen=True)
class ScreenResult:
    selected: frozenset[int]
    alpha_hat: float
    method: str                       # "ordinary" | "confidence"
    gamma: float | None = None
    ci: tuple[float, float] | None = None

    @property
    def r(self) -> int:
        return len(self.selected)


@dataclass(frozen=True)
class BootstrapCI:
    center: float
    se_boot: float
    resamples: int
    boot_seed: int

    def __post_init__(self):
        if self.se_boot < 0 or self.resamples < 2:
            raise ContractError("need se_boot >= 0 and resamples >= 2")

    def interval(self, gamma: float) -> tuple[float, float]:
        if not 0.0 <= gamma <= 1.0:
            raise ContractError(f"gamma must be in [0,1], got {gamma}")
        if gamma >= 1.0:
            return (-np.inf, np.inf)
        half = norm.ppf((1.0 + gamma) / 2.0) * self.se_boot
        return (self.center - half, self.center + half)


def select_ordinary(votes: AggregateVotes) -> ScreenResult:
    """Voting selection at the fixed level 0.5 with alpha_hat = 1/(R v 1)."""
    selected = frozenset(int(j) for j in np.flatnonzero(votes.phi > 0.5))
    alpha_hat = 1.0 / max(len(selected), 1)
    return ScreenResult(selected, alpha_hat, "ordinary")


def fit_bootstrap(dummy_pool: np.ndarray, resamples: int, boot_seed: int) -> BootstrapCI:
    """Nonparametric bootstrap of the dummy-pool mean (resample means' SD)."""
    pool = np.asarray(dummy_pool, dtype=float)
    if pool.size == 0:
        raise EmptyDummyPoolError(
            "dummy pool is empty; fall back to the ordinary method"
        )
    if resamples < 2:
        raise ContractError("need at least 2 bootstrap resamples")
    rng = np.random.Generator(np.random.Philox(key=int(boot_seed) & (2**128 - 1)))
    idx = rng.integers(0, pool.size, size=(resamples, pool.size))
    means = pool[idx].mean(axis=1)
    se = float(np.std(means, ddof=1))
    return BootstrapCI(float(pool.mean()), se, resamples, boot_seed)


def bootstrap_ci(dummy_pool: np.ndarray, gamma: float,
                 resamples: int = DEFAULT_RESAMPLES, boot_seed: int = 0) -> tuple[float, float]:
    """Normal bootstrap confidence interval for the dummy-pool mean."""
    return fit_bootstrap(dummy_pool, resamples, boot_seed).interval(gamma)


def _n_outside(avg_coefs: np.ndarray, boot: BootstrapCI, gamma: float) -> int:
    lo, hi = boot.interval(gamma)
    # strict non-membership: the interval boundary counts as inside
    return int(np.count_nonzero((avg_coefs < lo) | (avg_coefs > hi)))


def select_confidence(votes: AggregateVotes, r_ordinary: int,
                      resamples: int = DEFAULT_RESAMPLES, boot_seed: int = 0,
                      gamma_step: float = GAMMA_STEP) -> ScreenResult:
    """Infimum-gamma confidence selection.

    Scans an ascending gamma grid for the first level whose interval excludes
    at most r_ordinary averaged coefficients; the bootstrap seed is fixed so
    the scanned function is deterministic. gamma = 1 (full real line) is
    always feasible.
    """
    boot = fit_bootstrap(votes.dummy_pool, resamples, boot_seed)
    grid = np.arange(0.0, 1.0 + gamma_step / 2, gamma_step)
    grid[-1] = 1.0
    # vectorized ascending-grid scan: #outside(g) = #{|avg - center| > z(g)*se},
    # non-increasing in g, so the first feasible grid point is the infimum
    dist = np.sort(np.abs(votes.avg_coefs - boot.center))
    with np.errstate(invalid="ignore"):
        half = norm.ppf((1.0 + grid[:-1]) / 2.0) * boot.se_boot
    counts = dist.size - np.searchsorted(dist, half, side="right")
    feasible = np.flatnonzero(counts <= r_ordinary)
    gamma = float(grid[feasible[0]]) if feasible.size else 1.0
    lo, hi = boot.interval(gamma)
    selected = frozenset(
        int(j) for j in np.flatnonzero((votes.avg_coefs < lo) | (votes.avg_coefs > hi))
    )
    alpha_hat = 1.0 / max(len(selected), 1)
    return ScreenResult(selected, alpha_hat, "confidence", gamma=gamma, ci=(lo, hi))


def nhg_mean(population: int, nulls: int, stops: int) -> float:
    """Expected null draws before the stops-th dummy in a nulls/dummies urn."""
    dummies = population - nulls
    if not 0 <= nulls <= population:
        raise ContractError("need 0 <= nulls <= population")
    if not 1 <= stops <= dummies:
        raise ContractError("need 1 <= stops <= population - nulls")
    return stops * nulls / (dummies + 1)
