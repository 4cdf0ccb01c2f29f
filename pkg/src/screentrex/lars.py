"""Least angle regression path solver with dummy-count early termination.

Pure LARS (no lasso drop steps): one variable enters per knot and the path
advances along the equiangular direction of the active set. The path stops at
the end of the step during which the t_stop-th dummy entered, so the
terminating dummy always carries a nonzero coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ContractError, RankDeficiencyError

_STD_TOL = 1e-8
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class PathConfig:
    """t_stop: dummy inclusions that trigger termination; dummy_start: first
    dummy column index in the extended matrix; max_steps: hard cap on knots."""

    t_stop: int
    dummy_start: int
    max_steps: int = 10_000

    def __post_init__(self):
        if self.t_stop < 1:
            raise ContractError(f"t_stop must be >= 1, got {self.t_stop}")
        if self.dummy_start < 0:
            raise ContractError("dummy_start must be non-negative")


@dataclass(frozen=True)
class PathResult:
    entry_order: tuple[int, ...]
    coefficients: np.ndarray
    dummies_included: int
    terminated_early: bool


def _check_standardized(x_ext: np.ndarray, y_c: np.ndarray):
    if abs(float(np.mean(y_c))) > _STD_TOL * (1.0 + float(np.max(np.abs(y_c), initial=0.0))):
        raise ContractError("response is not centered")
    means = x_ext.mean(axis=0)
    norms = np.linalg.norm(x_ext, axis=0)
    if np.any(np.abs(means) > _STD_TOL) or np.any(np.abs(norms - 1.0) > _STD_TOL):
        j = int(np.argmax(np.maximum(np.abs(means), np.abs(norms - 1.0))))
        raise ContractError(
            f"column {j} is not standardized (mean {means[j]:.3e}, "
            f"norm {norms[j]:.6f})"
        )


def lars_path(x_ext: np.ndarray, y_c: np.ndarray, cfg: PathConfig) -> PathResult:
    """Run LARS on the extended (originals + dummies) matrix.

    Returns entry order and the coefficient vector at the termination knot.
    terminated_early is true iff the dummy quota was hit before the path
    exhausted (active set full or residual correlation zero).
    """
    x_ext = np.asarray(x_ext, dtype=float)
    y_c = np.asarray(y_c, dtype=float)
    n, m = x_ext.shape
    if cfg.dummy_start > m:
        raise ContractError(f"dummy_start {cfg.dummy_start} exceeds {m} columns")
    _check_standardized(x_ext, y_c)

    coefs = np.zeros(m)
    active: list[int] = []
    inactive = np.ones(m, dtype=bool)
    c = x_ext.T @ y_c
    max_active = min(n - 1, m)
    dummies_included = 0
    terminated_early = False
    corr_floor = _STD_TOL * max(1.0, float(np.max(np.abs(c), initial=0.0)))

    for _ in range(cfg.max_steps):
        if not np.any(inactive) or len(active) >= max_active:
            break
        abs_c = np.where(inactive, np.abs(c), -np.inf)
        cmax = float(np.max(abs_c))
        if cmax <= corr_floor:
            break
        # lowest-index tie break at relative tolerance
        ties = np.flatnonzero(abs_c >= cmax * (1.0 - _TIE_RTOL))
        j = int(ties[0])
        active.append(j)
        inactive[j] = False

        x_a = x_ext[:, active]
        s = np.sign(c[active])
        s[s == 0.0] = 1.0
        gram = x_a.T @ x_a
        try:
            factor = cho_factor(gram)
        except np.linalg.LinAlgError:
            raise RankDeficiencyError(active) from None
        try:
            w0 = cho_solve(factor, s)
        except np.linalg.LinAlgError:
            raise RankDeficiencyError(active) from None
        denom = float(s @ w0)
        if denom <= 0.0:
            raise RankDeficiencyError(active)
        a_norm = 1.0 / np.sqrt(denom)
        w = a_norm * w0                      # beta-space direction: x_a @ w = u
        u = x_a @ w                          # unit equiangular vector
        a = x_ext.T @ u                      # correlations with u; a[active] = a_norm * s

        gamma_max = cmax / a_norm            # advance to the least-squares end
        gamma = gamma_max
        if len(active) < max_active and np.any(inactive):
            ci = c[inactive]
            ai = a[inactive]
            with np.errstate(divide="ignore", invalid="ignore"):
                g1 = (cmax - ci) / (a_norm - ai)
                g2 = (cmax + ci) / (a_norm + ai)
            cand = np.concatenate([g1, g2])
            tiny = _TIE_RTOL * gamma_max
            cand = cand[np.isfinite(cand) & (cand > tiny)]
            if cand.size:
                gamma = min(gamma_max, float(np.min(cand)))

        coefs[active] += gamma * w
        # full refresh for numerical robustness (no incremental drift)
        c = x_ext.T @ (y_c - x_ext @ coefs)

        if j >= cfg.dummy_start:
            dummies_included += 1
            if dummies_included >= cfg.t_stop:
                terminated_early = True
                break

    coefs.setflags(write=False)
    return PathResult(tuple(active), coefs, dummies_included, terminated_early)


def knot_correlations(x_ext: np.ndarray, y_c: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Current correlations c = X'(y - X b); test instrumentation only."""
    x_ext = np.asarray(x_ext, dtype=float)
    return x_ext.T @ (np.asarray(y_c, dtype=float) - x_ext @ np.asarray(coefficients, dtype=float))
