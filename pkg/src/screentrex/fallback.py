"""Calibrated T-Rex fallback: sweep the dummy budget T and voting level v.

Used when neither Screen-T-Rex estimate lands in the acceptance window. For
each budget T the K random experiments are extended (same dummy matrices, more
dummies allowed in), votes are recomputed, and a conservative urn-based FDR
estimate is evaluated on a voting-level grid. The selection maximizing the
number of selected variables subject to the estimate staying below the target
is returned. This calibration is a reconstruction built on the urn expectation
and a voting attenuation heuristic; its FDR control is validated empirically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import StandardizedDataset, standardize_columns
from .errors import ContractError, ScreenTrexError
from .experiments import ExperimentPlan, outcome_from_path, split_seed, generate_dummies
from .lars import PathConfig, lars_path
from .selector import nhg_mean

V_GRID = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))  # 0.5 .. 0.95


@dataclass(frozen=True)
class CalibrationResult:
    selected: frozenset[int]
    v_star: float
    t_star: int
    fdr_estimate: float
    votes_by_t: dict[int, np.ndarray]
    feasible: bool


def _t_max(alpha: float, p: int) -> int:
    return min(10, max(2, int(np.ceil(alpha * p / 2))))


def _fdr_estimate(p: int, l: int, t: int, v: float, r: int) -> float:
    # Expected null entries per experiment is the urn mean T*p/(L+1). Null
    # inclusions are strongly correlated across experiments (the data is
    # fixed; only the dummies vary), so voting thresholds above 0.5 do not
    # reliably thin them out and no voting attenuation is applied.
    return min(1.0, nhg_mean(p + l, p, t) / max(r, 1))


def calibrate_trex(d: StandardizedDataset, alpha: float,
                   plan: ExperimentPlan) -> CalibrationResult:
    """Select as many variables as possible with the FDR estimate <= alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ContractError(f"alpha must be in (0, 1], got {alpha}")
    p = d.p
    l = plan.dummies_for(p)
    t_max = _t_max(alpha, p)

    # The dummy matrix of experiment k is drawn once and reused across every
    # budget T, so the per-T votes are prefix-consistent and monotone in T.
    counts = np.zeros((t_max, p))
    for k in range(plan.k):
        sub_seed = split_seed(plan.master_seed, k)
        dummies = standardize_columns(generate_dummies(d.n, l, sub_seed))
        x_ext = np.hstack([d.x_std, dummies])
        for t in range(1, t_max + 1):
            try:
                res = lars_path(x_ext, d.y_c, PathConfig(t_stop=t, dummy_start=p))
            except ScreenTrexError as err:
                err.args = (f"experiment {k}, budget {t}: {err}",)
                raise
            entered = [j for j in res.entry_order if j < p]
            if entered:
                counts[t - 1, entered] += 1.0

    votes_by_t = {t: counts[t - 1] / plan.k for t in range(1, t_max + 1)}
    for phi in votes_by_t.values():
        phi.setflags(write=False)

    best = None  # (r, -fdr_est, -t, v, selected)
    for t in range(1, t_max + 1):
        phi = votes_by_t[t]
        for v in V_GRID:
            sel = np.flatnonzero(phi > v)
            est = _fdr_estimate(p, l, t, v, sel.size)
            if est > alpha:
                continue
            key = (sel.size, -est, -t, v)
            if best is None or key > best[0]:
                best = (key, frozenset(int(j) for j in sel), v, t, est)

    if best is None:
        return CalibrationResult(frozenset(), 0.5, 1, 0.0, votes_by_t, feasible=False)
    _, selected, v_star, t_star, est = best
    return CalibrationResult(selected, v_star, t_star, est, votes_by_t, feasible=True)
