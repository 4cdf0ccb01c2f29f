"""Dummy generation, the K random experiments, and vote aggregation.

Each experiment appends L standard-normal dummy columns to the standardized
design, runs the LARS path until t dummies have entered, and records which
original variables entered first. Sub-seeds are derived with a counter-based
split so experiment k is reproducible regardless of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import StandardizedDataset, standardize_columns
from .errors import ContractError, ScreenTrexError
from .lars import PathConfig, PathResult, lars_path


@dataclass(frozen=True)
class ExperimentPlan:
    k: int = 20
    l: int = 0          # 0 means "use p" (Screen mode fixes L = p)
    t: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.t < 1 or self.l < 0:
            raise ContractError("need k >= 1, t >= 1, l >= 0")

    def dummies_for(self, p: int) -> int:
        return self.l if self.l >= 1 else p


@dataclass(frozen=True)
class ExperimentOutcome:
    candidate_set: frozenset[int]
    orig_coefs: np.ndarray
    dummy_coefs: np.ndarray
    included_dummy_coef: float | None
    terminated_early: bool
    entry_order: tuple[int, ...]   # extended-matrix indices, dummies >= p
    p: int


@dataclass(frozen=True)
class AggregateVotes:
    phi: np.ndarray
    avg_coefs: np.ndarray
    dummy_pool: np.ndarray
    k: int
    reduced_pool: bool   # true when some experiment lacked a nonzero dummy coef


def split_seed(master_seed: int, k: int) -> int:
    """Derive the k-th experiment's sub-seed (order-independent)."""
    ss = np.random.SeedSequence(entropy=int(master_seed) & (2**64 - 1), spawn_key=(k,))
    return int(ss.generate_state(1, np.uint64)[0])


def generate_dummies(n: int, l: int, seed: int) -> np.ndarray:
    """n x l matrix of i.i.d. N(0,1) draws from a counter-based (Philox) RNG."""
    if n < 1 or l < 1:
        raise ContractError("need n >= 1 and l >= 1")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & (2**128 - 1)))
    return rng.standard_normal((n, l))


def _run_single(d: StandardizedDataset, l: int, t: int, sub_seed: int,
                max_steps: int = 10_000) -> ExperimentOutcome:
    p = d.p
    dummies = standardize_columns(generate_dummies(d.n, l, sub_seed))
    x_ext = np.hstack([d.x_std, dummies])
    res: PathResult = lars_path(x_ext, d.y_c, PathConfig(t_stop=t, dummy_start=p,
                                                         max_steps=max_steps))
    return outcome_from_path(res, p, l)


def outcome_from_path(res: PathResult, p: int, l: int) -> ExperimentOutcome:
    candidate = frozenset(j for j in res.entry_order if j < p)
    orig = res.coefficients[:p].copy()
    dummy = res.coefficients[p:p + l].copy()
    included = None
    if res.terminated_early:
        # terminating dummy = last entry; nonzero because the step completes
        last = res.entry_order[-1]
        if last >= p and dummy[last - p] != 0.0:
            included = float(dummy[last - p])
    orig.setflags(write=False)
    dummy.setflags(write=False)
    return ExperimentOutcome(candidate, orig, dummy, included,
                             res.terminated_early, res.entry_order, p)


def run_experiments(d: StandardizedDataset, plan: ExperimentPlan) -> list[ExperimentOutcome]:
    """Run the K random experiments; deterministic given plan.master_seed."""
    l = plan.dummies_for(d.p)
    outcomes = []
    for k in range(plan.k):
        try:
            outcomes.append(_run_single(d, l, plan.t, split_seed(plan.master_seed, k)))
        except ScreenTrexError as err:
            err.args = (f"experiment {k}: {err}",)
            raise
    return outcomes


def aggregate(outcomes: list[ExperimentOutcome]) -> AggregateVotes:
    """Relative occurrences and averaged coefficients over the K experiments."""
    if not outcomes:
        raise ContractError("need at least one outcome")
    p = outcomes[0].p
    if any(o.p != p for o in outcomes):
        raise ContractError("outcomes disagree on p")
    k = len(outcomes)
    counts = np.zeros(p)
    avg = np.zeros(p)
    pool = []
    for o in outcomes:
        if o.candidate_set:
            counts[list(o.candidate_set)] += 1.0
        avg += o.orig_coefs
        if o.included_dummy_coef is not None:
            pool.append(o.included_dummy_coef)
    phi = counts / k
    avg /= k
    phi.setflags(write=False)
    avg.setflags(write=False)
    return AggregateVotes(phi, avg, np.asarray(pool), k, reduced_pool=len(pool) < k)
