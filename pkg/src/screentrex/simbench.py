"""Synthetic data generation, FDP/TPP metrics, the urn oracle, and the
Monte Carlo campaign harness.

Two designs: i.i.d. Gaussian, and a genotype-like design (latent AR(1)
Gaussian thresholded to {0,1,2} dosages at Hardy-Weinberg quantiles for a
minor-allele frequency drawn per column).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .data import Dataset, standardize
from .errors import ContractError, DataFormatError, ScreenTrexError
from .experiments import ExperimentPlan, aggregate, run_experiments
from .fallback import calibrate_trex
from .selector import select_confidence, select_ordinary

_METHODS = ("ordinary", "confidence", "fallback")


@dataclass(frozen=True)
class SimSpec:
    n: int
    p: int
    p1: int
    snr: float
    design: str = "gaussian"           # "gaussian" | "genotype"
    beta_value: float = 1.0
    seed: int = 0
    maf_range: tuple[float, float] = (0.05, 0.45)
    corr_rho: float = 0.5
    case_fraction: float | None = None  # genotype mode: binarize y at this rate

    def __post_init__(self):
        if self.p1 > self.p or self.p1 < 0:
            raise ContractError("need 0 <= p1 <= p")
        if self.snr <= 0:
            raise ContractError("snr must be > 0")
        if self.design not in ("gaussian", "genotype"):
            raise ContractError(f"unknown design {self.design!r}")


@dataclass(frozen=True)
class TruthedDataset:
    dataset: Dataset
    support: frozenset[int]
    beta: np.ndarray
    sigma2: float


@dataclass(frozen=True)
class MetricRow:
    fdp: float
    tpp: float
    alpha_hat: float
    n_selected: int
    wall_time: float
    method: str
    rep: int = 0


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**128 - 1)))


def _genotype_design(spec: SimSpec, rng: np.random.Generator) -> np.ndarray:
    lo, hi = spec.maf_range
    maf = rng.uniform(lo, hi, size=spec.p)
    # HWE dosage cutpoints on the latent normal: P(2) = maf^2, P(1) = 2*maf*(1-maf)
    q2 = norm.ppf(1.0 - maf**2)
    q1 = norm.ppf((1.0 - maf) ** 2)
    rho = spec.corr_rho
    z = rng.standard_normal((spec.n, spec.p))
    for j in range(1, spec.p):
        z[:, j] = rho * z[:, j - 1] + np.sqrt(1.0 - rho**2) * z[:, j]
    x = (z > q1).astype(float) + (z > q2)
    for j in range(spec.p):
        for _ in range(100):
            if x[:, j].std() > 0:
                break
            col = rng.standard_normal(spec.n)
            x[:, j] = (col > q1[j]).astype(float) + (col > q2[j])
        else:
            raise DataFormatError(f"genotype column {j} stayed constant after retries")
    return x


def simulate(spec: SimSpec) -> TruthedDataset:
    """Draw a dataset with known support; sigma2 enforces the requested SNR."""
    rng = _rng(spec.seed)
    if spec.design == "gaussian":
        x = rng.standard_normal((spec.n, spec.p))
    else:
        x = _genotype_design(spec, rng)
    support = rng.choice(spec.p, size=spec.p1, replace=False) if spec.p1 else np.array([], dtype=int)
    beta = np.zeros(spec.p)
    beta[support] = spec.beta_value
    signal = x @ beta
    sigma2 = float(np.var(signal)) / spec.snr if spec.p1 else 1.0
    y = signal + np.sqrt(sigma2) * rng.standard_normal(spec.n)
    if spec.case_fraction is not None:
        y = (y > np.quantile(y, 1.0 - spec.case_fraction)).astype(float)
    labels = tuple(f"V{j + 1}" for j in range(spec.p))
    beta.setflags(write=False)
    return TruthedDataset(Dataset(x, y, labels), frozenset(int(j) for j in support),
                          beta, sigma2)


def score(selected, truth: TruthedDataset, alpha_hat: float = float("nan"),
          wall_time: float = 0.0, method: str = "", rep: int = 0) -> MetricRow:
    """FDP and TPP of a selection against the known support."""
    selected = frozenset(int(j) for j in selected)
    if selected and (min(selected) < 0 or max(selected) >= truth.dataset.p):
        raise ContractError("selected indices out of range")
    p1 = len(truth.support)
    fdp = len(selected - truth.support) / max(len(selected), 1)
    tpp = len(selected & truth.support) / max(p1, 1)
    return MetricRow(fdp, tpp, alpha_hat, len(selected), wall_time, method, rep)


def nhg_urn_sample(nulls: int, dummies: int, stops: int, seed: int,
                   size: int = 1) -> np.ndarray:
    """Number of nulls drawn before the stops-th dummy, urn without replacement.

    Sampled through the latent-uniform representation: attach i.i.d. U(0,1)
    marks to every item; the stops-th smallest dummy mark is Beta(stops,
    dummies - stops + 1) and the null count below it is Binomial(nulls, U).
    This is distributionally identical to drawing the urn item by item.
    """
    if not 1 <= stops <= dummies:
        raise ContractError("need dummies >= stops >= 1")
    if nulls < 0:
        raise ContractError("nulls must be >= 0")
    rng = _rng(seed)
    u = rng.beta(stops, dummies - stops + 1, size=size)
    return rng.binomial(nulls, u)


def _run_method(method: str, std, plan: ExperimentPlan, cfg) -> tuple[frozenset, float]:
    if method == "fallback":
        cal = calibrate_trex(std, cfg.alpha, plan)
        return cal.selected, cal.fdr_estimate
    outcomes = run_experiments(std, plan)
    votes = aggregate(outcomes)
    ordinary = select_ordinary(votes)
    if method == "ordinary":
        return ordinary.selected, ordinary.alpha_hat
    conf = select_confidence(votes, ordinary.r, resamples=cfg.resamples,
                             boot_seed=plan.master_seed)
    return conf.selected, conf.alpha_hat


@dataclass
class CampaignSummary:
    method: str
    snr: float
    reps: int
    mean_fdp: float
    se_fdp: float
    mean_tpp: float
    se_tpp: float
    mean_alpha_hat: float
    se_alpha_hat: float
    mean_n_selected: float
    mean_wall_time: float
    failures: int = 0


def summarize(rows: list[MetricRow], method: str, snr: float,
              failures: int = 0) -> CampaignSummary:
    fdp = np.array([r.fdp for r in rows])
    tpp = np.array([r.tpp for r in rows])
    ah = np.array([r.alpha_hat for r in rows])
    nsel = np.array([r.n_selected for r in rows], dtype=float)
    wt = np.array([r.wall_time for r in rows])
    reps = len(rows)
    se = lambda v: float(np.std(v, ddof=1) / np.sqrt(reps)) if reps > 1 else 0.0
    return CampaignSummary(method, snr, reps, float(fdp.mean()), se(fdp),
                           float(tpp.mean()), se(tpp), float(ah.mean()), se(ah),
                           float(nsel.mean()), float(wt.mean()), failures)


@dataclass
class CampaignResult:
    rows: list[MetricRow] = field(default_factory=list)
    summaries: list[CampaignSummary] = field(default_factory=list)
    failures: int = 0


def mc_campaign(spec: SimSpec, reps: int, methods, cfg=None,
                snr_grid=None) -> CampaignResult:
    """Monte Carlo harness: per-rep metric rows plus per-method summaries.

    With snr_grid set, the whole campaign repeats per SNR value and one
    summary block is emitted per (snr, method).
    """
    from .driver import ScreenConfig  # deferred: driver imports this module

    if reps < 1:
        raise ContractError("reps must be >= 1")
    methods = list(methods)
    for m in methods:
        if m not in _METHODS:
            raise ContractError(f"unknown method {m!r}")
    cfg = cfg or ScreenConfig()
    result = CampaignResult()
    snrs = list(snr_grid) if snr_grid is not None else [spec.snr]

    for snr in snrs:
        per_method: dict[str, list[MetricRow]] = {m: [] for m in methods}
        failures = 0
        for rep in range(reps):
            rep_seed = (int(spec.seed) * 1_000_003 + rep) & (2**63 - 1)
            rep_spec = SimSpec(spec.n, spec.p, spec.p1, snr, spec.design,
                               spec.beta_value, rep_seed, spec.maf_range,
                               spec.corr_rho, spec.case_fraction)
            try:
                truth = simulate(rep_spec)
                std = standardize(truth.dataset)
                plan = ExperimentPlan(k=cfg.k, l=0, t=1, master_seed=rep_seed)
                for m in methods:
                    t0 = time.perf_counter()
                    selected, alpha_hat = _run_method(m, std, plan, cfg)
                    dt = time.perf_counter() - t0
                    row = score(selected, truth, alpha_hat, dt, m, rep)
                    per_method[m].append(row)
                    result.rows.append(row)
            except ScreenTrexError:
                failures += 1
        for m in methods:
            if per_method[m]:
                result.summaries.append(summarize(per_method[m], m, snr, failures))
        result.failures += failures
    return result
