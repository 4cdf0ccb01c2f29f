"""Per-phenotype screening workflow and batch execution.

The decision step picks between the confidence-based and ordinary
Screen-T-Rex selections when their self-estimated FDRs land inside the
acceptance window [alpha_l, alpha_u]; otherwise the calibrated fallback
selector runs at the user's target FDR.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .data import Dataset, load_csv, standardize
from .errors import ContractError, ScreenTrexError
from .experiments import ExperimentPlan, aggregate, run_experiments
from .fallback import calibrate_trex
from .selector import select_confidence, select_ordinary


@dataclass(frozen=True)
class ScreenConfig:
    alpha: float = 0.1
    alpha_l: float = 0.05
    alpha_u: float = 0.2
    k: int = 20
    master_seed: int = 0
    resamples: int = 1000
    threads: int = 1

    def __post_init__(self):
        if not (0.0 < self.alpha_l <= self.alpha_u <= 1.0):
            raise ContractError("need 0 < alpha_l <= alpha_u <= 1")
        if not (0.0 < self.alpha <= 1.0):
            raise ContractError("need 0 < alpha <= 1")
        if self.k < 1 or self.resamples < 2 or self.threads < 1:
            raise ContractError("bad k/resamples/threads")


@dataclass(frozen=True)
class BiobankDecision:
    phenotype_id: str
    final_set: frozenset[int]
    branch: str                      # "confidence" | "ordinary" | "fallback"
    alpha_hat: float
    alpha_hat_c: float
    fallback_used: bool
    wall_time: float
    gamma: float | None = None
    labels: tuple[str, ...] = field(default=())


def decide(alpha_hat: float, alpha_hat_c: float, cfg: ScreenConfig) -> str:
    """Acceptance-window case logic; ties go to the confidence branch."""
    a, ac = alpha_hat, alpha_hat_c
    if not (0.0 < a <= 1.0 and 0.0 < ac <= 1.0):
        raise ContractError("estimates must lie in (0, 1]")
    al, au = cfg.alpha_l, cfg.alpha_u
    conf = al <= ac <= au and max(ac, a * (1.0 if a <= au else 0.0)) == ac
    ordi = al <= a <= au and max(ac * (1.0 if ac <= au else 0.0), a) == a
    if conf:
        return "confidence"
    if ordi:
        return "ordinary"
    return "fallback"


def screen_phenotype(d: Dataset, cfg: ScreenConfig,
                     phenotype_id: str = "phenotype") -> BiobankDecision:
    """Run both Screen-T-Rex variants and resolve the final set."""
    t0 = time.perf_counter()
    std = standardize(d)
    plan = ExperimentPlan(k=cfg.k, l=0, t=1, master_seed=cfg.master_seed)
    votes = aggregate(run_experiments(std, plan))
    ordinary = select_ordinary(votes)
    confidence = select_confidence(votes, ordinary.r, resamples=cfg.resamples,
                                   boot_seed=cfg.master_seed)
    branch = decide(ordinary.alpha_hat, confidence.alpha_hat, cfg)
    if branch == "confidence":
        final = confidence.selected
    elif branch == "ordinary":
        final = ordinary.selected
    else:
        final = calibrate_trex(std, cfg.alpha, plan).selected
    return BiobankDecision(
        phenotype_id=phenotype_id,
        final_set=final,
        branch=branch,
        alpha_hat=ordinary.alpha_hat,
        alpha_hat_c=confidence.alpha_hat,
        fallback_used=branch == "fallback",
        wall_time=time.perf_counter() - t0,
        gamma=confidence.gamma,
        labels=d.labels,
    )


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _has_header(x_path: str) -> bool:
    """A predictor CSV has a header iff its first row is not all-numeric."""
    with open(x_path) as fh:
        first = fh.readline()
    cells = first.strip().split(",")
    if not first.strip():
        return False
    try:
        [float(c) for c in cells]
        return False
    except ValueError:
        return True


def run_batch(manifest: list[tuple[str, str, str]], cfg: ScreenConfig):
    """Screen every manifest entry; per-entry failures do not abort the batch.

    Returns (rows, summary): rows are dicts in manifest order, one per entry,
    either a result or an error record; identical output for any thread count.
    """
    if not manifest:
        raise ContractError("manifest is empty")

    def work(entry):
        x_path, y_path, pid = entry
        try:
            d = load_csv(x_path, y_path, header=_has_header(x_path))
        except (ScreenTrexError, OSError) as err:
            return {"phenotype_id": pid, "error": str(err)}
        try:
            dec = screen_phenotype(d, cfg, phenotype_id=pid)
        except ScreenTrexError as err:
            return {"phenotype_id": pid, "error": str(err)}
        return {
            "phenotype_id": dec.phenotype_id,
            "branch": dec.branch,
            "alpha_hat": _fmt(dec.alpha_hat),
            "alpha_hat_c": _fmt(dec.alpha_hat_c),
            "n_selected": len(dec.final_set),
            "selected": ";".join(str(j) for j in sorted(dec.final_set)),
            "wall_time": _fmt(dec.wall_time),
        }

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(work, manifest))
    else:
        rows = [work(e) for e in manifest]

    branch_counts: dict[str, int] = {}
    errors = 0
    for row in rows:
        if "error" in row:
            errors += 1
        else:
            branch_counts[row["branch"]] = branch_counts.get(row["branch"], 0) + 1
    summary = {
        "phenotypes": len(manifest),
        "errors": errors,
        "branches": branch_counts,
        "total_wall_time": _fmt(sum(float(r.get("wall_time", 0.0)) for r in rows)),
    }
    return rows, summary


def write_report(rows, summary, csv_path, json_path):
    fields = ["phenotype_id", "branch", "alpha_hat", "alpha_hat_c",
              "n_selected", "selected", "wall_time", "error"]
    import csv as _csv
    with open(csv_path, "w", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
