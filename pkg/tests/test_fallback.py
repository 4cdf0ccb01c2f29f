import numpy as np
import pytest

from screentrex.data import standardize
from screentrex.errors import ContractError
from screentrex.experiments import ExperimentPlan, aggregate, run_experiments
from screentrex.fallback import calibrate_trex, _t_max
from screentrex.selector import select_ordinary
from screentrex.simbench import SimSpec, simulate


@pytest.fixture(scope="module")
def signal_case():
    truth = simulate(SimSpec(n=60, p=40, p1=4, snr=3, seed=21))
    return truth, standardize(truth.dataset)


class TestCalibrate:
    def test_alpha_one_contains_ordinary_selection(self, signal_case):
        truth, std = signal_case
        plan = ExperimentPlan(k=10, l=0, t=1, master_seed=21)
        cal = calibrate_trex(std, alpha=1.0, plan=plan)
        ordinary = select_ordinary(aggregate(run_experiments(std, plan)))
        assert cal.selected >= ordinary.selected

    def test_votes_monotone_in_t(self, signal_case):
        _, std = signal_case
        plan = ExperimentPlan(k=10, l=0, t=1, master_seed=4)
        cal = calibrate_trex(std, alpha=0.5, plan=plan)
        ts = sorted(cal.votes_by_t)
        for t_prev, t_next in zip(ts, ts[1:]):
            assert np.all(cal.votes_by_t[t_next] >= cal.votes_by_t[t_prev] - 1e-15)

    def test_fdr_estimate_within_target(self, signal_case):
        _, std = signal_case
        plan = ExperimentPlan(k=10, l=0, t=1, master_seed=5)
        for alpha in (0.05, 0.2, 0.5):
            cal = calibrate_trex(std, alpha=alpha, plan=plan)
            if cal.selected:
                assert cal.fdr_estimate <= alpha
                assert cal.feasible

    def test_selected_matches_vote_threshold(self, signal_case):
        _, std = signal_case
        plan = ExperimentPlan(k=10, l=0, t=1, master_seed=6)
        cal = calibrate_trex(std, alpha=0.5, plan=plan)
        if cal.feasible:
            phi = cal.votes_by_t[cal.t_star]
            assert cal.selected == {int(j) for j in np.flatnonzero(phi > cal.v_star)}

    def test_shrinking_alpha_never_grows_selection(self, signal_case):
        _, std = signal_case
        plan = ExperimentPlan(k=10, l=0, t=1, master_seed=7)
        sizes = [len(calibrate_trex(std, alpha=a, plan=plan).selected)
                 for a in (1.0, 0.5, 0.2, 0.1, 0.02)]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))

    def test_infeasible_returns_empty_with_flag(self):
        # pure noise at a tiny alpha: nothing can be certified
        truth = simulate(SimSpec(n=30, p=20, p1=0, snr=1, seed=8))
        std = standardize(truth.dataset)
        cal = calibrate_trex(std, alpha=0.01,
                             plan=ExperimentPlan(k=5, l=0, t=1, master_seed=8))
        assert cal.selected == frozenset()
        if not cal.feasible:
            assert cal.fdr_estimate == 0.0

    def test_bad_alpha(self, signal_case):
        _, std = signal_case
        with pytest.raises(ContractError):
            calibrate_trex(std, alpha=0.0, plan=ExperimentPlan(master_seed=1))

    def test_deterministic(self, signal_case):
        _, std = signal_case
        plan = ExperimentPlan(k=8, l=0, t=1, master_seed=9)
        a = calibrate_trex(std, 0.3, plan)
        b = calibrate_trex(std, 0.3, plan)
        assert a.selected == b.selected
        assert a.t_star == b.t_star and a.v_star == b.v_star
        assert a.fdr_estimate == b.fdr_estimate


class TestBudgetCap:
    def test_t_max_bounds(self):
        assert _t_max(0.1, 1000) == 10
        assert _t_max(0.01, 100) == 2
        assert _t_max(1.0, 1000) == 10
        assert _t_max(0.02, 300) == 3
