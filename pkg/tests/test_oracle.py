import math

import numpy as np
import pytest

from binratio import (
    BudgetError,
    ModelParams,
    Regime,
    exact_distribution,
    exact_vs_theory_convergence,
    limit_law,
    simulate_batch,
)
from binratio.oracle import _exact_distribution_raw
from binratio.sampling import SeedSpec


class TestExactDistribution:
    def test_symmetric_tiny_instance_mean(self):
        # E[R | X+Y=k] = 1/2 for k >= 1 by symmetry, so E[R] = (1 - 2^-4)/2
        params = ModelParams(n=2, m=2, p=0.5, s=1.0, r=1.0)
        dist = exact_distribution(params)
        assert dist.mean == pytest.approx(15 / 32, rel=1e-12)

    def test_probabilities_sum_to_one(self):
        for n, m, p in [(2, 2, 0.5), (50, 80, 0.3), (400, 600, 0.7)]:
            params = ModelParams(n=n, m=m, p=p, s=2.0, r=1.0)
            dist = exact_distribution(params, keep_support=False)
            assert dist.probability_total == pytest.approx(1.0, abs=1e-12)

    def test_support_is_full_grid(self):
        params = ModelParams(n=3, m=4, p=0.5, s=1.0, r=1.0)
        dist = exact_distribution(params)
        assert len(dist.values) == 4 * 5
        assert math.fsum(dist.probabilities) == pytest.approx(1.0, abs=1e-12)

    def test_zero_exponent_diagnostic_path(self):
        # r = 0 makes R = X, whose mean is n p
        dist = _exact_distribution_raw(1, 1, 0.5, s=1.0, r=0.0)
        assert dist.mean == pytest.approx(0.5, rel=1e-12)
        dist2 = _exact_distribution_raw(10, 5, 0.3, s=1.0, r=0.0)
        assert dist2.mean == pytest.approx(3.0, rel=1e-12)
        assert dist2.variance == pytest.approx(10 * 0.3 * 0.7, rel=1e-12)

    def test_standardized_variance_tracks_law(self):
        regime = Regime.case_ii(1.5)
        small = ModelParams(n=40, m=60, p=0.5, s=2.0, r=1.0)
        big = ModelParams(n=400, m=600, p=0.5, s=2.0, r=1.0)
        law_small = limit_law(small, regime)
        law_big = limit_law(big, regime)
        var_small = exact_distribution(small, standardize=True, regime=regime).variance
        var_big = exact_distribution(big, standardize=True, regime=regime).variance
        assert var_small == pytest.approx(law_small.variance, rel=0.25)
        assert var_big == pytest.approx(law_big.variance, rel=0.05)

    def test_matches_monte_carlo(self):
        params = ModelParams(n=50, m=80, p=0.3, s=2.0, r=1.0)
        regime = Regime.case_ii(1.6)
        dist = exact_distribution(params, standardize=True, regime=regime)
        batch = simulate_batch(params, regime, 10**6, SeedSpec(77))
        stderr_mean = batch.values.std() / math.sqrt(batch.count)
        assert abs(batch.values.mean() - dist.mean) < 5 * stderr_mean
        # variance stderr ~ var * sqrt(2/N) for near-Normal samples
        stderr_var = dist.variance * math.sqrt(2 / batch.count)
        assert abs(batch.values.var() - dist.variance) < 5 * stderr_var

    def test_budget_exceeded(self):
        params = ModelParams(n=20_000, m=20_000, p=0.5, s=1.0, r=1.0)
        with pytest.raises(BudgetError):
            exact_distribution(params)


class TestConvergence:
    def test_relative_error_decreases(self):
        base = ModelParams(n=50, m=50, p=0.5, s=1.0, r=1.0)
        rows = exact_vs_theory_convergence(base, Regime.case_ii(1.0), [1, 4, 16])
        errs = [row.relative_error for row in rows]
        assert errs[0] > errs[1] > errs[2]

    def test_first_row_matches_direct_enumeration(self):
        base = ModelParams(n=50, m=50, p=0.5, s=1.0, r=1.0)
        regime = Regime.case_ii(1.0)
        rows = exact_vs_theory_convergence(base, regime, [1])
        direct = exact_distribution(base, standardize=True, regime=regime)
        assert rows[0].exact_variance == direct.variance

    def test_degenerate_law_reports_absolute_variance(self):
        base = ModelParams(n=30, m=30, p=0.5, s=2.0, r=2.0)
        rows = exact_vs_theory_convergence(base, Regime.case_iii(), [1, 4, 16])
        assert all(row.theory_variance == 0.0 for row in rows)
        vals = [row.relative_error for row in rows]
        assert vals[0] > vals[1] > vals[2]

    def test_standardized_mean_shrinks(self):
        # asymmetric instance so the first-order bias is nonzero and the
        # standardized mean has something to shrink from
        regime = Regime.case_ii(1.0)
        means = []
        for k in [1, 4, 16]:
            params = ModelParams(n=50 * k, m=50 * k, p=0.3, s=2.0, r=1.0)
            dist = exact_distribution(params, standardize=True, regime=regime,
                                      keep_support=False)
            means.append(abs(dist.mean))
        assert means[0] > means[1] > means[2]
