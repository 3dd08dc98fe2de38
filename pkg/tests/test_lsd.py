import itertools

import numpy as np
import pytest

from bdconvex.bdstate import Region, bd_from_probs, classify, density_matrix
from bdconvex.errors import MismatchError, NotSeparableError
from bdconvex.lsd import (
    LSDecomposition,
    lambda_for_candidate,
    optimal_lsd,
    residual_check,
    residual_spectrum,
)
from bdconvex.sampling import random_entangled


class TestCandidate:
    def test_optimal_candidate(self, rho07, sigma_star):
        assert lambda_for_candidate(rho07, sigma_star) == pytest.approx(0.6, abs=1e-15)

    def test_self(self):
        s = bd_from_probs([0.4, 0.3, 0.2, 0.1])
        assert lambda_for_candidate(s, s) == pytest.approx(1.0, abs=1e-15)

    def test_suboptimal(self, rho07):
        ratios = [0.7 / 0.4, 0.1 / 0.2, 0.1 / 0.2, 0.1 / 0.2]
        assert lambda_for_candidate(rho07, bd_from_probs([0.4, 0.2, 0.2, 0.2])) == pytest.approx(min(ratios))

    def test_zero_weight_in_rho(self):
        rho = bd_from_probs([0.8, 0.2, 0.0, 0.0])
        assert lambda_for_candidate(rho, bd_from_probs([0.25] * 4)) == 0.0

    def test_zero_weight_in_sigma_skipped(self):
        rho = bd_from_probs([0.8, 0.1, 0.1, 0.0])
        sigma = bd_from_probs([0.5, 0.25, 0.25, 0.0])
        assert lambda_for_candidate(rho, sigma) == pytest.approx(0.4)

    def test_entangled_candidate(self, rho07):
        with pytest.raises(NotSeparableError):
            lambda_for_candidate(rho07, rho07)

    def test_tight(self, rng):
        for rho in random_entangled(rng, 200):
            w = rng.dirichlet(np.ones(4))
            if w.max() > 0.5:
                continue
            sigma = bd_from_probs(w)
            lam = lambda_for_candidate(rho, sigma)
            gap = rho.p - lam * sigma.p
            assert gap.min() >= -1e-15
            assert (rho.p - (lam + 1e-9) * sigma.p).min() < 0

    def test_never_beats_optimum(self, rng):
        for rho in random_entangled(rng, 100):
            best = optimal_lsd(rho).lam
            for w in rng.dirichlet(np.ones(4), size=100):
                if w.max() <= 0.5:
                    assert lambda_for_candidate(rho, bd_from_probs(w)) <= best + 1e-12

    def test_profile_nondecreasing(self, rho07):
        grid = np.arange(1, 11) * 0.05
        lam = []
        for q1 in grid:
            sigma = bd_from_probs(np.concatenate([[q1], (1 - q1) * rho07.p[1:] / 0.3]))
            lam.append(lambda_for_candidate(rho07, sigma))
            assert lam[-1] == pytest.approx(0.3 / (1 - q1), abs=1e-14)
        assert all(b >= a for a, b in zip(lam, lam[1:]))
        assert int(np.argmax(lam)) == len(grid) - 1


class TestOptimal:
    def test_reference(self, rho07):
        d = optimal_lsd(rho07)
        assert d.lam == pytest.approx(0.6, abs=1e-15)
        assert np.allclose(d.separable.p, [0.5, 1 / 6, 1 / 6, 1 / 6], atol=1e-15)
        assert d.entangled_index == 1
        assert d.entangled_weight == pytest.approx(0.4, abs=1e-15)

    def test_separable(self):
        s = bd_from_probs([0.25] * 4)
        d = optimal_lsd(s)
        assert d.lam == 1.0 and d.separable == s and d.entangled_weight == 0.0

    def test_other_label(self):
        d = optimal_lsd(bd_from_probs([0.1, 0.1, 0.1, 0.7]))
        assert d.lam == pytest.approx(0.6)
        assert np.allclose(d.separable.p, [1 / 6, 1 / 6, 1 / 6, 0.5])
        assert d.entangled_index == 4

    def test_pure(self):
        d = optimal_lsd(bd_from_probs([0, 1, 0, 0]))
        assert d.lam == 0.0 and d.entangled_index == 2
        assert np.allclose(d.separable.p, 0.25)

    def test_invariants_random(self, rng):
        for rho in random_entangled(rng, 200):
            d = optimal_lsd(rho)
            assert np.max(np.abs(d.recombine() - rho.p)) <= 1e-12
            assert classify(d.separable).region is Region.SEPARABLE_BOUNDARY
            assert abs(d.lam - 2 * (1 - rho.p_max)) <= 1e-12

    def test_permutation_covariance(self):
        p = np.array([0.62, 0.2, 0.1, 0.08])
        base = optimal_lsd(bd_from_probs(p))
        for perm in itertools.permutations(range(4)):
            d = optimal_lsd(bd_from_probs(p[list(perm)]))
            assert d.lam == pytest.approx(base.lam, abs=1e-15)
            assert np.allclose(d.separable.p, base.separable.p[list(perm)], atol=1e-15)
            assert list(perm)[d.entangled_index - 1] == base.entangled_index - 1


class TestResidual:
    def test_pure_residual(self, rho07):
        d = optimal_lsd(rho07)
        spec = residual_spectrum(rho07, d)
        assert np.allclose(spec, [0, 0, 0, 1], atol=1e-14)
        assert residual_check(rho07, d) <= 1e-12

    def test_against_lapack(self, rho07):
        d = optimal_lsd(rho07)
        m = (density_matrix(rho07) - d.lam * density_matrix(d.separable)) / (1 - d.lam)
        assert np.allclose(residual_spectrum(rho07, d), np.linalg.eigvalsh(m), atol=1e-14)

    def test_separable(self):
        s = bd_from_probs([0.25] * 4)
        assert residual_check(s, optimal_lsd(s)) == 0.0

    def test_suboptimal_candidate(self, rho07):
        # 0.5 * (0.4, 0.2, 0.2, 0.2) leaves (0.5, 0, 0, 0), i.e. weight 0.5 on phi+
        d = LSDecomposition(0.5, bd_from_probs([0.4, 0.2, 0.2, 0.2]), 1, 0.5)
        m = (density_matrix(rho07) - 0.5 * density_matrix(d.separable)) / 0.5
        assert residual_check(rho07, d) == pytest.approx(np.linalg.eigvalsh(m)[-2], abs=1e-14)
        assert abs(residual_check(rho07, d)) <= 1e-12

    def test_mismatch(self, rho07):
        d = LSDecomposition(0.5, bd_from_probs([0.25] * 4), 1, 0.5)
        with pytest.raises(MismatchError):
            residual_check(rho07, d)
