import numpy as np
import pytest

from bdconvex.bdstate import bd_from_probs, density_matrix
from bdconvex.convex import (
    SDPProblem,
    Status,
    check_slackness,
    check_solution,
    duality_gap,
    lsd_as_sdp,
    lsd_lp_over_separable,
    solve_sdp,
)
from bdconvex.errors import (
    DimensionMismatchError,
    InfeasibleError,
    MaxIterationsError,
    NotFeasibleError,
    UnboundedError,
)


def _lsd_dense(rho, sigma):
    return SDPProblem(c=[-1.0], F0=density_matrix(rho), Fi=[-density_matrix(sigma)])


def test_lsd_bell_basis(rho07, sigma_star):
    sol = solve_sdp(lsd_as_sdp(rho07, sigma_star))
    assert sol.status is Status.OPTIMAL
    assert sol.x[0] == pytest.approx(0.6, abs=1e-7)


def test_lsd_computational_basis(rho07, sigma_star):
    prob = _lsd_dense(rho07, sigma_star)
    sol = solve_sdp(prob)
    assert sol.x[0] == pytest.approx(0.6, abs=1e-7)
    assert check_solution(prob, sol) is None


def test_scalar_boundary():
    sol = solve_sdp(SDPProblem(c=[1.0], F0=[[0.0]], Fi=[[[1.0]]]))
    assert abs(sol.x[0]) <= 1e-7
    assert sol.gap <= 1e-6


def test_suboptimal_candidate(rho07):
    sigma = bd_from_probs([0.4, 0.2, 0.2, 0.2])
    expected = min(rho07.p / sigma.p)
    assert expected == pytest.approx(0.5)
    assert solve_sdp(lsd_as_sdp(rho07, sigma)).x[0] == pytest.approx(expected, abs=1e-7)


def test_complex_instance(rng):
    # minimize -lam with rho - lam I/4 >= 0 has lam* = 4 lambda_min(rho)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    prob = SDPProblem(c=[-1.0], F0=rho, Fi=[-np.eye(4) / 4])
    sol = solve_sdp(prob)
    assert sol.x[0] == pytest.approx(4 * np.linalg.eigvalsh(rho)[0], abs=1e-7)
    assert check_solution(prob, sol) is None


def test_two_variable_instance():
    # minimize x1 + x2 subject to [[x1, 1], [1, x2]] >= 0: optimum x1 = x2 = 1
    F1 = np.array([[1.0, 0.0], [0.0, 0.0]])
    F2 = np.array([[0.0, 0.0], [0.0, 1.0]])
    F0 = np.array([[0.0, 1.0], [1.0, 0.0]])
    prob = SDPProblem(c=[1.0, 1.0], F0=F0, Fi=[F1, F2])
    sol = solve_sdp(prob)
    assert np.allclose(sol.x, [1.0, 1.0], atol=1e-6)
    assert check_solution(prob, sol) is None
    assert check_slackness(prob.F(sol.x), sol.Z, 1e-6)


def test_infeasible():
    prob = SDPProblem(c=[1.0], F0=np.diag([-1.0, -1.0]), Fi=[np.diag([1.0, -1.0])])
    with pytest.raises(InfeasibleError):
        solve_sdp(prob)


def test_unbounded():
    prob = SDPProblem(c=[-1.0], F0=np.eye(2), Fi=[np.eye(2)])
    with pytest.raises(UnboundedError):
        solve_sdp(prob)


def test_max_iterations_attaches_iterate(rho07, sigma_star):
    with pytest.raises(MaxIterationsError) as info:
        solve_sdp(lsd_as_sdp(rho07, sigma_star), max_steps=12)
    sol = info.value.solution
    assert sol is not None and sol.status is Status.MAX_ITERATIONS
    assert 0.0 < sol.x[0] < 0.6


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(c=[1.0, 2.0], F0=np.eye(2), Fi=[np.eye(2)]),
        dict(c=[1.0], F0=np.ones((2, 3)), Fi=[np.eye(2)]),
    ],
)
def test_dimension_checks(kwargs):
    with pytest.raises(DimensionMismatchError):
        SDPProblem(**kwargs)


def test_hermitian_check():
    with pytest.raises(ValueError):
        SDPProblem(c=[1.0], F0=np.array([[1.0, 1.0], [0.0, 1.0]]), Fi=[np.eye(2)])


def test_size_limit():
    with pytest.raises(ValueError):
        SDPProblem(c=np.zeros(9), F0=np.eye(2), Fi=[np.eye(2)] * 9)


def test_weak_duality_along_path(rho07, sigma_star):
    sol = solve_sdp(_lsd_dense(rho07, sigma_star))
    assert sol.history
    for t, primal, dual in sol.history:
        assert dual <= primal + 1e-10
    gaps = [p - d for _, p, d in sol.history]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


class TestDualityGap:
    def test_optimal_pair(self, rho07, sigma_star):
        prob = _lsd_dense(rho07, sigma_star)
        sol = solve_sdp(prob)
        gap = duality_gap(prob, sol.x, sol.Z)
        assert -1e-10 <= gap <= 1e-6

    def test_zero_objective(self):
        prob = SDPProblem(c=[0.0], F0=np.eye(2), Fi=[np.diag([1.0, -1.0])])
        assert duality_gap(prob, [0.3], np.zeros((2, 2))) == 0.0

    def test_perturbation_increases_gap(self, rho07, sigma_star):
        prob = _lsd_dense(rho07, sigma_star)
        sol = solve_sdp(prob)
        base = duality_gap(prob, sol.x, sol.Z)
        # lowering lam keeps rho - lam sigma feasible
        moved = duality_gap(prob, sol.x - 1e-2, sol.Z)
        assert moved > base
        assert moved == pytest.approx(base + 1e-2, abs=1e-9)

    def test_infeasible_primal(self, rho07, sigma_star):
        prob = _lsd_dense(rho07, sigma_star)
        sol = solve_sdp(prob)
        with pytest.raises(NotFeasibleError, match="primal"):
            duality_gap(prob, sol.x + 0.1, sol.Z)

    def test_infeasible_dual(self, rho07, sigma_star):
        prob = _lsd_dense(rho07, sigma_star)
        sol = solve_sdp(prob)
        with pytest.raises(NotFeasibleError, match="dual"):
            duality_gap(prob, sol.x, 2 * sol.Z)


class TestSlackness:
    def test_optimal_lsd_pair(self, rho07, sigma_star):
        prob = _lsd_dense(rho07, sigma_star)
        sol = solve_sdp(prob)
        Fx = prob.F(sol.x)
        # F(x) is supported on |phi+>, Z on the complement
        assert np.allclose(np.linalg.eigvalsh(Fx), [0, 0, 0, 0.4], atol=1e-7)
        assert check_slackness(Fx, sol.Z, 1e-6)

    def test_zero_dual(self):
        assert check_slackness(np.eye(3), np.zeros((3, 3)), 1e-12)

    def test_identity(self):
        assert not check_slackness(np.eye(3), np.eye(3), 1e-6)


def test_sdp_and_lp_agree_on_diagonal_instances(rng):
    for _ in range(20):
        pk = rng.uniform(0.5, 0.999)
        rest = rng.dirichlet(np.ones(3)) * (1 - pk)
        rho = bd_from_probs([pk, *rest])
        lam_lp, sigma = lsd_lp_over_separable(rho)
        sol = solve_sdp(lsd_as_sdp(rho, sigma))
        assert abs(sol.x[0] - lam_lp) <= 1e-8


def test_candidate_monotonicity(rho07):
    p1 = rho07.p[0]
    values = []
    for q1 in [0.1, 0.2, 0.3, 0.4, 0.5]:
        sigma = bd_from_probs(np.concatenate([[q1], (1 - q1) * rho07.p[1:] / (1 - p1)]))
        values.append(solve_sdp(lsd_as_sdp(rho07, sigma)).x[0])
    assert all(b >= a - 1e-8 for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(0.6, abs=1e-7)
