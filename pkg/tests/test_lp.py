import numpy as np
import pytest

from bdconvex.bdstate import bd_from_probs
from bdconvex.convex import lp_residuals, lsd_standard_form, solve_lp, vertices
from bdconvex.errors import DimensionMismatchError, InfeasibleError, UnboundedError


def _assert_certified(c, A, b, res, tol=1e-9):
    r = lp_residuals(c, A, b, res.x, res.zeta, res.y)
    assert max(r.values()) <= tol, r


def test_lsd_program(rho07):
    c, A, b = lsd_standard_form(rho07)
    res = solve_lp(c, A, b)
    assert -c @ res.x == pytest.approx(0.6, abs=1e-12)
    assert np.allclose(res.x[:4], [0.3, 0.1, 0.1, 0.1], atol=1e-12)
    _assert_certified(c, A, b, res)


def test_singleton():
    res = solve_lp([1.0], [[1.0]], [1.0])
    assert res.x.tolist() == [1.0]
    assert res.strictly_complementary


def test_degenerate_instance():
    # minimize x1 over {x1 - x2 = 0, x1 + x3 = 1, x >= 0}
    c = np.array([1.0, 0.0, 0.0])
    A = np.array([[1.0, -1.0, 0.0], [1.0, 0.0, 1.0]])
    b = np.array([0.0, 1.0])
    verts = vertices(A, b)
    assert len(verts) == 2
    best = min(verts, key=lambda v: c @ v)
    assert np.allclose(best, [0, 0, 1])
    res = solve_lp(c, A, b)
    assert np.allclose(res.x, best)
    _assert_certified(c, A, b, res)
    # x2 = 0 and its multiplier is 0 as well
    assert not res.strictly_complementary


def test_matches_vertex_enumeration(rng):
    for _ in range(25):
        A = rng.normal(size=(3, 6))
        x_feas = rng.uniform(0.1, 1.0, size=6)
        b = A @ x_feas
        c = rng.uniform(0.1, 2.0, size=6)
        res = solve_lp(c, A, b)
        best = min(c @ v for v in vertices(A, b))
        assert c @ res.x == pytest.approx(best, abs=1e-9)
        _assert_certified(c, A, b, res)


def test_redundant_rows():
    A = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    b = np.array([1.0, 2.0, 1.0])
    c = np.array([1.0, 2.0, 0.0])
    res = solve_lp(c, A, b)
    assert c @ res.x == pytest.approx(1.0)
    _assert_certified(c, A, b, res)


def test_no_rows_unbounded():
    with pytest.raises(UnboundedError):
        solve_lp([-1.0], np.zeros((0, 1)), [])


def test_inconsistent_rows():
    with pytest.raises(InfeasibleError):
        solve_lp([1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]], [1.0, 2.0])


def test_sign_infeasible():
    with pytest.raises(InfeasibleError):
        solve_lp([1.0, 1.0], [[1.0, 1.0]], [-1.0])


def test_unbounded_ray():
    # x1 - x2 = 0, minimize -x1
    with pytest.raises(UnboundedError):
        solve_lp([-1.0, 0.0], [[1.0, -1.0]], [0.0])


def test_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_lp([1.0, 1.0], [[1.0, 1.0]], [1.0, 2.0])


def test_lsd_program_random(rng):
    for _ in range(50):
        pk = rng.uniform(0.5, 0.999)
        rho = bd_from_probs([pk, *(rng.dirichlet(np.ones(3)) * (1 - pk))])
        c, A, b = lsd_standard_form(rho)
        res = solve_lp(c, A, b)
        assert -c @ res.x == pytest.approx(2 * (1 - pk), abs=1e-12)
        _assert_certified(c, A, b, res)
