import numpy as np
import pytest

from wigsim import simplex


def test_single_variable_binding_constraint():
    # min x s.t. 2x >= 1, x <= 5  ->  x = 0.5
    status, x = simplex.solve_lp([1.0], [[2.0]], [1.0], [5.0])
    assert status == simplex.OPTIMAL
    assert x[0] == pytest.approx(0.5, abs=1e-12)


def test_infeasible_by_upper_bound():
    status, x = simplex.solve_lp([1.0], [[1.0]], [2.0], [1.0])
    assert status == simplex.INFEASIBLE


def test_no_constraints_minimizes_at_zero():
    status, x = simplex.solve_lp([1.0, 2.0], np.zeros((0, 2)), [], [1.0, 1.0])
    assert status == simplex.OPTIMAL
    assert np.allclose(x, 0.0)


def test_negative_rhs_rows_handled():
    # -x1 - x2 >= -1  (i.e. x1 + x2 <= 1), minimize -x1 - 2 x2 -> x2 = 1
    status, x = simplex.solve_lp([-1.0, -2.0], [[-1.0, -1.0]], [-1.0],
                                 [10.0, 10.0])
    assert status == simplex.OPTIMAL
    assert x == pytest.approx([0.0, 1.0], abs=1e-10)


def test_two_variable_weighted_minimum():
    # min 3a + b s.t. a + b >= 2, a <= 1.5, b <= 1.5 -> a = 0.5, b = 1.5
    status, x = simplex.solve_lp([3.0, 1.0], [[1.0, 1.0]], [2.0], [1.5, 1.5])
    assert status == simplex.OPTIMAL
    assert x == pytest.approx([0.5, 1.5], abs=1e-10)


def test_matches_exhaustive_vertex_search_on_random_lps():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(0, 4))
        a = rng.normal(size=(m, n))
        b = rng.normal(size=m) * 0.5
        upper = rng.uniform(0.5, 2.0, size=n)
        c = rng.uniform(0.1, 1.0, size=n)
        status, x = simplex.solve_lp(c, a, b, upper)

        # brute-force over a fine grid for the verdict and objective
        axes = [np.linspace(0, u, 41) for u in upper]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        ok = np.ones(len(pts), dtype=bool)
        for i in range(m):
            ok &= pts @ a[i] >= b[i] - 1e-9
        if status == simplex.OPTIMAL:
            assert ok.any()
            # solver satisfies all constraints
            if m:
                assert np.all(a @ x >= b - 1e-7 * np.maximum(1, np.abs(b)))
            assert np.all(x >= -1e-12) and np.all(x <= upper + 1e-12)
            # no grid point beats the solver by more than a grid-step margin
            best_grid = (pts[ok] @ c).min()
            step_slack = float(np.sum(c * [u / 40 for u in upper]))
            assert c @ x <= best_grid + step_slack + 1e-9
        else:
            # any feasible grid point must hug the boundary
            if ok.any():
                margins = np.full(ok.sum(), np.inf)
                for i in range(m):
                    margins = np.minimum(margins, pts[ok] @ a[i] - b[i])
                step_slack = max(np.abs(a[i]) @ (upper / 40) for i in range(m))
                assert margins.max() <= step_slack
