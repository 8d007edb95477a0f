from fractions import Fraction

import numpy as np
import pytest

from gurarij.exactlp import solve_exact
from gurarij.lp import GE, LE, LinearProgram, solve_lp


def lp(c, sense, rows, bounds=None):
    A = np.array([r[0] for r in rows], dtype=float) if rows else np.zeros((0, len(c)))
    rel = tuple(r[1] for r in rows)
    b = np.array([r[2] for r in rows], dtype=float)
    return LinearProgram(np.array(c, dtype=float), sense, A, rel, b, bounds)


def test_exact_min_x_ge_3():
    s = solve_exact(lp([1.0], "min", [([1.0], GE, 3.0)]))
    assert s.optimal and s.value == Fraction(3)


def test_exact_max_tighter_bound_wins():
    s = solve_exact(lp([1.0], "max", [([1.0], LE, 1.0), ([1.0], LE, 2.0)]))
    assert s.optimal and s.value == Fraction(1)


def test_exact_infeasible():
    s = solve_exact(lp([1.0], "min", [([1.0], LE, 0.0), ([1.0], GE, 1.0)]))
    assert s.status == "infeasible"


def test_exact_unbounded():
    s = solve_exact(lp([1.0], "min", [([1.0], LE, 0.0)]))
    assert s.status == "unbounded"


def test_exact_rational_data_rational_answer():
    # min x + y s.t. x + 2y >= 1, 2x + y >= 1 -> (1/3, 1/3)
    p = lp([1.0, 1.0], "min", [([1.0, 2.0], GE, 1.0), ([2.0, 1.0], GE, 1.0)])
    s = solve_exact(p)
    assert s.optimal
    assert s.value == Fraction(2, 3)
    assert set(s.x) == {Fraction(1, 3)}


@pytest.mark.parametrize("seed", range(12))
def test_exact_matches_float_solver(seed):
    rng = np.random.default_rng(seed)
    n, m = 3, 5
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    A = np.vstack([A, np.ones(n)])
    b = np.concatenate([rng.integers(1, 5, size=m).astype(float), [7.0]])
    c = rng.integers(-3, 4, size=n).astype(float)
    p = lp(c, "min", [(A[i], LE, b[i]) for i in range(m + 1)],
           bounds=tuple((0.0, None) for _ in range(n)))
    se = solve_exact(p)
    sf = solve_lp(p)
    assert se.status == sf.status
    if se.optimal:
        assert float(se.value) == pytest.approx(sf.value, abs=1e-8)
        # strong duality holds exactly: value = b . y (zero lower bounds)
        dual_val = sum(Fraction(float(bv)) * y for bv, y in zip(b, se.dual_rows))
        assert dual_val == se.value
        for y in se.dual_rows:
            assert y <= 0
