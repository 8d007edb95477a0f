import numpy as np
import pytest

from gurarij.lp import (
    EQ,
    GE,
    LE,
    LinearProgram,
    LPBuilder,
    MalformedProgram,
    certify,
    solve_lp,
)


def lp(c, sense, rows, bounds=None):
    A = np.array([r[0] for r in rows], dtype=float) if rows else np.zeros((0, len(c)))
    rel = tuple(r[1] for r in rows)
    b = np.array([r[2] for r in rows], dtype=float)
    return LinearProgram(np.array(c, dtype=float), sense, A, rel, b, bounds)


def test_min_x_ge_3():
    s = solve_lp(lp([1.0], "min", [([1.0], GE, 3.0)]))
    assert s.optimal
    assert s.value == pytest.approx(3.0, abs=1e-9)
    assert certify(lp([1.0], "min", [([1.0], GE, 3.0)]), s).ok


def test_max_x_two_upper_bounds():
    p = lp([1.0], "max", [([1.0], LE, 1.0), ([1.0], LE, 2.0)])
    s = solve_lp(p)
    assert s.optimal
    assert s.value == pytest.approx(1.0, abs=1e-9)
    assert certify(p, s).ok


def test_infeasible():
    p = lp([1.0], "min", [([1.0], LE, 0.0), ([1.0], GE, 1.0)])
    assert solve_lp(p).status == "infeasible"


def test_unbounded():
    p = lp([1.0], "min", [([1.0], LE, 0.0)])
    assert solve_lp(p).status == "unbounded"


def test_malformed_arity():
    with pytest.raises(MalformedProgram):
        lp([1.0, 2.0], "min", [([1.0], LE, 0.0)])


def test_certify_rejects_perturbed_value():
    p = lp([1.0], "min", [([1.0], GE, 3.0)])
    s = solve_lp(p)
    bad = type(s)(s.status, s.x, s.value + 1.0, s.dual_rows, s.dual_lower,
                  s.dual_upper, s.dual_value, s.gap)
    rep = certify(p, bad)
    assert not rep.ok and "duality-gap" in rep.kinds()


def test_certify_rejects_infeasible_point():
    p = lp([1.0], "min", [([1.0], GE, 3.0)])
    s = solve_lp(p)
    bad = type(s)(s.status, np.array([0.0]), 0.0, s.dual_rows, s.dual_lower,
                  s.dual_upper, s.dual_value, s.gap)
    rep = certify(p, bad)
    assert not rep.ok
    rows = [v.data.get("row") for v in rep.violations if v.kind == "primal-infeasible"]
    assert 0 in rows


@pytest.mark.parametrize("seed", range(20))
def test_gap_below_tolerance_on_randoms(seed):
    rng = np.random.default_rng(seed)
    n, m = 4, 6
    A = rng.standard_normal((m, n))
    b = rng.uniform(0.2, 2.0, m)
    c = rng.standard_normal(n)
    rows = [(A[i], LE, b[i]) for i in range(m)] + [(np.ones(n), LE, 8.0)]
    p = lp(c, "min", rows, bounds=tuple((0.0, None) for _ in range(n)))
    s = solve_lp(p)
    assert s.optimal
    assert abs(s.value - s.dual_value) <= 1e-9 * (1 + abs(s.value))
    assert certify(p, s).ok


@pytest.mark.parametrize("seed", range(10))
def test_explicit_dual_program_matches(seed):
    # primal: max c.x s.t. A x <= b, x >= 0; dual: min b.y, A^T y >= c, y >= 0
    rng = np.random.default_rng(100 + seed)
    n, m = 3, 5
    A = np.vstack([rng.standard_normal((m - 1, n)), np.ones(n)])
    b = np.concatenate([rng.uniform(0.5, 2.0, m - 1), [6.0]])
    c = rng.standard_normal(n)
    primal = lp(c, "max", [(A[i], LE, b[i]) for i in range(m)],
                bounds=tuple((0.0, None) for _ in range(n)))
    dual = lp(b, "min", [(A[:, j], GE, c[j]) for j in range(n)],
              bounds=tuple((0.0, None) for _ in range(m)))
    sp, sd = solve_lp(primal), solve_lp(dual)
    assert sp.optimal and sd.optimal
    assert sp.value == pytest.approx(sd.value, abs=1e-8, rel=1e-9)


def test_builder_blocks():
    bld = LPBuilder()
    x = bld.add_vars(2, lb=0.0)
    t = bld.add_vars(1)
    bld.add_row([(x, np.array([1.0, 1.0])), (t, np.array([-1.0]))], LE, 0.0)
    bld.add_row([(x, np.array([1.0, 0.0]))], GE, 1.0)
    bld.add_row([(x, np.array([0.0, 1.0]))], GE, 2.0)
    bld.add_objective_terms(t, [1.0])
    s = bld.solve()
    assert s.optimal and s.value == pytest.approx(3.0, abs=1e-9)
