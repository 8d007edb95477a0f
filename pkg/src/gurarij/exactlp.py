"""Exact LP solving over rationals for small instances.

A dense two-phase simplex with Bland's rule on Fraction arithmetic. Meant
for low-dimensional certificates where answers are claimed exactly; the
floating-point path in `lp` is the workhorse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lp import EQ, GE, LE, LinearProgram

MAX_VARS = 24
MAX_ROWS = 120


@dataclass(frozen=True)
class ExactSolution:
    status: str  # optimal | infeasible | unbounded
    x: tuple[Fraction, ...] | None
    value: Fraction | None
    dual_rows: tuple[Fraction, ...] | None
    dual_lower: tuple[Fraction, ...] | None
    dual_upper: tuple[Fraction, ...] | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))  # exact binary expansion


def solve_exact(p: LinearProgram) -> ExactSolution:
    """Solve `p` exactly. Raises ValueError beyond the supported size."""
    n = p.n_vars
    c0 = [_frac(v) for v in (p.objective if p.sense == "min" else -p.objective)]

    # assemble <= rows over the original variables
    rows: list[tuple[list[Fraction], Fraction]] = []
    origin: list[tuple[str, int, int]] = []  # (kind, index, sign) per <= row
    for i, rel in enumerate(p.rows_rel):
        a = [_frac(v) for v in p.rows_A[i]]
        bb = _frac(p.rows_b[i])
        if rel in (LE, EQ):
            rows.append((list(a), bb))
            origin.append(("row", i, +1))
        if rel in (GE, EQ):
            rows.append(([-v for v in a], -bb))
            origin.append(("row", i, -1))
    if p.bounds is not None:
        for j, (lo, hi) in enumerate(p.bounds):
            if hi is not None:
                e = [Fraction(0)] * n
                e[j] = Fraction(1)
                rows.append((e, _frac(hi)))
                origin.append(("upper", j, +1))
            if lo is not None:
                e = [Fraction(0)] * n
                e[j] = Fraction(-1)
                rows.append((e, -_frac(lo)))
                origin.append(("lower", j, -1))

    if n > MAX_VARS or len(rows) > MAX_ROWS:
        raise ValueError(f"exact mode supports <= {MAX_VARS} vars / {MAX_ROWS} rows")

    # split free vars: x = u - w with u, w >= 0
    A = [[*a, *(-v for v in a)] for a, _ in rows]
    b = [bb for _, bb in rows]
    c = [*c0, *(-v for v in c0)]
    status, z, value, y_rows = _simplex(A, b, c)
    if status != "optimal":
        return ExactSolution(status, None, None, None, None, None)
    x = tuple(z[k] - z[n + k] for k in range(n))
    y = [Fraction(0)] * len(p.rows_rel)
    lo_d = [Fraction(0)] * n
    hi_d = [Fraction(0)] * n
    for r, (kind, idx, sign) in enumerate(origin):
        if kind == "row":
            y[idx] += sign * y_rows[r]
        elif kind == "upper":
            hi_d[idx] += y_rows[r]
        elif kind == "lower":
            lo_d[idx] += -y_rows[r]
    if p.sense == "max":
        value = -value
    return ExactSolution("optimal", x, value, tuple(y), tuple(lo_d), tuple(hi_d))


def _simplex(A, b, c):
    """min c z s.t. A z <= b, z >= 0 over Fractions.

    Returns (status, z, value, y) with y the multipliers of the <= rows in
    the convention c >= A^T y componentwise, y <= 0, value = b . y.
    """
    m = len(A)
    n = len(c)
    sigma = [1 if b[i] >= 0 else -1 for i in range(m)]
    n_art = sum(1 for s in sigma if s < 0)
    width = n + m + n_art + 1
    T = [[Fraction(0)] * width for _ in range(m)]
    basis = [0] * m
    k = 0
    for i in range(m):
        for j in range(n):
            T[i][j] = sigma[i] * A[i][j]
        T[i][n + i] = Fraction(sigma[i])
        T[i][-1] = sigma[i] * b[i]
        if sigma[i] < 0:
            col = n + m + k
            T[i][col] = Fraction(1)
            basis[i] = col
            k += 1
        else:
            basis[i] = n + i

    def pivot(r, col):
        piv = T[r][col]
        if piv != 1:
            T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [vi - f * vr for vi, vr in zip(T[i], T[r])]
        basis[r] = col

    def reduced_full(cost, j):
        return cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))

    def run_bland(cost, ncols):
        # Bland: smallest-index entering, smallest ratio then smallest basis
        while True:
            entering = -1
            in_basis = set(basis)
            for j in range(ncols):
                if j in in_basis:
                    continue
                if reduced_full(cost, j) < 0:
                    entering = j
                    break
            if entering < 0:
                return True
            best = None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < best[1]):
                        best = (ratio, basis[i], i)
            if best is None:
                return False
            pivot(best[2], entering)

    if n_art:
        cost1 = [Fraction(0)] * (n + m) + [Fraction(1)] * n_art + [Fraction(0)]
        run_bland(cost1, n + m)  # artificials never re-enter
        obj1 = sum(cost1[basis[i]] * T[i][-1] for i in range(m))
        if obj1 > 0:
            return ("infeasible", None, None, None)
        for i in range(m):
            if basis[i] >= n + m:
                for j in range(n + m):
                    if T[i][j] != 0:
                        pivot(i, j)
                        break

    cost2 = [*c, *([Fraction(0)] * m), *([Fraction(0)] * n_art), Fraction(0)]
    if not run_bland(cost2, n + m):
        return ("unbounded", None, None, None)
    z = [Fraction(0)] * (n + m)
    for i in range(m):
        if basis[i] < n + m:
            z[basis[i]] = T[i][-1]
    value = sum(c[j] * z[j] for j in range(n))
    # row multiplier from the slack column: reduced(s_i) = -sigma_i pi_i and
    # y_i = sigma_i pi_i, hence y_i = -reduced(s_i) regardless of sigma
    in_basis = set(basis)
    y = [Fraction(0) if (n + i) in in_basis else -reduced_full(cost2, n + i) for i in range(m)]
    return ("optimal", z, value, y)
