"""Linear programs with optimality certificates.

This is the single numerical kernel: every norm, envelope, amalgam, and
distance in the package reduces to an instance built here. Solutions carry
primal and dual data; `certify` re-checks them independently of the solver.

Dual multipliers are always stored in the internal minimize orientation
(`sense == "max"` is solved as min of the negated objective): for row i,
`c_int = sum_i y_i a_i + lam_lower + lam_upper` with y_i <= 0 on `<=` rows,
y_i >= 0 on `>=` rows, free on `==` rows, lam_lower >= 0, lam_upper <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .util import CERT_TOL, Report

LE, GE, EQ = "<=", ">=", "=="
_RELS = (LE, GE, EQ)

_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


class MalformedProgram(ValueError):
    pass


class NumericalFailure(RuntimeError):
    """Solver did not reach a conclusive status; never ignored silently."""


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    sense: str
    rows_A: np.ndarray
    rows_rel: tuple[str, ...]
    rows_b: np.ndarray
    bounds: tuple[tuple[float | None, float | None], ...] | None = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        A = np.asarray(self.rows_A, dtype=float).reshape(len(self.rows_rel), -1) \
            if len(self.rows_rel) else np.zeros((0, len(c)))
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "rows_A", A)
        object.__setattr__(self, "rows_b", np.asarray(self.rows_b, dtype=float))
        if self.sense not in ("min", "max"):
            raise MalformedProgram(f"unknown sense {self.sense!r}")
        if A.shape[0] != len(self.rows_b):
            raise MalformedProgram("row/rhs count mismatch")
        if A.shape[0] and A.shape[1] != c.shape[0]:
            raise MalformedProgram(
                f"row arity {A.shape[1]} does not match objective arity {c.shape[0]}"
            )
        for rel in self.rows_rel:
            if rel not in _RELS:
                raise MalformedProgram(f"unknown relation {rel!r}")
        if self.bounds is not None:
            if len(self.bounds) != c.shape[0]:
                raise MalformedProgram("bounds arity mismatch")
            for lo, hi in self.bounds:
                if lo is not None and hi is not None and lo > hi:
                    raise MalformedProgram(f"empty bound interval ({lo}, {hi})")

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]


@dataclass(frozen=True)
class LPSolution:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray | None
    value: float | None
    dual_rows: np.ndarray | None
    dual_lower: np.ndarray | None
    dual_upper: np.ndarray | None
    dual_value: float | None
    gap: float | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _effective_bounds(p: LinearProgram):
    if p.bounds is None:
        return [(None, None)] * p.n_vars
    return list(p.bounds)


def solve_lp(p: LinearProgram, tol: float = CERT_TOL) -> LPSolution:
    """Solve `p`; on optimality return primal/dual certificates with
    relative duality gap at most `tol`."""
    c_int = p.objective if p.sense == "min" else -p.objective
    rel = np.array(p.rows_rel)
    le = rel == LE
    ge = rel == GE
    eq = rel == EQ
    A_ub = np.vstack([p.rows_A[le], -p.rows_A[ge]]) if (le.any() or ge.any()) else None
    b_ub = np.concatenate([p.rows_b[le], -p.rows_b[ge]]) if A_ub is not None else None
    A_eq = p.rows_A[eq] if eq.any() else None
    b_eq = p.rows_b[eq] if A_eq is not None else None
    res = linprog(
        c_int,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=_effective_bounds(p),
        method="highs",
        options=dict(_HIGHS_OPTIONS),
    )
    if res.status == 2:
        return LPSolution("infeasible", None, None, None, None, None, None, None)
    if res.status == 3:
        return LPSolution("unbounded", None, None, None, None, None, None, None)
    if res.status != 0:
        raise NumericalFailure(f"linprog status {res.status}: {res.message}")

    y = np.zeros(len(p.rows_rel))
    if A_ub is not None:
        m_le = int(le.sum())
        y[le] = res.ineqlin.marginals[:m_le]
        y[ge] = -res.ineqlin.marginals[m_le:]
    if A_eq is not None:
        y[eq] = res.eqlin.marginals
    lam_lo = np.asarray(res.lower.marginals, dtype=float)
    lam_hi = np.asarray(res.upper.marginals, dtype=float)
    dual_val = _dual_objective(p, y, lam_lo, lam_hi)
    primal_int = float(c_int @ res.x)
    gap = abs(primal_int - dual_val) / (1.0 + abs(primal_int))
    if gap > tol:
        raise NumericalFailure(f"duality gap {gap:.3e} exceeds tolerance {tol:.1e}")
    value = primal_int if p.sense == "min" else -primal_int
    return LPSolution(
        "optimal", np.asarray(res.x, dtype=float), value,
        y, lam_lo, lam_hi, dual_val, gap,
    )


def _dual_objective(p: LinearProgram, y, lam_lo, lam_hi) -> float:
    total = float(p.rows_b @ y) if len(p.rows_b) else 0.0
    for i, (lo, hi) in enumerate(_effective_bounds(p)):
        if lo is not None and lam_lo[i] != 0.0:
            total += lo * lam_lo[i]
        if hi is not None and lam_hi[i] != 0.0:
            total += hi * lam_hi[i]
    return total


def certify(p: LinearProgram, s: LPSolution, tol: float = CERT_TOL) -> Report:
    """Re-check a claimed-optimal solution independently of the solve path:
    primal feasibility, dual feasibility/sign conditions, stationarity, and
    the duality gap."""
    rep = Report()
    if not s.optimal:
        rep.add("not-optimal", f"solution status is {s.status}, nothing to certify")
        return rep
    x = s.x
    scale = 1.0 + float(np.max(np.abs(x), initial=0.0))
    for i in range(len(p.rows_rel)):
        lhs = float(p.rows_A[i] @ x)
        b = p.rows_b[i]
        rs = tol * (1.0 + abs(b) + float(np.sum(np.abs(p.rows_A[i]))) * scale)
        rel = p.rows_rel[i]
        bad = (rel == LE and lhs > b + rs) or (rel == GE and lhs < b - rs) \
            or (rel == EQ and abs(lhs - b) > rs)
        if bad:
            rep.add("primal-infeasible", f"row {i}: {lhs} {rel} {b} violated",
                    row=i, lhs=lhs, rhs=float(b))
    for i, (lo, hi) in enumerate(_effective_bounds(p)):
        if lo is not None and x[i] < lo - tol * (1 + abs(lo)):
            rep.add("primal-infeasible", f"variable {i} below lower bound", row=None, var=i)
        if hi is not None and x[i] > hi + tol * (1 + abs(hi)):
            rep.add("primal-infeasible", f"variable {i} above upper bound", row=None, var=i)
    # dual sign conditions (internal minimize orientation)
    sign_tol = tol * (1.0 + float(np.max(np.abs(s.dual_rows), initial=0.0)))
    for i, rel in enumerate(p.rows_rel):
        if rel == LE and s.dual_rows[i] > sign_tol:
            rep.add("dual-infeasible", f"row {i}: positive multiplier on <= row", row=i)
        if rel == GE and s.dual_rows[i] < -sign_tol:
            rep.add("dual-infeasible", f"row {i}: negative multiplier on >= row", row=i)
    if np.any(s.dual_lower < -sign_tol) or np.any(s.dual_upper > sign_tol):
        rep.add("dual-infeasible", "bound multiplier has wrong sign")
    # stationarity: c_int = A^T y + lam_lo + lam_hi
    c_int = p.objective if p.sense == "min" else -p.objective
    resid = c_int - (p.rows_A.T @ s.dual_rows if len(p.rows_b) else 0.0) \
        - s.dual_lower - s.dual_upper
    rn = float(np.max(np.abs(resid), initial=0.0))
    if rn > tol * (1.0 + float(np.max(np.abs(c_int), initial=0.0))) * 10:
        rep.add("stationarity", f"stationarity residual {rn:.3e}")
    primal_int = float(c_int @ x)
    dual_val = _dual_objective(p, s.dual_rows, s.dual_lower, s.dual_upper)
    gap = abs(primal_int - dual_val) / (1.0 + abs(primal_int))
    if gap > tol * 10:
        rep.add("duality-gap", f"gap {gap:.3e}", gap=gap)
    # consistency of the reported objective value
    reported_int = s.value if p.sense == "min" else -s.value
    if abs(reported_int - primal_int) > tol * (1.0 + abs(primal_int)):
        rep.add("duality-gap", "reported objective disagrees with primal point",
                gap=abs(reported_int - primal_int))
    return rep


class LPBuilder:
    """Incrementally assemble a LinearProgram from named variable blocks.

    `add_vars` returns the column indices of a fresh block; rows reference
    any mix of blocks through (cols, coefs) pairs.
    """

    def __init__(self):
        self._n = 0
        self._bounds: list[tuple[float | None, float | None]] = []
        self._rows: list[tuple[np.ndarray, np.ndarray, str, float]] = []
        self._obj: list[tuple[np.ndarray, np.ndarray]] = []
        self._sense = "min"

    def add_vars(self, k: int, lb: float | None = None, ub: float | None = None) -> np.ndarray:
        idx = np.arange(self._n, self._n + k)
        self._n += k
        self._bounds.extend([(lb, ub)] * k)
        return idx

    def add_row(self, pairs, rel: str, rhs: float) -> None:
        cols = np.concatenate([np.atleast_1d(np.asarray(c, dtype=int)) for c, _ in pairs]) \
            if pairs else np.zeros(0, dtype=int)
        coefs = np.concatenate([np.atleast_1d(np.asarray(v, dtype=float)) for _, v in pairs]) \
            if pairs else np.zeros(0)
        self._rows.append((cols, coefs, rel, float(rhs)))

    def add_objective_terms(self, cols, coefs) -> None:
        self._obj.append((np.atleast_1d(np.asarray(cols, dtype=int)),
                          np.atleast_1d(np.asarray(coefs, dtype=float))))

    def set_sense(self, sense: str) -> None:
        self._sense = sense

    def build(self) -> LinearProgram:
        n = self._n
        c = np.zeros(n)
        for cols, coefs in self._obj:
            np.add.at(c, cols, coefs)
        A = np.zeros((len(self._rows), n))
        b = np.zeros(len(self._rows))
        rels = []
        for i, (cols, coefs, rel, rhs) in enumerate(self._rows):
            np.add.at(A[i], cols, coefs)
            b[i] = rhs
            rels.append(rel)
        return LinearProgram(c, self._sense, A, tuple(rels), b, tuple(self._bounds))

    def solve(self, tol: float = CERT_TOL) -> LPSolution:
        return solve_lp(self.build(), tol=tol)


@dataclass
class AffineVec:
    """Affine vector expression const + sum_k M_k x[cols_k] over LP variables."""

    dim: int
    terms: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    const: np.ndarray | None = None

    def __post_init__(self):
        if self.const is None:
            self.const = np.zeros(self.dim)
        self.const = np.asarray(self.const, dtype=float)

    @staticmethod
    def of_vars(cols: np.ndarray, scale: float = 1.0) -> "AffineVec":
        cols = np.asarray(cols, dtype=int)
        return AffineVec(len(cols), [(cols, scale * np.eye(len(cols)))])

    def add_term(self, cols, M) -> "AffineVec":
        M = np.asarray(M, dtype=float)
        self.terms.append((np.asarray(cols, dtype=int), M))
        return self

    def shifted(self, v) -> "AffineVec":
        return AffineVec(self.dim, list(self.terms), self.const + np.asarray(v, dtype=float))

    def row_pairs(self, functional: np.ndarray):
        """(cols, coefs) pairs for the scalar expression <functional, self>,
        excluding the constant part (returned separately)."""
        pairs = [(cols, functional @ M) for cols, M in self.terms]
        return pairs, float(functional @ self.const)
