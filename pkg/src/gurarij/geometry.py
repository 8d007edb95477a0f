"""Small-dimension polytope utilities: vertex enumeration, redundancy
pruning, Fourier-Motzkin projection, convex-hull halfspaces.

Everything here works on H-representations {x : A x <= b} (plus optional
equality rows) in dimension <= ~5, which is all the norm machinery needs.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .util import GEOM_TOL


def _normalize_rows(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.max(np.abs(A), axis=1)
    keep = scale > GEOM_TOL
    A, b, scale = A[keep], b[keep], scale[keep]
    return A / scale[:, None], b / scale


def dedup_rows(A: np.ndarray, b: np.ndarray, tol: float = 1e-9):
    """Drop duplicate and clearly dominated rows (same normal, larger rhs)."""
    A, b = _normalize_rows(A, b)
    order = np.lexsort(np.column_stack([b, A]).T)
    keep: list[int] = []
    for i in order:
        dup = False
        for j in keep:
            if np.all(np.abs(A[i] - A[j]) <= tol) and b[i] >= b[j] - tol:
                dup = True
                break
        if not dup:
            keep.append(i)
    keep.sort()
    return A[keep], b[keep]


def prune_redundant(A: np.ndarray, b: np.ndarray, tol: float = 1e-8):
    """Remove inequality rows implied by the others (LP test per row)."""
    A, b = dedup_rows(A, b)
    m, n = A.shape
    if m <= n + 1:
        return A, b
    active = list(range(m))
    i = 0
    while i < len(active):
        idx = active[i]
        rest = [j for j in active if j != idx]
        # maximize a_idx . x subject to the rest and a cap just above b_idx
        res = linprog(
            -A[idx],
            A_ub=np.vstack([A[rest], A[idx][None, :]]),
            b_ub=np.concatenate([b[rest], [b[idx] + 1.0]]),
            bounds=[(None, None)] * n,
            method="highs",
        )
        if res.status == 0 and -res.fun <= b[idx] + tol:
            active.pop(i)
        else:
            i += 1
    return A[active], b[active]


def polytope_vertices(A: np.ndarray, b: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
    """All vertices of {x : A x <= b} by enumeration of basic solutions.

    Intended for pruned systems in dimension <= 5; unbounded polyhedra are
    fine (only genuine vertices are returned).
    """
    A, b = prune_redundant(A, b)
    m, n = A.shape
    if m < n:
        return np.zeros((0, n))
    verts: list[np.ndarray] = []
    for idx in combinations(range(m), n):
        M = A[list(idx)]
        rhs = b[list(idx)]
        try:
            x = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        if np.max(np.abs(M @ x - rhs)) > 1e-7 * (1.0 + np.max(np.abs(rhs))):
            continue
        slack = A @ x - b
        scale = 1.0 + np.abs(b) + np.sum(np.abs(A), axis=1) * (1.0 + np.max(np.abs(x)))
        if np.all(slack <= 1e-7 * scale):
            verts.append(x)
    if not verts:
        return np.zeros((0, n))
    V = np.array(verts)
    V = V[np.lexsort(V.T[::-1])]
    final: list[np.ndarray] = []
    for v in V:
        if all(np.max(np.abs(v - w)) > 1e-7 * (1.0 + np.max(np.abs(v))) for w in final):
            final.append(v)
    return np.array(final)


def substitute_equalities(
    A: np.ndarray,
    b: np.ndarray,
    A_eq: np.ndarray,
    b_eq: np.ndarray,
    eliminable: set[int],
):
    """Use equality rows to eliminate variables from `eliminable` by pivoting.

    Returns (A, b, A_eq, b_eq, removed) where removed maps eliminated column
    indices (original numbering) that are now identically zero in all rows.
    """
    A = np.asarray(A, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    A_eq = np.asarray(A_eq, dtype=float).copy()
    b_eq = np.asarray(b_eq, dtype=float).copy()
    removed: list[int] = []
    while A_eq.shape[0]:
        best = None
        for r in range(A_eq.shape[0]):
            for j in eliminable:
                if j in removed:
                    continue
                c = abs(A_eq[r, j])
                if c > 1e-9 and (best is None or c > best[2]):
                    best = (r, j, c)
        if best is None:
            break
        r, j, _ = best
        piv = A_eq[r] / A_eq[r, j]
        rhs = b_eq[r] / A_eq[r, j]
        for M, v in ((A, b), (A_eq, b_eq)):
            col = M[:, j].copy()
            M -= np.outer(col, piv)
            v -= col * rhs
        A_eq = np.delete(A_eq, r, axis=0)
        b_eq = np.delete(b_eq, r)
        removed.append(j)
    return A, b, A_eq, b_eq, removed


def project_polytope(
    A: np.ndarray,
    b: np.ndarray,
    keep: list[int],
    A_eq: np.ndarray | None = None,
    b_eq: np.ndarray | None = None,
    max_rows: int = 2000,
):
    """H-representation of the projection of {A x <= b, A_eq x = b_eq} onto
    the coordinates in `keep` (Fourier-Motzkin with pruning).

    Returns (A_proj, b_proj) over len(keep) columns, in `keep` order.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[1]
    if A_eq is None:
        A_eq = np.zeros((0, n))
        b_eq = np.zeros(0)
    drop = set(range(n)) - set(keep)
    A, b, A_eq, b_eq, removed = substitute_equalities(A, b, A_eq, b_eq, drop)
    # leftover equalities (possibly involving kept vars only) become row pairs
    if A_eq.shape[0]:
        A = np.vstack([A, A_eq, -A_eq])
        b = np.concatenate([b, b_eq, -b_eq])
    remaining = [j for j in drop if j not in removed]
    A, b = dedup_rows(A, b)
    for j in remaining:
        pos = A[:, j] > GEOM_TOL
        neg = A[:, j] < -GEOM_TOL
        zero = ~(pos | neg)
        rows = [np.column_stack([A[zero], b[zero, None]])] if np.any(zero) else []
        P = np.column_stack([A[pos] / A[pos, j][:, None], (b[pos] / A[pos, j])[:, None]])
        N = np.column_stack([A[neg] / -A[neg, j][:, None], (b[neg] / -A[neg, j])[:, None]])
        combs = [P[i] + N[k] for i in range(len(P)) for k in range(len(N))]
        if combs:
            rows.append(np.array(combs))
        if rows:
            allrows = np.vstack(rows)
        else:
            allrows = np.zeros((0, A.shape[1] + 1))
        A, b = allrows[:, :-1], allrows[:, -1]
        if A.shape[0]:
            A[:, j] = 0.0
            A, b = dedup_rows(A, b)
            if A.shape[0] > 60:
                A, b = prune_redundant(A, b)
            if A.shape[0] > max_rows:
                raise RuntimeError("projection blow-up: too many rows")
    if A.shape[0]:
        A, b = prune_redundant(A, b)
        return A[:, keep], b
    return np.zeros((0, len(keep))), np.zeros(0)


def hull_halfspaces(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Facet inequalities {x : A x <= b} of the convex hull of `points`.

    The hull must be full-dimensional.
    """
    P = np.asarray(points, dtype=float)
    n = P.shape[1]
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([P.max(), -P.min()])
    try:
        hull = ConvexHull(P)
    except QhullError:
        hull = ConvexHull(P, qhull_options="QJ")
    eqs = hull.equations  # normal . x + offset <= 0
    A, b = dedup_rows(eqs[:, :-1], -eqs[:, -1])
    return A, b
