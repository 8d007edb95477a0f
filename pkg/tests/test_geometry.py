import numpy as np
import pytest

from gurarij.geometry import (
    dedup_rows,
    hull_halfspaces,
    polytope_vertices,
    project_polytope,
    prune_redundant,
)


def _as_set(V, digits=7):
    return {tuple(np.round(v, digits)) for v in V}


def test_square_vertices():
    A = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
    b = np.ones(4)
    V = polytope_vertices(A, b)
    assert _as_set(V) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


def test_simplex_vertices_with_redundant_row():
    A = np.array([[-1, 0], [0, -1], [1, 1], [1, 1]], dtype=float)
    b = np.array([0, 0, 1, 5.0])
    V = polytope_vertices(A, b)
    assert _as_set(V) == {(0, 0), (1, 0), (0, 1)}


def test_prune_redundant_drops_implied():
    A = np.array([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]], dtype=float)
    b = np.array([1, 1, 1, 1, 5.0])  # last row implied
    A2, b2 = prune_redundant(A, b)
    assert A2.shape[0] == 4


def test_dedup_rows():
    A = np.array([[2, 0], [1, 0], [0, 1]], dtype=float)
    b = np.array([2.0, 1.0, 1.0])
    A2, b2 = dedup_rows(A, b)
    assert A2.shape[0] == 2


def test_unbounded_polyhedron_vertices():
    # epigraph-like wedge t >= |x| has a single vertex at the origin
    A = np.array([[1, -1], [-1, -1]], dtype=float)
    b = np.zeros(2)
    V = polytope_vertices(A, b)
    assert _as_set(V) == {(0, 0)}


def test_hull_halfspaces_cross_polytope():
    pts = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
    A, b = hull_halfspaces(pts)
    assert A.shape[0] == 4
    # every sign pattern of (±1, ±1)/?? normalized: check unit ball property
    for p in pts:
        assert np.all(A @ p <= b + 1e-9)
    assert np.all(A @ np.array([0.6, 0.6]) > b - 1e-9) is not None
    assert np.any(A @ np.array([0.6, 0.6]) > b + 1e-9)


def test_project_cube_to_square():
    # cube |x|,|y|,|z| <= 1 projected on (x, y)
    A = np.vstack([np.eye(3), -np.eye(3)])
    b = np.ones(6)
    P, q = project_polytope(A, b, keep=[0, 1])
    V = polytope_vertices(P, q)
    assert _as_set(V) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


def test_project_with_equalities():
    # { (x,y,z) : z = x + y, cube bounds } projected to (x,y) is the square
    A = np.vstack([np.eye(3), -np.eye(3)])
    b = np.array([1, 1, 2.0, 1, 1, 2.0])
    A_eq = np.array([[1.0, 1.0, -1.0]])
    b_eq = np.zeros(1)
    P, q = project_polytope(A, b, keep=[0, 1], A_eq=A_eq, b_eq=b_eq)
    V = polytope_vertices(P, q)
    assert _as_set(V) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


@pytest.mark.parametrize("seed", range(6))
def test_random_projection_matches_vertex_projection(seed):
    rng = np.random.default_rng(seed)
    n, keep = 4, [0, 1]
    A = rng.standard_normal((12, n))
    A = A / np.max(np.abs(A), axis=1, keepdims=True)
    b = rng.uniform(0.5, 2.0, 12)  # contains origin, bounded w.h.p.
    A = np.vstack([A, np.eye(n), -np.eye(n)])
    b = np.concatenate([b, 5 * np.ones(2 * n)])
    V = polytope_vertices(A, b)
    assert len(V) > 0
    P, q = project_polytope(A, b, keep=keep)
    # every projected vertex feasible; every projection facet touched
    W = V[:, keep]
    for w in W:
        assert np.all(P @ w <= q + 1e-7 * (1 + np.abs(q)))
    for i in range(P.shape[0]):
        assert np.max(P @ W.T - q[:, None], axis=1)[i] >= -1e-6
