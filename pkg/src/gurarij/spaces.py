"""Finite-dimensional polyhedral normed spaces.

An explicit space stores a symmetric set of dual generators g and evaluates
norms as max_g <g, v>. Derived spaces (one-point extensions, amalgams) are
"oracle" spaces: they expose the same interface but evaluate norms through
an LP over an H-represented dual ball, possibly with auxiliary lifting
variables. The key shared device is `epigraph_from_dual_ball`, which encodes
the constraint ||expr|| <= t as linear rows by LP-dualizing the support
function of the dual ball, so oracle norms can appear inside larger LPs.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import polytope_vertices, project_polytope
from .lp import EQ, GE, LE, AffineVec, LPBuilder, solve_lp
from .util import DimensionMismatch, Report, as_vector


class InvalidGenerators(ValueError):
    pass


@dataclass(frozen=True)
class DualBallRep:
    """H-representation of a dual unit ball, lifted with auxiliary columns:
    D = { z : exists u with A_ineq (z,u) <= b_ineq, A_eq (z,u) = b_eq }."""

    n_payload: int
    n_aux: int
    A_ineq: np.ndarray
    b_ineq: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray

    @staticmethod
    def from_generators(G: np.ndarray) -> "DualBallRep":
        # conv(G) lifted by barycentric weights: z = G^T mu, mu >= 0, sum mu <= 1
        # (0 lies in conv(G) since G is symmetric, so the <= is exact)
        m, d = G.shape
        A_eq = np.hstack([np.eye(d), -G.T])
        b_eq = np.zeros(d)
        A_ineq = np.vstack([
            np.hstack([np.zeros((m, d)), -np.eye(m)]),
            np.hstack([np.zeros((1, d)), np.ones((1, m))]),
        ])
        b_ineq = np.concatenate([np.zeros(m), [1.0]])
        return DualBallRep(d, m, A_ineq, b_ineq, A_eq, b_eq)


def support_value(ball: DualBallRep, v: np.ndarray) -> float:
    """max { <v, z> : (z, aux) in the lifted ball }."""
    bld = LPBuilder()
    z = bld.add_vars(ball.n_payload)
    u = bld.add_vars(ball.n_aux)
    cols = np.concatenate([z, u])
    for i in range(ball.A_ineq.shape[0]):
        bld.add_row([(cols, ball.A_ineq[i])], LE, ball.b_ineq[i])
    for i in range(ball.A_eq.shape[0]):
        bld.add_row([(cols, ball.A_eq[i])], EQ, ball.b_eq[i])
    bld.add_objective_terms(z, v)
    bld.set_sense("max")
    sol = bld.solve()
    if not sol.optimal:
        raise RuntimeError(f"support function LP ended {sol.status}")
    return float(sol.value)


def epigraph_from_dual_ball(bld: LPBuilder, ball: DualBallRep, vec: AffineVec, t_col: int) -> None:
    """Add rows enforcing sup_{z in D} <z, vec> <= t via LP duality.

    Introduces multipliers nu >= 0 (inequalities) and omega (equalities) with
    A_ineq^T nu + A_eq^T omega = (vec, 0) and b_ineq.nu + b_eq.omega <= t.
    Strong duality makes the encoding exact for nonempty bounded D.
    """
    if vec.dim != ball.n_payload:
        raise DimensionMismatch("expression/payload dimension mismatch")
    nu = bld.add_vars(ball.A_ineq.shape[0], lb=0.0)
    om = bld.add_vars(ball.A_eq.shape[0])
    n = ball.n_payload + ball.n_aux
    for coord in range(n):
        pairs = [(nu, ball.A_ineq[:, coord]), (om, ball.A_eq[:, coord])]
        if coord < ball.n_payload:
            e = np.zeros(ball.n_payload)
            e[coord] = 1.0
            vec_pairs, const = vec.row_pairs(e)
            pairs += [(cols, -cf) for cols, cf in vec_pairs]
            bld.add_row(pairs, EQ, const)
        else:
            bld.add_row(pairs, EQ, 0.0)
    bld.add_row([(nu, ball.b_ineq), (om, ball.b_eq), (np.array([t_col]), [-1.0])], LE, 0.0)


class PolyNormedSpace:
    """Normed (or seminormed) space whose norm is max over dual generators."""

    def __init__(self, dim: int, generators, label: str = "", close_negation: bool = True):
        G = np.asarray(generators, dtype=float)
        if G.ndim != 2 or G.shape[1] != dim or G.shape[0] == 0:
            raise InvalidGenerators(f"generator array must be (m, {dim}) and nonempty")
        if not np.all(np.isfinite(G)):
            raise InvalidGenerators("generators have non-finite entries")
        if close_negation:
            G = np.vstack([G, -G])
        G = np.unique(G, axis=0)
        self.dim = int(dim)
        self.generators = G
        self.label = label or f"polytope:{dim}"
        scale = float(np.max(np.abs(G)))
        self.definite = bool(
            np.linalg.matrix_rank(G, tol=1e-9 * max(1.0, scale)) == dim
        )
        self.is_explicit = True

    def __repr__(self):
        return f"PolyNormedSpace({self.label!r}, dim={self.dim}, m={len(self.generators)})"

    def norm(self, v) -> float:
        v = as_vector(v, self.dim)
        return float(np.max(self.generators @ v))

    def norm_many(self, V: np.ndarray) -> np.ndarray:
        V = np.asarray(V, dtype=float).reshape(-1, self.dim)
        return np.max(V @ self.generators.T, axis=1)

    def norm_epigraph(self, bld: LPBuilder, vec: AffineVec, t_col: int) -> None:
        if vec.dim != self.dim:
            raise DimensionMismatch("expression dimension mismatch")
        for g in self.generators:
            pairs, const = vec.row_pairs(g)
            bld.add_row(pairs + [(np.array([t_col]), [-1.0])], LE, -const)

    def dual_ball(self) -> DualBallRep:
        return DualBallRep.from_generators(self.generators)

    def ball_rows(self, radius: float) -> tuple[np.ndarray, np.ndarray]:
        return self.generators.copy(), np.full(len(self.generators), float(radius))


def norm(space, v) -> float:
    return space.norm(v)


def dual_norm(space: PolyNormedSpace, f) -> float:
    """Gauge of f in conv(generators): min { sum mu : G^T mu = f, mu >= 0 }."""
    f = as_vector(f, space.dim)
    if not space.is_explicit:
        raise TypeError("dual_norm requires an explicit polyhedral space")
    if not space.definite:
        raise InvalidGenerators("dual norm undefined: generators do not span")
    if np.max(np.abs(f)) == 0.0:
        return 0.0
    bld = LPBuilder()
    mu = bld.add_vars(len(space.generators), lb=0.0)
    for coord in range(space.dim):
        bld.add_row([(mu, space.generators[:, coord])], EQ, f[coord])
    bld.add_objective_terms(mu, np.ones(len(mu)))
    sol = bld.solve()
    if not sol.optimal:
        raise RuntimeError(f"dual norm LP ended {sol.status}")
    return float(sol.value)


def make_standard(kind: str, dim: int, generators=None, label: str | None = None) -> PolyNormedSpace:
    if dim < 1:
        raise InvalidGenerators("dimension must be positive")
    if kind == "l1":
        if dim > 12:
            raise InvalidGenerators("l1 generator set is 2^dim; dim too large")
        G = np.array(list(itertools.product([-1.0, 1.0], repeat=dim)))
        return PolyNormedSpace(dim, G, label or f"l1:{dim}", close_negation=False)
    if kind == "linf":
        G = np.vstack([np.eye(dim), -np.eye(dim)])
        return PolyNormedSpace(dim, G, label or f"linf:{dim}", close_negation=False)
    if kind == "polytope":
        if generators is None:
            raise InvalidGenerators("polytope kind requires generators")
        s = PolyNormedSpace(dim, generators, label or f"polytope:{dim}")
        if not s.definite:
            raise InvalidGenerators("generators do not span the dual space")
        return s
    raise InvalidGenerators(f"unknown space kind {kind!r}")


def validate(space: PolyNormedSpace) -> Report:
    rep = Report()
    G = space.generators
    for i, g in enumerate(G):
        diff = np.max(np.abs(G + g), axis=1)
        if diff.min() > 1e-9 * (1.0 + np.max(np.abs(g))):
            rep.add("asymmetry", f"generator {i} has no negation in the set", index=i)
    if np.linalg.matrix_rank(G, tol=1e-9 * max(1.0, float(np.max(np.abs(G))))) < space.dim:
        rep.add("not-spanning", "generators lie in a proper subspace (seminorm)")
    return rep


def subspace_pullback(space, basis) -> PolyNormedSpace:
    """Space on coefficient coordinates with ||s||_pulled = ||sum s_i basis_i||.

    Explicit spaces pull generators directly; oracle spaces go through a
    projection of the lifted dual ball (small dimensions only).
    """
    B = np.asarray(basis, dtype=float)
    if B.ndim != 2 or B.shape[1] != space.dim:
        raise DimensionMismatch("basis vectors must live in the ambient space")
    k = B.shape[0]
    if getattr(space, "is_explicit", False):
        pulled = space.generators @ B.T
        s = PolyNormedSpace(k, pulled, label=f"{space.label}|pullback{k}",
                            close_negation=False)
        if not s.definite:
            warnings.warn("dependent basis: pulled-back functional is a seminorm")
        return s
    # oracle: pulled dual ball = adjoint image of the dual ball
    ball = space.dual_ball()
    n = ball.n_payload + ball.n_aux
    # coords: (y in R^k, z, aux); equalities y = B z
    A_ineq = np.hstack([np.zeros((ball.A_ineq.shape[0], k)), ball.A_ineq])
    A_eq = np.hstack([np.zeros((ball.A_eq.shape[0], k)), ball.A_eq])
    link = np.hstack([np.eye(k), -B, np.zeros((k, ball.n_aux))])
    A_eq = np.vstack([A_eq, link])
    b_eq = np.concatenate([ball.b_eq, np.zeros(k)])
    P, q = project_polytope(A_ineq, ball.b_ineq, keep=list(range(k)),
                            A_eq=A_eq, b_eq=b_eq)
    V = polytope_vertices(P, q)
    if len(V) == 0:
        raise RuntimeError("pullback projection produced no vertices")
    s = PolyNormedSpace(k, V, label=f"{space.label}|pullback{k}", close_negation=True)
    if not s.definite:
        warnings.warn("dependent basis: pulled-back functional is a seminorm")
    return s


def unit_ball_vertices(space: PolyNormedSpace) -> np.ndarray:
    if not space.definite:
        raise InvalidGenerators("unit ball of a seminorm is unbounded")
    return polytope_vertices(space.generators, np.ones(len(space.generators)))


def same_space(s1, s2) -> bool:
    if s1 is s2:
        return True
    if getattr(s1, "is_explicit", False) and getattr(s2, "is_explicit", False):
        if s1.dim != s2.dim or s1.generators.shape != s2.generators.shape:
            return False
        return bool(np.allclose(np.sort(s1.generators, axis=0),
                                np.sort(s2.generators, axis=0), atol=1e-12))
    return False


class OracleSpaceBase:
    """Shared behavior for spaces whose norm is an LP over a dual ball."""

    is_explicit = False
    dim: int
    label: str

    def dual_ball(self) -> DualBallRep:
        raise NotImplementedError

    def _ball_cached(self) -> DualBallRep:
        ball = getattr(self, "_ball", None)
        if ball is None:
            ball = self.dual_ball()
            self._ball = ball
        return ball

    def norm(self, v) -> float:
        v = as_vector(v, self.dim)
        scale = float(np.max(np.abs(v)))
        if scale == 0.0:
            return 0.0
        w = v / scale
        nz = np.flatnonzero(w)
        if len(nz) and w[nz[0]] < 0:
            w = -w  # canonical sign: exact absolute homogeneity
        cache = getattr(self, "_norm_cache", None)
        if cache is None:
            cache = {}
            self._norm_cache = cache
        key = w.tobytes()
        if key not in cache:
            if len(cache) > 4096:
                cache.clear()
            cache[key] = support_value(self._ball_cached(), w)
        return scale * cache[key]

    def norm_many(self, V: np.ndarray) -> np.ndarray:
        V = np.asarray(V, dtype=float).reshape(-1, self.dim)
        return np.array([self.norm(v) for v in V])

    def norm_epigraph(self, bld: LPBuilder, vec: AffineVec, t_col: int) -> None:
        epigraph_from_dual_ball(bld, self._ball_cached(), vec, t_col)
