"""Katetov functions on finite supports and their convex envelopes.

A finite Katetov function assigns values xi(y_j) to finitely many points so
that xi(y) <= xi(z) + ||y - z|| and ||y - z|| <= xi(y) + xi(z). Its convex
envelope (the greatest convex minorant of the min-plus extension
min_j ||x - y_j|| + xi(y_j)) is stored canonically as generator pairs
(y_j, c_j) whose envelope reproduces c_j exactly; this is the finitely
generated convex Katetov function used for one-point extensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lp import EQ, AffineVec, LPBuilder
from .spaces import PolyNormedSpace, dual_norm, same_space
from .util import CANON_TOL, DimensionMismatch, Report, SpaceMismatch, as_vector


class FunctionalTooLarge(ValueError):
    pass


@dataclass
class FiniteKatetov:
    space: object
    support: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=float).reshape(-1, self.space.dim)
        self.values = np.asarray(self.values, dtype=float).ravel()
        if len(self.support) != len(self.values):
            raise ValueError("support/values length mismatch")
        if len(self.support) == 0:
            raise ValueError("empty support")
        if np.any(self.values < -1e-12):
            raise ValueError("Katetov values must be nonnegative")


def is_katetov(fk: FiniteKatetov, tol: float = 1e-9) -> Report:
    """Check both inequality families on all support pairs."""
    rep = Report()
    pts, vals = fk.support, fk.values
    m = len(pts)
    for i in range(m):
        for j in range(i + 1, m):
            d = fk.space.norm(pts[i] - pts[j])
            scale = tol * (1.0 + d + abs(vals[i]) + abs(vals[j]))
            if vals[i] > vals[j] + d + scale:
                rep.add("lipschitz", f"xi({i}) > xi({j}) + d", i=i, j=j,
                        excess=float(vals[i] - vals[j] - d))
            if vals[j] > vals[i] + d + scale:
                rep.add("lipschitz", f"xi({j}) > xi({i}) + d", i=j, j=i,
                        excess=float(vals[j] - vals[i] - d))
            if d > vals[i] + vals[j] + scale:
                rep.add("lower", f"d({i},{j}) > xi({i}) + xi({j})", i=i, j=j,
                        excess=float(d - vals[i] - vals[j]))
    return rep


def extend_min_plus(fk: FiniteKatetov, x) -> float:
    """Katetov extension inf_y ||x - y|| + xi(y) over the finite support."""
    x = as_vector(x, fk.space.dim)
    return float(np.min(fk.space.norm_many(x[None, :] - fk.support) + fk.values))


@dataclass
class ConvexKatetovEnvelope:
    space: object
    points: np.ndarray
    values: np.ndarray
    canonical: bool = False

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, self.space.dim)
        self.values = np.maximum(np.asarray(self.values, dtype=float).ravel(), 0.0)
        if len(self.points) != len(self.values):
            raise ValueError("points/values length mismatch")

    @property
    def n_generators(self) -> int:
        return len(self.points)

    def __call__(self, x) -> float:
        return eval_envelope(self, x)


def point_as_katetov(space, v) -> ConvexKatetovEnvelope:
    v = as_vector(v, space.dim)
    return ConvexKatetovEnvelope(space, v[None, :], np.zeros(1), canonical=True)


def eval_envelope(ck: ConvexKatetovEnvelope, x) -> float:
    """Convex envelope of min_j (||x - y_j|| + c_j), evaluated by LP.

    Variables (u_j, lam_j) with sum u_j = x, sum lam = 1, lam >= 0 and
    epigraph rows ||u_j - lam_j y_j|| <= t_j; minimizes sum (t_j + lam_j c_j).
    Equivalently: inf over y in the generator hull of chat(y) + ||x - y||.
    """
    x = as_vector(x, ck.space.dim)
    pts, vals = ck.points, ck.values
    m, d = pts.shape
    if m == 1:
        return float(vals[0] + ck.space.norm(x - pts[0]))
    bld = LPBuilder()
    u = [bld.add_vars(d) for _ in range(m)]
    lam = bld.add_vars(m, lb=0.0)
    t = bld.add_vars(m)
    for coord in range(d):
        bld.add_row([(uj[coord], [1.0]) for uj in u], EQ, x[coord])
    bld.add_row([(lam, np.ones(m))], EQ, 1.0)
    for j in range(m):
        expr = AffineVec.of_vars(u[j])
        expr.add_term(np.array([lam[j]]), -pts[j][:, None])
        ck.space.norm_epigraph(bld, expr, t[j])
    bld.add_objective_terms(t, np.ones(m))
    bld.add_objective_terms(lam, vals)
    sol = bld.solve()
    if not sol.optimal:
        raise RuntimeError(f"envelope LP ended {sol.status}")
    return max(float(sol.value), 0.0)


def convexify(fk: FiniteKatetov, strict: bool = True) -> ConvexKatetovEnvelope:
    """Canonical envelope of a finite Katetov function: generator values are
    recomputed as envelope values (a no-op exactly when the data is already
    convex-consistent)."""
    if strict:
        rep = is_katetov(fk)
        if not rep.ok:
            raise ValueError(f"not a Katetov function: {rep.violations[:3]}")
    raw = ConvexKatetovEnvelope(fk.space, fk.support, fk.values, canonical=False)
    canon = np.array([eval_envelope(raw, y) for y in fk.support])
    return ConvexKatetovEnvelope(fk.space, fk.support.copy(), canon, canonical=True)


def validate_envelope(ck: ConvexKatetovEnvelope, tol: float = CANON_TOL) -> Report:
    rep = Report()
    fk = FiniteKatetov(ck.space, ck.points, ck.values)
    rep.violations.extend(is_katetov(fk).violations)
    for j, y in enumerate(ck.points):
        val = eval_envelope(ck, y)
        if abs(val - ck.values[j]) > tol * (1.0 + abs(val)):
            rep.add("not-canonical", f"generator {j} value deviates from envelope",
                    index=j, stored=float(ck.values[j]), computed=val)
    return rep


def dual_norm_any(space, f) -> float:
    """Dual norm for explicit or oracle spaces (sup over the unit ball)."""
    if getattr(space, "is_explicit", False):
        return dual_norm(space, f)
    f = as_vector(f, space.dim)
    bld = LPBuilder()
    x = bld.add_vars(space.dim)
    t = bld.add_vars(1)
    bld.add_row([(t, [1.0])], EQ, 1.0)
    space.norm_epigraph(bld, AffineVec.of_vars(x), t[0])
    bld.add_objective_terms(x, f)
    bld.set_sense("max")
    sol = bld.solve()
    if not sol.optimal:
        raise RuntimeError(f"dual norm LP ended {sol.status}")
    return float(sol.value)


def envelope_conjugate(ck: ConvexKatetovEnvelope, f) -> float:
    """sup_x <f, x> - ck(x) = max_j (<f, y_j> - c_j), for dual_norm(f) <= 1.

    The closed form holds because conjugation ignores the convex-envelope
    step and each piece ||x - y_j|| + c_j has conjugate <f, y_j> - c_j on
    the dual unit ball (+infinity outside it).
    """
    f = as_vector(f, ck.space.dim)
    if dual_norm_any(ck.space, f) > 1.0 + 1e-9:
        raise FunctionalTooLarge("conjugate is +infinity outside the dual unit ball")
    return float(np.max(ck.points @ f - ck.values))


def sup_distance(ck0: ConvexKatetovEnvelope, ck1: ConvexKatetovEnvelope) -> float:
    """Supremum distance between canonical envelopes.

    The sup over the whole space is attained on the union of the generator
    supports: if ck0 - ck1 = t > 0 at x, realizing ck1(x) through hull data
    and using that ck0 is convex and 1-Lipschitz pushes a gap >= t to some
    generator of ck1 (and symmetrically), where canonical values are exact.
    """
    if not same_space(ck0.space, ck1.space):
        raise SpaceMismatch("envelopes live over different spaces")
    if not (ck0.canonical and ck1.canonical):
        raise ValueError("sup_distance requires canonical envelopes")
    best = 0.0
    for j, y in enumerate(ck1.points):
        best = max(best, abs(eval_envelope(ck0, y) - ck1.values[j]))
    for j, y in enumerate(ck0.points):
        best = max(best, abs(ck0.values[j] - eval_envelope(ck1, y)))
    return best


def one_point_norm(ck: ConvexKatetovEnvelope, alpha: float, a) -> float:
    """Seminorm value ||alpha x - a|| = |alpha| ck(a / alpha) (norm of a when
    alpha = 0) of the one-point extension defined by ck."""
    a = as_vector(a, ck.space.dim)
    if alpha == 0.0:
        return ck.space.norm(a)
    return abs(alpha) * eval_envelope(ck, a / alpha)
