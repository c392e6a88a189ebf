"""Geometric scheme components: validation, ideals, condition rows, residual/trace rules."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from ..algebra.ideal import Ideal, ideal_intersect, ideal_power, intersect_all
from ..algebra.linalg import rref
from ..algebra.ring import Ring, monomials_of_degree
from .geometry import (
    Coords,
    canonical,
    collinear,
    forms_vanishing_on,
    incident,
    line_meet_hyperplane,
    linear_ideal_gens,
    local_frame,
    span_rank,
)

KINDS = (
    "line", "collinear_points", "simple_point", "fat_point", "planar_fat_point", "two_dot",
    "degenerate_conic", "sundial", "d_point", "cone_config", "two_s_cone", "star_config",
)

# kinds with a closed-form condition count (independent conditions when generic)
COUNTABLE = ("line", "simple_point", "collinear_points", "fat_point", "planar_fat_point", "two_dot")


class SchemeError(ValueError):
    """A component record violates the precondition of its kind."""


@dataclass(frozen=True)
class SchemeComponent:
    kind: str
    points: tuple[Coords, ...] = ()
    support: Coords | None = None
    plane: Coords | None = None
    mult: int | None = None
    direction: Coords | None = None
    label: str = field(default="", compare=False)

    @property
    def count(self) -> int:
        """Number of lines (cones, stars) or points (collinear points)."""
        if self.kind == "star_config":
            return len(self.points) // 2
        return len(self.points)

    def lines(self) -> list[tuple[Coords, Coords]]:
        """The lines contained in the component, each as two spanning points."""
        k = self.kind
        if k == "line":
            return [(self.points[0], self.points[1])]
        if k in ("degenerate_conic", "sundial", "cone_config", "two_s_cone"):
            return [(self.support, a) for a in self.points]
        if k == "star_config":
            return [(self.points[i], self.points[i + 1]) for i in range(0, len(self.points), 2)]
        return []

    def relabel(self, label: str) -> "SchemeComponent":
        return replace(self, label=label)


# ---- constructors (canonicalise and normalise multiplicity one) ----

def _c(v, p):
    return canonical(v, p)


def line(a, b, p, label="") -> SchemeComponent:
    return SchemeComponent("line", (_c(a, p), _c(b, p)), label=label)


def simple_point(P, p, label="") -> SchemeComponent:
    return SchemeComponent("simple_point", support=_c(P, p), label=label)


def collinear_points(points, p, label="") -> SchemeComponent:
    return SchemeComponent("collinear_points", tuple(_c(a, p) for a in points), label=label)


def fat_point(P, m, p, label="") -> SchemeComponent:
    if m == 1:
        return simple_point(P, p, label)
    return SchemeComponent("fat_point", support=_c(P, p), mult=m, label=label)


def planar_fat_point(P, plane, m, p, label="") -> SchemeComponent:
    if m == 1:
        return simple_point(P, p, label)
    return SchemeComponent("planar_fat_point", support=_c(P, p), plane=_c(plane, p), mult=m, label=label)


def two_dot(P, direction, p, label="") -> SchemeComponent:
    return SchemeComponent("two_dot", support=_c(P, p), direction=_c(direction, p), label=label)


def degenerate_conic(Q, a, b, p, label="") -> SchemeComponent:
    return SchemeComponent("degenerate_conic", (_c(a, p), _c(b, p)), support=_c(Q, p), label=label)


def sundial(Q, a, b, p, label="") -> SchemeComponent:
    return SchemeComponent("sundial", (_c(a, p), _c(b, p)), support=_c(Q, p), label=label)


def d_point(P, plane, m, p, label="") -> SchemeComponent:
    return SchemeComponent("d_point", support=_c(P, p), plane=_c(plane, p), mult=m, label=label)


def cone_config(P, points, p, plane=None, label="") -> SchemeComponent:
    return SchemeComponent("cone_config", tuple(_c(a, p) for a in points), support=_c(P, p),
                           plane=None if plane is None else _c(plane, p), label=label)


def two_s_cone(P, plane, points, p, label="") -> SchemeComponent:
    return SchemeComponent("two_s_cone", tuple(_c(a, p) for a in points), support=_c(P, p),
                           plane=_c(plane, p), label=label)


def star_config(pairs, p, plane=None, label="") -> SchemeComponent:
    pts = tuple(_c(v, p) for pair in pairs for v in pair)
    return SchemeComponent("star_config", pts, plane=None if plane is None else _c(plane, p), label=label)


# ---- validation ----

def _need(cond: bool, comp: SchemeComponent, msg: str):
    if not cond:
        raise SchemeError(f"{comp.kind}{' ' + comp.label if comp.label else ''}: {msg}")


def validate(comp: SchemeComponent, n: int, p: int) -> None:
    k = comp.kind
    _need(k in KINDS, comp, f"unknown kind (expected one of {', '.join(KINDS)})")
    for v in comp.points + tuple(x for x in (comp.support, comp.plane, comp.direction) if x is not None):
        _need(len(v) == n + 1, comp, f"coordinates must have length {n + 1}")
    if k == "line":
        _need(len(comp.points) == 2 and span_rank(comp.points, p) == 2, comp, "needs two distinct points")
    elif k == "simple_point":
        _need(comp.support is not None, comp, "needs a support point")
    elif k == "collinear_points":
        _need(len(comp.points) >= 1, comp, "needs at least one point")
        _need(len(set(comp.points)) == len(comp.points), comp, "points must be distinct")
        _need(collinear(comp.points, p), comp, "points are not collinear")
    elif k in ("fat_point", "planar_fat_point", "d_point"):
        _need(comp.support is not None, comp, "needs a support point")
        _need(comp.mult is not None and comp.mult >= 1, comp, "multiplicity must be >= 1")
        if k != "fat_point":
            _need(comp.plane is not None, comp, "needs a plane")
            _need(incident(comp.plane, comp.support, p), comp, "support point must lie on the plane")
        if k == "d_point":
            _need(n >= 2, comp, "needs ambient dimension >= 2")
    elif k == "two_dot":
        _need(comp.support is not None and comp.direction is not None, comp, "needs support and direction")
        _need(span_rank([comp.support, comp.direction], p) == 2, comp, "direction must differ from support")
    elif k in ("degenerate_conic", "sundial"):
        _need(comp.support is not None and len(comp.points) == 2, comp, "needs node and two points")
        _need(span_rank([comp.support, *comp.points], p) == 3, comp, "lines must be distinct and meet only at the node")
        if k == "sundial":
            _need(n == 3, comp, "sundials are supported in P^3 only")
    elif k in ("cone_config", "two_s_cone"):
        _need(comp.support is not None and len(comp.points) >= 2, comp, "needs a vertex and at least two lines")
        pts = [comp.support, *comp.points]
        _need(span_rank(pts, p) <= 3, comp, "lines must be coplanar")
        for a in comp.points:
            _need(span_rank([comp.support, a], p) == 2, comp, "line points must differ from the vertex")
        dirs = {_line_key(comp.support, a, p) for a in comp.points}
        _need(len(dirs) == len(comp.points), comp, "lines must be distinct")
        if comp.plane is not None:
            _need(all(incident(comp.plane, v, p) for v in pts), comp, "lines must lie in the plane")
        if k == "two_s_cone":
            _need(comp.plane is not None, comp, "needs the plane H")
            _need(n >= 3, comp, "needs ambient dimension >= 3")
    elif k == "star_config":
        _need(len(comp.points) >= 4 and len(comp.points) % 2 == 0, comp, "needs at least two lines")
        _need(span_rank(comp.points, p) <= 3, comp, "lines must be coplanar")
        ls = comp.lines()
        for a, b in ls:
            _need(span_rank([a, b], p) == 2, comp, "degenerate line")
        keys = [_line_key(a, b, p) for a, b in ls]
        _need(len(set(keys)) == len(keys), comp, "lines must be distinct")
        plane = _span_plane(comp, p)
        forms = [_line_form_in_plane(a, b, plane, p) for a, b in ls]
        extra = [] if plane is None else [plane]
        full = n + 1
        for i in range(len(forms)):
            for j in range(i + 1, len(forms)):
                for k2 in range(j + 1, len(forms)):
                    _need(span_rank([forms[i], forms[j], forms[k2], *extra], p) == full,
                          comp, "three lines are concurrent")


def _line_key(a, b, p) -> tuple:
    """Canonical representative of the line ab (row-reduced basis)."""
    red, _ = rref(np.array([a, b], dtype=np.int64), p)
    return tuple(tuple(int(x) for x in row) for row in red)


# ---- linear algebra helpers ----

def _span_plane(comp: SchemeComponent, p: int) -> Coords | None:
    """The plane (as a linear form in P^3, or None in P^2) containing a planar configuration."""
    if comp.plane is not None:
        return comp.plane
    pts = list(comp.points) + ([comp.support] if comp.support is not None else [])
    n = len(pts[0]) - 1
    if n == 2:
        return None
    forms = forms_vanishing_on(pts, p, n)
    if len(forms) != n - 2:
        raise SchemeError(f"{comp.kind}: configuration does not span a plane")
    if n == 3:
        return canonical(forms[0], p)
    raise SchemeError(f"{comp.kind}: planar configurations need an explicit plane when n > 3")


def _line_form_in_plane(a, b, plane, p) -> Coords:
    """A linear form vanishing on the line ab but not on the whole plane."""
    n = len(a) - 1
    forms = forms_vanishing_on([a, b], p, n)
    if plane is None:
        return canonical(forms[0], p)
    for f in forms:
        if span_rank([f, plane], p) == 2:
            return canonical(f, p)
    raise SchemeError("line does not determine a form inside the plane")


def _points_on_line_ideal(ring: Ring, a, b, pts) -> Ideal:
    """Reduced points on the line ab: I_line + (product of separating forms)."""
    p = ring.p
    n = ring.nvars - 1
    base = linear_ideal_gens(ring, [a, b])
    prod = ring.one()
    for P in pts:
        forms = forms_vanishing_on([P], p, n)
        f = next(f for f in forms if not (incident(f, a, p) and incident(f, b, p)))
        prod = prod * ring.linear_form(f)
    return Ideal(ring, base + (prod,))


def _planar_lines_ideal(ring: Ring, lines, plane) -> Ideal:
    """Union of distinct lines inside one plane (or in P^2)."""
    prod = ring.one()
    for a, b in lines:
        prod = prod * ring.linear_form(_line_form_in_plane(a, b, plane, ring.p))
    gens = (prod,) if plane is None else (ring.linear_form(plane), prod)
    return Ideal(ring, gens)


def point_ideal(ring: Ring, P) -> Ideal:
    return Ideal(ring, linear_ideal_gens(ring, [P]))


def line_ideal(ring: Ring, a, b) -> Ideal:
    return Ideal(ring, linear_ideal_gens(ring, [a, b]))


# ---- ideals ----

def build_component(comp: SchemeComponent, ring: Ring) -> Ideal:
    """Homogeneous ideal of a component in the coordinate ring of P^n."""
    n = ring.nvars - 1
    p = ring.p
    validate(comp, n, p)
    k = comp.kind
    if k == "line":
        return line_ideal(ring, *comp.points)
    if k == "simple_point":
        return point_ideal(ring, comp.support)
    if k == "collinear_points":
        if len(comp.points) == 1:
            return point_ideal(ring, comp.points[0])
        a, b = _two_spanning(comp.points, p)
        return _points_on_line_ideal(ring, a, b, comp.points)
    if k == "fat_point":
        return ideal_power(point_ideal(ring, comp.support), comp.mult)
    if k == "planar_fat_point":
        I = ideal_power(point_ideal(ring, comp.support), comp.mult)
        return Ideal(ring, I.generators + (ring.linear_form(comp.plane),))
    if k == "d_point":
        I = ideal_power(point_ideal(ring, comp.support), comp.mult)
        h = ring.linear_form(comp.plane)
        return Ideal(ring, I.generators + (h * h,))
    if k == "two_dot":
        sq = ideal_power(point_ideal(ring, comp.support), 2)
        return Ideal(ring, sq.generators + linear_ideal_gens(ring, [comp.support, comp.direction]))
    if k == "degenerate_conic":
        plane = _span_plane(comp, p) if n == 3 else None
        if n <= 3:
            return _planar_lines_ideal(ring, comp.lines(), plane)
        return intersect_all([line_ideal(ring, a, b) for a, b in comp.lines()])
    if k == "sundial":
        conic = _planar_lines_ideal(ring, comp.lines(), _span_plane(comp, p))
        return ideal_intersect(conic, ideal_power(point_ideal(ring, comp.support), 2))
    if k in ("cone_config", "star_config"):
        if n > 3 and comp.plane is None:
            return intersect_all([line_ideal(ring, a, b) for a, b in comp.lines()])
        plane = _span_plane(comp, p) if n >= 3 else None
        if n > 3:
            raise SchemeError(f"{k}: only supported for n <= 3")
        return _planar_lines_ideal(ring, comp.lines(), plane)
    if k == "two_s_cone":
        if n != 3:
            raise SchemeError("two_s_cone: only supported in P^3")
        cone = _planar_lines_ideal(ring, comp.lines(), comp.plane)
        dp = build_component(d_point(comp.support, comp.plane, comp.count, p), ring)
        return ideal_intersect(cone, dp)
    raise SchemeError(f"no ideal builder for {k}")


def _two_spanning(points, p):
    a = points[0]
    for b in points[1:]:
        if span_rank([a, b], p) == 2:
            return a, b
    # a single point: any second point gives a line through it
    n = len(a) - 1
    for i in range(n + 1):
        u = tuple(int(i == j) for j in range(n + 1))
        if span_rank([a, u], p) == 2:
            return a, u
    raise SchemeError("cannot span a line")


# ---- condition rows (matrix backend) ----

@lru_cache(maxsize=None)
def _exponent_array(nvars: int, d: int) -> np.ndarray:
    return np.array(monomials_of_degree(nvars, d), dtype=np.int64).reshape(-1, nvars)


def evaluation_rows(points: Sequence[Sequence[int]], d: int, p: int) -> np.ndarray:
    """Rows ``(x^alpha(P))_alpha`` for each point."""
    pts = np.array(points, dtype=np.int64) % p
    k, nv = pts.shape
    E = _exponent_array(nv, d)
    pw = np.ones((k, nv, d + 1), dtype=np.int64)
    for e in range(1, d + 1):
        pw[:, :, e] = pw[:, :, e - 1] * pts % p
    out = np.ones((k, E.shape[0]), dtype=np.int64)
    for i in range(nv):
        out = out * pw[:, i, E[:, i]] % p
    return out


@lru_cache(maxsize=None)
def _series_tables(nloc: int, m: int):
    """Monomials of degree < m in ``nloc`` local variables and their product table by target."""
    monos = [e for deg in range(m) for e in monomials_of_degree(nloc, deg)]
    index = {e: i for i, e in enumerate(monos)}
    by_target: dict[int, tuple[list[int], list[int]]] = {}
    for a, ea in enumerate(monos):
        for b, eb in enumerate(monos):
            s = tuple(x + y for x, y in zip(ea, eb))
            if sum(s) < m:
                lst = by_target.setdefault(index[s], ([], []))
                lst[0].append(a)
                lst[1].append(b)
    table = [(c, np.array(aa), np.array(bb)) for c, (aa, bb) in sorted(by_target.items())]
    return monos, index, table


def _series_mul(A: np.ndarray, B: np.ndarray, table, p: int) -> np.ndarray:
    out = np.zeros_like(A)
    for c, aa, bb in table:
        out[:, c] = (A[:, aa] * B[:, bb] % p).sum(axis=1) % p
    return out


def taylor_rows(frame: Sequence[Sequence[int]], m: int, standard: Sequence[tuple[int, ...]],
                d: int, p: int) -> np.ndarray:
    """Coefficients of ``u^beta`` in ``f(P + sum u_j v_j)`` for every degree-d monomial f.

    ``frame = [P, v_1..v_n]``; ``standard`` lists the exponents beta (all of degree < m).
    """
    g = np.array(frame, dtype=np.int64) % p  # rows: P, v_1..v_n
    nv = g.shape[1]
    nloc = nv - 1
    monos, index, table = _series_tables(nloc, m)
    K = len(monos)
    E = _exponent_array(nv, d)
    # series of each coordinate function: x_i = P_i + sum_j u_j v_{j,i}
    lin = np.zeros((nv, K), dtype=np.int64)
    lin[:, 0] = g[0]
    for j in range(nloc):
        e = tuple(int(i == j) for i in range(nloc))
        if e in index:
            lin[:, index[e]] = g[j + 1]
    powers = np.zeros((nv, d + 1, K), dtype=np.int64)
    powers[:, 0, 0] = 1
    for e in range(1, d + 1):
        powers[:, e, :] = _series_mul(powers[:, e - 1, :], lin, table, p)
    S = np.zeros((E.shape[0], K), dtype=np.int64)
    S[:, 0] = 1
    for i in range(nv):
        S = _series_mul(S, powers[i, E[:, i], :], table, p)
    cols = [index[b] for b in standard]
    return np.ascontiguousarray(S[:, cols].T)


def _standard_fat(nloc: int, m: int, planar: bool = False, dpoint: bool = False):
    out = []
    for deg in range(m):
        for e in monomials_of_degree(nloc, deg):
            if planar and e[-1] > 0:
                continue
            if dpoint and e[-1] > 1:
                continue
            out.append(e)
    return out


def line_sample_points(a, b, d: int, p: int, salt: int = 0) -> list[Coords]:
    """``d + 1`` distinct points of the line ab (deterministic in the line and salt)."""
    rng = np.random.default_rng([salt, *a, *b])
    cs: list[int] = []
    while len(cs) < d + 1:
        c = int(rng.integers(0, p))
        if c not in cs:
            cs.append(c)
    return [tuple((int(x) + c * int(y)) % p for x, y in zip(a, b)) for c in cs]


def conditions(comp: SchemeComponent, d: int, n: int, p: int) -> np.ndarray:
    """Linear conditions on degree-d forms cutting out ``(I_comp)_d``."""
    validate(comp, n, p)
    N = len(monomials_of_degree(n + 1, d))
    k = comp.kind
    parts: list[np.ndarray] = []
    for a, b in comp.lines():
        parts.append(evaluation_rows(line_sample_points(a, b, d, p), d, p))
    if k == "simple_point":
        parts.append(evaluation_rows([comp.support], d, p))
    elif k == "collinear_points":
        parts.append(evaluation_rows(comp.points, d, p))
    elif k == "fat_point":
        fr = local_frame(p, n, comp.support)
        parts.append(taylor_rows(fr, comp.mult, _standard_fat(n, comp.mult), d, p))
    elif k == "planar_fat_point":
        fr = local_frame(p, n, comp.support, plane=comp.plane)
        parts.append(taylor_rows(fr, comp.mult, _standard_fat(n, comp.mult, planar=True), d, p))
    elif k == "d_point" or k == "two_s_cone":
        m = comp.mult if k == "d_point" else comp.count
        fr = local_frame(p, n, comp.support, plane=comp.plane)
        parts.append(taylor_rows(fr, m, _standard_fat(n, m, dpoint=True), d, p))
    elif k == "two_dot":
        fr = local_frame(p, n, comp.support, direction=comp.direction)
        e1 = tuple(int(i == 0) for i in range(n))
        parts.append(taylor_rows(fr, 2, [(0,) * n, e1], d, p))
    elif k == "sundial":
        fr = local_frame(p, n, comp.support)
        parts.append(taylor_rows(fr, 2, _standard_fat(n, 2), d, p))
    if not parts:
        return np.zeros((0, N), dtype=np.int64)
    return np.vstack(parts)


def condition_count(comp: SchemeComponent, d: int, n: int) -> int:
    """Expected number of conditions for independence-countable kinds."""
    k = comp.kind
    if k == "line":
        return d + 1
    if k == "simple_point":
        return 1
    if k == "collinear_points":
        return min(len(comp.points), d + 1)
    if k == "fat_point":
        return comb(n + comp.mult - 1, n)
    if k == "planar_fat_point":
        return comb(comp.mult + 1, 2)
    if k == "two_dot":
        return 2
    raise SchemeError(f"{k} has no closed-form condition count; use actual_h0")


# ---- residual and trace rules ----

def _off(h, v, p) -> bool:
    return not incident(h, v, p)


def restrict_to_hyperplane(v: Sequence[int], h: Sequence[int], p: int) -> Coords:
    """Coordinates of a point of H in H's own coordinates (drop the pivot coordinate)."""
    k = max(i for i, c in enumerate(h) if c % p)
    return canonical([x for i, x in enumerate(v) if i != k], p)


def restrict_form(f: Sequence[int], h: Sequence[int], p: int) -> Coords:
    """A linear form f restricted to H, in H's coordinates."""
    k = max(i for i, c in enumerate(h) if c % p)
    inv = pow(int(h[k]), -1, p)
    return canonical([(int(f[i]) - int(f[k]) * int(h[i]) * inv) % p for i in range(len(f)) if i != k], p)


def residual_rule(comp: SchemeComponent, h: Sequence[int], p: int) -> list[SchemeComponent]:
    """Expected components of ``Res_H`` of a component (verified against the ideal quotient)."""
    k, lab = comp.kind, comp.label
    h = canonical(h, p)
    on = lambda v: incident(h, v, p)  # noqa: E731
    if k == "line":
        return [] if all(on(v) for v in comp.points) else [comp]
    if k == "simple_point":
        return [] if on(comp.support) else [comp]
    if k == "collinear_points":
        rest = [v for v in comp.points if not on(v)]
        return [collinear_points(rest, p, lab)] if rest else []
    if k == "fat_point":
        return [fat_point(comp.support, comp.mult - 1, p, lab)] if on(comp.support) and comp.mult > 1 else \
            ([] if on(comp.support) else [comp])
    if k == "planar_fat_point":
        if not on(comp.support):
            return [comp]
        if comp.plane == h:
            return []
        return [planar_fat_point(comp.support, comp.plane, comp.mult - 1, p, lab)] if comp.mult > 1 else []
    if k == "two_dot":
        if not on(comp.support):
            return [comp]
        return [] if on(comp.direction) else [simple_point(comp.support, p, lab)]
    if k == "d_point":
        if not on(comp.support):
            return [comp]
        if comp.plane == h:
            return [planar_fat_point(comp.support, h, comp.mult - 1, p, lab)] if comp.mult > 1 else []
    if k == "degenerate_conic":
        keep = [(a, b) for a, b in comp.lines() if not (on(a) and on(b))]
        if len(keep) == 2:
            return [comp]
        return [line(a, b, p, lab) for a, b in keep]
    if k == "sundial":
        inside = [on(a) for a in comp.points]
        if not on(comp.support):
            return [comp]
        if not any(inside):
            return [degenerate_conic(comp.support, *comp.points, p, lab)]
        if all(inside):
            return [simple_point(comp.support, p, lab)]
    if k in ("cone_config", "star_config"):
        inside = [on(a) and on(b) for a, b in comp.lines()]
        if all(inside):
            return []
        if not any(inside):
            return [comp]
    if k == "two_s_cone" and comp.plane == h:
        return [planar_fat_point(comp.support, h, comp.count - 1, p, lab)]
    raise SchemeError(f"no residual rule for {k} in this position relative to H")


def trace_rule(comp: SchemeComponent, h: Sequence[int], p: int) -> list[SchemeComponent]:
    """Expected components of ``Tr_H`` in H's coordinates (verified against the ideal trace)."""
    k, lab = comp.kind, comp.label
    h = canonical(h, p)
    on = lambda v: incident(h, v, p)  # noqa: E731
    r = lambda v: restrict_to_hyperplane(v, h, p)  # noqa: E731
    if k == "line":
        a, b = comp.points
        if on(a) and on(b):
            return [line(r(a), r(b), p, lab)]
        return [simple_point(r(line_meet_hyperplane(a, b, h, p)), p, lab)]
    if k == "simple_point":
        return [simple_point(r(comp.support), p, lab)] if on(comp.support) else []
    if k == "collinear_points":
        pts = [r(v) for v in comp.points if on(v)]
        return [collinear_points(pts, p, lab)] if pts else []
    if k == "fat_point":
        return [fat_point(r(comp.support), comp.mult, p, lab)] if on(comp.support) else []
    if k in ("planar_fat_point", "d_point"):
        if not on(comp.support):
            return []
        if comp.plane == h:
            return [fat_point(r(comp.support), comp.mult, p, lab)]
        if k == "planar_fat_point":
            return [planar_fat_point(r(comp.support), restrict_form(comp.plane, h, p), comp.mult, p, lab)]
    if k == "two_dot":
        if not on(comp.support):
            return []
        if on(comp.direction):
            return [two_dot(r(comp.support), r(comp.direction), p, lab)]
        return [simple_point(r(comp.support), p, lab)]
    if k in ("degenerate_conic", "sundial"):
        Q = comp.support
        a, b = comp.points
        ina, inb = on(a), on(b)
        if not on(Q):
            return [simple_point(r(line_meet_hyperplane(Q, a, h, p)), p, lab),
                    simple_point(r(line_meet_hyperplane(Q, b, h, p)), p, lab)]
        if ina and inb:
            return [cone_config(r(Q), [r(a), r(b)], p, label=lab)]
        if not ina and not inb:
            if k == "sundial":
                return [fat_point(r(Q), 2, p, lab)]
            return [two_dot(r(Q), r(line_meet_hyperplane(a, b, h, p)), p, lab)]
        if k == "degenerate_conic":
            a2 = a if ina else b
            return [line(r(Q), r(a2), p, lab)]
    if k in ("cone_config", "two_s_cone", "star_config"):
        ls = comp.lines()
        if all(on(a) and on(b) for a, b in ls):
            if k == "star_config":
                return [star_config([(r(a), r(b)) for a, b in ls], p, label=lab)]
            return [cone_config(r(comp.support), [r(a) for a in comp.points], p, label=lab)]
    raise SchemeError(f"no trace rule for {k} in this position relative to H")
