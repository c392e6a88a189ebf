"""Points, hyperplanes and linear spans in P^n over F_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..algebra.linalg import nullspace, rank
from ..algebra.ring import Polynomial, Ring

Coords = tuple[int, ...]

# variable names used for P^n; H = {last variable = 0} throughout
_NAMES = {1: ("t", "x"), 2: ("t", "x", "y"), 3: ("t", "x", "y", "z"), 4: ("t", "x", "y", "z", "w")}


def ambient_ring(n: int, p: int) -> Ring:
    """Coordinate ring of P^n."""
    if n < 1:
        raise ValueError("ambient dimension must be at least 1")
    names = _NAMES.get(n) or tuple(f"x{i}" for i in range(n + 1))
    return Ring(names, p)


def canonical(v: Sequence[int], p: int) -> Coords:
    """Scale so the first nonzero entry is 1."""
    v = [int(a) % p for a in v]
    for a in v:
        if a:
            inv = pow(a, -1, p)
            return tuple(x * inv % p for x in v)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjectivePoint:
    coords: Coords
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coords", canonical(self.coords, self.p))

    @property
    def n(self) -> int:
        return len(self.coords) - 1


@dataclass(frozen=True)
class Hyperplane:
    coeffs: Coords
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", canonical(self.coeffs, self.p))

    @classmethod
    def coordinate(cls, n: int, p: int, index: int | None = None) -> "Hyperplane":
        """The hyperplane {x_index = 0}; defaults to the last variable."""
        idx = n if index is None else index
        return cls(tuple(1 if i == idx else 0 for i in range(n + 1)), p)

    def contains(self, point: Sequence[int]) -> bool:
        return incident(self.coeffs, point, self.p)

    def form(self, ring: Ring) -> Polynomial:
        return ring.linear_form(self.coeffs)

    @property
    def pivot(self) -> int:
        """Index of the last nonzero coefficient (the variable eliminated on H)."""
        return max(i for i, c in enumerate(self.coeffs) if c)

    def is_coordinate(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1


def incident(h: Sequence[int], point: Sequence[int], p: int) -> bool:
    return sum(int(a) * int(b) for a, b in zip(h, point)) % p == 0


def span_rank(points: Sequence[Sequence[int]], p: int) -> int:
    if not points:
        return 0
    return rank(np.array(points, dtype=np.int64), p)


def forms_vanishing_on(points: Sequence[Sequence[int]], p: int, n: int) -> list[Coords]:
    """Coefficient vectors of the linear forms vanishing on the span of ``points``."""
    if not points:
        return [tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1)]
    ker = nullspace(np.array(points, dtype=np.int64), p)
    return [tuple(int(a) for a in row) for row in ker]


def linear_ideal_gens(ring: Ring, points: Sequence[Sequence[int]]) -> tuple[Polynomial, ...]:
    n = ring.nvars - 1
    return tuple(ring.linear_form(f) for f in forms_vanishing_on(points, ring.p, n))


def in_span(point: Sequence[int], span: Sequence[Sequence[int]], p: int) -> bool:
    return span_rank(list(span) + [list(point)], p) == span_rank(span, p)


def collinear(points: Sequence[Sequence[int]], p: int) -> bool:
    return span_rank(points, p) <= 2


def line_meet_hyperplane(a: Sequence[int], b: Sequence[int], h: Sequence[int], p: int) -> Coords:
    """Intersection of the line ab with H (the line must not lie in H)."""
    ha = sum(int(x) * int(y) for x, y in zip(h, a)) % p
    hb = sum(int(x) * int(y) for x, y in zip(h, b)) % p
    if ha == 0 and hb == 0:
        raise ValueError("line lies in the hyperplane")
    # hb*a - ha*b lies on H
    return canonical([hb * int(x) - ha * int(y) for x, y in zip(a, b)], p)


def local_frame(p: int, n: int, support: Sequence[int], direction: Sequence[int] | None = None,
                plane: Sequence[int] | None = None) -> list[Coords]:
    """Basis ``[P, v_1, ..., v_n]`` of F_p^{n+1} adapted to a point-supported scheme.

    With ``direction`` the vector ``v_1`` points along it.  With ``plane``
    the vectors ``P, v_1, ..., v_{n-1}`` span that hyperplane and ``v_n``
    lies off it.
    """
    frame = [canonical(support, p)]
    if direction is not None:
        frame.append(canonical(direction, p))
    if span_rank(frame, p) != len(frame):
        raise ValueError("direction coincides with the support point")
    units = [tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1)]
    pool = hyperplane_basis(plane, p) if plane is not None else units
    target = n if plane is not None else n + 1
    for u in pool:
        if len(frame) == target:
            break
        if span_rank(frame + [u], p) == len(frame) + 1:
            frame.append(u)
    if plane is not None:
        frame.append(next(u for u in units if not incident(plane, u, p)))
    if len(frame) != n + 1 or span_rank(frame, p) != n + 1:
        raise ValueError("could not build a local frame")
    return frame


class Sampler:
    """Seeded source of generic points, lines and planes."""

    def __init__(self, n: int, p: int, seed: int):
        self.n = n
        self.p = p
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def scalar(self, nonzero: bool = True) -> int:
        lo = 1 if nonzero else 0
        return int(self.rng.integers(lo, self.p))

    def scalars(self, k: int, distinct: bool = True) -> list[int]:
        out: list[int] = []
        while len(out) < k:
            c = self.scalar()
            if distinct and c in out:
                continue
            out.append(c)
        return out

    def vector(self) -> Coords:
        while True:
            v = [int(a) for a in self.rng.integers(0, self.p, self.n + 1)]
            if any(v):
                return canonical(v, self.p)

    def point(self) -> Coords:
        return self.vector()

    def point_in(self, h: Sequence[int]) -> Coords:
        """Generic point of the hyperplane h."""
        return self.point_in_span(hyperplane_basis(h, self.p))

    def point_off(self, h: Sequence[int]) -> Coords:
        while True:
            v = self.point()
            if not incident(h, v, self.p):
                return v

    def point_in_span(self, basis: Sequence[Sequence[int]]) -> Coords:
        while True:
            c = [int(a) for a in self.rng.integers(0, self.p, len(basis))]
            v = [sum(ci * int(b[j]) for ci, b in zip(c, basis)) % self.p for j in range(self.n + 1)]
            if any(v):
                return canonical(v, self.p)

    def point_on_line(self, a: Sequence[int], b: Sequence[int]) -> Coords:
        return self.point_in_span([a, b])

    def hyperplane(self) -> Coords:
        return self.vector()

    def hyperplane_through(self, points: Sequence[Sequence[int]]) -> Coords:
        forms = forms_vanishing_on(points, self.p, self.n)
        return self.point_in_span(forms)


def hyperplane_basis(h: Sequence[int], p: int) -> list[Coords]:
    """Basis of the linear space underlying the hyperplane h."""
    ker = nullspace(np.array([list(h)], dtype=np.int64), p)
    return [tuple(int(a) for a in row) for row in ker]
