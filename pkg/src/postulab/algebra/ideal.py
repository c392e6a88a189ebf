"""Homogeneous ideals: Groebner bases, sums, intersections, quotients, slices."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .groebner import GroebnerLimits, ResourceLimitError, buchberger, normal_form
from .linalg import rank, rref
from .ring import Exponent, MonomialOrder, Polynomial, Ring, monomials_of_degree

DEFAULT_MAX_SLICE = 20_000


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic basis, sorted ascending in ``order``."""

    ring: Ring
    order: MonomialOrder
    basis: tuple[Polynomial, ...]

    @property
    def tag(self) -> str:
        return self.order.tag

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.basis, self.order)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0] == self.ring.one()

    def leading_monomials(self) -> list[Exponent]:
        return [g.leading_monomial(self.order) for g in self.basis]

    def signature(self) -> tuple:
        """Hashable canonical form, equal iff the ideals are equal."""
        return tuple(tuple(g.terms(self.order)) for g in self.basis)


@dataclass(frozen=True, eq=False)
class Ideal:
    """Ideal given by homogeneous generators (for the ring's weights)."""

    ring: Ring
    generators: tuple[Polynomial, ...]
    _gb_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if g.ring != self.ring:
                raise ValueError("generator lives in a different ring")
            if not g.is_homogeneous():
                raise ValueError(f"generator {g.to_str()} is not homogeneous")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, ring: Ring, gens: Iterable[Polynomial | str]) -> "Ideal":
        return cls(ring, tuple(ring.parse(g) if isinstance(g, str) else g for g in gens))

    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, (ring.one(),))

    @classmethod
    def zero(cls, ring: Ring) -> "Ideal":
        return cls(ring, ())

    @classmethod
    def maximal(cls, ring: Ring, indices: Sequence[int] | None = None) -> "Ideal":
        idx = range(ring.nvars) if indices is None else indices
        return cls(ring, tuple(ring.var(i) for i in idx))

    def gb(self, order: MonomialOrder | None = None, limits: GroebnerLimits | None = None) -> GroebnerBasis:
        return gb(self, order, limits)

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __pow__(self, k: int) -> "Ideal":
        return ideal_power(self, k)

    def __and__(self, other: "Ideal") -> "Ideal":
        return ideal_intersect(self, other)

    def contains(self, f: Polynomial) -> bool:
        return self.gb().contains(f)

    def __repr__(self):
        return "Ideal(" + ", ".join(g.to_str() for g in self.generators) + ")"


def _sort_key(order: MonomialOrder):
    def key(g: Polynomial):
        return [order.key(e) + (c,) for e, c in g.terms(order)]
    return key


def gb(I: Ideal, order: MonomialOrder | None = None, limits: GroebnerLimits | None = None) -> GroebnerBasis:
    """Reduced Groebner basis (cached per ideal and order)."""
    order = order or MonomialOrder.grevlex(I.ring)
    hit = I._gb_cache.get(order)
    if hit is not None:
        return hit
    basis = buchberger(I.generators, order, limits)
    basis.sort(key=_sort_key(order))
    out = GroebnerBasis(I.ring, order, tuple(basis))
    I._gb_cache[order] = out
    return out


def ideal_from_gb(G: GroebnerBasis) -> Ideal:
    I = Ideal(G.ring, G.basis)
    I._gb_cache[G.order] = G
    return I


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    return gb(I).signature() == gb(J).signature()


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True when J is a subset of I."""
    G = gb(I)
    return all(G.contains(g) for g in J.generators)


def ideal_sum(*ideals: Ideal) -> Ideal:
    ring = ideals[0].ring
    gens: list[Polynomial] = []
    for I in ideals:
        if I.ring != ring:
            raise ValueError("ideals live in different rings")
        gens.extend(I.generators)
    return Ideal(ring, tuple(gens))


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(I.ring, tuple(f * g for f in I.generators for g in J.generators))


def ideal_power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise ValueError("negative power")
    out = Ideal.unit(I.ring)
    for _ in range(k):
        out = Ideal(I.ring, tuple(_dedupe(f * g for f in out.generators for g in I.generators)))
    return out


def _dedupe(polys: Iterable[Polynomial]) -> list[Polynomial]:
    seen = set()
    out = []
    for f in polys:
        f = f.monic()
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def eliminate(I: Ideal, variables: Sequence[int], limits: GroebnerLimits | None = None) -> Ideal:
    """``I`` intersected with the subring missing ``variables`` (kept in the same ring)."""
    order = MonomialOrder.elimination(I.ring, variables)
    G = gb(I, order, limits)
    drop = set(variables)
    keep = tuple(g for g in G.basis if not (g.variables() & drop))
    return Ideal(I.ring, keep)


def _tagged_ring(ring: Ring, name: str = "_w") -> Ring:
    # weight-0 tag variable in front; keeps weighted homogeneity
    while name in ring.names:
        name += "_"
    return Ring((name,) + ring.names, ring.p, (0,) + ring.weights)


def _lift(f: Polynomial, target: Ring) -> Polynomial:
    return f.embed(target, range(1, target.nvars))


def _drop(f: Polynomial, source: Ring) -> Polynomial:
    return Polynomial(source, {e[1:]: c for e, c in f.items()})


def ideal_intersect(I: Ideal, J: Ideal, limits: GroebnerLimits | None = None) -> Ideal:
    """``I ∩ J`` by eliminating ``w`` from ``w·I + (1−w)·J``."""
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    ring = I.ring
    if not I.generators or not J.generators:
        return Ideal.zero(ring)
    if gb(I).is_unit():
        return J
    if gb(J).is_unit():
        return I
    big = _tagged_ring(ring)
    w = big.var(0)
    one = big.one()
    gens = [w * _lift(f, big) for f in I.generators]
    gens += [(one - w) * _lift(g, big) for g in J.generators]
    order = MonomialOrder.elimination(big, [0])
    basis = buchberger(gens, order, limits)
    kept = [_drop(g, ring) for g in basis if g.coeffs and all(e[0] == 0 for e in g.coeffs)]
    out = Ideal(ring, tuple(kept))
    # the kept elements already form the reduced grevlex basis
    grev = MonomialOrder.grevlex(ring)
    kept.sort(key=_sort_key(grev))
    out._gb_cache[grev] = GroebnerBasis(ring, grev, tuple(kept))
    return out


def intersect_all(ideals: Sequence[Ideal], limits: GroebnerLimits | None = None) -> Ideal:
    if not ideals:
        raise ValueError("need at least one ideal")
    out = ideals[0]
    for J in ideals[1:]:
        out = ideal_intersect(out, J, limits)
    return out


def quotient_by_element(I: Ideal, f: Polynomial, limits: GroebnerLimits | None = None) -> Ideal:
    """``I : (f)`` as ``(I ∩ (f)) / f``."""
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    if f.is_constant():
        return I
    K = ideal_intersect(I, Ideal(I.ring, (f,)), limits)
    gens = tuple(g.divide_exact(f) for g in gb(K).basis)
    out = Ideal(I.ring, gens)
    # dividing a reduced basis by f keeps it reduced when f is monic in grevlex
    return out


def ideal_quotient(I: Ideal, J: Ideal, limits: GroebnerLimits | None = None) -> Ideal:
    """``I : J = {f : f·J ⊆ I}``."""
    if not J.generators:
        return Ideal.unit(I.ring)
    parts = [quotient_by_element(I, g, limits) for g in J.generators]
    return intersect_all(parts, limits)


def saturate(I: Ideal, f: Polynomial, method: str = "iterate",
             limits: GroebnerLimits | None = None, max_steps: int = 64) -> Ideal:
    """``I : f^∞``.

    ``iterate`` repeats ``I : f`` until the reduced basis stops changing;
    ``eliminate`` uses ``I + (1 − y·f)`` and needs ``f`` of weight 0.
    """
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    if f.is_constant():
        return I
    if method == "eliminate":
        return _saturate_eliminate(I, f, limits)
    if method != "iterate":
        raise ValueError(f"unknown saturation method {method!r}")
    cur = I
    for _ in range(max_steps):
        nxt = quotient_by_element(cur, f, limits)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt
    raise ResourceLimitError(f"saturation did not stabilise in {max_steps} steps")


def _saturate_eliminate(I: Ideal, f: Polynomial, limits: GroebnerLimits | None) -> Ideal:
    if f.degree != 0 or not f.is_homogeneous():
        raise ValueError("elimination saturation needs a weight-0 homogeneous polynomial")
    ring = I.ring
    big = _tagged_ring(ring, "_y")
    y = big.var(0)
    gens = [_lift(g, big) for g in I.generators] + [big.one() - y * _lift(f, big)]
    order = MonomialOrder.elimination(big, [0])
    basis = buchberger(gens, order, limits)
    kept = [_drop(g, ring) for g in basis if all(e[0] == 0 for e in g.coeffs)]
    return Ideal(ring, tuple(kept))


def saturate_irrelevant(I: Ideal, variables: Sequence[int] | None = None,
                        limits: GroebnerLimits | None = None, max_steps: int = 64) -> Ideal:
    """Saturation by the irrelevant ideal, by iterating ``I : m``."""
    m = Ideal.maximal(I.ring, variables)
    cur = I
    for _ in range(max_steps):
        nxt = ideal_quotient(cur, m, limits)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt
    raise ResourceLimitError(f"saturation did not stabilise in {max_steps} steps")


def substitute_ideal(I: Ideal, images: Sequence[Polynomial], target: Ring) -> Ideal:
    return Ideal(target, tuple(g.substitute(images, target) for g in I.generators))


# ---- degree slices ----

def _check_standard(ring: Ring):
    if any(w != 1 for w in ring.weights):
        raise ValueError("degree slices need the standard grading")


def slice_matrix(I: Ideal, d: int, max_dim: int = DEFAULT_MAX_SLICE) -> tuple[np.ndarray, tuple[Exponent, ...]]:
    """Rows spanning ``I_d`` in the monomial basis of degree ``d`` (not reduced)."""
    ring = I.ring
    _check_standard(ring)
    if d < 0:
        raise ValueError("degree must be non-negative")
    monos = monomials_of_degree(ring.nvars, d)
    if len(monos) > max_dim:
        raise ResourceLimitError(f"slice dimension {len(monos)} exceeds cap {max_dim}")
    index = {e: i for i, e in enumerate(monos)}
    rows = []
    for g in I.generators:
        k = d - g.degree
        if k < 0:
            continue
        for mu in monomials_of_degree(ring.nvars, k):
            row = np.zeros(len(monos), dtype=np.int64)
            for e, c in g.items():
                row[index[tuple(a + b for a, b in zip(e, mu))]] = c
            rows.append(row)
    if not rows:
        return np.zeros((0, len(monos)), dtype=np.int64), monos
    return np.array(rows, dtype=np.int64), monos


def degree_slice(I: Ideal, d: int, max_dim: int = DEFAULT_MAX_SLICE) -> tuple[np.ndarray, tuple[Exponent, ...]]:
    """Echelon basis of ``I_d`` (rows) over the degree-``d`` monomials."""
    mat, monos = slice_matrix(I, d, max_dim)
    if mat.shape[0] == 0:
        return mat, monos
    red, _ = rref(mat, I.ring.p)
    return red, monos


def hilbert_h0(I: Ideal, d: int, method: str = "slice", max_dim: int = DEFAULT_MAX_SLICE) -> int:
    """``dim I_d``.

    ``slice`` row-reduces generator multiples; ``gb`` counts degree-``d``
    monomials lying in the initial ideal.
    """
    if method == "slice":
        mat, _ = slice_matrix(I, d, max_dim)
        return rank(mat, I.ring.p) if mat.shape[0] else 0
    if method == "gb":
        _check_standard(I.ring)
        lms = gb(I).leading_monomials()
        count = 0
        for e in monomials_of_degree(I.ring.nvars, d):
            if any(all(a >= b for a, b in zip(e, m)) for m in lms):
                count += 1
        return count
    raise ValueError(f"unknown method {method!r}")


def hilbert_function(I: Ideal, d: int, **kw) -> int:
    """``dim (R/I)_d``."""
    n = I.ring.nvars
    return comb(d + n - 1, n - 1) - hilbert_h0(I, d, **kw)
