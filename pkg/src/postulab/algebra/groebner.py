"""Buchberger's algorithm over F_p with packed monomials.

Monomials are packed into single Python ints whose integer order agrees
with the monomial order, so comparison is ``<`` and multiplication is
addition (minus a constant offset).  Only graded (weighted) block orders
are supported, which is all the engine needs: every ideal it touches is
homogeneous for some non-negative weighting.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .ring import Exponent, MonomialOrder, Polynomial, Ring

FIELD_BITS = 16
VAR_BOUND = 1 << 14  # exponents stay below this
GUARD = 1 << 15


class ResourceLimitError(RuntimeError):
    """A configured basis-size or pair cap was exceeded."""


@dataclass(frozen=True)
class GroebnerLimits:
    max_basis: int = 5000
    max_pairs: int = 500_000


class Packer:
    """Encodes exponent vectors as ints ordered like ``order``."""

    def __init__(self, nvars: int, order: MonomialOrder):
        self.nvars = nvars
        self.order = order
        fields: list[tuple[str, object]] = [("w", None)]
        for blk in order.blocks:
            fields.append(("b", blk))
            fields.extend(("v", i) for i in reversed(blk))
        nf = len(fields)
        self.shift = {}
        self.var_shift = [0] * nvars
        self.block_shift = []
        for pos, (kind, data) in enumerate(fields):
            s = FIELD_BITS * (nf - 1 - pos)
            if kind == "w":
                self.w_shift = s
            elif kind == "b":
                self.block_shift.append((s, data))
            else:
                self.var_shift[data] = s
        self.weights = order.weights
        var_mask = 0
        var_bound = 0
        guard = 0
        for s in self.var_shift:
            var_mask |= ((1 << FIELD_BITS) - 1) << s
            var_bound |= VAR_BOUND << s
            guard |= GUARD << s
        self.var_mask = var_mask
        self.var_bound = var_bound
        self.guard = guard
        self.offset = var_bound  # packing of the zero exponent

    def pack(self, e: Exponent) -> int:
        wdeg = sum(w * x for w, x in zip(self.weights, e))
        v = wdeg << self.w_shift
        for s, blk in self.block_shift:
            v |= sum(e[i] for i in blk) << s
        for i, s in enumerate(self.var_shift):
            v |= (VAR_BOUND - e[i]) << s
        return v

    def unpack(self, m: int) -> Exponent:
        mask = (1 << FIELD_BITS) - 1
        return tuple(VAR_BOUND - ((m >> s) & mask) for s in self.var_shift)

    def exps(self, m: int) -> int:
        """Exponent vector as a packed int with plain exponent fields (for divisibility)."""
        return self.var_bound - (m & self.var_mask)

    def wdeg(self, m: int) -> int:
        return (m >> self.w_shift) & ((1 << FIELD_BITS) - 1)

    def mul(self, a: int, b: int) -> int:
        return a + b - self.offset

    def div(self, a: int, b: int) -> int:
        return a - b + self.offset

    def divides(self, ea: int, eb: int) -> bool:
        # ea, eb from exps(); true iff every field of ea <= field of eb
        return ((eb | self.guard) - ea) & self.guard == self.guard

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack(tuple(max(x, y) for x, y in zip(ea, eb)))

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.unpack(a), self.unpack(b)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))


class _Poly:
    """Working polynomial: terms sorted descending by packed monomial."""

    __slots__ = ("terms", "lm", "lexp", "sugar")

    def __init__(self, terms: list[tuple[int, int]], sugar: int, packer: Packer):
        self.terms = terms
        self.lm = terms[0][0]
        self.lexp = packer.exps(self.lm)
        self.sugar = sugar


def _to_work(f: Polynomial, packer: Packer) -> list[tuple[int, int]]:
    return sorted(((packer.pack(e), c) for e, c in f.items()), reverse=True)


def _from_work(terms, packer: Packer, ring: Ring) -> Polynomial:
    return Polynomial(ring, {packer.unpack(m): c for m, c in terms})


def _monic(terms, p):
    lc = terms[0][1]
    if lc == 1:
        return terms
    inv = pow(lc, -1, p)
    return [(m, c * inv % p) for m, c in terms]


def reduce_terms(terms: list[tuple[int, int]], basis: Sequence[_Poly], packer: Packer, p: int,
                 full: bool = True) -> list[tuple[int, int]]:
    """Normal form of ``terms`` against monic ``basis`` elements.

    With ``full=False`` only the leading term is reduced (top reduction).
    """
    if not terms:
        return []
    f = dict(terms)
    heap = [-m for m, _ in terms]
    heapq.heapify(heap)
    rem: list[tuple[int, int]] = []
    offset = packer.offset
    guard = packer.guard
    var_bound, var_mask = packer.var_bound, packer.var_mask
    while heap:
        m = -heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        e = var_bound - (m & var_mask)
        g = None
        for h in basis:
            if ((e | guard) - h.lexp) & guard == guard:
                g = h
                break
        if g is None:
            rem.append((m, c))
            if not full:
                rem.extend((k, f[k]) for k in sorted(f, reverse=True) if f[k])
                return rem
            continue
        q = m - g.lm + offset
        for gm, gc in g.terms[1:]:
            k = gm + q - offset
            old = f.get(k)
            if old is None:
                f[k] = (-c * gc) % p
                heapq.heappush(heap, -k)
            else:
                v = (old - c * gc) % p
                f[k] = v
    return rem


def _spoly(f: _Poly, g: _Poly, lcm: int, packer: Packer, p: int) -> list[tuple[int, int]]:
    off = packer.offset
    qf = lcm - f.lm + off
    qg = lcm - g.lm + off
    out: dict[int, int] = {}
    for m, c in f.terms[1:]:
        k = m + qf - off
        out[k] = (out.get(k, 0) + c) % p
    for m, c in g.terms[1:]:
        k = m + qg - off
        out[k] = (out.get(k, 0) - c) % p
    return sorted(((k, v) for k, v in out.items() if v), reverse=True)


class _Pair:
    __slots__ = ("i", "j", "lcm", "sugar")

    def __init__(self, i, j, lcm, sugar):
        self.i, self.j, self.lcm, self.sugar = i, j, lcm, sugar

    def key(self):
        return (self.sugar, self.lcm, self.i, self.j)


def buchberger(polys: Sequence[Polynomial], order: MonomialOrder,
               limits: GroebnerLimits | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``polys``."""
    limits = limits or GroebnerLimits()
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return []
    ring = polys[0].ring
    p = ring.p
    packer = Packer(ring.nvars, order)

    inputs = []
    for f in polys:
        t = _monic(_to_work(f, packer), p)
        inputs.append(_Poly(t, max(packer.wdeg(m) for m, _ in t), packer))
    inputs.sort(key=lambda g: (g.sugar, g.lm))

    basis: list[_Poly] = []
    alive: list[bool] = []
    pairs: list[_Pair] = []
    processed = 0

    def add(h: _Poly):
        # Gebauer-Moeller update
        nonlocal pairs
        k = len(basis)
        new = []
        for i, g in enumerate(basis):
            if not alive[i]:
                continue
            lcm = packer.lcm(g.lm, h.lm)
            sugar = max(g.sugar + packer.wdeg(lcm) - packer.wdeg(g.lm),
                        h.sugar + packer.wdeg(lcm) - packer.wdeg(h.lm))
            new.append((_Pair(i, k, lcm, sugar), packer.coprime(g.lm, h.lm)))
        # criterion M: drop pairs whose lcm is a proper multiple of another new lcm
        kept = []
        for a, (pa, cop_a) in enumerate(new):
            ea = packer.exps(pa.lcm)
            dominated = False
            for b, (pb, _) in enumerate(new):
                if a == b:
                    continue
                eb = packer.exps(pb.lcm)
                if packer.divides(eb, ea) and (eb != ea or b < a):
                    dominated = True
                    break
            if not dominated:
                kept.append((pa, cop_a))
        # criterion F / product criterion
        new_pairs = [pa for pa, cop in kept if not cop]
        # criterion B on old pairs
        eh = h.lexp
        survivors = []
        for pr in pairs:
            el = packer.exps(pr.lcm)
            if packer.divides(eh, el):
                li = packer.lcm(basis[pr.i].lm, h.lm)
                lj = packer.lcm(basis[pr.j].lm, h.lm)
                if li != pr.lcm and lj != pr.lcm:
                    continue
            survivors.append(pr)
        pairs = survivors + new_pairs
        # retire basis elements whose leading monomial h divides
        for i, g in enumerate(basis):
            if alive[i] and packer.divides(eh, g.lexp):
                alive[i] = False
        basis.append(h)
        alive.append(True)
        if sum(alive) > limits.max_basis:
            raise ResourceLimitError(f"Groebner basis exceeded {limits.max_basis} elements")

    for g in inputs:
        live = [b for b, a in zip(basis, alive) if a]
        t = reduce_terms(g.terms, live, packer, p)
        if t:
            t = _monic(t, p)
            add(_Poly(t, g.sugar, packer))

    while pairs:
        pairs.sort(key=_Pair.key, reverse=True)
        pr = pairs.pop()
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitError(f"Groebner computation exceeded {limits.max_pairs} pairs")
        f, g = basis[pr.i], basis[pr.j]
        s = _spoly(f, g, pr.lcm, packer, p)
        if not s:
            continue
        # reducers: all basis elements (retired ones still generate the ideal)
        live = [b for b, a in zip(basis, alive) if a]
        t = reduce_terms(s, live, packer, p)
        if t:
            t = _monic(t, p)
            add(_Poly(t, pr.sugar, packer))

    live = [b for b, a in zip(basis, alive) if a]
    return _interreduce(live, packer, p, ring)


def _interreduce(basis: list[_Poly], packer: Packer, p: int, ring: Ring) -> list[Polynomial]:
    # minimal: drop elements whose LM is divisible by another LM
    basis = sorted(basis, key=lambda g: g.lm)
    minimal: list[_Poly] = []
    for g in basis:
        if any(packer.divides(h.lexp, g.lexp) for h in minimal):
            continue
        minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = reduce_terms(g.terms[1:], others, packer, p)
        terms = [g.terms[0]] + tail
        out.append(_from_work(terms, packer, ring))
    return out


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Fully reduce ``f`` against ``basis`` (assumed to be a Groebner basis)."""
    if f.is_zero():
        return f
    packer = Packer(f.ring.nvars, order)
    p = f.ring.p
    work = []
    for g in basis:
        if g.is_zero():
            continue
        t = _monic(_to_work(g, packer), p)
        work.append(_Poly(t, 0, packer))
    rem = reduce_terms(_to_work(f, packer), work, packer, p)
    return _from_work(rem, packer, f.ring)


def spolynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    packer = Packer(f.ring.nvars, order)
    p = f.ring.p
    a = _Poly(_monic(_to_work(f, packer), p), 0, packer)
    b = _Poly(_monic(_to_work(g, packer), p), 0, packer)
    return _from_work(_spoly(a, b, packer.lcm(a.lm, b.lm), packer, p), packer, f.ring)
