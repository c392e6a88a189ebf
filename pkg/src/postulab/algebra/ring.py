"""Polynomial rings over F_p, monomial orders and sparse polynomials."""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .field import DEFAULT_PRIME, PrimeField

Exponent = tuple[int, ...]


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple[Exponent, ...]:
    """All exponent vectors of total degree ``d``, in descending lex order."""
    if d < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


@dataclass(frozen=True)
class Ring:
    """``F_p[names]``, graded by ``weights`` (all 1 unless given)."""

    names: tuple[str, ...]
    p: int = DEFAULT_PRIME
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(self.names))
        else:
            object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.weights) != len(self.names):
            raise ValueError("one weight per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        PrimeField(self.p)  # validates

    @property
    def nvars(self) -> int:
        return len(self.names)

    @cached_property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def var(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exp: Sequence[int], coeff: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exp): coeff})

    def linear_form(self, coeffs: Sequence[int]) -> "Polynomial":
        if len(coeffs) != self.nvars:
            raise ValueError("need one coefficient per variable")
        terms = {}
        for i, c in enumerate(coeffs):
            if c % self.p:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial(self, terms)

    def monomials(self, d: int) -> tuple[Exponent, ...]:
        if any(w != 1 for w in self.weights):
            raise ValueError("degree slices need the standard grading")
        return monomials_of_degree(self.nvars, d)

    def extend(self, names: Sequence[str], weights: Sequence[int] | None = None) -> "Ring":
        """Ring with extra variables appended (existing exponents embed by zero-padding)."""
        w = tuple(weights) if weights is not None else (1,) * len(names)
        return Ring(self.names + tuple(names), self.p, self.weights + w)

    def with_prime(self, p: int) -> "Ring":
        return Ring(self.names, p, self.weights)

    def parse(self, text: str) -> "Polynomial":
        """Parse an arithmetic expression in the ring variables (``^`` or ``**`` powers)."""
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        env = {name: self.var(i) for i, name in enumerate(self.names)}
        out = _eval_ast(tree.body, env, self)
        return self.const(out) if isinstance(out, int) else out

    def __repr__(self):
        return f"Ring(F_{self.p}[{', '.join(self.names)}])"


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}


def _eval_ast(node, env, ring):
    if isinstance(node, ast.BinOp):
        left = _eval_ast(node.left, env, ring)
        right = _eval_ast(node.right, env, ring)
        if isinstance(node.op, ast.Pow):
            if not isinstance(right, int):
                raise ValueError("exponent must be an integer literal")
            return left ** right
        if isinstance(node.op, ast.Div):
            if not isinstance(right, int):
                raise ValueError("can only divide by integer constants")
            return left * ring.field.inv(right)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        return op(left, right)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_ast(node.operand, env, ring)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ValueError(f"unknown variable {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    raise ValueError(f"cannot parse {ast.dump(node)}")


@dataclass(frozen=True)
class MonomialOrder:
    """Graded block order.

    Monomials compare first by weighted degree, then block by block: total
    degree inside the block, then reverse lexicographically inside it.  With
    a single block this is grevlex; with ``blocks=((i,), rest)`` it
    eliminates variable ``i`` from weighted-homogeneous ideals.
    """

    weights: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    name: str = "grevlex"

    @classmethod
    def grevlex(cls, ring: Ring) -> "MonomialOrder":
        return cls(ring.weights, (tuple(range(ring.nvars)),), "grevlex")

    @classmethod
    def elimination(cls, ring: Ring, eliminate: Iterable[int]) -> "MonomialOrder":
        elim = tuple(sorted(eliminate))
        rest = tuple(i for i in range(ring.nvars) if i not in elim)
        return cls(ring.weights, (elim, rest), "elim(" + ",".join(ring.names[i] for i in elim) + ")")

    def key(self, e: Exponent) -> tuple[int, ...]:
        k = [sum(w * x for w, x in zip(self.weights, e))]
        for blk in self.blocks:
            k.append(sum(e[i] for i in blk))
            k.extend(-e[i] for i in reversed(blk))
        return tuple(k)

    @property
    def tag(self) -> str:
        return self.name


class Polynomial:
    """Sparse polynomial; immutable, canonical (no zero coefficients)."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, int]):
        p = ring.p
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                clean[tuple(e)] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    # ---- inspection ----
    @property
    def coeffs(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degrees(self) -> set[int]:
        w = self.ring.weights
        return {sum(a * b for a, b in zip(w, e)) for e in self._terms}

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(self.degrees())

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def terms(self, order: MonomialOrder | None = None) -> list[tuple[Exponent, int]]:
        """Terms strictly descending in ``order`` (grevlex by default)."""
        order = order or MonomialOrder.grevlex(self.ring)
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[Exponent, int]:
        order = order or MonomialOrder.grevlex(self.ring)
        return max(self._terms.items(), key=lambda t: order.key(t[0]))

    def leading_monomial(self, order: MonomialOrder | None = None) -> Exponent:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._terms:
            return self
        _, c = self.leading_term(order)
        return self * self.ring.field.inv(c)

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, x in enumerate(e) if x}

    # ---- arithmetic ----
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(self.ring, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # ---- evaluation / substitution ----
    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * pow(x, k, p) % p
            total += v
        return total % p

    def substitute(self, images: Sequence["Polynomial"], target: Ring | None = None) -> "Polynomial":
        """Ring map sending variable ``i`` to ``images[i]`` (all in ``target``)."""
        target = target or (images[0].ring if images else self.ring)
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        out = target.zero()
        for e, c in self._terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def specialize(self, var: int, value: int) -> "Polynomial":
        """Set one variable to a constant, staying in the same ring."""
        p = self.ring.p
        out: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            k = e[var]
            v = c * pow(value, k, p) % p
            if not v:
                continue
            e2 = e[:var] + (0,) + e[var + 1:]
            out[e2] = (out.get(e2, 0) + v) % p
        return Polynomial(self.ring, out)

    def embed(self, target: Ring, positions: Sequence[int] | None = None) -> "Polynomial":
        """Copy into ``target`` placing variable ``i`` at ``positions[i]``."""
        positions = positions if positions is not None else range(self.ring.nvars)
        positions = list(positions)
        out = {}
        for e, c in self._terms.items():
            e2 = [0] * target.nvars
            for i, k in enumerate(e):
                e2[positions[i]] += k
            out[tuple(e2)] = c
        return Polynomial(target, out)

    def divide_exact(self, other: "Polynomial") -> "Polynomial":
        """Exact quotient ``self / other``; raises if the division leaves a remainder."""
        order = MonomialOrder.grevlex(self.ring)
        lm, lc = other.leading_term(order)
        inv = self.ring.field.inv(lc)
        rem = self
        quot = self.ring.zero()
        while rem:
            e, c = rem.leading_term(order)
            if any(a < b for a, b in zip(e, lm)):
                raise ArithmeticError("division is not exact")
            m = self.ring.monomial(tuple(a - b for a, b in zip(e, lm)), c * inv)
            quot = quot + m
            rem = rem - m * other
        return quot

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    def to_str(self, order: MonomialOrder | None = None) -> str:
        if not self._terms:
            return "0"
        names = self.ring.names
        p = self.ring.p
        parts = []
        for e, c in self.terms(order):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            sc = c if c <= p // 2 else c - p
            if not mono:
                parts.append(str(sc))
            elif sc == 1:
                parts.append(mono)
            elif sc == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{sc}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    __str__ = to_str
