"""One-parameter families of line configurations and their flat limits.

The parameter λ is an extra ring variable of weight 0, so every family
ideal stays homogeneous in the projective coordinates.  The flat limit is
computed as the λ-saturation evaluated at λ = 0.

Two families are provided.  For s = 3 it is the explicit family in which a
star of three lines with double points at the vertices collapses; for
s >= 4 it is the inductive family: a (2, s-1)-cone configuration on the
lines ``x + k y = 0`` plus the line ``x - y - λt`` with double points at its
s - 1 intersections, which slide into the vertex as λ -> 0.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from .algebra.field import DEFAULT_PRIME
from .algebra.ideal import Ideal, hilbert_function, hilbert_h0, ideal_equal, intersect_all, saturate, substitute_ideal
from .algebra.ring import Polynomial, Ring
from .postulation import REFUTED, VERIFIED, actual_h0, build_lines
from .schemes import components as C
from .schemes.calculus import residual, trace
from .schemes.geometry import Hyperplane, Sampler, ambient_ring
from .schemes.spec import SchemeSpec

LAMBDA = "l"
SUPPORTED_AMBIENT = (3, 4)


@dataclass(frozen=True)
class FamilyIdeal:
    """An ideal in k[coordinates, λ] describing the fibres X_λ."""

    ideal: Ideal
    base: Ring
    s: int = 0
    n: int = 3
    limit_forms: tuple[str, ...] = ()  # linear forms of the limit lines (with z = 0)

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    @property
    def lam(self) -> Polynomial:
        return self.ring.var(self.ring.nvars - 1)

    def _images(self, value: int | None) -> list[Polynomial]:
        R = self.base
        last = R.zero() if value is None else R.const(value)
        return [R.var(i) for i in range(R.nvars)] + [last]

    def fiber(self, value: int, saturated: bool = False) -> Ideal:
        """The ideal obtained by setting λ = value (optionally after λ-saturation)."""
        I = saturate(self.ideal, self.lam) if saturated else self.ideal
        return substitute_ideal(I, self._images(value), self.base)


def family_ring(n: int, p: int) -> tuple[Ring, Ring]:
    base = ambient_ring(n, p)
    lifted = Ring(base.names + (LAMBDA,), p, weights=(1,) * base.nvars + (0,))
    return base, lifted


def family_from_generators(gens: Sequence[str], n: int = 3, p: int = DEFAULT_PRIME) -> FamilyIdeal:
    """Family given by explicit generators in t, x, y, z (, w) and ``l`` for λ."""
    base, R = family_ring(n, p)
    return FamilyIdeal(Ideal.of(R, list(gens)), base, 0, n)


def _fixed_forms(s: int) -> list[str]:
    if s == 3:
        return ["y", "x"]
    return ["x", "y"] + [f"x+{k}*y" for k in range(1, s - 2)]


def family_ideal(s: int, n: int = 3, p: int = DEFAULT_PRIME) -> FamilyIdeal:
    """Family whose special fibre is a (2, s)-cone configuration (n = 4 lives in {w = 0})."""
    if s < 3:
        raise ValueError("the cone family needs s >= 3")
    if n not in SUPPORTED_AMBIENT:
        raise ValueError(f"unsupported ambient dimension {n}; expected one of {SUPPORTED_AMBIENT}")
    base, R = family_ring(n, p)

    def ideal(gens):
        return Ideal.of(R, list(gens))

    fixed = _fixed_forms(s)
    parts = [ideal([f, "z"]) for f in fixed]
    if s == 3:
        # star of three lines with double points at P, Q, R; Q and R slide into P
        moving = "x+y-l*t"
        parts.append(ideal([moving, "z"]))
        parts.append(ideal(["x", "y", "z"]) ** 2)
        parts.append(ideal(["x-l*t", "y", "z"]) ** 2)
        parts.append(ideal(["y-l*t", "x", "z"]) ** 2)
        limit = fixed + ["x+y"]
    else:
        moving = "x-y-l*t"
        parts.append(ideal(["x", "y", "z"]) ** (s - 1) + ideal(["z^2"]))
        parts.append(ideal([moving, "z"]))
        parts += [ideal([f, moving, "z"]) ** 2 for f in fixed]
        limit = fixed + ["x-y"]
    I = intersect_all(parts)
    if n == 4:  # the family sits in the hyperplane {w = 0}
        I = I + Ideal.of(R, ["w"])
    return FamilyIdeal(I, base, s, n, tuple(limit))


def flat_limit(F: FamilyIdeal, method: str = "iterate") -> Ideal:
    """``(F : λ^∞)`` evaluated at λ = 0."""
    S = saturate(F.ideal, F.lam, method=method)
    return substitute_ideal(S, F._images(None), F.base)


# ---- expected ideals ----

def cone_ideal(s: int, n: int = 3, p: int = DEFAULT_PRIME, forms: Sequence[str] | None = None) -> Ideal:
    """Lines {f = z = 0} through P = [1:0:...:0] union I_P^s + (z^2), inside {w = 0} when n = 4."""
    R = ambient_ring(n, p)
    forms = list(forms) if forms is not None else _fixed_forms(s) + ["x-y"]
    parts = [Ideal.of(R, [f, "z"]) for f in forms]
    parts.append(Ideal.of(R, ["x", "y", "z"]) ** s + Ideal.of(R, ["z^2"]))
    I = intersect_all(parts)
    return I + Ideal.of(R, ["w"]) if n == 4 else I


def _plane_z(n: int, p: int) -> Hyperplane:
    return Hyperplane.coordinate(n, p, index=3)


def expected_trace(F: FamilyIdeal) -> Ideal:
    """The product of the limit line forms (plus w for n = 4), in the coordinates of H = {z = 0}."""
    R = ambient_ring(F.n, F.base.p)
    names = tuple(nm for nm in R.names if nm != "z")
    Hring = Ring(names, R.p)
    product = "*".join(f"({f})" for f in F.limit_forms)
    return Ideal.of(Hring, [product] + (["w"] if F.n == 4 else []))


def expected_residual(F: FamilyIdeal) -> Ideal:
    R = ambient_ring(F.n, F.base.p)
    extra = ["w"] if F.n == 4 else []
    return Ideal.of(R, ["x", "y", "z"]) ** (F.s - 1) + Ideal.of(R, ["z"] + extra)


# ---- reports ----

@dataclass
class ConeLimitReport:
    s: int
    n: int
    limit_equal: bool
    trace_equal: bool
    residual_equal: bool
    hilbert_window: list[int]
    hilbert_values: list[int]
    prime: int
    verdict: str
    seconds: float = 0.0
    statement: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def hilbert_ok(self) -> bool:
        return all(v == self.s * (d + 1) for d, v in zip(self.hilbert_window, self.hilbert_values))

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["hilbert_ok"] = self.hilbert_ok
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def hilbert_window(s: int) -> list[int]:
    """Degrees where the Hilbert function of the limit has reached its polynomial."""
    return list(range(max(s - 1, 1), s + 4))


def verify_cone_limit(s: int, n: int = 3, p: int = DEFAULT_PRIME, max_s: int = 8) -> ConeLimitReport:
    """Flat limit, its trace and residual on {z = 0}, and the witness HF = s(d+1)."""
    if not 3 <= s <= max_s:
        raise ValueError(f"s must lie in [3, {max_s}]")
    start = time.perf_counter()
    F = family_ideal(s, n, p)
    L = flat_limit(F)
    H = _plane_z(n, p)
    limit_ok = ideal_equal(L, cone_ideal(s, n, p, F.limit_forms))
    trace_ok = ideal_equal(trace(L, H), expected_trace(F))
    residual_ok = ideal_equal(residual(L, H), expected_residual(F))
    window = hilbert_window(s)
    values = [hilbert_function(L, d) for d in window]
    rep = ConeLimitReport(s, n, limit_ok, trace_ok, residual_ok, window, values, p, VERIFIED,
                          statement=f"cone:s={s}:n={n}")
    if not (limit_ok and trace_ok and residual_ok and rep.hilbert_ok):
        rep.verdict = REFUTED
    rep.seconds = round(time.perf_counter() - start, 3)
    return rep


# ---- flatness witnesses ----

def fiber_dimensions(F: FamilyIdeal, values: Sequence[int], degrees: Sequence[int]) -> dict[int, list[int]]:
    """dim of the degree-d slice of the λ-saturated family at each λ = c."""
    S = saturate(F.ideal, F.lam)
    out: dict[int, list[int]] = {}
    for c in values:
        Ic = substitute_ideal(S, F._images(c % F.base.p), F.base)
        out[c] = [hilbert_h0(Ic, d) for d in degrees]
    return out


def semicontinuity_rows(s: int, degrees: Sequence[int], seed: int = 0, p: int = DEFAULT_PRIME) -> list[tuple[int, int, int]]:
    """(d, h0 of the limit, h0 of s generic lines): the limit can only have more sections."""
    L = flat_limit(family_ideal(s, 3, p))
    lines = build_lines(s, seed, p)
    return [(d, hilbert_h0(L, d), actual_h0(lines, d)) for d in degrees]


def sundial_flatness(max_d: int = 8, seed: int = 0, p: int = DEFAULT_PRIME) -> list[tuple[int, int, int]]:
    """(d, h0 of a sundial, h0 of two generic skew lines) for 1 <= d <= max_d."""
    smp = Sampler(3, p, seed)
    sd = SchemeSpec(3, (C.sundial(smp.point(), smp.point(), smp.point(), p, "S"),), p, seed)
    two = build_lines(2, seed, p)
    return [(d, actual_h0(sd, d), actual_h0(two, d)) for d in range(1, max_d + 1)]
