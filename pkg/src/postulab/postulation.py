"""Expected and actual h^0(I_X(d)), the auxiliary statements and their verification.

Everything is computed over F_p.  Because h^0 is upper semicontinuous, a
random specialisation that attains the expected value certifies the generic
statement; a miss only means the sample was unlucky (or the claim false) and
is retried on fresh seeds before being reported as inconclusive.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Any

import numpy as np

from .algebra.field import DEFAULT_PRIME
from .algebra.groebner import ResourceLimitError
from .algebra.ideal import DEFAULT_MAX_SLICE, hilbert_h0
from .algebra.linalg import rank
from .algebra.ring import monomials_of_degree
from .schemes import components as C
from .schemes.components import SchemeError, condition_count, conditions
from .schemes.geometry import Hyperplane, Sampler
from .schemes.spec import SchemeSpec, union_ideal

VERIFIED, INCONCLUSIVE, REFUTED = "verified", "inconclusive", "refuted"
STATEMENTS = ("hd", "hprime", "hsecond", "lines", "dots", "ah")
AH_EXCEPTIONS = {(2, 2), (5, 4)}  # (s, d): double points in P^2 failing by one
DEFAULT_RETRIES = 3


class ConsistencyError(AssertionError):
    """An identity that must hold by construction failed."""


@dataclass(frozen=True)
class StatementParams:
    d: int
    r: int
    q: int
    m: int
    s: int
    t: int

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def parameters(d: int, check: bool = True) -> StatementParams:
    """The integers r, q, m, s, t attached to degree d."""
    if d < 1:
        raise ValueError("d must be at least 1")
    N = comb(d + 3, 3)
    r = N // (d + 1)
    q = N - r * (d + 1)
    m = d // 3 + 1
    s = comb(m, 2) + (r - m) * d - comb(d + 2, 3)
    t = r - m - 2 * s
    out = StatementParams(d, r, q, m, s, t)
    if check and d >= 3:
        check_closed_forms(out)
    return out


def closed_forms(d: int) -> StatementParams:
    """The per-residue-class closed forms (valid for d >= 3)."""
    c = d % 3
    if c == 0:
        m = (d + 3) // 3
        return StatementParams(d, (d + 2) * (d + 3) // 6, 0, m, comb(m - 1, 2), comb(m + 2, 2) - 3)
    if c == 1:
        m = (d + 2) // 3
        return StatementParams(d, (d + 2) * (d + 3) // 6, 0, m, comb(m, 2), comb(m + 1, 2))
    m = (d + 1) // 3
    return StatementParams(d, (d + 1) * (d + 4) // 6, (d + 1) // 3, m, comb(m, 2), comb(m + 2, 2) - 1)


def check_closed_forms(P: StatementParams) -> None:
    want = closed_forms(P.d)
    if P != want:
        raise ConsistencyError(f"closed forms fail at d={P.d}: {P} != {want}")
    if min(P.q, P.s, P.t) < 0:
        raise ConsistencyError(f"negative parameter at d={P.d}: {P}")


# ---- h^0 ----

def ambient_dim(n: int, d: int) -> int:
    return comb(d + n, n) if d >= 0 else 0


def condition_total(spec: SchemeSpec, d: int) -> int:
    """Number of conditions imposed if independent; raises for non-countable kinds."""
    return sum(condition_count(c, d, spec.ambient) for c in spec.components)


def expected_h0(spec: SchemeSpec, d: int) -> int:
    try:
        total = condition_total(spec, d)
    except SchemeError as exc:
        raise SchemeError(f"expected_h0 undefined: {exc}") from None
    return max(ambient_dim(spec.ambient, d) - total, 0)


def condition_matrix(spec: SchemeSpec, d: int) -> np.ndarray:
    N = len(monomials_of_degree(spec.ambient + 1, d))
    parts = [conditions(c, d, spec.ambient, spec.prime) for c in spec.components]
    parts = [a for a in parts if a.shape[0]]
    if not parts:
        return np.zeros((0, N), dtype=np.int64)
    return np.vstack(parts)


def actual_h0(spec: SchemeSpec, d: int, backend: str = "matrix", max_dim: int = DEFAULT_MAX_SLICE) -> int:
    """dim (I_X)_d; raises ResourceLimitError when the degree-d slice exceeds ``max_dim``."""
    if d < 0:
        return 0
    if ambient_dim(spec.ambient, d) > max_dim:
        raise ResourceLimitError(f"degree-{d} slice of P^{spec.ambient} exceeds {max_dim} monomials")
    if backend == "matrix":
        mat = condition_matrix(spec, d)
        N = mat.shape[1]
        return N - (rank(mat, spec.prime) if mat.shape[0] else 0)
    if backend == "groebner":
        return hilbert_h0(union_ideal(spec), d, max_dim=max_dim)
    raise ValueError(f"unknown backend {backend!r}")


def actual_h1(spec: SchemeSpec, d: int, h0: int) -> int | None:
    """conditions - (C(d+n,n) - h0), defined for countable schemes only."""
    try:
        total = condition_total(spec, d)
    except SchemeError:
        return None
    return total - (ambient_dim(spec.ambient, d) - h0)


# ---- statement schemes (H = {last variable = 0}) ----

def plane_H(n: int, p: int) -> tuple[int, ...]:
    return Hyperplane.coordinate(n, p).coeffs


def generic_lines(s: Sampler, k: int, p: int, prefix: str = "L", start: int = 1) -> list:
    return [C.line(s.point(), s.point(), p, f"{prefix}{start + i}") for i in range(k)]


def build_hd(d: int, seed: int = 0, prime: int = DEFAULT_PRIME) -> SchemeSpec:
    """r generic lines and q points on a generic line M, in P^3."""
    P = parameters(d)
    s = Sampler(3, prime, seed)
    comps = generic_lines(s, P.r, prime)
    if P.q:
        a, b = s.point(), s.point()
        pts = _distinct_on_line(s, a, b, P.q)
        comps.append(C.collinear_points(pts, prime, "P(M)"))
    return SchemeSpec(3, tuple(comps), prime, seed)


def _distinct_on_line(s: Sampler, a, b, k: int) -> list:
    pts: list = []
    while len(pts) < k:
        v = s.point_on_line(a, b)
        if v not in pts:
            pts.append(v)
    return pts


def build_hprime(d: int, seed: int = 0, prime: int = DEFAULT_PRIME) -> SchemeSpec:
    """X' = (m-1)P|_H + t lines + s degenerate conics with nodes on H (checked in degree d-1)."""
    P = parameters(d)
    s = Sampler(3, prime, seed)
    h = plane_H(3, prime)
    comps = [C.planar_fat_point(s.point_in(h), h, P.m - 1, prime, "P")]
    comps += generic_lines(s, P.t, prime)
    for i in range(P.s):
        comps.append(C.degenerate_conic(s.point_in(h), s.point(), s.point(), prime, f"C{i + 1}"))
    return SchemeSpec(3, tuple(comps), prime, seed)


def build_hsecond(d: int, seed: int = 0, prime: int = DEFAULT_PRIME) -> SchemeSpec:
    """X'' in P^2: cone of m lines, s double points, t points, q collinear points."""
    P = parameters(d)
    s = Sampler(2, prime, seed)
    comps = [C.cone_config(s.point(), [s.point() for _ in range(P.m)], prime, label="CC")]
    comps += [C.fat_point(s.point(), 2, prime, f"Q{i + 1}") for i in range(P.s)]
    comps += [C.simple_point(s.point(), prime, f"N{i + 1}") for i in range(P.t)]
    if P.q:
        a, b = s.point(), s.point()
        comps.append(C.collinear_points(_distinct_on_line(s, a, b, P.q), prime, "P(M)"))
    return SchemeSpec(2, tuple(comps), prime, seed)


def build_lines(e: int, seed: int = 0, prime: int = DEFAULT_PRIME, n: int = 3) -> SchemeSpec:
    s = Sampler(n, prime, seed)
    return SchemeSpec(n, tuple(generic_lines(s, e, prime)), prime, seed)


def build_dots(m: int, k: int, seed: int = 0, prime: int = DEFAULT_PRIME) -> SchemeSpec:
    """mP + k generic 2-dots in P^2."""
    s = Sampler(2, prime, seed)
    comps = []
    if m >= 1:
        comps.append(C.fat_point(s.point(), m, prime, "P"))
    comps += [C.two_dot(s.point(), s.point(), prime, f"Z{i + 1}") for i in range(k)]
    return SchemeSpec(2, tuple(comps), prime, seed)


def build_double_points(k: int, seed: int = 0, prime: int = DEFAULT_PRIME, n: int = 2) -> SchemeSpec:
    s = Sampler(n, prime, seed)
    return SchemeSpec(n, tuple(C.fat_point(s.point(), 2, prime, f"Q{i + 1}") for i in range(k)), prime, seed)


def dots_expected(m: int, k: int, d: int) -> int:
    return max(comb(d + 2, 2) - comb(m + 1, 2) - 2 * k, 0)


# ---- reports ----

@dataclass
class PostulationReport:
    spec_hash: str
    d: int
    expected_h0: int
    actual_h0: int
    actual_h1: int | None
    verdict: str
    prime: int
    seed: int
    retries: int
    statement: str = ""
    exceptional: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED


def derived_seed(seed: int, attempt: int) -> int:
    """Fresh seed for retry ``attempt`` (attempt 0 is the seed itself)."""
    return seed if attempt == 0 else int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])


def _statement_case(kind: str, d: int, seed: int, prime: int, e: int | None, m: int | None,
                    k: int | None):
    """(spec, degree, expected_h0, exceptional, label) for one statement instance."""
    if kind == "hd":
        if d < 1:
            raise ValueError("H_d needs d >= 1")
        if d < 3:
            # the trivial cases: 2 skew lines / 3 lines and a point
            P = parameters(d, check=False)
            spec = build_lines(P.r, seed, prime)
            if P.q:
                s = Sampler(3, prime, seed + 1)
                spec = spec.extend([C.collinear_points(_distinct_on_line(s, s.point(), s.point(), P.q), prime, "P(M)")])
            return spec, d, 0, False, f"hd:d={d}"
        return build_hd(d, seed, prime), d, 0, False, f"hd:d={d}"
    if kind == "hprime":
        if d < 3:
            raise ValueError("H'_{d-1} needs d >= 3")
        return build_hprime(d, seed, prime), d - 1, 0, False, f"hprime:d={d}"
    if kind == "hsecond":
        if d < 3:
            raise ValueError("H''_d needs d >= 3")
        return build_hsecond(d, seed, prime), d, 0, False, f"hsecond:d={d}"
    if kind == "lines":
        if e is None or e < 0:
            raise ValueError("lines statement needs e >= 0")
        exp = max(comb(d + 3, 3) - e * (d + 1), 0)
        return build_lines(e, seed, prime), d, exp, False, f"lines:e={e}:d={d}"
    if kind == "dots":
        if m is None or k is None:
            raise ValueError("dots statement needs m and s")
        if d < m - 1:
            raise ValueError("the dots lemma needs d >= m - 1")
        return build_dots(m, k, seed, prime), d, dots_expected(m, k, d), False, f"dots:m={m}:s={k}:d={d}"
    if kind == "ah":
        if k is None:
            raise ValueError("ah statement needs s")
        exp = max(comb(d + 2, 2) - 3 * k, 0)
        exc = (k, d) in AH_EXCEPTIONS
        return build_double_points(k, seed, prime), d, exp, exc, f"ah:s={k}:d={d}"
    raise ValueError(f"unknown statement {kind!r}; expected one of {STATEMENTS}")


def verify_statement(kind: str, d: int, seed: int = 0, prime: int = DEFAULT_PRIME, *,
                     e: int | None = None, m: int | None = None, s: int | None = None,
                     retries: int = DEFAULT_RETRIES, cross_check: bool = False) -> PostulationReport:
    """Build the statement's scheme, compute h^0 and compare with the expected value.

    ``cross_check`` recomputes h^0 with the Groebner backend; any disagreement
    is a refutation of the implementation.
    """
    attempt = 0
    while True:
        sd = derived_seed(seed, attempt)
        spec, deg, expected, exceptional, label = _statement_case(kind, d, sd, prime, e, m, s)
        h0 = actual_h0(spec, deg)
        h1 = actual_h1(spec, deg, h0)
        details: dict[str, Any] = {"degree": deg, "used_seed": sd, "components": len(spec)}
        verdict = None
        if cross_check:
            g = actual_h0(spec, deg, backend="groebner")
            details["groebner_h0"] = g
            if g != h0:
                verdict = REFUTED
        bound = None
        try:
            bound = ambient_dim(spec.ambient, deg) - condition_total(spec, deg)
        except SchemeError:
            pass
        if bound is not None and h0 < bound:
            verdict = REFUTED  # impossible: more conditions than listed
        target = expected + 1 if exceptional else expected
        if verdict is None:
            good = h0 == target
            if kind == "hd":
                good = good and h1 == 0
            if good:
                verdict = VERIFIED
            elif exceptional and h0 < target:
                verdict = REFUTED if h0 == expected else None
        if verdict is None and attempt < retries:
            attempt += 1
            continue
        return PostulationReport(spec.spec_hash(), deg, expected, h0, h1, verdict or INCONCLUSIVE,
                                 prime, seed, attempt, label, exceptional, details)


def assess(spec: SchemeSpec, degree: int, expected: int, label: str, cross_check: bool = False) -> PostulationReport:
    """Report for a fixed scheme (no resampling): verified iff h^0 equals ``expected``."""
    h0 = actual_h0(spec, degree)
    details: dict[str, Any] = {"degree": degree, "components": len(spec)}
    verdict = VERIFIED if h0 == expected else INCONCLUSIVE
    if cross_check:
        g = actual_h0(spec, degree, backend="groebner")
        details["groebner_h0"] = g
        if g != h0:
            verdict = REFUTED
    return PostulationReport(spec.spec_hash(), degree, expected, h0, actual_h1(spec, degree, h0), verdict,
                             spec.prime, spec.seed, 0, label, False, details)
