"""Castelnuovo's inequality as a checked rule and the replay of the induction for concrete d.

The tree built by :func:`replay_proof` mirrors the argument: the root
specialises the scheme of ``H_d`` so that its residual is an ``H'_{d-1}``
scheme and its trace an ``H''_d`` scheme.  Each ``H'`` node is specialised
again per residue class of d and recurses on its residual down to the base
cases d = 3, 4; trace sides and ``H''`` nodes are closed off in the plane by
removing fixed components and checking the intermediate counts.

Every node records
  * the three h^0 values of Castelnuovo's inequality,
  * the exact split h^0(X, d) = h^0(Res, d-1) + rank(restriction to H),
  * Groebner-exact residual/trace checks for every component, and a type
    match of the residual and trace against the child statements,
  * the intermediate counts, each as expected/actual.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Callable

import numpy as np

from .algebra.field import DEFAULT_PRIME
from .algebra.ideal import Ideal, hilbert_h0, ideal_equal
from .algebra.linalg import nullspace, rank
from .algebra.ring import monomials_of_degree
from .postulation import (AH_EXCEPTIONS, DEFAULT_RETRIES, INCONCLUSIVE, REFUTED, VERIFIED, PostulationReport,
                          actual_h0, assess, build_hd, build_hprime, build_hsecond, condition_matrix, derived_seed,
                          dots_expected, parameters)
from .schemes import components as C
from .schemes.calculus import check_component, hyperplane_ring, residual, residual_spec, trace, trace_spec
from .schemes.components import SchemeComponent, SchemeError
from .schemes.geometry import Hyperplane, Sampler, forms_vanishing_on, incident
from .schemes.spec import SchemeSpec, union_ideal


class StructuralMismatch(AssertionError):
    """A residual or trace does not have the shape the construction requires."""


# ---- Castelnuovo ----

@dataclass(frozen=True)
class CastelnuovoCheck:
    degree: int
    h0_scheme: int
    h0_residual: int
    h0_trace: int

    @property
    def holds(self) -> bool:
        return self.h0_scheme <= self.h0_residual + self.h0_trace

    def to_dict(self) -> dict[str, Any]:
        return {"degree": self.degree, "h0": [self.h0_scheme, self.h0_residual, self.h0_trace], "holds": self.holds}


@lru_cache(maxsize=8192)
def _h0(spec: SchemeSpec, degree: int) -> int:
    return actual_h0(spec, degree)


def check_castelnuovo(X: SchemeSpec, H: Hyperplane, d: int, method: str = "auto") -> CastelnuovoCheck:
    """h^0(X, d) <= h^0(Res_H X, d-1) + h^0_H(Tr_H X, d), all three values computed.

    ``rules`` uses the component-wise residual and trace (the latter is the
    union of traces, a subscheme of the true trace, so the inequality only
    gets weaker); ``groebner`` computes the ideal quotient and trace of the
    whole union.  ``auto`` prefers the rules and falls back to Groebner.
    """
    if d < 1:
        raise ValueError("Castelnuovo's inequality needs d >= 1")
    if method in ("auto", "rules"):
        try:
            res, tr = residual_spec(X, H), trace_spec(X, H)
        except SchemeError:
            if method == "rules":
                raise
        else:
            return CastelnuovoCheck(d, _h0(X, d), _h0(res, d - 1), _h0(tr, d))
    elif method != "groebner":
        raise ValueError(f"unknown method {method!r}")
    I = union_ideal(X)
    return CastelnuovoCheck(d, hilbert_h0(I, d), hilbert_h0(residual(I, H), d - 1), hilbert_h0(trace(I, H), d))


def restriction_rank(X: SchemeSpec, d: int) -> int:
    """Rank of (I_X)_d -> H^0(O_H(d)) for H = {last variable = 0}."""
    mat = condition_matrix(X, d)
    N = mat.shape[1]
    basis = nullspace(mat, X.prime, ncols=N) if mat.shape[0] else np.eye(N, dtype=np.int64)
    if basis.shape[0] == 0:
        return 0
    keep = [i for i, e in enumerate(monomials_of_degree(X.ambient + 1, d)) if e[-1] == 0]
    return rank(basis[:, keep], X.prime)


# ---- certificate data ----

@dataclass(frozen=True)
class CountCheck:
    name: str
    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "ok": self.ok}


@dataclass
class ReductionNode:
    statement: str
    d: int
    degree: int
    ambient: int
    spec_hash: str
    seed: int
    specialized_hash: str | None = None
    hyperplane: tuple[int, ...] | None = None
    castelnuovo: CastelnuovoCheck | None = None
    exact_split: bool | None = None
    structure: dict[str, bool] = field(default_factory=dict)
    counts: list[CountCheck] = field(default_factory=list)
    reports: list[PostulationReport] = field(default_factory=list)
    children: list["ReductionNode"] = field(default_factory=list)
    retries: int = 0
    residual: SchemeSpec | None = field(default=None, repr=False)
    trace: SchemeSpec | None = field(default=None, repr=False)

    def own_problems(self) -> list[tuple[str, str]]:
        """(severity, message) pairs for checks of this node alone."""
        out = []
        for key, ok in self.structure.items():
            if not ok:
                out.append((REFUTED, f"structure: {key}"))
        if self.castelnuovo is not None and not self.castelnuovo.holds:
            out.append((REFUTED, "Castelnuovo inequality"))
        if self.exact_split is False:
            out.append((REFUTED, "exact residual/restriction split"))
        for c in self.counts:
            if not c.ok:
                out.append((INCONCLUSIVE, f"count {c.name}: expected {c.expected}, got {c.actual}"))
        for r in self.reports:
            if r.verdict != VERIFIED:
                out.append((r.verdict, f"report {r.statement}: h0={r.actual_h0}"))
        return out

    @property
    def own_verdict(self) -> str:
        sev = {s for s, _ in self.own_problems()}
        return REFUTED if REFUTED in sev else INCONCLUSIVE if sev else VERIFIED

    @property
    def verdict(self) -> str:
        verdicts = [self.own_verdict] + [c.verdict for c in self.children]
        return REFUTED if REFUTED in verdicts else INCONCLUSIVE if INCONCLUSIVE in verdicts else VERIFIED

    def failures(self, path: str = "") -> list[str]:
        here = f"{path}/{self.statement}" if path else self.statement
        out = [f"{here}: {msg}" for _, msg in self.own_problems()]
        for c in self.children:
            out.extend(c.failures(here))
        return out

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_dict(self) -> dict[str, Any]:
        return {
            "statement": self.statement,
            "d": self.d,
            "degree": self.degree,
            "ambient": self.ambient,
            "spec_hash": self.spec_hash,
            "specialized_hash": self.specialized_hash,
            "hyperplane": list(self.hyperplane) if self.hyperplane else None,
            "seed": self.seed,
            "retries": self.retries,
            "castelnuovo": self.castelnuovo.to_dict() if self.castelnuovo else None,
            "exact_split": self.exact_split,
            "structure": dict(self.structure),
            "counts": [c.to_dict() for c in self.counts],
            "reports": [r.to_dict() for r in self.reports],
            "verdict": self.verdict,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class Certificate:
    d: int
    root: ReductionNode
    prime: int
    seed: int

    @property
    def verdict(self) -> str:
        return self.root.verdict

    @property
    def valid(self) -> bool:
        return self.verdict == VERIFIED

    def failures(self) -> list[str]:
        return self.root.failures()

    def nodes(self) -> list[ReductionNode]:
        return list(self.root.walk())

    def to_dict(self) -> dict[str, Any]:
        return {"d": self.d, "prime": self.prime, "seed": self.seed, "verdict": self.verdict,
                "failures": self.failures(), "root": self.root.to_dict()}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


# ---- helpers ----

def _node_seed(seed: int, *tags: int) -> int:
    return int(np.random.SeedSequence([seed, *tags]).generate_state(1)[0])


def _plane(prime: int) -> Hyperplane:
    return Hyperplane.coordinate(3, prime)


def _distinct(draw: Callable[[], tuple], k: int, avoid=()) -> list:
    out: list = []
    while len(out) < k:
        v = draw()
        if v not in out and v not in avoid:
            out.append(v)
    return out


@lru_cache(maxsize=16384)
def _component_ok(comp: SchemeComponent, coeffs: tuple[int, ...], prime: int, n: int) -> bool:
    m = check_component(comp, Hyperplane(coeffs, prime), n)
    return m.residual_ok and m.trace_ok


def _embed(I: Ideal, ring) -> Ideal:
    if I.ring == ring:
        return I
    return Ideal(ring, tuple(g.embed(ring) for g in I.generators))


def union_checks(Xt: SchemeSpec, H: Hyperplane, res: SchemeSpec, tr: SchemeSpec) -> dict[str, bool]:
    """Groebner equality of Res_H/Tr_H of the whole union with the component-wise specs."""
    I = union_ideal(Xt)
    out = {"union residual GB": ideal_equal(residual(I, H), union_ideal(res))}
    ring = hyperplane_ring(I.ring, H)
    out["union trace GB"] = ideal_equal(trace(I, H), _embed(union_ideal(tr), ring))
    return out


def hprime_layout_ok(spec: SchemeSpec, H: Hyperplane) -> bool:
    """Placement required of an H' scheme: P and the conic nodes on H, no line inside H."""
    h, p = H.coeffs, spec.prime
    on = lambda v: incident(h, v, p)  # noqa: E731
    for c in spec.components:
        if c.kind == "planar_fat_point":
            ok = on(c.support) and c.plane == h
        elif c.kind == "simple_point":
            ok = on(c.support)
        elif c.kind == "line":
            ok = not all(on(v) for v in c.points)
        elif c.kind == "degenerate_conic":
            ok = on(c.support) and not any(on(v) for v in c.points)
        else:
            ok = False
        if not ok:
            return False
    return True


@lru_cache(maxsize=64)
def _signature(kind: str, d: int, prime: int) -> tuple:
    build = build_hprime if kind == "hprime" else build_hsecond
    return build(d, 0, prime).signature()


def _structure(node: ReductionNode, Xt: SchemeSpec, H: Hyperplane, union_limit: int) -> tuple[SchemeSpec, SchemeSpec]:
    """Component-wise exact checks and the residual/trace specs of Xt."""
    res, tr = residual_spec(Xt, H), trace_spec(Xt, H)
    node.structure["component residual/trace GB"] = all(
        _component_ok(c, H.coeffs, Xt.prime, Xt.ambient) for c in Xt.components)
    if len(Xt) <= union_limit:
        node.structure.update(union_checks(Xt, H, res, tr))
    node.residual, node.trace = res, tr
    return res, tr


def _close(node: ReductionNode, Xt: SchemeSpec, H: Hyperplane, res: SchemeSpec, X: SchemeSpec):
    """Castelnuovo, exact split and semicontinuity for a specialisation Xt of X."""
    deg = node.degree
    node.specialized_hash = Xt.spec_hash()
    node.hyperplane = H.coeffs
    cas = check_castelnuovo(Xt, H, deg, method="rules")
    node.castelnuovo = cas
    node.exact_split = cas.h0_scheme == _h0(res, deg - 1) + restriction_rank(Xt, deg)
    node.counts.append(CountCheck("h0(specialized)", 0, cas.h0_scheme))
    node.structure["semicontinuity"] = _h0(X, deg) <= cas.h0_scheme


def _without(spec: SchemeSpec, drop) -> SchemeSpec:
    return spec.select(lambda c: c not in drop)


def _on_curve(comp: SchemeComponent, curve: SchemeComponent, p: int) -> bool:
    """A simple point lying on one of the lines of ``curve``."""
    if comp.kind != "simple_point":
        return False
    v = comp.support
    for a, b in curve.lines():
        h = forms_vanishing_on([a, b], p, len(v) - 1)
        if all(incident(f, v, p) for f in h):
            return True
    return False


def remove_curve(spec: SchemeSpec, curve: SchemeComponent) -> SchemeSpec:
    """The scheme minus a plane curve made of lines, and minus the points lying on it."""
    return spec.select(lambda c: c != curve and not _on_curve(c, curve, spec.prime))


def _only(spec: SchemeSpec, kind: str) -> list[SchemeComponent]:
    return [c for c in spec.components if c.kind == kind]


def _with_retries(build: Callable[[int], ReductionNode], seed: int, retries: int) -> ReductionNode:
    node = None
    for attempt in range(retries + 1):
        node = build(derived_seed(seed, attempt))
        node.retries = attempt
        if node.own_verdict != INCONCLUSIVE:
            break
    return node


# ---- H_d ----

def specialize_hd(d: int, seed: int = 0, prime: int = DEFAULT_PRIME, *, strict: bool = True,
                  union_limit: int = 6, X: SchemeSpec | None = None) -> ReductionNode:
    """Specialise the H_d scheme on H = {z = 0} and check Res/Tr against H'_{d-1} and H''_d."""
    if d < 3:
        raise ValueError("the reduction needs d >= 3")
    P = parameters(d)
    X = X if X is not None else build_hd(d, seed, prime)
    H = _plane(prime)
    h = H.coeffs
    s = Sampler(3, prime, _node_seed(seed, 0, d))
    lines = [c for c in X.components if c.kind == "line"]
    R = s.point_in(h)
    comps = [C.two_s_cone(R, h, _distinct(lambda: s.point_in(h), P.m, [R]), prime, "CC")]
    comps += [C.sundial(s.point_in(h), s.point(), s.point(), prime, f"S{i + 1}") for i in range(P.s)]
    comps += lines[P.m + 2 * P.s:]
    if P.q:
        a = s.point_in(h)
        b = s.point_in(h)
        comps.append(C.collinear_points(_distinct(lambda: s.point_on_line(a, b), P.q), prime, "P(M)"))
    Xt = SchemeSpec(3, tuple(comps), prime, seed)

    node = ReductionNode(f"H_{d}", d, d, 3, X.spec_hash(), seed)
    node.reports.append(assess(X, d, 0, f"H_{d}"))
    if node.reports[0].actual_h1 != 0:
        node.counts.append(CountCheck("h1(X, d)", 0, node.reports[0].actual_h1 or 0))
    res, tr = _structure(node, Xt, H, union_limit)
    node.structure["residual is an H' scheme"] = (res.signature() == _signature("hprime", d, prime)
                                                  and hprime_layout_ok(res, H))
    node.structure["trace is an H'' scheme"] = tr.signature() == _signature("hsecond", d, prime)
    _close(node, Xt, H, res, X)
    if strict and node.own_verdict == REFUTED:
        raise StructuralMismatch("; ".join(node.failures()))
    return node


# ---- H'_{d-1} ----

def reduce_hprime(d: int, X: SchemeSpec, seed: int = 0, retries: int = DEFAULT_RETRIES,
                  union_limit: int = 6) -> ReductionNode:
    """Verify ``h^0(I_X(d-1)) = 0`` for an H' scheme X by the case-wise specialisation."""
    return _with_retries(lambda sd: _hprime_node(d, X, sd, retries, union_limit), seed, retries)


def _hprime_node(d: int, X: SchemeSpec, seed: int, retries: int, union_limit: int) -> ReductionNode:
    P = parameters(d)
    m = P.m
    prime = X.prime
    H = _plane(prime)
    h = H.coeffs
    s = Sampler(3, prime, _node_seed(seed, 1, d))
    node = ReductionNode(f"H'_{d - 1}", d, d - 1, 3, X.spec_hash(), seed)
    node.structure["input is an H' scheme"] = (X.signature() == _signature("hprime", d, prime)
                                               and hprime_layout_ok(X, H))
    node.reports.append(assess(X, d - 1, 0, f"H'_{d - 1}"))
    fat = [c.relabel("P") for c in X.components if c.kind in ("planar_fat_point", "simple_point")]
    lines = _only(X, "line")
    conics = _only(X, "degenerate_conic")
    sub = _node_seed(seed, 2, d)

    if d == 3:
        # one line into H; residual two skew lines; the line is fixed in the trace
        L1 = C.line(s.point_in(h), s.point_in(h), prime, "L1'")
        Xt = SchemeSpec(3, tuple(fat + [L1] + lines[1:]), prime, seed)
        res, tr = _structure(node, Xt, H, union_limit)
        node.reports.append(assess(res, 1, 0, "Res: two skew lines"))
        L1t = next(c for c in tr.components if c.kind == "line")
        rest = remove_curve(tr, L1t)
        node.counts.append(CountCheck("h0(Tr, 2) = h0(Tr - L1, 1)", _h0(rest, 1), _h0(tr, 2)))
        node.counts.append(CountCheck("h0(Tr - L1, 1)", 0, _h0(rest, 1)))
    elif d == 4:
        # L1 and one line of C become a sundial in H with node R != Q
        (conic,) = conics
        Q = conic.support
        R = _distinct(lambda: s.point_in(h), 1, [Q])[0]
        sd = C.sundial(R, Q, s.point_in(h), prime, "C'")
        M2 = C.line(Q, conic.points[1], prime, "M2")
        Xt = SchemeSpec(3, tuple(fat + lines[1:] + [M2, sd]), prime, seed)
        res, tr = _structure(node, Xt, H, union_limit)
        node.structure["residual is three lines and a point"] = res.signature() == (
            (("line",), 3), (("simple_point",), 1))
        node.reports.append(assess(res, 2, 0, "Res: three lines and a point"))
        cc = next(c for c in tr.components if c.kind == "cone_config")
        rest = remove_curve(tr, cc)
        node.counts.append(CountCheck("h0(Tr, 3) = h0(Tr - conic, 1)", _h0(rest, 1), _h0(tr, 3)))
        node.counts.append(CountCheck("h0(Tr - conic, 1)", 0, _h0(rest, 1)))
    elif d % 3 == 0:
        # m-1 lines become a (2, m-1)-cone; residual is H'_{d-2} of class 2
        R = s.point_in(h)
        cone = C.two_s_cone(R, h, _distinct(lambda: s.point_in(h), m - 1, [R]), prime, "CC")
        Xt = SchemeSpec(3, tuple(fat + lines[m - 1:] + [cone] + conics), prime, seed)
        res, tr = _structure(node, Xt, H, union_limit)
        node.structure["residual is an H' scheme"] = (res.signature() == _signature("hprime", d - 1, prime)
                                                      and hprime_layout_ok(res, H))
        node.children.append(reduce_hprime(d - 1, res, sub, retries, union_limit))
        cc = next(c for c in tr.components if c.kind == "cone_config")
        rest = remove_curve(tr, cc)
        T = rest.select(lambda c: c.kind != "simple_point" or c.label == "P")
        node.counts += [
            CountCheck("h0(Tr, d-1) = h0(Tr - CC, d-m)", _h0(rest, d - m), _h0(tr, d - 1)),
            CountCheck("h0(T, d-m) = C(m+1,2) - 1", comb(m + 1, 2) - 1, _h0(T, d - m)),
            CountCheck("dots formula for T", dots_expected(m - 1, P.s, d - m), _h0(T, d - m)),
            CountCheck("h0(Tr - CC, d-m)", 0, _h0(rest, d - m)),
        ]
    elif d % 3 == 1:
        # L1, L2 become a sundial; M_{1,i} of the first m conics become a (2, m)-cone
        Qs = s.point_in(h)
        sd = C.sundial(Qs, s.point(), s.point(), prime, "Q")
        R = _distinct(lambda: s.point_in(h), 1, [c.support for c in conics[:m]])[0]
        cone = C.two_s_cone(R, h, [c.support for c in conics[:m]], prime, "CC")
        m2 = [C.line(c.support, c.points[1], prime, f"M2,{i + 1}") for i, c in enumerate(conics[:m])]
        Xt = SchemeSpec(3, tuple(fat + [sd] + lines[2:] + [cone] + m2 + conics[m:]), prime, seed)
        res, tr = _structure(node, Xt, H, union_limit)
        node.structure["residual is an H' scheme"] = (res.signature() == _signature("hprime", d - 1, prime)
                                                      and hprime_layout_ok(res, H))
        node.children.append(reduce_hprime(d - 1, res, sub, retries, union_limit))
        cc = next(c for c in tr.components if c.kind == "cone_config")
        rest = remove_curve(tr, cc)
        node.counts.append(CountCheck("h0(Tr, d-1) = h0(Tr - CC, 2m-3)", _h0(rest, 2 * m - 3), _h0(tr, d - 1)))
        node.counts += _line_trick(rest, m, P.s, prime, _node_seed(seed, 3, d))
    else:
        # m lines become a (2, m)-cone; residual is H'_{d-2} of class 1
        R = s.point_in(h)
        cone = C.two_s_cone(R, h, _distinct(lambda: s.point_in(h), m, [R]), prime, "CC")
        Xt = SchemeSpec(3, tuple(fat + lines[m:] + [cone] + conics), prime, seed)
        res, tr = _structure(node, Xt, H, union_limit)
        node.structure["residual is an H' scheme"] = (res.signature() == _signature("hprime", d - 1, prime)
                                                      and hprime_layout_ok(res, H))
        node.children.append(reduce_hprime(d - 1, res, sub, retries, union_limit))
        cc = next(c for c in tr.components if c.kind == "cone_config")
        rest = remove_curve(tr, cc)
        T = rest.select(lambda c: c.kind != "simple_point" or c.label == "P")
        node.counts += [
            CountCheck("h0(Tr, d-1) = h0(Tr - CC, 2m-2)", _h0(rest, 2 * m - 2), _h0(tr, d - 1)),
            CountCheck("h0(T, 2m-2) = C(m+1,2)", comb(m + 1, 2), _h0(T, 2 * m - 2)),
            CountCheck("dots formula for T", dots_expected(m - 1, P.s, 2 * m - 2), _h0(T, 2 * m - 2)),
            CountCheck("h0(Tr - CC, 2m-2)", 0, _h0(rest, 2 * m - 2)),
        ]
    _close(node, Xt, H, node.residual, X)
    return node


def _line_trick(rest: SchemeSpec, m: int, s: int, prime: int, seed: int) -> list[CountCheck]:
    """Trace side of the class-1 step: P, Q and N_3..N_{m-1} move onto a line L."""
    smp = Sampler(2, prime, seed)
    a, b = smp.point(), smp.point()
    (Lf,) = forms_vanishing_on([a, b], prime, 2)
    L = Hyperplane(Lf, prime)
    on_L = lambda: smp.point_on_line(a, b)  # noqa: E731
    Pm = next(c for c in rest.components if c.label == "P")
    Q2 = next(c for c in rest.components if c.label == "Q" and c.kind == "fat_point")
    N = [c for c in _only(rest, "simple_point") if c.label != "P"]
    Z = _only(rest, "two_dot")
    moved = [C.fat_point(on_L(), Pm.mult or 1, prime, "P"), C.fat_point(on_L(), Q2.mult, prime, "Q")]
    moved += [C.simple_point(on_L(), prime, c.label) for c in N[: m - 3]]
    Tt = SchemeSpec(2, tuple(moved + N[m - 3:] + Z), prime, seed)
    ResL = residual_spec(Tt, L)
    Tp = ResL.select(lambda c: c.kind == "two_dot" or c.label == "P")
    return [
        CountCheck("h0(T~, 2m-3) = h0(Res_L T~, 2m-4)", _h0(ResL, 2 * m - 4), _h0(Tt, 2 * m - 3)),
        CountCheck("h0(T', 2m-4) = C(m,2) + 2", comb(m, 2) + 2, _h0(Tp, 2 * m - 4)),
        CountCheck("dots formula for T'", dots_expected(m - 2, s - m, 2 * m - 4), _h0(Tp, 2 * m - 4)),
        CountCheck("h0(Res_L T~, 2m-4)", 0, _h0(ResL, 2 * m - 4)),
        CountCheck("h0(Tr - CC, 2m-3)", 0, _h0(rest, 2 * m - 3)),
    ]


# ---- H''_d ----

def reduce_hsecond(d: int, X: SchemeSpec, seed: int = 0, retries: int = DEFAULT_RETRIES) -> ReductionNode:
    """Verify ``h^0(I_X(d)) = 0`` for an H'' scheme X in the plane."""
    return _with_retries(lambda sd: _hsecond_node(d, X, sd), seed, retries)


def _hsecond_node(d: int, X: SchemeSpec, seed: int) -> ReductionNode:
    P = parameters(d)
    m, prime = P.m, X.prime
    node = ReductionNode(f"H''_{d}", d, d, 2, X.spec_hash(), seed)
    node.structure["input is an H'' scheme"] = X.signature() == _signature("hsecond", d, prime)
    node.reports.append(assess(X, d, 0, f"H''_{d}"))
    cc = next(c for c in X.components if c.kind == "cone_config")
    rest = remove_curve(X, cc)
    doubles = rest.select(lambda c: c.kind == "fat_point")
    node.counts.append(CountCheck("h0(X'', d) = h0(X'' - CC, d-m)", _h0(rest, d - m), _h0(X, d)))
    if d % 3 in (0, 1):
        node.counts += [
            CountCheck("h0(2Q's, d-m) = t", P.t, _h0(doubles, d - m)),
            CountCheck("AH expected value for 2Q's", max(comb(d - m + 2, 2) - 3 * P.s, 0), P.t),
            CountCheck("AH exceptional case", 0, int((P.s, d - m) in AH_EXCEPTIONS)),
            CountCheck("h0(X'' - CC, d-m)", 0, _h0(rest, d - m)),
        ]
        return node
    # move N_1..N_m onto M, then M is a fixed line in degree 2m-1
    (coll,) = _only(rest, "collinear_points")
    a, b = coll.points[:2]
    (Mf,) = forms_vanishing_on([a, b], prime, 2)
    M = Hyperplane(Mf, prime)
    smp = Sampler(2, prime, _node_seed(seed, 4, d))
    N = _only(rest, "simple_point")
    moved = _distinct(lambda: smp.point_on_line(a, b), m, coll.points)
    X0 = SchemeSpec(2, tuple(list(doubles.components) + [coll]
                             + [C.simple_point(v, prime, N[i].label) for i, v in enumerate(moved)]
                             + N[m:]), prime, seed)
    ResM = residual_spec(X0, M)
    node.counts += [
        CountCheck("h0(X0, 2m-1) = h0(Res_M X0, 2m-2)", _h0(ResM, 2 * m - 2), _h0(X0, 2 * m - 1)),
        CountCheck("h0(2Q's, 2m-2) = C(m+1,2)", comb(m + 1, 2), _h0(doubles, 2 * m - 2)),
        CountCheck("AH exceptional case", 0, int((P.s, 2 * m - 2) in AH_EXCEPTIONS)),
        CountCheck("h0(Res_M X0, 2m-2)", 0, _h0(ResM, 2 * m - 2)),
        CountCheck("h0(X'' - CC, 2m-1)", 0, _h0(rest, 2 * m - 1)),
    ]
    return node


# ---- the whole tree ----

def replay_proof(d: int, seed: int = 0, prime: int = DEFAULT_PRIME, retries: int = DEFAULT_RETRIES,
                 union_limit: int = 6) -> Certificate:
    """Certificate for H_d built from the reduction H'_{d-1} + H''_d => H_d and its sub-inductions."""
    if d < 3:
        raise ValueError("replay_proof needs d >= 3")

    def build(sd: int) -> ReductionNode:
        root = specialize_hd(d, sd, prime, strict=False, union_limit=union_limit)
        root.children = [
            reduce_hprime(d, root.residual, _node_seed(sd, 5, d), retries, union_limit),
            reduce_hsecond(d, root.trace, _node_seed(sd, 6, d), retries),
        ]
        return root

    return Certificate(d, _with_retries(build, seed, retries), prime, seed)
