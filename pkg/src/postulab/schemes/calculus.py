"""Residual and trace with respect to a hyperplane."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra.ideal import Ideal, ideal_equal, quotient_by_element, saturate_irrelevant
from ..algebra.ring import Ring
from .components import SchemeComponent, build_component, residual_rule, trace_rule
from .geometry import Hyperplane, ambient_ring
from .spec import SchemeSpec, union_ideal


def hyperplane_ring(ring: Ring, H: Hyperplane) -> Ring:
    """Coordinate ring of H: the ambient variables minus the pivot."""
    k = H.pivot
    names = tuple(nm for i, nm in enumerate(ring.names) if i != k)
    return Ring(names, ring.p)


def residual(I: Ideal, H: Hyperplane) -> Ideal:
    """``Res_H``: the quotient ``I : (h)``."""
    return quotient_by_element(I, H.form(I.ring))


def trace(I: Ideal, H: Hyperplane, saturated: bool = True) -> Ideal:
    """``Tr_H`` in H's coordinate ring.

    The pivot variable is eliminated by solving ``h = 0`` for it; with
    ``saturated`` the result is saturated by the irrelevant ideal of H.
    """
    ring = I.ring
    target = hyperplane_ring(ring, H)
    k = H.pivot
    p = ring.p
    inv = pow(H.coeffs[k], -1, p)
    images = []
    j = 0
    for i in range(ring.nvars):
        if i == k:
            coeffs = [(-H.coeffs[a] * inv) % p for a in range(ring.nvars) if a != k]
            images.append(target.linear_form(coeffs))
        else:
            images.append(target.var(j))
            j += 1
    out = Ideal(target, tuple(g.substitute(images, target) for g in I.generators))
    return saturate_irrelevant(out) if saturated else out


def residual_spec(spec: SchemeSpec, H: Hyperplane) -> SchemeSpec:
    """Component-wise residual (residuals distribute over unions)."""
    comps = [c for comp in spec.components for c in residual_rule(comp, H.coeffs, spec.prime)]
    return SchemeSpec(spec.ambient, tuple(comps), spec.prime, spec.seed)


def trace_spec(spec: SchemeSpec, H: Hyperplane) -> SchemeSpec:
    """Union of the component traces, a subscheme of ``Tr_H`` of the union."""
    comps = [c for comp in spec.components for c in trace_rule(comp, H.coeffs, spec.prime)]
    return SchemeSpec(spec.ambient - 1, tuple(comps), spec.prime, spec.seed)


@dataclass(frozen=True)
class ComponentMatch:
    label: str
    kind: str
    residual_ok: bool
    trace_ok: bool


def check_component(comp: SchemeComponent, H: Hyperplane, n: int) -> ComponentMatch:
    """GB-exact comparison of the ideal residual/trace with the geometric rules."""
    p = H.p
    ring = ambient_ring(n, p)
    I = build_component(comp, ring)
    res_expected = union_ideal(SchemeSpec(n, tuple(residual_rule(comp, H.coeffs, p)), p))
    res_ok = ideal_equal(residual(I, H), res_expected)
    tr_comps = tuple(trace_rule(comp, H.coeffs, p))
    tr_spec = SchemeSpec(n - 1, tr_comps, p)
    tr_expected = union_ideal(tr_spec)
    tr_ring = hyperplane_ring(ring, H)
    if tr_expected.ring != tr_ring:
        tr_expected = Ideal(tr_ring, tuple(g.embed(tr_ring) for g in tr_expected.generators))
    tr_ok = ideal_equal(trace(I, H), tr_expected)
    return ComponentMatch(comp.label, comp.kind, res_ok, tr_ok)
