from __future__ import annotations

import itertools

import numpy as np
import pytest
import sympy

from postulab.algebra import (GroebnerLimits, Ideal, MonomialOrder, PrimeField, ResourceLimitError, Ring,
                              hilbert_function, hilbert_h0, ideal_contains, ideal_equal, ideal_intersect,
                              ideal_quotient, is_prime, monomials_of_degree, nullspace, quotient_by_element,
                              rank, rref, saturate, spolynomial)
from postulab.algebra.groebner import buchberger, normal_form
from postulab.schemes import ambient_ring

from conftest import P, ideal

PAPER_LIMIT = ["x^2*y+x*y^2", "x*y*z", "x^2*z", "y^2*z", "z^2"]


# ---- field and linear algebra ----

def test_is_prime_small_and_default():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(32003) and not is_prime(32001)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(32004)
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)


def test_inverse_sweep():
    F = PrimeField(P)
    rng = np.random.default_rng(0)
    for a in rng.integers(1, P, size=500):
        assert int(a) * F.inv(int(a)) % P == 1


def test_rank_and_nullspace_agree():
    rng = np.random.default_rng(1)
    a = rng.integers(0, P, size=(6, 9))
    a[5] = (a[0] + 3 * a[1]) % P
    assert rank(a, P) == 5
    ns = nullspace(a, P)
    assert ns.shape == (4, 9)
    assert not ((a @ ns.T) % P).any()


def test_rref_pivots():
    red, piv = rref(np.array([[0, 2, 4], [0, 1, 2], [1, 0, 0]]), 7)
    assert piv == [0, 1]
    assert red.tolist() == [[1, 0, 0], [0, 1, 2]]


# ---- polynomials ----

def test_monomials_of_degree_count():
    for n, d in [(3, 2), (4, 3), (4, 6)]:
        monos = monomials_of_degree(n, d)
        assert len(monos) == len(set(monos)) == sympy.binomial(n + d - 1, d)
        assert all(sum(e) == d for e in monos)


def test_parse_and_canonical_form(R3):
    f = R3.parse("x*y + y*x - 2*x*y + z^2")
    assert f == R3.parse("z^2")
    g = R3.parse("(x+y)^2")
    assert g.to_str() == R3.parse("x^2+2*x*y+y^2").to_str()
    assert g.degree == 2 and g.is_homogeneous()


def test_grevlex_is_multiplicative(R3):
    order = MonomialOrder.grevlex(R3)
    monos = monomials_of_degree(4, 2)
    for a, b in itertools.combinations(monos, 2):
        for c in monomials_of_degree(4, 1):
            ac = tuple(i + j for i, j in zip(a, c))
            bc = tuple(i + j for i, j in zip(b, c))
            assert (order.key(a) < order.key(b)) == (order.key(ac) < order.key(bc))


# ---- Groebner bases ----

def test_gb_already_reduced(R3):
    G = ideal(R3, "x^2", "y").gb()
    assert sorted(g.to_str() for g in G) == ["x^2", "y"]


def test_gb_unit_ideal(R3):
    G = Ideal.unit(R3).gb()
    assert G.is_unit()


def test_gb_of_cone_limit_reduces_generators(R3):
    I = ideal(R3, *PAPER_LIMIT)
    G = I.gb()
    assert all(G.reduce(g).is_zero() for g in I.generators)
    for f, g in itertools.combinations(G.basis, 2):
        assert normal_form(spolynomial(f, g, G.order), G.basis, G.order).is_zero()


def _sympy_gb(gens, names):
    syms = sympy.symbols(names)
    G = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], *syms, order="grevlex", modulus=P)
    return {sympy.Poly(g, *syms, modulus=P).monoms(order="grevlex")[0] for g in G.exprs}, len(G.exprs)


@pytest.mark.parametrize("gens", [
    PAPER_LIMIT,
    ["x^2-y*t", "x*y-z*t", "y^2-x*z"],
    ["x^3+y^3+z^3", "x*y*z", "t^2*x-y^3"],
    ["x*y-z^2", "y*z-x*t", "x^2-t*z"],
])
def test_gb_matches_sympy(gens):
    R = ambient_ring(3, P)
    G = ideal(R, *gens).gb()
    ours = {g.leading_monomial(G.order) for g in G}
    theirs, size = _sympy_gb(gens, R.names)
    assert len(G) == size
    assert ours == theirs


def test_gb_limit_raises():
    R = ambient_ring(3, P)
    gens = [R.parse(s) for s in ["x^3+y^3+z^3+t^3", "x*y*z*t-x^4", "t^2*x^2-y^3*z", "x^2*y^2-z*t^3"]]
    with pytest.raises(ResourceLimitError):
        buchberger(gens, MonomialOrder.grevlex(R), GroebnerLimits(max_basis=3))


# ---- ideal operations ----

def test_intersection_of_three_lines(R3):
    I = ideal(R3, "y", "z") & ideal(R3, "x", "z") & ideal(R3, "x+y", "z")
    assert ideal_equal(I, ideal(R3, "x^2*y+x*y^2", "z"))


def test_intersection_with_unit(R3):
    I = ideal(R3, "x^2", "y*z")
    assert ideal_equal(I & Ideal.unit(R3), I)


def test_colliding_points_intersection():
    S = Ring(("t", "x", "l"), P, weights=(1, 1, 0))
    J = ideal_intersect(ideal(S, "x"), ideal(S, "x-l*t"))
    target = ideal(S, "x^2-l*t*x")
    assert ideal_contains(J, target) and ideal_contains(target, J)


def test_quotient_of_cone_limit_by_z(R3):
    I = ideal(R3, *PAPER_LIMIT)
    z = R3.parse("z")
    assert ideal_equal(quotient_by_element(I, z), ideal(R3, "x^2", "y^2", "x*y", "z"))
    assert ideal_equal(ideal_quotient(I, Ideal.unit(R3)), I)


@pytest.mark.parametrize("s", [3, 4, 5])
def test_quotient_of_double_plane_point(R3, s):
    m = ideal(R3, "x", "y", "z")
    I = m ** (s - 1) + ideal(R3, "z^2")
    expected = m ** (s - 2) + ideal(R3, "z")
    assert ideal_equal(quotient_by_element(I, R3.parse("z")), expected)


def test_saturation_examples():
    S = Ring(("t", "x", "l"), P, weights=(1, 1, 0))
    lam = S.parse("l")
    assert ideal_equal(saturate(ideal(S, "l*x", "x^2"), lam), ideal(S, "x"))
    I = ideal(S, "x^2-l*t*x")
    assert ideal_equal(saturate(I, lam), I)
    assert ideal_equal(saturate(I, S.one()), I)
    assert ideal_equal(saturate(ideal(S, "l*x", "x^2"), lam, method="eliminate"), ideal(S, "x"))


def test_slice_dimensions(R3):
    assert hilbert_h0(ideal(R3, "x", "y", "z") ** 2, 2) == 6
    assert hilbert_function(ideal(R3, "x", "y", "z") ** 2, 2) == 4
    assert hilbert_h0(ideal(R3, "z"), 1) == 1


def test_slice_gb_method_agrees(R3):
    I = ideal(R3, *PAPER_LIMIT)
    for d in range(6):
        assert hilbert_h0(I, d) == hilbert_h0(I, d, method="gb")


def test_slice_cap(R3):
    with pytest.raises(ResourceLimitError):
        hilbert_h0(ideal(R3, "x"), 30, max_dim=100)


def test_non_homogeneous_rejected(R3):
    with pytest.raises(ValueError):
        ideal(R3, "x^2+y")
