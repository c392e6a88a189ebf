"""Property-based checks of the algebra kernel on random small homogeneous ideals."""

from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from postulab.algebra import (Ideal, PrimeField, hilbert_h0, ideal_equal, ideal_intersect, ideal_quotient,
                              monomials_of_degree, saturate)
from postulab.algebra.ring import Polynomial
from postulab.schemes import ambient_ring

P = 32003
R = ambient_ring(3, P)
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def forms(draw, max_deg=3, max_terms=3):
    d = draw(st.integers(1, max_deg))
    monos = monomials_of_degree(R.nvars, d)
    idx = draw(st.lists(st.integers(0, len(monos) - 1), min_size=1, max_size=max_terms, unique=True))
    coeffs = draw(st.lists(st.integers(1, P - 1), min_size=len(idx), max_size=len(idx)))
    return Polynomial(R, {monos[i]: c for i, c in zip(idx, coeffs)})


def ideals(max_gens=3):
    return st.lists(forms(), min_size=1, max_size=max_gens).map(lambda gs: Ideal(R, tuple(gs)))


@given(st.integers(1, P - 1))
def test_field_inverse(a):
    F = PrimeField(P)
    assert a * F.inv(a) % P == 1


@SETTINGS
@given(st.lists(forms(), min_size=2, max_size=4), st.randoms(use_true_random=False))
def test_gb_independent_of_generator_order(gens, rnd):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    a = Ideal(R, tuple(gens)).gb().signature()
    b = Ideal(R, tuple(shuffled)).gb().signature()
    assert a == b


@SETTINGS
@given(ideals(), ideals())
def test_inclusion_exclusion_on_slices(I, J):
    K = ideal_intersect(I, J)
    S = I + J
    for d in range(5):
        assert hilbert_h0(K, d) == hilbert_h0(I, d) + hilbert_h0(J, d) - hilbert_h0(S, d)


@SETTINGS
@given(ideals(), ideals(max_gens=2))
def test_quotient_soundness(I, J):
    Q = ideal_quotient(I, J)
    G = I.gb()
    for f in Q.generators:
        for g in J.generators:
            assert G.reduce(f * g).is_zero()


@SETTINGS
@given(ideals(), forms(max_deg=1, max_terms=2))
def test_saturation_fixpoint(I, f):
    S = saturate(I, f)
    assert ideal_equal(saturate(S, f), S)
    assert all(S.contains(g) for g in I.generators)
