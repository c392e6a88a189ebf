from __future__ import annotations

from math import comb

import pytest

from postulab.algebra import ResourceLimitError
from postulab.postulation import (INCONCLUSIVE, REFUTED, VERIFIED, ConsistencyError, StatementParams,
                                  actual_h0, actual_h1, build_dots, build_double_points, build_hd, build_lines,
                                  closed_forms, derived_seed, expected_h0, parameters, verify_statement)
from postulab.schemes import SchemeError, SchemeSpec
from postulab.schemes import components as C

from conftest import P, scheme_corpus

CORPUS = scheme_corpus(50)


# ---- parameters ----

@pytest.mark.parametrize("d, values", [(3, (5, 0, 2, 0, 3)), (4, (7, 0, 2, 1, 3)), (5, (9, 2, 2, 1, 5))])
def test_parameters_examples(d, values):
    P_ = parameters(d)
    assert (P_.r, P_.q, P_.m, P_.s, P_.t) == values


def test_parameters_definitions_and_closed_forms():
    for d in range(3, 200):
        p = parameters(d)
        N = comb(d + 3, 3)
        assert p.r == N // (d + 1) and p.q == N - p.r * (d + 1)
        assert p.m == d // 3 + 1
        assert p.s == comb(p.m, 2) + (p.r - p.m) * d - comb(d + 2, 3)
        assert p.t == p.r - p.m - 2 * p.s
        assert min(p.q, p.s, p.t) >= 0
        assert closed_forms(d) == p


def test_check_detects_tampering(monkeypatch):
    import postulab.postulation as mod
    real = mod.closed_forms
    monkeypatch.setattr(mod, "closed_forms", lambda d: StatementParams(d, *[v + 1 for v in real(d).as_dict().values()][1:]))
    with pytest.raises(ConsistencyError):
        mod.parameters(7)


# ---- expected values ----

def test_expected_examples():
    assert expected_h0(build_lines(4), 3) == 4
    assert expected_h0(build_dots(3, 2), 3) == 0
    assert expected_h0(SchemeSpec(3, (), P), 5) == comb(8, 3)
    assert expected_h0(SchemeSpec(2, (), P), 4) == comb(6, 2)


def test_expected_rejects_non_countable():
    cone = C.sundial((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), P)
    with pytest.raises(SchemeError):
        expected_h0(SchemeSpec(3, (cone,), P), 3)


# ---- actual values ----

def test_actual_examples():
    assert actual_h0(build_lines(3), 2) == 1
    assert actual_h0(build_lines(3), 2, backend="groebner") == 1
    assert actual_h0(build_lines(2), 1) == 0
    assert actual_h0(build_lines(1), 3) == 16


def test_actual_h1_accounting():
    X = build_lines(3)
    assert actual_h1(X, 2, actual_h0(X, 2)) == 0
    sd = SchemeSpec(3, (C.sundial((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), P),), P)
    assert actual_h1(sd, 2, actual_h0(sd, 2)) is None


def test_resource_cap():
    with pytest.raises(ResourceLimitError):
        actual_h0(build_lines(2), 40, max_dim=1000)


@pytest.mark.parametrize("idx", range(len(CORPUS)))
def test_backend_agreement(idx):
    X = CORPUS[idx]
    for d in range(7):
        assert actual_h0(X, d) == actual_h0(X, d, backend="groebner")


def test_lower_bound_on_corpus():
    for X in CORPUS:
        for d in range(7):
            assert actual_h0(X, d) >= expected_h0(X, d)


def _pairs(k=20):
    out = []
    for X in CORPUS:
        if len(X.components) >= 2:
            out.append((X.without([len(X.components) - 1]), X))
        if len(out) == k:
            break
    return out


@pytest.mark.parametrize("pair", _pairs(), ids=lambda p: p[1].spec_hash()[:8])
def test_monotonicity_under_removal(pair):
    sub, X = pair
    for d in range(7):
        h0, h0_sub = actual_h0(X, d), actual_h0(sub, d)
        assert h0_sub >= h0
        if actual_h1(X, d, h0) == 0:
            assert actual_h1(sub, d, h0_sub) == 0


def test_seeded_builders_are_deterministic():
    assert build_hd(7, 3).spec_hash() == build_hd(7, 3).spec_hash()
    assert build_hd(7, 3).spec_hash() != build_hd(7, 4).spec_hash()


def test_derived_seeds_are_distinct():
    seeds = {derived_seed(0, a) for a in range(10)}
    assert len(seeds) == 10 and derived_seed(5, 0) == 5


# ---- statements ----

def test_hd_3_verified_with_vanishing():
    rep = verify_statement("hd", 3)
    assert rep.verdict == VERIFIED and rep.actual_h0 == 0 and rep.actual_h1 == 0


def test_ah_exception_flagged():
    rep = verify_statement("ah", 4, s=5, cross_check=True)
    assert rep.exceptional and rep.expected_h0 == 0 and rep.actual_h0 == 1
    assert rep.verdict == VERIFIED


def test_lines_five_cubics():
    rep = verify_statement("lines", 3, e=5)
    assert rep.verdict == VERIFIED and rep.actual_h0 == 0


def test_dots_statement():
    rep = verify_statement("dots", 3, m=3, s=2)
    assert rep.verdict == VERIFIED and rep.expected_h0 == 0


def test_hidden_failure_is_inconclusive(monkeypatch):
    import postulab.postulation as mod
    real = mod.actual_h0
    monkeypatch.setattr(mod, "actual_h0", lambda spec, d, **kw: real(spec, d, **kw) + 1)
    rep = mod.verify_statement("lines", 3, e=4, retries=2)
    assert rep.verdict == INCONCLUSIVE and rep.retries == 2


def test_backend_disagreement_is_refuted(monkeypatch):
    import postulab.postulation as mod
    real = mod.actual_h0

    def skewed(spec, d, backend="matrix", **kw):
        return real(spec, d, backend=backend, **kw) + (backend == "groebner")

    monkeypatch.setattr(mod, "actual_h0", skewed)
    assert mod.verify_statement("lines", 2, e=3, cross_check=True).verdict == REFUTED


def test_report_json_round_trip():
    import json
    rep = verify_statement("hprime", 5, seed=1)
    data = json.loads(rep.to_json())
    assert data["verdict"] == VERIFIED and data["seed"] == 1 and data["prime"] == P


def test_double_points_builder():
    X = build_double_points(5)
    assert X.ambient == 2 and len(X.components) == 5
    assert actual_h0(X, 4) == 1
