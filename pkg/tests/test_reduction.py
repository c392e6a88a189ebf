from __future__ import annotations

import json
from collections import Counter

import pytest

from postulab.postulation import REFUTED, VERIFIED, build_hprime, parameters
from postulab.reduction import (CastelnuovoCheck, CountCheck, ReductionNode, StructuralMismatch,
                                check_castelnuovo, remove_curve, replay_proof, restriction_rank, specialize_hd)
from postulab.schemes import Hyperplane, SchemeSpec
from postulab.schemes import components as C

from conftest import P

H = Hyperplane.coordinate(3, P)
ORIGIN = (1, 0, 0, 0)


def kinds(spec):
    return Counter(c.kind for c in spec.components)


# ---- Castelnuovo ----

@pytest.mark.parametrize("method", ["rules", "groebner"])
def test_castelnuovo_double_point_on_plane(method):
    X = SchemeSpec(3, (C.fat_point(ORIGIN, 2, P),), P)
    chk = check_castelnuovo(X, H, 2, method=method)
    # h0(I_2P(2)) = 10 - 4; the residual is P (3 linear forms), the trace 2P in H (3 conics)
    assert (chk.h0_scheme, chk.h0_residual, chk.h0_trace) == (6, 3, 3)
    assert chk.holds


def test_castelnuovo_scheme_inside_plane():
    X = SchemeSpec(3, (C.line((1, 0, 0, 0), (0, 1, 0, 0), P), C.simple_point((0, 0, 1, 0), P)), P)
    for d in (1, 2, 3):
        chk = check_castelnuovo(X, H, d)
        assert chk.h0_residual == (d + 2) * (d + 1) * d // 6
        assert chk.holds


def test_castelnuovo_cone_limit():
    cone = C.two_s_cone(ORIGIN, (0, 0, 0, 1), [(0, 1, 0, 0), (0, 0, 1, 0), (0, 1, P - 1, 0)], P)
    X = SchemeSpec(3, (cone,), P)
    a, b = check_castelnuovo(X, H, 2, "rules"), check_castelnuovo(X, H, 2, "groebner")
    assert a == b and a.holds


def test_castelnuovo_failure_detected():
    assert not CastelnuovoCheck(3, 5, 1, 2).holds


def test_exact_split():
    X = build_hprime(6)
    for d in (3, 4, 5):
        chk = check_castelnuovo(X, H, d)
        assert chk.h0_scheme == chk.h0_residual + restriction_rank(X, d)


# ---- specialisation ----

def test_specialize_hd_3():
    node = specialize_hd(3)
    assert kinds(node.residual) == {"line": 3, "simple_point": 1}
    assert node.own_verdict == VERIFIED and node.castelnuovo.holds


def test_specialize_hd_4():
    node = specialize_hd(4)
    tr = node.trace.components
    assert sum(c.kind == "fat_point" and c.mult == 2 for c in tr) == 1
    assert sum(c.kind == "simple_point" for c in tr) == 3
    assert [c.count for c in tr if c.kind == "cone_config"] == [2]
    assert node.own_verdict == VERIFIED


def test_specialize_hd_6():
    p = parameters(6)
    assert (p.m, p.s, p.t) == (3, 1, 7)
    node = specialize_hd(6)
    assert kinds(node.residual)["line"] == p.t
    assert all(node.structure.values())


def test_structural_mismatch_raises():
    X = SchemeSpec(3, (C.line((1, 2, 3, 4), (4, 3, 2, 1), P),), P)
    with pytest.raises(StructuralMismatch):
        specialize_hd(5, X=X)


def test_remove_curve_drops_points_on_it():
    conic = C.degenerate_conic(ORIGIN, (0, 1, 0, 0), (0, 0, 1, 0), P)
    on = C.simple_point((1, 1, 0, 0), P)
    off = C.simple_point((1, 1, 1, 1), P)
    X = SchemeSpec(3, (conic, on, off), P)
    assert remove_curve(X, conic).components == (off,)


# ---- certificates ----

def test_node_severity():
    node = ReductionNode("x", 5, 5, 3, "h", 0)
    node.counts.append(CountCheck("c", 1, 2))
    assert node.own_verdict != VERIFIED and node.own_verdict != REFUTED
    node.structure["residual"] = False
    assert node.own_verdict == REFUTED


def test_replay_base_case():
    cert = replay_proof(3)
    assert cert.valid
    names = [n.statement for n in cert.nodes()]
    assert names == ["H_3", "H'_2", "H''_3"]


def test_replay_class_one_branch():
    cert = replay_proof(7)
    assert cert.valid
    counts = {c.name: c for n in cert.nodes() for c in n.counts}
    assert "h0(T', 2m-4) = C(m,2) + 2" in counts
    assert all(c.ok for c in counts.values())


def test_replay_class_two_branch():
    cert = replay_proof(5)
    assert cert.valid
    names = {c.name for n in cert.nodes() for c in n.counts}
    assert "h0(T, 2m-2) = C(m+1,2)" in names
    assert "h0(2Q's, 2m-2) = C(m+1,2)" in names


def test_certificate_json_is_deterministic():
    a, b = replay_proof(6).to_json(), replay_proof(6).to_json()
    assert a == b
    data = json.loads(a)
    assert data["root"]["statement"] == "H_6"
