from __future__ import annotations

import pytest

from postulab.algebra import Ideal
from postulab.schemes import Sampler, SchemeSpec, ambient_ring
from postulab.schemes import components as C

P = 32003


@pytest.fixture
def R3():
    return ambient_ring(3, P)


def ideal(ring, *gens):
    return Ideal.of(ring, list(gens))


def _random_component(smp: Sampler, n: int, kind: str, label: str):
    if kind == "line":
        return C.line(smp.point(), smp.point(), P, label)
    if kind == "simple_point":
        return C.simple_point(smp.point(), P, label)
    if kind == "fat_point":
        return C.fat_point(smp.point(), 2 + int(smp.rng.integers(0, 2)), P, label)
    if kind == "two_dot":
        return C.two_dot(smp.point(), smp.point(), P, label)
    raise ValueError(kind)


def scheme_corpus(size: int = 50, seed: int = 11) -> list[SchemeSpec]:
    """Small mixed schemes in P^2 and P^3 (lines, points, double/triple points, 2-dots)."""
    out = []
    for i in range(size):
        smp = Sampler(3 if i % 3 else 2, P, seed * 1000 + i)
        n = smp.n
        kinds = ["simple_point", "fat_point", "two_dot"] + (["line"] if n == 3 else [])
        k = 1 + i % 4
        comps = [_random_component(smp, n, kinds[(i + j) % len(kinds)], f"c{j}") for j in range(k)]
        out.append(SchemeSpec(n, tuple(comps), P, seed))
    return out


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
