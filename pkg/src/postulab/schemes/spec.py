"""Declarative unions of components and their JSON interchange format."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable

from ..algebra.field import DEFAULT_PRIME, PrimeField
from ..algebra.ideal import Ideal, intersect_all
from ..algebra.ring import Ring
from . import components as C
from .components import KINDS, SchemeComponent, SchemeError, build_component, validate
from .geometry import Sampler, ambient_ring, canonical


@dataclass(frozen=True)
class SchemeSpec:
    ambient: int
    components: tuple[SchemeComponent, ...] = ()
    prime: int = DEFAULT_PRIME
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        PrimeField(self.prime)
        for c in self.components:
            validate(c, self.ambient, self.prime)

    @property
    def ring(self) -> Ring:
        return ambient_ring(self.ambient, self.prime)

    def __len__(self):
        return len(self.components)

    def __add__(self, other: "SchemeSpec") -> "SchemeSpec":
        if (other.ambient, other.prime) != (self.ambient, self.prime):
            raise SchemeError("cannot join specs over different spaces")
        return replace(self, components=self.components + other.components)

    def extend(self, comps: Iterable[SchemeComponent]) -> "SchemeSpec":
        return replace(self, components=self.components + tuple(comps))

    def without(self, indices: Iterable[int]) -> "SchemeSpec":
        drop = set(indices)
        return replace(self, components=tuple(c for i, c in enumerate(self.components) if i not in drop))

    def select(self, pred) -> "SchemeSpec":
        return replace(self, components=tuple(c for c in self.components if pred(c)))

    def signature(self) -> tuple:
        """Multiset of component types, ignoring positions."""
        cnt = Counter(_type_key(c) for c in self.components)
        return tuple(sorted(cnt.items()))

    # ---- serialisation ----
    def to_dict(self, labels: bool = True) -> dict[str, Any]:
        return {
            "ambient": self.ambient,
            "prime": self.prime,
            "seed": self.seed,
            "components": [component_to_dict(c, labels) for c in self.components],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def spec_hash(self) -> str:
        """SHA-256 of the canonical JSON (labels excluded)."""
        blob = json.dumps(self.to_dict(labels=False), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SchemeSpec":
        return spec_from_dict(data)

    @classmethod
    def from_json(cls, text: str) -> "SchemeSpec":
        return spec_from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "SchemeSpec":
        return cls.from_json(Path(path).read_text())

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(indent=2) + "\n")


def _type_key(c: SchemeComponent) -> tuple:
    if c.kind in ("cone_config", "two_s_cone", "star_config", "collinear_points"):
        return (c.kind, c.count)
    if c.mult is not None:
        return (c.kind, c.mult)
    return (c.kind,)


def union_ideal(spec: SchemeSpec) -> Ideal:
    """Intersection of all component ideals (unit ideal for the empty scheme)."""
    ring = spec.ring
    if not spec.components:
        return Ideal.unit(ring)
    return intersect_all([build_component(c, ring) for c in spec.components])


# ---- JSON ----

def component_to_dict(c: SchemeComponent, labels: bool = True) -> dict[str, Any]:
    d: dict[str, Any] = {"kind": c.kind}
    if c.kind == "star_config":
        d["points"] = [[list(a), list(b)] for a, b in c.lines()]
    elif c.points:
        d["points"] = [list(v) for v in c.points]
    for key in ("support", "plane", "direction"):
        v = getattr(c, key)
        if v is not None:
            d[key] = list(v)
    if c.mult is not None:
        d["mult"] = c.mult
    if c.kind in ("cone_config", "two_s_cone", "star_config"):
        d["count"] = c.count
    if labels and c.label:
        d["label"] = c.label
    return d


_FIELDS = {"kind", "points", "support", "plane", "mult", "count", "direction", "generic", "label"}


def _coords(v, n, p, where):
    if not isinstance(v, (list, tuple)) or len(v) != n + 1 or not all(isinstance(x, int) for x in v):
        raise SchemeError(f"{where}: expected {n + 1} integer coordinates, got {v!r}")
    return canonical(v, p)


def spec_from_dict(data: dict[str, Any]) -> SchemeSpec:
    if not isinstance(data, dict):
        raise SchemeError("scheme file must contain a JSON object")
    for key in ("ambient", "components"):
        if key not in data:
            raise SchemeError(f"missing top-level field '{key}'")
    n = data["ambient"]
    if not isinstance(n, int) or n < 1:
        raise SchemeError("field 'ambient' must be a positive integer")
    p = data.get("prime", DEFAULT_PRIME)
    seed = data.get("seed", 0)
    try:
        PrimeField(p)
    except (ValueError, TypeError) as exc:
        raise SchemeError(f"field 'prime': {exc}") from None
    if not isinstance(data["components"], list):
        raise SchemeError("field 'components' must be an array")
    sampler = Sampler(n, p, seed)
    comps: list[SchemeComponent] = []
    for i, rec in enumerate(data["components"]):
        where = f"components[{i}]"
        if not isinstance(rec, dict) or "kind" not in rec:
            raise SchemeError(f"{where}: each component needs a 'kind'")
        unknown = set(rec) - _FIELDS
        if unknown:
            raise SchemeError(f"{where}: unknown field(s) {sorted(unknown)}")
        kind = rec["kind"]
        if kind not in KINDS:
            raise SchemeError(f"{where}: unknown kind {kind!r}")
        if rec.get("generic"):
            comps.extend(expand_generic(rec, sampler, where))
        else:
            comp = _explicit(rec, n, p, where)
            try:
                validate(comp, n, p)
            except SchemeError as exc:
                raise SchemeError(f"{where}: {exc}") from None
            comps.append(comp)
    return SchemeSpec(n, tuple(comps), p, seed)


def _explicit(rec, n, p, where) -> SchemeComponent:
    kind = rec["kind"]
    pts = rec.get("points", [])
    if kind == "star_config":
        flat = []
        for j, pair in enumerate(pts):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemeError(f"{where}.points[{j}]: star lines are given as point pairs")
            flat.extend(pair)
        pts = flat
    points = tuple(_coords(v, n, p, f"{where}.points[{j}]") for j, v in enumerate(pts))
    opt = {}
    for key in ("support", "plane", "direction"):
        if key in rec:
            opt[key] = _coords(rec[key], n, p, f"{where}.{key}")
    mult = rec.get("mult")
    if mult is not None and (not isinstance(mult, int) or mult < 1):
        raise SchemeError(f"{where}.mult: must be a positive integer")
    comp = SchemeComponent(kind, points, mult=mult, label=rec.get("label", ""), **opt)
    if "count" in rec and rec["count"] != comp.count:
        raise SchemeError(f"{where}.count: {rec['count']} does not match the {comp.count} lines given")
    if kind in ("fat_point", "planar_fat_point") and mult == 1:
        comp = C.simple_point(comp.support, p, comp.label)
    return comp


def expand_generic(rec: dict, sampler: Sampler, where: str = "component") -> list[SchemeComponent]:
    """Realise a ``generic: true`` record with seeded random data."""
    kind = rec["kind"]
    p, n = sampler.p, sampler.n
    count = rec.get("count", 1)
    if not isinstance(count, int) or count < 0:
        raise SchemeError(f"{where}.count: must be a non-negative integer")
    mult = rec.get("mult")
    plane = canonical(rec["plane"], p) if "plane" in rec else None
    label = rec.get("label", "")
    s = sampler
    out: list[SchemeComponent] = []

    def pl():
        return plane if plane is not None else s.hyperplane()

    if kind == "line":
        out = [C.line(s.point(), s.point(), p, label) for _ in range(count)]
    elif kind == "simple_point":
        out = [C.simple_point(s.point(), p, label) for _ in range(count)]
    elif kind == "collinear_points":
        a, b = s.point(), s.point()
        pts = []
        while len(pts) < count:
            v = s.point_on_line(a, b)
            if v not in pts:
                pts.append(v)
        out = [C.collinear_points(pts, p, label)] if pts else []
    elif kind == "fat_point":
        out = [C.fat_point(s.point(), mult or 2, p, label) for _ in range(count)]
    elif kind == "planar_fat_point":
        for _ in range(count):
            h = pl()
            out.append(C.planar_fat_point(s.point_in(h), h, mult or 2, p, label))
    elif kind == "d_point":
        for _ in range(count):
            h = pl()
            out.append(C.d_point(s.point_in(h), h, mult or 2, p, label))
    elif kind == "two_dot":
        for _ in range(count):
            P = s.point()
            out.append(C.two_dot(P, s.point(), p, label))
    elif kind in ("degenerate_conic", "sundial"):
        make = C.degenerate_conic if kind == "degenerate_conic" else C.sundial
        for _ in range(count):
            Q = s.point_in(plane) if plane is not None else s.point()
            out.append(make(Q, s.point(), s.point(), p, label))
    elif kind in ("cone_config", "two_s_cone"):
        h = pl() if (n >= 3 or kind == "two_s_cone") else None
        P = s.point_in(h) if h is not None else s.point()
        pts = [s.point_in(h) if h is not None else s.point() for _ in range(count)]
        if kind == "cone_config":
            out = [C.cone_config(P, pts, p, plane=h, label=label)]
        else:
            out = [C.two_s_cone(P, h, pts, p, label)]
    elif kind == "star_config":
        h = pl() if n >= 3 else None
        pick = (lambda: s.point_in(h)) if h is not None else s.point
        out = [C.star_config([(pick(), pick()) for _ in range(count)], p, plane=h, label=label)]
    else:  # pragma: no cover - guarded by KINDS
        raise SchemeError(f"{where}: cannot expand kind {kind!r}")
    return out
