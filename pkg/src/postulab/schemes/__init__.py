"""Geometric components, their ideals, and the residual/trace calculus."""

from __future__ import annotations

from . import components
from .calculus import (
    ComponentMatch,
    check_component,
    hyperplane_ring,
    residual,
    residual_spec,
    trace,
    trace_spec,
)
from .components import (
    COUNTABLE,
    KINDS,
    SchemeComponent,
    SchemeError,
    build_component,
    condition_count,
    conditions,
    residual_rule,
    trace_rule,
)
from .geometry import Hyperplane, ProjectivePoint, Sampler, ambient_ring, canonical
from .spec import SchemeSpec, expand_generic, spec_from_dict, union_ideal

__all__ = [
    "components", "ComponentMatch", "check_component", "hyperplane_ring", "residual", "residual_spec",
    "trace", "trace_spec", "COUNTABLE", "KINDS", "SchemeComponent", "SchemeError", "build_component",
    "condition_count", "conditions", "residual_rule", "trace_rule", "Hyperplane", "ProjectivePoint",
    "Sampler", "ambient_ring", "canonical", "SchemeSpec", "expand_generic", "spec_from_dict", "union_ideal",
]
