"""Answer assembly: drafting, anchor construction, gating, rendering."""

from groundline.synthesize.anchors import VersionConflictError, build_anchor
from groundline.synthesize.assemble import (
    AssemblyResult,
    build_abstention,
    classify_gap,
    gate_and_assemble,
    near_miss_packets,
)
from groundline.synthesize.drafting import Placement, draft, redraft
from groundline.synthesize.rendering import render

__all__ = [
    "AssemblyResult",
    "Placement",
    "VersionConflictError",
    "build_abstention",
    "build_anchor",
    "classify_gap",
    "draft",
    "gate_and_assemble",
    "near_miss_packets",
    "redraft",
    "render",
]
