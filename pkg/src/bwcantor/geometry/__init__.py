"""Explicit nested solid tori for the first stages of a defining sequence."""

from .embed import GeometryParams, SolidTorusEmbedding, embed_stage_tree, expected_torus_count, root_embedding
from .export import CURVES_SCHEMA, export_curves, export_mesh, load_curves, obj_text
from .linking import LinkingResult, gauss_sum, linking_number
from .model import (
    ModelCurve,
    ModelParams,
    model_bing_pair,
    model_core,
    model_whitehead,
    winding_number,
)
from .verify import BING_PAIR_LINKING, CheckRecord, Tolerances, VerificationReport, verify_embedding

__all__ = [
    "GeometryParams",
    "SolidTorusEmbedding",
    "embed_stage_tree",
    "expected_torus_count",
    "root_embedding",
    "CURVES_SCHEMA",
    "export_curves",
    "export_mesh",
    "load_curves",
    "obj_text",
    "LinkingResult",
    "gauss_sum",
    "linking_number",
    "ModelCurve",
    "ModelParams",
    "model_bing_pair",
    "model_core",
    "model_whitehead",
    "winding_number",
    "BING_PAIR_LINKING",
    "CheckRecord",
    "Tolerances",
    "VerificationReport",
    "verify_embedding",
]
