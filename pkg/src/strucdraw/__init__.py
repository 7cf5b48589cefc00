"""Beam cross-section drawings from structured input or a six-step LLM chain."""

from .geometry import resolve, verify_ir
from .ir import DrawingIR, DrawingKind, Unit, parse_ir, serialize_ir, validate

__all__ = ["DrawingIR", "DrawingKind", "Unit", "parse_ir", "resolve", "serialize_ir", "validate", "verify_ir"]
__version__ = "0.1.0"
