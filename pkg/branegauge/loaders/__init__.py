"""
BraneGauge Loaders Module

Input sources for BraneGauge.
Currently supports JSON brane files for the projective and torus models.
"""

from .brane_files import (
    ProjectiveBrane,
    TorusBrane,
    TorusConeBrane,
    dump_brane,
    load_brane,
    parse_brane,
)

__all__ = [
    "ProjectiveBrane",
    "TorusBrane",
    "TorusConeBrane",
    "dump_brane",
    "load_brane",
    "parse_brane",
]
