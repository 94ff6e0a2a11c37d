"""Exact flat and hyperbolic geometry of the Chamanara surface.

The surface is the unit square whose sides are cut at dyadic points and
glued by translations, halving the segment lengths toward the corners.
This package computes its saddle connections and cylinder decompositions in
directions of slope ``2**n``, the parabolic affine symmetries they induce, and
the Fuchsian group generated by ``P1`` and ``H`` with its fundamental
domain, reduction and membership test.
"""

from __future__ import annotations

from .cylinders import (
    Cylinder,
    CylinderDecomposition,
    boundary_count,
    commensurate,
    decompose,
    inverse_modulus,
    modulus,
    renormalization_check,
    synthesize_parabolic,
)
from .exactnum import DomainError, FieldMismatchError, QuadRat, Rational, parse_scalar, rat_gcd
from .fuchsian import (
    F,
    H,
    M,
    P1,
    P2,
    HPoint,
    Mat2,
    Word,
    classify,
    enumerate_words,
    fixed_points,
    in_fundamental_domain,
    is_member,
    mobius_apply,
    parabolic_direction_scan,
    reduce_to_domain,
    verify_side_pairing,
)
from .surface import (
    DirVec,
    SurfacePoint,
    SurfaceSpec,
    build_surface,
    glue_map,
    saddle_connections,
    singularity_path,
    trace_geodesic,
)
from .verify import VerificationReport, verify_paper

__version__ = "0.1.0"

__all__ = [
    "Cylinder",
    "CylinderDecomposition",
    "DirVec",
    "DomainError",
    "F",
    "FieldMismatchError",
    "H",
    "HPoint",
    "M",
    "Mat2",
    "P1",
    "P2",
    "QuadRat",
    "Rational",
    "SurfacePoint",
    "SurfaceSpec",
    "VerificationReport",
    "Word",
    "boundary_count",
    "build_surface",
    "classify",
    "commensurate",
    "decompose",
    "enumerate_words",
    "fixed_points",
    "glue_map",
    "in_fundamental_domain",
    "inverse_modulus",
    "is_member",
    "mobius_apply",
    "modulus",
    "parabolic_direction_scan",
    "parse_scalar",
    "rat_gcd",
    "reduce_to_domain",
    "renormalization_check",
    "saddle_connections",
    "singularity_path",
    "synthesize_parabolic",
    "trace_geodesic",
    "verify_paper",
    "verify_side_pairing",
]
