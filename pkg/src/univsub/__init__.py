"""Exact universality certificates for torus-invariant subspaces of classical
compact Lie group representations, with a numerical flag counter for U(n)."""

from .polyalg import Polynomial
from .weyl import Family, GroupType, RootSystemSpec, fundamental_harmonic, ideal_membership, make_root_system, root_system
from .subspaces import (
    UniversalityVerdict,
    Verdict,
    WeightMultiset,
    characteristic_number,
    characteristic_polynomial,
    shrink,
    universality_verdict,
)
from .patterns import OddPattern, PatternCertificate, ZeroPattern, certify, enumerate_patterns, validate

__version__ = "0.1.0"

__all__ = [
    "Family",
    "GroupType",
    "OddPattern",
    "PatternCertificate",
    "Polynomial",
    "RootSystemSpec",
    "UniversalityVerdict",
    "Verdict",
    "WeightMultiset",
    "ZeroPattern",
    "certify",
    "characteristic_number",
    "characteristic_polynomial",
    "enumerate_patterns",
    "fundamental_harmonic",
    "ideal_membership",
    "make_root_system",
    "root_system",
    "shrink",
    "universality_verdict",
    "validate",
]
