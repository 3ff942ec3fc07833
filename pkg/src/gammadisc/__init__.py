"""Finite-dimensional operator theory over the symmetrized polydisc.

Asymptotic limits, canonical unitary extensions, Brown-Halmos Toeplitz
spaces, the Toeplitz projection, and commutant lifting for commuting tuples
``(S_1, ..., S_{d-1}, P)`` of matrices.
"""

__version__ = "0.1.0"

from .asymptotics import AsymptoticLimit, FundamentalSet, compute_q, decay_profile, fundamental_operators, is_pure
from .dilation import (
    CanonicalExtension,
    canonical_extension,
    embedding_dominance,
    extension_isomorphism,
    verify_theorem1,
)
from .gamma import (
    Certificate,
    GammaPoint,
    GammaTuple,
    Kind,
    classify_gamma_unitary,
    gamma_constants,
    point_in_boundary,
    point_in_gamma,
    random_gamma_tuple,
    symmetrize_commuting_normals,
)
from .lifting import LiftResult, lift_commutant, lift_intertwiner
from .report import VerificationReport
from .toeplitz import (
    commutant,
    rho,
    theta,
    toeplitz_projection,
    toeplitz_space,
    toeplitz_space_p_only,
    toeplitz_symbol,
    verify_theorem2,
)

__all__ = [
    "AsymptoticLimit",
    "CanonicalExtension",
    "Certificate",
    "FundamentalSet",
    "GammaPoint",
    "GammaTuple",
    "Kind",
    "LiftResult",
    "VerificationReport",
    "canonical_extension",
    "classify_gamma_unitary",
    "commutant",
    "compute_q",
    "decay_profile",
    "embedding_dominance",
    "extension_isomorphism",
    "fundamental_operators",
    "gamma_constants",
    "is_pure",
    "lift_commutant",
    "lift_intertwiner",
    "point_in_boundary",
    "point_in_gamma",
    "random_gamma_tuple",
    "rho",
    "symmetrize_commuting_normals",
    "theta",
    "toeplitz_projection",
    "toeplitz_space",
    "toeplitz_space_p_only",
    "toeplitz_symbol",
    "verify_theorem1",
    "verify_theorem2",
]
