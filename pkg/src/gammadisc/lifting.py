"""Commutant lifting into the canonical extension, and its intertwining form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .asymptotics import AsymptoticLimit
from .dilation import CanonicalExtension
from .errors import Inconsistent, NotInCommutant, NotIntertwining
from .gamma import Certificate, GammaTuple
from .matrixkit import adj, fro, opnorm, pinv
from .toeplitz import commutator_residual


@dataclass(frozen=True)
class LiftResult:
    Y: np.ndarray
    norm_X: float
    norm_Y: float
    intertwine_residual: float
    commutant_residual: float


def lift_commutant(ext: CanonicalExtension, X: np.ndarray, tol: float = 1e-8) -> LiftResult:
    """Lift ``X`` commuting with the source tuple to ``Y`` commuting with ``(R, U)``.

    ``Y`` solves ``Y J = J X``; it is the compression of ``Q^{1/2} h -> Q^{1/2} X h``.

    Raises:
        NotInCommutant: ``X`` fails the scale-free commutator gate.
        Inconsistent: ``Y J = J X`` or the commutant condition is missed.
    """
    X = np.asarray(X, dtype=complex)
    if commutator_residual(X, ext.source.members) > tol:
        raise NotInCommutant("X does not commute with the source tuple")
    J = ext.J
    Y = J @ X @ pinv(J, 1e-12)
    nx, ny = opnorm(X), opnorm(Y)
    resid = fro(Y @ J - J @ X)
    comm = commutator_residual(Y, ext.members)
    if resid > tol * (1.0 + nx) * ext.scale() or comm > tol:
        raise Inconsistent(f"lift residuals: intertwining {resid:.3e}, commutant {comm:.3e}")
    return LiftResult(Y, nx, ny, resid, comm)


def direct_sum_extension(e1: CanonicalExtension, e2: CanonicalExtension) -> CanonicalExtension:
    """Canonical extension of ``S (+) S'`` assembled blockwise from the two pieces."""
    s1, s2 = e1.source, e2.source
    src = GammaTuple(
        tuple(block_diag(a, b) for a, b in zip(s1.S, s2.S)),
        block_diag(s1.P, s2.P),
        Certificate.CONSTRUCTED if s1.certificate is s2.certificate is Certificate.CONSTRUCTED
        else Certificate.NECESSARY_CHECKS_ONLY,
        f"{s1.source} (+) {s2.source}",
    )
    lim = AsymptoticLimit(
        block_diag(e1.Q, e2.Q),
        max(e1.limit.iterations, e2.limit.iterations),
        max(e1.limit.residual, e2.limit.residual),
        min(e1.limit.monotone_defect, e2.limit.monotone_defect),
    )
    return CanonicalExtension(
        src,
        lim,
        block_diag(e1.B, e2.B),
        block_diag(e1.J, e2.J),
        tuple(block_diag(a, b) for a, b in zip(e1.R, e2.R)),
        block_diag(e1.U, e2.U),
        block_diag(e1.Qhalf, e2.Qhalf),
    )


def lift_intertwiner(
    ext: CanonicalExtension, ext2: CanonicalExtension, X: np.ndarray, tol: float = 1e-8
) -> LiftResult:
    """Lift ``X`` with ``X S_i = S'_i X``, ``X P = P' X`` to ``Y: K -> K'`` with ``Y J = J' X``.

    The 2x2 operator matrix ``[[0, 0], [X, 0]]`` commutes with ``S (+) S'``;
    its lift to the direct-sum extension has ``Y`` in the lower-left corner.
    """
    X = np.asarray(X, dtype=complex)
    s1, s2 = ext.source, ext2.source
    if X.shape != (s2.n, s1.n) or s1.d != s2.d:
        raise NotIntertwining(f"X has shape {X.shape}, expected {(s2.n, s1.n)}")
    nx = opnorm(X)
    worst = max(
        fro(X @ a - b @ X) / ((1.0 + nx) * (1.0 + max(opnorm(a), opnorm(b))))
        for a, b in zip(s1.members, s2.members)
    )
    if worst > tol:
        raise NotIntertwining(f"intertwining residual {worst:.3e}")
    big = direct_sum_extension(ext, ext2)
    n1 = s1.n
    Xbig = np.zeros((n1 + s2.n, n1 + s2.n), dtype=complex)
    Xbig[n1:, :n1] = X
    lifted = lift_commutant(big, Xbig, tol)
    r1 = ext.r
    Y = lifted.Y[r1:, :r1]
    resid = fro(Y @ ext.J - ext2.J @ X)
    comm = max(fro(Y @ a - b @ Y) for a, b in zip(ext.members, ext2.members))
    return LiftResult(Y, nx, opnorm(Y), resid, comm)
