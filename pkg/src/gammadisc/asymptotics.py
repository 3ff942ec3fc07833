"""Asymptotic limit of ``P^{*n} P^n``, purity, decay of the symmetry defect, and
fundamental operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectFailure, IndexOutOfRange, NegativeEigenvalue, NoConvergence, NotContractive
from .gamma import GammaTuple
from .matrixkit import adj, fro, hermitian_part, opnorm, pinv, psd_sqrt

CONV_TOL = 1e-12
MAX_DOUBLINGS = 60
DEFECT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class AsymptoticLimit:
    """``Q = lim P^{*n} P^n`` together with convergence diagnostics.

    ``monotone_defect`` is the most negative eigenvalue seen in any step
    difference ``M_k - M_{k+1}``; it should be no worse than rounding noise.
    """

    Q: np.ndarray
    iterations: int
    residual: float
    monotone_defect: float

    @property
    def lambda_max(self) -> float:
        return float(np.linalg.eigvalsh(self.Q)[-1])

    def fixed_point_residual(self, P: np.ndarray) -> float:
        return fro(adj(P) @ self.Q @ P - self.Q)


def compute_q(t: GammaTuple, conv_tol: float = CONV_TOL, max_doublings: int = MAX_DOUBLINGS) -> AsymptoticLimit:
    """Strong limit of ``P^{*n} P^n`` by repeated squaring of ``P``.

    ``B_0 = P``, ``B_{k+1} = B_k^2`` and ``M_k = B_k^* B_k``; iteration stops once
    consecutive ``M_k`` differ by less than ``conv_tol`` in Frobenius norm.
    """
    return _limit(t.P, conv_tol, max_doublings)


def _limit(P: np.ndarray, conv_tol: float, max_doublings: int) -> AsymptoticLimit:
    b = P.copy()
    m = hermitian_part(adj(b) @ b)
    worst = 0.0
    residual = np.inf
    for k in range(1, max_doublings + 1):
        b = b @ b
        m_next = hermitian_part(adj(b) @ b)
        step = m - m_next
        worst = min(worst, float(np.linalg.eigvalsh(step)[0]))
        residual = fro(step)
        m = m_next
        if residual < conv_tol:
            return AsymptoticLimit(m, k, residual, worst)
    raise NoConvergence(f"residual {residual:.3e} after {max_doublings} doublings")


def is_pure(t: GammaTuple, tol: float = 1e-8, limit: AsymptoticLimit | None = None) -> bool:
    limit = limit or compute_q(t)
    return limit.lambda_max <= tol


def symmetry_defect(t: GammaTuple, i: int) -> np.ndarray:
    """``S_{d-i} - S_i^* P``."""
    if not 1 <= i <= t.d - 1:
        raise IndexOutOfRange(f"i must lie in 1..{t.d - 1}, got {i}")
    return t.s(t.d - i) - adj(t.s(i)) @ t.P


def decay_profile(t: GammaTuple, i: int, j_max: int) -> list[float]:
    """Operator norms of ``P^{*j} (S_{d-i} - S_i^* P) P^j`` for ``j = 0..j_max``."""
    x = symmetry_defect(t, i)
    P, Ps = t.P, adj(t.P)
    out = [opnorm(x)]
    for _ in range(j_max):
        x = Ps @ x @ P
        out.append(opnorm(x))
    return out


@dataclass(frozen=True)
class FundamentalSet:
    """Fundamental operators compressed to the range of the defect operator.

    ``F[i-1]`` is an m x m matrix in the coordinates given by the columns of
    ``basis`` (n x m, orthonormal, spanning Ran D_P).
    """

    F: tuple[np.ndarray, ...]
    D_P: np.ndarray
    basis: np.ndarray
    residuals: tuple[float, ...]

    def ambient(self, i: int) -> np.ndarray:
        """``F_i`` as an n x n matrix vanishing on ker D_P."""
        return self.basis @ self.F[i - 1] @ adj(self.basis)


def defect_operator(P: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    n = P.shape[0]
    try:
        return psd_sqrt(np.eye(n) - adj(P) @ P, tol)
    except NegativeEigenvalue as exc:
        raise DefectFailure(str(exc)) from exc


def fundamental_operators(t: GammaTuple, rank_tol: float = DEFECT_RANK_TOL) -> FundamentalSet:
    """Solve ``S_i - S_{d-i}^* P = D_P F_i D_P`` on Ran D_P.

    Ran D_P is decided from the eigenvalues of ``I - P^* P`` (cut at
    ``rank_tol``); the returned ``F_i`` is the minimal-norm solution.
    """
    P = t.P
    n = t.n
    if opnorm(P) > 1.0 + 1e-9:
        raise NotContractive("P is not a contraction")
    d_sq = hermitian_part(np.eye(n) - adj(P) @ P)
    w, v = np.linalg.eigh(d_sq)
    if w[0] < -1e-10:
        raise DefectFailure(f"I - P*P has eigenvalue {w[0]:.3e}")
    keep = w > rank_tol
    basis = v[:, keep]
    d_p = (v * np.sqrt(np.clip(w, 0.0, None))) @ adj(v)
    # D_P^+ restricted to the kept eigenvectors, expressed in their coordinates
    inv_root = 1.0 / np.sqrt(w[keep])
    F, res = [], []
    for i in range(1, t.d):
        g = t.s(i) - adj(t.s(t.d - i)) @ P
        f = (inv_root[:, None] * (adj(basis) @ g @ basis)) * inv_root[None, :]
        amb = basis @ f @ adj(basis)
        F.append(f)
        res.append(fro(g - d_p @ amb @ d_p))
    return FundamentalSet(tuple(F), d_p, basis, tuple(res))


def fundamental_via_pinv(t: GammaTuple, rank_tol: float = 1e-6) -> list[np.ndarray]:
    """Ambient ``pinv(D_P) (S_i - S_{d-i}^* P) pinv(D_P)``; a second route to the same F_i."""
    d_p = defect_operator(t.P)
    dp_plus = pinv(d_p, rank_tol)
    return [dp_plus @ (t.s(i) - adj(t.s(t.d - i)) @ t.P) @ dp_plus for i in range(1, t.d)]
