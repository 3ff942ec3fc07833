"""Toeplitz operators of a tuple, the Toeplitz projection, and the symbol correspondence.

An operator ``A`` is Toeplitz for ``(S_1, ..., S_{d-1}, P)`` when

    S_i^* A P = A S_{d-i}   (i = 1..d-1)   and   P^* A P = A.

All spaces here are computed as joint null spaces of matricized linear maps
and returned as Hilbert-Schmidt orthonormal bases.  Memory is O(n^4).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dilation import CanonicalExtension, canonical_extension
from .errors import GapTooSmall, Inconsistent, NotInCommutant, NotToeplitz
from .gamma import GammaTuple
from .matrixkit import (
    MatrixMapConstraint,
    adj,
    as_cmatrix,
    fro,
    hs_gram,
    joint_kernel,
    opnorm,
    pinv,
    span_residual,
    unvec,
    vec,
)
from .report import VerificationReport


# ---------------------------------------------------------------------------
# Toeplitz spaces
# ---------------------------------------------------------------------------


def fixed_point_constraint(P: np.ndarray) -> MatrixMapConstraint:
    n = P.shape[0]
    return MatrixMapConstraint.of((adj(P), P, 1), (np.eye(n), np.eye(n), -1))


def brown_halmos_constraints(t: GammaTuple) -> list[MatrixMapConstraint]:
    n, d = t.n, t.d
    eye = np.eye(n)
    cons = [MatrixMapConstraint.of((adj(t.s(i)), t.P, 1), (eye, t.s(d - i), -1)) for i in range(1, d)]
    cons.append(fixed_point_constraint(t.P))
    return cons


def brown_halmos_residual(t: GammaTuple, a: np.ndarray) -> float:
    """Largest Frobenius residual among the Brown-Halmos relations at ``a``."""
    return max(fro(c(a)) for c in brown_halmos_constraints(t))


@dataclass(frozen=True)
class ToeplitzBasis:
    basis: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def contains(self, a: np.ndarray, tol: float = 1e-8) -> bool:
        return span_residual(self.basis, a) <= tol * (1.0 + fro(a))

    def projection(self, a: np.ndarray) -> np.ndarray:
        """Orthogonal (Hilbert-Schmidt) projection of ``a`` onto the span."""
        out = np.zeros_like(a, dtype=complex)
        for b in self.basis:
            out = out + np.vdot(b, a) * b
        return out

    def adjoint_closure_residual(self) -> float:
        """Largest distance from ``B^*`` to the span over basis elements ``B``."""
        return max((span_residual(self.basis, adj(b)) for b in self.basis), default=0.0)

    def orthonormality_defect(self) -> float:
        g = hs_gram(self.basis)
        return fro(g - np.eye(len(self.basis)))

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        n = self.basis[0].shape[0] if self.basis else 0
        out = np.zeros((n, n), dtype=complex)
        for b in self.basis:
            out = out + complex(rng.standard_normal(), rng.standard_normal()) * b
        return out


def toeplitz_space(t: GammaTuple, tol: float | None = None) -> ToeplitzBasis:
    return ToeplitzBasis(tuple(joint_kernel(brown_halmos_constraints(t), t.n, tol)))


def toeplitz_space_p_only(P, tol: float | None = None) -> ToeplitzBasis:
    P = as_cmatrix(P, "P")
    return ToeplitzBasis(tuple(joint_kernel([fixed_point_constraint(P)], P.shape[0], tol)))


# ---------------------------------------------------------------------------
# Toeplitz projection
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ToeplitzProjection:
    """Matricized idempotent onto the fixed points of ``A -> P^* A P``.

    ``spectral_gap`` is the distance from 1 to the nearest eigenvalue of the
    conjugation map outside its fixed space (2.0 when there is none).
    """

    P: np.ndarray
    phi_mat: np.ndarray
    spectral_gap: float

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return unvec(self.phi_mat @ vec(x), self.n)

    def choi(self) -> np.ndarray:
        """``sum_{a,b} E_ab (x) Phi(E_ab)``."""
        n = self.n
        # column a + b n of phi_mat is vec(Phi(E_ab)); entry (i, j) sits at row i + j n
        t = self.phi_mat.reshape(n, n, n, n, order="F")  # [i, j, a, b]
        return t.transpose(2, 0, 3, 1).reshape(n * n, n * n)

    def idempotence_residual(self) -> float:
        return opnorm(self.phi_mat @ self.phi_mat - self.phi_mat)

    def choi_min_eigenvalue(self) -> float:
        c = self.choi()
        return float(np.linalg.eigvalsh(0.5 * (c + adj(c)))[0])


def conjugation_matrix(P: np.ndarray) -> np.ndarray:
    """Matrix of ``A -> P^* A P`` acting on column-stacked vectors."""
    return np.kron(P.T, adj(P))


def toeplitz_projection(P, tol: float = 1e-8) -> ToeplitzProjection:
    """Spectral projection of ``A -> P^* A P`` at the eigenvalue 1.

    Built as ``N (M^* N)^{-1} M^*`` from bases of the right fixed space ``N``
    and the left fixed space ``M`` (fixed points of ``A -> P A P^*``).  The map
    is a contraction, so the eigenvalue 1 is semisimple and this equals the
    limit of the Cesaro means of its powers.

    Raises:
        GapTooSmall: another eigenvalue sits within ``tol`` of 1.
    """
    P = as_cmatrix(P, "P")
    n = P.shape[0]
    right = [vec(b) for b in joint_kernel([fixed_point_constraint(P)], n)]
    left = [vec(b) for b in joint_kernel([fixed_point_constraint(adj(P))], n)]
    psi = conjugation_matrix(P)
    k = len(right)
    if len(left) != k:
        raise GapTooSmall(f"left and right fixed spaces differ in dimension ({len(left)} vs {k})")
    if k == 0:
        phi = np.zeros((n * n, n * n), dtype=complex)
    else:
        N = np.column_stack(right)
        M = np.column_stack(left)
        phi = N @ np.linalg.solve(adj(M) @ N, adj(M))
    mu = np.linalg.eigvals(psi)
    dist = np.sort(np.abs(mu - 1.0))
    gap = float(dist[k]) if k < dist.size else 2.0
    if gap < tol:
        raise GapTooSmall(f"spectral gap {gap:.3e} below {tol:.1e}")
    return ToeplitzProjection(P, phi, gap)


def cesaro_projection(P: np.ndarray, terms: int) -> np.ndarray:
    """Average of the first ``terms`` powers of the conjugation map (an independent route to Phi)."""
    psi = conjugation_matrix(as_cmatrix(P, "P"))
    acc = np.zeros_like(psi)
    cur = np.eye(psi.shape[0], dtype=complex)
    for _ in range(terms):
        acc += cur
        cur = psi @ cur
    return acc / terms


def choi_effros_check(
    phi: ToeplitzProjection, trials: int = 50, seed: int = 0, tol: float = 1e-8
) -> VerificationReport:
    """Check the three-way identity ``Phi(Phi(X) Y) = Phi(X Phi(Y)) = Phi(Phi(X) Phi(Y))``
    on random pairs, and ``Phi(A X B) = A Phi(X) B`` for ``A = c P^{*k}``, ``B = c' P^m``.
    """
    rng = np.random.default_rng(seed)
    n = phi.n
    rep = VerificationReport(tolerances={"choi_effros": tol})

    def rand():
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

    worst = 0.0
    pairs = [(np.eye(n), np.eye(n)), (rand(), np.zeros((n, n)))]
    pairs += [(rand(), rand()) for _ in range(trials)]
    for x, y in pairs:
        px, py = phi(x), phi(y)
        a, b, c = phi(px @ y), phi(x @ py), phi(px @ py)
        scale = (1.0 + fro(x)) * (1.0 + fro(y))
        worst = max(worst, max(fro(a - b), fro(a - c), fro(b - c)) / scale)
    rep.check("choi_effros_identities", worst, tol, pairs=len(pairs))

    worst = 0.0
    P = phi.P
    for k in range(3):
        for m in range(3):
            A = complex(rng.standard_normal(), rng.standard_normal()) * np.linalg.matrix_power(adj(P), k)
            B = complex(rng.standard_normal(), rng.standard_normal()) * np.linalg.matrix_power(P, m)
            x = rand()
            lhs, rhs = phi(A @ x @ B), A @ phi(x) @ B
            worst = max(worst, fro(lhs - rhs) / ((1.0 + fro(x)) * (1.0 + fro(A)) * (1.0 + fro(B))))
    rep.check("module_property", worst, tol)
    return rep


# ---------------------------------------------------------------------------
# commutants and the symbol correspondence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommutantBasis(ToeplitzBasis):
    """HS-orthonormal basis of the matrices commuting with a tuple."""


def commutant(tuple_matrices: Sequence[np.ndarray], tol: float | None = None) -> CommutantBasis:
    mats = [as_cmatrix(m) for m in tuple_matrices]
    n = mats[0].shape[0]
    eye = np.eye(n)
    cons = [MatrixMapConstraint.of((m, eye, 1), (eye, m, -1)) for m in mats]
    return CommutantBasis(tuple(joint_kernel(cons, n, tol)))


def commutator_residual(x: np.ndarray, mats: Sequence[np.ndarray]) -> float:
    """Largest ``||X M - M X||_F / ((1 + ||X||)(1 + ||M||))`` over the tuple."""
    nx = opnorm(x)
    return max(fro(x @ m - m @ x) / ((1.0 + nx) * (1.0 + opnorm(m))) for m in mats)


def rho(ext: CanonicalExtension, Y: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """``J^* Y J`` for ``Y`` in the commutant of the extended tuple."""
    Y = as_cmatrix(Y, "Y")
    if commutator_residual(Y, ext.members) > tol:
        raise NotInCommutant("Y does not commute with the extended tuple")
    return adj(ext.J) @ Y @ ext.J


def toeplitz_symbol(
    ext: CanonicalExtension, A: np.ndarray, tol: float = 1e-8, cbasis: CommutantBasis | None = None
) -> np.ndarray:
    """The commutant element ``Y`` with ``J^* Y J = A``.

    Solved in coordinates of an HS basis of the commutant of ``(R, U)``.

    Raises:
        NotToeplitz: ``A`` violates the Brown-Halmos relations.
        Inconsistent: no commutant element compresses to ``A``.
    """
    A = as_cmatrix(A, "A")
    t = ext.source
    scale = (1.0 + fro(A)) * ext.scale()
    if brown_halmos_residual(t, A) > tol * scale:
        raise NotToeplitz(f"Brown-Halmos residual {brown_halmos_residual(t, A):.3e}")
    cbasis = cbasis or commutant(ext.members)
    if not len(cbasis):
        if fro(A) > tol:
            raise Inconsistent("commutant is trivial but A is non-zero")
        return np.zeros((ext.r, ext.r), dtype=complex)
    J = ext.J
    cols = np.column_stack([vec(adj(J) @ c @ J) for c in cbasis])
    coef, *_ = np.linalg.lstsq(cols, vec(A), rcond=None)
    Y = sum(c * b for c, b in zip(coef, cbasis))
    miss = fro(adj(J) @ Y @ J - A)
    if miss > tol * (1.0 + fro(A)):
        raise Inconsistent(f"symbol equation residual {miss:.3e}")
    return Y


def theta(
    ext: CanonicalExtension, X: np.ndarray, tol: float = 1e-8, cbasis: CommutantBasis | None = None
) -> np.ndarray:
    """The commutant element ``Y`` with ``Y J = J X`` for ``X`` commuting with the source tuple.

    Raises:
        NotInCommutant: ``X`` does not commute with the source tuple.
        Inconsistent: the solution of ``Y J = J X`` misses the equation or the commutant.
    """
    X = as_cmatrix(X, "X")
    if commutator_residual(X, ext.source.members) > tol:
        raise NotInCommutant("X does not commute with the source tuple")
    J = ext.J
    Y = J @ X @ pinv(J, 1e-12)
    scale = 1.0 + opnorm(X)
    miss = fro(Y @ J - J @ X)
    if miss > tol * scale * ext.scale():
        raise Inconsistent(f"intertwining residual {miss:.3e}")
    cbasis = cbasis or commutant(ext.members)
    off = span_residual(cbasis.basis, Y)
    if off > tol * (1.0 + fro(Y)):
        raise Inconsistent(f"solution leaves the commutant by {off:.3e}")
    return Y


def amplify(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    return np.block([list(row) for row in blocks])


def verify_theorem2(
    t: GammaTuple, tol: float = 1e-7, samples: int = 20, amp_samples: int = 5, amp_tol: float = 1e-6, seed: int = 0
) -> VerificationReport:
    """Dimension match, surjectivity and isometry of ``rho``, and the round trip through the symbol map."""
    rep = VerificationReport(digest=t.digest(), tolerances={"tol": tol, "amplification": amp_tol})
    rng = np.random.default_rng(seed)
    with rep.timed("thm2"):
        ext = canonical_extension(t)
        cb = commutant(ext.members)
        tb = toeplitz_space(t)
        rep.add("dimension_match", cb.dim == tb.dim, abs(cb.dim - tb.dim), commutant=cb.dim, toeplitz=tb.dim)

        images = [adj(ext.J) @ c @ ext.J for c in cb]
        outside = max((span_residual(tb.basis, im) for im in images), default=0.0)
        rep.check("rho_lands_in_toeplitz", outside, tol)
        rank = np.linalg.matrix_rank(np.column_stack([vec(im) for im in images]), tol=1e-8) if images else 0
        rep.add("rho_surjective", rank == tb.dim, abs(rank - tb.dim), rank=int(rank))

        worst = 0.0
        for _ in range(samples):
            y = cb.random_element(rng)
            worst = max(worst, abs(opnorm(rho(ext, y)) - opnorm(y)) / (1.0 + opnorm(y)))
        rep.check("rho_isometric", worst, tol, samples=samples)

        worst = 0.0
        J2 = np.kron(np.eye(2), ext.J)
        for _ in range(amp_samples):
            ys = [[cb.random_element(rng) for _ in range(2)] for _ in range(2)]
            big = amplify(ys)
            img = adj(J2) @ big @ J2
            worst = max(worst, abs(opnorm(img) - opnorm(big)) / (1.0 + opnorm(big)))
        rep.check("rho_2x2_isometric", worst, amp_tol, samples=amp_samples)

        worst = 0.0
        trial = list(cb) + [cb.random_element(rng) for _ in range(samples)]
        for y in trial:
            back = toeplitz_symbol(ext, rho(ext, y), tol, cbasis=cb)
            worst = max(worst, fro(back - y) / (1.0 + fro(y)))
        rep.check("symbol_round_trip", worst, tol, samples=len(trial))

        rep.check("toeplitz_adjoint_closed", tb.adjoint_closure_residual(), tol)
    return rep
