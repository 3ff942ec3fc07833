"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_cmatrix` is the single validating entry point.  Vectorization is
column-stacking throughout, so that ``vec(L @ A @ R) == kron(R.T, L) @ vec(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyCoefficients, NegativeEigenvalue, NotHermitian

EPS = np.finfo(float).eps


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex128 array (scalars become 1x1)."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def adj(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def opnorm(m: np.ndarray) -> float:
    """Operator (largest singular value) norm; 0 for empty matrices."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def fro(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    return np.asarray(v).reshape(rows, rows if cols is None else cols, order="F")


def hermitian_defect(m: np.ndarray) -> float:
    return fro(m - adj(m))


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return hermitian_defect(m) <= tol * (1.0 + fro(m))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + adj(m))


def psd_sqrt(m, tol: float = 1e-10) -> np.ndarray:
    """Hermitian positive square root.

    Eigenvalues in ``[-tol * max(1, |lambda|_max), 0)`` are clamped to zero.

    Raises:
        NotHermitian: ``m`` is not Hermitian within ``tol``.
        NegativeEigenvalue: an eigenvalue lies below the clamping window.
    """
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"psd_sqrt needs a square matrix, got {m.shape}")
    if not is_hermitian(m, tol):
        raise NotHermitian(f"Hermitian defect {hermitian_defect(m):.3e} exceeds tolerance")
    w, v = np.linalg.eigh(hermitian_part(m))
    scale = max(1.0, float(np.max(np.abs(w))))
    if w.min() < -tol * scale:
        raise NegativeEigenvalue(f"eigenvalue {w.min():.3e} below -{tol:.1e}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ adj(v)
    return hermitian_part(root)


def pinv(m, rank_tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose pseudoinverse, cutting singular values below ``rank_tol * sigma_max``."""
    m = as_cmatrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    out = np.zeros((m.shape[1], m.shape[0]), dtype=complex)
    if s.size == 0 or s[0] == 0.0:
        return out
    keep = s > rank_tol * s[0]
    return (adj(vh[keep]) / s[keep]) @ adj(u[:, keep])


def penrose_residuals(m: np.ndarray, g: np.ndarray) -> tuple[float, float, float, float]:
    """Relative residuals of the four Penrose identities for a candidate ``g = m^+``."""
    mg, gm = m @ g, g @ m
    sm, sg = 1.0 + fro(m), 1.0 + fro(g)
    return (
        fro(mg @ m - m) / sm,
        fro(gm @ g - g) / sg,
        fro(mg - adj(mg)) / (1.0 + fro(mg)),
        fro(gm - adj(gm)) / (1.0 + fro(gm)),
    )


def orthonormal_range(m: np.ndarray, rel_tol: float) -> np.ndarray:
    """Orthonormal basis (as columns) for the numerical range of ``m``."""
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    return u[:, s > rel_tol * s[0]]


def polar_unitary(m: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition of a square matrix."""
    u, _, vh = np.linalg.svd(m)
    return u @ vh


@dataclass(frozen=True)
class MatrixMapConstraint:
    """The linear map ``A -> sum(sign * L @ A @ R)`` on square matrices.

    ``terms`` holds ``(L, R, sign)`` triples.  All left factors share a shape,
    as do all right factors.
    """

    terms: tuple[tuple[np.ndarray, np.ndarray, int], ...]

    def __post_init__(self):
        if not self.terms:
            raise DimensionMismatch("constraint needs at least one term")
        fixed = []
        for left, right, sign in self.terms:
            if sign not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {sign}")
            fixed.append((as_cmatrix(left, "L"), as_cmatrix(right, "R"), int(sign)))
        lshape, rshape = fixed[0][0].shape, fixed[0][1].shape
        for left, right, _ in fixed:
            if left.shape != lshape or right.shape != rshape:
                raise DimensionMismatch("constraint terms disagree in shape")
        object.__setattr__(self, "terms", tuple(fixed))

    @classmethod
    def of(cls, *terms) -> "MatrixMapConstraint":
        return cls(tuple(terms))

    @property
    def in_shape(self) -> tuple[int, int]:
        left, right, _ = self.terms[0]
        return left.shape[1], right.shape[0]

    @property
    def out_shape(self) -> tuple[int, int]:
        left, right, _ = self.terms[0]
        return left.shape[0], right.shape[1]

    def __call__(self, a: np.ndarray) -> np.ndarray:
        return sum(sign * (left @ a @ right) for left, right, sign in self.terms)

    def term_scale(self) -> float:
        """Largest ``||L|| ||R||`` over the terms."""
        return max(opnorm(left) * opnorm(right) for left, right, _ in self.terms)

    def matricize(self) -> np.ndarray:
        return sum(sign * np.kron(right.T, left) for left, right, sign in self.terms)


def default_null_tol(n: int) -> float:
    return n * n * EPS * 64


def joint_kernel(
    constraints: Sequence[MatrixMapConstraint], n: int, tol: float | None = None
) -> list[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of the n x n matrices killed by every constraint.

    The constraints are matricized, stacked, and the right singular vectors whose
    singular values fall below ``tol * scale`` span the kernel.  ``scale`` is the
    larger of ``sigma_max`` and the size of the individual terms before they
    cancel, so a system that cancels down to rounding noise counts as zero.  An
    all-zero system has the whole space as kernel.
    """
    if tol is None:
        tol = default_null_tol(n)
    blocks = []
    term_scale = 0.0
    for c in constraints:
        if c.in_shape != (n, n):
            raise DimensionMismatch(f"constraint acts on {c.in_shape}, expected {(n, n)}")
        blocks.append(c.matricize())
        term_scale = max(term_scale, c.term_scale())
    if not blocks:
        return [unvec(e, n) for e in np.eye(n * n, dtype=complex)]
    big = np.vstack(blocks)
    _, s, vh = np.linalg.svd(big, full_matrices=True)
    scale = max(s[0] if s.size else 0.0, term_scale)
    # rows of vh past len(s) have implicit singular value zero
    sv = np.zeros(n * n)
    sv[: s.size] = s
    null = sv <= tol * scale if scale > 0 else np.ones(n * n, dtype=bool)
    return [unvec(row.conj(), n) for row in vh[null]]


def span_residual(basis: Sequence[np.ndarray], a: np.ndarray) -> float:
    """Frobenius distance from ``a`` to the span of an HS-orthonormal basis."""
    if not basis:
        return fro(a)
    mat = np.column_stack([vec(b) for b in basis])
    v = vec(a)
    return float(np.linalg.norm(v - mat @ (adj(mat) @ v)))


def hs_gram(basis: Sequence[np.ndarray]) -> np.ndarray:
    if not basis:
        return np.zeros((0, 0), dtype=complex)
    mat = np.column_stack([vec(b) for b in basis])
    return adj(mat) @ mat


def companion(coeffs: Sequence[complex]) -> np.ndarray:
    """Companion matrix of ``z^d + c_{d-1} z^{d-1} + ... + c_0`` with coeffs ``(c_{d-1}, ..., c_0)``."""
    c = np.asarray(coeffs, dtype=complex)
    d = c.size
    comp = np.zeros((d, d), dtype=complex)
    comp[0, :] = -c
    if d > 1:
        comp[1:, :-1] = np.eye(d - 1)
    return comp


def poly_roots_max_modulus(coeffs: Sequence[complex]) -> float:
    """Largest root modulus of the monic polynomial with lower coefficients ``coeffs``."""
    if len(coeffs) == 0:
        raise EmptyCoefficients("need at least one coefficient")
    return float(np.max(np.abs(np.linalg.eigvals(companion(coeffs)))))
