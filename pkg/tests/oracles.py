"""Independent oracles for the floating-point pipeline.

Nothing here calls into the library's null-space or extension code: exact
kernels use sympy over the Gaussian rationals, and the spectral oracles work
entrywise in a known joint eigenbasis.
"""

from __future__ import annotations

import itertools

import numpy as np
import sympy as sp


# ---------------------------------------------------------------------------
# exact arithmetic
# ---------------------------------------------------------------------------


def smat(rows) -> sp.Matrix:
    return sp.Matrix(rows).applyfunc(sp.nsimplify)


def exact_kernel_dim(maps, n: int) -> int:
    """Dimension of {A : f(A) = 0 for all f in maps} by brute-force symbolic elimination.

    ``maps`` are callables on sympy n x n matrices.
    """
    syms = sp.symbols(f"a0:{n * n}")
    A = sp.Matrix(n, n, syms)
    eqs = []
    for f in maps:
        eqs.extend(sp.expand(e) for e in f(A))
    if not eqs:
        return n * n
    M, _ = sp.linear_eq_to_matrix(eqs, syms)
    return n * n - M.rank(simplify=True)


def exact_toeplitz_dim(S: sp.Matrix, P: sp.Matrix) -> int:
    """d = 2 Brown-Halmos relations ``S^* A P = A S`` and ``P^* A P = A``."""
    n = P.shape[0]
    return exact_kernel_dim([lambda A: S.H * A * P - A * S, lambda A: P.H * A * P - A], n)


def exact_commutant_dim(mats) -> int:
    n = mats[0].shape[0]
    return exact_kernel_dim([lambda A, M=M: M * A - A * M for M in mats], n)


def exact_unitary_part(P: sp.Matrix) -> sp.Matrix:
    """Basis (columns) of {h : ||P^k h|| = ||h|| for all k}, i.e. Ran of the asymptotic limit."""
    n = P.shape[0]
    blocks = []
    Pk = sp.eye(n)
    for _ in range(n + 1):
        Pk = Pk * P
        blocks.append(sp.eye(n) - Pk.H * Pk)
    big = sp.Matrix.vstack(*blocks)
    null = big.nullspace(simplify=True)
    if not null:
        return sp.zeros(n, 0)
    return sp.Matrix.hstack(*null)


def exact_extension_commutant_dim(S: sp.Matrix, P: sp.Matrix) -> int:
    """Commutant dimension of the extended tuple, computed from the exact unitary part.

    Ran Q is invariant under ``S^*`` and ``P^*``; the restrictions there are
    similar to the adjoints of ``(R, U)``, and similarity preserves commutant
    dimension.
    """
    C = exact_unitary_part(P)
    r = C.shape[1]
    if r == 0:
        return 0
    left = (C.H * C).inv() * C.H
    restricted = []
    for M in (S, P):
        img = M.H * C
        coords = left * img
        if (C * coords - img).applyfunc(sp.simplify) != sp.zeros(*img.shape):
            raise AssertionError("unitary part is not invariant under the adjoint")
        restricted.append(coords)
    return exact_commutant_dim(restricted)


def to_numpy(M: sp.Matrix) -> np.ndarray:
    return np.array(M.evalf(30).tolist(), dtype=complex)


# rational commuting contraction pairs (T1, T2); S = T1 + T2, P = T1 T2
def _rot(a, b):
    return smat([[a, -b], [b, a]])


_R = _rot(sp.Rational(3, 5), sp.Rational(4, 5))
_CYC = smat([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
_H = sp.Rational(1, 2)


def _conj(M, W):
    return W * M * W.T


RATIONAL_PAIRS = {
    "diag_mixed_rotated": (_conj(sp.diag(1, _H), _R), _conj(sp.diag(1, -_H), _R)),
    "rotation_identity": (_R, sp.eye(2)),
    "cycle_square": (_CYC, _CYC**2),
    "gaussian_diag": (sp.diag(sp.I, -1, sp.Rational(1, 2)), sp.diag(1, sp.I, sp.Rational(1, 3))),
    "nilpotent_pure": (smat([[_H, _H], [0, 0]]), smat([[_H, _H], [0, 0]])),
    "unit_plus_jordan": (
        sp.diag(1, smat([[0, _H], [0, 0]])),
        sp.diag(-1, smat([[sp.Rational(1, 3), 0], [0, sp.Rational(1, 3)]])),
    ),
    "identity_pair": (sp.eye(2), sp.eye(2)),
    "scalar": (smat([[_H]]), smat([[1]])),
    "zero": (sp.zeros(3), sp.zeros(3)),
    "cycle_average": (_CYC, (sp.eye(3) + _CYC) / 2),
}


def rational_fixture(name: str) -> tuple[sp.Matrix, sp.Matrix]:
    T1, T2 = RATIONAL_PAIRS[name]
    assert (T1 * T2 - T2 * T1).applyfunc(sp.simplify) == sp.zeros(*T1.shape)
    return (T1 + T2).applyfunc(sp.expand), (T1 * T2).applyfunc(sp.expand)


# ---------------------------------------------------------------------------
# eigenbasis oracles for normal tuples
# ---------------------------------------------------------------------------


def toeplitz_dim_from_points(points: np.ndarray, tol: float = 1e-9) -> int:
    """Count index pairs (a, b) whose matrix unit satisfies the relations in a joint eigenbasis.

    ``points[k] = (s_1, ..., s_{d-1}, p)`` at the k-th joint eigenvector.  For
    a diagonal tuple the relations act entrywise:
    ``conj(s_i[a]) p[b] = s_{d-i}[b]`` and ``conj(p[a]) p[b] = 1``.
    """
    n, d = points.shape
    count = 0
    for a, b in itertools.product(range(n), repeat=2):
        pa, pb = points[a, -1], points[b, -1]
        ok = abs(np.conj(pa) * pb - 1) < tol
        for i in range(1, d):
            ok &= abs(np.conj(points[a, i - 1]) * pb - points[b, d - i - 1]) < tol
        count += bool(ok)
    return count


def commutant_dim_from_points(points: np.ndarray, tol: float = 1e-9) -> int:
    """Sum of squared multiplicities of distinct joint eigenvalues."""
    n = points.shape[0]
    return sum(
        1 for a, b in itertools.product(range(n), repeat=2) if np.linalg.norm(points[a] - points[b]) < tol
    )
