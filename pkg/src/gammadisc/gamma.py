"""Points of the symmetrized polydisc and commuting operator tuples over it.

A tuple ``(S_1, ..., S_{d-1}, P)`` is stored as a :class:`GammaTuple`.  Whether
the symmetrized polydisc really is a spectral set for it cannot be decided by
finitely many checks once ``d >= 3``, so every tuple carries a certificate:
``CONSTRUCTED`` tuples come from a generator that is sound by construction,
anything else is ``NECESSARY_CHECKS_ONLY``.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import schur
from scipy.stats import unitary_group

from .errors import (
    JointDiagonalizationFailure,
    NotCommuting,
    NotContractive,
    NotNormal,
    UnsupportedKind,
)
from .matrixkit import adj, as_cmatrix, fro, opnorm, poly_roots_max_modulus

MEMBERSHIP_TOL = 1e-8
TUPLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------


def elementary_symmetric(z: Sequence[complex]) -> list[complex]:
    """``[e_1(z), ..., e_d(z)]``."""
    e = [1.0 + 0j] + [0j] * len(z)
    for x in z:
        for k in range(len(z), 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e[1:]


def gamma_constants(d: int) -> tuple[float, ...]:
    """The scalings ``(d - j) / d`` for ``j = 1, ..., d-1``."""
    return tuple((d - j) / d for j in range(1, d))


@dataclass(frozen=True)
class GammaPoint:
    """``(s_1, ..., s_{d-1}, p)``; ``d = 1`` is allowed and means the closed disc."""

    s: tuple[complex, ...]
    p: complex

    def __init__(self, s: Sequence[complex], p: complex):
        object.__setattr__(self, "s", tuple(complex(x) for x in s))
        object.__setattr__(self, "p", complex(p))

    @property
    def d(self) -> int:
        return len(self.s) + 1

    @classmethod
    def symmetrization(cls, z: Sequence[complex]) -> "GammaPoint":
        e = elementary_symmetric(z)
        return cls(e[:-1], e[-1])

    def polynomial_coeffs(self) -> list[complex]:
        """Lower coefficients of ``z^d - s_1 z^{d-1} + s_2 z^{d-2} - ... + (-1)^d p``."""
        vals = list(self.s) + [self.p]
        return [(-1) ** k * v for k, v in enumerate(vals, start=1)]

    def max_root_modulus(self) -> float:
        return poly_roots_max_modulus(self.polynomial_coeffs())

    def conjugate(self) -> "GammaPoint":
        return GammaPoint([x.conjugate() for x in self.s], self.p.conjugate())


def point_in_gamma(pt: GammaPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    return pt.max_root_modulus() <= 1.0 + tol


def point_in_boundary(pt: GammaPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    return point_in_gamma(pt, tol) and abs(abs(pt.p) - 1.0) <= tol


# ---------------------------------------------------------------------------
# tuples
# ---------------------------------------------------------------------------


class Certificate(enum.Enum):
    CONSTRUCTED = "constructed"
    NECESSARY_CHECKS_ONLY = "necessary_checks_only"


def _max_commutator(mats: Sequence[np.ndarray]) -> float:
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, fro(mats[i] @ mats[j] - mats[j] @ mats[i]))
    return worst


@dataclass(frozen=True, eq=False)
class GammaTuple:
    """A commuting tuple ``(S_1, ..., S_{d-1}, P)`` of n x n matrices.

    Construction checks commutativity and ``||P|| <= 1`` (both up to ``TUPLE_TOL``
    scaled by the operand norms) and raises :class:`NotCommuting` or
    :class:`NotContractive` otherwise.
    """

    S: tuple[np.ndarray, ...]
    P: np.ndarray
    certificate: Certificate = Certificate.NECESSARY_CHECKS_ONLY
    source: str = ""
    tol: float = field(default=TUPLE_TOL, repr=False)

    def __post_init__(self):
        S = tuple(as_cmatrix(x, f"S_{i + 1}") for i, x in enumerate(self.S))
        P = as_cmatrix(self.P, "P")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "P", P)
        if not S:
            raise ValueError("need d >= 2, i.e. at least one S_i")
        n = P.shape[0]
        for m in S + (P,):
            if m.shape != (n, n):
                raise ValueError(f"all members must be {n}x{n}, got {m.shape}")
        for m in S + (P,):
            m.setflags(write=False)
        scale = 1.0 + max(opnorm(m) for m in self.members)
        comm = _max_commutator(self.members)
        if comm > self.tol * scale:
            raise NotCommuting(f"commutator norm {comm:.3e} exceeds {self.tol:.1e} * {scale:.3g}")
        if opnorm(P) > 1.0 + self.tol:
            raise NotContractive(f"||P|| = {opnorm(P):.12g} > 1")

    @property
    def d(self) -> int:
        return len(self.S) + 1

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def members(self) -> tuple[np.ndarray, ...]:
        return self.S + (self.P,)

    def s(self, i: int) -> np.ndarray:
        """``S_i`` with 1-based indexing, matching the usual notation."""
        return self.S[i - 1]

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.d}:{self.n}:".encode())
        for m in self.members:
            h.update(np.ascontiguousarray(m).tobytes())
        return h.hexdigest()[:16]

    def polynomial(self, exponents: Sequence[int]) -> np.ndarray:
        """The monomial ``S_1^{a_1} ... S_{d-1}^{a_{d-1}} P^{a_d}``."""
        out = np.eye(self.n, dtype=complex)
        for m, a in zip(self.members, exponents):
            out = out @ np.linalg.matrix_power(m, int(a))
        return out


# ---------------------------------------------------------------------------
# joint spectrum
# ---------------------------------------------------------------------------


def joint_eigenvalues(
    mats: Sequence[np.ndarray], tol: float = 1e-8, attempts: int = 4
) -> tuple[np.ndarray, float]:
    """Joint eigenvalues of commuting matrices by simultaneous triangularization.

    A random real combination of the members is Schur-decomposed; its Schur
    basis triangularizes every member when the combination separates the joint
    eigenvalues.  Returns ``(values, residual)`` with ``values[k]`` the k-th
    joint eigenvalue (one column per member) and ``residual`` the largest
    strictly-lower-triangular mass left in any member.

    Raises:
        JointDiagonalizationFailure: the members do not commute within ``tol``,
            or no attempt triangularized them.
    """
    mats = [as_cmatrix(m) for m in mats]
    scale = 1.0 + max(opnorm(m) for m in mats)
    comm = _max_commutator(mats)
    if comm > tol * scale:
        raise JointDiagonalizationFailure(f"members do not commute (residual {comm:.3e})")
    rng = np.random.default_rng(20240917)
    best = None
    for _ in range(attempts):
        coef = rng.standard_normal(len(mats))
        combo = sum(c * m for c, m in zip(coef, mats))
        _, z = schur(combo, output="complex")
        tri = [adj(z) @ m @ z for m in mats]
        resid = max(fro(np.tril(t, -1)) for t in tri)
        vals = np.column_stack([np.diag(t) for t in tri])
        if best is None or resid < best[1]:
            best = (vals, resid)
        if resid <= tol * scale:
            break
    if best[1] > np.sqrt(tol) * scale:
        raise JointDiagonalizationFailure(f"triangularization residual {best[1]:.3e}")
    return best


def joint_points(t: GammaTuple, tol: float = 1e-8) -> list[GammaPoint]:
    vals, _ = joint_eigenvalues(t.members, tol)
    return [GammaPoint(row[:-1], row[-1]) for row in vals]


def normal_defect(m: np.ndarray) -> float:
    return fro(m @ adj(m) - adj(m) @ m)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def symmetrize(mats: Sequence[np.ndarray]) -> tuple[list[np.ndarray], np.ndarray]:
    """Elementary symmetric polynomials of commuting matrices, ``(S list, P)``."""
    n = mats[0].shape[0]
    e = [np.eye(n, dtype=complex)] + [np.zeros((n, n), dtype=complex) for _ in mats]
    for t in mats:
        for k in range(len(mats), 0, -1):
            e[k] = e[k] + e[k - 1] @ t
    return e[1:-1], e[-1]


def symmetrize_commuting_normals(
    T: Sequence[np.ndarray], tol: float = TUPLE_TOL, source: str = "symmetrized normals"
) -> GammaTuple:
    """Symmetrize ``d`` commuting normal contractions into a certified tuple."""
    T = [as_cmatrix(t) for t in T]
    if len(T) < 2:
        raise ValueError("need at least two matrices")
    scale = 1.0 + max(opnorm(t) for t in T)
    if _max_commutator(T) > tol * scale:
        raise NotCommuting("input matrices do not commute")
    for k, t in enumerate(T):
        if normal_defect(t) > tol * scale:
            raise NotNormal(f"T_{k + 1} is not normal")
        if opnorm(t) > 1.0 + tol:
            raise NotContractive(f"||T_{k + 1}|| = {opnorm(t):.12g} > 1")
    S, P = symmetrize(T)
    return GammaTuple(tuple(S), P, Certificate.CONSTRUCTED, source)


class Kind(str, enum.Enum):
    NORMAL_BOUNDARY = "NormalBoundary"
    NORMAL_INTERIOR = "NormalInterior"
    MIXED_PURITY = "MixedPurity"
    ANDO2 = "Ando2"


# strictly-contractive pieces keep their moduli at or below this, so that
# P^n decays fast enough for the doubling iteration and rank decisions
INTERIOR_RADIUS = 0.95


def _haar(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(n, random_state=rng)


def _normal_members(d: int, n: int, rng: np.random.Generator, boundary: bool) -> list[np.ndarray]:
    w = _haar(n, rng)
    angles = rng.uniform(0.0, 2 * np.pi, size=(d, n))
    radii = np.ones((d, n)) if boundary else rng.uniform(0.0, INTERIOR_RADIUS, size=(d, n))
    diag = radii * np.exp(1j * angles)
    return [w @ np.diag(row) @ adj(w) for row in diag]


def _single_contraction_members(d: int, m: int, rng: np.random.Generator) -> list[np.ndarray]:
    """``c_k T^{a_k}`` for one non-normal strict contraction ``T``.

    Symmetrizing holomorphic self-maps of the disc applied to a single
    contraction gives a genuine tuple by von Neumann's inequality.
    """
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    t = np.triu(g)
    t *= rng.uniform(0.5, 0.9) / opnorm(t)
    out = []
    for _ in range(d):
        c = rng.uniform(0.6, 1.0) * np.exp(2j * np.pi * rng.random())
        out.append(c * np.linalg.matrix_power(t, int(rng.integers(1, 3))))
    return out


def random_gamma_tuple(d: int, n: int, kind: Kind | str, seed: int) -> GammaTuple:
    """Seeded random tuple of a generator class that is sound by construction.

    ``NormalBoundary``
        conjugated diagonal symmetrizations of unimodular points.
    ``NormalInterior``
        the same with moduli drawn in ``[0, 0.95)``.
    ``MixedPurity``
        a boundary block plus a non-normal strictly contractive block, mixed
        by a Haar unitary; needs ``n >= 2``.
    ``Ando2``
        symmetrization of a commuting, non-normal pair of strict contractions
        (``d = 2`` only).
    """
    kind = Kind(kind)
    if d < 2 or n < 1:
        raise ValueError(f"need d >= 2 and n >= 1, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    src = f"{kind.value}(d={d}, n={n}, seed={seed})"
    if kind in (Kind.NORMAL_BOUNDARY, Kind.NORMAL_INTERIOR):
        mats = _normal_members(d, n, rng, boundary=kind is Kind.NORMAL_BOUNDARY)
    elif kind is Kind.MIXED_PURITY:
        if n < 2:
            raise UnsupportedKind("MixedPurity needs n >= 2")
        b = int(rng.integers(1, n))
        top = [np.diag(np.exp(2j * np.pi * rng.random(b))) for _ in range(d)]
        bottom = _single_contraction_members(d, n - b, rng)
        w = _haar(n, rng)
        mats = []
        for x, y in zip(top, bottom):
            blk = np.zeros((n, n), dtype=complex)
            blk[:b, :b] = x
            blk[b:, b:] = y
            mats.append(w @ blk @ adj(w))
    else:
        if d != 2:
            raise UnsupportedKind("Ando2 is only available for d = 2")
        x = np.eye(n) + 0.4 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
        xinv = np.linalg.inv(x)
        mats = []
        for _ in range(2):
            z = rng.uniform(0, 1, n) * np.exp(2j * np.pi * rng.random(n))
            t = x @ np.diag(z) @ xinv
            mats.append(t * rng.uniform(0.5, 0.9) / max(opnorm(t), 1e-300))
    S, P = symmetrize(mats)
    return GammaTuple(tuple(S), P, Certificate.CONSTRUCTED, src)


# ---------------------------------------------------------------------------
# classifiers
# ---------------------------------------------------------------------------


def unitary_defect(t: GammaTuple) -> dict[str, float]:
    """Residuals of the algebraic conditions for a unitary tuple."""
    P = t.P
    out = {
        "normal": max(normal_defect(m) for m in t.members),
        "p_unitary": fro(adj(P) @ P - np.eye(t.n)),
        "symmetry": 0.0,
    }
    for i in range(1, t.d):
        out["symmetry"] = max(out["symmetry"], fro(t.s(i) - adj(t.s(t.d - i)) @ P))
    return out


def classify_gamma_unitary(t: GammaTuple, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff ``t`` is a unitary tuple (hence, in finite dimension, an isometric one)."""
    scale = 1.0 + max(opnorm(m) for m in t.members)
    defects = unitary_defect(t)
    if max(defects.values()) > tol * scale:
        return False
    return all(point_in_boundary(pt, tol) for pt in joint_points(t, tol))


def scaled_lower_points(t: GammaTuple, tol: float = MEMBERSHIP_TOL) -> list[GammaPoint]:
    """Joint eigenvalues of ``(gamma_1 S_1, ..., gamma_{d-1} S_{d-1})`` as points of the (d-1)-set."""
    g = gamma_constants(t.d)
    vals, _ = joint_eigenvalues(t.members, tol)
    pts = []
    for row in vals:
        scaled = [gj * x for gj, x in zip(g, row[:-1])]
        pts.append(GammaPoint(scaled[:-1], scaled[-1]))
    return pts
