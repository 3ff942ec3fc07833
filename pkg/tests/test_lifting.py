import numpy as np
import pytest

from gammadisc import GammaTuple, canonical_extension, commutant, lift_commutant, lift_intertwiner, random_gamma_tuple, theta
from gammadisc.errors import NotInCommutant, NotIntertwining
from gammadisc.gamma import Certificate
from gammadisc.matrixkit import adj, fro, opnorm

from conftest import crandn


def rotated_copy(t, W):
    return GammaTuple(tuple(W @ s @ adj(W) for s in t.S), W @ t.P @ adj(W), Certificate.CONSTRUCTED, "rotated")


def haar(n, seed):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(crandn(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def ext(mixed4):
    return canonical_extension(mixed4)


def test_identity(ext):
    res = lift_commutant(ext, np.eye(4))
    np.testing.assert_allclose(res.Y, np.eye(ext.r), atol=1e-10)
    assert res.norm_X == pytest.approx(1) and res.norm_Y == pytest.approx(1)


def test_scalar(ext):
    res = lift_commutant(ext, (0.3 - 2j) * np.eye(4))
    np.testing.assert_allclose(res.Y, (0.3 - 2j) * np.eye(ext.r), atol=1e-10)


def test_polynomial(ext):
    t = ext.source
    X = t.polynomial([1, 0, 2]) - 0.7 * t.s(2)
    res = lift_commutant(ext, X)
    R1, R2, U = ext.members
    assert fro(res.Y - (R1 @ U @ U - 0.7 * R2)) < 1e-8
    assert res.norm_Y <= res.norm_X + 1e-9 * (1 + res.norm_X)


def test_rejects_non_commuting(ext, rng):
    with pytest.raises(NotInCommutant):
        lift_commutant(ext, crandn(rng, 4, 4))


@pytest.mark.parametrize("seed", range(10))
def test_random_commutant_elements(seed):
    kind = "MixedPurity" if seed % 2 else "NormalBoundary"
    t = random_gamma_tuple(2 + seed % 3, 3 + seed % 6, kind, seed)
    ext = canonical_extension(t)
    cb = commutant(t.members)
    rng = np.random.default_rng(seed)
    for _ in range(10):
        X = cb.random_element(rng)
        res = lift_commutant(ext, X)
        assert res.norm_Y <= res.norm_X + 1e-9 * (1 + res.norm_X)
        assert res.intertwine_residual < 1e-8 * (1 + res.norm_X)
        assert fro(res.Y - theta(ext, X)) < 1e-8 * (1 + res.norm_X)


def test_functoriality(ext, rng):
    cb = commutant(ext.source.members)
    for _ in range(5):
        x1, x2 = cb.random_element(rng), cb.random_element(rng)
        lhs = lift_commutant(ext, x1 @ x2).Y
        rhs = lift_commutant(ext, x1).Y @ lift_commutant(ext, x2).Y
        assert fro(lhs - rhs) < 1e-7 * (1 + fro(lhs))


class TestIntertwiner:
    def test_same_identity(self, ext):
        res = lift_intertwiner(ext, ext, np.eye(4))
        np.testing.assert_allclose(res.Y, np.eye(ext.r), atol=1e-10)

    def test_zero(self, ext):
        res = lift_intertwiner(ext, ext, np.zeros((4, 4)))
        assert np.abs(res.Y).max() < 1e-14

    @pytest.mark.parametrize("seed", range(5))
    def test_rotated_copy(self, seed):
        t = random_gamma_tuple(2 + seed % 3, 3 + seed, "MixedPurity", seed)
        W = haar(t.n, 100 + seed)
        e1 = canonical_extension(t)
        e2 = canonical_extension(rotated_copy(t, W))
        res = lift_intertwiner(e1, e2, W)
        assert res.norm_Y == pytest.approx(1.0, abs=1e-9)
        assert fro(res.Y @ e1.J - e2.J @ W) < 1e-8
        for a, b in zip(e1.members, e2.members):
            assert fro(res.Y @ a - b @ res.Y) < 1e-8

    def test_rejects_non_intertwiner(self, ext, rng):
        with pytest.raises(NotIntertwining):
            lift_intertwiner(ext, ext, crandn(rng, 4, 4))

    def test_rejects_shape(self, ext):
        with pytest.raises(NotIntertwining):
            lift_intertwiner(ext, ext, np.eye(3))

    def test_between_different_sizes(self, ext):
        # X maps the source into the direct sum with a copy of itself
        t = ext.source
        big = GammaTuple(
            tuple(np.kron(np.eye(2), s) for s in t.S), np.kron(np.eye(2), t.P), Certificate.CONSTRUCTED, "double"
        )
        e2 = canonical_extension(big)
        X = np.vstack([0.6 * np.eye(4), 0.8 * np.eye(4)])
        res = lift_intertwiner(ext, e2, X)
        assert res.norm_Y <= res.norm_X + 1e-9
        assert fro(res.Y @ ext.J - e2.J @ X) < 1e-8
