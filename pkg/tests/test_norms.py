# test_norms.py
"""Sobolev weights, weighted inner products and the Gram system behind the AA least squares."""
import numpy as np
import pytest

from sobolev_anderson.errors import DimensionMismatchError, InvalidDimensionError, InvalidParameterError
from sobolev_anderson.grid import laplacian_neumann, random_orthogonal
from sobolev_anderson.norms import (
    NormKind,
    SpectralWeight,
    WeightOperator,
    assemble_weight_matrix,
    build_weight,
    gram_system,
    weighted_inner,
    weighted_norm,
)


def _cosine_mode(n: int, j: int) -> np.ndarray:
    return np.cos(np.pi * j * (np.arange(n) + 0.5) / n)


def _dense_p2(s: int, n: int, h: float) -> np.ndarray:
    minus_k = -laplacian_neumann(n, h).to_dense()
    total = np.zeros((n, n))
    power = np.eye(n)
    for _ in range(s + 1):
        total += power
        power = power @ minus_k
    return np.linalg.inv(total)


class TestNormKind:
    @pytest.mark.parametrize("label,s", [("l2", 0), ("L2", 0), ("hm1", 1), ("hm2", 2), (" HM3 ", 3)])
    def test_parse(self, label, s):
        assert NormKind.parse(label).s == s

    @pytest.mark.parametrize("label", ["h2", "hm", "hm-1", "linf", ""])
    def test_parse_rejects_unknown(self, label):
        with pytest.raises(InvalidParameterError):
            NormKind.parse(label)

    def test_label(self):
        assert NormKind().label == "l2"
        assert NormKind(s=2).label == "hm2"

    def test_negative_order(self):
        with pytest.raises(ValueError):
            NormKind(s=-1)


class TestWeightOperator:
    def test_constants_pass_through(self):
        ones = np.ones(3)
        for s in (0, 1, 2):
            wop = build_weight(NormKind(s=s), 3, 0.5)
            assert weighted_inner(wop, ones, ones) == pytest.approx(1.5, rel=1e-12)

    def test_l2_is_scaled_dot_product(self):
        rng = np.random.default_rng(42)
        u, v = rng.standard_normal(10), rng.standard_normal(10)
        wop = build_weight(NormKind(), 10, 0.1)
        assert wop.factor is None
        assert weighted_inner(wop, u, v) == pytest.approx(0.1 * u @ v, rel=1e-12)
        assert weighted_norm(wop, u) == pytest.approx(np.sqrt(0.1) * np.linalg.norm(u), rel=1e-12)

    def test_cosine_mode_eigenvalue(self):
        n, h, s, j = 16, 1.0 / 15, 2, 3
        wop = build_weight(NormKind(s=s), n, h)
        v = _cosine_mode(n, j)
        lam = 4.0 * np.sin(np.pi * j / (2 * n)) ** 2 / h**2
        np.testing.assert_allclose(wop.apply_p2(v), v / (1.0 + lam + lam**2), rtol=1e-8, atol=1e-12)

    def test_high_modes_are_damped(self):
        n, h = 64, 1.0 / 63
        wop = build_weight(NormKind(s=2), n, h)
        ratios = []
        for j in (1, 8, 32):
            v = _cosine_mode(n, j)
            ratios.append(weighted_norm(wop, v) / np.linalg.norm(v))
        assert ratios[0] > ratios[1] > ratios[2]

    def test_matches_dense_inverse(self):
        rng = np.random.default_rng(0)
        n, h, s = 12, 0.2, 2
        wop = build_weight(NormKind(s=s), n, h)
        V = rng.standard_normal((n, 3))
        np.testing.assert_allclose(wop.apply_p2(V), _dense_p2(s, n, h) @ V, rtol=1e-8, atol=1e-10)

    def test_band_width(self):
        assert assemble_weight_matrix(2, 10, 0.1).bw == 2
        assert assemble_weight_matrix(3, 2, 1.0).bw == 1

    def test_inner_is_hermitian(self):
        rng = np.random.default_rng(1)
        u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        wop = build_weight(NormKind(s=1), 8, 0.25)
        np.testing.assert_allclose(weighted_inner(wop, u, v), np.conj(weighted_inner(wop, v, u)), rtol=1e-12)
        assert weighted_norm(wop, u) > 0.0

    def test_real_inputs_give_float(self):
        wop = build_weight(NormKind(s=1), 4, 0.5)
        assert isinstance(weighted_inner(wop, np.ones(4), np.arange(4.0)), float)

    def test_invalid_construction(self):
        with pytest.raises(InvalidDimensionError):
            build_weight(NormKind(s=1), 1, 1.0)
        with pytest.raises(InvalidParameterError):
            build_weight(NormKind(s=1), 4, 0.0)

    def test_dimension_mismatch(self):
        wop = build_weight(NormKind(s=1), 4, 0.5)
        with pytest.raises(DimensionMismatchError):
            wop.apply_p2(np.ones(5))


class TestSpectralWeight:
    def test_unit_sigma_is_identity(self):
        W = random_orthogonal(6, 2)
        wop = SpectralWeight(n=6, h=1.0, W=W, sigma=np.ones(6))
        v = np.arange(6.0)
        np.testing.assert_allclose(wop.apply_p2(v), v, atol=1e-12)

    def test_eigenvectors_are_scaled(self):
        W = random_orthogonal(5, 4)
        sigma = 1.0 / np.arange(1, 6) ** 2
        wop = SpectralWeight(n=5, h=1.0, W=W, sigma=sigma)
        np.testing.assert_allclose(wop.apply_p2(W), W * sigma**2, atol=1e-12)


class TestGramSystem:
    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(42)
        n, h, s = 20, 1.0 / 19, 2
        wop = build_weight(NormKind(s=s), n, h)
        D = rng.standard_normal((n, 4))
        f = rng.standard_normal(n)
        G, g = gram_system(wop, D, f)
        P2 = _dense_p2(s, n, h)
        np.testing.assert_allclose(G, h * D.T @ P2 @ D, rtol=1e-7, atol=1e-10)
        np.testing.assert_allclose(g, h * D.T @ P2 @ f, rtol=1e-7, atol=1e-10)

    def test_gram_is_hermitian_semidefinite(self):
        rng = np.random.default_rng(3)
        wop = WeightOperator(kind=NormKind(), n=10, h=0.5)
        D = rng.standard_normal((10, 3)) + 1j * rng.standard_normal((10, 3))
        G, _ = gram_system(wop, D, np.ones(10))
        np.testing.assert_array_equal(G, G.conj().T)
        assert np.min(np.linalg.eigvalsh(G)) >= -1e-12

    def test_single_column(self):
        wop = WeightOperator(kind=NormKind(), n=3, h=1.0)
        G, g = gram_system(wop, np.array([1.0, 0.0, 0.0]), np.array([2.0, 5.0, 7.0]))
        np.testing.assert_allclose(G, [[1.0]])
        np.testing.assert_allclose(g, [2.0])
