"""
Tests for mapping, AWGN and soft demapping.
"""

import math

import numpy as np
import pytest
from scipy.stats import binomtest

from src.channel.phy import (
    ChannelParams,
    awgn,
    constellation,
    demap,
    gray_code,
    map_bits,
    noise_sigma,
)
from src.simulation.metrics import uncoded_bpsk_ber


class TestConstellation:

    @pytest.mark.parametrize("modulation", ["bpsk", "qpsk", "16qam", "64qam"])
    def test_unit_energy(self, modulation):
        points = constellation(modulation).points
        assert np.mean(np.abs(points) ** 2) == pytest.approx(1.0)

    @pytest.mark.parametrize("modulation, m", [("bpsk", 1), ("qpsk", 2), ("16qam", 4), ("64qam", 6)])
    def test_bits_per_symbol(self, modulation, m):
        assert constellation(modulation).bits_per_symbol == m

    @pytest.mark.parametrize("modulation", ["qpsk", "16qam", "64qam"])
    def test_gray_neighbours_differ_in_one_bit(self, modulation):
        """Test that nearest neighbours differ in exactly one label bit."""
        const = constellation(modulation)
        spacing = 2.0 / const.scale
        for a in range(const.order):
            for b in range(const.order):
                if math.isclose(abs(const.points[a] - const.points[b]), spacing):
                    assert np.sum(const.labels[a] != const.labels[b]) == 1

    def test_bpsk_maps_zero_to_plus_one(self):
        symbols, pad = map_bits(np.array([0, 1, 1, 0]), constellation("bpsk"))
        assert symbols.real.tolist() == [1.0, -1.0, -1.0, 1.0]
        assert pad == 0

    def test_map_bits_agrees_with_label_table(self):
        const = constellation("16qam")
        labels = const.labels.reshape(-1)
        symbols, _ = map_bits(labels, const)
        assert np.allclose(symbols, const.points)

    def test_padding(self):
        symbols, pad = map_bits(np.array([1, 0, 1]), constellation("16qam"))
        assert symbols.size == 1 and pad == 1

    def test_gray_code(self):
        assert gray_code(2).tolist() == [0, 1, 3, 2]

    def test_unsupported_order(self):
        with pytest.raises(ValueError):
            constellation(8)


class TestChannel:

    def test_sigma2(self):
        params = ChannelParams(ebno_db=0.0, rate=0.5, bits_per_symbol=2)
        assert params.sigma2 == pytest.approx(0.5)
        assert noise_sigma(params) == params.sigma2

    def test_sigma2_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            ChannelParams(ebno_db=0.0, rate=0.0, bits_per_symbol=1)

    def test_sigma2_stays_positive_and_finite(self):
        with pytest.raises(ValueError, match="outside"):
            ChannelParams(ebno_db=4000.0, rate=0.5, bits_per_symbol=6)
        with pytest.raises(ValueError, match="outside"):
            ChannelParams(ebno_db=-4000.0, rate=0.5, bits_per_symbol=6)
        with pytest.raises(ValueError):
            ChannelParams(ebno_db=float("nan"), rate=0.5, bits_per_symbol=6)
        assert ChannelParams(ebno_db=300.0, rate=0.5, bits_per_symbol=6).sigma2 > 0

    def test_noise_variance(self):
        rng = np.random.default_rng(0)
        noisy = awgn(np.zeros(200_000, dtype=np.complex128), 0.25, rng)
        assert np.var(noisy.real) == pytest.approx(0.25, rel=0.02)
        assert np.var(noisy.imag) == pytest.approx(0.25, rel=0.02)

    def test_real_only_noise(self):
        noisy = awgn(np.ones(10), 1.0, np.random.default_rng(0), real_only=True)
        assert np.all(noisy.imag == 0)

    def test_zero_noise(self):
        symbols = np.array([1 + 1j, -1 - 1j])
        assert np.array_equal(awgn(symbols, 0.0, np.random.default_rng(0)), symbols)


class TestDemap:

    def test_bpsk_llr(self):
        received = np.array([0.7, -0.2, 1.5])
        llrs = demap(received, constellation("bpsk"), 0.8)
        assert np.allclose(llrs, 2.0 * received / 0.8, rtol=1e-12)

    @pytest.mark.parametrize("modulation", ["qpsk", "16qam", "64qam"])
    def test_exact_matches_brute_force(self, modulation):
        """Test per-axis demapping against a sum over the whole constellation."""
        const = constellation(modulation)
        rng = np.random.default_rng(2)
        received = rng.normal(size=20) + 1j * rng.normal(size=20)
        sigma2 = 0.3
        llrs = demap(received, const, sigma2).reshape(20, -1)
        metrics = -np.abs(received[:, None] - const.points[None, :]) ** 2 / (2 * sigma2)
        for bit in range(const.bits_per_symbol):
            zero = const.labels[:, bit] == 0
            expected = np.logaddexp.reduce(metrics[:, zero], axis=1) - np.logaddexp.reduce(
                metrics[:, ~zero], axis=1
            )
            assert np.allclose(llrs[:, bit], expected)

    @pytest.mark.parametrize("modulation", ["qpsk", "16qam", "64qam"])
    def test_noiseless_hard_decisions(self, modulation):
        const = constellation(modulation)
        bits = np.random.default_rng(3).integers(0, 2, const.bits_per_symbol * 50)
        symbols, _ = map_bits(bits, const)
        llrs = demap(symbols, const, 0.01)
        assert np.array_equal((llrs < 0).astype(int), bits)

    def test_max_log_same_signs(self):
        const = constellation("64qam")
        received = np.random.default_rng(4).normal(size=30) * (1 + 1j)
        exact = demap(received, const, 0.1)
        approx = demap(received, const, 0.1, exact=False)
        assert np.array_equal(np.sign(exact), np.sign(approx))

    def test_rejects_zero_noise(self):
        with pytest.raises(ValueError):
            demap(np.array([1.0]), constellation("bpsk"), 0.0)


class TestCalibration:

    @pytest.mark.parametrize("ebno_db", [0.0, 2.0, 4.0])
    def test_uncoded_bpsk_ber(self, ebno_db):
        """Test uncoded BPSK BER against Q(sqrt(2 Eb/N0)) with >= 300 errors."""
        p = uncoded_bpsk_ber(ebno_db)
        n = int(math.ceil(600 / p))
        rng = np.random.default_rng(int(ebno_db * 10) + 1)
        const = constellation("bpsk")
        sigma2 = ChannelParams(ebno_db=ebno_db, rate=1.0, bits_per_symbol=1).sigma2
        symbols, _ = map_bits(np.zeros(n, dtype=np.int8), const)
        errors = int(np.count_nonzero(demap(awgn(symbols, sigma2, rng, True), const, sigma2) < 0))
        assert errors >= 300
        spread = 3 * math.sqrt(n * p * (1 - p))
        assert abs(errors - n * p) <= spread
        assert binomtest(errors, n, p).pvalue > 1e-3
