import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from wgms.spectral import (
    apply_multiplier,
    band_limit_project,
    derivative_multiplier,
    dft_forward,
    dft_inverse,
    direct_dft,
    make_grid,
    sobolev_norm,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def complex_field(n):
    return arrays(np.complex128, n, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False,
                                                                allow_infinity=False))


class TestMakeGrid:
    def test_four_points(self):
        g = make_grid(4, 2 * np.pi)
        np.testing.assert_array_equal(g.sample_points, [-np.pi, -np.pi / 2, 0, np.pi / 2])
        np.testing.assert_array_equal(g.wavenumbers, [0, 1, 2, -1])

    def test_reference_kdv_grid(self):
        g = make_grid(512, 20)
        assert sorted(g.modes.tolist()) == list(range(-255, 257))
        np.testing.assert_allclose(g.wavenumbers, 2 * np.pi / 20 * g.modes)
        assert g.modes[256] == 256  # Nyquist stored as +N/2

    def test_spacing(self):
        g = make_grid(6, 3)
        assert g.spacing == 0.5
        np.testing.assert_allclose(np.diff(g.sample_points), 0.5, rtol=0, atol=1e-15)

    @pytest.mark.parametrize("n, period", [(5, 1.0), (2, 1.0), (0, 1.0), (8, 0.0), (8, -1.0), (7.5, 1.0)])
    def test_rejects_bad_arguments(self, n, period):
        with pytest.raises(ValueError):
            make_grid(n, period)


class TestTransforms:
    def test_delta(self):
        g = make_grid(4, 1.0)
        np.testing.assert_allclose(dft_forward(np.array([1, 0, 0, 0]), g), [1, 1, 1, 1])

    def test_constant(self):
        g = make_grid(4, 1.0)
        c = 2.5 - 1j
        np.testing.assert_allclose(dft_forward(np.full(4, c), g), [4 * c, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(dft_inverse(np.array([4 * c, 0, 0, 0]), g), np.full(4, c))

    def test_single_mode_against_direct_sum(self):
        g = make_grid(8, 2 * np.pi)
        u = np.exp(1j * g.sample_points)
        oracle = direct_dft(u)
        # sampling starts at -pi, so the mode-1 coefficient carries e^{-i pi} = -1
        expected = np.zeros(8, complex)
        expected[1] = -8
        np.testing.assert_allclose(oracle, expected, atol=1e-12)
        np.testing.assert_allclose(dft_forward(u, g), oracle, atol=1e-12)
        assert abs(abs(dft_forward(u, g)[1]) - 8) < 1e-12

    @pytest.mark.parametrize("n", [4, 6, 10, 16, 30])
    def test_matches_direct_sum(self, n):
        rng = np.random.default_rng(n)
        g = make_grid(n, 1.0)
        u = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
        np.testing.assert_allclose(dft_forward(u, g), direct_dft(u), atol=1e-12)
        np.testing.assert_allclose(dft_inverse(u, g), direct_dft(u, inverse=True), atol=1e-12)

    def test_round_trip_1024(self):
        rng = np.random.default_rng(1)
        g = make_grid(1024, 1.0)
        f = rng.standard_normal(1024) + 1j * rng.standard_normal(1024)
        back = dft_inverse(dft_forward(f, g), g)
        assert np.linalg.norm(back - f) / np.linalg.norm(f) < 1e-12

    def test_zero_spectrum(self):
        g = make_grid(8, 1.0)
        assert not np.any(dft_inverse(np.zeros(8), g))

    def test_length_mismatch(self):
        g = make_grid(8, 1.0)
        with pytest.raises(ValueError):
            dft_forward(np.zeros(6), g)
        with pytest.raises(ValueError):
            dft_inverse(np.zeros((2, 4)), g)

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([4, 16, 64, 256, 4096]).flatmap(lambda n: complex_field(n)))
    def test_round_trip_property(self, f):
        g = make_grid(f.size, 1.0)
        back = dft_inverse(dft_forward(f, g), g)
        scale = max(np.linalg.norm(f), 1e-300)
        assert np.linalg.norm(back - f) <= 1e-12 * scale

    @settings(max_examples=50, deadline=None)
    @given(complex_field(32), complex_field(32), finite, finite)
    def test_linearity(self, f, h, a, b):
        g = make_grid(32, 1.0)
        lhs = dft_forward(a * f + b * h, g)
        rhs = a * dft_forward(f, g) + b * dft_forward(h, g)
        scale = 1 + np.abs(a) * np.abs(f).sum() + np.abs(b) * np.abs(h).sum()
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale

    @settings(max_examples=50, deadline=None)
    @given(complex_field(64))
    def test_parseval(self, f):
        g = make_grid(64, 1.0)
        lhs = np.sum(np.abs(f) ** 2)
        rhs = np.sum(np.abs(dft_forward(f, g)) ** 2) / 64
        assert abs(lhs - rhs) <= 1e-12 * max(lhs, 1e-300)


class TestMultipliers:
    def test_identity_and_zero(self):
        rng = np.random.default_rng(2)
        s = rng.standard_normal((2, 8)) + 0j
        np.testing.assert_array_equal(apply_multiplier(s, np.ones(8)), s)
        assert not np.any(apply_multiplier(s, np.zeros((2, 8))))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            apply_multiplier(np.zeros(8), np.ones(4))
        with pytest.raises(ValueError):
            apply_multiplier(np.zeros((2, 8)), np.ones((3, 8)))

    def test_derivative_of_sine(self):
        g = make_grid(64, 2 * np.pi)
        x = g.sample_points
        d = dft_inverse(apply_multiplier(dft_forward(np.sin(x), g), 1j * g.wavenumbers), g)
        assert np.max(np.abs(d - np.cos(x))) < 1e-12

    def test_exact_on_trig_polynomials(self):
        g = make_grid(32, 3.0)
        x = g.sample_points
        k0 = 2 * np.pi / 3.0
        u = sum(np.cos(m * k0 * x + m) / (m + 1) for m in range(16))
        du = sum(-m * k0 * np.sin(m * k0 * x + m) / (m + 1) for m in range(16))
        got = dft_inverse(apply_multiplier(dft_forward(u, g), derivative_multiplier(g, 1)), g)
        assert np.max(np.abs(got - du)) < 1e-11

    def test_nyquist_zero_policy_keeps_real_fields_real(self):
        g = make_grid(16, 2 * np.pi)
        u = np.cos(8 * g.sample_points) + np.sin(3 * g.sample_points)
        paper = dft_inverse(dft_forward(u, g) * derivative_multiplier(g, 1, "paper"), g)
        zero = dft_inverse(dft_forward(u, g) * derivative_multiplier(g, 1, "zero"), g)
        assert np.max(np.abs(paper.imag)) > 1
        assert np.max(np.abs(zero.imag)) < 1e-13
        # even derivatives are untouched by the policy
        np.testing.assert_array_equal(derivative_multiplier(g, 2, "zero"), derivative_multiplier(g, 2))


class TestSobolevNorm:
    def test_zero(self):
        g = make_grid(8, 2 * np.pi)
        assert sobolev_norm(np.zeros(8), 1.0, g) == 0

    def test_constant_one(self):
        g = make_grid(8, 2 * np.pi)
        assert sobolev_norm(dft_forward(np.ones(8), g), 0, g) == pytest.approx(1.0, abs=1e-15)

    def test_single_mode_index_one(self):
        g = make_grid(16, 2 * np.pi)
        uhat = dft_forward(np.exp(1j * g.sample_points), g)
        # direct evaluation of sum (1 + k^2)^(m/2) |c_k|^2 with c_1 of modulus one
        assert sobolev_norm(uhat, 1.0, g) == pytest.approx(2 ** 0.25, rel=1e-14)

    def test_m0_is_rms(self):
        rng = np.random.default_rng(3)
        g = make_grid(32, 5.0)
        u = rng.standard_normal(32)
        assert sobolev_norm(dft_forward(u, g), 0, g) == pytest.approx(np.sqrt(np.mean(u ** 2)), rel=1e-13)

    def test_negative_index(self):
        g = make_grid(8, 1.0)
        with pytest.raises(ValueError):
            sobolev_norm(np.zeros(8), -0.5, g)


class TestBandLimit:
    def test_full_cutoff_is_identity(self):
        rng = np.random.default_rng(4)
        s = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_array_equal(band_limit_project(s, 8), s)

    def test_zero_cutoff(self):
        s = np.arange(1, 17, dtype=complex)
        out = band_limit_project(s, 0)
        assert out[0] == 1 and not np.any(out[1:])

    def test_removes_high_mode(self):
        g = make_grid(16, 2 * np.pi)
        x = g.sample_points
        s = dft_forward(np.exp(1j * x) + np.exp(5j * x), g)
        out = band_limit_project(s, 3, g)
        assert out[5] == 0 and out[1] == s[1]

    @pytest.mark.parametrize("cutoff", [-1, 9, 2.5])
    def test_out_of_range(self, cutoff):
        with pytest.raises(ValueError):
            band_limit_project(np.zeros(16), cutoff)

    @given(arrays(np.complex128, 16, elements=st.complex_numbers(max_magnitude=10, allow_nan=False)),
           st.integers(0, 8))
    def test_idempotent(self, s, cutoff):
        once = band_limit_project(s, cutoff)
        np.testing.assert_array_equal(band_limit_project(once, cutoff), once)
