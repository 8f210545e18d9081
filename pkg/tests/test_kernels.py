import numpy as np
import pytest

from humeval import kernels

from helpers import direct_smooth


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.active_backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


class TestGaussianKernel:
    def test_normalized(self):
        k = kernels.gaussian_kernel(2.0, 3.0)
        assert len(k) == 13  # half-width ceil(3 * 2) = 6
        assert abs(k.sum() - 1.0) <= 1e-12

    def test_symmetric(self):
        k = kernels.gaussian_kernel(1.7, 2.5)
        np.testing.assert_array_equal(k, k[::-1])

    def test_bad_sigma(self):
        with pytest.raises(ValueError):
            kernels.gaussian_kernel(0.0)


class TestSmoothColumns:
    def test_constant_preserved(self, backend):
        k = kernels.gaussian_kernel(2.0)
        sig = np.full((40, 3), 3.7)
        np.testing.assert_allclose(kernels.smooth_columns(sig, k), 3.7, atol=1e-12)

    def test_impulse_mass_preserved(self, backend):
        k = kernels.gaussian_kernel(2.0)
        sig = np.zeros((101, 1))
        sig[50, 0] = 1.0
        assert abs(kernels.smooth_columns(sig, k).sum() - 1.0) <= 1e-9

    @pytest.mark.parametrize("T", [1, 2, 5, 64])
    def test_matches_direct_convolution(self, backend, T):
        rng = np.random.default_rng(T)
        sig = rng.normal(size=(T, 4))
        k = kernels.gaussian_kernel(2.0, 3.0)
        np.testing.assert_allclose(kernels.smooth_columns(sig, k), direct_smooth(sig, k), atol=1e-9)

    def test_short_signal_multifold_reflection(self, backend):
        # kernel half-width 6 > T: reflection must fold repeatedly
        sig = np.array([[1.0], [5.0]])
        k = kernels.gaussian_kernel(2.0, 3.0)
        np.testing.assert_allclose(kernels.smooth_columns(sig, k), direct_smooth(sig, k), atol=1e-12)


class TestThirdDifference:
    def test_constant_exactly_zero(self, backend):
        sig = np.full((20, 5), 0.7321)
        out = kernels.third_difference(sig, 30.0)
        assert out.shape == (17, 5)
        assert (out == 0.0).all()

    def test_linear_dyadic_exactly_zero(self, backend):
        t = np.arange(16, dtype=float)
        sig = np.column_stack([0.125 * t, -2.0 * t])
        assert (kernels.third_difference(sig, 24.0) == 0.0).all()

    def test_linear_arbitrary_slope_near_zero(self, backend):
        t = np.arange(32, dtype=float)
        sig = (0.1234567 * t)[:, None]
        assert np.abs(kernels.third_difference(sig, 30.0)).max() <= 1e-9

    def test_cubic_constant_jerk(self, backend):
        fps = 25.0
        t = np.arange(40, dtype=float)
        sig = ((t / fps) ** 3)[:, None]
        np.testing.assert_allclose(kernels.third_difference(sig, fps), 6.0, atol=1e-9)


class TestResidualMeanNorm:
    def test_known_value(self, backend):
        a = np.array([[3.0, 4.0], [0.0, 0.0]])
        b = np.zeros((2, 2))
        assert kernels.residual_mean_norm(a, b) == pytest.approx(2.5, abs=1e-15)


def test_backends_agree():
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    previous = kernels.active_backend()
    rng = np.random.default_rng(99)
    sig = rng.normal(size=(200, 66))
    k = kernels.gaussian_kernel(2.0)
    results = {}
    try:
        for name in kernels.available_backends():
            kernels.set_backend(name)
            sm = kernels.smooth_columns(sig, k)
            jerk = kernels.third_difference(sig, 30.0)
            results[name] = (sm, jerk, kernels.residual_mean_norm(jerk, sm[: len(jerk)]))
    finally:
        kernels.set_backend(previous)
    a, b = results["compiled"], results["python"]
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-12, atol=1e-9)
    assert a[2] == pytest.approx(b[2], rel=1e-12)
