import numpy as np
import pytest

from cissa.errors import ParameterError
from cissa.extension import (
    ARModel,
    ExtensionKind,
    ExtensionMode,
    backcast_ar,
    extend,
    fit_ar,
    forecast_ar,
)


def simulate_ar1(phi, n, seed):
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n + 200)
    y = np.zeros_like(e)
    for t in range(1, y.size):
        y[t] = phi * y[t - 1] + e[t]
    return y[200:]


def test_mode_coercion():
    assert ExtensionMode.coerce(None).kind is ExtensionKind.AR
    assert ExtensionMode.coerce(1).kind is ExtensionKind.MIRROR
    assert ExtensionMode.coerce("NONE").kind is ExtensionKind.NONE
    assert ExtensionMode.coerce(ExtensionMode("ar", 4)).ar_order == 4
    with pytest.raises(ParameterError):
        ExtensionMode.coerce("wrap")
    with pytest.raises(ParameterError):
        ExtensionMode.coerce(3)
    with pytest.raises(ParameterError):
        ExtensionMode("ar", 0)


def test_default_ar_order_is_floor_third():
    assert ExtensionMode().order_for(100) == 33
    assert ExtensionMode("ar", 5).order_for(100) == 5


def test_none_is_identity(rng):
    x = rng.standard_normal(30)
    ext = extend(x, 5, "none")
    np.testing.assert_array_equal(ext.values, x)
    assert ext.offset == 0 and ext.original_length == 30


def test_mirror_small_example():
    x = np.array([1.0, 2, 3, 4, 5])
    ext = extend(x, 2, "mirror")
    np.testing.assert_array_equal(ext.values, [2, 1, 1, 2, 3, 4, 5, 5, 4])
    np.testing.assert_array_equal(ext.original, x)


def test_mirror_palindrome_identities(rng):
    x = rng.standard_normal(41)
    L = 13
    ext = extend(x, L, "mirror")
    v, o, T = ext.values, ext.offset, ext.original_length
    assert v.size == T + 2 * L and o == L
    for j in range(1, L + 1):
        assert v[o - j] == v[o + j - 1]
        assert v[o + T - 1 + j] == v[o + T - j]
    assert np.array_equal(ext.original, x)


def test_ar_extension_of_ramp():
    x = np.arange(1.0, 31.0)
    ext = extend(x, 5, ExtensionMode("ar", 3))
    np.testing.assert_allclose(ext.values[-5:], [31, 32, 33, 34, 35], rtol=1e-6)
    np.testing.assert_allclose(ext.values[:5], [-4, -3, -2, -1, 0], rtol=0, atol=1e-6)
    assert np.array_equal(ext.original, x)


def test_ar_extension_keeps_original_samples(rng):
    x = np.cumsum(rng.standard_normal(90))
    ext = extend(x, 20, "ar")
    assert ext.values.size == 130
    assert np.array_equal(ext.original, x)


def test_ar_order_too_large():
    with pytest.raises(ParameterError, match="ar_order_override"):
        extend(np.arange(30.0), 5, ExtensionMode("ar", 28))


def test_fit_constant_gives_zero_coefficients():
    m = fit_ar(np.full(50, 2.5), 4)
    np.testing.assert_array_equal(m.coeffs, np.zeros(4))
    assert m.mean == 2.5


def test_fit_ar1_recovers_coefficient():
    y = simulate_ar1(0.8, 5000, seed=7)
    phi = fit_ar(y, 1).coeffs[0]
    assert 0.75 <= phi <= 0.85


def test_fit_white_noise_small_coefficients():
    y = np.random.default_rng(11).standard_normal(5000)
    assert np.max(np.abs(fit_ar(y, 4).coeffs)) < 0.1


def test_fit_matches_statsmodels_burg():
    sm = pytest.importorskip("statsmodels.regression.linear_model")
    y = simulate_ar1(0.6, 800, seed=3) + 0.4
    ours = fit_ar(y, 5).coeffs
    theirs, _ = sm.burg(y, order=5, demean=True)
    np.testing.assert_allclose(ours, theirs, atol=1e-10)


def test_fit_rejects_short_series():
    with pytest.raises(ParameterError):
        fit_ar(np.arange(5.0), 4)


def test_forecast_examples():
    np.testing.assert_array_equal(forecast_ar(np.ones(5), ARModel(np.zeros(2), 3.0), 3), [3, 3, 3])
    np.testing.assert_allclose(forecast_ar([0.2, 1.0], ARModel(np.array([0.5]), 0.0), 3), [0.5, 0.25, 0.125])


def test_backcast_of_palindrome_equals_forecast(rng):
    half = rng.standard_normal(20)
    d = np.concatenate([half, half[::-1]])
    m = fit_ar(d, 6)
    assert np.array_equal(backcast_ar(d, m, 15), forecast_ar(d, m, 15))


def test_fitted_model_is_stable(rng):
    y = np.cumsum(rng.standard_normal(300))
    m = fit_ar(y, 40)
    # companion matrix eigenvalues inside the unit circle
    p = m.order
    comp = np.zeros((p, p))
    comp[0] = m.coeffs
    comp[1:, :-1] = np.eye(p - 1)
    assert np.max(np.abs(np.linalg.eigvals(comp))) < 1.0 + 1e-9
