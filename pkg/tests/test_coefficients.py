import numpy as np
import pytest

from hfhom.coefficients import (builtin, fourier_coefficients, from_spec, make_function,
                                revalidate, validate)
from hfhom.errors import InvalidCoefficient, NonPositiveCoefficient, UnknownBuiltin


def test_constant_pair_bounds():
    c = validate(lambda x: np.ones_like(x), lambda x: np.ones_like(x), n_samples=256)
    assert (c.alpha0, c.alpha1, c.beta0, c.beta1) == (1, 1, 1, 1)
    assert c.omega_norm() == pytest.approx(1, abs=1e-14)


def test_cosine_extrema():
    c = validate(lambda x: 1 + 0.5 * np.cos(2 * np.pi * x), lambda x: np.ones_like(x), 256)
    assert c.alpha0 == pytest.approx(0.5, abs=1e-15)
    assert c.alpha1 == pytest.approx(1.5, abs=1e-15)


def test_weighted_normalizer_matches_quadrature(frozen, weighted):
    c_quad = frozen["weighted_normalizer"]["quad"]
    assert frozen["weighted_normalizer"]["bessel"] == pytest.approx(c_quad, rel=1e-13)
    assert weighted.omega(np.array([0.25]))[0] == pytest.approx(c_quad, rel=1e-12)
    assert weighted.omega_norm() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("name", ["free", "cosine", "weighted"])
def test_builtins_normalized_and_idempotent(name):
    c = builtin(name)
    assert abs(c.omega_norm() - 1) <= 1e-10
    again = revalidate(c)
    for a in ("alpha0", "alpha1", "beta0", "beta1"):
        assert getattr(again, a) == pytest.approx(getattr(c, a), abs=1e-12)


def test_unknown_builtin():
    with pytest.raises(UnknownBuiltin):
        builtin("mathieu")


def test_nonpositive_and_nan_rejected():
    with pytest.raises(NonPositiveCoefficient):
        validate(lambda x: np.cos(2 * np.pi * x), lambda x: np.ones_like(x))
    with pytest.raises(InvalidCoefficient):
        validate(lambda x: np.full_like(x, np.nan), lambda x: np.ones_like(x))
    with pytest.raises(ValueError):
        validate(lambda x: np.ones_like(x), lambda x: np.ones_like(x), n_samples=32)


def test_fourier_trivial_cases():
    c = fourier_coefficients(lambda x: np.ones_like(x), 4)
    assert np.allclose(c, np.eye(9)[4], atol=1e-15)
    c = fourier_coefficients(lambda x: np.cos(2 * np.pi * x), 4)
    expect = np.zeros(9)
    expect[3] = expect[5] = 0.5
    assert np.allclose(c, expect, atol=1e-15)


def test_cosine_builtin_modes(cosine):
    c = cosine.fourier("g_check", 3)
    assert np.allclose(c, [0, 0, 0.25, 1, 0.25, 0, 0], atol=1e-15)


def test_exp_cos_modes_are_bessel(frozen, weighted):
    bessel = np.array(frozen["bessel_I_s02_N8"])
    c = fourier_coefficients(lambda x: np.exp(0.2 * np.cos(2 * np.pi * x)), 8)
    assert np.allclose(c.real, bessel, atol=1e-15)
    # normalized weight: Bessel values times the frozen normalizer
    cw = weighted.fourier("omega", 8)
    assert np.allclose(cw.real, frozen["weighted_normalizer"]["quad"] * bessel, atol=1e-14)


def test_conjugate_symmetry_exact():
    rng = np.random.default_rng(3)
    samples = rng.standard_normal(64)
    c = fourier_coefficients(samples, 10)
    assert np.array_equal(c[::-1], np.conj(c))


def test_config_kinds():
    f = make_function("fourier", {"cos": [1.0, 0.2], "sin": [0.1]})
    x = np.array([0.1])
    assert f(x)[0] == pytest.approx(1 + 0.2 * np.cos(0.2 * np.pi) + 0.1 * np.sin(0.2 * np.pi))
    t = make_function("table", {"values": [1.0, 2.0]})
    assert t(np.array([0.25, 0.75]))[0] == pytest.approx(1.5)
    assert t(np.array([0.75]))[0] == pytest.approx(1.5)
    c = from_spec({"g": {"kind": "table", "values": [1.0, 2.0, 1.5]}})
    assert c.alpha0 >= 1.0 - 1e-12
    with pytest.raises(InvalidCoefficient):
        make_function("spline", {})
