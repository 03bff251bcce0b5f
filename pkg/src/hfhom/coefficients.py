"""Periodic coefficient pair (g_check, omega) of the factorized operator.

The operator is ``A = -omega^{-1} d/dx g d/dx omega^{-1}`` with ``g = omega**2 * g_check``.
Both functions live on the unit cell [0, 1) and are extended 1-periodically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidCoefficient, NonPositiveCoefficient, UnknownBuiltin

CellFunction = Callable[[np.ndarray], np.ndarray]

BUILTINS = ("free", "cosine", "weighted")


def _cell_grid(n):
    return np.arange(n) / n


def fourier_coefficients(f, N, n_points=None, real=True):
    """Coefficients ``c_n = int_0^1 f(x) exp(-2 pi i n x) dx`` for ``n = -N..N``.

    ``f`` is either a vectorized callable on [0, 1) or an array of equispaced
    samples. Trapezoid rule (exact for trigonometric polynomials of degree
    below the number of points) on at least ``8 N`` points.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if callable(f):
        q = max(int(n_points or 0), 8 * N, 64)
        vals = np.asarray(f(_cell_grid(q)), dtype=complex if not real else float)
    else:
        vals = np.asarray(f)
        q = vals.size
        if q < 2 * N + 1:
            raise ValueError(f"{q} samples cannot resolve {N} modes")
    if not np.all(np.isfinite(vals)):
        raise InvalidCoefficient("non-finite samples")
    spec = np.fft.fft(vals) / q
    idx = np.arange(-N, N + 1)
    c = spec[idx % q]
    if real:
        # c_{-n} = conj(c_n) exactly
        c = 0.5 * (c + np.conj(c[::-1]))
    return c


def trig_eval(coeffs, x):
    """Evaluate ``sum_n c_n exp(2 pi i n x)`` with ``c`` indexed ``-N..N``."""
    coeffs = np.asarray(coeffs)
    N = (coeffs.size - 1) // 2
    n = np.arange(-N, N + 1)
    x = np.asarray(x, dtype=float)
    return np.exp(2j * np.pi * np.multiply.outer(x, n)) @ coeffs


@dataclass(frozen=True)
class PeriodicCoefficients:
    """Validated coefficient pair with grid bounds.

    ``alpha0 <= g_check <= alpha1`` and ``beta0 <= omega <= beta1`` on the
    validation grid; ``omega`` has unit trapezoid L2 norm on that grid.
    """

    g_check: CellFunction
    omega: CellFunction
    alpha0: float
    alpha1: float
    beta0: float
    beta1: float
    n_samples: int
    name: str = "custom"
    spec: Mapping | None = field(default=None, compare=False, repr=False)

    def g(self, x):
        return self.omega(x) ** 2 * self.g_check(x)

    def omega_sq(self, x):
        return self.omega(x) ** 2

    def omega_norm(self, n=None):
        x = _cell_grid(n or self.n_samples)
        return float(np.sqrt(np.mean(self.omega(x) ** 2)))

    def is_free(self, tol=1e-14):
        x = _cell_grid(self.n_samples)
        return bool(np.max(np.abs(self.g_check(x) - 1)) < tol
                    and np.max(np.abs(self.omega(x) - 1)) < tol)

    def fourier(self, which, N):
        """Fourier vector of ``g``, ``omega``, ``omega_sq`` or ``g_check`` on modes -N..N."""
        fn = {"g": self.g, "omega": self.omega, "omega_sq": self.omega_sq,
              "g_check": self.g_check}[which]
        return fourier_coefficients(fn, N, n_points=max(8 * N, self.n_samples))

    def two_sided_constants(self):
        """(lower, upper) factors bounding E_l(k) / k^2 on its Brillouin zone."""
        lo = self.alpha0 * self.beta0 ** 2 / self.beta1 ** 2
        hi = self.alpha1 * self.beta1 ** 2 / self.beta0 ** 2
        return lo, hi


def _check_samples(vals, label):
    if not np.all(np.isfinite(vals)):
        raise InvalidCoefficient(f"{label} has non-finite samples")
    if np.any(np.iscomplex(vals)):
        raise InvalidCoefficient(f"{label} must be real-valued")
    vals = np.real(vals)
    if np.min(vals) <= 0:
        raise NonPositiveCoefficient(f"{label} has min {np.min(vals):.3g} <= 0")
    return vals


def validate(g_check, omega, n_samples=1024, name="custom", spec=None):
    """Validate a raw coefficient pair and normalize omega in L2(0, 1).

    The renormalization is a silent scalar multiply; bounds are grid extrema.
    """
    if n_samples < 64:
        raise ValueError("n_samples must be >= 64")
    x = _cell_grid(n_samples)
    with np.errstate(all="ignore"):
        gv = _check_samples(np.asarray(g_check(x)) * np.ones_like(x), "g_check")
        wv = _check_samples(np.asarray(omega(x)) * np.ones_like(x), "omega")
    scale = 1.0 / np.sqrt(np.mean(wv ** 2))
    if abs(scale - 1.0) < 1e-15:
        omega_n = omega
    else:
        def omega_n(y, _w=omega, _s=scale):
            return _s * np.asarray(_w(y))
    wv = wv * scale
    return PeriodicCoefficients(
        g_check=g_check, omega=omega_n,
        alpha0=float(gv.min()), alpha1=float(gv.max()),
        beta0=float(wv.min()), beta1=float(wv.max()),
        n_samples=n_samples, name=name, spec=spec,
    )


def revalidate(coeffs):
    return validate(coeffs.g_check, coeffs.omega, coeffs.n_samples, coeffs.name, coeffs.spec)


# -- function constructors used by builtins and config files --------------------

def make_function(kind, params):
    """Cell function from a config entry.

    kinds: ``constant`` (value), ``cosine`` (mean, amplitude) giving
    ``mean + amplitude*cos(2 pi x)``, ``fourier`` (cos list, optional sin list)
    giving ``a0 + sum a_n cos(2 pi n x) + b_n sin(2 pi n x)``, ``table``
    (equispaced samples, periodic linear interpolation), ``expcos`` (scale, s)
    giving ``scale*exp(s cos 2 pi x)``.
    """
    p = dict(params)
    if kind == "constant":
        v = float(p.get("value", 1.0))
        return lambda x: np.full(np.shape(x), v)
    if kind == "cosine":
        m, a = float(p.get("mean", 1.0)), float(p["amplitude"])
        return lambda x: m + a * np.cos(2 * np.pi * np.asarray(x))
    if kind == "fourier":
        a = np.asarray(p.get("cos", [1.0]), dtype=float)
        b = np.asarray(p.get("sin", []), dtype=float)

        def f(x):
            x = np.asarray(x, dtype=float)
            out = np.full(x.shape, a[0])
            for n, an in enumerate(a[1:], start=1):
                out = out + an * np.cos(2 * np.pi * n * x)
            for n, bn in enumerate(b, start=1):
                out = out + bn * np.sin(2 * np.pi * n * x)
            return out
        return f
    if kind == "table":
        vals = np.asarray(p["values"], dtype=float)
        m = vals.size
        ext = np.append(vals, vals[0])
        grid = np.arange(m + 1) / m
        return lambda x: np.interp(np.mod(np.asarray(x, dtype=float), 1.0), grid, ext)
    if kind == "expcos":
        c, s = float(p.get("scale", 1.0)), float(p["s"])
        return lambda x: c * np.exp(s * np.cos(2 * np.pi * np.asarray(x)))
    raise InvalidCoefficient(f"unknown coefficient kind {kind!r}")


BUILTIN_SPECS = {
    "free": {"g": {"kind": "constant", "value": 1.0},
             "omega": {"kind": "constant", "value": 1.0}},
    "cosine": {"g": {"kind": "cosine", "mean": 1.0, "amplitude": 0.5},
               "omega": {"kind": "constant", "value": 1.0}},
    "weighted": {"g": {"kind": "constant", "value": 1.0},
                 "omega": {"kind": "expcos", "scale": 1.0, "s": 0.2}},
}


def from_spec(spec, n_samples=1024, name="custom"):
    """Build coefficients from ``{"g": {...}, "omega": {...}}`` config tables."""
    g = spec["g"]
    w = spec.get("omega", {"kind": "constant", "value": 1.0})
    gf = make_function(g["kind"], {k: v for k, v in g.items() if k != "kind"})
    wf = make_function(w["kind"], {k: v for k, v in w.items() if k != "kind"})
    return validate(gf, wf, n_samples=n_samples, name=name, spec=spec)


def builtin(name, n_samples=1024):
    if name not in BUILTIN_SPECS:
        raise UnknownBuiltin(f"unknown builtin {name!r}; choose from {BUILTINS}")
    return from_spec(BUILTIN_SPECS[name], n_samples=n_samples, name=name)
