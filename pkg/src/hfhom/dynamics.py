"""Exact band-s evolution, effective (homogenized) evolution, modulated
approximants and error norms.

Synthesized data is diagonal in the Bloch representation, so the exact
evolution is a multiplier on the profile amplitudes: no time stepping.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .band_edge import BandEdgeData
from .bloch_synthesis import (FieldGrid, SpectralProfile, SynthesisPlan, WaveField,
                              bloch_coeff, bloch_data, inverse_transform, modulation,
                              sampler_for,
                              synthesize_amplitudes, _check_lattice)
from .errors import GridMismatch, NegativeSpectralShift

EQUATIONS = ("Schrodinger", "Wave")
SINC_SWITCH = 1e-4


@dataclass(frozen=True)
class EvolutionSpec:
    equation: str
    plan: SynthesisPlan
    t: float
    profile_f: SpectralProfile | None
    profile_g: SpectralProfile | None = None

    def __post_init__(self):
        if self.equation not in EQUATIONS:
            raise ValueError(f"equation must be one of {EQUATIONS}")
        if self.equation == "Schrodinger":
            if self.profile_g is not None:
                raise ValueError("the Schrodinger problem takes a single datum")
            if self.profile_f is None:
                raise ValueError("the Schrodinger problem needs profile_f")
        elif self.profile_f is None and self.profile_g is None:
            raise ValueError("the wave problem needs profile_f and/or profile_g")

    @property
    def edge(self):
        return self.plan.edge

    @property
    def eps(self):
        return self.plan.eps

    def profiles(self):
        return [p for p in (self.profile_f, self.profile_g) if p is not None]


def _phase(t, energy):
    """``exp(-i t energy)`` with the large argument reduced mod 2 pi first."""
    return np.exp(-1j * np.fmod(t * energy, 2 * np.pi))


def wave_multipliers(lam, t):
    """``cos(t sqrt(lam))``, ``sin(t sqrt(lam))/sqrt(lam)`` and their t-derivatives
    (``-sqrt(lam) sin``, ``cos``); the second is ``t*sinc`` near lam = 0."""
    lam = np.asarray(lam, dtype=float)
    r = np.sqrt(lam)
    c = np.cos(t * r)
    small = np.abs(t) * r < SINC_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(small, t * (1 - (t * t * lam) / 6), np.sin(t * r) / np.where(small, 1, r))
    return c, s, -r * np.sin(t * r), c


def spectral_shift(edge, E, eps):
    """``lam = |E - sigma|/eps^2`` with the sign fixed by the edge side."""
    shift = edge.sign * (np.asarray(E) - edge.sigma)
    tol = 1e-10 * (1 + abs(edge.sigma))
    if np.any(shift < -tol):
        raise NegativeSpectralShift(
            f"E - sigma has the wrong sign (min {shift.min():.3g}) for {edge.condition}")
    return np.maximum(shift, 0.0) / eps ** 2


def exact_amplitudes(spec: EvolutionSpec, derivative=False):
    """[(profile, evolved amplitudes, Bloch coefficients)] for each datum."""
    edge, eps, t = spec.edge, spec.eps, spec.t
    out = []
    if spec.equation == "Schrodinger":
        p = spec.profile_f
        E, C = bloch_data(spec.plan, p)
        a = p.amplitudes * _phase(t, (E - edge.sigma) / eps ** 2) * _phase(t, edge.sigma / eps ** 2)
        if derivative:
            a = -1j * (E / eps ** 2) * a
        out.append((p, a, C))
        return out
    for p, role in ((spec.profile_f, "f"), (spec.profile_g, "g")):
        if p is None:
            continue
        E, C = bloch_data(spec.plan, p)
        lam = spectral_shift(edge, E, eps)
        c, s, dc, ds = wave_multipliers(lam, t)
        if role == "f":
            m = dc if derivative else c
        else:
            m = ds if derivative else s
        out.append((p, p.amplitudes * m, C))
    return out


def evolve_exact(spec: EvolutionSpec, grid: FieldGrid, derivative=False):
    """Exact solution at time ``t`` (or its time derivative) on ``grid``."""
    grid.cells(spec.eps)
    values = np.zeros(grid.M, dtype=complex)
    tail = 0.0
    for p, a, C in exact_amplitudes(spec, derivative):
        _check_lattice(p, grid)
        v, tl = synthesize_amplitudes(grid, spec.eps, p.indices, a, C, spec.plan.shifted)
        values += v
        tail = max(tail, tl)
    return WaveField(grid, values, spec.eps, {"alias_tail": tail})


def effective_multipliers(spec: EvolutionSpec, edge: BandEdgeData, derivative=False):
    t, b = spec.t, edge.b
    out = []
    if spec.equation == "Schrodinger":
        k = spec.profile_f.kgrid_f
        m = _phase(t, edge.sign * b * k ** 2)
        if derivative:
            m = -1j * edge.sign * b * k ** 2 * m
        out.append((spec.profile_f, m))
        return out
    for p, role in ((spec.profile_f, "f"), (spec.profile_g, "g")):
        if p is None:
            continue
        c, s, dc, ds = wave_multipliers(b * p.kgrid_f ** 2, t)
        if role == "f":
            out.append((p, dc if derivative else c))
        else:
            out.append((p, ds if derivative else s))
    return out


def evolve_effective(spec: EvolutionSpec, edge: BandEdgeData, grid: FieldGrid,
                     derivative=False):
    """Effective (constant-coefficient) evolution of the profile(s) on ``grid``.

    Schrodinger multiplier ``exp(-i t sign b k^2)``; wave multipliers
    ``cos(t b^(1/2)|k|)`` on f and ``sin(t b^(1/2)|k|)/(b^(1/2)|k|)`` on g.
    """
    values = np.zeros(grid.M, dtype=complex)
    for p, m in effective_multipliers(spec, edge, derivative):
        values += inverse_transform(p, grid, m).values
    return WaveField(grid, values, 0.0)


def modulated_approximant(u0: WaveField, edge: BandEdgeData, eps, t, equation):
    """``phi_k0(x/eps) [e^{i pi x/eps}] [e^{-i t sigma/eps^2}] u0(x)``."""
    mod = modulation(u0.grid, eps, edge.phi_k0, edge.shifted)
    values = mod * u0.values
    if equation == "Schrodinger":
        values = values * _phase(t, edge.sigma / eps ** 2)
    elif equation != "Wave":
        raise ValueError(f"equation must be one of {EQUATIONS}")
    return WaveField(u0.grid, values, eps)


def error_norm(exact: WaveField, approx: WaveField):
    if not exact.grid.same_as(approx.grid):
        raise GridMismatch("error_norm needs fields on the same grid")
    d = exact.values - approx.values
    return float(np.sqrt(np.sum(np.abs(d) ** 2) * exact.grid.dx))


def exact_wave_energy(spec: EvolutionSpec, grid: FieldGrid):
    """``||d_t v||^2 + (lam v, v)`` with ``lam = |A_eps - eps^-2 sigma|`` on band s.

    The evolved field and its time derivative are analysed back onto band s
    at the union of the data lattices: ``dk sum (|d_t a|^2 + lam |a|^2)``.
    """
    if spec.equation != "Wave":
        raise ValueError("energy is defined for the wave problem")
    k = np.unique(np.concatenate([p.kgrid_f for p in spec.profiles()]))
    v = evolve_exact(spec, grid)
    vt = evolve_exact(spec, grid, derivative=True)
    a = bloch_coeff(v, spec.edge, kgrid_f=k, eps=spec.eps)
    at = bloch_coeff(vt, spec.edge, kgrid_f=k, eps=spec.eps)
    E, _ = sampler_for(spec.edge)(spec.edge.k0 + spec.eps * k)
    lam = spectral_shift(spec.edge, E, spec.eps)
    return float(np.sum(np.abs(at) ** 2 + lam * np.abs(a) ** 2) * grid.dk)


def effective_wave_energy(spec: EvolutionSpec, edge: BandEdgeData, grid: FieldGrid):
    """``||d_t v0||^2 + b ||d_x v0||^2`` evaluated on the grid (spectral derivative)."""
    v = evolve_effective(spec, edge, grid)
    vt = evolve_effective(spec, edge, grid, derivative=True)
    k = np.fft.fftfreq(grid.M, d=grid.dx) * 2 * np.pi
    vx = np.fft.ifft(1j * k * np.fft.fft(v.values))
    return float((np.sum(np.abs(vt.values) ** 2) + edge.b * np.sum(np.abs(vx) ** 2)) * grid.dx)
