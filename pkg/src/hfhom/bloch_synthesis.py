"""Spectral profiles, Bloch-wave synthesis of band-localized data and the
inverse (analysis) map, all on a periodic computational torus.

Conventions. The Fourier transform is ``(Phi f)(k) = (2 pi)^{-1/2} int e^{-ikx} f``.
A profile lives on the frequency lattice ``k_j = j*dk`` of a torus of length
``L = n_cells*eps``, ``dk = 2 pi / L``. The synthesized field is

    u(x) = (2 pi)^{-1/2} dk sum_j a_j e^{i k_j x} phi_s(x/eps, k0 + eps k_j)
           [* e^{i pi x/eps} when k0 = pi]

i.e. the trapezoid rule for the continuous synthesis integral. Writing
``phi_s(y, q) = sum_n c_n(q) e^{2 pi i n y}``, the term (j, n) is a single
torus mode, so synthesis and analysis are exact FFTs and the discrete
Parseval identity ``||u||^2 = dk sum_j |a_j|^2`` holds to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .band_edge import BandEdgeData
from .cell_eig import BandTable, align_phase, solve_point
from .errors import GaugeBreak, GridMismatch, UnsupportedKind, ZoneOverflow

PROFILE_KINDS = ("bump", "powerlaw", "point")
SQRT_2PI = np.sqrt(2 * np.pi)


# -- profiles -----------------------------------------------------------------

@dataclass(frozen=True)
class SpectralProfile:
    """Fourier amplitudes of a band-limited datum on a uniform frequency lattice.

    ``kgrid_f`` holds only the lattice points inside the support ``[-K, K]``.
    """
    kgrid_f: np.ndarray
    dk: float
    amplitudes: np.ndarray
    sobolev_q: float
    hq_norm: float
    kind: str = "custom"
    K: float = np.inf
    tail_mass: float = 0.0
    params: dict = field(default_factory=dict, compare=False)

    @property
    def indices(self):
        return np.rint(self.kgrid_f / self.dk).astype(np.int64)

    def sobolev_norm(self, q):
        w = (1 + self.kgrid_f ** 2) ** q
        return float(np.sqrt(np.sum(w * np.abs(self.amplitudes) ** 2) * self.dk))

    def l2_norm(self):
        return self.sobolev_norm(0.0)

    def scaled(self, factor):
        return self.with_amplitudes(factor * self.amplitudes)

    def with_amplitudes(self, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        w = (1 + self.kgrid_f ** 2) ** self.sobolev_q
        hq = float(np.sqrt(np.sum(w * np.abs(amplitudes) ** 2) * self.dk))
        return SpectralProfile(self.kgrid_f, self.dk, amplitudes, self.sobolev_q, hq,
                               self.kind, self.K, self.tail_mass, self.params)

    def to_rows(self):
        return [(float(k), float(a.real), float(a.imag), self.sobolev_q, self.hq_norm)
                for k, a in zip(self.kgrid_f, self.amplitudes)]


def frequency_lattice(dk, K):
    """Lattice points ``j*dk`` with ``|j*dk| <= K``."""
    J = int(np.floor(K / dk + 1e-9))
    return dk * np.arange(-J, J + 1)


def _bump(k, K):
    out = np.zeros_like(k)
    inside = np.abs(k) < K
    out[inside] = np.exp(-1.0 / (1.0 - (k[inside] / K) ** 2))
    return out


def _powerlaw_exponent(q, delta):
    return -(q + 0.5 + delta) / 2


def powerlaw_tail_mass(q, delta, K):
    """``int_{|k|>K} (1+k^2)^{-(q+1/2+delta)} dk`` relative to the full line integral."""
    p = q + 0.5 + delta

    def f(k):
        return (1 + k * k) ** (-p)

    tail, _ = integrate.quad(f, K, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    full, _ = integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    return tail / full


def make_profile(kind, params, kgrid_f):
    """Build a profile on the uniform lattice ``kgrid_f``, normalized to unit L2 norm.

    kinds and parameters:
      ``bump``     K, optional q (label, default 2): exp(-1/(1-(k/K)^2)) on |k| < K;
      ``powerlaw`` q, delta (0.05), K: (1+k^2)^{-(q+1/2+delta)/2} truncated at |k| <= K;
      ``point``    k_hat, w, optional q (label, default 1): Gaussian of width w centred
                   at k_hat, truncated at 8 widths.
    ``kgrid_f`` only fixes the spacing and the origin (it must be a lattice j*dk).
    """
    p = dict(params)
    kg = np.asarray(kgrid_f, dtype=float)
    if kg.size < 2:
        raise ValueError("frequency grid needs at least two points")
    dk = float(kg[1] - kg[0])
    if dk <= 0 or not np.allclose(np.diff(kg), dk, rtol=1e-9, atol=0):
        raise ValueError("frequency grid must be uniform and increasing")
    tail = 0.0
    if kind == "bump":
        K = float(p["K"])
        q = float(p.get("q", 2.0))
        k = frequency_lattice(dk, K)
        a = _bump(k, K)
    elif kind == "powerlaw":
        q = float(p["q"])
        delta = float(p.get("delta", 0.05))
        K = float(p["K"])
        k = frequency_lattice(dk, K)
        a = (1 + k ** 2) ** _powerlaw_exponent(q, delta)
        tail = powerlaw_tail_mass(q, delta, K)
    elif kind == "point":
        k_hat, w = float(p["k_hat"]), float(p["w"])
        q = float(p.get("q", 1.0))
        K = abs(k_hat) + 8 * w
        k = frequency_lattice(dk, K)
        k = k[np.abs(k - k_hat) <= 8 * w]
        a = np.exp(-0.5 * ((k - k_hat) / w) ** 2)
    else:
        raise UnsupportedKind(f"profile kind {kind!r} not in {PROFILE_KINDS}")
    keep = a != 0
    k, a = k[keep], a[keep].astype(complex)
    if k.size == 0:
        raise ValueError("profile support contains no lattice point")
    a = a / np.sqrt(np.sum(np.abs(a) ** 2) * dk)
    w8 = (1 + k ** 2) ** q
    hq = float(np.sqrt(np.sum(w8 * np.abs(a) ** 2) * dk))
    return SpectralProfile(kgrid_f=k, dk=dk, amplitudes=a, sobolev_q=q, hq_norm=hq,
                           kind=kind, K=K, tail_mass=tail, params=p)


# -- torus and fields ---------------------------------------------------------

@dataclass(frozen=True)
class FieldGrid:
    """Uniform grid ``x_p = -L/2 + p*L/M`` on the torus ``[-L/2, L/2)``."""
    L: float
    M: int

    @property
    def dx(self):
        return self.L / self.M

    @property
    def dk(self):
        return 2 * np.pi / self.L

    @property
    def x(self):
        return -0.5 * self.L + self.dx * np.arange(self.M)

    def cells(self, eps):
        """``(n_cells, points_per_cell)`` for an eps-commensurate grid."""
        nc = self.L / eps
        n_cells = int(round(nc))
        if abs(nc - n_cells) > 1e-9 * nc or n_cells % 2:
            raise GridMismatch(f"L={self.L} is not an even multiple of eps={eps}")
        if self.M % n_cells:
            raise GridMismatch(f"M={self.M} is not a multiple of the {n_cells} cells")
        return n_cells, self.M // n_cells

    def same_as(self, other):
        return self.M == other.M and abs(self.L - other.L) <= 1e-12 * self.L


def make_grid(eps, n_cells, points_per_cell):
    if n_cells % 2:
        raise GridMismatch("the number of cells must be even")
    return FieldGrid(L=n_cells * eps, M=n_cells * points_per_cell)


@dataclass(frozen=True)
class WaveField:
    grid: FieldGrid
    values: np.ndarray
    eps: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def xgrid(self):
        return self.grid.x

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx))

    def __add__(self, other):
        _check_same(self, other)
        return WaveField(self.grid, self.values + other.values, self.eps)

    def __sub__(self, other):
        _check_same(self, other)
        return WaveField(self.grid, self.values - other.values, self.eps)

    def scale(self, c):
        return WaveField(self.grid, c * self.values, self.eps, dict(self.meta))

    def to_rows(self):
        return [(float(x), float(v.real), float(v.imag))
                for x, v in zip(self.xgrid, self.values)]


def _check_same(a, b):
    if not a.grid.same_as(b.grid):
        raise GridMismatch("fields live on different grids")


def mode_spectrum(field):
    """Torus coefficients ``U_m`` with ``u(x_p) = sum_m U_m e^{i m dk x_p}``,
    indexed by ``m mod M`` (numpy FFT order)."""
    M = field.grid.M
    return np.fft.fft(field.values) / M * _offset_signs(M)


def _offset_signs(M):
    # e^{i m dk x_p} = (-1)^m e^{2 pi i m p / M} because x_0 = -L/2 and M is even
    return np.where(np.arange(M) % 2 == 0, 1.0, -1.0)


def _from_modes(grid, U):
    if grid.M % 2:
        raise GridMismatch("grid size M must be even")
    return grid.M * np.fft.ifft(U * _offset_signs(grid.M))


def inverse_transform(profile, grid, multiplier=None):
    """Plain inverse Fourier transform of a profile sampled on ``grid`` (eps = 0)."""
    _check_lattice(profile, grid)
    j = profile.indices
    if np.any(np.abs(j) >= grid.M // 2):
        raise GridMismatch("profile support exceeds the grid's Nyquist band")
    a = profile.amplitudes if multiplier is None else profile.amplitudes * multiplier
    U = np.zeros(grid.M, dtype=complex)
    U[j % grid.M] = profile.dk / SQRT_2PI * a
    return WaveField(grid, _from_modes(grid, U), 0.0)


def forward_transform(field, kgrid_f):
    """Fourier amplitudes of a field at lattice frequencies ``kgrid_f``."""
    j = np.rint(np.asarray(kgrid_f) / field.grid.dk).astype(np.int64)
    return mode_spectrum(field)[j % field.grid.M] * SQRT_2PI / field.grid.dk


def _check_lattice(profile, grid):
    if abs(profile.dk - grid.dk) > 1e-12 * grid.dk:
        raise GridMismatch(f"profile spacing {profile.dk} != torus spacing {grid.dk}")


# -- Bloch function sampling ----------------------------------------------------

class BlochSampler:
    """Energies and gauge-fixed Bloch coefficients of one band at arbitrary
    quasimomenta.

    Each query is an exact cell eigensolve; its phase is aligned to the
    cubic-spline interpolant (coefficient-wise in k) of a gauge-fixed
    reference table, so the returned family is smooth in k.
    """

    def __init__(self, coeffs, N, band, ref_k, ref_vecs, side="right"):
        self.coeffs, self.N, self.band, self.side = coeffs, N, band, side
        self.ref_k = np.asarray(ref_k, dtype=float)
        self._spline = CubicSpline(self.ref_k, np.asarray(ref_vecs), axis=0)
        self._cache = {}

    @classmethod
    def from_edge(cls, edge: BandEdgeData):
        return cls(edge.coeffs, edge.N, edge.s, edge.kgrid, edge.phi_window)

    @classmethod
    def from_table(cls, table: BandTable, l):
        return cls(table.coeffs, table.N, l, table.kgrid, table.eigvecs[:, l - 1, :])

    def __call__(self, kq):
        kq = np.atleast_1d(np.asarray(kq, dtype=float))
        lo, hi = self.ref_k[0], self.ref_k[-1]
        if np.any(kq < lo - 1e-12) or np.any(kq > hi + 1e-12):
            raise ZoneOverflow("quasimomentum outside the reference window")
        E = np.empty(kq.size)
        C = np.empty((kq.size, 2 * self.N + 1), dtype=complex)
        for i, k in enumerate(kq):
            E[i], C[i] = self._point(float(k))
        return E, C

    def _point(self, k):
        key = round(k, 14)
        hit = self._cache.get(key)
        if hit is None:
            vals, vecs = solve_point(self.coeffs, k, self.N, self.band, self.side)
            ref = self._spline(k)
            vec, ov = align_phase(ref, vecs[self.band - 1])
            if ov < 0.9 * np.linalg.norm(ref):
                raise GaugeBreak(f"Bloch function at k={k:.6g} departs from the interpolated gauge")
            hit = (float(vals[self.band - 1]), vec)
            self._cache[key] = hit
        return hit


_SAMPLERS = {}


def sampler_for(source, l=None):
    """Shared sampler for an edge (band s around k0) or a table band ``l``."""
    key = (id(source), l)
    entry = _SAMPLERS.get(key)
    if entry is None or entry[0] is not source:
        if isinstance(source, BandEdgeData):
            s = BlochSampler.from_edge(source)
        elif isinstance(source, BandTable):
            s = BlochSampler.from_table(source, l)
        else:
            raise TypeError("source must be BandEdgeData or BandTable")
        entry = (source, s)
        _SAMPLERS[key] = entry
    return entry[1]


def coefficient_bandwidth(vectors, tol=1e-14):
    """Largest |n| whose coefficient exceeds ``tol`` anywhere in ``vectors``."""
    V = np.abs(np.atleast_2d(vectors))
    N = (V.shape[1] - 1) // 2
    n = np.abs(np.arange(-N, N + 1))
    big = np.max(V, axis=0) > tol
    return int(n[big].max()) if big.any() else 0


def points_per_cell(edge, minimum=8, tol=1e-14):
    """Cell resolution that carries every Bloch mode above ``tol`` without aliasing."""
    P = max(minimum, 2 * coefficient_bandwidth(edge.phi_window, tol) + 2)
    return P + (P % 2)


# -- synthesis plans ----------------------------------------------------------

@dataclass(frozen=True)
class SynthesisPlan:
    edge: BandEdgeData
    eps: float
    direction: str      # "Plus" (left edges) or "Minus" (right edges)
    shifted: bool

    def __post_init__(self):
        want = "Plus" if self.edge.sign > 0 else "Minus"
        if self.direction != want:
            raise ValueError(f"{self.edge.condition} requires direction {want}")
        if self.shifted != self.edge.shifted:
            raise ValueError("shifted must match k0 = pi")
        if not self.eps > 0:
            raise ValueError("eps must be positive")


def make_plan(edge, eps):
    return SynthesisPlan(edge, float(eps), "Plus" if edge.sign > 0 else "Minus", edge.shifted)


def _mode_layout(grid, eps, j, shifted, n_modes):
    """Torus mode numbers for terms (j, n), n = -n_modes..n_modes."""
    nc, _ = grid.cells(eps)
    n = np.arange(-n_modes, n_modes + 1)
    m = j[:, None] + nc * n[None, :]
    if shifted:
        m = m + nc // 2
    return m


def _kept_modes(grid, eps, N):
    nc, P = grid.cells(eps)
    return min(N, (P - 2) // 2)


def synthesize_amplitudes(grid, eps, j, amplitudes, C, shifted):
    """Field ``(2 pi)^{-1/2} dk sum_j a_j e^{ik_j x} sum_n c_n(j) e^{2 pi i n x/eps}``
    (times e^{i pi x/eps} if shifted) on ``grid``. Returns (values, alias_tail)."""
    N = (C.shape[1] - 1) // 2
    nk = _kept_modes(grid, eps, N)
    Ck = C[:, N - nk:N + nk + 1]
    dropped = np.sum(np.abs(C) ** 2, axis=1) - np.sum(np.abs(Ck) ** 2, axis=1)
    m = _mode_layout(grid, eps, j, shifted, nk)
    U = np.zeros(grid.M, dtype=complex)
    np.add.at(U, (m % grid.M).ravel(), ((grid.dk / SQRT_2PI) * amplitudes[:, None] * Ck).ravel())
    tail = float(np.max(dropped)) if dropped.size else 0.0
    return _from_modes(grid, U), max(tail, 0.0)


def _zone_check(eps, profile):
    kmax = float(np.max(np.abs(profile.kgrid_f)))
    if eps * kmax >= np.pi:
        raise ZoneOverflow(f"eps*K = {eps * kmax:.4g} >= pi: more than one band would contribute")


def bloch_data(plan, profile):
    """(energies, coefficient rows) of band s at ``k0 + eps*k_j`` for the profile lattice."""
    _zone_check(plan.eps, profile)
    return sampler_for(plan.edge)(plan.edge.k0 + plan.eps * profile.kgrid_f)


def synthesize(plan: SynthesisPlan, profile: SpectralProfile, grid: FieldGrid,
               amplitudes=None):
    """Band-s synthesis of ``profile`` (optionally with replaced amplitudes)."""
    _zone_check(plan.eps, profile)
    _check_lattice(profile, grid)
    grid.cells(plan.eps)
    _, C = bloch_data(plan, profile)
    a = profile.amplitudes if amplitudes is None else np.asarray(amplitudes)
    vals, tail = synthesize_amplitudes(grid, plan.eps, profile.indices, a, C, plan.shifted)
    return WaveField(grid, vals, plan.eps, {"alias_tail": tail})


def synthesize_band(table: BandTable, l, eps, profile: SpectralProfile, grid: FieldGrid):
    """Synthesis on band ``l`` of a table at quasimomenta ``eps*k`` (no edge shift)."""
    _zone_check(eps, profile)
    _check_lattice(profile, grid)
    _, C = sampler_for(table, l)(eps * profile.kgrid_f)
    vals, tail = synthesize_amplitudes(grid, eps, profile.indices, profile.amplitudes, C, False)
    return WaveField(grid, vals, eps, {"alias_tail": tail})


def bloch_coeff(field: WaveField, source, l=None, eps=None, kgrid_f=None, shifted=None):
    """Band-``l`` analysis amplitudes of ``field`` at the lattice frequencies ``kgrid_f``.

    ``source`` is a BandEdgeData (band s around its k0; ``l`` ignored) or a
    BandTable (band ``l`` at quasimomentum ``eps*k``).
    """
    eps = field.eps if eps is None else eps
    if not eps or eps <= 0:
        raise GridMismatch("analysis needs an eps-commensurate field")
    kgrid_f = np.asarray(kgrid_f, dtype=float)
    j = np.rint(kgrid_f / field.grid.dk).astype(np.int64)
    if np.max(np.abs(kgrid_f - j * field.grid.dk), initial=0.0) > 1e-9 * field.grid.dk:
        raise GridMismatch("analysis frequencies are not torus lattice points")
    if isinstance(source, BandEdgeData):
        k0 = source.k0
        sampler = sampler_for(source)
        shifted = source.shifted if shifted is None else shifted
    else:
        k0 = 0.0
        sampler = sampler_for(source, l)
        shifted = bool(shifted)
    if np.max(np.abs(eps * kgrid_f), initial=0.0) >= np.pi:
        raise ZoneOverflow("eps*|k| >= pi")
    _, C = sampler(k0 + eps * kgrid_f)
    N = (C.shape[1] - 1) // 2
    nk = _kept_modes(field.grid, eps, N)
    U = mode_spectrum(field)
    m = _mode_layout(field.grid, eps, j, shifted, nk) % field.grid.M
    Ck = C[:, N - nk:N + nk + 1]
    return SQRT_2PI / field.grid.dk * np.sum(np.conj(Ck) * U[m], axis=1)


def cell_samples(coeff_vec, points_per_cell):
    """Values of a cell function at ``y = p/P``, p = 0..P-1."""
    y = np.arange(points_per_cell) / points_per_cell
    N = (len(coeff_vec) - 1) // 2
    n = np.arange(-N, N + 1)
    return np.exp(2j * np.pi * np.outer(y, n)) @ coeff_vec


def modulation(grid, eps, phi_coeffs, shifted):
    """Samples of ``phi(x/eps) [* e^{i pi x/eps}]`` on an eps-commensurate grid."""
    nc, P = grid.cells(eps)
    # x_p / eps = -nc/2 + p/P and nc/2 is an integer, so the cell phase is p mod P
    phi = np.tile(cell_samples(phi_coeffs, P), nc)
    if shifted:
        p = np.arange(grid.M)
        phi = phi * ((-1) ** (nc // 2)) * np.exp(1j * np.pi * p / P)
    return phi


def torus_cells(eps_values, extent, even=True):
    """Smallest cell count making ``L >= extent`` with L a common even multiple of
    every eps (the eps values must divide the largest one)."""
    eps_values = np.asarray(eps_values, dtype=float)
    e_max = float(eps_values.max())
    for e in eps_values:
        r = e_max / e
        if abs(r - round(r)) > 1e-9:
            raise GridMismatch(f"eps={e} does not divide eps_max={e_max}")
    unit = 2 * e_max if even else e_max
    L = unit * max(1, int(np.ceil(extent / unit - 1e-12)))
    return L
