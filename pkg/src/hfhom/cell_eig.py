"""Quasimomentum cell problems: Fourier-Galerkin assembly, generalized
Hermitian eigensolves and phase-fixed band tables.

The cell form ``a(k)[u] = int_0^1 g |phi' + i k phi|^2 dx`` with ``u = omega*phi``
is discretized in the basis ``exp(2 pi i n x)``, ``n = -N..N``, for the
phi-variable; the mass matrix is the Galerkin matrix of ``int omega^2 |phi|^2``.
Bloch functions are stored in the u-variable (multiplied back by omega) as
Fourier coefficient vectors with unit L2(0, 1) norm.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .coefficients import PeriodicCoefficients, trig_eval
from .errors import EigFailure, KNotInGrid

TWO_PI = 2.0 * np.pi
RESIDUAL_TOL = 1e-8
DEGENERACY_TOL = 1e-7


def free_band(l, k):
    """Closed-form bands of ``-d^2/dx^2``: k^2, (2 pi j - |k|)^2, (2 pi j + |k|)^2."""
    if l < 1:
        raise ValueError("band index starts at 1")
    k = np.abs(np.asarray(k, dtype=float))
    if l == 1:
        return k ** 2
    j = l // 2
    return (TWO_PI * j - k) ** 2 if l % 2 == 0 else (TWO_PI * j + k) ** 2


def fold_k(k):
    """Return ``(kf, m)`` with ``k = kf + 2 pi m`` and ``kf`` in (-pi, pi]."""
    m = int(np.ceil((k - np.pi) / TWO_PI - 1e-14))
    kf = k - TWO_PI * m
    if kf <= -np.pi + 1e-14:   # guard the closed end of the zone
        kf += TWO_PI
        m -= 1
    return kf, m


def shift_modes(vec, m):
    """Coefficients of ``exp(-2 pi i m x) * f`` given those of ``f`` (zero fill).

    Used for ``phi(x, k + 2 pi m) = exp(-2 pi i m x) phi(x, k)``.
    """
    if m == 0:
        return vec
    out = np.zeros_like(vec)
    if m > 0:
        out[..., :-m] = vec[..., m:]
    else:
        out[..., -m:] = vec[..., :m]
    return out


@lru_cache(maxsize=32)
def _galerkin_data(coeffs: PeriodicCoefficients, N: int):
    g_hat = coeffs.fourier("g", 2 * N)
    w2_hat = coeffs.fourier("omega_sq", 2 * N)
    w_hat = coeffs.fourier("omega", 2 * N)
    # Toeplitz T[m, n] = c_{m-n}; index 2N is mode 0
    g_toep = sla.toeplitz(g_hat[2 * N:], g_hat[2 * N::-1])
    gram = sla.toeplitz(w2_hat[2 * N:], w2_hat[2 * N::-1])
    gram = 0.5 * (gram + gram.conj().T)
    identity_gram = bool(np.max(np.abs(gram - np.eye(2 * N + 1))) < 1e-15)
    chol = None if identity_gram else sla.cholesky(gram, lower=True)
    return g_toep, gram, chol, w_hat


@dataclass(frozen=True)
class CellOperator:
    """Galerkin matrices of the cell problem at one (folded) quasimomentum."""

    k: float
    k_folded: float
    zone_shift: int
    N: int
    stiffness: np.ndarray
    gram: np.ndarray
    coeffs: PeriodicCoefficients = field(repr=False)

    @property
    def modes(self):
        return np.arange(-self.N, self.N + 1)

    def stiffness_derivative(self):
        """d(stiffness)/dk at the folded quasimomentum."""
        g_toep = _galerkin_data(self.coeffs, self.N)[0]
        q = TWO_PI * self.modes + self.k_folded
        return g_toep * (q[:, None] + q[None, :])


@dataclass(frozen=True)
class HermitianEigResult:
    values: np.ndarray
    vectors: np.ndarray      # columns, gram-orthonormal, phi-variable
    residuals: np.ndarray


def assemble(coeffs, k, N=64):
    if N < 8:
        raise ValueError("N must be >= 8")
    kf, m = fold_k(float(k))
    g_toep, gram, _, _ = _galerkin_data(coeffs, N)
    q = TWO_PI * np.arange(-N, N + 1) + kf
    stiff = g_toep * np.outer(q, q)
    stiff = 0.5 * (stiff + stiff.conj().T)
    return CellOperator(k=float(k), k_folded=kf, zone_shift=m, N=N,
                        stiffness=stiff, gram=gram, coeffs=coeffs)


def solve_bands(cellop, l_max):
    """Lowest ``l_max`` eigenpairs of ``stiffness v = E gram v``.

    Cholesky congruence to a standard Hermitian problem, dense LAPACK solve,
    then eigenvalues recomputed as Rayleigh quotients (accurate relative to E
    rather than to the matrix norm, which grows like N^2).
    """
    n = 2 * cellop.N + 1
    if not 1 <= l_max <= n:
        raise ValueError(f"l_max must be in [1, {n}]")
    chol = _galerkin_data(cellop.coeffs, cellop.N)[2]
    S, G = cellop.stiffness, cellop.gram
    try:
        if chol is None:
            _, y = sla.eigh(S, subset_by_index=[0, l_max - 1])
            V = y
        else:
            tmp = sla.solve_triangular(chol, S, lower=True)
            C = sla.solve_triangular(chol, tmp.conj().T, lower=True).conj().T
            C = 0.5 * (C + C.conj().T)
            _, y = sla.eigh(C, subset_by_index=[0, l_max - 1])
            V = sla.solve_triangular(chol.conj().T, y, lower=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigFailure(f"eigensolver failed: {exc}", k=cellop.k) from exc
    SV = S @ V
    vals = np.real(np.einsum("ij,ij->j", V.conj(), SV))
    order = np.argsort(vals, kind="stable")
    vals, V, SV = vals[order], V[:, order], SV[:, order]
    res = np.linalg.norm(SV - (G @ V) * vals, axis=0)
    if not np.all(np.isfinite(res)) or np.any(res > RESIDUAL_TOL * (1 + np.abs(vals))):
        raise EigFailure(f"residual {res.max():.2e} above tolerance", k=cellop.k)
    return HermitianEigResult(values=vals, vectors=V, residuals=res)


def to_u_variable(coeffs, phi_vecs, N):
    """Fourier coefficients of ``omega * phi`` on modes -N..N, unit L2 norm."""
    w_hat = _galerkin_data(coeffs, N)[3]
    phi_vecs = np.atleast_2d(phi_vecs)
    if coeffs.is_free():
        out = phi_vecs.astype(complex)
    else:
        full = np.array([np.convolve(w_hat, p) for p in phi_vecs])
        c = full.shape[1] // 2
        out = full[:, c - N:c + N + 1]
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def _rotate_degenerate(cellop, values, V, side):
    """Rotate degenerate clusters onto analytic branches.

    ``side='left'`` labels for continuation from smaller k (the lower label
    takes the larger slope); ``side='right'`` for larger k.
    """
    l_max = len(values)
    i = 0
    dS = None
    while i < l_max:
        j = i + 1
        while j < l_max and values[j] - values[i] < DEGENERACY_TOL * (1 + abs(values[i])):
            j += 1
        if j - i > 1:
            if dS is None:
                dS = cellop.stiffness_derivative()
            block = V[:, i:j]
            D = block.conj().T @ dS @ block
            slopes, R = np.linalg.eigh(0.5 * (D + D.conj().T))
            if side == "left":
                R = R[:, ::-1]
            V[:, i:j] = block @ R
        i = j
    return V


def solve_point(coeffs, k, N, l_max, side="right"):
    """Energies and u-variable Bloch coefficients at one quasimomentum (raw phase)."""
    op = assemble(coeffs, k, N)
    # one extra pair so that a cluster straddling l_max is complete
    n_solve = min(l_max + 1, 2 * N + 1)
    res = solve_bands(op, n_solve)
    V = _rotate_degenerate(op, res.values, res.vectors.copy(), side)
    u = to_u_variable(coeffs, V[:, :l_max].T, N)
    return res.values[:l_max], shift_modes(u, op.zone_shift)


def real_gauge(uvec, k0, n_points=None):
    """Unit phase making ``exp(i k0 x) u(x)`` real with positive mean."""
    N = (len(uvec) - 1) // 2
    x = np.arange(n_points or 4 * (2 * N + 1)) / (n_points or 4 * (2 * N + 1))
    psi = np.exp(1j * k0 * x) * trig_eval(uvec, x)
    s = np.sum(psi ** 2)
    alpha = 0.5 * np.angle(s) if abs(s) > 0 else 0.0
    psi = psi * np.exp(-1j * alpha)
    mean = np.mean(psi.real)
    if abs(mean) > 1e-8:
        sign = np.sign(mean)
    else:
        sign = np.sign(psi.real[np.argmax(np.abs(psi))]) or 1.0
    return sign * np.exp(-1j * alpha)


def align_phase(ref, vec):
    """Multiply ``vec`` by a unit scalar making ``<ref, vec>`` real positive."""
    ov = np.vdot(ref, vec)
    if abs(ov) == 0:
        return vec, 0.0
    return vec * (np.conj(ov) / abs(ov)), abs(ov)


def march_table(coeffs, kgrid, N, l_max, anchor_index, k0):
    """Solve on ``kgrid`` and fix phases by marching outward from ``anchor_index``.

    Returns energies (nk, l_max), u-coefficients (nk, l_max, 2N+1) and the
    minimal neighbour overlap per band.
    """
    kgrid = np.asarray(kgrid, dtype=float)
    nk = len(kgrid)
    energies = np.empty((nk, l_max))
    vecs = np.empty((nk, l_max, 2 * N + 1), dtype=complex)
    min_overlap = np.ones(l_max)

    def solve(i, side):
        energies[i], vecs[i] = solve_point(coeffs, kgrid[i], N, l_max, side)

    # At a degenerate anchor the analytic branch differs on the two sides,
    # so each outward march starts from its own one-sided representative.
    starts = {}
    for side in ("left", "right"):
        e, v = solve_point(coeffs, kgrid[anchor_index], N, l_max, side)
        for l in range(l_max):
            v[l] *= real_gauge(v[l], k0)
        starts[side] = v
    energies[anchor_index], vecs[anchor_index] = e, starts["right"]
    for direction, side in ((1, "left"), (-1, "right")):
        i = anchor_index + direction
        prev = starts["right" if direction == 1 else "left"]
        while 0 <= i < nk:
            solve(i, side)
            for l in range(l_max):
                vecs[i, l], ov = align_phase(prev[l], vecs[i, l])
                min_overlap[l] = min(min_overlap[l], ov)
            prev = vecs[i]
            i += direction
    return energies, vecs, min_overlap


@dataclass(frozen=True)
class BandTable:
    kgrid: np.ndarray
    energies: np.ndarray          # (nk, l_max)
    eigvecs: np.ndarray           # (nk, l_max, 2N+1) u-variable coefficients
    N: int
    phase_anchor: tuple           # per band reference quasimomentum
    coeffs: PeriodicCoefficients = field(repr=False)
    min_overlap: np.ndarray = field(default=None, repr=False)

    @property
    def l_max(self):
        return self.energies.shape[1]

    def index_of(self, k, tol=1e-12):
        i = int(np.argmin(np.abs(self.kgrid - k)))
        if abs(self.kgrid[i] - k) > tol:
            raise KNotInGrid(f"k={k!r} is not a grid point")
        return i

    def energy(self, l, k):
        return self.energies[self.index_of(k), l - 1]

    def vector(self, l, k):
        return self.eigvecs[self.index_of(k), l - 1]


def uniform_kgrid(n=257):
    if n < 3 or n % 2 == 0:
        raise ValueError("k-grid size must be odd and >= 3")
    return np.linspace(-np.pi, np.pi, n)


def band_table(coeffs, kgrid=None, N=64, l_max=5, anchor=0.0):
    """Band functions and phase-fixed Bloch functions on a symmetric grid.

    ``anchor`` is 0 or pi: the quasimomentum where each band's representative
    is made real. From pi the march runs inward from both zone ends.
    """
    kgrid = uniform_kgrid() if kgrid is None else np.sort(np.asarray(kgrid, dtype=float))
    if not np.allclose(kgrid, -kgrid[::-1], atol=1e-12):
        raise ValueError("k-grid must be symmetric about 0")
    for req in (0.0, np.pi):
        if np.min(np.abs(kgrid - req)) > 1e-12:
            raise ValueError("k-grid must contain 0 and +-pi")
    nk = len(kgrid)
    i0 = int(np.argmin(np.abs(kgrid)))
    if np.isclose(anchor, 0.0):
        E, V, ov = march_table(coeffs, kgrid, N, l_max, i0, 0.0)
    elif np.isclose(abs(anchor), np.pi):
        El, Vl, ovl = march_table(coeffs, kgrid[:i0 + 1], N, l_max, 0, -np.pi)
        Er, Vr, ovr = march_table(coeffs, kgrid[i0:], N, l_max, nk - 1 - i0, np.pi)
        E = np.concatenate([El[:-1], Er])
        V = np.concatenate([Vl[:-1], Vr])
        ov = np.minimum(ovl, ovr)
    else:
        raise ValueError("anchor must be 0 or pi")
    return BandTable(kgrid=kgrid, energies=E, eigvecs=V, N=N,
                     phase_anchor=(float(anchor),) * l_max, coeffs=coeffs,
                     min_overlap=ov)


def evaluate_bloch(table, l, k, xgrid):
    """Samples of the stored Bloch function ``phi_l(x, k)`` at ``xgrid``."""
    return trig_eval(table.vector(l, k), xgrid)
