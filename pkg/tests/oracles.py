"""Independent reference computations used to pin derived test values.

Nothing here imports the package's solver code: the cell problem is
discretized by second-order finite differences in physical space (flux
form, Bloch-twisted periodic closure) and extrapolated in the mesh size.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import integrate, special


def fd_bloch_matrices(g_check, omega, k, M):
    """Sparse finite-difference pencil (H, W) for -(g phi')' = E omega^2 phi
    on the Bloch-twisted unknown u = exp(ikx) phi, u(x+1) = exp(ik) u(x)."""
    h = 1.0 / M
    x = np.arange(M) * h
    xm = x + 0.5 * h
    g_half = omega(xm) ** 2 * g_check(xm)           # g at j+1/2
    diag = (g_half + np.roll(g_half, 1)) / h ** 2
    off = -g_half[:-1] / h ** 2
    H = sp.diags([diag, off, off], [0, 1, -1], format="lil", dtype=complex)
    H[M - 1, 0] = -g_half[-1] * np.exp(1j * k) / h ** 2
    H[0, M - 1] = -g_half[-1] * np.exp(-1j * k) / h ** 2
    W = sp.diags(omega(x) ** 2, 0, format="csc", dtype=complex)
    return H.tocsc(), W


def fd_bands(g_check, omega, k, M, n_bands=3):
    """Lowest FD band energies via sparse shift-invert Lanczos."""
    H, W = fd_bloch_matrices(g_check, omega, k, M)
    vals = spla.eigsh(H, k=n_bands, M=W, sigma=-1.0, which="LM",
                      return_eigenvectors=False, tol=1e-14)
    return np.sort(vals.real)


def fd_bands_extrapolated(g_check, omega, k, M=2048, n_bands=3):
    """Richardson extrapolation of the O(h^2) scheme from M and 2M points."""
    e1 = fd_bands(g_check, omega, k, M, n_bands)
    e2 = fd_bands(g_check, omega, k, 2 * M, n_bands)
    return (4 * e2 - e1) / 3


def fd_ground_state(g_check, k, M=2048):
    """Real ground-state profile for omega = 1 at k = 0, unit L2 norm, positive."""
    H, _ = fd_bloch_matrices(g_check, lambda x: np.ones_like(x), k, M)
    vals, vecs = spla.eigsh(H.real.tocsc(), k=1, sigma=-1.0, which="LM", tol=1e-14)
    v = vecs[:, 0]
    v = v / np.sqrt(np.mean(v ** 2))
    return np.arange(M) / M, v * np.sign(v.mean())


def harmonic_mean(g_check, n=1 << 14):
    x = np.arange(n) / n
    return 1.0 / np.mean(1.0 / g_check(x))


def dispersion_fit(g_check, omega, k0, band, deltas, M=2048, degree=4):
    """Fit E(k0 + d) = sum_j c_j d^(2j) on FD band energies (j = 0..degree)."""
    E = np.array([fd_bands_extrapolated(g_check, omega, k0 + d, M, band)[band - 1]
                  for d in deltas])
    A = np.vander(np.asarray(deltas) ** 2, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(A, E, rcond=None)
    return coef


def weighted_normalizer(s=0.2):
    """c with ||c exp(s cos 2 pi x)||_{L2(0,1)} = 1, by adaptive quadrature and
    by the modified-Bessel closed form, returned as a pair."""
    val, _ = integrate.quad(lambda x: np.exp(2 * s * np.cos(2 * np.pi * x)), 0, 1,
                            epsabs=1e-14, epsrel=1e-14)
    return 1 / np.sqrt(val), 1 / np.sqrt(special.iv(0, 2 * s))


def bessel_coefficients(s, N):
    """Fourier coefficients of exp(s cos 2 pi x): I_|n|(s)."""
    n = np.arange(-N, N + 1)
    return special.iv(np.abs(n), s)
