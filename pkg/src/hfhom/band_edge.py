"""Spectral gaps at k = 0, pi and band-edge expansion data.

Near an edge quasimomentum k0 the band function and Bloch function expand as
``E(k) = sigma + sign*b*(k-k0)^2 + (k-k0)^4 gamma(k)`` and
``phi(x, k) = phi_k0(x) + (k-k0) theta(x, k)``. The square-root expansion
``|E - sigma|^(1/2) = b^(1/2)|k-k0| + sign*|k-k0|^3 gamma_tilde(k)`` feeds the
wave-equation estimates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cell_eig import BandTable, band_table, march_table, uniform_kgrid
from .coefficients import trig_eval
from .errors import DegenerateEdge, GaugeBreak, NoAdmissibleKappa

# condition -> (band parity (1 odd, 0 even), k0, sign, edge side)
CONDITIONS = {
    "Cond1": (1, 0.0, +1, "Min"),
    "Cond2": (0, 0.0, -1, "Max"),
    "Cond3": (1, np.pi, -1, "Max"),
    "Cond4": (0, np.pi, +1, "Min"),
}

DEFAULT_STEP = np.pi / 256
DEFAULT_KAPPA_CAP = 0.9 * np.pi


def condition_sign(condition):
    return CONDITIONS[condition][2]


@dataclass(frozen=True)
class GapReport:
    s: int
    condition: str
    gap_interval: tuple       # (lower, upper); lower may be -inf
    k0: float
    edge_side: str

    @property
    def width(self):
        return self.gap_interval[1] - self.gap_interval[0]


def classify(table: BandTable, s, gap_tolerance=1e-6):
    """Every condition for band ``s`` whose adjacent gap is wider than the tolerance."""
    if not 1 <= s <= table.l_max - 1:
        raise ValueError(f"band {s} needs a neighbour: l_max={table.l_max}")

    def E(l, k):
        return -np.inf if l == 0 else table.energy(l, k)

    candidates = {
        "Cond1": (E(s - 1, 0.0), E(s, 0.0)),
        "Cond2": (E(s, 0.0), E(s + 1, 0.0)),
        "Cond3": (E(s, np.pi), E(s + 1, np.pi)),
        "Cond4": (E(s - 1, np.pi), E(s, np.pi)),
    }
    out = []
    for name, (lo, hi) in candidates.items():
        parity, k0, _, side = CONDITIONS[name]
        if s % 2 != parity:
            continue
        if hi - lo > gap_tolerance:
            out.append(GapReport(s=s, condition=name, gap_interval=(lo, hi), k0=k0,
                                 edge_side=side))
    return out


def richardson_curvature(E, step_index, h, levels=3):
    """Second derivative at the centre of a uniform table.

    Five-point centred differences at spacings H, 2H, 4H, ... (H = step_index*h)
    combined by repeated Richardson extrapolation; ``levels`` eliminations
    remove the H^4, H^6, ... error terms in turn.
    """
    c = (len(E) - 1) // 2

    def d2(m):
        H = m * h
        return (-E[c + 2 * m] + 16 * E[c + m] - 30 * E[c] + 16 * E[c - m]
                - E[c - 2 * m]) / (12 * H ** 2)

    table = [d2(step_index * 2 ** j) for j in range(levels + 1)]
    for lev in range(levels):
        factor = 4.0 ** (lev + 2)
        table = [(factor * table[j] - table[j + 1]) / (factor - 1)
                 for j in range(len(table) - 1)]
    return table[0]


def quartic_extrapolate(deltas, values, n_points=8):
    """Least-squares fit ``c0 + c2 d^2 + c4 d^4`` on the ``n_points`` samples
    nearest to d = 0 (excluding it); returns c0."""
    order = np.argsort(np.abs(deltas))
    sel = [i for i in order if deltas[i] != 0][:n_points]
    d = np.asarray(deltas)[sel]
    A = np.stack([np.ones_like(d), d ** 2, d ** 4], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.asarray(values)[sel], rcond=None)
    return float(coef[0])


@dataclass(frozen=True)
class DispersionFit:
    sigma: float
    b: float
    gamma: np.ndarray
    gamma_at_k0: float
    gamma_tilde: np.ndarray
    gamma_tilde_at_k0: float


def fit_dispersion(deltas, energies, sign, curvature_step=1, curvature_levels=3):
    """Edge expansion coefficients from band energies on a uniform window
    ``deltas`` (odd length, centred on 0)."""
    deltas = np.asarray(deltas, dtype=float)
    E = np.asarray(energies, dtype=float)
    c = (len(deltas) - 1) // 2
    if deltas[c] != 0:
        raise ValueError("window must be centred on the edge")
    h = deltas[1] - deltas[0]
    sigma = float(E[c])
    b = float(sign * richardson_curvature(E, curvature_step, h, curvature_levels) / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = (E - sigma - sign * b * deltas ** 2) / deltas ** 4
    g0 = quartic_extrapolate(deltas, gamma)
    gamma[c] = g0
    # gamma_tilde = gamma / (b^(1/2) + (b + sign d^2 gamma)^(1/2)): the exact
    # rationalized form of the square-root expansion, regular at d = 0.
    with np.errstate(invalid="ignore"):
        gamma_tilde = gamma / (np.sqrt(b) + np.sqrt(b + sign * deltas ** 2 * gamma))
    gt0 = g0 / (2 * np.sqrt(b))
    return DispersionFit(sigma, b, gamma, g0, gamma_tilde, gt0)


def admissible_points(deltas, gamma, gamma_tilde, gamma0, gamma_tilde0, b):
    """Pointwise truth of the three kappa inequality families."""
    ag, agt = np.abs(gamma), np.abs(gamma_tilde)
    with np.errstate(invalid="ignore"):
        ok = ((0.5 * abs(gamma0) <= ag) & (ag <= 1.5 * abs(gamma0))
              & (0.5 * abs(gamma_tilde0) <= agt) & (agt <= 1.5 * abs(gamma_tilde0))
              & (np.asarray(deltas) ** 2 * agt <= 0.5 * np.sqrt(b)))
    return ok & np.isfinite(gamma) & np.isfinite(gamma_tilde)


def select_kappa(deltas, gamma, gamma_tilde, gamma0, gamma_tilde0, b,
                 kappa_cap=DEFAULT_KAPPA_CAP):
    """Largest tabulated radius <= kappa_cap on whose whole disc all three
    inequality families hold (decreasing scan over grid radii)."""
    deltas = np.asarray(deltas, dtype=float)
    ok = admissible_points(deltas, gamma, gamma_tilde, gamma0, gamma_tilde0, b)
    radii = np.unique(np.abs(deltas[deltas != 0]))
    radii = radii[radii <= kappa_cap + 1e-12]
    for r in radii[::-1]:
        if np.all(ok[np.abs(deltas) <= r + 1e-12]):
            return float(r)
    raise NoAdmissibleKappa("no grid radius satisfies the kappa inequalities")


def multiplier_norm_from_table(theta, deltas, kappa):
    """``max_x (sup_k |theta| + sup_k |d theta/dk|)`` over ``|k - k0| <= kappa``."""
    deltas = np.asarray(deltas, dtype=float)
    mask = np.abs(deltas) <= kappa + 1e-12
    th = np.asarray(theta)[:, mask]
    if th.shape[1] < 2:
        return float(np.max(np.abs(th)))
    dth = np.gradient(th, deltas[mask], axis=1)
    return float(np.max(np.max(np.abs(th), axis=1) + np.max(np.abs(dth), axis=1)))


@dataclass(frozen=True)
class BandEdgeData:
    s: int
    condition: str
    k0: float
    sign: int
    sigma: float
    b: float
    deltas: np.ndarray            # window offsets k - k0
    energies: np.ndarray          # E_s(k0 + delta)
    gamma: np.ndarray
    gamma_at_k0: float
    gamma_tilde: np.ndarray
    gamma_tilde_at_k0: float
    phi_k0: np.ndarray            # u-variable Fourier coefficients
    phi_window: np.ndarray        # (n_delta, 2N+1) gauge-fixed coefficients
    xgrid: np.ndarray
    theta: np.ndarray             # (n_x, n_delta) samples of theta(x, k0 + delta)
    theta_coeffs: np.ndarray      # (n_delta, 2N+1)
    kappa: float
    theta_mult_norm: float
    frak_e: float
    frak_e_tilde: float
    N: int
    degenerate: bool = False
    min_overlap: float = 1.0
    coeffs: object = field(default=None, repr=False)

    @property
    def kgrid(self):
        return self.k0 + self.deltas

    @property
    def edge_side(self):
        return CONDITIONS[self.condition][3]

    @property
    def effective_sign(self):
        """+1 when the effective Schrodinger operator is -b d^2/dx^2, else -1."""
        return self.sign

    @property
    def shifted(self):
        return bool(np.isclose(self.k0, np.pi))

    def phi_k0_at(self, x):
        return trig_eval(self.phi_k0, x)

    def summary(self):
        return {
            "s": self.s, "condition": self.condition, "k0": self.k0,
            "sigma": self.sigma, "b": self.b, "gamma_at_k0": self.gamma_at_k0,
            "gamma_tilde_at_k0": self.gamma_tilde_at_k0, "kappa": self.kappa,
            "theta_mult_norm": self.theta_mult_norm, "frak_e": self.frak_e,
            "frak_e_tilde": self.frak_e_tilde, "degenerate": self.degenerate,
        }


def thresholds(gamma0, gamma_tilde0, kappa):
    frak_e = (2 * np.pi) ** -0.5 * abs(gamma0) ** 0.5 * kappa ** 2
    frak_e_tilde = (2 * np.pi) ** -1 * abs(gamma_tilde0) * kappa ** 3
    return float(frak_e), float(frak_e_tilde)


def extract_edge(table: BandTable, report: GapReport, *, step=DEFAULT_STEP,
                 half_width=np.pi, kappa_cap=DEFAULT_KAPPA_CAP, n_x=128,
                 degeneracy_threshold=None, allow_degenerate=False):
    """Edge data for ``report`` from a refined, edge-anchored window table.

    The window ``k0 + j*step``, ``|j*step| <= half_width``, is re-solved with
    the gauge anchored at k0 (real Bloch function there) and marched outward.
    """
    if report.condition not in CONDITIONS:
        raise ValueError("report carries no condition")
    s, k0 = report.s, report.k0
    sign = condition_sign(report.condition)
    J = int(round(half_width / step))
    deltas = step * np.arange(-J, J + 1)
    l_max = min(s + 1, 2 * table.N + 1)
    E_all, V_all, min_ov = march_table(table.coeffs, k0 + deltas, table.N, l_max, J, k0)
    E = E_all[:, s - 1]
    phis = V_all[:, s - 1, :]
    if min_ov[s - 1] < 0.9:
        raise GaugeBreak(f"neighbour overlap {min_ov[s - 1]:.3f} < 0.9 on the edge window")

    fit = fit_dispersion(deltas, E, sign)
    threshold = 1e-8 * (1 + abs(fit.sigma)) if degeneracy_threshold is None else degeneracy_threshold
    degenerate = abs(fit.gamma_at_k0) < threshold
    if degenerate and not allow_degenerate:
        raise DegenerateEdge(
            f"|gamma(k0)| = {abs(fit.gamma_at_k0):.3g} below {threshold:.1g}: quartic term absent")

    theta_c = np.empty_like(phis)
    nz = deltas != 0
    theta_c[nz] = (phis[nz] - phis[J]) / deltas[nz, None]
    theta_c[J] = (phis[J + 1] - phis[J - 1]) / (2 * step)
    xgrid = np.arange(n_x) / n_x
    modes = np.arange(-table.N, table.N + 1)
    basis = np.exp(2j * np.pi * np.outer(xgrid, modes))
    theta = basis @ theta_c.T

    if degenerate:
        kappa = float(deltas[deltas <= kappa_cap + 1e-12].max())
        frak_e = frak_e_tilde = 0.0
    else:
        kappa = select_kappa(deltas, fit.gamma, fit.gamma_tilde, fit.gamma_at_k0,
                             fit.gamma_tilde_at_k0, fit.b, kappa_cap)
        frak_e, frak_e_tilde = thresholds(fit.gamma_at_k0, fit.gamma_tilde_at_k0, kappa)
    return BandEdgeData(
        s=s, condition=report.condition, k0=k0, sign=sign, sigma=fit.sigma, b=fit.b,
        deltas=deltas, energies=E, gamma=fit.gamma, gamma_at_k0=fit.gamma_at_k0,
        gamma_tilde=fit.gamma_tilde, gamma_tilde_at_k0=fit.gamma_tilde_at_k0,
        phi_k0=phis[J].copy(), phi_window=phis, xgrid=xgrid, theta=theta,
        theta_coeffs=theta_c, kappa=kappa,
        theta_mult_norm=multiplier_norm_from_table(theta, deltas, kappa),
        frak_e=frak_e, frak_e_tilde=frak_e_tilde, N=table.N, degenerate=bool(degenerate),
        min_overlap=float(min_ov[s - 1]), coeffs=table.coeffs,
    )


def multiplier_norm(edge: BandEdgeData):
    return multiplier_norm_from_table(edge.theta, edge.deltas, edge.kappa)


def edge_for(coeffs, s, condition="auto", N=64, n_k=257, **kwargs):
    """Convenience: band table, classification and extraction in one call."""
    table = band_table(coeffs, uniform_kgrid(n_k), N=N, l_max=s + 1)
    reports = classify(table, s)
    if condition != "auto":
        reports = [r for r in reports if r.condition == condition]
    if not reports:
        raise ValueError(f"no gap condition {condition} for band {s}")
    return extract_edge(table, reports[0], **kwargs)
