"""Convergence-order sweeps, brute-force symbol/operator checks and sharpness probes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .band_edge import BandEdgeData
from .bloch_synthesis import (SpectralProfile, frequency_lattice, inverse_transform, make_grid,
                              make_plan, make_profile, modulation, points_per_cell,
                              sampler_for, synthesize, torus_cells)
from .dynamics import (EvolutionSpec, error_norm, evolve_effective, evolve_exact,
                       modulated_approximant)
from .errors import InadmissibleParameters

NULL_FLOOR = 1e-8
SHARPNESS_CONSTANT = np.pi ** 0.25


def fit_loglog(x, y):
    """OLS fit ``log y = slope*log x + c``; returns (slope, c, rms residual)."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid ** 2)))


def admissible(edge, equation, eps, t):
    """``eps |t|^{-1/2} <= e`` (Schrodinger) or ``eps |t|^{-1} <= e~`` (wave)."""
    t = abs(t)
    if t == 0:
        return False
    if equation == "Schrodinger":
        return bool(eps / np.sqrt(t) <= edge.frak_e)
    return bool(eps / t <= edge.frak_e_tilde)


def theory_slope(equation, q=None, r=None):
    """eps-exponent of the error bound for data of regularity q (f) / r (g)."""
    if equation == "Schrodinger":
        return min(q, 2.0) / 2
    rates = []
    if q is not None:
        rates.append(2 * min(q, 1.5) / 3)
    if r is not None:
        rates.append((2 * min(r, 0.5) + 2) / 3)
    return min(rates)


def profile_on(grid, spec):
    """Profile from ``(kind, params)`` on the lattice of ``grid``; None passes through."""
    if spec is None:
        return None
    kind, params = spec
    return make_profile(kind, params, grid.dk * np.arange(-1, 2))


def run_point(edge, equation, eps, t, profile_f, profile_g, grid):
    """Error ``||exact - approximant||`` at one (eps, t) plus the two fields."""
    plan = make_plan(edge, eps)
    spec = EvolutionSpec(equation, plan, t, profile_f, profile_g)
    exact = evolve_exact(spec, grid)
    approx = modulated_approximant(evolve_effective(spec, edge, grid), edge, eps, t, equation)
    return error_norm(exact, approx), exact, approx


@dataclass(frozen=True)
class SweepResult:
    eps_values: list
    errors: list
    hq_norms: list
    fitted_slope: float
    theory_slope: float
    t: float
    admissibility: list
    fit_residual: float = float("nan")
    null_case: bool = False
    extent: float = 0.0

    def to_rows(self):
        rows = []
        for i, (e, err, hq, ok) in enumerate(zip(self.eps_values, self.errors,
                                                 self.hq_norms, self.admissibility)):
            partial = (np.log(self.errors[i] / self.errors[i - 1])
                       / np.log(e / self.eps_values[i - 1])) if i and err > 0 else float("nan")
            rows.append((e, err, hq, bool(ok), float(partial)))
        return rows


def _sweep_grid(edge, eps, extent_L, min_ppc):
    P = points_per_cell(edge, minimum=min_ppc)
    return make_grid(eps, int(round(extent_L / eps)), P)


def epsilon_sweep(edge, equation, profile_f, profile_g=None, t=1.0,
                  eps_values=(1 / 16, 1 / 32, 1 / 64, 1 / 128), extent=80.0,
                  min_points_per_cell=8):
    """Error vs eps on one shared torus (common frequency lattice, fixed data).

    ``profile_f``/``profile_g`` are ``(kind, params)`` pairs; the torus length is
    the smallest common even multiple of every eps that is >= ``extent``.
    """
    eps_values = [float(e) for e in eps_values]
    if any(b >= a for a, b in zip(eps_values, eps_values[1:])):
        raise ValueError("eps values must be strictly decreasing")
    L = torus_cells(eps_values, extent)
    errors, hq, adm = [], [], []
    pf = pg = None
    for eps in eps_values:
        grid = _sweep_grid(edge, eps, L, min_points_per_cell)
        pf, pg = profile_on(grid, profile_f), profile_on(grid, profile_g)
        err, _, _ = run_point(edge, equation, eps, t, pf, pg, grid)
        errors.append(err)
        hq.append(tuple(p.hq_norm for p in (pf, pg) if p is not None))
        adm.append(admissible(edge, equation, eps, t))
    q = pf.sobolev_q if pf is not None else None
    r = pg.sobolev_q if pg is not None else None
    theory = theory_slope(equation, q, r)
    null = max(errors) <= NULL_FLOOR
    slope = resid = float("nan")
    idx = [i for i, ok in enumerate(adm) if ok]
    if not null and len(idx) >= 2:
        slope, _, resid = fit_loglog([eps_values[i] for i in idx], [errors[i] for i in idx])
    return SweepResult(eps_values, errors, hq, slope, theory, float(t), adm, resid, null, L)


@dataclass(frozen=True)
class TimeSweepResult:
    t_values: list
    errors: list
    eps: float
    exponent: float
    ratio_sup: float
    admissibility: list
    fit_residual: float = float("nan")
    null_case: bool = False

    def to_rows(self):
        return [(t, e, bool(a)) for t, e, a in zip(self.t_values, self.errors, self.admissibility)]


def time_sweep(edge, equation, profile_f, profile_g=None, eps=1 / 128,
               t_values=(1, 2, 4, 8, 16, 32, 64), extent=80.0, min_points_per_cell=8):
    """Error vs t at fixed eps; exponent of ``error ~ t^p`` and
    ``sup_t error / ((1 + t^{1/2}) eps)``."""
    t_values = [float(t) for t in t_values]
    if min(t_values) < 1:
        raise InadmissibleParameters("time sweeps start at t = 1")
    L = torus_cells([eps], extent)
    grid = _sweep_grid(edge, eps, L, min_points_per_cell)
    pf, pg = profile_on(grid, profile_f), profile_on(grid, profile_g)
    errors = [run_point(edge, equation, eps, t, pf, pg, grid)[0] for t in t_values]
    adm = [admissible(edge, equation, eps, t) for t in t_values]
    tv, er = np.array(t_values), np.array(errors)
    ratio = float(np.max(er / ((1 + np.sqrt(tv)) * eps)))
    null = er.max() <= NULL_FLOOR
    expo = resid = float("nan")
    idx = [i for i, ok in enumerate(adm) if ok]
    if not null and len(idx) >= 2:
        expo, _, resid = fit_loglog(tv[idx], er[idx])
    return TimeSweepResult(t_values, errors, eps, expo, ratio, adm, resid, null)


# -- symbol suprema -------------------------------------------------------------

LEMMA2_CASES = ("SchrodingerSin", "WaveSin3", "WaveSin3InvK")


@dataclass(frozen=True)
class SymbolCheck:
    case: str
    q_or_r: float
    eps: float
    t: float
    grid_sup: float
    formula_value: float
    ratio: float
    window: tuple
    argmax_delta: float = float("nan")

    @property
    def passed(self):
        return self.window[0] <= self.ratio <= self.window[1]

    def to_row(self):
        return (self.case, self.q_or_r, self.eps, self.t, self.grid_sup,
                self.formula_value, self.ratio)


def _window_table(edge, values, kappa):
    mask = np.abs(edge.deltas) <= kappa + 4 * (edge.deltas[1] - edge.deltas[0])
    return CubicSpline(edge.deltas[mask], np.asarray(values)[mask])


def lemma2_window(case, p):
    if case == "SchrodingerSin":
        if p <= 4:
            return (1 / 3, 3 * np.pi / 2)
        base = p ** (-p / 2) * (p - 4) ** (p / 2 - 2)
        return (8 / np.pi * base, 12 * base)
    return (0.1, 10.0)


def lemma2_formula(case, p, eps, t, g0, gt0):
    t = abs(t)
    if case == "SchrodingerSin":
        if p <= 4:
            return eps ** (p / 2) * t ** (p / 4) / (abs(g0) ** -0.5 + eps * t ** 0.5) ** (p / 2)
        return abs(g0) * eps ** 2 * t
    g = abs(gt0)
    if case == "WaveSin3":
        if p <= 3:
            return (eps ** (2 * p / 3) * t ** (p / 3)
                    / (g ** (-2 / 3) + eps ** (4 / 3) * t ** (2 / 3)) ** (p / 2))
        return g * eps ** 2 * t
    if p <= 2:
        return (eps ** ((2 * p - 1) / 3) * t ** ((p + 1) / 3)
                / (g ** (-1 / 3) * (g ** (-2 / 3) + eps ** (4 / 3) * t ** (2 / 3)) ** (p / 2)))
    return g * eps * t


def lemma2_symbol(case, p, eps, t, delta, gamma, gamma_tilde):
    d2 = delta ** 2
    weight = eps ** p * (d2 + eps ** 2) ** (-p / 2)
    if case == "SchrodingerSin":
        return weight * np.abs(np.sin(0.5 * t * d2 ** 2 * gamma / eps ** 2))
    s = np.abs(np.sin(0.5 * t * np.abs(delta) ** 3 * gamma_tilde / eps))
    if case == "WaveSin3":
        return weight * s
    out = np.zeros_like(delta)
    nz = delta != 0
    out[nz] = weight[nz] * s[nz] / np.abs(delta[nz])
    return out


def lemma2_check(case, q_or_r, eps, t, edge: BandEdgeData, n_grid=100_001):
    """Brute-force sup over ``|k - k0| <= kappa`` of the Lemma-2 symbol, with the
    tabulated gamma / gamma~ interpolated in k, against the closed-form order."""
    if case not in LEMMA2_CASES:
        raise ValueError(f"case must be one of {LEMMA2_CASES}")
    p = float(q_or_r)
    if eps <= 0 or t == 0:
        raise InadmissibleParameters("need eps > 0 and t != 0")
    if case == "SchrodingerSin":
        if p < 0:
            raise InadmissibleParameters("q must be >= 0")
        if eps / np.sqrt(abs(t)) > edge.frak_e:
            raise InadmissibleParameters(f"eps|t|^-1/2 = {eps / np.sqrt(abs(t)):.4g} > e = {edge.frak_e:.4g}")
    else:
        if (case == "WaveSin3" and p < 0) or p < -1:
            raise InadmissibleParameters("exponent outside the lemma's range")
        if eps / abs(t) > edge.frak_e_tilde:
            raise InadmissibleParameters(f"eps|t|^-1 = {eps / abs(t):.4g} > e~ = {edge.frak_e_tilde:.4g}")
    delta = np.linspace(-edge.kappa, edge.kappa, n_grid)
    gamma = _window_table(edge, edge.gamma, edge.kappa)(delta)
    gamma_t = _window_table(edge, edge.gamma_tilde, edge.kappa)(delta)
    sym = lemma2_symbol(case, p, eps, abs(t), delta, gamma, gamma_t)
    i = int(np.argmax(sym))
    sup = float(sym[i])
    formula = float(lemma2_formula(case, p, eps, t, edge.gamma_at_k0, edge.gamma_tilde_at_k0))
    return SymbolCheck(case, p, float(eps), float(t), sup, formula, sup / formula,
                       lemma2_window(case, p), float(delta[i]))


# -- Lemma 1: synthesis minus modulated transform -------------------------------

@dataclass(frozen=True)
class Lemma1Result:
    variant: str
    q_or_r: float
    eps: float
    max_ratio: float
    normalized: float
    oracle_sup: float
    theta_mult_norm: float
    trials: int

    def to_row(self):
        return (self.variant, self.q_or_r, self.eps, self.max_ratio, self.normalized,
                self.oracle_sup)


def _lemma1_weight(variant, p, eps, delta):
    w = eps ** p * (delta ** 2 + eps ** 2) ** (-p / 2)
    if variant == "inverse_k":
        w = w / np.abs(delta)
    return w


def lemma1_check(edge: BandEdgeData, q_or_r, eps, variant="plain", trials=16, seed=0,
                 n_cells=256):
    """Max over random band-limited ``v`` of ``||(Psi* - [phi_k0] Phi*) m_eps v|| / ||v||``.

    Computed on a torus of ``n_cells`` unit cells (quasimomentum lattice
    ``2 pi j / n_cells`` within ``kappa`` of k0). The difference operator is
    diagonal in quasimomentum, so its exact norm ``sup m |phi(k) - phi_k0|``
    is reported alongside as ``oracle_sup``. The lattice point k = k0 is
    omitted for ``inverse_k``: there the multiplier is singular but the
    difference of Bloch functions vanishes.
    """
    p = float(q_or_r)
    if variant == "plain" and p < 0 or variant == "inverse_k" and p < -1:
        raise InadmissibleParameters("exponent outside the lemma's range")
    if variant not in ("plain", "inverse_k"):
        raise ValueError("variant must be plain or inverse_k")
    if trials < 10:
        raise InadmissibleParameters("need at least 10 trials")
    grid = make_grid(1.0, n_cells, points_per_cell(edge))
    delta = frequency_lattice(grid.dk, edge.kappa)
    if variant == "inverse_k":
        delta = delta[delta != 0]
    m = _lemma1_weight(variant, p, eps, delta)
    plan = make_plan(edge, 1.0)
    lattice = SpectralProfile(delta, grid.dk, np.ones(delta.size, complex), 0.0, 1.0)
    mod = modulation(grid, 1.0, edge.phi_k0, edge.shifted)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        v = rng.standard_normal(delta.size) + 1j * rng.standard_normal(delta.size)
        v_norm = np.sqrt(np.sum(np.abs(v) ** 2) * grid.dk)
        prof = lattice.with_amplitudes(m * v)
        bloch = synthesize(plan, prof, grid)
        plain = inverse_transform(prof, grid)
        diff = bloch.values - mod * plain.values
        worst = max(worst, float(np.sqrt(np.sum(np.abs(diff) ** 2) * grid.dx) / v_norm))
    _, C = sampler_for(edge)(edge.k0 + delta)
    gap = np.linalg.norm(C - edge.phi_k0[None, :], axis=1)
    oracle = float(np.max(m * gap))
    scale = eps ** min(1.0, p) if variant == "plain" else eps ** min(0.0, p)
    return Lemma1Result(variant, p, float(eps), worst, worst / scale, oracle / scale,
                        edge.theta_mult_norm, trials)


# -- sharpness ----------------------------------------------------------------

@dataclass(frozen=True)
class SharpnessResult:
    q_prime: float
    t: float
    eps_values: list
    ratios: list
    errors: list
    centres: list
    hq_norms: list
    admissibility: list = field(default_factory=list)

    @property
    def growth(self):
        return self.ratios[-1] / self.ratios[0]

    @property
    def spread(self):
        return max(self.ratios) / min(self.ratios)

    def to_rows(self):
        return [(e, r) for e, r in zip(self.eps_values, self.ratios)]


def sharpness_centre(edge, eps, t, constant=SHARPNESS_CONSTANT):
    """Physical frequency where the Schrodinger dispersion error saturates:
    quasimomentum offset ``c |gamma(k0)|^{-1/4} eps^{1/2} t^{-1/4}`` divided by eps."""
    g0 = abs(edge.gamma_at_k0) if not edge.degenerate else 1.0
    return constant * g0 ** -0.25 * eps ** 0.5 * abs(t) ** -0.25 / eps


def sharpness_probe(edge, q_prime, t=1.0, eps_values=(1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256),
                    width_factor=0.05, constant=SHARPNESS_CONSTANT, lattice_per_width=12):
    """Series ``error / (eps ||f||_{H^q'})`` for Gaussian packets centred at the
    frequency where the quartic dispersion error is of order one."""
    if not 0 <= q_prime <= 2:
        raise InadmissibleParameters("q' must lie in [0, 2]")
    if t <= 0:
        raise InadmissibleParameters("t must be positive")
    ratios, errors, centres, hq, adm = [], [], [], [], []
    for eps in eps_values:
        xi = sharpness_centre(edge, eps, t, constant)
        w = width_factor * xi
        if eps * (xi + 8 * w) > edge.kappa:
            raise InadmissibleParameters(f"packet at eps={eps} leaves the kappa window")
        L = torus_cells([eps], 2 * np.pi * lattice_per_width / w)
        grid = make_grid(eps, int(round(L / eps)), points_per_cell(edge))
        prof = make_profile("point", {"k_hat": xi, "w": w, "q": q_prime}, grid.dk * np.arange(-1, 2))
        err, _, _ = run_point(edge, "Schrodinger", eps, t, prof, None, grid)
        ratios.append(err / (eps * prof.hq_norm))
        errors.append(err)
        centres.append(xi)
        hq.append(prof.hq_norm)
        adm.append(admissible(edge, "Schrodinger", eps, t))
    return SharpnessResult(float(q_prime), float(t), list(eps_values), ratios, errors,
                           centres, hq, adm)
