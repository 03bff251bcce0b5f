"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (collected again in the terminal
summary) and asserts the criterion at its stated tolerance and runtime budget.
"""
import time

import numpy as np
import pytest

from hfhom.analysis import epsilon_sweep, lemma2_check, sharpness_probe, time_sweep
from hfhom.band_edge import edge_for
from hfhom.bloch_synthesis import (bloch_coeff, make_grid, make_plan, make_profile,
                                   points_per_cell, synthesize, torus_cells)
from hfhom.cell_eig import band_table, solve_point, uniform_kgrid
from hfhom.coefficients import builtin
from hfhom.dynamics import EvolutionSpec, evolve_exact, exact_wave_energy

EPS_SWEEP = (1 / 16, 1 / 32, 1 / 64, 1 / 128)
BUMP = ("bump", {"K": 2.0})


def _closed_form_free(l, k):
    k = np.abs(k)
    if l == 1:
        return k ** 2
    j = l // 2
    return (2 * np.pi * j - k) ** 2 if l % 2 == 0 else (2 * np.pi * j + k) ** 2


def test_criterion_01_free_oracle(report):
    start = time.perf_counter()
    t = band_table(builtin("free"), uniform_kgrid(65), N=32, l_max=5)
    err = max(np.max(np.abs(t.energies[:, l - 1] - _closed_form_free(l, t.kgrid)))
              for l in range(1, 6))
    elapsed = time.perf_counter() - start
    ok = err <= 1e-10 and elapsed < 5
    report(1, ok, f"free bands max error {err:.2e} (<= 1e-10), {elapsed:.1f}s (< 5s)")
    assert ok


def _band_property_failures(name):
    coeffs = builtin(name)
    t = band_table(coeffs, uniform_kgrid(257), N=64, l_max=5)
    E, k = t.energies, t.kgrid
    fails = []
    if np.max(np.abs(E - E[::-1])) > 1e-9:
        fails.append("evenness")
    half = k >= 0
    for l in range(1, 6):
        d = np.diff(E[half, l - 1]) * (1 if l % 2 else -1)
        if np.sum(d < -1e-9 * (1 + np.abs(E[half, l - 1]).max())) > 1:
            fails.append(f"monotone l={l}")
    for l in range(1, 5):
        touch = np.abs(k[np.abs(E[:, l] - E[:, l - 1]) < 1e-7])
        if not np.all(np.isclose(touch, np.pi if l % 2 else 0.0, atol=1e-12)):
            fails.append(f"crossing parity l={l}")
    # two-sided estimate with bounds recomputed on a dense independent grid
    x = np.arange(8192) / 8192
    om = coeffs.omega(x)
    gc = coeffs.g_check(x)
    lo = gc.min() * om.min() ** 2 / om.max() ** 2
    hi = gc.max() * om.max() ** 2 / om.min() ** 2
    for l in range(1, 6):
        free = _closed_form_free(l, k)
        slack = 1e-6 * (1 + free)
        if np.any(E[:, l - 1] < lo * free - slack) or np.any(E[:, l - 1] > hi * free + slack):
            fails.append(f"two-sided l={l}")
    return fails


def test_criterion_02_band_properties(report):
    start = time.perf_counter()
    fails = {name: _band_property_failures(name) for name in ("free", "cosine", "weighted")}
    elapsed = time.perf_counter() - start
    bad = {n: f for n, f in fails.items() if f}
    ok = not bad and elapsed < 30
    report(2, ok, f"evenness/monotonicity/crossings/two-sided on 3 builtins, l<=5: "
                  f"{'all hold' if not bad else bad}, {elapsed:.1f}s (< 30s)")
    assert ok


def test_criterion_03_effective_coefficient(report):
    start = time.perf_counter()
    e = edge_for(builtin("cosine"), 1, "Cond1")
    # harmonic mean of g_check = 1 + cos(2 pi x)/2: (int 1/g_check)^-1 = sqrt(1 - 1/4)
    oracle = np.sqrt(3) / 2
    elapsed = time.perf_counter() - start
    ok = abs(e.b - oracle) <= 1e-5 and elapsed < 30
    report(3, ok, f"b = {e.b:.10f} vs sqrt(3)/2 = {oracle:.10f}, "
                  f"|diff| {abs(e.b - oracle):.1e} (<= 1e-5), {elapsed:.1f}s")
    assert ok


def test_criterion_04_isometries(report, edge_cond3):
    start = time.perf_counter()
    cos = builtin("cosine")
    # cell Parseval: the full Bloch basis at fixed k is orthonormal and complete
    N = 16
    _, U = solve_point(cos, 0.4, N, 2 * N + 1)
    rng = np.random.default_rng(3)
    v = rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)
    parseval = abs(np.sum(np.abs(U.conj() @ v) ** 2) / np.vdot(v, v).real - 1)

    e, eps = edge_cond3, 1 / 32
    grid = make_grid(eps, int(round(torus_cells([eps], 40.0) / eps)), points_per_cell(e))
    plan = make_plan(e, eps)
    p = make_profile("bump", {"K": 2}, grid.dk * np.arange(-1, 2))
    u0 = synthesize(plan, p, grid)
    round_trip = np.max(np.abs(bloch_coeff(u0, e, kgrid_f=p.kgrid_f) - p.amplitudes))
    unitarity = max(abs(evolve_exact(EvolutionSpec("Schrodinger", plan, t, p), grid).norm()
                        - u0.norm()) for t in (0.5, 5.0, 50.0))
    pg = p.with_amplitudes(p.amplitudes * np.cos(p.kgrid_f))
    en = [exact_wave_energy(EvolutionSpec("Wave", plan, t, p, pg), grid) for t in (0.0, 1.0, 10.0)]
    energy = (max(en) - min(en)) / max(en)
    elapsed = time.perf_counter() - start
    ok = (parseval <= 1e-9 and round_trip <= 1e-8 and unitarity <= 1e-9 and energy <= 1e-7
          and elapsed < 60)
    report(4, ok, f"cell Parseval {parseval:.1e} (1e-9), round trip {round_trip:.1e} (1e-8), "
                  f"unitarity {unitarity:.1e} (1e-9), wave energy drift {energy:.1e} (1e-7), "
                  f"{elapsed:.1f}s")
    assert ok


@pytest.mark.parametrize("which", ["edge_cond1", "edge_cond3"])
def test_criterion_05_schrodinger_rate(report, request, which):
    e = request.getfixturevalue(which)
    start = time.perf_counter()
    res = epsilon_sweep(e, "Schrodinger", BUMP, t=1.0, eps_values=EPS_SWEEP, extent=80.0)
    elapsed = time.perf_counter() - start
    ok = 0.9 <= res.fitted_slope <= 1.15 and all(res.admissibility) and elapsed < 300
    report(5, ok, f"{e.condition} bump slope {res.fitted_slope:.3f} in [0.9, 1.15] "
                  f"(errors {', '.join(f'{x:.2e}' for x in res.errors)}), {elapsed:.1f}s")
    assert ok


def test_criterion_06_regularity_rates(report, edge_cond3):
    e = edge_cond3
    start = time.perf_counter()
    schr = epsilon_sweep(e, "Schrodinger", ("powerlaw", {"q": 1.0, "K": 48.0}), t=1.0,
                         eps_values=EPS_SWEEP, extent=64.0)
    wave_f = epsilon_sweep(e, "Wave", BUMP, None, t=1.0, eps_values=EPS_SWEEP, extent=80.0)
    wave_g = epsilon_sweep(e, "Wave", None, ("powerlaw", {"q": 0.5, "K": 48.0}), t=1.0,
                           eps_values=EPS_SWEEP, extent=64.0)
    elapsed = time.perf_counter() - start
    checks = [("Schrodinger powerlaw q=1", schr, (0.35, 0.65)),
              ("wave bump f, g=0", wave_f, (0.9, 1.15)),
              ("wave f=0, powerlaw g r=1/2", wave_g, (0.85, 1.15))]
    ok = elapsed < 600
    parts = []
    for label, res, (lo, hi) in checks:
        good = lo <= res.fitted_slope <= hi and all(res.admissibility)
        ok &= good
        parts.append(f"{label} slope {res.fitted_slope:.3f} in [{lo}, {hi}]")
    report(6, ok, f"{e.condition}: " + "; ".join(parts) + f", {elapsed:.1f}s")
    assert ok


def test_criterion_07_time_growth(report, edge_cond1, edge_cond3):
    start = time.perf_counter()
    res = time_sweep(edge_cond1, "Schrodinger", BUMP, eps=1 / 128,
                     t_values=(1, 2, 4, 8, 16, 32, 64), extent=80.0)
    elapsed = time.perf_counter() - start
    shifted = time_sweep(edge_cond3, "Schrodinger", BUMP, eps=1 / 128,
                         t_values=(1, 2, 4, 8, 16, 32, 64), extent=80.0)
    ok = res.exponent <= 0.6 and np.isfinite(res.ratio_sup) and elapsed < 300
    report(7, ok, f"{edge_cond1.condition} t-exponent {res.exponent:.3f} (<= 0.6), "
                  f"sup error/((1+t^1/2)eps) = {res.ratio_sup:.3g}; "
                  f"[{edge_cond3.condition}: exponent {shifted.exponent:.3f}, "
                  f"ratio sup {shifted.ratio_sup:.3g}], {elapsed:.1f}s")
    assert ok


def test_criterion_08_lemma2_windows(report, edge_cond1, edge_cond3):
    start = time.perf_counter()
    checks = []
    for e in (edge_cond1, edge_cond3):
        for q in (1, 2, 4, 5):
            checks.append(lemma2_check("SchrodingerSin", q, 1 / 64, 1.0, e))
    for q in (1, 2, 3, 4):
        checks.append(lemma2_check("WaveSin3", q, 1 / 64, 1.0, edge_cond3))
    for r in (-1, 0, 1, 2, 3):
        checks.append(lemma2_check("WaveSin3InvK", r, 1 / 64, 1.0, edge_cond3))
    elapsed = time.perf_counter() - start
    bad = [(c.case, c.q_or_r, round(c.ratio, 3), c.window) for c in checks if not c.passed]
    ok = not bad and elapsed < 60
    ratios = {c.case: [round(x.ratio, 3) for x in checks if x.case == c.case] for c in checks}
    report(8, ok, f"{len(checks)} symbol sups in their windows "
                  f"{'' if not bad else f'(failures {bad}) '}ratios {ratios}, {elapsed:.1f}s")
    assert ok


def test_criterion_09_sharpness(report, edge_cond3):
    start = time.perf_counter()
    eps = (1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256)
    one = sharpness_probe(edge_cond3, 1.0, t=1.0, eps_values=eps)
    two = sharpness_probe(edge_cond3, 2.0, t=1.0, eps_values=eps)
    elapsed = time.perf_counter() - start
    ok = one.growth >= 2 and two.spread <= 1.5 and elapsed < 300
    report(9, ok, f"{edge_cond3.condition}: q'=1 ratio growth {one.growth:.2f} (>= 2); "
                  f"q'=2 spread {two.spread:.3f} (<= 1.5), {elapsed:.1f}s")
    assert ok


def test_criterion_10_null(report, edge_free):
    start = time.perf_counter()
    errors = []
    for eq, pf, pg in (("Schrodinger", BUMP, None), ("Wave", BUMP, BUMP)):
        for t in (1.0, 8.0, 64.0):
            errors += epsilon_sweep(edge_free, eq, pf, pg, t=t, eps_values=EPS_SWEEP,
                                    extent=80.0).errors
        errors += time_sweep(edge_free, eq, pf, pg, eps=1 / 128,
                             t_values=(1, 2, 4, 8, 16, 32, 64), extent=80.0).errors
    elapsed = time.perf_counter() - start
    worst = max(errors)
    ok = worst <= 1e-8 and elapsed < 60
    report(10, ok, f"free operator max error {worst:.1e} over {len(errors)} (eps, t, equation) "
                   f"points (<= 1e-8), {elapsed:.1f}s")
    assert ok
