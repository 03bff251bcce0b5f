import numpy as np
import pytest

from hfhom.cell_eig import (assemble, band_table, evaluate_bloch, free_band, solve_bands,
                            solve_point, uniform_kgrid)
from hfhom.coefficients import trig_eval
from hfhom.errors import KNotInGrid

ZONE_POS = np.linspace(0, np.pi, 129)


def test_free_assembly_is_diagonal(free):
    for k in (0.0, 0.5):
        op = assemble(free, k, N=8)
        n = np.arange(-8, 9)
        assert np.allclose(op.stiffness, np.diag((2 * np.pi * n + k) ** 2), atol=1e-12)
        assert np.allclose(op.gram, np.eye(17), atol=1e-14)


def test_operator_hermitian_and_gram_positive(weighted):
    op = assemble(weighted, 0.9, N=16)
    assert np.max(np.abs(op.stiffness - op.stiffness.conj().T)) <= 1e-12
    assert np.max(np.abs(op.gram - op.gram.conj().T)) <= 1e-12
    assert np.linalg.eigvalsh(op.gram).min() > 0


def test_free_band_closed_forms():
    assert free_band(1, 0.5) == 0.25
    assert free_band(2, np.pi / 2) == pytest.approx((1.5 * np.pi) ** 2)
    assert free_band(3, 0.0) == pytest.approx(4 * np.pi ** 2)


def test_free_solve_values(free):
    r = solve_bands(assemble(free, 0.5, 32), 3)
    assert np.allclose(r.values, [0.25, (2 * np.pi - 0.5) ** 2, (2 * np.pi + 0.5) ** 2], rtol=1e-13)
    r = solve_bands(assemble(free, np.pi, 32), 2)
    assert np.allclose(r.values, [np.pi ** 2] * 2, rtol=1e-13)


@pytest.mark.parametrize("name", ["cosine", "weighted"])
@pytest.mark.parametrize("k", [0.0, 0.7, np.pi])
def test_bands_match_finite_difference_oracle(frozen, request, name, k):
    coeffs = request.getfixturevalue(name)
    ref = frozen["bands"][name][repr(float(k))]
    r = solve_bands(assemble(coeffs, k, 64), 3)
    assert np.allclose(r.values, ref, atol=1e-6)
    assert np.all(r.residuals <= 1e-8 * (1 + np.abs(r.values)))


def test_cosine_gap_at_pi_open(frozen, cosine):
    r = solve_bands(assemble(cosine, np.pi, 64), 2)
    assert r.values[1] - r.values[0] > 4.0


def test_free_table_closed_forms(free):
    t = band_table(free, uniform_kgrid(65), N=32, l_max=5)
    expect = np.array([[free_band(l, k) for l in range(1, 6)] for k in t.kgrid])
    assert np.max(np.abs(t.energies - expect)) <= 1e-10


@pytest.mark.parametrize("name", ["free", "cosine", "weighted"])
def test_table_properties(tables, name):
    t = tables[name]
    E = t.energies
    assert np.all(np.diff(E, axis=1) >= -1e-9 * (1 + np.abs(E[:, 1:])))
    assert np.max(np.abs(E - E[::-1])) <= 1e-9
    half = t.kgrid >= 0
    for l in range(1, 6):
        d = np.diff(E[half, l - 1])
        d = d if l % 2 else -d
        bad = d < -1e-9 * (1 + E[half, l - 1].max())
        assert bad.sum() <= 1
    # Bloch functions orthonormal at every k in plain L2(0, 1)
    for i in range(0, len(t.kgrid), 32):
        G = t.eigvecs[i].conj() @ t.eigvecs[i].T
        assert np.allclose(G, np.eye(5), atol=1e-8)


@pytest.mark.parametrize("name", ["free", "cosine", "weighted"])
def test_two_sided_estimate(tables, request, name):
    t = tables[name]
    coeffs = request.getfixturevalue(name)
    lo, hi = coeffs.two_sided_constants()
    for l in range(1, 6):
        free = np.array([free_band(l, k) for k in t.kgrid])
        E = t.energies[:, l - 1]
        assert np.all(E >= lo * free - 1e-9 * (1 + free))
        assert np.all(E <= hi * free + 1e-9 * (1 + free))


@pytest.mark.parametrize("name", ["cosine", "weighted"])
def test_crossings_only_at_parity_points(tables, name):
    t = tables[name]
    E = t.energies
    for s in range(1, 5):
        touch = np.abs(E[:, s] - E[:, s - 1]) < 1e-7
        where = np.abs(t.kgrid[touch])
        expected = np.pi if s % 2 else 0.0
        assert np.all(np.isclose(where, expected, atol=1e-12))


def test_galerkin_convergence(cosine, weighted):
    for c in (cosine, weighted):
        for k in (0.3, 2.0):
            a = solve_bands(assemble(c, k, 32), 1).values[0]
            b = solve_bands(assemble(c, k, 64), 1).values[0]
            assert abs(a - b) < 1e-8


def test_cell_parseval_full_basis(cosine):
    N = 12
    k = 0.4
    _, U = solve_point(cosine, k, N, 2 * N + 1)
    rng = np.random.default_rng(7)
    v = rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)
    proj = np.abs(U.conj() @ v) ** 2
    assert proj.sum() == pytest.approx(np.vdot(v, v).real, rel=1e-8)
    partial = np.cumsum(proj)
    assert np.all(np.diff(partial) >= -1e-15)


def test_evaluate_bloch(tables, frozen):
    x = np.linspace(0, 1, 9, endpoint=False)
    for k in (0.0, tables["free"].kgrid[140]):
        v = evaluate_bloch(tables["free"], 1, k, x)
        assert np.allclose(np.abs(v), 1, atol=1e-12)
    # cosine ground state at k = 0 against the FD eigenvector
    ref = np.array(frozen["cosine_ground_state"]["samples_every_64"])
    xs = np.arange(0, 2048, 64) / 2048
    v = evaluate_bloch(tables["cosine"], 1, 0.0, xs)
    assert np.max(np.abs(v.imag)) < 1e-12
    assert np.all(v.real > 0)
    assert np.max(np.abs(v.real - ref)) < 1e-5
    with pytest.raises(KNotInGrid):
        evaluate_bloch(tables["free"], 1, 0.123, x)


def test_grid_requirements(free):
    with pytest.raises(ValueError):
        band_table(free, np.linspace(-np.pi, 2.0, 11), N=8, l_max=2)
    with pytest.raises(ValueError):
        assemble(free, 0.0, N=4)


def test_bloch_coefficients_are_unit_norm(tables):
    for t in tables.values():
        norms = np.linalg.norm(t.eigvecs, axis=2)
        assert np.allclose(norms, 1, atol=1e-12)
        x = np.linspace(0, 1, 257)[:-1]
        f = trig_eval(t.eigvecs[10, 0], x)
        assert np.mean(np.abs(f) ** 2) == pytest.approx(1, rel=1e-10)
