"""Compute the independent finite-difference / quadrature reference values and
freeze them into tests/data/oracles.json.

Run once before trusting the solver tests:  python scripts/freeze_oracles.py
"""
import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
import oracles  # noqa: E402

S = 0.2


def g_cos(x):
    return 1 + 0.5 * np.cos(2 * np.pi * x)


def one(x):
    return np.ones_like(x)


def main():
    c_quad, c_bessel = oracles.weighted_normalizer(S)

    def w_weighted(x):
        return c_quad * np.exp(S * np.cos(2 * np.pi * x))

    out = {
        "weighted_normalizer": {"quad": c_quad, "bessel": c_bessel},
        "harmonic_mean_cosine": oracles.harmonic_mean(g_cos),
        "bessel_I_s02_N8": oracles.bessel_coefficients(S, 8).tolist(),
        "bands": {},
    }
    for name, g, w, ks in [("cosine", g_cos, one, [0.0, np.pi, 0.7]),
                           ("weighted", one, w_weighted, [0.0, np.pi, 0.7])]:
        out["bands"][name] = {
            repr(float(k)): oracles.fd_bands_extrapolated(g, w, k, M=2048, n_bands=3).tolist()
            for k in ks}
    deltas = np.linspace(-0.3, 0.3, 25)
    coef = oracles.dispersion_fit(g_cos, one, np.pi, 1, deltas, M=2048, degree=5)
    out["cosine_cond3_fit"] = {"sigma": coef[0], "b": -coef[1], "gamma0": coef[2],
                               "deltas": [-0.3, 0.3, 25], "degree": 5}
    x, v = oracles.fd_ground_state(g_cos, 0.0, M=2048)
    out["cosine_ground_state"] = {"M": 2048, "samples_every_64": v[::64].tolist()}
    path = ROOT / "tests" / "data" / "oracles.json"
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
