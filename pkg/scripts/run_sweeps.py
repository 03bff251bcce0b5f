"""Convergence sweeps on the cosine coefficient: eps-rates for several data
classes and the t-growth series. Writes CSV files into ``results/``."""
import argparse
from pathlib import Path

from hfhom.analysis import epsilon_sweep, time_sweep
from hfhom.band_edge import edge_for
from hfhom.cli import atomic_write, csv_text
from hfhom.coefficients import builtin

EPS = (1 / 16, 1 / 32, 1 / 64, 1 / 128)
RUNS = [
    # (label, condition, equation, f, g, extent)
    ("schr_bump_cond1", "Cond1", "Schrodinger", ("bump", {"K": 2.0}), None, 80.0),
    ("schr_bump_cond3", "Cond3", "Schrodinger", ("bump", {"K": 2.0}), None, 80.0),
    ("schr_powerlaw_q1", "Cond3", "Schrodinger", ("powerlaw", {"q": 1.0, "K": 48.0}), None, 64.0),
    ("wave_bump_f", "Cond3", "Wave", ("bump", {"K": 2.0}), None, 80.0),
    ("wave_powerlaw_g", "Cond3", "Wave", None, ("powerlaw", {"q": 0.5, "K": 48.0}), 64.0),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    out = Path(ap.parse_args().out)
    cos = builtin("cosine")
    edges = {c: edge_for(cos, 1, c) for c in ("Cond1", "Cond3")}
    summary = []
    for label, cond, eq, f, g, extent in RUNS:
        res = epsilon_sweep(edges[cond], eq, f, g, t=1.0, eps_values=EPS, extent=extent)
        atomic_write(out / f"{label}.csv", csv_text(
            ["eps", "error", "hq_norm", "admissible", "slope_partial"], res.to_rows()))
        summary.append((label, res.fitted_slope, res.theory_slope, res.fit_residual))
        print(f"{label:18s} slope {res.fitted_slope:.3f}  theory {res.theory_slope:.3f}")
    for cond, edge in edges.items():
        res = time_sweep(edge, "Schrodinger", ("bump", {"K": 2.0}), eps=1 / 128,
                         t_values=(1, 2, 4, 8, 16, 32, 64))
        atomic_write(out / f"tgrowth_{cond}.csv", csv_text(["t", "error", "admissible"],
                                                           res.to_rows()))
        print(f"tgrowth_{cond:11s} exponent {res.exponent:.3f}  ratio_sup {res.ratio_sup:.3g}")
    atomic_write(out / "sweep_summary.csv",
                 csv_text(["run", "fitted_slope", "theory_slope", "fit_residual"], summary))


if __name__ == "__main__":
    main()
