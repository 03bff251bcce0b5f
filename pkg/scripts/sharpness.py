"""Sharpness probes: error/(eps ||f||_{H^q'}) for packets at the saturating
frequency, for several q'. Writes ``results/sharpness_q<q'>.csv``."""
import argparse
from pathlib import Path

from hfhom.analysis import sharpness_probe
from hfhom.band_edge import edge_for
from hfhom.cli import atomic_write, csv_text
from hfhom.coefficients import builtin


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--condition", default="Cond3")
    args = ap.parse_args()
    edge = edge_for(builtin("cosine"), 1, args.condition)
    eps = (1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256)
    for q in (0.5, 1.0, 1.5, 2.0):
        res = sharpness_probe(edge, q, t=1.0, eps_values=eps)
        atomic_write(Path(args.out) / f"sharpness_q{q:g}.csv",
                     csv_text(["eps", "ratio"], res.to_rows()))
        print(f"q'={q:<4g} growth {res.growth:7.3f}  spread {res.spread:.3f}")


if __name__ == "__main__":
    main()
