"""Symbol suprema against their closed-form orders, and the synthesis-vs-
modulated-transform operator norms, over a grid of eps, t and exponents."""
import argparse
from pathlib import Path

from hfhom.analysis import lemma1_check, lemma2_check
from hfhom.band_edge import edge_for
from hfhom.cli import atomic_write, csv_text
from hfhom.coefficients import builtin
from hfhom.errors import InadmissibleParameters

EXPONENTS = {"SchrodingerSin": (0, 1, 2, 4, 5), "WaveSin3": (0, 1, 2, 3, 4),
             "WaveSin3InvK": (-1, 0, 1, 2, 3)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    out = Path(ap.parse_args().out)
    cos = builtin("cosine")
    rows = []
    for cond in ("Cond1", "Cond3"):
        edge = edge_for(cos, 1, cond)
        for case, exps in EXPONENTS.items():
            for p in exps:
                for eps in (1 / 16, 1 / 64, 1 / 256):
                    for t in (1.0, 4.0, 16.0):
                        try:
                            c = lemma2_check(case, p, eps, t, edge)
                        except InadmissibleParameters:
                            continue
                        rows.append((cond, *c.to_row(), c.passed))
    atomic_write(out / "lemma2.csv", csv_text(
        ["condition", "case", "q", "eps", "t", "grid_sup", "formula", "ratio", "pass"], rows))
    print(f"lemma2: {sum(r[-1] for r in rows)}/{len(rows)} within windows")

    edge = edge_for(cos, 1, "Cond3")
    l1 = []
    for variant, exps in (("plain", (0.5, 1, 2)), ("inverse_k", (-1, 0))):
        for p in exps:
            for eps in (1 / 16, 1 / 32, 1 / 64, 1 / 128):
                r = lemma1_check(edge, p, eps, variant=variant, trials=16)
                l1.append(r.to_row())
                print(f"lemma1 {variant:9s} {p:5} eps={eps:.5f} normalized {r.normalized:.3f}"
                      f" (exact {r.oracle_sup:.3f})")
    atomic_write(out / "lemma1.csv", csv_text(
        ["variant", "q", "eps", "max_ratio", "normalized", "oracle_sup"], l1))


if __name__ == "__main__":
    main()
