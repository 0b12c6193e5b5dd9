"""Prefix oscillation of finite series under random reordering.

Compares a conditionally convergent scalar series with an absolutely
convergent one and with the Gabor expansion of a box-windowed signal.
"""

import argparse
from pathlib import Path

import numpy as np

from gaborlab import gabor, probes
from gaborlab.tfcore import Grid, affine_piece, box


def gabor_terms(n_max: int):
    """Terms c[0, n] M_n chi_[0,1] of the sawtooth x on [0, 1), sampled there."""
    f = affine_piece(0, 1, 1.0, 0.0)
    system = gabor.GaborSystem(box(), 1, 1)
    grid = Grid.spanning(0, 1, 256)
    coeffs = gabor.analysis(system, f, range(0, 1), range(-n_max, n_max + 1))
    x = grid.points()
    return [c * np.exp(2j * np.pi * n * x) for n, c in zip(coeffs.n_range, coeffs.entries[0])], grid.step


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, default=10_000)
    ap.add_argument("--trials", type=int, default=32)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/probe"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    series = {
        "alternating_harmonic": ([(-1) ** (j + 1) / j for j in range(1, args.terms + 1)], None),
        "geometric": ([2.0**-j for j in range(60)], None),
    }
    terms, step = gabor_terms(256)
    series["gabor_box"] = (terms, probes.l2_norm_fn(step))
    for name, (terms, norm) in series.items():
        rep = probes.unconditional_probe(terms, norm_fn=norm, trials=args.trials, seed=args.seed, burn_in=len(terms) // 100)
        (args.out / f"{name}.csv").write_text(rep.to_csv())
        print(f"{name:22s} natural {rep.natural_prefix_deviation:.3g}  permuted max {rep.max_deviation:.3g}  mean {rep.mean_deviation:.3g}")


if __name__ == "__main__":
    main()
