"""Largest empirical l^p ratio of the truncated discrete Hilbert transform by length."""

import argparse
import csv
import sys

import numpy as np

from gaborlab import probes
from gaborlab.tfcore import lp_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["p", "length", "max_ratio", "mean_ratio"])
    for p in (1.5, 2.0, 3.0):
        for n in (256, 512, 1024, 2048, 4096, 8192):
            vecs = rng.standard_normal((args.trials, n))
            r = [lp_norm(probes.discrete_hilbert(v, "fft"), p) / lp_norm(v, p) for v in vecs]
            writer.writerow([p, n, f"{max(r):.6f}", f"{np.mean(r):.6f}"])


if __name__ == "__main__":
    main()
