"""Convergence instrumentation: discrete Hilbert transform, Rademacher
functions, Khintchine ratios and permutation probes of finite series."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .errors import DyadicBreakpoint, ParameterDomain
from .tfcore import SampledSignal, lp_norm

MAX_DIRECT = 2**14

__all__ = [
    "discrete_hilbert",
    "rademacher",
    "rademacher_matrix",
    "KhintchineResult",
    "khintchine_check",
    "ProbeReport",
    "unconditional_probe",
    "l2_norm_fn",
]


def discrete_hilbert(c, method: str = "direct") -> np.ndarray:
    """``out[m] = sum_{n != m} c[n] / (m - n)`` over the window of ``c``.

    ``method="fft"`` evaluates the same finite convolution by FFT.
    """
    c = np.asarray(c)
    N = len(c)
    if N == 0:
        return c.astype(float)
    offsets = np.arange(-(N - 1), N, dtype=float)
    with np.errstate(divide="ignore"):
        kernel = np.where(offsets == 0, 0.0, 1.0 / offsets)
    if method == "fft":
        return fftconvolve(c, kernel)[N - 1 : 2 * N - 1]
    if method != "direct":
        raise ParameterDomain(f"unknown method {method!r}")
    if N > MAX_DIRECT:
        raise ParameterDomain(f"direct evaluation limited to {MAX_DIRECT} entries")
    m = np.arange(N)
    mat = kernel[(m[:, None] - m[None, :]) + N - 1]
    return mat @ c


def rademacher(n: int, x: float) -> int:
    """``sign(sin(2^n pi x))``; rejects points where the sine vanishes."""
    if n < 0:
        raise ParameterDomain("Rademacher index must be non-negative")
    s = math.sin(2.0**n * math.pi * x)
    if abs(s) < 1e-14:
        raise DyadicBreakpoint(f"x = {x} is a breakpoint of R_{n}")
    return 1 if s > 0 else -1


def rademacher_matrix(count: int, level: int) -> np.ndarray:
    """``R_n`` at the ``2^level`` dyadic midpoints of (0, 1), rows ``n = 0..count-1``.

    Computed from the binary digits of the cell index: ``R_n`` is +1 on a
    cell iff its ``(n+1)``-th binary digit is 0.  Requires ``count <= level``.
    """
    if count > level:
        raise ParameterDomain("need at least one dyadic level per Rademacher function")
    j = np.arange(2**level, dtype=np.int64)
    n = np.arange(count)
    bits = (j[None, :] >> (level - 1 - n[:, None])) & 1
    return (1 - 2 * bits).astype(float)


@dataclass(frozen=True)
class KhintchineResult:
    ratio: float
    low_ratio: float
    high_ratio: float
    exact: bool = True


MAX_CELL_LEVEL = 22
MAX_ATOMS = 2**22
MC_SAMPLES = 2**18


def _dyadic_sums(c: np.ndarray) -> np.ndarray:
    """``sum_n c_n R_n`` on the ``2^N`` dyadic cells of (0, 1), left to right.

    Cells at level n+1 split each level-n cell; ``R_n`` is +1 on the left half.
    Deeper levels only repeat values, so the cell mean at this level equals
    the midpoint rule at any finer dyadic resolution.
    """
    arr = np.zeros(1)
    for cn in c:
        arr = np.stack([arr + cn, arr - cn], axis=1).reshape(-1)
    return arr


def _sign_sum_law(c: np.ndarray):
    """Exact law of ``sum c_n eps_n`` (independent fair signs) as (values, probs), or None."""
    vals = np.zeros(1)
    probs = np.ones(1)
    for cn in c:
        v = np.concatenate([vals + cn, vals - cn])
        w = np.concatenate([probs, probs]) / 2
        key = np.round(v, 12)
        uniq, inv = np.unique(key, return_inverse=True)
        if len(uniq) > MAX_ATOMS:
            return None
        probs = np.bincount(inv, weights=w, minlength=len(uniq))
        vals = np.bincount(inv, weights=v * w, minlength=len(uniq)) / probs
    return vals, probs


def _lp_mean(c: np.ndarray, p: float, seed: int) -> tuple[float, bool]:
    """``(int_0^1 |sum c_n R_n|^p)^(1/p)`` and whether it was computed exactly."""
    if len(c) <= MAX_CELL_LEVEL:
        s = _dyadic_sums(c)
        return float(np.mean(np.abs(s) ** p) ** (1 / p)), True
    law = _sign_sum_law(c)
    if law is not None:
        vals, probs = law
        return float(np.sum(probs * np.abs(vals) ** p) ** (1 / p)), True
    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=(MC_SAMPLES, len(c)))
    return float(np.mean(np.abs(signs @ c) ** p) ** (1 / p)), False


def khintchine_check(c, p: float, trials: int = 0, seed: int = 0) -> KhintchineResult:
    """``||sum c_n R_n||_{L^p(0,1)} / ||c||_2``.

    The integral is the dyadic-midpoint rule at a resolution where every
    ``R_n`` is constant on each cell, which makes it exact.  Long vectors use
    the exact law of a signed sum (Rademacher functions are independent fair
    signs), or seeded Monte Carlo when that law has too many atoms
    (``exact=False``).  With ``trials > 0`` the ratio is also computed for
    random sign flips of ``c``; low/high report the extremes.
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    if not p >= 1:
        raise ParameterDomain("p must be at least 1")
    norm2 = float(np.linalg.norm(c))
    if norm2 == 0:
        raise ParameterDomain("coefficient vector must be nonzero")
    base, exact = _lp_mean(c, p, seed)
    vals = [base / norm2]
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        v, ex = _lp_mean(c * rng.choice([-1.0, 1.0], size=len(c)), p, seed)
        exact = exact and ex
        vals.append(v / norm2)
    return KhintchineResult(vals[0], min(vals), max(vals), exact)


def l2_norm_fn(step: float = 1.0):
    """Discrete L2 norm with the given sample spacing."""
    return lambda v: math.sqrt(step * float(np.sum(np.abs(v) ** 2, axis=-1)))


@dataclass(frozen=True)
class ProbeReport:
    trials: int
    max_deviation: float
    mean_deviation: float
    seed: int
    natural_prefix_deviation: float
    rows: list = field(default_factory=list, repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["trial", "permutation_seed", "max_prefix_deviation", "full_sum_deviation"])
        for r in self.rows:
            writer.writerow([r["trial"], r["permutation_seed"], repr(r["max_prefix_deviation"]), repr(r["full_sum_deviation"])])
        return buf.getvalue()


def _as_rows(terms) -> np.ndarray:
    rows = []
    for t in terms:
        if isinstance(t, SampledSignal):
            rows.append(np.asarray(t.samples))
        else:
            rows.append(np.atleast_1d(np.asarray(t, dtype=complex)))
    return np.vstack(rows) if rows else np.zeros((0, 1), dtype=complex)


def _prefix_deviation(ordered: np.ndarray, norm_fn, burn_in: int) -> tuple[float, np.ndarray]:
    partial = np.cumsum(ordered, axis=0)
    limit = partial[-1]
    devs = np.array([norm_fn(row - limit) for row in partial[burn_in:]])
    return (float(devs.max()) if devs.size else 0.0), limit


def unconditional_probe(terms, norm_fn=None, trials: int = 16, seed: int = 0, burn_in: int = 0) -> ProbeReport:
    """Reorder a finite series at random and measure how its partial sums move.

    Each trial draws a uniform permutation (Fisher-Yates via numpy's PCG64,
    one spawned stream per trial) and a uniform sign pattern.  Per trial it
    records the largest distance between a permuted partial sum (from index
    ``burn_in`` on) and the permuted full sum, and the distance between the
    permuted and natural full sums.  ``max_deviation`` and ``mean_deviation``
    aggregate the prefix statistic.
    """
    X = _as_rows(terms)
    if norm_fn is None:
        norm_fn = lambda v: float(np.abs(v).max()) if np.ndim(v) else abs(v)  # noqa: E731
    natural_dev, S = _prefix_deviation(X, norm_fn, burn_in)
    children = np.random.SeedSequence(seed).spawn(trials)
    rows = []
    for t, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        perm = rng.permutation(len(X))
        signs = rng.choice([-1.0, 1.0], size=len(X))
        dev, limit = _prefix_deviation(X[perm], norm_fn, burn_in)
        rows.append(
            {
                "trial": t,
                "permutation_seed": int(child.generate_state(1, np.uint64)[0]),
                "max_prefix_deviation": dev,
                "full_sum_deviation": float(norm_fn(limit - S)),
                "signed_sum_norm": float(norm_fn((signs[:, None] * X).sum(axis=0))),
            }
        )
    devs = np.array([r["max_prefix_deviation"] for r in rows]) if rows else np.zeros(1)
    return ProbeReport(trials, float(devs.max()), float(devs.mean()), seed, natural_dev, rows)
