"""Modulation-space norm estimators.

Two routes: a Riemann-sum mixed norm of a sampled short-time Fourier
transform with a Gaussian window, and the box-Fourier-coefficient sum over a
lattice of intervals, which is exact for exponential-sum atoms.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.signal import czt

from .errors import DomainTruncationWarning, GridTooCoarse, InvalidLattice, ParameterDomain
from .tfcore import (
    Grid,
    SampledSignal,
    TrigPiece,
    as_atom,
    fourier_coefficient,
    lp_norm,
    trapezoid_weights,
)

TRUNCATION_SIGMAS = 12.0
BOUNDARY_RATIO = 1e-8

__all__ = [
    "GaussianWindow",
    "StftMatrix",
    "ExtensiblePair",
    "ExtensibleReport",
    "stft",
    "mpq_norm_stft",
    "box_equiv_norm",
    "box_coefficients",
    "extensible_check",
    "norm_report_csv",
]


@dataclass(frozen=True)
class GaussianWindow:
    """``psi(x) = (pi sigma^2)^(-1/4) exp(-x^2 / (2 sigma^2))``, unit L2 norm."""

    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterDomain("sigma must be positive")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (math.pi * self.sigma**2) ** -0.25 * np.exp(-(x**2) / (2 * self.sigma**2))

    @property
    def radius(self) -> float:
        return TRUNCATION_SIGMAS * self.sigma

    def sampled(self, step: float, center: float = 0.0) -> SampledSignal:
        """The window translated to ``center`` on a grid symmetric about it."""
        half = int(math.ceil(self.radius / step))
        start = center - half * step
        return SampledSignal(start, step, self(np.arange(2 * half + 1) * step + start - center))


@dataclass(frozen=True, eq=False)
class StftMatrix:
    x_grid: Grid
    w_grid: Grid
    values: np.ndarray  # shape (x count, w count)

    def __post_init__(self):
        if self.values.shape != (self.x_grid.count, self.w_grid.count):
            raise ValueError("value matrix does not match grid sizes")

    def mixed_norm(self, p: float, q: float) -> float:
        """Riemann sum of ``L^{p,q}``: inner over x, outer over w."""
        mags = np.abs(self.values)
        if math.isinf(p):
            inner = mags.max(axis=0)
        else:
            inner = (np.sum(mags**p, axis=0) * self.x_grid.step) ** (1 / p)
        if math.isinf(q):
            return float(inner.max())
        return float((np.sum(inner**q) * self.w_grid.step) ** (1 / q))

    def boundary_ratio(self) -> float:
        mags = np.abs(self.values)
        peak = mags.max()
        if peak == 0:
            return 0.0
        ring = max(mags[0].max(), mags[-1].max(), mags[:, 0].max(), mags[:, -1].max())
        return float(ring / peak)


def _as_samples(f, step: float) -> SampledSignal:
    if isinstance(f, SampledSignal):
        return f
    atom = as_atom(f)
    lo, hi = atom.support
    count = max(1, int(math.ceil((hi - lo) / step)))
    return SampledSignal.from_function(atom, Grid(lo, (hi - lo) / count, count))


def _band_edge(w_grid: Grid) -> float:
    return max(abs(w_grid.start), abs(w_grid.start + w_grid.step * (w_grid.count - 1)))


def stft(f, window: GaussianWindow, x_grid: Grid, w_grid: Grid) -> StftMatrix:
    """``V f(x, w) = int f(t) psi(t - x) exp(-2 pi i w t) dt`` on the product grid.

    Piecewise ``f`` is first sampled at step ``min(sigma / 8, 1 / (4 W))``,
    with W the largest ``|w|`` on the grid; the t-integral is the trapezoid
    rule on the sample grid, windowed to ``|t - x| <= 12 sigma``.  A sampled
    ``f`` must resolve the whole frequency grid, since the sum is periodic in
    w with period ``1 / step``.
    """
    edge = _band_edge(w_grid)
    step = window.sigma / 8 if edge == 0 else min(window.sigma / 8, 1 / (4 * edge))
    sig = _as_samples(f, step)
    if sig.step > window.sigma / 4:
        raise GridTooCoarse(f"signal step {sig.step} exceeds sigma/4 = {window.sigma / 4}")
    if edge >= 1 / (2 * sig.step):
        raise GridTooCoarse(
            f"frequency grid reaches |w| = {edge}, beyond the sampling limit {1 / (2 * sig.step)}"
        )
    t0, h = sig.start, sig.step
    weighted = trapezoid_weights(len(sig.samples), h) * sig.samples
    xs = x_grid.points()
    values = np.zeros((len(xs), w_grid.count), dtype=complex)
    if not np.any(weighted):
        return StftMatrix(x_grid, w_grid, values)
    # rows hold weighted samples under each translated window, zero-padded to one length
    r = window.radius
    width = int(math.floor(2 * r / h)) + 2
    first = np.ceil((xs - r - t0) / h).astype(np.int64)
    idx = first[:, None] + np.arange(width)[None, :]
    inside = (idx >= 0) & (idx < len(weighted))
    tt = t0 + h * idx
    rows = np.where(inside, weighted[np.clip(idx, 0, len(weighted) - 1)], 0) * window(tt - xs[:, None])
    rows[np.abs(tt - xs[:, None]) > r] = 0
    # sum_j rows[i, j] exp(-2 pi i w_k (t_first + j h)) on the uniform w grid, via chirp z
    w0, dw = w_grid.start, w_grid.step
    z = czt(rows, m=w_grid.count, w=np.exp(-2j * np.pi * dw * h), a=np.exp(2j * np.pi * w0 * h), axis=1)
    ws = w_grid.points()
    values = z * np.exp(-2j * np.pi * np.outer(tt[:, 0], ws))
    return StftMatrix(x_grid, w_grid, values)


def _default_grids(sig: SampledSignal, window: GaussianWindow, w_max: float | None):
    lo, hi = sig.start, sig.grid.stop
    pad = 8 * window.sigma
    x_grid = Grid.spanning(lo - pad, hi + pad, int(math.ceil((hi - lo + 2 * pad) / (window.sigma / 4))))
    if w_max is None:
        # zero padding lets the edges of the support show up in the spectrum
        n = 4 * len(sig.samples)
        spec = np.abs(np.fft.fft(sig.samples, n))
        freqs = np.abs(np.fft.fftfreq(n, sig.step))
        w_max = float(freqs[spec > 1e-8 * spec.max()].max()) if spec.max() > 0 else 0.0
        w_max += 8 / (2 * math.pi * window.sigma)
    dw = 1 / (4 * (hi - lo + 2 * pad))
    count = 2 * int(math.ceil(w_max / dw)) + 1
    w_grid = Grid(-dw * (count // 2), dw, count)
    return x_grid, w_grid


def mpq_norm_stft(
    f,
    p: float,
    q: float,
    window: GaussianWindow | None = None,
    x_grid: Grid | None = None,
    w_grid: Grid | None = None,
    w_max: float | None = None,
) -> float:
    """Riemann-sum ``||V_psi f||_{L^{p,q}}`` (inner x, outer w).

    Warns with :class:`DomainTruncationWarning` when the grid boundary still
    carries more than ``1e-8`` of the peak magnitude.
    """
    if not (p >= 1 and q >= 1):
        raise ParameterDomain("p and q must be at least 1")
    window = window or GaussianWindow()
    if x_grid is None or w_grid is None:
        probe = _as_samples(f, window.sigma / 8)
        dx, dw = _default_grids(probe, window, w_max)
        x_grid, w_grid = x_grid or dx, w_grid or dw
    mat = stft(f, window, x_grid, w_grid)
    if mat.boundary_ratio() > BOUNDARY_RATIO:
        warnings.warn(
            f"|V f| on the grid boundary is {mat.boundary_ratio():.2e} of its peak",
            DomainTruncationWarning,
            stacklevel=2,
        )
    return mat.mixed_norm(p, q)


def _check_box_params(p: float, alpha: float, beta: float) -> None:
    if not (1 < p <= 2):
        raise ParameterDomain(f"box norm needs 1 < p <= 2, got p = {p}")
    if not (alpha > 0 and beta > 0) or alpha * beta > 1 + 1e-15:
        raise InvalidLattice(f"need 0 < alpha * beta <= 1, got {alpha} * {beta}")


def _default_ranges(atom, alpha: float, beta: float):
    lo, hi = atom.support
    n_range = range(math.floor(lo / alpha), math.ceil(hi / alpha))
    fmax = 0.0
    for piece in atom.pieces:
        if isinstance(piece, TrigPiece) and len(piece.freqs):
            fmax = max(fmax, float(np.max(np.abs(piece.freqs))))
    kmax = int(math.ceil(fmax / beta)) + 1
    return range(-kmax, kmax + 1), n_range


def box_coefficients(f, alpha: float, beta: float, k_range=None, n_range=None) -> np.ndarray:
    """Matrix ``F(f chi_[alpha n, alpha (n+1)])(beta k)``, rows k, columns n."""
    atom = as_atom(f)
    dk, dn = _default_ranges(atom, alpha, beta)
    k_range = dk if k_range is None else k_range
    n_range = dn if n_range is None else n_range
    omegas = beta * np.arange(k_range.start, k_range.stop, dtype=float)
    out = np.zeros((len(omegas), len(n_range)), dtype=complex)
    for j, n in enumerate(n_range):
        out[:, j] = fourier_coefficient(atom, (alpha * n, alpha * (n + 1)), omegas)
    return out


def box_equiv_norm(f, p: float, alpha: float = 1.0, beta: float = 1.0, k_range=None, n_range=None) -> float:
    """``(sum_{k,n} |F(f chi_[alpha n, alpha(n+1)])(beta k)|^p)^(1/p)`` over the window.

    Restricted to ``1 < p <= 2``.  Default ranges cover the support and, for
    exponential-sum atoms, every term frequency.
    """
    _check_box_params(p, alpha, beta)
    coeffs = box_coefficients(f, alpha, beta, k_range, n_range)
    return float(lp_norm(coeffs.reshape(-1), p))


@dataclass(frozen=True)
class ExtensiblePair:
    p: float
    p1: float

    def __post_init__(self):
        if not (1 <= self.p <= 2):
            raise ParameterDomain(f"p must lie in [1, 2], got {self.p}")
        if not self.p1 >= 1:
            raise ParameterDomain(f"p1 must be at least 1, got {self.p1}")

    @property
    def valid(self) -> bool:
        p, p1 = _exact(self.p), _exact(self.p1)
        return p == 1 or p1 * (2 * p - 2) < p


@dataclass(frozen=True)
class ExtensibleReport:
    valid: bool
    analysis_exp: float | None
    synthesis_target_exp: float | None


def _exact(x: float) -> Fraction:
    # decimal reading, so 1.2 means 6/5 rather than its binary neighbour
    return Fraction(repr(float(x)))


def extensible_check(p: float, p1: float) -> ExtensibleReport:
    """Validity of ``(p, p1)`` and the exponents ``p p1/(p + p1 - p p1)``, ``p p1/(p + 2 p1 - 2 p p1)``.

    Arithmetic is exact over the rationals.
    """
    pair = ExtensiblePair(p, p1)
    if not pair.valid:
        return ExtensibleReport(False, None, None)
    P, P1 = _exact(p), _exact(p1)
    ana = P * P1 / (P + P1 - P * P1)
    syn = P * P1 / (P + 2 * P1 - 2 * P * P1)
    return ExtensibleReport(True, float(ana), float(syn))


def norm_report_csv(rows) -> str:
    """Rows of ``(atom_id, method, p, q, window, value)``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["atom_id", "method", "p", "q", "window", "value"])
    for row in rows:
        writer.writerow([row[0], row[1], row[2], row[3], row[4], repr(float(row[5]))])
    return buf.getvalue()
