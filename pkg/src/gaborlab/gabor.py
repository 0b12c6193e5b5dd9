"""Gabor systems in the painless regime.

For ``supp(g) ⊆ [0, 1/beta]`` the frame operator of ``G(g, alpha, beta)``
is multiplication by ``D(x) / beta`` with ``D(x) = sum_k |g(x - alpha k)|^2``,
so frame bounds and the canonical dual come straight from ``D``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import FrameLowerBoundZero, InvalidLattice, NotPainlessEligible, ValidationError
from .tfcore import (
    QUAD_BUDGET,
    CoeffGrid,
    Grid,
    NumericPiece,
    PiecewiseAtom,
    SampledSignal,
    as_atom,
    fourier_coefficient,
    product_pieces,
    trapezoid_weights,
)

EPS_FRAME = 1e-10
PERIOD_RESOLUTION = 2**14
SUPPORT_TOL = 1e-12

__all__ = [
    "GaborSystem",
    "QuotientAtom",
    "CoeffGrid",
    "PainlessReport",
    "Reconstruction",
    "triangle",
    "periodization",
    "periodization_values",
    "painless_check",
    "canonical_dual",
    "analysis",
    "synthesis",
    "reconstruct",
    "walnut_check",
    "walnut_csv",
]


def triangle() -> PiecewiseAtom:
    """``x/2`` on ``[0, 1)`` and ``1 - x/2`` on ``[1, 2)``."""
    from .tfcore import affine_piece

    return PiecewiseAtom.of(affine_piece(0, 1, 0.5, 0.0), affine_piece(1, 2, -0.5, 1.0))


@dataclass(frozen=True, eq=False)
class GaborSystem:
    atom: object
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValidationError("alpha and beta must be positive")
        object.__setattr__(self, "atom", as_atom(self.atom))

    @property
    def painless_eligible(self) -> bool:
        lo, hi = self.atom.support
        return lo >= -SUPPORT_TOL and hi <= 1 / self.beta + SUPPORT_TOL


def _shift_range(support: tuple[float, float], alpha: float, lo: float, hi: float) -> range:
    """Integers k with ``[lo, hi] - alpha k`` meeting ``support``."""
    s0, s1 = support
    return range(math.floor((lo - s1) / alpha), math.ceil((hi - s0) / alpha) + 1)


def periodization_values(atom, alpha: float, x) -> np.ndarray:
    """``sum_k |atom(x - alpha k)|^2`` with the k-sum cut exactly at the support."""
    atom = as_atom(atom)
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    if x.size == 0:
        return out
    for k in _shift_range(atom.support, alpha, float(x.min()), float(x.max())):
        out += np.abs(atom(x - alpha * k)) ** 2
    return out


def periodization(system: GaborSystem, grid: Grid) -> SampledSignal:
    vals = periodization_values(system.atom, system.alpha, grid.points())
    return SampledSignal(grid.start, grid.step, vals)


def _period_points(atom: PiecewiseAtom, alpha: float, resolution: int) -> np.ndarray:
    grid = np.arange(resolution) * (alpha / resolution)
    ends = np.mod(atom.breakpoints, alpha)
    return np.unique(np.concatenate([grid, ends]))


@dataclass(frozen=True)
class PainlessReport:
    is_frame: bool
    A: float
    B: float


def painless_check(system: GaborSystem, resolution: int = PERIOD_RESOLUTION) -> PainlessReport:
    """Frame bounds from grid inf/sup of ``D`` over one period, divided by beta."""
    if not system.painless_eligible:
        raise NotPainlessEligible(
            f"support {system.atom.support} is not inside [0, {1 / system.beta}]"
        )
    if system.alpha * system.beta > 1 + 1e-15:
        raise InvalidLattice(f"alpha * beta = {system.alpha * system.beta} > 1")
    pts = _period_points(system.atom, system.alpha, resolution)
    d = periodization_values(system.atom, system.alpha, pts)
    inf, sup = float(d.min()), float(d.max())
    return PainlessReport(inf > EPS_FRAME, inf / system.beta, sup / system.beta)


@dataclass(frozen=True, eq=False)
class QuotientAtom:
    """``beta * g(x) / sum_k |g(x - alpha k)|^2`` on ``supp(g)``."""

    numerator: PiecewiseAtom
    alpha: float
    beta: float
    resolution: int = PERIOD_RESOLUTION

    def __post_init__(self):
        object.__setattr__(self, "numerator", as_atom(self.numerator))
        lo, hi = self.numerator.support
        pts = np.unique(
            np.concatenate([np.linspace(lo, hi, self.resolution, endpoint=False), self.numerator.breakpoints])
        )
        pts = pts[pts < hi]
        d = periodization_values(self.numerator, self.alpha, pts)
        if d.min() <= EPS_FRAME:
            raise FrameLowerBoundZero(
                f"periodization vanishes near x = {pts[np.argmin(d)]:.6g} on the support"
            )

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        num = self.numerator(x)
        out = np.zeros(x.shape, dtype=complex)
        nz = num != 0
        if nz.any():
            d = periodization_values(self.numerator, self.alpha, x[nz])
            out[nz] = self.beta * num[nz] / d
        return out

    @property
    def support(self) -> tuple[float, float]:
        return self.numerator.support

    def _breaks(self, a: float, b: float) -> tuple:
        """Numerator breakpoints shifted by multiples of alpha that land in ``(a, b)``."""
        bp = self.numerator.breakpoints
        lo, hi = self.support
        ks = np.arange(math.floor((a - hi) / self.alpha), math.ceil((b - lo) / self.alpha) + 1)
        pts = (bp[:, None] + self.alpha * ks[None, :]).reshape(-1)
        return tuple(np.unique(pts[(pts > a) & (pts < b)]))

    def as_atom(self) -> PiecewiseAtom:
        from .serialize import atom_to_dict

        try:
            num_doc = atom_to_dict(self.numerator)
        except ValidationError:
            num_doc = None
        pieces = []
        for p in self.numerator.pieces:
            spec = None
            if num_doc is not None:
                spec = {
                    "builder": "quotient",
                    "params": {"numerator": num_doc, "alpha": self.alpha, "beta": self.beta},
                }
            smooth = getattr(p, "smoothness", "continuous")
            pieces.append(NumericPiece(p.a, p.b, self, smooth, spec, self._breaks(p.a, p.b)))
        return PiecewiseAtom(tuple(pieces))


def canonical_dual(system: GaborSystem) -> QuotientAtom:
    report = painless_check(system)
    if not report.is_frame:
        raise FrameLowerBoundZero("periodization is not bounded below; no canonical dual")
    return QuotientAtom(system.atom, system.alpha, system.beta)


def _window_atom(system) -> tuple[PiecewiseAtom, float, float]:
    if isinstance(system, QuotientAtom):
        return system.as_atom(), system.alpha, system.beta
    return system.atom, system.alpha, system.beta


def analysis(
    system,
    f,
    k_range: range,
    n_range: range,
    tol: float = 1e-10,
    budget: int = QUAD_BUDGET,
) -> CoeffGrid:
    """``c[k, n] = <f, M_{beta n} T_{alpha k} g>``.

    ``system`` may be a :class:`GaborSystem` or a :class:`QuotientAtom`
    (its own alpha and beta are used).  Piecewise ``f`` is integrated piece
    by piece (closed form when both sides are exponential sums); sampled
    ``f`` uses the trapezoid rule on its own grid.
    """
    g, alpha, beta = _window_atom(system)
    k_range, n_range = range(k_range.start, k_range.stop), range(n_range.start, n_range.stop)
    freqs = beta * np.arange(n_range.start, n_range.stop, dtype=float)
    entries = np.zeros((len(k_range), len(n_range)), dtype=complex)
    if isinstance(f, SampledSignal):
        x = f.points()
        w = trapezoid_weights(len(x), f.step) * f.samples
        phase = None
        for i, k in enumerate(k_range):
            gk = g(x - alpha * k)
            nz = np.nonzero(gk)[0]
            if nz.size == 0:
                continue
            sl = slice(nz[0], nz[-1] + 1)
            v = w[sl] * np.conj(gk[sl])
            phase = np.exp(-2j * np.pi * np.outer(freqs, x[sl]))
            entries[i] = phase @ v
        return CoeffGrid(k_range.start, n_range.start, entries)
    f = as_atom(f)
    gconj = g.conj()
    for i, k in enumerate(k_range):
        pieces = product_pieces(f, gconj.translate(alpha * k))
        if not pieces:
            continue
        prod = PiecewiseAtom(tuple(pieces))
        lo, hi = prod.support
        entries[i] = fourier_coefficient(prod, (lo, hi), freqs, tol=tol, budget=budget)
    return CoeffGrid(k_range.start, n_range.start, entries)


def _neumaier_add(total: np.ndarray, comp: np.ndarray, term: np.ndarray) -> None:
    t = total + term
    big = np.abs(total) >= np.abs(term)
    comp += np.where(big, (total - t) + term, (term - t) + total)
    total[...] = t


def synthesis(system, coeffs: CoeffGrid, grid: Grid, order=None) -> SampledSignal:
    """``sum c[k, n] M_{beta n} T_{alpha k} g`` sampled on ``grid``.

    Accumulation is k-major, n-minor with Neumaier compensation.  ``order``
    optionally gives an explicit sequence of ``(k, n)`` index pairs to sum
    term by term instead.
    """
    g, alpha, beta = _window_atom(system)
    x = grid.points()
    total = np.zeros(x.shape, dtype=complex)
    comp = np.zeros(x.shape, dtype=complex)
    ks, ns = coeffs.k_range, coeffs.n_range
    if order is not None:
        for k, n in order:
            c = coeffs.entry(k, n)
            if c == 0:
                continue
            term = c * np.exp(2j * np.pi * beta * n * x) * g(x - alpha * k)
            _neumaier_add(total, comp, term)
        return SampledSignal(grid.start, grid.step, total + comp)
    nvals = beta * np.arange(ns.start, ns.stop, dtype=float)
    for i, k in enumerate(ks):
        row = coeffs.entries[i]
        if not row.any():
            continue
        gk = g(x - alpha * k)
        nz = np.nonzero(gk)[0]
        if nz.size == 0:
            continue
        sl = slice(nz[0], nz[-1] + 1)
        modsum = np.exp(2j * np.pi * np.outer(x[sl], nvals)) @ row
        term = np.zeros_like(total)
        term[sl] = modsum * gk[sl]
        _neumaier_add(total, comp, term)
    return SampledSignal(grid.start, grid.step, total + comp)


@dataclass(frozen=True)
class Reconstruction:
    fhat: SampledSignal
    rel_err_l2: float
    coeffs: CoeffGrid


def reconstruct(
    f,
    system: GaborSystem,
    dual=None,
    k_range: range | None = None,
    n_range: range = range(-64, 65),
    grid: Grid | None = None,
) -> Reconstruction:
    """``fhat = sum <f, M T dual> M T g`` on a finite window; reports the L2 error on ``grid``."""
    if dual is None:
        dual = canonical_dual(system)
    elif not isinstance(dual, QuotientAtom):
        dual = GaborSystem(dual, system.alpha, system.beta)
    if isinstance(f, SampledSignal):
        lo, hi = f.start, f.grid.stop
        grid = grid or f.grid
        fvals = SampledSignal.from_function(_sampled_lookup(f), grid).samples
    else:
        f = as_atom(f)
        lo, hi = f.support
        grid = grid or Grid.spanning(lo, hi, 4096)
        fvals = f(grid.points())
    if k_range is None:
        dsupp = (dual.support if isinstance(dual, QuotientAtom) else dual.atom.support)
        k_range = _shift_range(dsupp, system.alpha, lo, hi)
    coeffs = analysis(dual, f, k_range, n_range)
    fhat = synthesis(system, coeffs, grid)
    w = trapezoid_weights(grid.count, grid.step)
    num = math.sqrt(float(np.sum(w * np.abs(fhat.samples - fvals) ** 2)))
    den = math.sqrt(float(np.sum(w * np.abs(fvals) ** 2)))
    rel = num / den if den > 0 else num
    return Reconstruction(fhat, rel, coeffs)


def _sampled_lookup(f: SampledSignal):
    def lookup(x):
        idx = np.round((x - f.start) / f.step).astype(np.int64)
        out = np.zeros(x.shape, dtype=complex)
        ok = (idx >= 0) & (idx < len(f.samples))
        out[ok] = f.samples[idx[ok]]
        return out

    return lookup


def walnut_check(
    g,
    h,
    alpha: float,
    shift: float,
    n_range: range,
    grid_points: int = 2**12,
) -> dict[int, float]:
    """Max deviation of ``sum_k g(x - alpha k - shift n) h(x - alpha k)`` from ``delta_{n,0} / shift``.

    The maximum is over ``grid_points`` uniform points of ``[0, alpha)``.
    """
    g, h = as_atom(g), as_atom(h)
    beta = 1.0 / shift
    x = np.arange(grid_points) * (alpha / grid_points)
    ks = _shift_range(h.support, alpha, 0.0, alpha)
    out = {}
    for n in n_range:
        acc = np.zeros(x.shape, dtype=complex)
        for k in ks:
            acc += g(x - alpha * k - shift * n) * h(x - alpha * k)
        target = beta if n == 0 else 0.0
        out[n] = float(np.max(np.abs(acc - target)))
    return out


def walnut_csv(table: dict[int, float]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "max_deviation"])
    for n in sorted(table):
        writer.writerow([n, repr(table[n])])
    return buf.getvalue()
