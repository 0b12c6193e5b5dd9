"""Exact and sampled signal representations.

Atoms are compactly supported, piecewise defined functions on the real line.
A :class:`TrigPiece` is a finite exponential sum restricted to a half-open
interval ``[a, b)`` and is handled in closed form; a :class:`NumericPiece`
wraps a vectorised evaluator and goes through adaptive quadrature.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import QuadratureFailure, ValidationError

EPS_DEG = 1e-12
QUAD_TOL = 1e-10
QUAD_BUDGET = 2**20
ALIGN_TOL = 1e-9

# elements per dense block when materialising (points x terms) matrices
_CHUNK = 2**22

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

__all__ = [
    "Grid",
    "TrigPiece",
    "NumericPiece",
    "PiecewiseAtom",
    "SampledSignal",
    "MixedNormParams",
    "CoeffGrid",
    "as_atom",
    "box",
    "affine_piece",
    "gaussian_piece",
    "evaluate",
    "translate",
    "modulate",
    "fourier_coefficient",
    "lpq_norm",
    "lp_norm",
    "trapezoid_weights",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``start + step * j`` for ``j = 0 .. count-1``."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise ValidationError(f"grid step must be positive, got {self.step}")
        if self.count < 1:
            raise ValidationError(f"grid needs at least one point, got {self.count}")

    @classmethod
    def spanning(cls, a: float, b: float, count: int) -> "Grid":
        """``count`` points covering ``[a, b)`` (right endpoint excluded)."""
        return cls(float(a), (b - a) / count, int(count))

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def stop(self) -> float:
        return self.start + self.step * self.count


# ---------------------------------------------------------------------------
# pieces


@dataclass(frozen=True, eq=False)
class TrigPiece:
    """``x -> sum_m coeffs[m] * exp(2 pi i freqs[m] x)`` on ``[a, b)``, zero elsewhere."""

    a: float
    b: float
    coeffs: np.ndarray
    freqs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        freqs = np.array(self.freqs, dtype=float).reshape(-1)
        if coeffs.shape != freqs.shape:
            raise ValidationError("coeffs and freqs must have equal length")
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise ValidationError(f"invalid interval [{self.a}, {self.b})")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "coeffs", _readonly(coeffs))
        object.__setattr__(self, "freqs", _readonly(freqs))

    @classmethod
    def constant(cls, a: float, b: float, value: complex = 1.0) -> "TrigPiece":
        return cls(a, b, [value], [0.0])

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def terms(self) -> list[tuple[complex, float]]:
        return list(zip(self.coeffs.tolist(), self.freqs.tolist()))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        inside = (x >= self.a) & (x < self.b)
        if inside.any():
            out[inside] = _exp_sum(self.coeffs, self.freqs, x[inside])
        return out

    def translate(self, x0: float) -> "TrigPiece":
        return TrigPiece(
            self.a + x0,
            self.b + x0,
            self.coeffs * np.exp(-2j * np.pi * self.freqs * x0),
            self.freqs,
        )

    def modulate(self, xi: float) -> "TrigPiece":
        return TrigPiece(self.a, self.b, self.coeffs, self.freqs + xi)

    def scaled(self, factor: complex) -> "TrigPiece":
        return TrigPiece(self.a, self.b, self.coeffs * factor, self.freqs)

    def conj(self) -> "TrigPiece":
        return TrigPiece(self.a, self.b, np.conj(self.coeffs), -self.freqs)

    def restrict(self, a: float, b: float) -> "TrigPiece":
        return TrigPiece(max(a, self.a), min(b, self.b), self.coeffs, self.freqs)

    def merged(self) -> "TrigPiece":
        """Combine terms sharing a frequency (exact key match)."""
        uniq, inv = np.unique(self.freqs, return_inverse=True)
        re = np.bincount(inv, weights=self.coeffs.real, minlength=len(uniq))
        im = np.bincount(inv, weights=self.coeffs.imag, minlength=len(uniq))
        return TrigPiece(self.a, self.b, re + 1j * im, uniq)

    def lipschitz(self) -> float:
        """Upper bound on ``|d/dx piece|``."""
        return float(2 * np.pi * np.sum(np.abs(self.coeffs) * np.abs(self.freqs)))

    def sample_uniform(self, count: int) -> np.ndarray:
        """Values at ``a + j (b - a) / count``, ``j < count``.

        Uses a folded FFT when every ``freq * (b - a)`` is an integer.
        """
        length = self.length
        scaled = self.freqs * length
        idx = np.round(scaled)
        if len(idx) and np.max(np.abs(scaled - idx)) <= ALIGN_TOL:
            bins = np.mod(idx.astype(np.int64), count)
            spec = np.zeros(count, dtype=complex)
            np.add.at(spec, bins, self.coeffs * np.exp(2j * np.pi * self.freqs * self.a))
            return count * np.fft.ifft(spec)
        return _exp_sum(self.coeffs, self.freqs, self.a + length * np.arange(count) / count)

    def sup_bound(self, count: int = 2**16) -> float:
        """Certified bound on ``sup |piece|``: sampled max plus a Lipschitz margin."""
        sampled = float(np.max(np.abs(self.sample_uniform(count))))
        return sampled + self.lipschitz() * self.length / count


@dataclass(frozen=True, eq=False)
class NumericPiece:
    """A pointwise evaluator on ``[a, b)``.

    ``func`` must accept an array of points inside ``[a, b)``.  ``spec`` is the
    named-builder record used for serialisation (``None`` means the piece
    cannot be written to disk).  ``breaks`` lists interior points where
    ``func`` may jump or kink; quadrature splits there, and a jump that is not
    listed may be missed.
    """

    a: float
    b: float
    func: Callable[[np.ndarray], np.ndarray]
    smoothness: str = "continuous"
    spec: dict | None = field(default=None, repr=False)
    breaks: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise ValidationError(f"invalid interval [{self.a}, {self.b})")
        if self.smoothness not in ("continuous", "piecewise-continuous"):
            raise ValidationError(f"unknown smoothness hint {self.smoothness!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        inner = sorted({float(t) for t in self.breaks if self.a < t < self.b})
        object.__setattr__(self, "breaks", tuple(inner))

    @property
    def length(self) -> float:
        return self.b - self.a

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        inside = (x >= self.a) & (x < self.b)
        if inside.any():
            out[inside] = self.func(x[inside])
        return out

    def _wrap(self, a, b, func, builder, shift=0.0, **params) -> "NumericPiece":
        spec = None
        if self.spec is not None:
            if builder == "translate":
                params["shift"] = shift
            spec = {"builder": builder, "params": {**params, "piece": self._full_spec()}}
        breaks = tuple(t + shift for t in self.breaks)
        return NumericPiece(a, b, func, self.smoothness, spec, breaks)

    def _full_spec(self) -> dict:
        return {"a": self.a, "b": self.b, "smoothness": self.smoothness, **self.spec}

    def translate(self, x0: float) -> "NumericPiece":
        f = self.func
        return self._wrap(self.a + x0, self.b + x0, lambda x: f(x - x0), "translate", shift=x0)

    def modulate(self, xi: float) -> "NumericPiece":
        f = self.func
        return self._wrap(
            self.a, self.b, lambda x: np.exp(2j * np.pi * xi * x) * f(x), "modulate", xi=xi
        )

    def scaled(self, factor: complex) -> "NumericPiece":
        f = self.func
        factor = complex(factor)
        return self._wrap(
            self.a, self.b, lambda x: factor * f(x), "scale",
            factor=[factor.real, factor.imag],
        )

    def conj(self) -> "NumericPiece":
        f = self.func
        return self._wrap(self.a, self.b, lambda x: np.conj(f(x)), "conj")

    def restrict(self, a: float, b: float) -> "NumericPiece":
        return self._wrap(max(a, self.a), min(b, self.b), self.func, "restrict")


Piece = TrigPiece | NumericPiece


def affine_piece(a: float, b: float, slope: float, intercept: float) -> NumericPiece:
    """``x -> slope * x + intercept`` on ``[a, b)``."""
    spec = {"builder": "affine", "params": {"slope": slope, "intercept": intercept}}
    return NumericPiece(
        a, b, lambda x: slope * np.asarray(x) + intercept + 0j, "continuous", spec
    )


def gaussian_piece(sigma: float = 1.0, radius: float = 12.0) -> NumericPiece:
    """L2-normalised Gaussian ``(pi sigma^2)^(-1/4) exp(-x^2 / (2 sigma^2))`` cut at ``radius * sigma``."""
    if not sigma > 0:
        raise ValidationError("sigma must be positive")
    spec = {"builder": "gaussian", "params": {"sigma": sigma, "radius": radius}}
    norm = (math.pi * sigma**2) ** -0.25
    return NumericPiece(
        -radius * sigma,
        radius * sigma,
        lambda x: norm * np.exp(-(np.asarray(x) ** 2) / (2 * sigma**2)) + 0j,
        "continuous",
        spec,
    )


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True, eq=False)
class PiecewiseAtom:
    """Ordered pieces with pairwise disjoint half-open intervals."""

    pieces: tuple

    def __post_init__(self):
        pieces = tuple(sorted(self.pieces, key=lambda p: (p.a, p.b)))
        for left, right in zip(pieces, pieces[1:]):
            if right.a < left.b:
                raise ValidationError(
                    f"overlapping pieces [{left.a}, {left.b}) and [{right.a}, {right.b})"
                )
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def of(cls, *pieces: Piece) -> "PiecewiseAtom":
        return cls(tuple(pieces))

    @property
    def support(self) -> tuple[float, float]:
        if not self.pieces:
            return (0.0, 0.0)
        return (self.pieces[0].a, max(p.b for p in self.pieces))

    @property
    def breakpoints(self) -> np.ndarray:
        pts = [p.a for p in self.pieces] + [p.b for p in self.pieces]
        return np.unique(np.array(pts, dtype=float))

    @property
    def is_trig(self) -> bool:
        return all(isinstance(p, TrigPiece) for p in self.pieces)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for piece in self.pieces:
            out += piece(x)
        return out

    def translate(self, x0: float) -> "PiecewiseAtom":
        return PiecewiseAtom(tuple(p.translate(x0) for p in self.pieces))

    def modulate(self, xi: float) -> "PiecewiseAtom":
        return PiecewiseAtom(tuple(p.modulate(xi) for p in self.pieces))

    def scaled(self, factor: complex) -> "PiecewiseAtom":
        return PiecewiseAtom(tuple(p.scaled(factor) for p in self.pieces))

    def conj(self) -> "PiecewiseAtom":
        return PiecewiseAtom(tuple(p.conj() for p in self.pieces))

    def l2_norm(self, tol: float = QUAD_TOL) -> float:
        total = 0.0
        for piece in self.pieces:
            if isinstance(piece, TrigPiece):
                total += _trig_energy(piece)
            else:
                vals = _adaptive_integral(
                    lambda x, f=piece: np.abs(f(x)) ** 2, piece.a, piece.b,
                    np.zeros(1), tol, QUAD_BUDGET,
                )
                total += float(vals[0].real)
        return math.sqrt(max(total, 0.0))


def as_atom(obj) -> PiecewiseAtom:
    if isinstance(obj, PiecewiseAtom):
        return obj
    if isinstance(obj, (TrigPiece, NumericPiece)):
        return PiecewiseAtom((obj,))
    if hasattr(obj, "as_atom"):
        return obj.as_atom()
    raise TypeError(f"cannot interpret {type(obj).__name__} as an atom")


def box(a: float = 0.0, b: float = 1.0, height: complex = 1.0) -> PiecewiseAtom:
    """Indicator of ``[a, b)`` scaled by ``height``."""
    return PiecewiseAtom((TrigPiece.constant(a, b, height),))


def evaluate(atom, x):
    """Value of ``atom`` at ``x`` (scalar in, scalar out)."""
    vals = as_atom(atom)(np.asarray(x, dtype=float))
    return complex(vals) if np.ndim(vals) == 0 else vals


def translate(atom, x0: float):
    return as_atom(atom).translate(x0)


def modulate(atom, xi: float):
    return as_atom(atom).modulate(xi)


# ---------------------------------------------------------------------------
# sampled signals


def trapezoid_weights(count: int, step: float) -> np.ndarray:
    w = np.full(count, step)
    if count > 1:
        w[0] = w[-1] = step / 2
    return w


@dataclass(frozen=True, eq=False)
class SampledSignal:
    start: float
    step: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex).reshape(-1)
        if not self.step > 0:
            raise ValidationError("step must be positive")
        if samples.size < 1:
            raise ValidationError("a sampled signal needs at least one sample")
        object.__setattr__(self, "samples", _readonly(samples))

    @classmethod
    def from_function(cls, func, grid: Grid) -> "SampledSignal":
        return cls(grid.start, grid.step, func(grid.points()))

    @property
    def grid(self) -> Grid:
        return Grid(self.start, self.step, len(self.samples))

    def points(self) -> np.ndarray:
        return self.grid.points()

    def l2_norm(self) -> float:
        w = trapezoid_weights(len(self.samples), self.step)
        return math.sqrt(float(np.sum(w * np.abs(self.samples) ** 2)))


# ---------------------------------------------------------------------------
# mixed norms


@dataclass(frozen=True)
class MixedNormParams:
    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = float(getattr(self, name))
            if not (v >= 1):
                raise ValidationError(f"{name} must lie in [1, inf], got {v}")
            object.__setattr__(self, name, v)

    @staticmethod
    def conjugate(p: float) -> float:
        if p == 1:
            return math.inf
        if math.isinf(p):
            return 1.0
        return p / (p - 1)

    @property
    def p_conj(self) -> float:
        return self.conjugate(self.p)

    @property
    def q_conj(self) -> float:
        return self.conjugate(self.q)


def lp_norm(values, p: float, axis=None):
    mags = np.abs(np.asarray(values))
    if math.isinf(p):
        return np.max(mags, axis=axis, initial=0.0)
    return np.sum(mags**p, axis=axis) ** (1.0 / p)


@dataclass(frozen=True, eq=False)
class CoeffGrid:
    """Dense block of lattice coefficients, ``entries[k - k_start, n - n_start]``."""

    k_start: int
    n_start: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2:
            raise ValidationError("coefficient grid must be two-dimensional")
        object.__setattr__(self, "entries", _readonly(entries))

    @classmethod
    def zeros(cls, k_range: range, n_range: range) -> "CoeffGrid":
        return cls(k_range.start, n_range.start, np.zeros((len(k_range), len(n_range))))

    @property
    def k_range(self) -> range:
        return range(self.k_start, self.k_start + self.entries.shape[0])

    @property
    def n_range(self) -> range:
        return range(self.n_start, self.n_start + self.entries.shape[1])

    def entry(self, k: int, n: int) -> complex:
        if k not in self.k_range or n not in self.n_range:
            return 0j
        return complex(self.entries[k - self.k_start, n - self.n_start])

    def energy(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    def to_csv(self, fh=None) -> str | None:
        """Write rows ``k, n, re, im``; returns the text if ``fh`` is None."""
        buf = io.StringIO() if fh is None else fh
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "n", "re", "im"])
        for i, k in enumerate(self.k_range):
            for j, n in enumerate(self.n_range):
                c = self.entries[i, j]
                writer.writerow([k, n, repr(float(c.real)), repr(float(c.imag))])
        return buf.getvalue() if fh is None else None

    @classmethod
    def from_csv(cls, text: str) -> "CoeffGrid":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValidationError("empty coefficient CSV")
        ks = [int(r["k"]) for r in rows]
        ns = [int(r["n"]) for r in rows]
        k0, n0 = min(ks), min(ns)
        entries = np.zeros((max(ks) - k0 + 1, max(ns) - n0 + 1), dtype=complex)
        for r, k, n in zip(rows, ks, ns):
            entries[k - k0, n - n0] = float(r["re"]) + 1j * float(r["im"])
        return cls(k0, n0, entries)


def lpq_norm(grid: CoeffGrid | np.ndarray, params: MixedNormParams) -> float:
    """``(sum_n (sum_k |c_kn|^p)^(q/p))^(1/q)``; inner index k, outer index n."""
    entries = grid.entries if isinstance(grid, CoeffGrid) else np.asarray(grid)
    if entries.size == 0:
        return 0.0
    inner = lp_norm(entries, params.p, axis=0)
    return float(lp_norm(inner, params.q))


# ---------------------------------------------------------------------------
# Fourier coefficients over intervals


def _exp_sum(coeffs: np.ndarray, freqs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``sum_m coeffs[m] exp(2 pi i freqs[m] x)`` for each x, in bounded blocks."""
    out = np.empty(x.shape, dtype=complex)
    flat_x = x.reshape(-1)
    flat_out = out.reshape(-1)
    if len(coeffs) == 0:
        flat_out[:] = 0
        return out
    step = max(1, _CHUNK // len(coeffs))
    for s in range(0, flat_x.size, step):
        xs = flat_x[s : s + step]
        flat_out[s : s + step] = np.exp(2j * np.pi * np.outer(xs, freqs)) @ coeffs
    return out


def _trig_energy(piece: TrigPiece) -> float:
    """Exact ``int_a^b |piece|^2``."""
    merged = piece.merged()
    c, f = merged.coeffs, merged.freqs
    total = 0.0
    step = max(1, _CHUNK // max(len(c), 1))
    for s in range(0, len(c), step):
        d = f[s : s + step, None] - f[None, :]
        integ = _interval_integral(d, piece.a, piece.b)
        total += float(np.real(np.conj(c[s : s + step]) @ integ @ c))
    return total


def _interval_integral(d: np.ndarray, a: float, b: float) -> np.ndarray:
    """``int_a^b exp(-2 pi i d x) dx`` elementwise, with the length branch near d = 0."""
    length = b - a
    val = length * np.sinc(d * length) * np.exp(-1j * np.pi * d * (a + b))
    return np.where(np.abs(d) < EPS_DEG, length + 0j, val)


def _aligned_keys(values: np.ndarray, base: float, length: float):
    scaled = (values - base) * length
    keys = np.round(scaled)
    if np.all(np.abs(scaled - keys) <= ALIGN_TOL):
        return keys.astype(np.int64)
    return None


def _trig_integral(piece: TrigPiece, a: float, b: float, omegas: np.ndarray) -> np.ndarray:
    """``int_a^b piece(x) exp(-2 pi i omega x) dx`` for every omega, in closed form."""
    coeffs, freqs = piece.coeffs, piece.freqs
    out = np.zeros(omegas.shape, dtype=complex)
    if len(coeffs) == 0 or len(omegas) == 0:
        return out
    length = b - a
    base = float(freqs[0])
    fkeys = _aligned_keys(freqs, base, length)
    okeys = _aligned_keys(omegas, base, length) if fkeys is not None else None
    if okeys is not None:
        # lattice-aligned: every off-diagonal term integrates to exactly zero
        uniq, inv = np.unique(fkeys, return_inverse=True)
        summed = np.bincount(inv, weights=coeffs.real, minlength=len(uniq)) + 1j * np.bincount(
            inv, weights=coeffs.imag, minlength=len(uniq)
        )
        pos = np.searchsorted(uniq, okeys)
        pos_c = np.clip(pos, 0, len(uniq) - 1)
        hit = uniq[pos_c] == okeys
        # phase exp(-2 pi i (omega - freq) a) is 1 up to the alignment tolerance
        out[hit] = summed[pos_c[hit]] * length
        return out
    step = max(1, _CHUNK // len(coeffs))
    for s in range(0, len(omegas), step):
        d = omegas[s : s + step, None] - freqs[None, :]
        out[s : s + step] = _interval_integral(d, a, b) @ coeffs
    return out


def _gl_panels(func, lo: np.ndarray, hi: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """16-point Gauss-Legendre of ``func(x) exp(-2 pi i omega x)`` on each panel."""
    half = (hi - lo)[:, None] / 2
    mid = (hi + lo)[:, None] / 2
    x = mid + half * _GL_NODES[None, :]
    vals = np.asarray(func(x.reshape(-1)), dtype=complex).reshape(x.shape) * half
    vals *= _GL_WEIGHTS[None, :]
    out = np.empty((len(lo), len(omegas)), dtype=complex)
    rows = max(1, _CHUNK // max(len(omegas) * 16, 1))
    for s in range(0, len(lo), rows):
        phase = np.exp(-2j * np.pi * x[s : s + rows, :, None] * omegas[None, None, :])
        out[s : s + rows] = np.einsum("pj,pjw->pw", vals[s : s + rows], phase)
    return out


def _adaptive_integral(func, a: float, b: float, omegas: np.ndarray, tol: float, budget: int):
    """Locally adaptive bisection with a 16-point Gauss-Legendre rule per panel.

    A panel is accepted when it agrees with the sum over its two halves to
    within its share of ``tol`` at every omega.  The integrand is assumed
    smooth on ``[a, b]``: a jump that falls between the nodes of every level
    can go unseen, so callers split at known breaks first.  Raises
    QuadratureFailure once the evaluation count exceeds ``budget``.
    """
    length = b - a
    span = float(np.max(np.abs(omegas))) if len(omegas) else 0.0
    n0 = max(1, int(math.ceil(length * span)))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    whole = _gl_panels(func, lo, hi, omegas)
    evals = 16 * n0
    total = np.zeros(len(omegas), dtype=complex)
    while len(lo):
        mid = (lo + hi) / 2
        left = _gl_panels(func, lo, mid, omegas)
        right = _gl_panels(func, mid, hi, omegas)
        evals += 32 * len(lo)
        refined = left + right
        err = np.max(np.abs(refined - whole), axis=1)
        share = tol * (hi - lo) / length
        ok = (err <= share) | (hi - lo <= length * 1e-14)
        total += refined[ok].sum(axis=0)
        bad = ~ok
        if not bad.any():
            break
        if evals > budget:
            raise QuadratureFailure(
                f"quadrature on [{a}, {b}) did not reach tol={tol} within {budget} evaluations"
            )
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        whole = np.concatenate([left[bad], right[bad]])
    return total


def fourier_coefficient(
    atom,
    interval: Sequence[float],
    omega,
    tol: float = QUAD_TOL,
    budget: int = QUAD_BUDGET,
):
    """``int_I atom(x) exp(-2 pi i omega x) dx``.

    ``omega`` may be a scalar or an array; the result has the same shape.
    Trig pieces are integrated in closed form, numeric pieces adaptively.
    """
    atom = as_atom(atom)
    lo, hi = (float(v) for v in interval)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValidationError("integration interval must be bounded")
    scalar = np.ndim(omega) == 0
    omegas = np.atleast_1d(np.asarray(omega, dtype=float)).reshape(-1)
    out = np.zeros(omegas.shape, dtype=complex)
    for piece in atom.pieces:
        a, b = max(lo, piece.a), min(hi, piece.b)
        if b <= a:
            continue
        if isinstance(piece, TrigPiece):
            out += _trig_integral(piece, a, b, omegas)
        else:
            edges = [a, *(t for t in piece.breaks if a < t < b), b]
            for u, v in zip(edges[:-1], edges[1:]):
                share = tol * (v - u) / (b - a)
                out += _adaptive_integral(piece.func, u, v, omegas, share, budget)
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(omega))


def product_pieces(f: PiecewiseAtom, g: PiecewiseAtom) -> list:
    """Pieces of ``f * g`` on the pairwise intersections of their intervals."""
    out = []
    for pf in f.pieces:
        for pg in g.pieces:
            a, b = max(pf.a, pg.a), min(pf.b, pg.b)
            if b <= a:
                continue
            if isinstance(pf, TrigPiece) and isinstance(pg, TrigPiece):
                coeffs = np.outer(pf.coeffs, pg.coeffs).reshape(-1)
                freqs = np.add.outer(pf.freqs, pg.freqs).reshape(-1)
                out.append(TrigPiece(a, b, coeffs, freqs))
            else:
                ff = pf.func if isinstance(pf, NumericPiece) else pf
                gg = pg.func if isinstance(pg, NumericPiece) else pg
                hints = {getattr(pf, "smoothness", "continuous"), getattr(pg, "smoothness", "continuous")}
                smooth = "continuous" if hints == {"continuous"} else "piecewise-continuous"
                breaks = getattr(pf, "breaks", ()) + getattr(pg, "breaks", ())
                out.append(NumericPiece(a, b, lambda x, ff=ff, gg=gg: ff(x) * gg(x), smooth, None, breaks))
    return out


def iter_terms(atom) -> Iterable[tuple[np.ndarray, np.ndarray]]:
    for piece in as_atom(atom).pieces:
        if isinstance(piece, TrigPiece):
            yield piece.coeffs, piece.freqs
