"""Shapiro-Rudin blocks and the atoms built from them.

``P_n`` and ``Q_n`` are stored as +-1 coefficient vectors on frequencies
``0 .. 2^n - 1``.  The block ``f_n = P_n - P_{n-1}`` carries exactly the
coefficients of ``Q_{n-1}`` on ``2^(n-1) .. 2^n - 1``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, ParameterDomain, PreconditionFailed, TruncationTooShallow
from .tfcore import NumericPiece, PiecewiseAtom, TrigPiece, as_atom, iter_terms
from .modnorm import box_equiv_norm

MAX_SR_DEGREE = 24
MAX_GP_BLOCKS = 20
MAX_CELLS = 12
M_SEARCH_CAP = 2**40
SUP_SAMPLES = 2**16
PRECONDITION_GRID = 2**14

__all__ = [
    "shapiro_rudin",
    "block_poly",
    "gp_atom",
    "HConstruction",
    "h_construction",
    "h_atom",
    "cell_exponent",
    "CounterexampleConstruction",
    "counterexample_construction",
    "counterexample_atom",
    "parseval_complement",
    "parseval_atom",
    "DivergenceProfile",
    "divergence_profile",
]


@lru_cache(maxsize=None)
def _sr_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    p = q = np.ones(1, dtype=np.int8)
    for _ in range(n):
        p, q = np.concatenate([p, q]), np.concatenate([p, -q])
    p.setflags(write=False)
    q.setflags(write=False)
    return p, q


def shapiro_rudin(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient vectors ``(P_n, Q_n)``, each of length ``2^n``."""
    if n < 0:
        raise ParameterDomain("degree index must be non-negative")
    if n > MAX_SR_DEGREE:
        raise BudgetExceeded(f"n = {n} exceeds the budget guard {MAX_SR_DEGREE}")
    return _sr_pair(int(n))


def _block_signs(n: int) -> np.ndarray:
    return shapiro_rudin(n - 1)[1]


def block_poly(n: int) -> TrigPiece:
    """``f_n = (P_n - P_{n-1}) chi_[0,1)``: signs on frequencies ``2^(n-1) .. 2^n - 1``."""
    if n < 1:
        raise ParameterDomain("block index starts at 1")
    signs = _block_signs(n)
    freqs = np.arange(2 ** (n - 1), 2**n, dtype=float)
    return TrigPiece(0.0, 1.0, signs.astype(float), freqs)


def _gp_terms(p: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    coeffs, freqs = [], []
    for n in range(1, N + 1):
        coeffs.append(_block_signs(n) * 2.0 ** (-n / p))
        freqs.append(np.arange(2 ** (n - 1), 2**n, dtype=float))
    return np.concatenate(coeffs), np.concatenate(freqs)


def gp_atom(p: float, N: int) -> PiecewiseAtom:
    """``sum_{n=1}^N 2^(-n/p) f_n`` on ``[0, 1)``."""
    if not (1 < p <= 2):
        raise ParameterDomain(f"p must lie in (1, 2], got {p}")
    if N < 1:
        raise ParameterDomain("need at least one block")
    if N > MAX_GP_BLOCKS:
        raise BudgetExceeded(f"N = {N} exceeds {MAX_GP_BLOCKS} blocks")
    c, f = _gp_terms(p, N)
    return PiecewiseAtom.of(TrigPiece(0.0, 1.0, c, f))


def gp_sup_bound(p: float, N: int) -> float:
    """``2^(1/2) sum_{n<=N} 2^(n (1/2 - 1/p))``."""
    n = np.arange(1, N + 1)
    return float(math.sqrt(2) * np.sum(2.0 ** (n * (0.5 - 1 / p))))


def _q_power_blocks(p: float, q: float, N: int) -> np.ndarray:
    """``2^(n-1) 2^(-n q/p)`` for ``n = 1..N``: the q-th power mass of block n of g_p."""
    n = np.arange(1, N + 1, dtype=float)
    return 2.0 ** (n - 1 - n * q / p)


def _q_power_tail(p: float, q: float, N: int) -> float:
    r = 2.0 ** (1 - q / p)
    if r >= 1:
        return math.inf
    return 0.5 * r ** (N + 1) / (1 - r)


@dataclass(frozen=True, eq=False)
class HConstruction:
    """``h(x) = g_p(L (x - a)) / M`` on ``[a, b)`` with the numbers that certify it.

    ``q_norm`` is the box norm of the truncated atom on the cell lattice
    (``alpha = 1/L``, ``beta = L``); ``q_tail_bound`` bounds the q-th power
    mass of the blocks dropped by truncation.
    """

    atom: PiecewiseAtom
    p: float
    q: float
    a: float
    b: float
    L: int
    M: float
    N: int
    sup_bound: float
    q_norm: float
    q_tail_bound: float
    epsilon: float

    @property
    def lattice(self) -> tuple[float, float]:
        return (1.0 / self.L, float(self.L))


def h_construction(
    p: float,
    q: float,
    a: float,
    b: float,
    L: int,
    epsilon: float,
    N: int,
    sup_samples: int = SUP_SAMPLES,
) -> HConstruction:
    if not (1 < p < q <= 2):
        raise ParameterDomain(f"need 1 < p < q <= 2, got p={p}, q={q}")
    if int(L) != L or L < 1:
        raise ParameterDomain("L must be a positive integer")
    L = int(L)
    if not math.isclose(b - a, 1.0 / L, rel_tol=1e-12, abs_tol=1e-15):
        raise ParameterDomain(f"b - a must equal 1/L = {1 / L}, got {b - a}")
    if not epsilon > 0:
        raise ParameterDomain("epsilon must be positive")
    if N > MAX_GP_BLOCKS:
        raise BudgetExceeded(f"N = {N} exceeds {MAX_GP_BLOCKS} blocks")
    c, f = _gp_terms(p, N)
    base = TrigPiece(a, b, c * np.exp(-2j * np.pi * L * f * a), L * f)
    sup = base.sup_bound(sup_samples)
    lattice = (1.0 / L, float(L))
    n_cell = round(a * L)
    k_range = range(0, 2**N)
    unit = box_equiv_norm(base, q, *lattice, k_range=k_range, n_range=range(n_cell, n_cell + 1))
    M = 1.0
    while sup / M > 1 or unit / M >= epsilon:
        M *= 2
        if M > M_SEARCH_CAP:
            raise BudgetExceeded("no power of two up to 2^40 satisfies both bounds")
    value = unit / M
    # dropped blocks on the cell lattice carry 2^(n-1) terms of modulus 2^(-n/p) / (M L)
    tail = _q_power_tail(p, q, N) * (M * L) ** (-q)
    slack = epsilon**q - value**q
    if tail > slack:
        raise TruncationTooShallow(
            f"tail bound {tail:.3e} exceeds the q-norm slack {slack:.3e}; increase N"
        )
    atom = PiecewiseAtom.of(base.scaled(1.0 / M))
    return HConstruction(atom, p, q, a, b, L, M, N, sup / M, value, tail, epsilon)


def h_atom(p, q, a, b, L, epsilon, N) -> PiecewiseAtom:
    return h_construction(p, q, a, b, L, epsilon, N).atom


def cell_exponent(q: float, k: int) -> float:
    """``p_k = q - (q - 1)/(k + 1)``: increases strictly to q with ``p_1 > 1``."""
    return q - (q - 1) / (k + 1)


def cell_interval(k: int) -> tuple[float, float]:
    """Dyadic cell ``[1 - 2^(-k), 1 - 2^(-k-1))`` of length ``2^(-k-1)``."""
    return 1.0 - 2.0 ** (-k), 1.0 - 2.0 ** (-k - 1)


@dataclass(frozen=True, eq=False)
class CounterexampleConstruction:
    atom: PiecewiseAtom
    q: float
    cells: tuple  # HConstruction per cell, k = 1..K


def counterexample_construction(q: float, K: int, N: int = 10) -> CounterexampleConstruction:
    """``g = sum_{k<=K} g_k + 2 chi_[0,1)`` with ``g_k`` an h-atom on cell k.

    Cell k uses exponent ``cell_exponent(q, k)``, dilation ``L = 2^(k+1)``
    and q-norm budget ``2^(-k)``.  Cells start at 1/2; ``[0, 1/2)`` and the
    part of ``[0, 1)`` past the last cell carry the constant alone.
    """
    if not (1 < q <= 2):
        raise ParameterDomain(f"q must lie in (1, 2], got {q}")
    if K < 0:
        raise ParameterDomain("K must be non-negative")
    if K > MAX_CELLS:
        raise BudgetExceeded(f"K = {K} exceeds {MAX_CELLS} cells")
    pieces, cells = [TrigPiece.constant(0.0, 0.5, 2.0)], []
    for k in range(1, K + 1):
        a, b = cell_interval(k)
        cell = h_construction(cell_exponent(q, k), q, a, b, 2 ** (k + 1), 2.0 ** (-k), N)
        cells.append(cell)
        content = cell.atom.pieces[0]
        pieces.append(
            TrigPiece(a, b, np.append(content.coeffs, 2.0), np.append(content.freqs, 0.0))
        )
    rest = cell_interval(K + 1)[0]
    pieces.append(TrigPiece.constant(rest, 1.0, 2.0))
    return CounterexampleConstruction(PiecewiseAtom(tuple(pieces)), q, tuple(cells))


def counterexample_atom(q: float, K: int, N: int = 10) -> PiecewiseAtom:
    return counterexample_construction(q, K, N).atom


def parseval_complement(beta: float, h) -> NumericPiece:
    """``x -> sqrt(beta - |h(x - 1)|^2)`` on ``[1, 2)``."""
    h = as_atom(h)
    from .serialize import atom_to_dict

    try:
        spec = {"builder": "parseval_complement", "params": {"beta": beta, "h": atom_to_dict(h)}}
    except ValueError:
        spec = None

    def func(x):
        return np.sqrt(np.maximum(beta - np.abs(h(x - 1.0)) ** 2, 0.0)) + 0j

    return NumericPiece(1.0, 2.0, func, "piecewise-continuous", spec, tuple(h.breakpoints + 1.0))


def parseval_atom(beta: float, h, delta: float, resolution: int = PRECONDITION_GRID) -> PiecewiseAtom:
    """``h + sqrt(beta - |h|^2)(. - 1) chi_[1,2)``: its period-1 periodization is beta."""
    if not (0 < beta <= 0.5):
        raise ParameterDomain(f"Parseval construction is limited to 0 < beta <= 1/2, got {beta}")
    h = as_atom(h)
    lo, hi = h.support
    if lo < 0 or hi > 1:
        raise PreconditionFailed(f"h must be supported in [0, 1], got [{lo}, {hi}]")
    x = np.unique(np.concatenate([np.arange(resolution) / resolution, h.breakpoints[h.breakpoints < 1]]))
    mag2 = np.abs(h(x)) ** 2
    bad = (mag2 <= delta) | (mag2 > beta)
    if bad.any():
        i = int(np.argmax(bad))
        raise PreconditionFailed(
            f"need {delta} < |h|^2 <= {beta}; at x = {x[i]:.6g} |h|^2 = {mag2[i]:.6g}"
        )
    return PiecewiseAtom(h.pieces + (parseval_complement(beta, h),))


@dataclass(frozen=True)
class DivergenceProfile:
    block_index: list
    partial_sum: list
    partial_sum_q_power: list | None = None
    tail_bound_q: list | None = None

    def increments(self) -> np.ndarray:
        return np.diff(np.concatenate([[0.0], self.partial_sum]))

    def slope(self, first_block: int = 1) -> float:
        b = np.asarray(self.block_index)
        s = np.asarray(self.partial_sum)
        keep = b >= first_block
        return float(np.polyfit(b[keep], s[keep], 1)[0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["block", "partial_sum_p", "partial_sum_q_power", "tail_bound_q"])
        for i, blk in enumerate(self.block_index):
            qp = "" if self.partial_sum_q_power is None else repr(self.partial_sum_q_power[i])
            tb = "" if self.tail_bound_q is None else repr(self.tail_bound_q[i])
            writer.writerow([blk, repr(self.partial_sum[i]), qp, tb])
        return buf.getvalue()


def divergence_profile(
    atom,
    p: float,
    L: int,
    blocks: int,
    q: float | None = None,
    dilation: float = 1.0,
    scale: float = 1.0,
) -> DivergenceProfile:
    """Running sums of ``|coef|^p`` over frequencies divisible by L, per dyadic block.

    Frequencies are divided by ``dilation`` and coefficients multiplied by
    ``scale`` first, so ``h`` atoms can be profiled in the coordinates of the
    ``g_p`` they were dilated from.  With ``q`` given, the q-th power sums over
    all positive frequencies are reported too, together with a geometric
    extrapolation of the remaining tail from the last two block increments.
    """
    freqs, coeffs = [], []
    for c, f in iter_terms(atom):
        coeffs.append(c)
        freqs.append(f)
    if freqs:
        m = np.concatenate(freqs) / dilation
        c = np.concatenate(coeffs) * scale
    else:
        m = np.zeros(0)
        c = np.zeros(0, dtype=complex)
    mi = np.round(m)
    if len(m) and np.max(np.abs(m - mi)) > 1e-9:
        raise ParameterDomain("atom frequencies are not on the integer lattice")
    mi = mi.astype(np.int64)
    uniq, inv = np.unique(mi, return_inverse=True)
    summed = np.bincount(inv, weights=c.real, minlength=len(uniq)) + 1j * np.bincount(
        inv, weights=c.imag, minlength=len(uniq)
    )
    mags = np.abs(summed)
    pos = uniq >= 1
    blk = np.zeros(len(uniq), dtype=np.int64)
    blk[pos] = np.floor(np.log2(uniq[pos])).astype(np.int64) + 1
    div = pos & (uniq % L == 0)
    idx = list(range(1, blocks + 1))
    p_inc = np.array([np.sum(mags[div & (blk == j)] ** p) for j in idx])
    partial = np.cumsum(p_inc).tolist()
    qp = tail = None
    if q is not None:
        q_inc = np.array([np.sum(mags[pos & (blk == j)] ** q) for j in idx])
        qp = np.cumsum(q_inc).tolist()
        tail = []
        for j in range(len(idx)):
            if j == 0 or q_inc[j - 1] == 0:
                tail.append(math.inf if q_inc[j] > 0 else 0.0)
                continue
            r = q_inc[j] / q_inc[j - 1]
            tail.append(float(q_inc[j] * r / (1 - r)) if r < 1 else math.inf)
    return DivergenceProfile(idx, partial, qp, tail)
