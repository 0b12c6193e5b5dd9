"""Exit criteria, runnable from pytest and from ``gaborlab accept``.

Each criterion returns a :class:`CriterionResult`; tolerances are fixed here.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import gabor, modnorm, probes, srlab
from .tfcore import Grid, SampledSignal, TrigPiece, box, fourier_coefficient, lp_norm

SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    name: str
    modules: tuple
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


CRITERIA = []


def criterion(number, name, *modules):
    def deco(fn):
        CRITERIA.append((number, name, modules, fn))
        return fn

    return deco


# -- shared test signals ----------------------------------------------------


def hann_signal(rng, lo: float, hi: float, step: float, n_freqs: int = 6, band: float = 8.0) -> SampledSignal:
    """Random trig sum under a Hann envelope on [lo, hi], zero at both ends."""
    count = int(round((hi - lo) / step)) + 1
    x = lo + step * np.arange(count)
    freqs = rng.uniform(-band, band, n_freqs)
    amps = rng.standard_normal(n_freqs) + 1j * rng.standard_normal(n_freqs)
    env = np.sin(np.pi * (x - lo) / (hi - lo)) ** 2
    vals = env * (np.exp(2j * np.pi * np.outer(x, freqs)) @ amps)
    sig = SampledSignal(lo, step, vals)
    return SampledSignal(lo, step, vals / sig.l2_norm())


def painless_coefficient_window(beta: float, step: float) -> range:
    """A full period of modulation indices for a sample spacing ``step``."""
    m = int(round(1 / (beta * step)))
    return range(-(m // 2), m - m // 2)


def frame_energy(system: gabor.GaborSystem, f: SampledSignal) -> float:
    lo, hi = f.start, f.grid.stop
    s0, s1 = system.atom.support
    ks = range(math.floor((lo - s1) / system.alpha), math.ceil((hi - s0) / system.alpha) + 1)
    coeffs = gabor.analysis(system, f, ks, painless_coefficient_window(system.beta, f.step))
    return coeffs.energy()


# -- criteria ---------------------------------------------------------------


@criterion(1, "flat-spectrum exactness", "srlab")
def flat_spectrum():
    bad = []
    for j in range(1, 13):
        fj = srlab.block_poly(j)
        coeffs = fourier_coefficient(fj, (0, 1), np.arange(0, 2**j + 1, dtype=float))
        for p in (1, 1.5, 2, 4):
            total = float(np.sum(np.abs(coeffs) ** p))
            if total != 2 ** (j - 1):
                bad.append((j, p, total))
    return not bad, f"{12 * 4 - len(bad)}/48 exact" + (f"; first miss {bad[0]}" if bad else "")


@criterion(2, "crest bound", "srlab")
def crest_bound():
    worst = 0.0
    for n in range(1, 13):
        sup = float(np.max(np.abs(srlab.block_poly(n).sample_uniform(2**16))))
        worst = max(worst, sup / 2 ** ((n + 1) / 2))
    return worst <= 1.0, f"max sup/2^((n+1)/2) = {worst:.4f}"


@criterion(3, "painless frames", "gabor")
def painless_frames():
    box_sys = gabor.GaborSystem(box(), 1, 1)
    rb = gabor.painless_check(box_sys)
    x = np.linspace(-0.5, 1.5, 4001)
    dual_ok = np.array_equal(gabor.canonical_dual(box_sys)(x), box()(x))
    tri_sys = gabor.GaborSystem(gabor.triangle(), 1, 0.5)
    rt = gabor.painless_check(tri_sys)
    bounds_ok = abs(rt.A - 0.25) <= 1e-9 and abs(rt.B - 0.5) <= 1e-9
    rng = np.random.default_rng(SEED)
    energies = []
    for _ in range(100):
        lo = rng.uniform(-2, 2)
        f = hann_signal(rng, lo, lo + rng.uniform(1, 4), 1 / 128)
        energies.append(frame_energy(tri_sys, f))
    worst = max(0.0, rt.A - min(energies), max(energies) - rt.B)
    ineq_ok = worst <= 1e-6
    ok = rb.A == 1 and rb.B == 1 and rb.is_frame and dual_ok and bounds_ok and ineq_ok
    return ok, (
        f"box A={rb.A} B={rb.B} dual exact={dual_ok}; triangle A={rt.A:.12g} B={rt.B:.12g}; "
        f"||Cf||^2 in [{min(energies):.4f}, {max(energies):.4f}], worst violation {worst:.2e}"
    )


@criterion(4, "Walnut duality of triangle and 1/2 chi_[0,2]", "gabor")
def walnut():
    table = gabor.walnut_check(gabor.triangle(), box(0, 2, 0.5), 1.0, 2.0, range(-8, 9), 2**12)
    worst = max(table.values())
    worst_n = max(table, key=table.get)
    return worst <= 1e-12, f"max deviation {worst:.3g} at n={worst_n} (off-diagonal max {max(v for n, v in table.items() if n):.3g})"


@criterion(5, "Parseval construction", "srlab", "gabor")
def parseval():
    beta = 0.5
    ce = srlab.counterexample_atom(2.0, 6, 8)
    h = ce.scaled(math.sqrt(beta) / 3)
    g = srlab.parseval_atom(beta, h, delta=beta / 10)
    x = np.arange(2**14) / 2**14
    dev = float(np.max(np.abs(gabor.periodization_values(g, 1.0, x) - beta)))
    system = gabor.GaborSystem(g, 1.0, beta)
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(20):
        lo = rng.uniform(-1, 1)
        f = hann_signal(rng, lo, lo + rng.uniform(1, 3), 1 / 128)
        worst = max(worst, abs(math.sqrt(frame_energy(system, f)) - f.l2_norm()))
    return dev <= 1e-10 and worst <= 1e-5, f"periodization deviation {dev:.2e}; worst | ||Cf|| - ||f|| | {worst:.2e}"


@criterion(6, "dichotomy reproduction", "srlab")
def dichotomy():
    p, q, L, N = 1.5, 2.0, 4, 20
    prof = srlab.divergence_profile(srlab.gp_atom(p, N), p, L, N, q=q)
    qp = np.asarray(prof.partial_sum_q_power)
    inc = np.diff(np.concatenate([[0.0], qp]))
    ratios = inc[1:] / inc[:-1]
    r = 2 ** (1 - q / p)
    ratio_ok = np.allclose(ratios, r, rtol=1e-12, atol=0)
    tail = prof.tail_bound_q[-1]
    tail_frac = tail / qp[-1]
    p_inc = prof.increments()
    b = np.asarray(prof.block_index)
    min_inc = float(p_inc[b >= 4].min())
    slope = prof.slope(first_block=4)
    ok = ratio_ok and tail_frac < 1e-2 and min_inc >= 0.115 and 0.115 <= slope <= 0.130
    return ok, (
        f"q-ratio {ratios.mean():.12f} (target {r:.12f}); tail/total {tail_frac:.5f}; "
        f"min p-increment {min_inc:.4f}; slope {slope:.4f}"
    )


@criterion(7, "counterexample atom sanity", "srlab")
def counterexample():
    con = srlab.counterexample_construction(2.0, 8, 10)
    x = np.arange(2**16) / 2**16
    mag = np.abs(con.atom(x))
    range_ok = mag.min() >= 1 - 1e-9 and mag.max() <= 3 + 1e-9
    worst = 0.0
    for k, cell in enumerate(con.cells, start=1):
        alpha, beta = cell.lattice
        n0 = round(cell.a / alpha)
        val = modnorm.box_equiv_norm(
            cell.atom, 2.0, alpha, beta, k_range=range(0, 2**cell.N), n_range=range(n0, n0 + 1)
        )
        worst = max(worst, val * 2**k)
    return range_ok and worst < 1, f"|g| in [{mag.min():.4f}, {mag.max():.4f}]; max cell norm * 2^k = {worst:.4f}"


@criterion(8, "discrete Hilbert boundedness evidence", "probes")
def hilbert():
    rng = np.random.default_rng(SEED + 8)
    lengths = (512, 1024, 2048, 4096)
    details, ok = [], True
    for p in (1.5, 2.0, 3.0):
        maxes = []
        for N in lengths:
            vecs = rng.standard_normal((200, N))
            maxes.append(max(lp_norm(probes.discrete_hilbert(v, "fft"), p) / lp_norm(v, p) for v in vecs))
        ok &= maxes[-1] <= 1.05 * maxes[0]
        details.append(f"p={p}: {maxes[0]:.3f}->{maxes[-1]:.3f}")
    return bool(ok), "; ".join(details)


@criterion(9, "Khintchine p=2 exactness", "probes")
def khintchine():
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    for _ in range(100):
        c = rng.standard_normal(rng.integers(1, 17))
        worst = max(worst, abs(probes.khintchine_check(c, 2.0).ratio - 1))
    return worst <= 1e-10, f"max |ratio - 1| = {worst:.2e}"


@criterion(10, "extensible-pair arithmetic", "modnorm")
def extensible():
    ok = True
    for p1 in (1, 1.5, 2, 5):
        r = modnorm.extensible_check(1, p1)
        ok &= r.valid and r.analysis_exp == p1 and r.synthesis_target_exp == p1
    r = modnorm.extensible_check(1.5, 1.2)
    ok &= r.valid and r.analysis_exp == 2 and r.synthesis_target_exp == 6
    ok &= not modnorm.extensible_check(2, 1).valid
    return bool(ok), f"(1.5, 1.2) -> ({r.analysis_exp}, {r.synthesis_target_exp}); (2, 1) valid={modnorm.extensible_check(2, 1).valid}"


@criterion(11, "reconstruction", "gabor")
def reconstruction():
    system = gabor.GaborSystem(box(), 1, 1)
    window = range(-64, 65)
    grid = Grid.spanning(0, 1, 2**13)
    rng = np.random.default_rng(SEED + 11)
    worst_in = 0.0
    for _ in range(10):
        m = rng.integers(1, 8)
        f = TrigPiece(0, 1, rng.standard_normal(m) + 1j * rng.standard_normal(m), rng.integers(-64, 65, m))
        worst_in = max(worst_in, gabor.reconstruct(f, system, box(), n_range=window, grid=grid).rel_err_l2)
    ratios = []
    for xi in (0.5, 64.25, 70.0, -90.5):
        f = TrigPiece(0, 1, [1.0], [xi])
        measured = gabor.reconstruct(f, system, box(), n_range=window, grid=grid).rel_err_l2
        kept = fourier_coefficient(f, (0, 1), np.arange(-64, 65, dtype=float))
        analytic = math.sqrt(max(1 - float(np.sum(np.abs(kept) ** 2)), 0.0))
        ratios.append(measured / analytic)
    ok = worst_in <= 1e-10 and all(0.5 <= r <= 2 for r in ratios)
    return ok, f"in-window rel err {worst_in:.2e}; out-of-window measured/analytic {[round(r, 4) for r in ratios]}"


def run(filter_: str | None = None, numbers=None) -> list[CriterionResult]:
    results = []
    for number, name, modules, fn in sorted(CRITERIA, key=lambda c: c[0]):
        if filter_ and filter_ not in modules:
            continue
        if numbers and number not in numbers:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failed criterion
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CriterionResult(number, name, modules, bool(passed), detail, time.perf_counter() - t0))
    return results
