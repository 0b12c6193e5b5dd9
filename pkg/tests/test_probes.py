import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import finite
from gaborlab import probes
from gaborlab.errors import DyadicBreakpoint, ParameterDomain

vectors = st.integers(1, 40).flatmap(lambda n: arrays(float, n, elements=st.floats(-10, 10, **finite)))


def test_hilbert_small_case():
    out = probes.discrete_hilbert([1.0, 0.0, 0.0])
    assert np.allclose(out, [0.0, 1.0, 0.5])


@given(vectors)
def test_hilbert_fft_matches_direct(c):
    assert np.allclose(probes.discrete_hilbert(c, "fft"), probes.discrete_hilbert(c), atol=1e-9)


@given(st.integers(1, 30).flatmap(lambda n: st.tuples(*[arrays(float, n, elements=st.floats(-5, 5, **finite))] * 2)))
def test_hilbert_is_antisymmetric(pair):
    c, d = pair
    lhs = np.dot(probes.discrete_hilbert(c), d)
    rhs = -np.dot(c, probes.discrete_hilbert(d))
    assert lhs == pytest.approx(rhs, abs=1e-9)


@given(vectors, st.floats(-3, 3, **finite))
def test_hilbert_is_linear(c, lam):
    d = np.roll(c, 1)
    lhs = probes.discrete_hilbert(lam * c + d)
    rhs = lam * probes.discrete_hilbert(c) + probes.discrete_hilbert(d)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_hilbert_direct_limit():
    with pytest.raises(ParameterDomain):
        probes.discrete_hilbert(np.zeros(2**14 + 1))


def test_rademacher_values():
    assert probes.rademacher(0, 0.25) == 1
    assert probes.rademacher(1, 0.25) == 1
    assert probes.rademacher(1, 0.75) == -1
    with pytest.raises(DyadicBreakpoint):
        probes.rademacher(1, 0.5)


def test_khintchine_p2_is_exact():
    r = probes.khintchine_check([3.0, -4.0, 0.5, 2.0], 2)
    assert r.ratio == pytest.approx(1.0, abs=1e-12) and r.exact


@given(st.integers(1, 16).flatmap(lambda n: arrays(float, n, elements=st.floats(0.1, 5, **finite))))
def test_khintchine_bounds(c):
    # sharp constants: 1/sqrt(2) <= ratio at p = 1, ratio <= 3^(1/4) at p = 4
    assert probes.khintchine_check(c, 1).ratio >= 2**-0.5 - 1e-12
    assert probes.khintchine_check(c, 4).ratio <= 3**0.25 + 1e-12


def test_khintchine_single_term():
    assert probes.khintchine_check([2.5], 3).ratio == pytest.approx(1.0)


def test_khintchine_long_vector_uses_exact_law():
    r = probes.khintchine_check(np.ones(40), 2)
    assert r.exact and r.ratio == pytest.approx(1.0, abs=1e-12)


def test_khintchine_trials_bracket():
    r = probes.khintchine_check([1.0, 2.0, 3.0], 1.5, trials=8, seed=3)
    assert r.low_ratio <= r.ratio <= r.high_ratio


def test_khintchine_domain():
    with pytest.raises(ParameterDomain):
        probes.khintchine_check([1.0], 0.5)
    with pytest.raises(ParameterDomain):
        probes.khintchine_check([0.0, 0.0], 2)


def alternating_harmonic(n):
    return [(-1) ** (j + 1) / j for j in range(1, n + 1)]


def test_conditional_series_moves_under_permutation():
    report = probes.unconditional_probe(alternating_harmonic(10_000), trials=32, seed=1, burn_in=100)
    assert report.natural_prefix_deviation < 0.01
    assert report.max_deviation > 1
    assert sum(r["max_prefix_deviation"] > 0.4 for r in report.rows) >= 24


def test_absolutely_convergent_series_is_stable():
    terms = [2.0**-j for j in range(60)]
    report = probes.unconditional_probe(terms, trials=16, seed=2)
    assert report.max_deviation <= 2.0
    assert all(r["full_sum_deviation"] < 1e-12 for r in report.rows)


def test_probe_is_reproducible():
    a = probes.unconditional_probe(alternating_harmonic(500), trials=4, seed=7)
    b = probes.unconditional_probe(alternating_harmonic(500), trials=4, seed=7)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "trial,permutation_seed,max_prefix_deviation,full_sum_deviation"


def test_probe_with_vector_terms():
    terms = [np.array([1.0, -1.0]) / (j + 1) ** 2 for j in range(50)]
    report = probes.unconditional_probe(terms, norm_fn=probes.l2_norm_fn(0.5), trials=3, seed=0)
    assert report.trials == 3 and len(report.rows) == 3
    assert math.isfinite(report.mean_deviation)
