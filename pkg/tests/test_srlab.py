import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaborlab import srlab
from gaborlab.errors import BudgetExceeded, ParameterDomain, PreconditionFailed, TruncationTooShallow
from gaborlab.gabor import periodization_values
from gaborlab.modnorm import box_equiv_norm
from gaborlab.tfcore import box, fourier_coefficient


def test_first_recursion_steps():
    P1, Q1 = srlab.shapiro_rudin(1)
    assert list(P1) == [1, 1] and list(Q1) == [1, -1]
    P2, _ = srlab.shapiro_rudin(2)
    assert list(P2) == [1, 1, 1, -1]


@given(st.integers(1, 14))
def test_pair_is_complementary(n):
    # |P|^2 + |Q|^2 = 2^(n+1) is equivalent to the aperiodic autocorrelations cancelling
    P, Q = (v.astype(np.int64) for v in srlab.shapiro_rudin(n))
    acf = np.correlate(P, P, "full") + np.correlate(Q, Q, "full")
    centre = len(P) - 1
    assert acf[centre] == 2 ** (n + 1)
    assert not np.delete(acf, centre).any()


def test_degree_budget():
    with pytest.raises(BudgetExceeded):
        srlab.shapiro_rudin(25)


def test_small_blocks():
    f1 = srlab.block_poly(1)
    assert list(f1.freqs) == [1] and list(f1.coeffs) == [1]
    f2 = srlab.block_poly(2)
    assert list(f2.freqs) == [2, 3] and list(f2.coeffs) == [1, -1]


@given(st.integers(1, 12), st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.0]))
def test_flat_spectrum(n, p):
    coeffs = fourier_coefficient(srlab.block_poly(n), (0, 1), np.arange(0, 2**n + 2, dtype=float))
    assert float(np.sum(np.abs(coeffs) ** p)) == 2 ** (n - 1)


@pytest.mark.parametrize("n", range(1, 13))
def test_crest_bound(n):
    assert np.max(np.abs(srlab.block_poly(n).sample_uniform(2**16))) <= 2 ** ((n + 1) / 2)


def test_gp_single_block():
    g = srlab.gp_atom(2, 1)
    (piece,) = g.pieces
    assert list(piece.freqs) == [1]
    assert piece.coeffs[0] == pytest.approx(2**-0.5)


@pytest.mark.parametrize("p", [1.2, 1.5, 2.0])
def test_gp_moduli_per_block(p):
    (piece,) = srlab.gp_atom(p, 6).pieces
    block = np.floor(np.log2(piece.freqs)).astype(int) + 1
    assert np.allclose(np.abs(piece.coeffs), 2.0 ** (-block / p), rtol=1e-14)


def test_gp_sup_bound():
    p, N = 1.5, 10
    bound = 2**0.5 * sum(2 ** (n * (0.5 - 1 / p)) for n in range(1, N + 1))
    (piece,) = srlab.gp_atom(p, N).pieces
    assert np.max(np.abs(piece.sample_uniform(2**16))) <= bound


@pytest.mark.parametrize("p,q,N", [(1.5, 2.0, 3), (1.2, 1.8, 6), (1.5, 1.5, 5)])
def test_gp_q_norm_oracle(p, q, N):
    value = box_equiv_norm(srlab.gp_atom(p, N), q, k_range=range(0, 2**N), n_range=range(0, 1)) ** q
    oracle = 0.5 * sum(2 ** (k * (1 - q / p)) for k in range(1, N + 1))
    assert value == pytest.approx(oracle, rel=1e-12)


def test_gp_domain():
    with pytest.raises(ParameterDomain):
        srlab.gp_atom(1.0, 4)
    with pytest.raises(BudgetExceeded):
        srlab.gp_atom(1.5, 21)


def test_h_atom_bounded_and_small():
    con = srlab.h_construction(1.5, 2.0, 0.25, 0.5, 4, 0.1, 12)
    (piece,) = con.atom.pieces
    assert np.max(np.abs(piece.sample_uniform(2**16))) <= 1
    assert con.q_norm < 0.1
    assert math.log2(con.M).is_integer()


def test_h_identity_dilation_reduces_to_gp():
    con = srlab.h_construction(1.5, 2.0, 0.0, 1.0, 1, 10.0, 4)
    (piece,) = con.atom.pieces
    (gp,) = srlab.gp_atom(1.5, 4).pieces
    assert np.allclose(piece.coeffs * con.M, gp.coeffs)
    assert np.allclose(piece.freqs, gp.freqs)


def test_h_rejects_wrong_cell_length():
    with pytest.raises(ParameterDomain):
        srlab.h_atom(1.5, 2.0, 0.0, 0.3, 4, 0.1, 8)


def test_h_shallow_truncation():
    # p close to q makes the tail decay slowly, so a short truncation cannot be certified
    with pytest.raises(TruncationTooShallow):
        srlab.h_atom(1.95, 2.0, 0.0, 1.0, 1, 1e-3, 2)


@pytest.mark.parametrize("L", [1, 2, 4, 8])
def test_divergence_block_counts(L):
    p, N = 1.5, 14
    prof = srlab.divergence_profile(srlab.gp_atom(p, N), p, L, N)
    oracle = np.cumsum([math.floor(2 ** (n - 1) / L) * 2.0**-n for n in range(1, N + 1)])
    assert np.allclose(prof.partial_sum, oracle, rtol=1e-12, atol=1e-15)
    inc = prof.increments()
    b = np.asarray(prof.block_index)
    assert np.all(inc[2 ** (b - 1) >= L] >= 1 / (4 * L))


def test_divergence_of_dilated_h():
    con = srlab.h_construction(1.5, 2.0, 0.0, 0.25, 4, 0.5, 10)
    prof = srlab.divergence_profile(con.atom, 1.5, 4, 10, dilation=4, scale=con.M)
    direct = srlab.divergence_profile(srlab.gp_atom(1.5, 10), 1.5, 4, 10)
    assert np.allclose(prof.partial_sum, direct.partial_sum, rtol=1e-12)


def test_profile_csv_columns():
    prof = srlab.divergence_profile(srlab.gp_atom(1.5, 4), 1.5, 1, 4, q=2.0)
    head, *rows = prof.to_csv().splitlines()
    assert head == "block,partial_sum_p,partial_sum_q_power,tail_bound_q"
    assert len(rows) == 4


def test_cell_exponents_increase_to_q():
    ps = [srlab.cell_exponent(2.0, k) for k in range(1, 30)]
    assert ps[0] > 1 and all(a < b < 2 for a, b in zip(ps, ps[1:]))


def test_cells_tile_the_unit_interval():
    cells = [srlab.cell_interval(k) for k in range(1, 10)]
    assert cells[0] == (0.5, 0.75)
    assert all(a[1] == b[0] for a, b in zip(cells, cells[1:]))
    assert all(b - a == 2.0 ** (-k - 1) for k, (a, b) in enumerate(cells, start=1))


def test_counterexample_range_and_cells():
    con = srlab.counterexample_construction(2.0, 4, 10)
    x = np.arange(2**14) / 2**14
    mag = np.abs(con.atom(x))
    assert mag.min() >= 1 and mag.max() <= 3
    for k, cell in enumerate(con.cells, start=1):
        assert cell.q_norm < 2.0**-k
        assert cell.L == 2 ** (k + 1)


def test_counterexample_cell_budget():
    with pytest.raises(BudgetExceeded):
        srlab.counterexample_atom(2.0, 13)


def test_parseval_atom_has_flat_periodization():
    h = srlab.counterexample_atom(2.0, 3, 8).scaled(math.sqrt(0.5) / 3)
    g = srlab.parseval_atom(0.5, h, delta=0.05)
    x = np.linspace(0, 1, 4097)[:-1]
    assert np.allclose(periodization_values(g, 1.0, x), 0.5, atol=1e-12)


def test_parseval_preconditions():
    with pytest.raises(PreconditionFailed):
        srlab.parseval_atom(0.5, box(0, 1, 1.0), delta=0.1)  # |h|^2 = 1 > beta
    with pytest.raises(PreconditionFailed):
        srlab.parseval_atom(0.5, box(0, 0.5, 0.5), delta=0.1)  # h vanishes on [1/2, 1)
    with pytest.raises(ParameterDomain):
        srlab.parseval_atom(0.75, box(0, 1, 0.5), delta=0.1)
