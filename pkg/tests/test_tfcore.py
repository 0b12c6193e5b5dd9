import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import finite, trig_pieces
from gaborlab.errors import QuadratureFailure, ValidationError
from gaborlab.tfcore import (
    CoeffGrid,
    Grid,
    MixedNormParams,
    NumericPiece,
    PiecewiseAtom,
    SampledSignal,
    TrigPiece,
    affine_piece,
    as_atom,
    box,
    evaluate,
    fourier_coefficient,
    lp_norm,
    lpq_norm,
    modulate,
    product_pieces,
    translate,
)


def numeric_twin(piece: TrigPiece) -> NumericPiece:
    return NumericPiece(piece.a, piece.b, lambda x: piece(x))


# -- evaluation -------------------------------------------------------------


def test_box_is_half_open():
    assert np.array_equal(evaluate(box(), [0.0, 0.5, 1.0, -1e-12]), [1, 1, 0, 0])


def test_translate_and_modulate_act_pointwise(rng):
    f = TrigPiece(0, 1, [1 + 2j, -0.5], [2.0, 3.5])
    x = rng.uniform(-1, 3, 200)
    assert np.allclose(evaluate(translate(f, 0.75), x), f(x - 0.75), atol=1e-13)
    assert np.allclose(evaluate(modulate(f, 1.25), x), np.exp(2j * np.pi * 1.25 * x) * f(x), atol=1e-13)


def test_atom_rejects_overlap():
    with pytest.raises(ValidationError):
        PiecewiseAtom((TrigPiece.constant(0, 1), TrigPiece.constant(0.5, 2)))


def test_triangle_norm():
    tri = PiecewiseAtom((affine_piece(0, 1, 0.5, 0), affine_piece(1, 2, -0.5, 1)))
    assert tri.l2_norm() == pytest.approx(math.sqrt(1 / 6), rel=1e-12)


# -- Fourier coefficients ---------------------------------------------------


def test_box_coefficient_at_half():
    assert fourier_coefficient(box(), (0, 1), 0.5) == pytest.approx(-2j / math.pi, abs=1e-15)


def test_box_coefficients_vanish_at_nonzero_integers():
    c = fourier_coefficient(box(), (0, 1), np.arange(-5, 6, dtype=float))
    expected = np.zeros(11)
    expected[5] = 1
    assert np.allclose(c, expected, atol=1e-15)


def test_degenerate_frequency_branch():
    f = TrigPiece(0, 1, [1.0], [0.3])
    near = fourier_coefficient(f, (0, 1), 0.3 + 1e-14)
    assert near == pytest.approx(1.0, abs=1e-12)


@given(trig_pieces(), st.floats(-15, 15, **finite))
def test_closed_form_matches_quadrature(piece, omega):
    exact = fourier_coefficient(piece, (piece.a, piece.b), omega)
    numeric = fourier_coefficient(numeric_twin(piece), (piece.a, piece.b), omega)
    scale = 1 + float(np.sum(np.abs(piece.coeffs))) * piece.length
    assert abs(exact - numeric) <= 1e-9 * scale


@given(trig_pieces(), trig_pieces(), st.floats(-2, 2, **finite), st.floats(-8, 8, **finite))
def test_coefficient_linearity(f, g, lam, omega):
    lo, hi = min(f.a, g.a), max(f.b, g.b)
    lhs = lam * fourier_coefficient(f, (lo, hi), omega) + fourier_coefficient(g, (lo, hi), omega)
    h = NumericPiece(lo, hi, lambda x: lam * f(x) + g(x), "piecewise-continuous", breaks=(f.a, f.b, g.a, g.b))
    rhs = fourier_coefficient(h, (lo, hi), omega)
    assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))


def test_declared_break_is_respected():
    # the jump sits just right of a bisection point, invisible to the nodes
    step = lambda x: np.where(x < 1, 1.0, 0.0) + 0j  # noqa: E731
    piece = NumericPiece(0, 3.5546875, step, "piecewise-continuous", breaks=(1.0,))
    assert fourier_coefficient(piece, (0, 3.5546875), 0.0) == pytest.approx(1.0, abs=1e-12)


@given(trig_pieces(), st.floats(-3, 3, **finite), st.floats(-6, 6, **finite))
def test_translation_covariance(f, x0, omega):
    lhs = fourier_coefficient(f.translate(x0), (f.a + x0, f.b + x0), omega)
    rhs = np.exp(-2j * np.pi * omega * x0) * fourier_coefficient(f, (f.a, f.b), omega)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))


@given(trig_pieces(integer_freqs=True, interval=(0.0, 1.0)))
def test_integer_lattice_fast_path(f):
    omegas = np.arange(-25, 26, dtype=float)
    c = fourier_coefficient(f, (0, 1), omegas)
    expected = np.zeros(len(omegas), dtype=complex)
    for coef, fr in zip(f.coeffs, f.freqs):
        expected[int(fr) + 25] += coef
    assert np.allclose(c, expected, atol=1e-12)


def test_quadrature_budget_exhaustion():
    wild = NumericPiece(0, 1, lambda x: np.sin(1 / (x + 1e-9)) + 0j, "piecewise-continuous")
    with pytest.raises(QuadratureFailure):
        fourier_coefficient(wild, (0, 1), 0.0, budget=2**10)


def test_product_of_trig_pieces_stays_closed_form():
    f = TrigPiece(0, 1, [1.0], [2.0])
    g = TrigPiece(0.5, 1.5, [1.0], [-1.0])
    (prod,) = product_pieces(as_atom(f), as_atom(g))
    assert isinstance(prod, TrigPiece)
    assert (prod.a, prod.b) == (0.5, 1.0)
    assert np.allclose(prod.freqs, [1.0])


def test_sample_uniform_matches_direct(rng):
    f = TrigPiece(0, 1, rng.standard_normal(6) + 0j, np.arange(6.0))
    x = np.arange(64) / 64
    assert np.allclose(f.sample_uniform(64), f(x), atol=1e-12)


# -- sampled signals and coefficient grids ---------------------------------


def test_grid_spanning():
    g = Grid.spanning(0, 1, 4)
    assert g.step == 0.25 and g.stop == 1.0
    assert np.allclose(g.points(), [0, 0.25, 0.5, 0.75])


def test_sampled_norm_of_constant():
    s = SampledSignal(0.0, 0.01, np.ones(101))
    assert s.l2_norm() == pytest.approx(1.0, rel=1e-12)


def test_coeffgrid_csv_round_trip(rng):
    g = CoeffGrid(-2, 3, rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5)))
    back = CoeffGrid.from_csv(g.to_csv())
    assert back.k_range == g.k_range and back.n_range == g.n_range
    assert np.array_equal(back.entries, g.entries)


# -- mixed norms ------------------------------------------------------------


def test_mixed_norm_index_order():
    # rows k (inner), columns n (outer)
    grid = CoeffGrid(0, 0, np.array([[3.0, 0.0], [4.0, 1.0]]))
    assert lpq_norm(grid, MixedNormParams(2, 1)) == pytest.approx(5 + 1)
    assert lpq_norm(grid, MixedNormParams(1, math.inf)) == pytest.approx(7)


def test_conjugate_exponents():
    assert MixedNormParams.conjugate(1) == math.inf
    assert MixedNormParams.conjugate(math.inf) == 1
    assert MixedNormParams.conjugate(4) == pytest.approx(4 / 3)


def test_mixed_norm_rejects_small_exponents():
    with pytest.raises(ValidationError):
        MixedNormParams(0.5, 2)


@given(
    st.lists(st.floats(-5, 5, **finite), min_size=6, max_size=6),
    st.floats(1, 4, **finite),
    st.floats(1, 4, **finite),
    st.floats(0, 3, **finite),
)
def test_mixed_norm_decreases_in_exponent(vals, p, q, bump):
    grid = CoeffGrid(0, 0, np.array(vals).reshape(2, 3))
    small = lpq_norm(grid, MixedNormParams(p, q))
    assert lpq_norm(grid, MixedNormParams(p + bump, q)) <= small * (1 + 1e-12) + 1e-300
    assert lpq_norm(grid, MixedNormParams(p, q + bump)) <= small * (1 + 1e-12) + 1e-300


@given(st.lists(st.floats(-5, 5, **finite), min_size=1, max_size=20))
def test_lp_norm_two_matches_numpy(vals):
    assert lp_norm(np.array(vals), 2) == pytest.approx(np.linalg.norm(vals), rel=1e-12, abs=1e-300)
