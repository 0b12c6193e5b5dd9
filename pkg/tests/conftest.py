import numpy as np
import pytest
from hypothesis import settings, strategies as st

from gaborlab.tfcore import TrigPiece

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def trig_pieces(draw, max_terms=5, integer_freqs=False, interval=None):
    """Random exponential sums on a random (or fixed) interval."""
    if interval is None:
        a = draw(st.floats(-3, 3, **finite))
        length = draw(st.floats(0.1, 2.5, **finite))
        interval = (a, a + length)
    m = draw(st.integers(1, max_terms))
    re = draw(st.lists(st.floats(-2, 2, **finite), min_size=m, max_size=m))
    im = draw(st.lists(st.floats(-2, 2, **finite), min_size=m, max_size=m))
    if integer_freqs:
        freqs = draw(st.lists(st.integers(-20, 20), min_size=m, max_size=m))
    else:
        freqs = draw(st.lists(st.floats(-12, 12, **finite), min_size=m, max_size=m))
    return TrigPiece(interval[0], interval[1], np.array(re) + 1j * np.array(im), np.array(freqs, dtype=float))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.line())
