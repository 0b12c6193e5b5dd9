import json
import math

import numpy as np
import pytest
from hypothesis import given

from conftest import trig_pieces
from gaborlab import gabor, serialize, srlab
from gaborlab.errors import AtomFormatError
from gaborlab.tfcore import NumericPiece, PiecewiseAtom, box, gaussian_piece


def same_values(a, b, lo=-1, hi=3):
    x = np.linspace(lo, hi, 1001)
    return np.allclose(a(x), b(x), atol=1e-14)


@given(trig_pieces())
def test_trig_round_trip(piece):
    back = serialize.loads(serialize.dumps(piece))
    (p,) = back.pieces
    assert np.array_equal(p.coeffs, piece.coeffs) and np.array_equal(p.freqs, piece.freqs)


@pytest.mark.parametrize(
    "make",
    [
        gabor.triangle,
        lambda: gabor.triangle().translate(0.5).modulate(1.25).scaled(2j).conj(),
        lambda: gaussian_piece(0.5),
        lambda: gabor.canonical_dual(gabor.GaborSystem(gabor.triangle(), 1, 0.5)).as_atom(),
    ],
)
def test_numeric_round_trip(make, tmp_path):
    atom = make()
    path = tmp_path / "atom.json"
    serialize.save_atom(atom, path)
    assert same_values(serialize.load_atom(path), atom)


def test_parseval_round_trip():
    h = srlab.counterexample_atom(2.0, 2, 6).scaled(math.sqrt(0.5) / 3)
    g = srlab.parseval_atom(0.5, h, delta=0.05)
    assert same_values(serialize.loads(serialize.dumps(g)), g, 0, 2)


def test_unnamed_numeric_piece_cannot_be_saved():
    atom = PiecewiseAtom.of(NumericPiece(0, 1, lambda x: x + 0j))
    with pytest.raises(AtomFormatError):
        serialize.dumps(atom)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        json.dumps({"format": "other", "version": 1, "pieces": []}),
        json.dumps({"format": "gaborlab-atom", "version": 99, "pieces": []}),
        json.dumps({"format": "gaborlab-atom", "version": 1, "pieces": [{"kind": "trig"}]}),
        json.dumps({"format": "gaborlab-atom", "version": 1, "pieces": [{"kind": "numeric", "a": 0, "b": 1, "builder": "eval"}]}),
        json.dumps({"format": "gaborlab-atom", "version": 1, "pieces": [{"kind": "blob"}]}),
    ],
)
def test_corrupt_documents(text):
    with pytest.raises(AtomFormatError):
        serialize.loads(text)


def test_box_document_shape():
    doc = serialize.atom_to_dict(box())
    assert doc["format"] == "gaborlab-atom" and doc["version"] == 1
    assert doc["pieces"][0]["kind"] == "trig"
