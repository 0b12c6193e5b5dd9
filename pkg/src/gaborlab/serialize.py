"""Versioned JSON format for atoms.

Exponential-sum pieces are stored as term arrays.  Numeric pieces are stored
by the name of the builder that reconstructs them plus its parameters; code
is never serialised.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import AtomFormatError
from .tfcore import NumericPiece, PiecewiseAtom, TrigPiece, affine_piece, as_atom, gaussian_piece

FORMAT = "gaborlab-atom"
VERSION = 1


def _piece_to_dict(piece) -> dict:
    if isinstance(piece, TrigPiece):
        return {
            "kind": "trig",
            "a": piece.a,
            "b": piece.b,
            "re": piece.coeffs.real.tolist(),
            "im": piece.coeffs.imag.tolist(),
            "freq": piece.freqs.tolist(),
        }
    if piece.spec is None:
        raise AtomFormatError(
            f"numeric piece on [{piece.a}, {piece.b}) has no named builder and cannot be saved"
        )
    return {"kind": "numeric", "a": piece.a, "b": piece.b, "smoothness": piece.smoothness, **piece.spec}


def atom_to_dict(atom) -> dict:
    atom = as_atom(atom)
    return {"format": FORMAT, "version": VERSION, "pieces": [_piece_to_dict(p) for p in atom.pieces]}


def _build_numeric(doc: dict) -> NumericPiece:
    name = doc.get("builder")
    params = doc.get("params", {})
    a, b = float(doc["a"]), float(doc["b"])
    if name == "affine":
        piece = affine_piece(a, b, float(params["slope"]), float(params["intercept"]))
    elif name == "gaussian":
        piece = gaussian_piece(float(params["sigma"]), float(params["radius"]))
    elif name in ("translate", "modulate", "scale", "conj", "restrict"):
        inner = _build_numeric(params["piece"])
        if name == "translate":
            piece = inner.translate(float(params["shift"]))
        elif name == "modulate":
            piece = inner.modulate(float(params["xi"]))
        elif name == "scale":
            re, im = params["factor"]
            piece = inner.scaled(complex(re, im))
        elif name == "conj":
            piece = inner.conj()
        else:
            piece = inner.restrict(a, b)
    elif name == "quotient":
        from .gabor import QuotientAtom

        q = QuotientAtom(atom_from_dict(params["numerator"]), float(params["alpha"]), float(params["beta"]))
        spec = {"builder": name, "params": params}
        piece = NumericPiece(a, b, q, doc.get("smoothness", "continuous"), spec, q._breaks(a, b))
    elif name == "parseval_complement":
        from .srlab import parseval_complement

        piece = parseval_complement(float(params["beta"]), atom_from_dict(params["h"]))
    else:
        raise AtomFormatError(f"unknown numeric builder {name!r}")
    if not (np.isclose(piece.a, a) and np.isclose(piece.b, b)):
        raise AtomFormatError(f"builder {name!r} produced [{piece.a}, {piece.b}), expected [{a}, {b})")
    return piece


def atom_from_dict(doc: dict) -> PiecewiseAtom:
    try:
        if doc.get("format") != FORMAT:
            raise AtomFormatError(f"not a {FORMAT} document")
        if doc.get("version") != VERSION:
            raise AtomFormatError(f"unsupported version {doc.get('version')!r}")
        pieces = []
        for p in doc["pieces"]:
            if p["kind"] == "trig":
                coeffs = np.asarray(p["re"], dtype=float) + 1j * np.asarray(p["im"], dtype=float)
                pieces.append(TrigPiece(float(p["a"]), float(p["b"]), coeffs, p["freq"]))
            elif p["kind"] == "numeric":
                pieces.append(_build_numeric(p))
            else:
                raise AtomFormatError(f"unknown piece kind {p['kind']!r}")
        return PiecewiseAtom(tuple(pieces))
    except AtomFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise AtomFormatError(f"malformed atom document: {exc}") from exc


def dumps(atom) -> str:
    return json.dumps(atom_to_dict(atom))


def loads(text: str) -> PiecewiseAtom:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AtomFormatError(f"atom file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise AtomFormatError("atom document must be a JSON object")
    return atom_from_dict(doc)


def save_atom(atom, path) -> None:
    Path(path).write_text(dumps(atom))


def load_atom(path) -> PiecewiseAtom:
    return loads(Path(path).read_text())
