"""Painless Gabor frames, modulation-space norms and Shapiro-Rudin atoms."""

from . import errors, gabor, modnorm, probes, serialize, srlab, tfcore
from .gabor import GaborSystem, canonical_dual, painless_check, reconstruct
from .tfcore import PiecewiseAtom, SampledSignal, TrigPiece, box

__version__ = "0.1.0"

__all__ = [
    "errors",
    "gabor",
    "modnorm",
    "probes",
    "serialize",
    "srlab",
    "tfcore",
    "GaborSystem",
    "PiecewiseAtom",
    "SampledSignal",
    "TrigPiece",
    "box",
    "canonical_dual",
    "painless_check",
    "reconstruct",
]
