"""Affine crystals, combinatorial R and soliton cellular automata."""

import json as _json

from ._core import (
    Automaton,
    BackendUnavailable,
    CapExceeded,
    Crystal,
    DomainError,
    Error,
    GraphError,
    OracleError,
    ParseError,
    RMatrix,
)
from . import _core


def verify_theorem(rmatrix, trials=200, seed=0, shape=()):
    """Factorized R against the oracle; returns the report as a dict."""
    return _json.loads(_core.verify_theorem(rmatrix, trials, seed, list(shape)))


def verify_tmap(crystal, l):
    return _json.loads(_core.verify_tmap(crystal, l))


def verify_corollary(automaton, trials=100, seed=0):
    return _json.loads(_core.verify_corollary(automaton, trials, seed))


__all__ = [
    "Automaton",
    "BackendUnavailable",
    "CapExceeded",
    "Crystal",
    "DomainError",
    "Error",
    "GraphError",
    "OracleError",
    "ParseError",
    "RMatrix",
    "verify_corollary",
    "verify_theorem",
    "verify_tmap",
]
