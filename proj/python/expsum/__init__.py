"""Exponential sums over finite fields.

Thin wrappers over the C++ library: single sums, complete grids over the
linear form h, stratification checks for the built-in catalog, and
Frobenius weight recovery from extension-field sums.
"""

import json

from ._core import (
    CapExceeded,
    ChainError,
    DomainError,
    ExpsumError,
    ParseError,
    RankError,
    catalog_names,
    complete_grid,
    eval_sum,
    family_identity,
    gauss_sum,
    run_cli,
)
from . import _core


def verify_catalog(name, p, **params):
    """StratReport dicts (one per grid) for a catalog entry at the prime p."""
    return json.loads(_core.verify_catalog_json(name, json.dumps(params), p))


def weights(p, N, n=1, variety=(), f="", weight="none", a=1):
    """Weight profile of the sums over F_{p^k}, k = 1..N."""
    return json.loads(_core.weights_json(p, N, n, list(variety), f, weight, a))


__all__ = [
    "CapExceeded",
    "ChainError",
    "DomainError",
    "ExpsumError",
    "ParseError",
    "RankError",
    "catalog_names",
    "complete_grid",
    "eval_sum",
    "family_identity",
    "gauss_sum",
    "run_cli",
    "verify_catalog",
    "weights",
]
