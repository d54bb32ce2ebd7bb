"""JSON encodings for exact objects.

Rationals are strings ``"num/den"`` (or ``"num"``), so nothing is lost in a
round trip; matrices are nested lists of such strings.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .biquadratic import BiquadraticForm
from .maps import BlockMatrix, LinearMap, Permutation, rational_matrix
from .poly import Polynomial, Registry

__all__ = [
    "SCHEMA_VERSION",
    "rational_to_json",
    "rational_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "block_matrix_to_json",
    "block_matrix_from_json",
    "linear_map_to_json",
    "linear_map_from_json",
    "polynomial_to_json",
    "polynomial_from_json",
    "form_to_json",
    "form_from_json",
    "permutation_to_json",
    "permutation_from_json",
]

SCHEMA_VERSION = 1


def rational_to_json(c) -> str:
    return str(Fraction(c))


def rational_from_json(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"expected a rational string, got {text!r}")
    return Fraction(text)


def matrix_to_json(m) -> list[list[str]]:
    return [[rational_to_json(c) for c in row] for row in np.asarray(m, dtype=object)]


def matrix_from_json(rows) -> np.ndarray:
    return rational_matrix([[rational_from_json(c) for c in row] for row in rows])


def block_matrix_to_json(b: BlockMatrix) -> dict:
    return {"block_dim": b.block_dim, "entries": matrix_to_json(b.matrix)}


def block_matrix_from_json(data: dict) -> BlockMatrix:
    return BlockMatrix(matrix_from_json(data["entries"]), int(data["block_dim"]))


def linear_map_to_json(m: LinearMap) -> dict:
    """``blocks[i][j]`` is the matrix ``Phi(E_{i+1, j+1})``."""
    n = m.n
    return {"n": n, "blocks": [[matrix_to_json(m.blocks[i, j]) for j in range(n)] for i in range(n)]}


def linear_map_from_json(data: dict) -> LinearMap:
    n = int(data["n"])
    blocks = np.empty((n, n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            blocks[i, j] = matrix_from_json(data["blocks"][i][j])
    return LinearMap(n, blocks)


def polynomial_to_json(p: Polynomial) -> dict:
    return {"variables": list(p.registry.names), "text": str(p)}


def polynomial_from_json(data: dict) -> Polynomial:
    return Registry(data["variables"]).parse(data["text"])


def form_to_json(f: BiquadraticForm) -> dict:
    return {"n": f.n, "text": str(f.poly)}


def form_from_json(data: dict) -> BiquadraticForm:
    return BiquadraticForm.parse(data["text"], int(data["n"]))


def permutation_to_json(p: Permutation) -> list[int]:
    return list(p.images)


def permutation_from_json(images) -> Permutation:
    return Permutation(tuple(int(i) for i in images))
