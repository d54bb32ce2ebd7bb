"""Biquadratic forms and their correspondence with linear maps.

A map ``Phi`` on ``M_n`` gives the form ``B(x; y) = y^T Phi(x x^T) y``.  The
reverse direction reads the form as ``y^T S_x y`` and extends ``x x^T -> S_x``
by linearity.  The extension is not unique; :func:`map_from_biquadratic`
fixes it by splitting each mixed coefficient ``x_i x_j y_a y_b`` (``i < j``,
``a < b``) evenly between ``Phi(E_ij)[a, b]`` and ``Phi(E_ji)[b, a]``.  Maps
whose blocks vanish on the crossed positions ``(i < j, a > b)`` are exactly
the images of that rule; every map built in this package is of that kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .maps import LinearMap, Permutation, _frac_array
from .poly import Polynomial, Registry

__all__ = [
    "BiquadraticForm",
    "biquadratic_registry",
    "biquadratic_of_map",
    "map_from_biquadratic",
    "is_canonical_map",
]


@lru_cache(maxsize=None)
def biquadratic_registry(n: int) -> Registry:
    """Registry ``x1..xn, y1..yn``."""
    return Registry([f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)])


@dataclass(frozen=True)
class BiquadraticForm:
    """A polynomial of bidegree (2, 2) in ``x1..xn`` and ``y1..yn``."""

    poly: Polynomial
    n: int

    def __post_init__(self):
        if self.poly.registry != biquadratic_registry(self.n):
            raise ValueError(f"polynomial must live in the x1..x{self.n}, y1..y{self.n} registry")
        n = self.n
        for exps in self.poly.terms:
            if sum(exps[:n]) != 2 or sum(exps[n:]) != 2:
                raise ValueError(f"monomial {exps} does not have bidegree (2, 2)")

    @classmethod
    def parse(cls, text: str, n: int) -> "BiquadraticForm":
        return cls(biquadratic_registry(n).parse(text), n)

    @property
    def registry(self) -> Registry:
        return self.poly.registry

    def x(self, i: int) -> Polynomial:
        return self.registry.var(f"x{i}")

    def y(self, i: int) -> Polynomial:
        return self.registry.var(f"y{i}")

    def __add__(self, other: "BiquadraticForm") -> "BiquadraticForm":
        return BiquadraticForm(self.poly + other.poly, self.n)

    def __sub__(self, other: "BiquadraticForm") -> "BiquadraticForm":
        return BiquadraticForm(self.poly - other.poly, self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiquadraticForm):
            return NotImplemented
        return self.n == other.n and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.n, self.poly))

    def __str__(self) -> str:
        return str(self.poly)

    def rename(self, perm: Permutation) -> "BiquadraticForm":
        """Simultaneous renaming ``x_i -> x_perm(i)``, ``y_i -> y_perm(i)``."""
        if perm.n != self.n:
            raise ValueError(f"permutation on {perm.n} points applied to a form of dimension {self.n}")
        n = self.n
        terms = {}
        for exps, c in self.poly.terms.items():
            new = [0] * (2 * n)
            for i in range(n):
                new[perm(i + 1) - 1] += exps[i]
                new[n + perm(i + 1) - 1] += exps[n + i]
            terms[tuple(new)] = c
        return BiquadraticForm(Polynomial(self.registry, terms), n)


def _pairs(exps: tuple[int, ...], n: int) -> tuple[tuple[int, int], tuple[int, int]]:
    def unpack(part):
        idx = []
        for i, e in enumerate(part):
            idx.extend([i] * e)
        return tuple(idx)

    return unpack(exps[:n]), unpack(exps[n:])


def biquadratic_of_map(m: LinearMap) -> BiquadraticForm:
    """Symbolic expansion of ``y^T Phi(x x^T) y``."""
    n = m.n
    reg = biquadratic_registry(n)
    terms: dict[tuple[int, ...], Fraction] = {}
    it = np.nditer(m.blocks, flags=["multi_index", "refs_ok"])
    for cell in it:
        c = cell.item()
        if not c:
            continue
        i, j, a, b = it.multi_index
        exps = [0] * (2 * n)
        exps[i] += 1
        exps[j] += 1
        exps[n + a] += 1
        exps[n + b] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return BiquadraticForm(Polynomial(reg, terms), n)


def map_from_biquadratic(form: BiquadraticForm) -> LinearMap:
    """The hermiticity-preserving map whose form is ``form`` (see module notes)."""
    if not isinstance(form, BiquadraticForm):
        raise TypeError("expected a BiquadraticForm")
    n = form.n
    blocks = _frac_array((n, n, n, n))
    for exps, c in form.poly.terms.items():
        (i, j), (a, b) = _pairs(exps, n)
        if i == j and a == b:
            blocks[i, i, a, a] += c
        elif i == j:
            blocks[i, i, a, b] += c / 2
            blocks[i, i, b, a] += c / 2
        elif a == b:
            blocks[i, j, a, a] += c / 2
            blocks[j, i, a, a] += c / 2
        else:
            blocks[i, j, a, b] += c / 2
            blocks[j, i, b, a] += c / 2
    return LinearMap(n, blocks)


def is_canonical_map(m: LinearMap) -> bool:
    """True when ``map_from_biquadratic`` reproduces ``m`` from its form.

    Equivalently: for ``i != j`` and ``a != b`` the block entries
    ``Phi(E_ij)[a, b]`` vanish whenever ``(i - j)(a - b) < 0``, and the
    diagonal blocks and the diagonals of the off-diagonal blocks are
    symmetric under the relevant index swaps.
    """
    return map_from_biquadratic(biquadratic_of_map(m)) == m
