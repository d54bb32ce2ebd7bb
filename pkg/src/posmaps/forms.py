"""Named forms: the Qi-Hou biquadratic forms, their block pieces, and the
quaternary octics / senary quartic derived from ``B_{Phi^(4,1)}``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .biquadratic import BiquadraticForm, biquadratic_registry
from .maps import ParameterError, Permutation
from .poly import Polynomial, Registry, substitute

__all__ = [
    "qi_hou_form",
    "shifted_form",
    "block_term",
    "cross_square",
    "RenameReport",
    "rename_to_reduced",
    "mu_permutation",
    "permute_form",
    "SpecialForms",
    "special_forms",
    "OCTIC_REGISTRY",
    "QUARTIC_REGISTRY",
]

OCTIC_REGISTRY = Registry(["x", "y", "z", "w"])
QUARTIC_REGISTRY = Registry(["p", "q", "s", "t", "u", "v"])


def _check_nk(n: int, k: int) -> None:
    if n < 3:
        raise ParameterError(f"n must be at least 3, got {n}")
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must lie in [1, {n - 1}], got {k}")


def _form_from_pieces(n: int, diag_coef, indices, shifted_pairs) -> BiquadraticForm:
    """``c * sum x_i^2 y_i^2 - 2 sum_{i<j} x_i y_i x_j y_j + sum x_a^2 y_b^2``.

    ``indices`` restricts the first two sums, ``shifted_pairs`` lists the
    ``(a, b)`` of the last one.  Indices are 1-based.
    """
    terms: dict[tuple[int, ...], Fraction] = {}

    def add(exps, c):
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + Fraction(c)

    indices = sorted(indices)
    for i in indices:
        e = [0] * (2 * n)
        e[i - 1] = 2
        e[n + i - 1] = 2
        add(e, diag_coef)
    for pos, i in enumerate(indices):
        for j in indices[pos + 1:]:
            e = [0] * (2 * n)
            e[i - 1] = e[j - 1] = 1
            e[n + i - 1] = e[n + j - 1] = 1
            add(e, -2)
    for a, b in shifted_pairs:
        e = [0] * (2 * n)
        e[a - 1] += 2
        e[n + b - 1] += 2
        add(e, 1)
    return BiquadraticForm(Polynomial(biquadratic_registry(n), terms), n)


@lru_cache(maxsize=None)
def shifted_form(n: int, k: int, shift_on: str = "x") -> BiquadraticForm:
    """``(n-2) sum x_i^2 y_i^2 + sum x_s(i)^2 y_i^2 - 2 sum_{i<j} x_i y_i x_j y_j``.

    No range checks beyond ``n >= 2``; with ``shift_on="y"`` the shifted
    sum is ``sum x_i^2 y_s(i)^2`` instead.  ``n = 2`` gives the square
    ``(x1 y2 - x2 y1)^2``.
    """
    if n < 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    sigma = Permutation.shift(n, k)
    if shift_on == "x":
        pairs = [(sigma(i), i) for i in range(1, n + 1)]
    elif shift_on == "y":
        pairs = [(i, sigma(i)) for i in range(1, n + 1)]
    else:
        raise ValueError("shift_on must be 'x' or 'y'")
    return _form_from_pieces(n, n - 2, range(1, n + 1), pairs)


def qi_hou_form(n: int, k: int) -> BiquadraticForm:
    """Closed form of ``y^T Phi^(n,k)(x x^T) y``."""
    _check_nk(n, k)
    return shifted_form(n, k)


def _check_divisor(n: int, k: int) -> None:
    if k < 1 or n % k:
        raise ParameterError(f"k={k} does not divide n={n}")
    if n // k < 2:
        raise ParameterError(f"need n/k >= 2, got n={n}, k={k}")


def block_term(n: int, k: int, d: int) -> BiquadraticForm:
    """The piece of ``B_{Phi^(n,k)}`` living on the indices ``i = d (mod k)``."""
    _check_divisor(n, k)
    if not 1 <= d <= k:
        raise ParameterError(f"d must lie in [1, {k}], got {d}")
    sigma = Permutation.shift(n, k)
    cls = [i for i in range(1, n + 1) if (i - d) % k == 0]
    return _form_from_pieces(n, Fraction(n, k) - 2, cls, [(sigma(i), i) for i in cls])


def cross_square(n: int, i: int, j: int) -> BiquadraticForm:
    """``(x_i y_i - x_j y_j)^2``."""
    reg = biquadratic_registry(n)
    f = reg.var(f"x{i}") * reg.var(f"y{i}") - reg.var(f"x{j}") * reg.var(f"y{j}")
    return BiquadraticForm(f * f, n)


@dataclass(frozen=True)
class RenameReport:
    """Result of compressing a block term onto ``n/k`` indices.

    ``matches_x_shift``: equals the form with ``x_{s(i)}^2 y_i^2``;
    ``matches_y_shift``: equals the form with ``x_i^2 y_{s(i)}^2``.
    When ``n/k == 2`` the two candidates are the same polynomial and
    ``conventions_coincide`` is set.
    """

    n: int
    k: int
    d: int
    renamed: BiquadraticForm
    matches_x_shift: bool
    matches_y_shift: bool
    conventions_coincide: bool

    @property
    def matches_reduced(self) -> bool:
        return self.matches_x_shift

    @property
    def convention(self) -> str:
        if self.conventions_coincide:
            return "both (candidates coincide)" if self.matches_x_shift else "none"
        if self.matches_x_shift and not self.matches_y_shift:
            return "x-shift"
        if self.matches_y_shift and not self.matches_x_shift:
            return "y-shift"
        return "none"

    @property
    def distinct_matches(self) -> int:
        """Number of distinct candidate polynomials that match."""
        if self.conventions_coincide:
            return int(self.matches_x_shift)
        return int(self.matches_x_shift) + int(self.matches_y_shift)


def rename_to_reduced(n: int, k: int, d: int) -> RenameReport:
    """Rename ``x_{d+ik} -> x_{i+1}``, ``y_{d+ik} -> y_{i+1}`` in ``block_term(n, k, d)``."""
    term = block_term(n, k, d)
    r = n // k
    small = biquadratic_registry(r)
    mapping = {}
    for i in range(r):
        mapping[f"x{d + i * k}"] = small.var(f"x{i + 1}")
        mapping[f"y{d + i * k}"] = small.var(f"y{i + 1}")
    for name in term.registry.names:
        mapping.setdefault(name, small.const(0))
    renamed = BiquadraticForm(substitute(term.poly, mapping, small), r)
    via_x = shifted_form(r, 1, "x")
    via_y = shifted_form(r, 1, "y")
    return RenameReport(
        n, k, d, renamed,
        matches_x_shift=renamed == via_x,
        matches_y_shift=renamed == via_y,
        conventions_coincide=via_x == via_y,
    )


def mu_permutation(n: int, q: int) -> Permutation:
    """``mu(d + k j) = d + q j (mod n)`` with ``k = gcd(n, q)``, ``d = 1..k``.

    Intertwines the shifts: ``mu * sigma_k == sigma_q * mu``.
    """
    _check_nk(n, q)
    k = gcd(n, q)
    images = [0] * n
    for d in range(1, k + 1):
        for j in range(n // k):
            images[d + k * j - 1] = (d + q * j - 1) % n + 1
    mu = Permutation(tuple(images))
    if mu * Permutation.shift(n, k) != Permutation.shift(n, q) * mu:
        raise AssertionError(f"mu({n},{q}) does not intertwine the shifts")
    return mu


def permute_form(form: BiquadraticForm, mu: Permutation) -> BiquadraticForm:
    """Simultaneous renaming ``x_i -> x_mu(i)``, ``y_i -> y_mu(i)``."""
    return form.rename(mu)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialForms:
    octic: Polynomial        # O(x, y, z, w)
    octic_prime: Polynomial  # O'(x, y, z, w)
    quartic: Polynomial      # Q(p, q, s, t, u, v)


def octic_by_substitution() -> Polynomial:
    """``B_{Phi^(4,1)}`` at ``x = (yzw, zwx, wxy, xyz)``, ``y = (x, y, z, w)``."""
    x, y, z, w = OCTIC_REGISTRY.vars()
    b = qi_hou_form(4, 1).poly
    mapping = {
        "x1": y * z * w, "x2": z * w * x, "x3": w * x * y, "x4": x * y * z,
        "y1": x, "y2": y, "y3": z, "y4": w,
    }
    return substitute(b, mapping, OCTIC_REGISTRY)


def quartic_by_substitution(order: int = 0) -> Polynomial:
    """``B_{Phi^(4,1)}`` with columns ``(p,q), (s,t), (u,v), (v,u)``.

    ``order`` rotates the columns left, which matches applying the cyclic
    index shift to ``B_{Phi^(4,1)}``.
    """
    p, q, s, t, u, v = QUARTIC_REGISTRY.vars()
    cols = [(p, q), (s, t), (u, v), (v, u)]
    cols = cols[order:] + cols[:order]
    mapping = {}
    for i, (a, b) in enumerate(cols, start=1):
        mapping[f"x{i}"] = a
        mapping[f"y{i}"] = b
    return substitute(qi_hou_form(4, 1).poly, mapping, QUARTIC_REGISTRY)


@lru_cache(maxsize=None)
def special_forms() -> SpecialForms:
    """Construct ``O``, ``O'`` and ``Q``, cross-checking the derived ones."""
    x, y, z, w = OCTIC_REGISTRY.vars()
    octic = (x**4 * z**2 * w**2 + y**4 * x**2 * w**2 + z**4 * x**2 * y**2
             + w**4 * y**2 * z**2 - 4 * x**2 * y**2 * z**2 * w**2)
    octic_prime = (w**8 + x**4 * y**2 * z**2 + y**4 * x**2 * z**2
                   + z**4 * x**2 * y**2 - 4 * x**2 * y**2 * z**2 * w**2)
    p, q, s, t, u, v = QUARTIC_REGISTRY.vars()
    quartic = (v**4 + 2 * (p**2 * q**2 + s**2 * t**2 + u**2 * v**2)
               + q**2 * s**2 + t**2 * u**2 + p**2 * u**2
               - 2 * p * q * s * t - 4 * p * q * u * v - 4 * s * t * u * v)
    if octic != octic_by_substitution():
        raise AssertionError("octic O disagrees with its substitution definition")
    if quartic != quartic_by_substitution():
        raise AssertionError("quartic Q disagrees with its substitution definition")
    return SpecialForms(octic, octic_prime, quartic)
