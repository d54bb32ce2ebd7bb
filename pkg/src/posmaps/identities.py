"""Exact checks of the polynomial identities behind the Qi-Hou forms, and a
symbolic replay of the discriminant computation for ``Q_(4,1)``.

Every check computes ``lhs - rhs`` over the rationals; it holds exactly when
that residual is the zero polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .biquadratic import biquadratic_of_map
from .forms import (
    OCTIC_REGISTRY,
    QUARTIC_REGISTRY,
    block_term,
    cross_square,
    mu_permutation,
    permute_form,
    qi_hou_form,
    quartic_by_substitution,
    rename_to_reduced,
    shifted_form,
    special_forms,
)
from .maps import ParameterError, Permutation, qi_hou_map
from .poly import Polynomial, Registry, coefficient_of, exact_divide, quadratic_discriminant, substitute

__all__ = [
    "IdentityCheck",
    "IDENTITIES",
    "verify_identity",
    "ReplayReport",
    "proof_replay_q41",
    "REPLAY_REGISTRY",
    "DISPLAYED_NEG_DISCRIMINANT",
]


@dataclass(frozen=True)
class IdentityCheck:
    """Result of one exact identity check.

    ``residual`` is the first nonzero ``lhs - rhs`` met, or the zero
    polynomial when everything holds; ``parts`` names each sub-check.
    """

    name: str
    params: tuple
    holds: bool
    residual: Polynomial
    parts: dict[str, bool] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _collect(name: str, params: tuple, pairs: list[tuple[str, Polynomial, Polynomial]]) -> IdentityCheck:
    parts, residual = {}, None
    for label, lhs, rhs in pairs:
        diff = lhs - rhs
        parts[label] = diff.is_zero()
        if residual is None and not diff.is_zero():
            residual = diff
    if residual is None:
        residual = pairs[0][1].registry.zero()
    return IdentityCheck(name, params, all(parts.values()), residual, parts)


def _octic_substitution() -> IdentityCheck:
    x, y, z, w = OCTIC_REGISTRY.vars()
    forms = special_forms()
    lhs = substitute(forms.octic_prime, {"x": x * z**2, "y": x * y * w, "z": z * w**2, "w": x * z * w})
    rhs = x**4 * z**6 * w**6 * forms.octic
    check = _collect("eq6", (), [("substitution", lhs, rhs)])
    # the left side must also be divisible by the monomial factor
    quotient = exact_divide(lhs, x**4 * z**6 * w**6)
    check.parts["divisible"] = quotient is not None and quotient == forms.octic
    return IdentityCheck(check.name, (), check.holds and check.parts["divisible"], check.residual, check.parts)


def _quartic_substitution() -> IdentityCheck:
    x, y, z, w = OCTIC_REGISTRY.vars()
    forms = special_forms()
    mapping = {"p": z * w**3, "q": x * y * w**2, "s": y * z * w**2, "t": x * w**3, "u": x * y * z * w, "v": w**4}
    lhs = substitute(forms.quartic, mapping, OCTIC_REGISTRY)
    return _collect("eq7", (), [("substitution", lhs, w**8 * forms.octic_prime)])


def _divisor_identity(n: int, k: int) -> IdentityCheck:
    if k < 1 or n % k or n // k < 2:
        raise ParameterError(f"need k | n and n/k >= 2, got n={n}, k={k}")
    total = sum((block_term(n, k, d).poly for d in range(1, k + 1)), qi_hou_form(n, k).registry.zero())
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i - j) % k:
                total = total + cross_square(n, i, j).poly
    return _collect("eq10", (n, k), [("decomposition", qi_hou_form(n, k).poly, total)])


def _renaming_identity(n: int, k: int, d: int) -> IdentityCheck:
    report = rename_to_reduced(n, k, d)
    target = shifted_form(n // k, 1, "x")
    check = _collect("eq11", (n, k, d), [("renamed block term", report.renamed.poly, target.poly)])
    check.parts["y-shift also matches"] = report.matches_y_shift
    check.parts["conventions coincide"] = report.conventions_coincide
    return check


def _mu_identity(n: int, q: int) -> IdentityCheck:
    mu = mu_permutation(n, q)
    k = gcd(n, q)
    lhs = permute_form(qi_hou_form(n, k), mu)
    check = _collect("mu", (n, q), [("permuted form", lhs.poly, qi_hou_form(n, q).poly)])
    check.parts["intertwines shifts"] = all(
        mu(Permutation.shift(n, k)(i)) == Permutation.shift(n, q)(mu(i)) for i in range(1, n + 1))
    holds = check.holds and check.parts["intertwines shifts"]
    return IdentityCheck("mu", (n, q), holds, check.residual, check.parts)


def _cyclic_identity() -> IdentityCheck:
    b = qi_hou_form(4, 1)
    shifted = b.rename(Permutation.shift(4, 1))
    pairs = [("shift invariance", shifted.poly, b.poly)]
    q = special_forms().quartic
    for order in range(4):
        pairs.append((f"columns rotated by {order}", quartic_by_substitution(order), q))
    return _collect("cyclic", (), pairs)


def _lemma1_expansion() -> IdentityCheck:
    x, y, z, w = OCTIC_REGISTRY.vars()
    octic = special_forms().octic
    lhs = substitute(octic, {"x": y**2, "y": y, "z": z, "w": w})
    rhs = (1 + z**2) * w**2 * y**8 + (z**2 - 4 * w**2) * z**2 * y**6 + y**2 * z**2 * w**4
    return _collect("lemma1_expansion", (), [("expansion", lhs, rhs)])


def _q_special() -> IdentityCheck:
    p, q, s, t, u, v = QUARTIC_REGISTRY.vars()
    quartic = special_forms().quartic
    target = 2 * (s**2 - t**2) ** 2
    first = substitute(quartic, {"p": s, "q": t, "s": t, "t": s, "u": s, "v": t})
    second = substitute(quartic, {"p": t, "q": s, "s": s, "t": t, "u": t, "v": s})
    return _collect("q_special", (), [("Q(s,t,t,s,s,t)", first, target), ("Q(t,s,s,t,t,s)", second, target)])


def _octic_zero() -> IdentityCheck:
    octic = special_forms().octic
    value = octic.evaluate({"x": 1, "y": 1, "z": 1, "w": 1})
    return _collect("octic_zero", (), [("O(1,1,1,1)", OCTIC_REGISTRY.const(value), OCTIC_REGISTRY.zero())])


def _map_form_identity(n: int, k: int) -> IdentityCheck:
    return _collect("eq2", (n, k), [("form of map", biquadratic_of_map(qi_hou_map(n, k)).poly,
                                     qi_hou_form(n, k).poly)])


IDENTITIES = {
    "eq2": (_map_form_identity, 2),
    "eq6": (_octic_substitution, 0),
    "eq7": (_quartic_substitution, 0),
    "eq10": (_divisor_identity, 2),
    "eq11": (_renaming_identity, 3),
    "mu": (_mu_identity, 2),
    "cyclic": (_cyclic_identity, 0),
    "lemma1_expansion": (_lemma1_expansion, 0),
    "q_special": (_q_special, 0),
    "octic_zero": (_octic_zero, 0),
}


def verify_identity(which: str, *params: int) -> IdentityCheck:
    """Check one named identity exactly.

    ``eq2`` and ``eq10`` take ``(n, k)``, ``eq11`` takes ``(n, k, d)``,
    ``mu`` takes ``(n, q)``; the others take no parameters.
    """
    if which not in IDENTITIES:
        raise ParameterError(f"unknown identity {which!r}; choose from {sorted(IDENTITIES)}")
    fn, arity = IDENTITIES[which]
    if len(params) != arity:
        raise ParameterError(f"{which} expects {arity} integer parameters, got {len(params)}")
    return fn(*(int(p) for p in params))


# -- discriminant replay -------------------------------------------------------

REPLAY_REGISTRY = Registry(["p", "q", "s", "t", "u", "v", "a4", "a7", "alpha"])

# -D(F, p) as displayed for t = v^2, u = 1, written with the symbol a7.
DISPLAYED_NEG_DISCRIMINANT = (
    "4*alpha^2*q^2*s^2 + 8*alpha^2*q^4*s^2 + 8*alpha^2*v^4*s^2 - a7^2*q^2*v^4*s^2"
    " + 4*a7*alpha*q^2*v^4*s^2 + 12*alpha^2*q^2*v^4*s^2"
    " - 4*a7*alpha*v^3*s - 16*alpha^2*v^3*s + 2*a7^2*q^2*v^3*s - 4*a7*alpha*q^2*v^3*s"
    " - 48*alpha^2*q^2*v^3*s"
    " + 4*a7*alpha*v^2 + 8*alpha^2*v^2 - a7^2*q^2*v^2 + 8*alpha^2*v^4 + 16*alpha^2*q^2*v^4"
)


@dataclass(frozen=True)
class ReplayReport:
    """Symbolic steps of the discriminant argument for ``F = a4 G + alpha Q``.

    ``G = (st - uv)(pq - uv)``; everything is specialised to ``t = v^2``,
    ``u = 1`` before taking discriminants.
    """

    f: Polynomial
    neg_discriminant: Polynomial
    second_discriminant: Polynomial
    q6_coefficient: Polynomial
    displayed_neg_discriminant: Polynomial
    displayed_q6: Polynomial
    neg_discriminant_matches_literal: bool
    neg_discriminant_matches_swapped: bool
    q6_matches_literal: bool
    q6_matches_swapped: bool
    alpha_only_part: Polynomial
    alpha_only_matches_display: bool

    @property
    def matching_identification(self) -> str:
        if self.q6_matches_literal and self.q6_matches_swapped:
            return "both"
        if self.q6_matches_literal:
            return "literal"
        if self.q6_matches_swapped:
            return "a4 <-> a7"
        return "neither"

    def to_dict(self) -> dict:
        return {
            "f": str(self.f),
            "neg_discriminant": str(self.neg_discriminant),
            "second_discriminant": str(self.second_discriminant),
            "q6_coefficient": str(self.q6_coefficient),
            "displayed_neg_discriminant": str(self.displayed_neg_discriminant),
            "displayed_q6": str(self.displayed_q6),
            "neg_discriminant_matches_literal": self.neg_discriminant_matches_literal,
            "neg_discriminant_matches_swapped": self.neg_discriminant_matches_swapped,
            "q6_matches_literal": self.q6_matches_literal,
            "q6_matches_swapped": self.q6_matches_swapped,
            "matching_identification": self.matching_identification,
            "alpha_only_part": str(self.alpha_only_part),
            "alpha_only_matches_display": self.alpha_only_matches_display,
        }


def _swap(poly: Polynomial, a: str, b: str) -> Polynomial:
    reg = poly.registry
    mapping = {name: reg.var(name) for name in reg.names}
    mapping[a], mapping[b] = reg.var(b), reg.var(a)
    return substitute(poly, mapping, reg)


def proof_replay_q41() -> ReplayReport:
    """Recompute ``-D(F, p)``, ``D(-D(F, p), s)`` and its ``q^6`` coefficient.

    The displayed expressions use the symbol ``a7`` while ``F`` only
    contains ``a4``; the report compares both with the computation taken
    literally and with ``a4`` and ``a7`` exchanged.
    """
    reg = REPLAY_REGISTRY
    p, q, s, t, u, v, a4, a7, alpha = reg.vars()
    quartic = substitute(special_forms().quartic, {name: reg.var(name) for name in QUARTIC_REGISTRY.names}, reg)
    f = a4 * (s * t - u * v) * (p * q - u * v) + alpha * quartic
    keep = {name: reg.var(name) for name in reg.names}
    specialised = substitute(f, {**keep, "t": v**2, "u": reg.const(1)}, reg)
    neg_disc = -quadratic_discriminant(specialised, "p")
    second = quadratic_discriminant(neg_disc, "s")
    q6 = coefficient_of(second, "q", 6)

    displayed = reg.parse(DISPLAYED_NEG_DISCRIMINANT)
    displayed_q6 = 32 * alpha**2 * v**2 * (a7**2 - 16 * alpha**2 * v**2)
    zero_a = {**keep, "a4": reg.const(0), "a7": reg.const(0)}
    alpha_only = substitute(neg_disc, zero_a, reg)
    return ReplayReport(
        f=f,
        neg_discriminant=neg_disc,
        second_discriminant=second,
        q6_coefficient=q6,
        displayed_neg_discriminant=displayed,
        displayed_q6=displayed_q6,
        neg_discriminant_matches_literal=neg_disc == displayed,
        neg_discriminant_matches_swapped=_swap(neg_disc, "a4", "a7") == displayed,
        q6_matches_literal=q6 == displayed_q6,
        q6_matches_swapped=_swap(q6, "a4", "a7") == displayed_q6,
        alpha_only_part=alpha_only,
        alpha_only_matches_display=alpha_only == substitute(displayed, zero_a, reg),
    )
