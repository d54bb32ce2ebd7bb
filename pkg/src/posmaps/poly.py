"""Exact sparse multivariate polynomials over the rationals.

Every polynomial carries a :class:`Registry` of variable names.  Monomials are
stored as dense exponent tuples indexed by registry position, coefficients as
:class:`fractions.Fraction`.  Terms are ordered graded-lexicographically
(total degree first, then lexicographic on the exponent tuple), which fixes
both the printed form and the leading term used by :func:`exact_divide`.

Polynomials are immutable; every operation returns a new value.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "Registry",
    "Polynomial",
    "RegistryMismatch",
    "PolynomialParseError",
    "substitute",
    "evaluate",
    "coefficient_of",
    "sign_symmetrize",
    "sign_average",
    "quadratic_discriminant",
    "exact_divide",
    "is_scalar_multiple",
]

Scalar = Union[int, Fraction]


class RegistryMismatch(ValueError):
    """Raised when polynomials over different registries are combined."""


class PolynomialParseError(ValueError):
    pass


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class Registry:
    """An ordered, immutable collection of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})

    def __setattr__(self, key, value):
        raise AttributeError("Registry is immutable")

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, Registry) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Registry({list(self.names)!r})"

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < len(self.names):
                raise IndexError(f"variable index {name} out of range")
            return name
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None

    def var(self, name: str) -> "Polynomial":
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return Polynomial(self, {tuple(exps): Fraction(1)})

    def vars(self, *names: str) -> tuple["Polynomial", ...]:
        if not names:
            names = self.names
        return tuple(self.var(name) for name in names)

    def const(self, c: Scalar) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self.names): Fraction(c)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def parse(self, text: str) -> "Polynomial":
        return _parse(text, self)


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Polynomial:
    """Sparse polynomial with exact rational coefficients.

    Construct through a registry (``reg.var("x")``, ``reg.parse("x^2 - 1")``)
    or directly from a ``{exponent_tuple: coefficient}`` mapping.
    """

    __slots__ = ("registry", "_terms", "_hash")

    def __init__(self, registry: Registry, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        nvars = len(registry)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for {registry!r}")
            c = Fraction(c)
            if c:
                clean[exps] = c
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, registry: Registry, terms: dict) -> "Polynomial":
        # caller guarantees canonical terms (no zeros, correct tuple length)
        obj = object.__new__(cls)
        object.__setattr__(obj, "registry", registry)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        """A copy of the term map, in graded-lex descending order."""
        return {e: self._terms[e] for e in self.monomials()}

    def monomials(self) -> list[tuple[int, ...]]:
        return sorted(self._terms, key=_grlex_key, reverse=True)

    def coefficient(self, exps: tuple[int, ...]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, v: str | int) -> int:
        i = self.registry.index(v)
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def variables(self) -> list[str]:
        """Names of the variables that actually occur, in registry order."""
        used = [False] * len(self.registry)
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return [name for name, u in zip(self.registry.names, used) if u]

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self._terms, key=_grlex_key)
        return exps, self._terms[exps]

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.registry), Fraction(0))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.registry != self.registry:
                raise RegistryMismatch(f"{self.registry!r} vs {other.registry!r}")
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return self.registry.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.registry, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.registry, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial._raw(self.registry, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return self.registry.zero()
        return Polynomial._raw(self.registry, {e: c * v for e, v in self._terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            return NotImplemented
        return self.scale(1 / Fraction(c))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self.registry.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.registry == other.registry and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == self.registry.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.registry, frozenset(self._terms.items()))))
        return self._hash

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    # convenience wrappers
    def substitute(self, mapping, target: Registry | None = None) -> "Polynomial":
        return substitute(self, mapping, target)

    def evaluate(self, point) -> Fraction:
        return evaluate(self, point)


# ---------------------------------------------------------------------------
# symbolic operators


def _image(value, target: Registry) -> Polynomial:
    if isinstance(value, Polynomial):
        if value.registry != target:
            raise RegistryMismatch("substitution images must share one registry")
        return value
    return target.const(value)


def substitute(p: Polynomial, mapping: Mapping[str, Polynomial | Scalar], target: Registry | None = None) -> Polynomial:
    """Simultaneously replace variables of ``p`` by polynomials.

    Every variable occurring in ``p`` needs an image.  Images live in
    ``target``; when it is omitted it is taken from the first polynomial
    image, falling back to ``p.registry``.
    """
    if target is None:
        target = next((v.registry for v in mapping.values() if isinstance(v, Polynomial)), p.registry)
    images: list[Polynomial | None] = [None] * len(p.registry)
    for name, value in mapping.items():
        images[p.registry.index(name)] = _image(value, target)
    for name in p.variables():
        if images[p.registry.index(name)] is None:
            raise KeyError(f"no image given for variable {name!r}")

    power_cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
        return power_cache[key]

    acc: dict[tuple[int, ...], Fraction] = {}
    for exps, c in p._terms.items():
        term = target.const(c)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        for e2, c2 in term._terms.items():
            acc[e2] = acc.get(e2, 0) + c2
    return Polynomial._raw(target, {e: c for e, c in acc.items() if c})


def evaluate(p: Polynomial, point: Mapping[str, Scalar]) -> Fraction:
    """Exact value of ``p`` at a rational point given as ``{name: value}``."""
    values: list[Fraction | None] = [None] * len(p.registry)
    for name, value in point.items():
        values[p.registry.index(name)] = Fraction(value)
    for name in p.variables():
        if values[p.registry.index(name)] is None:
            raise KeyError(f"variable {name!r} is unassigned")
    total = Fraction(0)
    for exps, c in p._terms.items():
        term = c
        for i, e in enumerate(exps):
            if e:
                term *= values[i] ** e
        total += term
    return total


def coefficient_of(p: Polynomial, v: str, d: int) -> Polynomial:
    """The polynomial multiplying ``v**d`` in ``p`` (free of ``v``)."""
    i = p.registry.index(v)
    terms = {}
    for exps, c in p._terms.items():
        if exps[i] == d:
            terms[exps[:i] + (0,) + exps[i + 1:]] = c
    return Polynomial._raw(p.registry, terms)


def sign_symmetrize(p: Polynomial, variables: Iterable[str]) -> Polynomial:
    """Average of ``p`` over all sign flips of ``variables``.

    Odd powers cancel in the average, so the result keeps exactly the
    monomials of ``p`` that are even in every listed variable.
    """
    idx = [p.registry.index(v) for v in variables]
    terms = {e: c for e, c in p._terms.items() if all(e[i] % 2 == 0 for i in idx)}
    return Polynomial._raw(p.registry, terms)


def sign_average(p: Polynomial, variables: Iterable[str]) -> Polynomial:
    """Literal ``2**-m`` sum of ``p`` over all ``2**m`` sign patterns.

    Slow reference for :func:`sign_symmetrize`, built on :func:`substitute`.
    """
    variables = list(variables)
    reg = p.registry
    total = reg.zero()
    for signs in product((1, -1), repeat=len(variables)):
        mapping = {name: reg.var(name) for name in reg.names}
        for name, s in zip(variables, signs):
            mapping[name] = reg.var(name).scale(s)
        total = total + substitute(p, mapping, reg)
    return total.scale(Fraction(1, 2 ** len(variables)))


def quadratic_discriminant(p: Polynomial, v: str) -> Polynomial:
    """``B**2 - 4*A*C`` for ``p = A*v**2 + B*v + C``."""
    deg = p.degree_in(v)
    if deg != 2:
        raise ValueError(f"polynomial has degree {deg} in {v!r}, expected 2")
    a, b, c = (coefficient_of(p, v, d) for d in (2, 1, 0))
    return b * b - a * c * 4


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial | None:
    """Return ``r`` with ``p == q * r``, or ``None`` if ``q`` does not divide ``p``.

    Leading-term reduction in graded-lex order.  For a single divisor the
    remainder vanishes exactly when the division is exact, so a leading term
    of the running remainder that the leading term of ``q`` fails to divide
    settles the question.
    """
    if q.registry != p.registry:
        raise RegistryMismatch(f"{p.registry!r} vs {q.registry!r}")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    reg = p.registry
    lq_exps, lq_coef = q.leading_term()
    rem = p
    quotient: dict[tuple[int, ...], Fraction] = {}
    while rem:
        lr_exps, lr_coef = rem.leading_term()
        diff = tuple(a - b for a, b in zip(lr_exps, lq_exps))
        if any(d < 0 for d in diff):
            return None
        c = lr_coef / lq_coef
        quotient[diff] = quotient.get(diff, 0) + c
        rem = rem - Polynomial._raw(reg, {diff: c}) * q
    return Polynomial(reg, quotient)


def is_scalar_multiple(f: Polynomial, g: Polynomial) -> bool:
    """True when ``f == c * g`` for some rational ``c`` (``g`` nonzero)."""
    if g.is_zero():
        return f.is_zero()
    if f.is_zero():
        return True
    if set(f._terms) != set(g._terms):
        return False
    e, cg = g.leading_term()
    return f == g.scale(f._terms[e] / cg)


# ---------------------------------------------------------------------------
# text format:  2*x1^2*y1^2 - 2*x1*y1*x2*y2 + 1/3


def _format_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    names = p.registry.names
    pieces = []
    for exps in p.monomials():
        c = p._terms[exps]
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coef(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coef(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = [("-" if sign == "-" else "") + body]
    for sign, body in pieces[1:]:
        out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            if op not in "+-*/^":
                raise PolynomialParseError(f"unexpected character {op!r} at {m.start(3)}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


def _parse(text: str, reg: Registry) -> Polynomial:
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialParseError("empty polynomial text")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise PolynomialParseError(f"expected {value or kind}, got {tok[1]!r}")
        pos += 1
        return tok[1]

    nvars = len(reg)
    acc: dict[tuple[int, ...], Fraction] = {}

    def term(sign: int):
        coef = Fraction(sign)
        exps = [0] * nvars
        while True:
            kind, value = peek()
            if kind == "num":
                take("num")
                if peek() == ("op", "/"):
                    take("op", "/")
                    den = take("num")
                    if den == 0:
                        raise PolynomialParseError("zero denominator")
                    coef *= Fraction(value, den)
                else:
                    coef *= value
            elif kind == "name":
                take("name")
                if value not in reg:
                    raise PolynomialParseError(f"unknown variable {value!r}")
                e = 1
                if peek() == ("op", "^"):
                    take("op", "^")
                    e = take("num")
                exps[reg.index(value)] += e
            else:
                raise PolynomialParseError(f"expected a factor, got {value!r}")
            if peek() == ("op", "*"):
                take("op", "*")
                continue
            break
        key = tuple(exps)
        acc[key] = acc.get(key, 0) + coef

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take("op") == "-" else 1
    term(sign)
    while pos < len(tokens):
        op = take("op")
        if op not in "+-":
            raise PolynomialParseError(f"unexpected operator {op!r}")
        term(-1 if op == "-" else 1)
    return Polynomial(reg, acc)
