"""Linear maps on real matrix algebras in Choi-block form.

A :class:`LinearMap` on ``M_n`` is stored as the ``n x n`` array of blocks
``Phi(E_ij)``.  Matrices are numpy object arrays of :class:`Fraction`, so all
linear algebra here is exact.  Indices in the public API are 1-based where
they name basis vectors or permutation points (``E_11``, ``sigma_k(1)``) and
0-based where they index numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "ParameterError",
    "rational_matrix",
    "unit_matrix",
    "identity_matrix",
    "is_symmetric",
    "Permutation",
    "LinearMap",
    "BlockMatrix",
    "PsdVerdict",
    "qi_hou_map",
    "identity_map",
    "apply_map",
    "choi_and_witness",
    "partial_transpose",
    "is_psd_exact",
    "classify_map",
    "MapClass",
]


class ParameterError(ValueError):
    """Invalid construction parameters (dimension, shift, divisibility)."""


def _frac_array(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def rational_matrix(rows) -> np.ndarray:
    """Square object array of Fractions from nested rows or an ndarray."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    out = _frac_array(arr.shape)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v)
    return out


def unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    """``E_ij`` in ``M_n`` with 1-based ``i, j``."""
    m = _frac_array((n, n))
    m[i - 1, j - 1] = Fraction(1)
    return m


def identity_matrix(n: int) -> np.ndarray:
    m = _frac_array((n, n))
    for i in range(n):
        m[i, i] = Fraction(1)
    return m


def is_symmetric(a: np.ndarray) -> bool:
    return bool(np.all(a == a.T))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1, ..., n}`` stored by its images."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def shift(cls, n: int, k: int) -> "Permutation":
        """``sigma_k(i) = i + k mod n`` with values in ``1..n``."""
        return cls(tuple((i + k - 1) % n + 1 for i in range(1, n + 1)))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # composition: (self * other)(i) == self(other(i))
        if other.n != self.n:
            raise ValueError("permutations act on different sets")
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Linear map ``M_n -> M_n`` with ``blocks[i, j] == Phi(E_{i+1, j+1})``.

    ``blocks`` has shape ``(n, n, n, n)``.  Real hermiticity preservation
    (``Phi(E_ji) == Phi(E_ij).T``) is checked on construction.
    """

    n: int
    blocks: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=object)
        n = self.n
        if b.shape != (n, n, n, n):
            raise ValueError(f"blocks must have shape {(n,) * 4}, got {b.shape}")
        b = np.vectorize(Fraction, otypes=[object])(b)
        if not np.all(b == b.transpose(1, 0, 3, 2)):
            raise ValueError("map is not hermiticity preserving: Phi(E_ji) != Phi(E_ij)^T")
        b.flags.writeable = False
        object.__setattr__(self, "blocks", b)

    def block(self, i: int, j: int) -> np.ndarray:
        """``Phi(E_ij)`` for 1-based ``i, j``."""
        return self.blocks[i - 1, j - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.n == other.n and bool(np.all(self.blocks == other.blocks))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return LinearMap(self.n, self.blocks + other.blocks)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return LinearMap(self.n, self.blocks - other.blocks)

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.n, self.blocks * Fraction(c))

    def is_zero(self) -> bool:
        return not np.any(self.blocks != 0)

    def is_scalar_multiple_of(self, other: "LinearMap") -> bool:
        """True when ``self == c * other`` for a rational ``c``."""
        if other.is_zero():
            return self.is_zero()
        a, b = self.blocks.ravel(), other.blocks.ravel()
        if np.any((a != 0) != (b != 0)):
            return False
        k = int(np.flatnonzero(b != 0)[0])
        c = a[k] / b[k]
        return bool(np.all(a == b * c))

    def __call__(self, a) -> np.ndarray:
        return apply_map(self, a)


def identity_map(n: int) -> LinearMap:
    blocks = _frac_array((n, n, n, n))
    for i in range(n):
        for j in range(n):
            blocks[i, j, i, j] = Fraction(1)
    return LinearMap(n, blocks)


def qi_hou_map(n: int, k: int) -> LinearMap:
    """``A -> diag(b) - A`` with ``b_i = (n-1) a_ii + a_{s(i) s(i)}``, ``s = sigma_k``.

    In block form ``Phi(E_ij) = -E_ij`` off the diagonal and
    ``Phi(E_jj) = (n-2) E_jj + E_{s^-1(j) s^-1(j)}``.
    """
    if n < 3:
        raise ParameterError(f"n must be at least 3, got {n}")
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must lie in [1, {n - 1}], got {k}")
    sigma_inv = Permutation.shift(n, k).inverse()
    blocks = _frac_array((n, n, n, n))
    for i in range(n):
        for j in range(n):
            blocks[i, j, i, j] = Fraction(-1)
    for j in range(1, n + 1):
        blocks[j - 1, j - 1, j - 1, j - 1] += n - 1
        s = sigma_inv(j) - 1
        blocks[j - 1, j - 1, s, s] += 1
    return LinearMap(n, blocks)


def apply_map(m: LinearMap, a) -> np.ndarray:
    """``Phi(A) = sum_ij a_ij Phi(E_ij)``, exactly."""
    a = np.asarray(a, dtype=object)
    if a.shape != (m.n, m.n):
        raise ValueError(f"expected a {m.n}x{m.n} matrix, got shape {a.shape}")
    a = np.vectorize(Fraction, otypes=[object])(a)
    return np.tensordot(a, m.blocks, axes=([0, 1], [0, 1]))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """An ``n^2 x n^2`` rational matrix viewed as ``n x n`` blocks of size ``n``.

    Row index ``(i, a)`` maps to ``i * n + a``: the first tensor factor picks
    the block, the second indexes inside it.
    """

    matrix: np.ndarray = field(repr=False)
    block_dim: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=object)
        n = self.block_dim
        if n < 1 or m.shape != (n * n, n * n):
            raise ValueError(f"expected shape {(n * n, n * n)} for block_dim {n}, got {m.shape}")
        m = np.vectorize(Fraction, otypes=[object])(m)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def block(self, i: int, j: int) -> np.ndarray:
        """Block ``(i, j)``, 1-based."""
        n = self.block_dim
        return self.matrix[(i - 1) * n:i * n, (j - 1) * n:j * n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return self.block_dim == other.block_dim and bool(np.all(self.matrix == other.matrix))

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        if other.block_dim != self.block_dim:
            raise ValueError("block dimension mismatch")
        return BlockMatrix(self.matrix + other.matrix, self.block_dim)

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        if other.block_dim != self.block_dim:
            raise ValueError("block dimension mismatch")
        return BlockMatrix(self.matrix - other.matrix, self.block_dim)

    def scale(self, c) -> "BlockMatrix":
        return BlockMatrix(self.matrix * Fraction(c), self.block_dim)

    def trace(self) -> Fraction:
        return sum(self.matrix.diagonal(), Fraction(0))

    def to_float(self) -> np.ndarray:
        return self.matrix.astype(float)

    @classmethod
    def zeros(cls, n: int) -> "BlockMatrix":
        return cls(_frac_array((n * n, n * n)), n)


def choi_and_witness(m: LinearMap) -> tuple[BlockMatrix, BlockMatrix]:
    """Choi matrix ``C = sum |i><j| (x) Phi(E_ij)`` and witness ``W = C / n``."""
    n = m.n
    c = m.blocks.transpose(0, 2, 1, 3).reshape(n * n, n * n)
    choi = BlockMatrix(c, n)
    return choi, choi.scale(Fraction(1, n))


def partial_transpose(b: BlockMatrix) -> BlockMatrix:
    """Transpose every block in place (transpose on the second factor)."""
    n = b.block_dim
    t = b.matrix.reshape(n, n, n, n).transpose(0, 3, 2, 1).reshape(n * n, n * n)
    return BlockMatrix(t, n)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PsdVerdict:
    """Outcome of :func:`is_psd_exact`.

    ``pivots`` lists ``(index, value)`` for every elimination step taken
    (0-based indices into the input).  When ``psd`` is false, ``witness`` is
    a rational vector with ``witness @ S @ witness == value < 0``.
    """

    psd: bool
    pivots: tuple[tuple[int, Fraction], ...]
    witness: np.ndarray | None = field(default=None, repr=False)
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.psd


def _quad(s: np.ndarray, v: np.ndarray) -> Fraction:
    return v.dot(s.dot(v))


def is_psd_exact(s) -> PsdVerdict:
    """Exact positive-semidefiniteness test for a symmetric rational matrix.

    Symmetric LDL^T with diagonal pivoting over the rationals.  The
    elimination keeps an explicit change of basis ``T`` so that the current
    Schur complement equals ``T^T S T`` restricted to the live coordinates;
    any negative diagonal entry, or a zero diagonal facing a nonzero
    off-diagonal entry, turns into an original-coordinate vector ``v`` with
    ``v^T S v < 0``.
    """
    if isinstance(s, BlockMatrix):
        s = s.matrix
    s = np.asarray(s, dtype=object)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("expected a square matrix")
    s = np.vectorize(Fraction, otypes=[object])(s)
    if not is_symmetric(s):
        raise ValueError("matrix is not symmetric")
    n = s.shape[0]
    r = s.copy()
    t = identity_matrix(n)
    live = list(range(n))
    pivots: list[tuple[int, Fraction]] = []

    def fail(v: np.ndarray) -> PsdVerdict:
        value = _quad(s, v)
        assert value < 0, "internal error: witness does not certify indefiniteness"
        return PsdVerdict(False, tuple(pivots), v, value)

    while live:
        diag = [(r[i, i], i) for i in live]
        neg = [i for d, i in diag if d < 0]
        if neg:
            return fail(t[:, neg[0]].copy())
        d, p = max(diag)
        if d == 0:
            for i in live:
                for j in live:
                    if i < j and r[i, j] != 0:
                        sign = 1 if r[i, j] > 0 else -1
                        return fail(t[:, i] - sign * t[:, j])
            break  # remaining Schur complement is exactly zero
        pivots.append((p, d))
        live.remove(p)
        for j in live:
            f = r[p, j] / d
            if f:
                t[:, j] = t[:, j] - f * t[:, p]
        if live:
            rp = r[p, live]
            r[np.ix_(live, live)] = r[np.ix_(live, live)] - np.outer(rp, rp) / d
    return PsdVerdict(True, tuple(pivots))


@dataclass(frozen=True)
class MapClass:
    completely_positive: bool
    completely_copositive: bool
    cp_verdict: PsdVerdict
    ccp_verdict: PsdVerdict


def classify_map(m: LinearMap) -> MapClass:
    """CP iff the Choi matrix is psd; CCP iff its partial transpose is."""
    choi, _ = choi_and_witness(m)
    cp = is_psd_exact(choi)
    ccp = is_psd_exact(partial_transpose(choi))
    return MapClass(cp.psd, ccp.psd, cp, ccp)
