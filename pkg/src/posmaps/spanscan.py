"""Numerical search for product vectors annihilating a witness.

For a witness ``W`` on ``C^n (x) C^n`` the scanner looks for unit product
vectors ``xi (x) eta`` with ``<xi, eta| W |xi, eta> = 0`` by see-saw
minimisation: with ``xi`` fixed the objective is a Hermitian form in
``eta`` and is minimised by a bottom eigenvector, and symmetrically.  The
numerical rank of the stacked zeros estimates ``dim span P_W``.

A missing full rank is evidence only; sampling cannot prove that the zeros
fail to span.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .maps import BlockMatrix, partial_transpose
from .nonneg import default_workers

__all__ = [
    "ProductVector",
    "ZeroSet",
    "SpanReport",
    "product_expectation",
    "seesaw_minimize",
    "collect_zero_set",
    "span_report",
    "witness_fingerprint",
    "numerical_rank",
]

DEFAULT_ZERO_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-6
DEDUP_TOL = 1e-6
SPARSE_FRACTION = 0.5
STEP_TOL = 1e-7


@dataclass(frozen=True)
class ProductVector:
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=complex)
        eta = np.asarray(self.eta, dtype=complex)
        if abs(np.linalg.norm(xi) - 1) > 1e-12 or abs(np.linalg.norm(eta) - 1) > 1e-12:
            raise ValueError("product vector factors must have unit norm")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def normalized(cls, xi, eta) -> "ProductVector":
        xi = np.asarray(xi, dtype=complex)
        eta = np.asarray(eta, dtype=complex)
        return cls(xi / np.linalg.norm(xi), eta / np.linalg.norm(eta))

    def tensor(self) -> np.ndarray:
        return np.kron(self.xi, self.eta)


def _as_array(w) -> np.ndarray:
    if isinstance(w, BlockMatrix):
        return w.to_float()
    return np.asarray(w)


def witness_fingerprint(w) -> str:
    arr = np.ascontiguousarray(_as_array(w), dtype=complex)
    return hashlib.sha256(arr.tobytes()).hexdigest()[:16]


def product_expectation(w, v: ProductVector) -> float:
    """``<xi, eta| W |xi, eta>`` (real for self-adjoint ``W``)."""
    arr = _as_array(w)
    n = len(v.xi)
    if arr.shape != (n * len(v.eta), n * len(v.eta)) or len(v.eta) != n:
        raise ValueError(f"witness of shape {arr.shape} does not match a {n}x{len(v.eta)} product vector")
    t = v.tensor()
    return float(np.real(np.vdot(t, arr @ t)))


# -- batched see-saw ---------------------------------------------------------


def _bottom_vectors(h: np.ndarray, current: np.ndarray | None = None,
                    gap: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Lowest eigenpair of each Hermitian matrix in a batch.

    With ``current`` given, a degenerate bottom eigenspace (eigenvalues
    within ``gap * scale`` of the lowest) is resolved by projecting
    ``current`` onto it, so iterates do not jump around inside the kernel.
    """
    evals, evecs = np.linalg.eigh(h)
    best = evecs[:, :, 0]
    if current is None:
        return evals[:, 0], best
    scale = np.maximum(np.abs(evals).max(axis=1), 1.0)
    near = (evals - evals[:, :1]) <= gap * scale[:, None]  # (R, n)
    coeff = np.einsum("rkj,rk->rj", evecs.conj(), current) * near
    proj = np.einsum("rkj,rj->rk", evecs, coeff)
    norms = np.linalg.norm(proj, axis=1)
    use = near[:, 1:].any(axis=1) & (norms > 1e-3)
    best[use] = proj[use] / norms[use, None]
    return evals[:, 0], best


def _contractors(w4: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Matrices turning ``conj(xi) (x) xi`` into ``M_xi`` and ``conj(eta) (x) eta`` into ``N_eta``."""
    n = w4.shape[0]
    to_eta = w4.transpose(0, 2, 1, 3).reshape(n * n, n * n)  # [(i, j), (a, b)]
    to_xi = w4.transpose(1, 3, 0, 2).reshape(n * n, n * n)   # [(a, b), (i, j)]
    return to_eta, to_xi


def _moved(new: np.ndarray, old: np.ndarray) -> np.ndarray:
    """Distance of ``new`` from the complex line through ``old`` (rows are unit vectors)."""
    overlap = np.einsum("ri,ri->r", old.conj(), new)
    return np.linalg.norm(new - overlap[:, None] * old, axis=1)


def _seesaw_batch(w4: np.ndarray, xi: np.ndarray, eta: np.ndarray, max_iters: int, tol: float,
                  check_monotone: bool = True, step_tol: float = STEP_TOL):
    """Run see-saw on a batch; ``w4[i, a, j, b] = W[(i, a), (j, b)]``.

    A restart stops and is flagged converged once a sweep changes the
    objective by less than ``tol`` and moves both factors by less than
    ``step_tol``.  Runs creeping towards degenerate zeros keep moving and
    are left unconverged at ``max_iters``.
    """
    r, n = xi.shape
    to_eta, to_xi = _contractors(w4)

    def outer(v):
        return (v.conj()[:, :, None] * v[:, None, :]).reshape(len(v), n * n)

    value = np.real(np.einsum("rk,kl,rl->r", outer(eta), to_xi, outer(xi)))
    converged = np.zeros(r, dtype=bool)
    iters = np.zeros(r, dtype=int)
    live = np.arange(r)
    for _ in range(max_iters):
        if not len(live):
            break
        m_eta = (outer(xi[live]) @ to_eta).reshape(len(live), n, n)
        _, e = _bottom_vectors(m_eta, eta[live])
        m_xi = (outer(e) @ to_xi).reshape(len(live), n, n)
        new_val, x = _bottom_vectors(m_xi, xi[live])
        if check_monotone:
            slack = 1e-12 * (1 + np.abs(value[live]))
            if np.any(new_val > value[live] + slack):
                raise AssertionError("see-saw objective increased")
        delta = value[live] - new_val
        step = np.maximum(_moved(x, xi[live]), _moved(e, eta[live]))
        xi[live], eta[live], value[live] = x, e, new_val
        iters[live] += 1
        done = (np.abs(delta) < tol) & (step < step_tol)
        converged[live[done]] = True
        live = live[~done]
    return xi, eta, value, iters, converged


def seesaw_minimize(w, seed: int = 0, max_iters: int = 500, tol: float = 1e-15,
                    start: ProductVector | None = None, real: bool = False) -> tuple[ProductVector, float]:
    """Single see-saw run from a seeded random (or given) start."""
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    arr = _as_array(w).astype(complex)
    n = int(round(np.sqrt(arr.shape[0])))
    w4 = arr.reshape(n, n, n, n)
    if start is None:
        xi0, eta0 = _random_starts(n, range(seed, seed + 1), real)
    else:
        xi0, eta0 = start.xi[None, :].copy(), start.eta[None, :].copy()
    xi, eta, value, _, _ = _seesaw_batch(w4, xi0, eta0, max_iters, tol)
    return ProductVector.normalized(xi[0], eta[0]), float(value[0])


def _random_starts(n: int, seeds: range, real: bool,
                   sparse_fraction: float = SPARSE_FRACTION) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian starts; a share of them is confined to random coordinate subspaces.

    Zeros with small supports have narrow basins for dense starts, so
    without the sparse starts they are found rarely and only to low accuracy.
    """
    xis, etas = [], []
    for s in seeds:
        rng = np.random.default_rng(s)
        if real:
            v = rng.standard_normal((2, n)).astype(complex)
        else:
            v = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
        if rng.random() < sparse_fraction:
            mask = rng.random((2, n)) < 0.5
            mask[~mask.any(axis=1), rng.integers(n)] = True
            v = v * mask
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        xis.append(v[0])
        etas.append(v[1])
    return np.array(xis).reshape(len(xis), n), np.array(etas).reshape(len(etas), n)


# -- zero sets and span reports ---------------------------------------------


@dataclass
class ZeroSet:
    vectors: list[ProductVector]
    values: list[float]
    tolerance: float
    fingerprint: str
    restarts: int
    seed: int

    def __len__(self) -> int:
        return len(self.vectors)

    def stacked(self) -> np.ndarray:
        if not self.vectors:
            return np.zeros((0, 0), dtype=complex)
        return np.array([v.tensor() for v in self.vectors])


def collect_zero_set(w, restarts: int = 10_000, zero_tol: float = DEFAULT_ZERO_TOL, seed: int = 0,
                     max_iters: int = 300, real: bool = False, workers: int | None = None,
                     chunk: int = 2048) -> ZeroSet:
    """Run ``restarts`` seeded see-saw searches; keep converged runs with value ``<= zero_tol``.

    Restart ``r`` uses seed ``seed + r``; chunks may run on threads, and are
    merged in restart order so the result does not depend on scheduling.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    arr = _as_array(w).astype(complex)
    n = int(round(np.sqrt(arr.shape[0])))
    if n * n != arr.shape[0] or arr.shape[0] != arr.shape[1]:
        raise ValueError("witness must be an n^2 x n^2 matrix")
    w4 = arr.reshape(n, n, n, n)
    ranges = [range(seed + s, seed + min(s + chunk, restarts)) for s in range(0, restarts, chunk)]

    def run(rng_range):
        xi, eta = _random_starts(n, rng_range, real)
        return _seesaw_batch(w4, xi, eta, max_iters, 1e-16)

    workers = workers or default_workers()
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, ranges))
    else:
        parts = [run(r) for r in ranges]
    vectors, values = [], []
    for xi, eta, value, _, converged in parts:
        for k in np.flatnonzero(converged & (np.abs(value) <= zero_tol)):
            vectors.append(ProductVector.normalized(xi[k], eta[k]))
            values.append(float(value[k]))
    return ZeroSet(vectors, values, zero_tol, witness_fingerprint(arr), restarts, seed)


def _dedup(rows: np.ndarray, tol: float = DEDUP_TOL, chunk: int = 2048) -> np.ndarray:
    """Drop each unit row lying within angular distance ``tol`` of an earlier row.

    The angle is taken up to a global phase, ``sin = sqrt(1 - |<u, v>|^2)``.
    The first row of every cluster survives, so the span changes by at most
    ``O(tol)`` per dropped row.
    """
    rows = np.asarray(rows)
    if rows.ndim != 2 or len(rows) == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    threshold = np.sqrt(1 - tol * tol)
    keep = np.ones(len(rows), dtype=bool)
    conj = rows.conj()
    for start in range(0, len(rows), chunk):
        stop = min(start + chunk, len(rows))
        overlap = np.abs(rows[start:stop] @ conj[:stop].T)  # (chunk, stop)
        earlier = np.arange(stop)[None, :] < np.arange(start, stop)[:, None]
        keep[start:stop] = ~np.any((overlap > threshold) & earlier, axis=1)
    return rows[keep]


@dataclass
class SpanReport:
    zero_count: int
    distinct_zeros: int
    singular_values: list[float]
    rank: int
    dimension: int
    has_spanning: bool
    parameters: dict
    fingerprint: str
    samples: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "zero_count": self.zero_count,
            "distinct_zeros": self.distinct_zeros,
            "singular_values": self.singular_values,
            "rank": self.rank,
            "dimension": self.dimension,
            "has_spanning": self.has_spanning,
            "parameters": self.parameters,
            "fingerprint": self.fingerprint,
            "samples": self.samples,
            "note": ("rank below the full dimension is sampling evidence; it does not "
                     "prove that the zero product vectors fail to span"),
        }


def numerical_rank(rows: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> tuple[int, np.ndarray]:
    """Count singular values above ``rank_tol * sigma_max``."""
    if rows.size == 0:
        return 0, np.zeros(0)
    sv = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(sv > rank_tol * sv[0])), sv


def span_report(w, restarts: int = 10_000, zero_tol: float = DEFAULT_ZERO_TOL,
                rank_tol: float = DEFAULT_RANK_TOL, seed: int = 0, use_partial_transpose: bool = False,
                real: bool = False, max_iters: int = 300, samples: int = 5,
                workers: int | None = None) -> SpanReport:
    """Estimate ``dim span P_W`` (or of ``P_{W^Gamma}`` with ``use_partial_transpose``)."""
    if use_partial_transpose:
        if not isinstance(w, BlockMatrix):
            arr = np.asarray(w)
            n = int(round(np.sqrt(arr.shape[0])))
            w = arr.reshape(n, n, n, n).transpose(0, 3, 2, 1).reshape(n * n, n * n)
        else:
            w = partial_transpose(w)
    zs = collect_zero_set(w, restarts, zero_tol, seed, max_iters=max_iters, real=real, workers=workers)
    arr = _as_array(w)
    dim = arr.shape[0]
    rows = _dedup(zs.stacked()) if len(zs) else np.zeros((0, dim), dtype=complex)
    rank, sv = numerical_rank(rows, rank_tol)
    sample = [
        {"xi_real": v.xi.real.tolist(), "xi_imag": v.xi.imag.tolist(),
         "eta_real": v.eta.real.tolist(), "eta_imag": v.eta.imag.tolist(), "value": val}
        for v, val in list(zip(zs.vectors, zs.values))[:samples]
    ]
    params = {"restarts": restarts, "seed": seed, "zero_tol": zero_tol, "rank_tol": rank_tol,
              "dedup_tol": DEDUP_TOL, "max_iters": max_iters, "real": real,
              "use_partial_transpose": use_partial_transpose}
    return SpanReport(len(zs), len(rows), [float(s) for s in sv], rank, dim, rank == dim,
                      params, zs.fingerprint, sample)
