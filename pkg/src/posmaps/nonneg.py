"""Multistart local minimisation of forms over products of unit spheres.

This is evidence, never proof: a nonnegative ``min_found`` only says that no
restart found a negative value.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .biquadratic import BiquadraticForm
from .poly import Polynomial

__all__ = ["ScanResult", "CompiledPolynomial", "nonnegativity_scan", "default_workers"]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("POSMAPS_THREADS", "1")))
    except ValueError:
        return 1


class CompiledPolynomial:
    """Float evaluation of a polynomial and its gradient on batches of points.

    Only the variables listed in ``names`` are kept; others must not occur.
    """

    def __init__(self, p: Polynomial, names: list[str]):
        idx = [p.registry.index(v) for v in names]
        missing = set(p.variables()) - set(names)
        if missing:
            raise ValueError(f"variables {sorted(missing)} are not covered")
        terms = p.terms
        self.names = list(names)
        self.exps = np.array([[e[i] for i in idx] for e in terms], dtype=np.int64).reshape(len(terms), len(idx))
        self.coefs = np.array([float(c) for c in terms.values()])
        self.maxdeg = int(self.exps.max(initial=0))
        self._cols = np.arange(len(idx))

    def _powers(self, x: np.ndarray) -> np.ndarray:
        # table[r, v, e] = x[r, v] ** e
        table = np.ones(x.shape + (self.maxdeg + 1,))
        for e in range(1, self.maxdeg + 1):
            table[:, :, e] = table[:, :, e - 1] * x
        return table

    def value(self, x: np.ndarray) -> np.ndarray:
        factors = self._powers(x)[:, self._cols, self.exps]  # (R, T, V)
        return factors.prod(axis=2) @ self.coefs

    def value_and_gradient(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        table = self._powers(x)
        factors = table[:, self._cols, self.exps]
        ones = np.ones(factors.shape[:2] + (1,))
        before = np.cumprod(np.concatenate([ones, factors[:, :, :-1]], axis=2), axis=2)
        after = np.cumprod(np.concatenate([ones, factors[:, :, :0:-1]], axis=2), axis=2)[:, :, ::-1]
        lowered = table[:, self._cols, np.maximum(self.exps - 1, 0)]
        partial = before * after * lowered * self.exps  # d(monomial)/dx_v
        value = (before[:, :, -1] * factors[:, :, -1]) @ self.coefs
        return value, np.einsum("rtv,t->rv", partial, self.coefs)


class CompiledBiquadratic:
    """Fast evaluator for a biquadratic form through its symmetric coefficient tensor.

    Variables are ordered as the listed x-variables followed by the listed
    y-variables.
    """

    def __init__(self, form: BiquadraticForm, xs: list[str], ys: list[str]):
        n = form.n
        xi = {name: i for i, name in enumerate(xs)}
        yi = {name: i for i, name in enumerate(ys)}
        used = set(form.poly.variables())
        if not used <= set(xs) | set(ys):
            raise ValueError("blocks do not cover the variables of the form")
        tensor = np.zeros((len(xs), len(xs), len(ys), len(ys)))
        for exps, c in form.poly.terms.items():
            xp = [i for i in range(n) for _ in range(exps[i])]
            yp = [a for a in range(n) for _ in range(exps[n + a])]
            i, j = (xi[f"x{t + 1}"] for t in xp)
            a, b = (yi[f"y{t + 1}"] for t in yp)
            xperms = {(i, j), (j, i)}
            yperms = {(a, b), (b, a)}
            share = float(c) / (len(xperms) * len(yperms))
            for ii, jj in xperms:
                for aa, bb in yperms:
                    tensor[ii, jj, aa, bb] += share
        self.nx, self.ny = len(xs), len(ys)
        self.mat = tensor.reshape(self.nx * self.nx, self.ny * self.ny)
        self.tensor = tensor

    def _split(self, x):
        return x[:, :self.nx], x[:, self.nx:]

    def value(self, x: np.ndarray) -> np.ndarray:
        return self.value_and_gradient(x)[0]

    def value_and_gradient(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        u, v = self._split(x)
        r = len(x)
        xx = (u[:, :, None] * u[:, None, :]).reshape(r, -1)
        sx = (xx @ self.mat).reshape(r, self.ny, self.ny)  # y-quadratic form at each x
        sv = np.einsum("rab,rb->ra", sx, v)
        value = np.einsum("ra,ra->r", v, sv)
        yy = (v[:, :, None] * v[:, None, :]).reshape(r, -1)
        ty = (yy @ self.mat.T).reshape(r, self.nx, self.nx)
        gu = 2 * np.einsum("rij,rj->ri", ty, u)
        return value, np.concatenate([gu, 2 * sv], axis=1)


@dataclass
class ScanResult:
    min_found: float
    argmin: dict[str, float]
    all_nonneg_evidence: bool
    restarts: int
    tol: float
    seed: int
    blocks: list[list[str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "min_found": self.min_found,
            "argmin": self.argmin,
            "all_nonneg_evidence": self.all_nonneg_evidence,
            "restarts": self.restarts,
            "tol": self.tol,
            "seed": self.seed,
            "blocks": self.blocks,
            "note": "numerical evidence from local minimisation, not a proof",
        }


def _default_blocks(p) -> list[list[str]]:
    if isinstance(p, BiquadraticForm):
        used = set(p.poly.variables())
        xs = [f"x{i}" for i in range(1, p.n + 1) if f"x{i}" in used]
        ys = [f"y{i}" for i in range(1, p.n + 1) if f"y{i}" in used]
        return [b for b in (xs, ys) if b]
    return [p.variables()]


def _start_points(nvars: int, seeds: range) -> np.ndarray:
    pts = [np.random.default_rng(s).standard_normal(nvars) for s in seeds]
    return np.array(pts).reshape(len(pts), nvars)


def _normalize(x: np.ndarray, blocks: list[np.ndarray]) -> np.ndarray:
    x = x.copy()
    for b in blocks:
        norms = np.linalg.norm(x[:, b], axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        x[:, b] /= norms
    return x


def _descend(f, x: np.ndarray, blocks, max_iters: int, ftol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    """Projected gradient descent with a per-point adaptive step.

    A restart stops once an accepted step improves its value by less than
    ``ftol`` or its step length underflows; only live restarts are iterated.
    """
    x = _normalize(x, blocks)
    val, g = f.value_and_gradient(x)
    step = np.full(len(x), 0.1)
    live = np.arange(len(x))
    for _ in range(max_iters):
        if not len(live):
            break
        xl, gl = x[live], g[live]
        for b in blocks:
            radial = np.sum(gl[:, b] * xl[:, b], axis=1, keepdims=True)
            gl[:, b] -= radial * xl[:, b]
        cand = _normalize(xl - step[live, None] * gl, blocks)
        cval, cgrad = f.value_and_gradient(cand)
        ok = cval <= val[live]
        gain = np.where(ok, val[live] - cval, np.inf)
        acc = live[ok]
        x[acc], g[acc], val[acc] = cand[ok], cgrad[ok], cval[ok]
        step[live] = np.where(ok, np.minimum(step[live] * 1.5, 10.0), step[live] * 0.5)
        live = live[(gain > ftol) & (step[live] > 1e-12)]
    return x, val


def nonnegativity_scan(p, restarts: int = 1000, tol: float = 1e-9, seed: int = 0,
                       blocks: list[list[str]] | None = None, max_iters: int = 400,
                       initial_points: np.ndarray | None = None,
                       workers: int | None = None) -> ScanResult:
    """Search for negative values of a block-homogeneous form on spheres.

    Restart ``r`` starts from a Gaussian point drawn with seed ``seed + r``.
    ``blocks`` defaults to the used x- and y-variables of a biquadratic form,
    or to all used variables of a plain polynomial.  Extra starting points
    (rows ordered like the concatenated blocks) can be supplied through
    ``initial_points``; they are run after the random restarts.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if blocks is None:
        blocks = _default_blocks(p)
    poly = p.poly if isinstance(p, BiquadraticForm) else p
    names = [v for b in blocks for v in b]
    if len(set(names)) != len(names):
        raise ValueError("blocks overlap")
    if not names:
        c = float(poly.constant_term())
        return ScanResult(c, {}, c >= -tol, restarts, tol, seed, blocks)
    if isinstance(p, BiquadraticForm) and len(blocks) == 2 and all(
            v.startswith("x") for v in blocks[0]) and all(v.startswith("y") for v in blocks[1]):
        f = CompiledBiquadratic(p, blocks[0], blocks[1])
    else:
        f = CompiledPolynomial(poly, names)
    block_idx, pos = [], 0
    for b in blocks:
        block_idx.append(np.arange(pos, pos + len(b)))
        pos += len(b)

    workers = workers or default_workers()
    chunk = max(1, -(-restarts // workers))
    ranges = [range(seed + s, seed + min(s + chunk, restarts)) for s in range(0, restarts, chunk)]

    def run(rng_range):
        x0 = _start_points(len(names), rng_range)
        return _descend(f, x0, block_idx, max_iters)

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, ranges))
    else:
        parts = [run(r) for r in ranges]
    if initial_points is not None:
        extra = np.atleast_2d(np.asarray(initial_points, dtype=float))
        parts.append(_descend(f, extra, block_idx, max_iters))
    xs = np.concatenate([x for x, _ in parts])
    vals = np.concatenate([v for _, v in parts])
    best = int(np.argmin(vals))  # first index on ties: independent of scheduling
    min_found = float(vals[best])
    argmin = {name: float(v) for name, v in zip(names, xs[best])}
    return ScanResult(min_found, argmin, min_found >= -tol, restarts, tol, seed, [list(b) for b in blocks])
