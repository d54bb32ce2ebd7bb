"""Exact certificates for non-extremality and decomposability of Qi-Hou maps.

A non-extremality certificate writes ``B_{Phi^(n,q)}`` (and the map itself)
as a sum of at least two positive pieces, none proportional to the target.
A decomposability certificate writes the witness as ``P + Q^Gamma`` with
``P`` and ``Q`` exactly positive semidefinite.

Certificates check their exact invariants when built, and :func:`validate`
re-derives every exact claim of a JSON-loaded certificate.  The scan records
attached to summands are numerical evidence only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .biquadratic import BiquadraticForm, map_from_biquadratic
from .forms import block_term, cross_square, mu_permutation, permute_form, qi_hou_form
from .maps import (
    BlockMatrix,
    LinearMap,
    ParameterError,
    Permutation,
    PsdVerdict,
    choi_and_witness,
    classify_map,
    is_psd_exact,
    partial_transpose,
    qi_hou_map,
)
from .nonneg import ScanResult, nonnegativity_scan
from .poly import is_scalar_multiple
from .serialize import (
    SCHEMA_VERSION,
    block_matrix_from_json,
    block_matrix_to_json,
    form_from_json,
    form_to_json,
    linear_map_from_json,
    linear_map_to_json,
    permutation_from_json,
    permutation_to_json,
)

__all__ = [
    "CertificateError",
    "Summand",
    "DecompositionCertificate",
    "DecomposabilityCertificate",
    "divisor_decomposition",
    "non_extremality_certificate",
    "decomposability_certificate",
    "certificate_to_json",
    "certificate_from_json",
    "validate",
]

SCAN_TOL = 1e-9


class CertificateError(ValueError):
    """An exact certificate invariant failed."""


@dataclass(frozen=True)
class Summand:
    """One positive piece of a decomposition.

    ``kind`` is ``"block_term"`` (indices ``(d,)``) or ``"cross_square"``
    (indices ``(i, j)``), naming the piece before any index permutation.
    """

    form: BiquadraticForm
    kind: str
    indices: tuple[int, ...]
    evidence: ScanResult | None = None
    map: LinearMap | None = field(default=None, compare=False)
    completely_positive: bool | None = None
    completely_copositive: bool | None = None


def _scan(form: BiquadraticForm, restarts: int, seed: int) -> ScanResult | None:
    if restarts <= 0:
        return None
    return nonnegativity_scan(form, restarts=restarts, tol=SCAN_TOL, seed=seed)


@dataclass(frozen=True)
class DecompositionCertificate:
    """``target == sum of summand forms`` exactly, with at least two summands."""

    n: int
    q: int
    divisor: int
    target: BiquadraticForm
    summands: tuple[Summand, ...]
    mu: Permutation | None = None

    def __post_init__(self):
        _check_decomposition(self)

    @property
    def has_maps(self) -> bool:
        return all(s.map is not None for s in self.summands)

    @property
    def evidence_ok(self) -> bool:
        """True when every attached scan found no value below ``-tol``."""
        return all(s.evidence is None or s.evidence.all_nonneg_evidence for s in self.summands)


def _check_decomposition(cert: DecompositionCertificate) -> None:
    if len(cert.summands) < 2:
        raise CertificateError("a decomposition needs at least two summands")
    total = cert.target.registry.zero()
    for s in cert.summands:
        if s.form.n != cert.n:
            raise CertificateError("summand lives in the wrong dimension")
        total = total + s.form.poly
    if total != cert.target.poly:
        raise CertificateError(f"summands do not add up to the target; residual {cert.target.poly - total}")
    for s in cert.summands:
        if is_scalar_multiple(s.form.poly, cert.target.poly):
            raise CertificateError("a summand is proportional to the target")
    if all(s.map is not None for s in cert.summands):
        maps = [s.map for s in cert.summands]
        target_map = qi_hou_map(cert.n, cert.q)
        acc = maps[0]
        for m in maps[1:]:
            acc = acc + m
        if acc != target_map:
            raise CertificateError("summand maps do not add up to the target map")
        for s in cert.summands:
            if map_from_biquadratic(s.form) != s.map:
                raise CertificateError("summand map does not correspond to its form")
            if s.map.is_scalar_multiple_of(target_map):
                raise CertificateError("a summand map is proportional to the target map")


def _attach_map(s: Summand, classify: bool) -> Summand:
    m = map_from_biquadratic(s.form)
    cp = ccp = None
    if classify:
        verdict = classify_map(m)
        cp, ccp = verdict.completely_positive, verdict.completely_copositive
    return Summand(s.form, s.kind, s.indices, s.evidence, m, cp, ccp)


def _divisor_summands(n: int, k: int) -> list[tuple[BiquadraticForm, str, tuple[int, ...]]]:
    pieces = [(block_term(n, k, d), "block_term", (d,)) for d in range(1, k + 1)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i - j) % k:
                pieces.append((cross_square(n, i, j), "cross_square", (i, j)))
    return pieces


def divisor_decomposition(n: int, k: int, scan_restarts: int = 0, seed: int = 0,
                          with_maps: bool = True, classify: bool = False) -> DecompositionCertificate:
    """Split ``B_{Phi^(n,k)}`` into ``k`` block terms and cross squares.

    ``k`` must divide ``n`` with ``k >= 2`` and ``n/k >= 2``.  Each summand
    can carry a nonnegativity scan (``scan_restarts > 0``), its map, and the
    exact CP/CCP verdicts of that map (``classify``).
    """
    if k < 2:
        raise ParameterError(f"k must be at least 2 for a proper decomposition, got {k}")
    if n < 3 or n % k or n // k < 2:
        raise ParameterError(f"need k | n, n >= 3 and n/k >= 2, got n={n}, k={k}")
    summands = []
    for form, kind, idx in _divisor_summands(n, k):
        s = Summand(form, kind, idx, _scan(form, scan_restarts, seed))
        summands.append(_attach_map(s, classify) if with_maps else s)
    return DecompositionCertificate(n, k, k, qi_hou_form(n, k), tuple(summands))


def non_extremality_certificate(n: int, q: int, scan_restarts: int = 1000, seed: int = 0,
                                classify: bool = False) -> DecompositionCertificate:
    """Decompose ``Phi^(n,q)`` into positive maps, none proportional to it.

    Built from the divisor decomposition for ``k = gcd(n, q)`` pulled
    through the index permutation ``mu`` that carries ``sigma_k`` to
    ``sigma_q``.  Requires ``gcd(n, q) >= 2``.
    """
    if n < 3 or not 1 <= q <= n - 1:
        raise ParameterError(f"need n >= 3 and 1 <= q <= n-1, got n={n}, q={q}")
    k = gcd(n, q)
    if k == 1:
        raise ParameterError(
            f"no certificate: gcd({n}, {q}) = 1, so there is no divisor decomposition to pull back")
    base = divisor_decomposition(n, k, scan_restarts=0, with_maps=False)
    mu = mu_permutation(n, q)
    summands = []
    for s in base.summands:
        form = permute_form(s.form, mu)
        moved = Summand(form, s.kind, s.indices, _scan(form, scan_restarts, seed))
        summands.append(_attach_map(moved, classify))
    return DecompositionCertificate(n, q, k, qi_hou_form(n, q), tuple(summands), mu)


@dataclass(frozen=True, eq=False)
class DecomposabilityCertificate:
    """``W_{Phi^(n, n/2)} = P + Q^Gamma`` with exact psd verdicts for ``P`` and ``Q``."""

    n: int
    k: int
    p: BlockMatrix
    q: BlockMatrix
    p_verdict: PsdVerdict
    q_verdict: PsdVerdict

    def __post_init__(self):
        _, witness = choi_and_witness(qi_hou_map(self.n, self.k))
        if self.p + partial_transpose(self.q) != witness:
            raise CertificateError("P + Q^Gamma differs from the witness")
        if not (self.p_verdict.psd and self.q_verdict.psd):
            raise CertificateError("P or Q is not positive semidefinite")


def decomposability_certificate(n: int) -> DecomposabilityCertificate:
    """Exact ``P + Q^Gamma`` splitting of the witness of ``Phi^(n, n/2)``.

    ``P`` collects the Choi matrices of the cross-square maps (completely
    positive), ``Q`` the partial transposes of the Choi matrices of the block
    maps (completely copositive); both are scaled by ``1/n`` like the
    witness.
    """
    if n < 4 or n % 2:
        raise ParameterError(f"n must be even and at least 4, got {n}")
    k = n // 2
    cert = divisor_decomposition(n, k)
    p = BlockMatrix.zeros(n)
    q = BlockMatrix.zeros(n)
    for s in cert.summands:
        choi, _ = choi_and_witness(s.map)
        if s.kind == "cross_square":
            p = p + choi
        else:
            q = q + partial_transpose(choi)
    p = p.scale(Fraction(1, n))
    q = q.scale(Fraction(1, n))
    return DecomposabilityCertificate(n, k, p, q, is_psd_exact(p), is_psd_exact(q))


# -- JSON --------------------------------------------------------------------


def _scan_to_json(r: ScanResult | None):
    return None if r is None else r.to_dict()


def _scan_from_json(d) -> ScanResult | None:
    if d is None:
        return None
    return ScanResult(d["min_found"], d["argmin"], d["all_nonneg_evidence"], d["restarts"],
                      d["tol"], d["seed"], d.get("blocks", []))


def _verdict_to_json(v: PsdVerdict) -> dict:
    return {"psd": v.psd, "pivots": len(v.pivots)}


def certificate_to_json(cert) -> dict:
    if isinstance(cert, DecompositionCertificate):
        return {
            "schema": SCHEMA_VERSION,
            "kind": "decomposition",
            "n": cert.n,
            "q": cert.q,
            "divisor": cert.divisor,
            "mu": None if cert.mu is None else permutation_to_json(cert.mu),
            "target": form_to_json(cert.target),
            "summands": [
                {
                    "kind": s.kind,
                    "indices": list(s.indices),
                    "form": form_to_json(s.form),
                    "map": None if s.map is None else linear_map_to_json(s.map),
                    "completely_positive": s.completely_positive,
                    "completely_copositive": s.completely_copositive,
                    "psd_evidence": _scan_to_json(s.evidence),
                }
                for s in cert.summands
            ],
        }
    if isinstance(cert, DecomposabilityCertificate):
        return {
            "schema": SCHEMA_VERSION,
            "kind": "decomposability",
            "n": cert.n,
            "k": cert.k,
            "P": block_matrix_to_json(cert.p),
            "Q": block_matrix_to_json(cert.q),
            "P_verdict": _verdict_to_json(cert.p_verdict),
            "Q_verdict": _verdict_to_json(cert.q_verdict),
        }
    raise TypeError(f"not a certificate: {type(cert).__name__}")


def certificate_from_json(data: dict):
    """Rebuild a certificate; construction re-runs every exact check."""
    if data.get("schema") != SCHEMA_VERSION:
        raise CertificateError(f"unsupported schema {data.get('schema')!r}")
    kind = data.get("kind")
    if kind == "decomposition":
        n, q = int(data["n"]), int(data["q"])
        target = form_from_json(data["target"])
        if target != qi_hou_form(n, q):
            raise CertificateError("target is not the Qi-Hou form for the stated parameters")
        summands = []
        for s in data["summands"]:
            summands.append(Summand(
                form_from_json(s["form"]), s["kind"], tuple(s["indices"]), _scan_from_json(s.get("psd_evidence")),
                None if s.get("map") is None else linear_map_from_json(s["map"]),
                s.get("completely_positive"), s.get("completely_copositive"),
            ))
        mu = None if data.get("mu") is None else permutation_from_json(data["mu"])
        return DecompositionCertificate(n, q, int(data["divisor"]), target, tuple(summands), mu)
    if kind == "decomposability":
        p = block_matrix_from_json(data["P"])
        q = block_matrix_from_json(data["Q"])
        return DecomposabilityCertificate(int(data["n"]), int(data["k"]), p, q, is_psd_exact(p), is_psd_exact(q))
    raise CertificateError(f"unknown certificate kind {kind!r}")


def validate(data: dict) -> tuple[bool, str]:
    """Re-check a JSON certificate from scratch; returns ``(ok, message)``.

    For decompositions the recorded CP/CCP flags are recomputed exactly and
    the recorded scan evidence must report no negative value.
    """
    try:
        cert = certificate_from_json(data)
    except (CertificateError, ParameterError, KeyError, TypeError, ValueError) as exc:
        return False, f"invalid certificate: {exc}"
    if isinstance(cert, DecompositionCertificate):
        if cert.mu is not None and cert.mu != mu_permutation(cert.n, cert.q):
            return False, "recorded permutation differs from the one built for these parameters"
        for s in cert.summands:
            if s.map is not None and s.completely_positive is not None:
                verdict = classify_map(s.map)
                if (verdict.completely_positive, verdict.completely_copositive) != (
                        s.completely_positive, s.completely_copositive):
                    return False, f"recorded CP/CCP flags are wrong for summand {s.kind} {s.indices}"
        if not cert.evidence_ok:
            return False, "a recorded nonnegativity scan found a negative value"
        return True, f"decomposition of Phi^({cert.n},{cert.q}) into {len(cert.summands)} summands verified"
    return True, f"P + Q^Gamma decomposition of the witness of Phi^({cert.n},{cert.k}) verified"
