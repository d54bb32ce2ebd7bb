"""Command-line entry point: ``posmaps <group> <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certificates import (
    CertificateError,
    certificate_to_json,
    decomposability_certificate,
    non_extremality_certificate,
    validate,
)
from .forms import qi_hou_form
from .identities import proof_replay_q41, verify_identity
from .maps import ParameterError, choi_and_witness, classify_map, qi_hou_map
from .nonneg import nonnegativity_scan
from .serialize import SCHEMA_VERSION, block_matrix_to_json, rational_to_json
from .spanscan import DEFAULT_RANK_TOL, DEFAULT_ZERO_TOL, span_report

__all__ = ["main", "dispatch", "build_parser"]

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
DEFAULT_RESTARTS = 10_000

# CLI spelling -> (identity name, number of integer parameters)
VERIFY_NAMES = {
    "eq6": ("eq6", 0),
    "eq7": ("eq7", 0),
    "cyclic": ("cyclic", 0),
    "lemma1": ("lemma1_expansion", 0),
    "qspecial": ("q_special", 0),
    "octic-zero": ("octic_zero", 0),
    "eq2": ("eq2", 2),
    "eq10": ("eq10", 2),
    "eq11": ("eq11", 3),
    "mu": ("mu", 2),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="posmaps", description=__doc__.splitlines()[0],
                     epilog="Scans use POSMAPS_THREADS worker threads (default 1). "
                            "Exit codes: 0 success, 1 verification failed, 2 usage error.",
                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    # output options are accepted before or after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS,
                        help="write the result to this file instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS,
                        help="json (default) or a human-readable rendering")
    parser.add_argument("--output", "-o", default=None, help="write the result to this file instead of stdout")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(parent, name, help_text):
        return parent.add_parser(name, help=help_text, parents=[common],
                                 formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    mp = sub(groups, "map", "build or classify Qi-Hou maps").add_subparsers(dest="command", required=True)
    for name, text in [("build", "Choi matrix and witness"), ("classify", "exact CP/CCP verdicts")]:
        p = sub(mp, name, text)
        p.add_argument("n", type=int)
        p.add_argument("k", type=int)

    fm = sub(groups, "form", "biquadratic forms").add_subparsers(dest="command", required=True)
    p = sub(fm, "build", "closed form of y^T Phi^(n,k)(x x^T) y")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)

    p = sub(groups, "verify", "check an exact identity (exit 0 iff the residual is zero)")
    p.add_argument("identity", choices=sorted(VERIFY_NAMES))
    p.add_argument("params", type=int, nargs="*", help="n k for eq2/eq10, n k d for eq11, n q for mu")

    ct = sub(groups, "certify", "emit certificates").add_subparsers(dest="command", required=True)
    p = sub(ct, "non-extremal", "decomposition of Phi^(n,q) into positive maps")
    p.add_argument("n", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--restarts", type=int, default=1000, help="nonnegativity scan restarts per summand")
    p.add_argument("--seed", type=int, default=0, help="restart r uses seed + r")
    p.add_argument("--classify", action="store_true", help="record exact CP/CCP verdicts of the summand maps")
    p = sub(ct, "decomposable", "P + Q^Gamma splitting of the witness of Phi^(n, n/2)")
    p.add_argument("n", type=int)

    rp = sub(groups, "replay", "symbolic proof replays").add_subparsers(dest="command", required=True)
    sub(rp, "q41", "discriminant computation for Q_(4,1)")

    sc = sub(groups, "scan", "numerical evidence").add_subparsers(dest="command", required=True)
    p = sub(sc, "spanning", "rank of zero product vectors of the witness of Phi^(n,k)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="see-saw restarts")
    p.add_argument("--seed", type=int, default=0, help="restart r uses seed + r")
    p.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL, help="largest expectation kept as a zero")
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL,
                   help="singular value threshold relative to the largest one")
    p.add_argument("--gamma", action="store_true", help="scan the partial transpose of the witness")
    p.add_argument("--real", action="store_true", help="restrict the search to real vectors")
    p = sub(sc, "nonneg", "multistart minimum of the Qi-Hou form on spheres")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="gradient descent restarts")
    p.add_argument("--seed", type=int, default=0, help="restart r uses seed + r")
    p.add_argument("--tol", type=float, default=1e-9, help="values above -tol count as nonnegative")

    p = sub(groups, "validate", "re-check a certificate JSON file from scratch")
    p.add_argument("file")
    return parser


# -- commands ------------------------------------------------------------------
# Each returns (exit code, JSON payload, text rendering).


def _map_build(a):
    choi, witness = choi_and_witness(qi_hou_map(a.n, a.k))
    data = {"n": a.n, "k": a.k, "choi": block_matrix_to_json(choi), "witness": block_matrix_to_json(witness)}
    return EXIT_OK, data, "\n".join(" ".join(f"{c!s:>4}" for c in row) for row in choi.matrix)


def _map_classify(a):
    verdict = classify_map(qi_hou_map(a.n, a.k))
    data = {"n": a.n, "k": a.k}
    lines = []
    for label, v in [("completely_positive", verdict.cp_verdict), ("completely_copositive", verdict.ccp_verdict)]:
        entry = {"verdict": v.psd}
        if not v.psd:
            entry["negative_vector"] = [rational_to_json(c) for c in v.witness]
            entry["value"] = rational_to_json(v.value)
        data[label] = entry
        lines.append(f"{label}: {v.psd}" + ("" if v.psd else f" (v^T M v = {v.value})"))
    return EXIT_OK, data, "\n".join(lines)


def _form_build(a):
    form = qi_hou_form(a.n, a.k)
    return EXIT_OK, {"n": a.n, "k": a.k, "form": str(form)}, str(form)


def _verify(a):
    name, arity = VERIFY_NAMES[a.identity]
    if len(a.params) != arity:
        raise UsageError(f"verify {a.identity} takes {arity} integer parameters, got {len(a.params)}")
    check = verify_identity(name, *a.params)
    data = {"identity": name, "params": list(a.params), "holds": check.holds, "parts": check.parts,
            "residual": str(check.residual)}
    text = f"{name}{tuple(a.params) if a.params else ''}: {'holds' if check.holds else 'FAILS'}"
    if not check.holds:
        text += f"\nresidual: {check.residual}"
        print(f"residual: {check.residual}", file=sys.stderr)
    return (EXIT_OK if check.holds else EXIT_FAILED), data, text


def _certify_non_extremal(a):
    cert = non_extremality_certificate(a.n, a.q, scan_restarts=a.restarts, seed=a.seed, classify=a.classify)
    data = certificate_to_json(cert)
    lines = [f"Phi^({a.n},{a.q}) = sum of {len(cert.summands)} maps (exact)"]
    lines += [f"  {s.kind} {s.indices}: {s.form}" for s in cert.summands]
    return (EXIT_OK if cert.evidence_ok else EXIT_FAILED), data, "\n".join(lines)


def _certify_decomposable(a):
    cert = decomposability_certificate(a.n)
    text = f"W = P + Q^Gamma for Phi^({cert.n},{cert.k}); P psd: {cert.p_verdict.psd}, Q psd: {cert.q_verdict.psd}"
    return EXIT_OK, certificate_to_json(cert), text


def _replay(a):
    report = proof_replay_q41()
    data = report.to_dict()
    text = (f"-D(F,p) = {report.neg_discriminant}\n"
            f"q^6 coefficient of D(-D(F,p), s) = {report.q6_coefficient}\n"
            f"matches the displayed coefficient under: {report.matching_identification}")
    return EXIT_OK, data, text


def _scan_spanning(a):
    if a.restarts < 1:
        raise UsageError("--restarts must be at least 1")
    _, witness = choi_and_witness(qi_hou_map(a.n, a.k))
    report = span_report(witness, restarts=a.restarts, zero_tol=a.zero_tol, rank_tol=a.rank_tol,
                         seed=a.seed, use_partial_transpose=a.gamma, real=a.real)
    data = {"n": a.n, "k": a.k, **report.to_dict()}
    target = "W^Gamma" if a.gamma else "W"
    text = (f"{target} of Phi^({a.n},{a.k}): {report.zero_count} zeros, {report.distinct_zeros} distinct, "
            f"rank {report.rank}/{report.dimension}, spanning: {report.has_spanning} (evidence only)")
    return EXIT_OK, data, text


def _scan_nonneg(a):
    if a.restarts < 1:
        raise UsageError("--restarts must be at least 1")
    result = nonnegativity_scan(qi_hou_form(a.n, a.k), restarts=a.restarts, tol=a.tol, seed=a.seed)
    data = {"n": a.n, "k": a.k, **result.to_dict()}
    text = f"min found {result.min_found:.3e}; nonnegative on all restarts: {result.all_nonneg_evidence}"
    return (EXIT_OK if result.all_nonneg_evidence else EXIT_FAILED), data, text


def _validate(a):
    path = Path(a.file)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        return EXIT_FAILED, {"valid": False, "message": f"not JSON: {exc}"}, f"invalid: not JSON: {exc}"
    ok, message = validate(data)
    return (EXIT_OK if ok else EXIT_FAILED), {"valid": ok, "message": message}, message


COMMANDS = {
    ("map", "build"): _map_build,
    ("map", "classify"): _map_classify,
    ("form", "build"): _form_build,
    ("verify", None): _verify,
    ("certify", "non-extremal"): _certify_non_extremal,
    ("certify", "decomposable"): _certify_decomposable,
    ("replay", "q41"): _replay,
    ("scan", "spanning"): _scan_spanning,
    ("scan", "nonneg"): _scan_nonneg,
    ("validate", None): _validate,
}


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = COMMANDS[(args.group, getattr(args, "command", None))]
        code, data, text = handler(args)
    except UsageError as exc:
        print(f"posmaps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, CertificateError) as exc:
        print(f"posmaps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        out = json.dumps({"schema": SCHEMA_VERSION, "command": f"{args.group} {getattr(args, 'command', '') or ''}".strip(),
                          **data}, indent=2)
    else:
        out = text
    if args.output:
        Path(args.output).write_text(out + "\n", encoding="utf-8")
    else:
        print(out)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
