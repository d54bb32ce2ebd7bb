import json

import pytest

from posmaps.certificates import (
    CertificateError,
    DecompositionCertificate,
    Summand,
    certificate_from_json,
    certificate_to_json,
    decomposability_certificate,
    divisor_decomposition,
    non_extremality_certificate,
    validate,
)
from posmaps.forms import cross_square, qi_hou_form
from posmaps.maps import ParameterError, choi_and_witness, partial_transpose, qi_hou_map


def test_divisor_decomposition_counts():
    assert len(divisor_decomposition(4, 2).summands) == 2 + 4
    cert = divisor_decomposition(6, 2)
    kinds = [s.kind for s in cert.summands]
    assert kinds.count("block_term") == 2 and kinds.count("cross_square") == 9
    cert = divisor_decomposition(6, 3)
    kinds = [s.kind for s in cert.summands]
    assert kinds.count("block_term") == 3 and kinds.count("cross_square") == 12


def test_divisor_decomposition_4_2_explicit():
    cert = divisor_decomposition(4, 2)
    reg = cert.target.registry
    x = {i: reg.var(f"x{i}") for i in range(1, 5)}
    y = {i: reg.var(f"y{i}") for i in range(1, 5)}
    expected = (x[1] * y[3] - x[3] * y[1]) ** 2 + (x[2] * y[4] - x[4] * y[2]) ** 2
    for i, j in [(1, 2), (1, 4), (2, 3), (3, 4)]:
        expected = expected + (x[i] * y[i] - x[j] * y[j]) ** 2
    assert expected == qi_hou_form(4, 2).poly


@pytest.mark.parametrize("n,k", [(6, 4), (5, 2), (4, 1)])
def test_divisor_decomposition_parameter_errors(n, k):
    with pytest.raises(ParameterError):
        divisor_decomposition(n, k)


def test_summand_classes_for_4_2():
    cert = non_extremality_certificate(4, 2, scan_restarts=0, classify=True)
    blocks = [s for s in cert.summands if s.kind == "block_term"]
    squares = [s for s in cert.summands if s.kind == "cross_square"]
    assert len(blocks) == 2 and len(squares) == 4
    assert all(s.completely_copositive and not s.completely_positive for s in blocks)
    assert all(s.completely_positive for s in squares)


@pytest.mark.parametrize("n,q", [(6, 2), (6, 3), (6, 4), (8, 6)])
def test_non_extremality_maps_sum_exactly(n, q):
    cert = non_extremality_certificate(n, q, scan_restarts=0)
    total = cert.summands[0].map
    for s in cert.summands[1:]:
        total = total + s.map
    assert total == qi_hou_map(n, q)
    assert not any(s.map.is_scalar_multiple_of(qi_hou_map(n, q)) for s in cert.summands)


def test_non_extremality_rejects_coprime():
    with pytest.raises(ParameterError, match="gcd"):
        non_extremality_certificate(5, 2)


def test_certificate_refuses_a_wrong_sum():
    good = divisor_decomposition(4, 2, with_maps=False)
    broken = good.summands[:-1] + (Summand(cross_square(4, 1, 3), "cross_square", (1, 3)),)
    with pytest.raises(CertificateError):
        DecompositionCertificate(4, 2, 2, good.target, broken)


def test_certificate_refuses_a_single_summand():
    target = qi_hou_form(4, 2)
    with pytest.raises(CertificateError):
        DecompositionCertificate(4, 2, 2, target, (Summand(target, "block_term", (1,)),))


@pytest.mark.parametrize("n", [4, 6])
def test_decomposability(n):
    cert = decomposability_certificate(n)
    _, witness = choi_and_witness(qi_hou_map(n, n // 2))
    assert cert.p + partial_transpose(cert.q) == witness
    assert cert.p_verdict.psd and cert.q_verdict.psd


@pytest.mark.parametrize("n", [3, 5, 2])
def test_decomposability_rejects_odd(n):
    with pytest.raises(ParameterError):
        decomposability_certificate(n)


def test_json_round_trip_and_validate():
    cert = non_extremality_certificate(6, 4, scan_restarts=50, classify=True)
    data = json.loads(json.dumps(certificate_to_json(cert)))
    assert data["schema"] == 1
    ok, msg = validate(data)
    assert ok, msg
    again = certificate_from_json(data)
    assert [s.form for s in again.summands] == [s.form for s in cert.summands]

    d = json.loads(json.dumps(certificate_to_json(decomposability_certificate(4))))
    assert validate(d)[0]


def test_validate_catches_tampering():
    data = certificate_to_json(non_extremality_certificate(4, 2, scan_restarts=0))
    data["summands"][0]["form"]["text"] = "2*x1^2*y3^2 - 2*x1*x3*y1*y3 + x3^2*y1^2"
    ok, _ = validate(data)
    assert not ok

    data = certificate_to_json(non_extremality_certificate(4, 2, scan_restarts=0, classify=True))
    data["summands"][0]["completely_positive"] = True
    assert not validate(data)[0]

    data = certificate_to_json(decomposability_certificate(4))
    data["P"]["entries"][0][0] = "5"
    assert not validate(data)[0]

    assert not validate({"schema": 99})[0]
