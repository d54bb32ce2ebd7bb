"""Exact non-extremality and decomposability certificates, plus a JSON round trip."""

import json

from posmaps import (
    certificate_to_json,
    decomposability_certificate,
    non_extremality_certificate,
    validate,
)

cert = non_extremality_certificate(6, 4, scan_restarts=200, classify=True)
print(f"Phi^(6,4) splits into {len(cert.summands)} pieces (via mu = {cert.mu.images}):")
for s in cert.summands:
    print(f"  {s.kind:12s} {s.indices}  CP={s.completely_positive}  CCP={s.completely_copositive}"
          f"  scan min {s.evidence.min_found:.1e}")

text = json.dumps(certificate_to_json(cert))
print("\nJSON size:", len(text), "bytes; validates after reload:", validate(json.loads(text)))

dec = decomposability_certificate(6)
print("\nW(Phi^(6,3)) = P + Q^Gamma with P psd:", dec.p_verdict.psd, "and Q psd:", dec.q_verdict.psd)
