"""Build a shifted map, look at its Choi matrix and biquadratic form."""

from posmaps import (
    biquadratic_of_map,
    choi_and_witness,
    classify_map,
    qi_hou_form,
    qi_hou_map,
)

m = qi_hou_map(4, 1)
choi, witness = choi_and_witness(m)

print("Choi matrix of Phi^(4,1):")
for row in choi.matrix:
    print(" ".join(f"{c!s:>3}" for c in row))

form = qi_hou_form(4, 1)
print("\nB(x, y) =", form)
print("agrees with the form read off the map:", biquadratic_of_map(m) == form)

cls = classify_map(m)
print("\ncompletely positive:", cls.completely_positive)
print("  rational witness", list(map(str, cls.cp_verdict.witness)), "value", cls.cp_verdict.value)
print("completely copositive:", cls.completely_copositive)
print("  rational witness", list(map(str, cls.ccp_verdict.witness)), "value", cls.ccp_verdict.value)
print("\ntrace of the witness W = C/n:", witness.trace())
