"""Check the symbolic identities and replay the discriminant computation for Phi^(4,1)."""

from posmaps import proof_replay_q41, rename_to_reduced, verify_identity

for name, params in [("eq6", ()), ("eq7", ()), ("eq10", (6, 2)), ("eq11", (6, 2, 1)),
                     ("mu", (8, 6)), ("lemma1_expansion", ()), ("q_special", ())]:
    check = verify_identity(name, *params)
    print(f"{name:18s} {params!s:12s} holds={check.holds}")

rep = rename_to_reduced(6, 2, 1)
print("\nrenaming convention:", rep.convention)

r = proof_replay_q41()
print("\n-D(F, p) =", r.neg_discriminant)
print("q^6 coefficient:", r.q6_coefficient)
print("literal display matches:", r.q6_matches_literal, "| after", r.matching_identification, ":", r.q6_matches_swapped)
