"""Numerical scans: nonnegativity on spheres and the span of zero product vectors.

Both are evidence only.  Set POSMAPS_THREADS to change the worker count;
the results do not depend on it.
"""

import numpy as np

from posmaps import choi_and_witness, nonnegativity_scan, qi_hou_form, qi_hou_map, span_report

for n, k in [(3, 1), (4, 1), (5, 2)]:
    r = nonnegativity_scan(qi_hou_form(n, k), restarts=2000, seed=0)
    print(f"min of B_Phi^({n},{k}) on S x S over 2000 restarts: {r.min_found:.2e}")

_, w = choi_and_witness(qi_hou_map(4, 1))
for gamma in (False, True):
    rep = span_report(w, restarts=5000, seed=0, use_partial_transpose=gamma)
    name = "W^Gamma" if gamma else "W"
    sv = np.array(rep.singular_values)
    print(f"\n{name}: {rep.distinct_zeros} distinct zeros, rank {rep.rank} of {rep.dimension}")
    print("  smallest kept singular values:", np.round(sv[max(0, rep.rank - 3):rep.rank + 1], 8))
