"""Tour of the exact entanglement measures on familiar two-qubit states.

Run:  python demos/exact_measures_tour.py
"""

import numpy as np

from entmoment import (
    bell_state,
    concurrence_breakdown,
    gamma_concurrence_report,
    negativity_report,
    ppt_verdict,
    random_mixed_state,
    rng_stream,
    werner_state,
)

print("=== Bell state ===")
bell = bell_state()
br = concurrence_breakdown(bell)
print("lambdas of rho rho~ :", np.round(br.lambdas, 12))
print("concurrence         :", br.concurrence)
print("ent. of formation   :", br.ef)
neg = negativity_report(bell)
print("PT spectrum         :", np.round(neg.pt_eigenvalues, 12))
print("trace norm / N / E_c:", neg.trace_norm_pt, neg.negativity, neg.ec)

print()
print("=== Werner family: p |Phi+><Phi+| + (1-p) I/4 ===")
print("entangled iff p > 1/3; concurrence is (3p-1)/2 above the threshold")
print(f"{'p':>5} {'C':>8} {'E_f':>8} {'E_c':>8} {'verdict':>8}")
for p in (0.0, 0.2, 1 / 3, 0.5, 0.7, 0.9, 1.0):
    st = werner_state(p)
    c = concurrence_breakdown(st)
    n = negativity_report(st)
    v = ppt_verdict(st)
    print(f"{p:5.2f} {c.concurrence:8.4f} {c.ef:8.4f} {n.ec:8.4f} {v.verdict:>8}")

print()
print("=== gamma matrix shortcut ===")
print("for an entangled state the smallest eigenvalue of")
print("Sigma rho^T_A Sigma rho^T_B equals C^2 / 4:")
rng = rng_stream(2024, 0)
shown = 0
while shown < 5:
    st = random_mixed_state((2, 2), rng)
    if not ppt_verdict(st).entangled:
        continue
    shown += 1
    c = concurrence_breakdown(st).concurrence
    g = gamma_concurrence_report(st)
    print(f"  C = {c:.6f}   2 sqrt(lambda_min) = {g.concurrence_estimate:.6f}")
