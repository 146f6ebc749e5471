"""
Deciding instances and reconstructing the affine map
====================================================

solve answers YES with a certificate (frameworks plus the map), NO with a
condition witness, or UNKNOWN when the search exhausts its budget without
a proof either way.
"""

import numpy as np

from affeq import Instance, solve, verify_problem1

# YES: the 3-4-5 triangle against its doubling.  Complete graphs pin the
# assignment, so no search is needed.
doubled = Instance.from_lengths(
    3, 2, {(0, 1): (3, 6), (1, 2): (4, 8), (0, 2): (5, 10)})
verdict = solve(doubled)
print("doubled triangle:", verdict.kind)
cert = verdict.certificate
print("alpha:", cert.alpha)
print("map matrix:", cert.amap.matrix, "det:", cert.amap.det())

# The certificate carries both frameworks; the verifier confirms lengths,
# the map residual, and the full affine hull.
check = verify_problem1(doubled, cert.p, cert.p_prime, cert.amap)
print("verified:", check.passed, "| map residual:", check.map_residual)

# NO: make the second triangle impossible.  The witness names the failed
# condition and an exact determinant violation.
impossible = Instance.from_lengths(
    3, 2, {(0, 1): (3, 1), (1, 2): (4, 2), (0, 2): (5, 4)})
verdict = solve(impossible)
failure = verdict.witness.report.first_failure()
print("\nimpossible second side:", verdict.kind,
      "| condition:", f"({failure.key})", "| residual:", failure.residual)

# NO by ratio mismatch: a unit square against a skewed quadrilateral whose
# triangles scale by different factors (1 and 9); a single alpha cannot
# match both.
def lengths_from(pts, qts):
    table = {}
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            a = float(np.hypot(*(np.subtract(pts[i], pts[j]))))
            b = float(np.hypot(*(np.subtract(qts[i], qts[j]))))
            table[(i, j)] = (a, b)
    return table

square = [(0, 0), (1, 0), (0, 1), (1, 1)]
skewed = [(0, 0), (1, 0), (0, 1), (2, 2)]
verdict = solve(Instance.from_lengths(4, 2, lengths_from(square, skewed)))
failure = verdict.witness.report.first_failure()
print("square vs skewed:", verdict.kind,
      "| condition:", f"({failure.key})", "| witness:", failure.witness)

# Incomplete graphs leave free squared distances; the numeric search fills
# them in.  A square with one diagonal, second side stretched vertically.
stretched = Instance.from_lengths(4, 2, {
    (0, 1): (1, 1), (1, 2): (1, 2), (2, 3): (1, 1), (0, 3): (1, 2),
    (0, 2): (2 ** 0.5, 5 ** 0.5)})
verdict = solve(stretched)
print("\nstretched square:", verdict.kind,
      "| stage:", verdict.diagnostics.get("stage"),
      "| alpha:", round(float(verdict.certificate.alpha), 6))

# UNKNOWN: one side of a quadrilateral longer than the other three
# combined.  No subset is fully pinned, so no decisive witness exists, and
# the search cannot find what does not exist.
open_cycle = Instance.from_lengths(4, 2, {
    (0, 1): (1, 1), (1, 2): (1, 1), (2, 3): (1, 1), (0, 3): (10, 10)})
verdict = solve(open_cycle)
print("overlong side:", verdict.kind, "| diagnostics:", verdict.diagnostics)
