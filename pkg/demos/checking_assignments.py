"""
Checking candidate assignments against the condition system
===========================================================

An instance prescribes edge lengths for two frameworks on one graph.  A
candidate solution assigns squared distances to every vertex pair on both
sides plus a ratio alpha; the checker evaluates seven condition families
and reports a worst witness for each.
"""

from fractions import Fraction

from affeq import Assignment, Instance, SquaredDistanceMatrix, check_assignment

# The 3-4-5 right triangle against its doubling: lengths 6-8-10.
inst = Instance.from_lengths(
    3, 2, {(0, 1): (3, 6), (1, 2): (4, 8), (0, 2): (5, 10)})

# On a complete graph the assignment is forced: squared distances are the
# squared lengths.  Scaling lengths by 2 scales areas by 4 and alpha, the
# squared determinant of the map, is 16.
z = SquaredDistanceMatrix([[0, 9, 25], [9, 0, 16], [25, 16, 0]])
z_prime = SquaredDistanceMatrix([[0, 36, 100], [36, 0, 64], [100, 64, 0]])
good = Assignment(z, z_prime, Fraction(16))

report = check_assignment(inst, good)
print("doubled triangle passes:", report.passed)
for entry in report.entries:
    print(f"  condition ({entry.key}) {entry.label}: "
          f"{'ok' if entry.passed else 'FAIL'}")

# Now claim alpha = 9 instead.  The determinant-ratio condition pins the
# true ratio at 16 and reports the disagreeing subset.
bad_alpha = Assignment(z, z_prime, Fraction(9))
report = check_assignment(inst, bad_alpha)
failure = report.first_failure()
print("\nwrong alpha fails condition:", f"({failure.key})", failure.label)
print("witness:", failure.witness)

# Tamper with one off-edge value instead.  Edge entries are pinned by the
# lengths, so the pinning condition catches any edit there.
z_tampered = SquaredDistanceMatrix([[0, 9, 24], [9, 0, 16], [24, 16, 0]])
report = check_assignment(inst, Assignment(z_tampered, z_prime, Fraction(16)))
failure = report.first_failure()
print("\ntampered entry fails condition:", f"({failure.key})", failure.label)
print("witness:", failure.witness, "| residual:", failure.residual)

# Second sides that violate the triangle inequality fail the sign rule
# with an exact rational witness: no alpha can ever fix this.
impossible = Instance.from_lengths(
    3, 2, {(0, 1): (3, 1), (1, 2): (4, 2), (0, 2): (5, 4)})
zp_bad = SquaredDistanceMatrix([[0, 1, 16], [1, 0, 4], [16, 4, 0]])
report = check_assignment(impossible, Assignment(z, zp_bad, Fraction(1)))
failure = report.first_failure()
print("\nimpossible lengths fail condition:", f"({failure.key})", failure.label)
print("witness:", failure.witness, "| residual:", failure.residual)
