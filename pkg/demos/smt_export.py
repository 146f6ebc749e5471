"""
Exporting the feasibility system for external solvers
=====================================================

Deciding an instance is a question in nonlinear real arithmetic.  The
export writes the full condition system as SMT-LIB text: pinned squared
distances become exact rational constants, and only the free pairs plus
the ratio alpha remain as variables.
"""

from affeq import Instance, export_smt

# A path on three vertices leaves exactly one pair (0, 2) unprescribed,
# so the export declares one variable per side plus alpha.
path = Instance.from_lengths(3, 2, {(0, 1): (3, 6), (1, 2): (4, 8)})
text = export_smt(path)
print(text)

# The assertions, in order: nonnegativity of the free variables and of
# alpha, the sign rule on three-vertex subsets, the determinant-ratio
# equation tying the two sides together, and a disjunction requiring some
# nondegenerate base simplex whose side tests match.
#
# A model (z_0_2 = 25, zp_0_2 = 100, alpha = 16) is exactly the doubled
# 3-4-5 triangle; feeding those values back as an assignment passes the
# checker, which is the round trip an external solver would complete.

# Larger graphs grow quickly: each extra non-edge adds two variables, and
# subsets of d + 2 vertices add flatness equations.
square = Instance.from_lengths(4, 2, {
    (0, 1): (1, 2), (1, 2): (1, 2), (2, 3): (1, 2), (0, 3): (1, 2)})
lines = export_smt(square).splitlines()
declares = [l for l in lines if l.startswith("(declare")]
asserts = [l for l in lines if l.startswith("(assert")]
print(f"four-cycle export: {len(declares)} variables, {len(asserts)} assertions")
