"""
Determinants and simplex volumes from squared distances
=======================================================

A squared-distance matrix determines every simplex volume without any
coordinates.  This script evaluates the bordered determinant on small
examples, exactly on rationals, and reads volumes off its normalization.
"""

from fractions import Fraction

from affeq import SquaredDistanceMatrix, cmd, simplex_volume_sq

# The 3-4-5 right triangle, stored as squared distances.  Integer entries
# keep every determinant exact.
triangle = SquaredDistanceMatrix([
    [0, 9, 25],
    [9, 0, 16],
    [25, 16, 0],
])

# The full determinant of a realizable triangle is negative; its magnitude
# encodes the squared area.
det = cmd(triangle, (0, 1, 2))
print("triangle determinant:", det)

# Dividing by 2^k (k!)^2 with k = 2 turns the determinant into the squared
# area: the 3-4-5 triangle has area 6, so we expect exactly 36.
area_sq = simplex_volume_sq(triangle, (0, 1, 2))
print("squared area:", area_sq)

# Two boundary cases of the same formula: a pair of vertices gives twice
# the squared distance, and a single vertex always gives -1.
print("pair determinant:", cmd(triangle, (0, 1)), "= 2 * 9")
print("single-vertex determinant:", cmd(triangle, (0,)))

# Rational entries stay rational all the way through: an equilateral
# triangle with side 1/2 has squared area 3/256, exactly.
small = SquaredDistanceMatrix([
    [0, Fraction(1, 4), Fraction(1, 4)],
    [Fraction(1, 4), 0, Fraction(1, 4)],
    [Fraction(1, 4), Fraction(1, 4), 0],
])
print("rational squared area:", simplex_volume_sq(small, (0, 1, 2)))

# A degenerate "triangle" whose sides add up exactly (1 + 2 = 3) has zero
# area: its points are collinear and the determinant vanishes.
flat = SquaredDistanceMatrix([
    [0, 1, 9],
    [1, 0, 4],
    [9, 4, 0],
])
print("collinear determinant:", cmd(flat, (0, 1, 2)))

# Violating the triangle inequality flips the determinant's sign; no point
# set at any dimension produces these distances.
impossible = SquaredDistanceMatrix([
    [0, 1, 16],
    [1, 0, 4],
    [16, 4, 0],
])
print("impossible-triangle determinant:", cmd(impossible, (0, 1, 2)))
