"""
Testing embeddability and recovering coordinates
================================================

Four determinant conditions decide whether a squared-distance matrix comes
from points in R^d.  When they hold, coordinates are recovered by placing a
base simplex first and locating every other vertex against it.
"""

import numpy as np

from affeq import (
    Configuration,
    EmbeddabilityError,
    distances_of,
    embed,
    menger_check,
)

# Start from explicit coordinates, so we know the right answer: a unit
# square in the plane.
square = Configuration(2, ((0, 0), (1, 0), (1, 1), (0, 1)))
D = distances_of(square)
print("squared distances:")
print(D.as_array())

# The four conditions all pass for d = 2...
report = menger_check(D, 2)
print("embeds in the plane:", report.passes)

# ...but fail for d = 1: a square needs two dimensions.  The report names
# the first violated condition and the witness subset.
report = menger_check(D, 1)
print("embeds on a line:", report.passes,
      "| failed condition:", report.first_failed_condition,
      "| witness:", report.witness_subset)

# Recover coordinates from the distances alone.  The result is a congruent
# copy of the square; the gauge (rotation, reflection, translation) is
# fixed by the base simplex, so coordinates need not match the originals.
recovered = embed(D, 2)
print("recovered points:")
print(recovered.as_array())

# The round trip reproduces the squared distances to machine precision.
gap = np.max(np.abs(distances_of(recovered).as_array() - D.as_array()))
print("max distance error:", gap)

# Asking for an impossible embedding raises an error carrying the report.
try:
    embed(D, 1)
except EmbeddabilityError as exc:
    print("embedding on a line fails:", exc)
