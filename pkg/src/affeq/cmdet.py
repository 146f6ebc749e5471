"""Bordered squared-distance determinants and what they decide.

The bordered determinant of a finite point set's squared distances encodes,
through its sign and vanishing pattern, whether the distances embed
isometrically in Euclidean d-space, the simplex volume they span, and on
which side of a facet hyperplane two points lie.  Everything here is a pure
function of a :class:`SquaredDistanceMatrix`; no coordinates are needed.

Two arithmetic modes are supported throughout.  If every entry is a Python
rational (``int`` / ``Fraction``) the determinants are evaluated exactly and
comparisons are exact; otherwise evaluation is in double precision and every
comparison is relative to the scale ``M**(|I|-1)`` where ``M`` is the largest
entry magnitude over the subset (the determinant's homogeneity degree).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import InputError, PreconditionError
from .linalg import bareiss_det, bordered_det_batch, bordered_matrix, is_exact_value

DEFAULT_REL_EPS = 1e-9


class SquaredDistanceMatrix:
    """Symmetric matrix of squared distances over all vertex pairs.

    Entries may be floats or exact rationals; ``exact`` is true when every
    entry is rational, which switches all downstream determinant work to
    exact arithmetic.  Instances are immutable and safe to share between
    threads.

    ``allow_negative`` exists for candidate assignments that still have to be
    *checked* for nonnegativity rather than rejected at construction.
    """

    __slots__ = ("n", "z", "exact", "_zf")

    def __init__(self, z, *, allow_negative=False):
        rows = [tuple(row) for row in z]
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise InputError("squared-distance matrix must be square")
        for i in range(n):
            if rows[i][i] != 0:
                raise InputError(f"diagonal entry ({i},{i}) must be zero")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"matrix not symmetric at ({i},{j})")
                if not allow_negative and rows[i][j] < 0:
                    raise InputError(f"negative squared distance at ({i},{j})")
        self.n = n
        self.z = rows
        self.exact = all(is_exact_value(x) for row in rows for x in row)
        zf = np.asarray([[float(x) for x in row] for row in rows])
        zf.setflags(write=False)
        self._zf = zf

    @classmethod
    def from_pairs(cls, n, pairs, *, allow_negative=False):
        """Build from a ``{(i, j): value}`` mapping over unordered pairs."""
        z = [[0] * n for _ in range(n)]
        for (i, j), v in pairs.items():
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise InputError(f"bad pair ({i},{j}) for n={n}")
            z[i][j] = z[j][i] = v
        return cls(z, allow_negative=allow_negative)

    def as_array(self) -> np.ndarray:
        """Read-only float view of the matrix."""
        return self._zf

    def entry(self, i, j):
        return self.z[i][j]

    def max_over(self, index_set) -> float:
        """Largest entry magnitude over a subset (float, for scaling)."""
        if len(index_set) < 2:
            return 0.0
        return float(max(abs(self._zf[a, b]) for a, b in combinations(index_set, 2)))

    def scaled(self, factor) -> "SquaredDistanceMatrix":
        """Entrywise multiple; exactness is preserved for rational factors."""
        return SquaredDistanceMatrix(
            [[x * factor for x in row] for row in self.z], allow_negative=True
        )

    def min_entry(self):
        return min(x for row in self.z for x in row)

    def __eq__(self, other):
        return isinstance(other, SquaredDistanceMatrix) and self.z == other.z

    def __hash__(self):
        return hash(self.z)

    def __repr__(self):
        return f"SquaredDistanceMatrix(n={self.n}, exact={self.exact})"


@dataclass(frozen=True)
class QuadraticSlice:
    """Coefficients of the bordered determinant as a quadratic in one entry."""

    U: object
    V: object
    W: object

    def evaluate(self, t):
        return self.U * t * t + self.V * t + self.W

    def linear_form(self, t):
        """Derivative ``2*U*t + V``; its sign is the side classifier."""
        return 2 * self.U * t + self.V


@dataclass(frozen=True)
class EmbeddabilityReport:
    """Outcome of the four embeddability conditions.

    ``first_failed_condition`` is one of ``"i" | "ii" | "iii" | "iv" | "none"``;
    ``residual`` is the raw violation magnitude in determinant units.
    """

    passes: bool
    first_failed_condition: str
    witness_subset: tuple | None
    residual: float


class Side(enum.Enum):
    """Relative position of two points w.r.t. a facet hyperplane."""

    SAME_SIDE = "SameSide"
    ON_HYPERPLANE = "OnHyperplane"
    OPPOSITE_SIDE = "OppositeSide"


def _check_subset(D, index_set):
    seen = set()
    for i in index_set:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < D.n:
            raise InputError(f"index {i} out of range for n={D.n}")
        if i in seen:
            raise InputError(f"duplicate index {i} in subset")
        seen.add(int(i))


def subset_scale(D: SquaredDistanceMatrix, index_set) -> float:
    """Relative comparison scale ``M**(|I|-1)``, 1.0 for an all-zero block."""
    m = D.max_over(index_set)
    if m == 0.0:
        return 1.0
    return m ** (len(index_set) - 1)


def cmd(D: SquaredDistanceMatrix, index_set):
    """Bordered squared-distance determinant over a vertex subset.

    Exact (``Fraction``) when the matrix is exact, float otherwise.  A single
    index gives -1, a pair gives twice its squared distance.
    """
    index_set = tuple(index_set)
    if not index_set:
        raise InputError("index set must be nonempty")
    _check_subset(D, index_set)
    if D.exact:
        return bareiss_det(bordered_matrix(D.z, index_set))
    return float(bordered_det_batch(D.as_array(), [index_set])[0])


def simplex_volume_sq(D: SquaredDistanceMatrix, index_set):
    """Squared k-volume of the simplex on ``k+1`` vertices from distances only.

    Uses the normalization ``(-1)**(k+1) / (2**k * (k!)**2)`` on the bordered
    determinant; the exact-input path returns a ``Fraction``.
    """
    index_set = tuple(index_set)
    if len(index_set) < 2:
        raise InputError("simplex volume needs at least two vertices")
    k = len(index_set) - 1
    det = cmd(D, index_set)
    if D.exact:
        return Fraction((-1) ** (k + 1), 2**k * math.factorial(k) ** 2) * det
    return (-1.0) ** (k + 1) / (2**k * math.factorial(k) ** 2) * det


def _legal_sign_violation(det, npoints):
    """Signed violation of the embeddability sign rule; positive = violated."""
    return -((-1) ** npoints * det)


def menger_check(D: SquaredDistanceMatrix, d: int,
                 rel_eps: float = DEFAULT_REL_EPS) -> EmbeddabilityReport:
    """Decide isometric embeddability into R^d with full affine hull.

    Checks, in order: (i) at least d+1 points; (ii) the alternating sign rule
    on every subset of at most d+1 points; (iii) some (d+1)-subset spans,
    i.e. has a determinant of the full-rank sign; (iv) every (d+2)-subset has
    a vanishing determinant.  The first violated condition is reported with a
    witness subset.
    """
    if d < 1:
        raise InputError("dimension must be >= 1")
    n = D.n
    if n < d + 1:
        return EmbeddabilityReport(False, "i", None, float(d + 1 - n))

    exact = D.exact

    def _dets(size):
        subs = list(combinations(range(n), size))
        if exact:
            return subs, [cmd(D, I) for I in subs]
        return subs, bordered_det_batch(D.as_array(), subs)

    # (ii): sizes 1 and 2 reduce to -1 and 2z; only entry signs can fail.
    for i in range(n):
        for j in range(i + 1, n):
            v = D.entry(i, j)
            if (exact and v < 0) or (not exact and float(v) < -rel_eps * abs(float(v))):
                return EmbeddabilityReport(False, "ii", (i, j), abs(2.0 * float(v)))
    for size in range(3, d + 2):
        subs, dets = _dets(size)
        for I, det in zip(subs, dets):
            viol = _legal_sign_violation(det, size)
            if exact:
                if viol > 0:
                    return EmbeddabilityReport(False, "ii", I, float(abs(det)))
            elif viol > rel_eps * subset_scale(D, I):
                return EmbeddabilityReport(False, "ii", I, float(abs(det)))

    # (iii): a full-rank (d+1)-subset must exist.
    subs, dets = _dets(d + 1)
    best = 0.0
    found = False
    for I, det in zip(subs, dets):
        margin = (-1) ** (d + 1) * det
        if exact:
            if margin > 0:
                found = True
                break
        else:
            norm = margin / subset_scale(D, I)
            best = max(best, norm)
            if norm > rel_eps:
                found = True
                break
    if not found:
        return EmbeddabilityReport(False, "iii", None, float(best))

    # (iv): every (d+2)-subset must be flat.
    if n >= d + 2:
        subs, dets = _dets(d + 2)
        for I, det in zip(subs, dets):
            if exact:
                if det != 0:
                    return EmbeddabilityReport(False, "iv", I, float(abs(det)))
            elif abs(det) > rel_eps * subset_scale(D, I):
                return EmbeddabilityReport(False, "iv", I, float(abs(det)))

    return EmbeddabilityReport(True, "none", None, 0.0)


def quadratic_slice(D: SquaredDistanceMatrix, index_set, pair) -> QuadraticSlice:
    """View the determinant over ``index_set`` as a quadratic in one entry.

    The selected entry ``z[pair]`` appears (symmetrically) twice in the
    bordered matrix, so the determinant is a quadratic ``U*t**2 + V*t + W`` in
    its value ``t``.  Coefficients are recovered by evaluating at three
    abscissae and solving the interpolation system, which is exact for a
    quadratic; on exact input the result is exact.  ``U`` always equals minus
    the determinant over ``index_set`` minus the pair.
    """
    index_set = tuple(index_set)
    r, s = pair
    if r == s:
        raise InputError("slice pair must be two distinct indices")
    if r not in index_set or s not in index_set:
        raise InputError("slice pair must lie inside the index set")
    _check_subset(D, index_set)

    def at(t):
        z = [list(row) for row in D.z]
        z[r][s] = z[s][r] = t
        sub = SquaredDistanceMatrix(z, allow_negative=True)
        return cmd(sub, index_set)

    if D.exact:
        f0, f1, f2 = at(Fraction(0)), at(Fraction(1)), at(Fraction(2))
        U = (f0 - 2 * f1 + f2) / 2
        V = f1 - f0 - U
        return QuadraticSlice(U, V, f0)
    m = D.max_over(index_set)
    h = m if m > 0 else 1.0
    ts = (0.0, h, 2.0 * h)
    vand = np.array([[t * t, t, 1.0] for t in ts])
    fvals = np.array([at(t) for t in ts])
    U, V, W = np.linalg.solve(vand, fvals)
    return QuadraticSlice(float(U), float(V), float(W))


def side_classify(D: SquaredDistanceMatrix, index_set, pair, d: int,
                  rel_eps: float = DEFAULT_REL_EPS) -> Side:
    """Classify two points of a flat (d+2)-subset against a facet hyperplane.

    ``index_set`` must have d+2 vertices whose determinant vanishes (the set
    embeds in R^d) and the d remaining vertices ``index_set - pair`` must span
    a nondegenerate (d-1)-flat.  The sign of ``(-1)**d * (2*U*t + V)`` with
    ``t = z[pair]`` then separates the three cases; the zero case means at
    least one of the two points lies on the hyperplane.
    """
    index_set = tuple(index_set)
    if len(index_set) != d + 2:
        raise InputError(f"index set must have {d + 2} vertices for d={d}")
    r, s = pair
    delta = tuple(i for i in index_set if i != r and i != s)
    if len(delta) != d:
        raise InputError("slice pair must be two distinct members of the subset")

    exact = D.exact
    full = cmd(D, index_set)
    if exact:
        if full != 0:
            raise PreconditionError(
                f"subset determinant must vanish, got {full}")
    elif abs(full) > rel_eps * subset_scale(D, index_set):
        raise PreconditionError(
            f"subset determinant must vanish, got {full}")
    face = cmd(D, delta)
    if exact:
        if face == 0:
            raise PreconditionError("facet is degenerate (zero determinant)")
    elif abs(face) <= rel_eps * subset_scale(D, delta):
        raise PreconditionError("facet is degenerate (zero determinant)")

    sl = quadratic_slice(D, index_set, pair)
    L = sl.linear_form(D.entry(r, s))
    signed = (-1) ** d * L
    if exact:
        if signed > 0:
            return Side.SAME_SIDE
        if signed < 0:
            return Side.OPPOSITE_SIDE
        return Side.ON_HYPERPLANE
    m = D.max_over(index_set)
    scale_l = m**d if m > 0 else 1.0
    if abs(L) <= rel_eps * scale_l:
        return Side.ON_HYPERPLANE
    return Side.SAME_SIDE if signed > 0 else Side.OPPOSITE_SIDE
