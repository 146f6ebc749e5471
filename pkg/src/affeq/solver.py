"""Decision procedure: certificate search plus sound infeasibility tests.

A YES verdict always carries an explicit certificate (assignment, framework
pair, affine map) that has re-passed both the condition checker and the
equivalence verifier.  A NO verdict rests only on facts that hold for every
candidate assignment: too few vertices to span the dimension, a violated
subsystem all of whose pairs are pinned edges, the fully determined
complete-graph check, or the one-dimensional orientation oracle.  When the
numeric search merely fails to find a certificate the verdict is UNKNOWN,
never NO.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .cmdet import SquaredDistanceMatrix, cmd, subset_scale
from .embedding import Configuration, distances_of
from .errors import (
    AffeqError,
    EmbeddabilityError,
    InputError,
    InternalInconsistencyError,
    NoBaseSimplexError,
    PreconditionError,
    RatioSignError,
    ReconstructionError,
)
from .linalg import det_gradient, to_fraction
from .reconstruct import AffineMap, reconstruct, verify_problem1
from .system import (
    Assignment,
    ConditionEntry,
    ConditionReport,
    Instance,
    Tolerances,
    _jsonable,
    check_assignment,
    estimate_alpha,
    find_base_simplex,
)

YES = "YES"
NO = "NO"
UNKNOWN = "UNKNOWN"

# Invertibility margin enforced on the searched matrix.
DET_BARRIER = 1e-3
# Largest number of same-size subsets the pinned-subsystem scan will visit.
_CLIQUE_SCAN_CAP = 20000
# Components with more spanning-tree edges than this are not enumerated.
_LINE_ENUM_CAP = 18
# Orientation defect (relative to the largest length) below which a line
# placement is trusted to back a certificate, and above which no assignment
# could pass the checker's pinning and flatness tolerances.
_LINE_ACCEPT = 1e-12
_LINE_REJECT = 1e-6
# Normalized determinant size treated as decisively nonzero by the scan.
_DECISIVE = 1e-6


@dataclass(frozen=True)
class SearchBudget:
    """Multistart budget for the numeric search.

    ``target`` is the largest per-edge relative squared-length residual a
    restart may leave and still be handed to full verification.
    """

    restarts: int = 40
    iterations: int = 300
    seed: int = 0
    target: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.restarts, int) or self.restarts < 1:
            raise InputError("restarts must be a positive integer")
        if not isinstance(self.iterations, int) or self.iterations < 1:
            raise InputError("iterations must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InputError("seed must be a nonnegative integer")
        if not self.target > 0:
            raise InputError("target must be positive")


@dataclass(frozen=True)
class Certificate:
    """Explicit solution: an assignment plus frameworks realizing it."""

    assignment: Assignment
    p: Configuration
    p_prime: Configuration
    amap: AffineMap

    @property
    def alpha(self):
        return self.assignment.alpha

    def to_dict(self) -> dict:
        return {
            "alpha": _jsonable(self.alpha),
            "points": _jsonable([list(pt) for pt in self.p.points]),
            "points_prime": _jsonable([list(pt) for pt in self.p_prime.points]),
            "map": {
                "matrix": _jsonable([list(row) for row in self.amap.matrix]),
                "shift": _jsonable(list(self.amap.shift)),
            },
            "z": _jsonable([list(row) for row in self.assignment.z.z]),
            "z_prime": _jsonable([list(row) for row in self.assignment.z_prime.z]),
        }


@dataclass(frozen=True)
class InfeasibilityWitness:
    """Provenance of a NO: which sound test failed, with its report."""

    source: str
    report: ConditionReport

    def to_dict(self) -> dict:
        return {"source": self.source, "report": self.report.to_dict()}


@dataclass(frozen=True)
class Verdict:
    """Outcome of ``solve``: YES with certificate, NO with witness, or
    UNKNOWN with search diagnostics."""

    kind: str
    certificate: Optional[Certificate] = None
    witness: Optional[InfeasibilityWitness] = None
    diagnostics: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.kind not in (YES, NO, UNKNOWN):
            raise InputError(f"unknown verdict kind {self.kind!r}")
        if self.kind == YES and self.certificate is None:
            raise InputError("a YES verdict must carry a certificate")
        if self.kind == NO and self.witness is None:
            raise InputError("a NO verdict must carry a witness")

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "witness": self.witness.to_dict() if self.witness else None,
            "diagnostics": _jsonable(self.diagnostics),
        }


def _fragment(entry: ConditionEntry) -> ConditionReport:
    return ConditionReport(entries=(entry,), base_simplex=None)


def solve(inst: Instance, budget: Optional[SearchBudget] = None,
          tol: Tolerances = Tolerances(),
          fixed_left: Optional[Configuration] = None) -> Verdict:
    """Decide whether the instance admits an equivalent framework pair.

    ``fixed_left`` pins the first framework to a given placement (all its
    squared distances become prescribed) and searches only for the map; the
    placement must agree with the instance's first lengths.
    """
    if not isinstance(inst, Instance):
        raise InputError("solve expects an Instance")
    budget = SearchBudget() if budget is None else budget
    if not isinstance(budget, SearchBudget):
        raise InputError("budget must be a SearchBudget")
    if fixed_left is not None:
        _validate_fixed_left(inst, fixed_left, tol)
    if inst.n < inst.d + 1:
        entry = ConditionEntry(
            "9", False, None, math.inf,
            note=f"{inst.n} vertices cannot affinely span dimension {inst.d}")
        return Verdict(NO, witness=InfeasibilityWitness("structure", _fragment(entry)),
                       diagnostics={"stage": "structure"})
    if inst.is_complete() and fixed_left is None:
        verdict = _complete_decision(inst, tol)
        if verdict is not None:
            return verdict
    else:
        witness = _pinned_scan(inst, tol)
        if witness is not None:
            return Verdict(NO, witness=witness, diagnostics={"stage": "pinned-scan"})
        if fixed_left is not None:
            verdict = _fixed_left_precheck(inst, fixed_left)
            if verdict is not None:
                return verdict
    if inst.d == 1 and fixed_left is None:
        verdict = _line_decision(inst, tol)
        if verdict is not None:
            return verdict
    cert, diag = numeric_search(inst, budget, tol, fixed_left=fixed_left)
    if cert is not None:
        return Verdict(YES, certificate=cert, diagnostics=diag)
    return Verdict(UNKNOWN, diagnostics=diag)


def line_oracle(inst: Instance, tol: Tolerances = Tolerances(),
                budget: Optional[SearchBudget] = None) -> Verdict:
    """Decide a one-dimensional instance by orientation enumeration.

    Places every connected component on the line by choosing a direction for
    each spanning-tree edge and checking the remaining edges, then requires a
    single positive scale between the two length prescriptions.  Components
    with more tree edges than the enumeration cap fall back to the numeric
    search, which cannot return NO.
    """
    if not isinstance(inst, Instance):
        raise InputError("line_oracle expects an Instance")
    if inst.d != 1:
        raise InputError("the line oracle only handles dimension 1")
    if inst.n < 2:
        entry = ConditionEntry(
            "9", False, None, math.inf,
            note="1 vertex cannot affinely span dimension 1")
        return Verdict(NO, witness=InfeasibilityWitness("structure", _fragment(entry)),
                       diagnostics={"stage": "structure"})
    witness = _pinned_scan(inst, tol)
    if witness is not None:
        return Verdict(NO, witness=witness, diagnostics={"stage": "pinned-scan"})
    verdict = _line_decision(inst, tol)
    if verdict is not None:
        return verdict
    cert, diag = numeric_search(inst, budget, tol)
    if cert is not None:
        return Verdict(YES, certificate=cert, diagnostics=diag)
    return Verdict(UNKNOWN, diagnostics=diag)


def numeric_search(inst: Instance, budget: Optional[SearchBudget] = None,
                   tol: Tolerances = Tolerances(),
                   fixed_left: Optional[Configuration] = None):
    """Multistart least-squares search for an explicit certificate.

    Unknowns are the first framework's points and an affine map; residuals
    are the squared-length gaps on both sides plus a barrier keeping the
    matrix determinant away from zero.  Returns ``(certificate, diagnostics)``
    with ``certificate`` None when no restart produced a solution that
    re-passed the checker and verifier.  Never decides infeasibility.
    """
    budget = SearchBudget() if budget is None else budget
    n, d = inst.n, inst.d
    k = len(inst.edges)
    diag = {"stage": "numeric", "restarts_used": 0, "best_residual": math.inf}
    if n < d + 1:
        diag["note"] = "too few vertices"
        return None, diag
    if k == 0 and fixed_left is None:
        cert = _spread_certificate(inst)
        diag["best_residual"] = 0.0
        return (cert if _verified(inst, cert, tol, "auto") else None), diag

    lam = np.asarray([float(v) for v in inst.lam])
    lamp = np.asarray([float(v) for v in inst.lam_prime])
    c = float(lam.max()) if k else 1.0
    cp = float(lamp.max()) if k else 1.0
    lam2 = (lam / c) ** 2
    lamp2 = (lamp / cp) ** 2
    ii = np.asarray([e[0] for e in inst.edges], dtype=int)
    jj = np.asarray([e[1] for e in inst.edges], dtype=int)
    fixed = None if fixed_left is None else fixed_left.as_array() / c
    npos = 0 if fixed is not None else n * d
    nvar = npos + d * d + d

    def split(theta):
        p = fixed if fixed is not None else theta[:npos].reshape(n, d)
        return p, theta[npos:npos + d * d].reshape(d, d)

    def residuals(theta):
        p, B = split(theta)
        u = p[ii] - p[jj]
        w = u @ B.T
        r2 = (w * w).sum(axis=1) - lamp2
        bar = max(0.0, DET_BARRIER - abs(float(np.linalg.det(B))))
        if fixed is not None:
            return np.concatenate([r2, [bar]])
        r1 = (u * u).sum(axis=1) - lam2
        return np.concatenate([r1, r2, [bar]])

    def jacobian(theta):
        p, B = split(theta)
        u = p[ii] - p[jj]
        w = u @ B.T
        rows = (k if fixed is not None else 2 * k) + 1
        J = np.zeros((rows, nvar))
        row = 0
        if fixed is None:
            for a in range(k):
                g = 2.0 * u[a]
                J[row, ii[a] * d:(ii[a] + 1) * d] = g
                J[row, jj[a] * d:(jj[a] + 1) * d] = -g
                row += 1
        for a in range(k):
            J[row, npos:npos + d * d] = 2.0 * np.outer(w[a], u[a]).ravel()
            if fixed is None:
                g = 2.0 * (B.T @ w[a])
                J[row, ii[a] * d:(ii[a] + 1) * d] = g
                J[row, jj[a] * d:(jj[a] + 1) * d] = -g
            row += 1
        det = float(np.linalg.det(B))
        if DET_BARRIER - abs(det) > 0:
            J[row, npos:npos + d * d] = (
                -math.copysign(1.0, det) * det_gradient(B).ravel())
        return J

    for index in range(budget.restarts):
        rng = np.random.default_rng([int(budget.seed), index])
        parts = []
        if fixed is None:
            parts.append(rng.normal(size=n * d))
        parts.append((np.eye(d) + 0.5 * rng.normal(size=(d, d))).ravel())
        parts.append(0.5 * rng.normal(size=d))
        # infeasible instances drive the optimizer into degenerate regions;
        # non-finite intermediates are expected there and the acceptance
        # gate below rejects them, so keep the numeric noise quiet
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            result = least_squares(residuals, np.concatenate(parts), jac=jacobian,
                                   method="trf", xtol=1e-15, ftol=None, gtol=None,
                                   max_nfev=budget.iterations)
        diag["restarts_used"] = index + 1
        if not np.all(np.isfinite(result.x)):
            continue
        p, B = split(result.x)
        u = p[ii] - p[jj]
        w = u @ B.T
        g1 = np.abs((u * u).sum(axis=1) - lam2) / np.maximum(lam2, 1e-30)
        g2 = np.abs((w * w).sum(axis=1) - lamp2) / np.maximum(lamp2, 1e-30)
        worst = float(max(g1.max(initial=0.0), g2.max(initial=0.0)))
        diag["best_residual"] = min(diag["best_residual"], worst)
        det = float(np.linalg.det(B))
        if worst > budget.target or abs(det) < DET_BARRIER:
            continue
        p_orig = fixed_left.as_array() if fixed is not None else p * c
        B_orig = (cp / c) * B
        b_orig = cp * result.x[npos + d * d:]
        if np.linalg.matrix_rank(p_orig - p_orig[0]) < d:
            continue
        cert = _certificate_from_arrays(inst, p_orig, B_orig, b_orig)
        if _verified(inst, cert, tol, "auto"):
            return cert, diag
    return None, diag


def random_instance(seed: int, n: int, d: int, edge_density: float = 0.5):
    """Sample a feasible instance with a planted ground truth.

    Draws well-spread points, an invertible matrix, and an edge set that
    contains a spanning tree; lengths are read off the two frameworks.
    Returns ``(instance, certificate)`` where the certificate is the planted
    solution.  Deterministic in all arguments.
    """
    if not isinstance(n, int) or not isinstance(d, int) or d < 1 or n < d + 1:
        raise InputError("need integers n >= d + 1 and d >= 1")
    if not 0.0 <= edge_density <= 1.0:
        raise InputError("edge_density must lie in [0, 1]")
    rng = np.random.default_rng([int(seed), n, d, int(round(edge_density * 1024))])
    for _ in range(512):
        pts = rng.normal(size=(n, d))
        dist2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        off = dist2[np.triu_indices(n, 1)]
        # closest pair at least one percent of the farthest; tighter ratios
        # are unreachable for many points on a line
        if off.min() < 1e-4 * off.max():
            continue
        try:
            find_base_simplex(distances_of(Configuration.from_array(pts)),
                              d, rel_eps=1e-4, strict=False)
        except NoBaseSimplexError:
            continue
        break
    else:
        raise InternalInconsistencyError("failed to sample a spread configuration")
    for _ in range(256):
        B = np.eye(d) + 0.5 * rng.normal(size=(d, d))
        if 0.3 <= abs(float(np.linalg.det(B))) <= 30.0:
            break
    else:
        raise InternalInconsistencyError("failed to sample an invertible matrix")
    b = rng.normal(size=d)
    q = pts @ B.T + b

    perm = [int(v) for v in rng.permutation(n)]
    edges = set()
    for t in range(1, n):
        parent = perm[int(rng.integers(0, t))]
        edges.add(tuple(sorted((perm[t], parent))))
    for pair in itertools.combinations(range(n), 2):
        if pair not in edges and rng.random() < edge_density:
            edges.add(pair)
    lengths = {e: (math.dist(pts[e[0]], pts[e[1]]), math.dist(q[e[0]], q[e[1]]))
               for e in sorted(edges)}
    inst = Instance.from_lengths(n, d, lengths)

    p = Configuration.from_array(pts)
    p_prime = Configuration.from_array(q)
    amap = AffineMap(tuple(tuple(float(x) for x in row) for row in B),
                     tuple(float(x) for x in b))
    alpha = float(np.linalg.det(B)) ** 2
    cert = Certificate(Assignment(distances_of(p), distances_of(p_prime), alpha),
                       p, p_prime, amap)
    return inst, cert


# -- sound NO tests ---------------------------------------------------------


def _clique_matrix(subset, table) -> SquaredDistanceMatrix:
    size = len(subset)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            v = table[(subset[a], subset[b])]
            rows[a][b] = rows[b][a] = v
    return SquaredDistanceMatrix(rows)


def _pinned_scan(inst: Instance, tol: Tolerances) -> Optional[InfeasibilityWitness]:
    """Look for a subset all of whose pairs are edges that is already
    contradictory: wrong determinant sign, missing flatness, or ratios no
    single alpha can serve.  Exact lengths are decided exactly; floats only
    fail on violations far beyond the checker's tolerances."""
    n, d = inst.n, inst.d
    eset = inst.edge_set
    if not eset:
        return None
    exact = inst.exact
    lam2 = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam)}
    lamp2 = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam_prime)}
    sizes = set(range(3, min(d + 2, n) + 1))
    if 2 <= d + 1 <= n:
        sizes.add(d + 1)
    ratio_data = []
    for size in sorted(sizes):
        if math.comb(n, size) > _CLIQUE_SCAN_CAP:
            continue
        for subset in itertools.combinations(range(n), size):
            if any(pr not in eset for pr in itertools.combinations(subset, 2)):
                continue
            zsub = _clique_matrix(subset, lam2)
            zpsub = _clique_matrix(subset, lamp2)
            idx = range(size)
            pair = ((cmd(zsub, idx), subset_scale(zsub, idx), "z"),
                    (cmd(zpsub, idx), subset_scale(zpsub, idx), "z_prime"))
            if 3 <= size <= d + 1:
                for value, scale, name in pair:
                    signed = value if size % 2 == 0 else -value
                    if (signed < 0) if exact else (float(signed) / scale < -tol.rel_eps):
                        entry = ConditionEntry(
                            "8", False, {"matrix": name, "subset": list(subset)},
                            residual=abs(value),
                            note="fully pinned subset violates the sign rule")
                        return InfeasibilityWitness("pinned-subsystem", _fragment(entry))
            if size == d + 2:
                for value, scale, name in pair:
                    if (value != 0) if exact else (abs(float(value)) / scale > tol.rel_eps):
                        entry = ConditionEntry(
                            "10", False, {"matrix": name, "subset": list(subset)},
                            residual=abs(value),
                            note="fully pinned subset of d+2 vertices is not flat")
                        return InfeasibilityWitness("pinned-subsystem", _fragment(entry))
            if size == d + 1:
                ratio_data.append((subset, pair[0][0], pair[1][0], pair[0][1], pair[1][1]))
    return _ratio_consistency(ratio_data, exact, tol)


def _ratio_consistency(ratio_data, exact, tol) -> Optional[InfeasibilityWitness]:
    """All fully pinned (d+1)-subsets must admit one common positive ratio;
    in particular neither side's determinant may vanish alone."""
    if not ratio_data:
        return None
    if exact:
        for subset, u, v, _, _ in ratio_data:
            if (u == 0) != (v == 0):
                entry = ConditionEntry(
                    "11", False,
                    {"subset": list(subset),
                     "matrix": "z" if u == 0 else "z_prime"},
                    residual=abs(u) + abs(v),
                    note="determinant vanishes on one side of a pinned subset only")
                return InfeasibilityWitness("pinned-subsystem", _fragment(entry))
        anchored = [(s, u, v) for s, u, v, _, _ in ratio_data if u != 0]
        if len(anchored) >= 2:
            s0, u0, v0 = anchored[0]
            for subset, u, v in anchored[1:]:
                if v0 * u != v * u0:
                    entry = ConditionEntry(
                        "11", False,
                        {"subset": list(subset), "ratio": Fraction(v, u),
                         "other_subset": list(s0), "other_ratio": Fraction(v0, u0)},
                        residual=abs(Fraction(v, u) - Fraction(v0, u0)),
                        note="pinned subsets demand incompatible ratios")
                    return InfeasibilityWitness("pinned-subsystem", _fragment(entry))
        return None
    if len(ratio_data) < 2:
        return None
    decisive = []
    for subset, u, v, su, sv in ratio_data:
        if abs(float(u)) / su > _DECISIVE and abs(float(v)) / sv > _DECISIVE:
            decisive.append((float(v) / float(u), subset))
    if len(decisive) >= 2:
        lo = min(decisive)
        hi = max(decisive)
        if hi[0] - lo[0] > 3.0 * tol.alpha_rel * max(abs(hi[0]), abs(lo[0])):
            entry = ConditionEntry(
                "11", False,
                {"subset": list(hi[1]), "ratio": hi[0],
                 "other_subset": list(lo[1]), "other_ratio": lo[0]},
                residual=hi[0] - lo[0],
                note="pinned subsets demand incompatible ratios")
            return InfeasibilityWitness("pinned-subsystem", _fragment(entry))
    return None


def _complete_decision(inst: Instance, tol: Tolerances) -> Optional[Verdict]:
    """On a complete graph the assignment is fully pinned, so the checker
    decides; a pass is upgraded to YES by reconstruction.

    Exact lengths stay exact end to end; float lengths stay float so the
    downstream embedding applies tolerance rather than exact flatness tests.
    """
    exact = inst.exact
    if exact:
        lam2 = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam)}
        lamp2 = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam_prime)}
    else:
        lam2 = {e: float(v) ** 2 for e, v in zip(inst.edges, inst.lam)}
        lamp2 = {e: float(v) ** 2 for e, v in zip(inst.edges, inst.lam_prime)}
    z = SquaredDistanceMatrix.from_pairs(inst.n, lam2)
    z_prime = SquaredDistanceMatrix.from_pairs(inst.n, lamp2)
    decisions = "auto" if exact else "tolerant"
    alpha = Fraction(1) if exact else 1.0  # placeholder if no ratio is estimable
    try:
        base = find_base_simplex(z, inst.d, rel_eps=tol.rel_eps, strict=exact)
        alpha = estimate_alpha(z, z_prime, base, rel_eps=tol.rel_eps)
    except NoBaseSimplexError:
        if exact:
            entry = ConditionEntry(
                "9", False, None, 0,
                note="every subset of d+1 vertices is degenerate under the pinned lengths")
            return Verdict(NO,
                           witness=InfeasibilityWitness("complete-pinned", _fragment(entry)),
                           diagnostics={"stage": "complete"})
        # float data: let the checker report the degeneracy with margins
    except RatioSignError:
        pass  # the checker localizes the sign or vanishing defect
    assignment = Assignment(z, z_prime, alpha)
    report = check_assignment(inst, assignment, tol, decisions=decisions)
    if not report.passed:
        return Verdict(NO, witness=InfeasibilityWitness("complete-pinned", report),
                       diagnostics={"stage": "complete"})
    try:
        p, p_prime, amap = reconstruct(inst, assignment, tol, decisions=decisions)
    except (EmbeddabilityError, ReconstructionError, PreconditionError, NoBaseSimplexError):
        return None
    cert = Certificate(assignment, p, p_prime, amap)
    if not verify_problem1(inst, p, p_prime, amap).passed:
        return None
    return Verdict(YES, certificate=cert, diagnostics={"stage": "complete"})


def _validate_fixed_left(inst: Instance, config: Configuration, tol: Tolerances):
    if not isinstance(config, Configuration):
        raise InputError("fixed_left must be a Configuration")
    if config.dim != inst.d or config.n != inst.n:
        raise InputError("fixed framework shape disagrees with the instance")
    z = distances_of(config)
    exact = inst.exact and config.exact
    for e, lam in zip(inst.edges, inst.lam):
        have = z.entry(*e)
        want = to_fraction(lam) ** 2 if exact else float(lam) ** 2
        if exact:
            bad = have != want
        else:
            bad = abs(float(have) - want) > tol.rel_eps * max(abs(float(have)), want)
        if bad:
            raise InputError(
                f"fixed framework violates the pinned length on edge {e}")


def _fixed_left_precheck(inst: Instance, config: Configuration) -> Optional[Verdict]:
    """With the first framework pinned, its distance data must still admit a
    spanning base simplex; decided exactly on the given coordinates."""
    z = distances_of(config)
    exact_rows = [[to_fraction(v) for v in row] for row in z.z]
    try:
        find_base_simplex(SquaredDistanceMatrix(exact_rows), inst.d, strict=True)
    except NoBaseSimplexError:
        entry = ConditionEntry(
            "9", False, {"matrix": "z"}, 0,
            note="the fixed framework does not affinely span the dimension")
        return Verdict(NO, witness=InfeasibilityWitness("fixed-left", _fragment(entry)),
                       diagnostics={"stage": "fixed-left"})
    return None


# -- one-dimensional oracle -------------------------------------------------


def _line_decision(inst: Instance, tol: Tolerances) -> Optional[Verdict]:
    """Enumerate per-component edge orientations on the line.

    Returns a verdict only when decisive: YES when every component places
    with (near-)zero defect and the length ratio is (near-)constant, NO when
    the best placement of some component is far outside any assignment the
    checker could accept.  Returns None when a component is too large to
    enumerate or the defect lands in the undecidable gray band.
    """
    n = inst.n
    exact = inst.exact
    lam = {e: to_fraction(v) for e, v in zip(inst.edges, inst.lam)}
    lam_prime = {e: to_fraction(v) for e, v in zip(inst.edges, inst.lam_prime)}
    scale = max((float(v) for v in lam.values()), default=1.0)

    adj = {i: [] for i in range(n)}
    for i, j in inst.edges:
        adj[i].append(j)
        adj[j].append(i)

    positions = [Fraction(0)] * n
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        comp, tree, queue = [root], [], deque([root])
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                if not seen[j]:
                    seen[j] = True
                    tree.append((j, i))
                    comp.append(j)
                    queue.append(j)
        if len(tree) > _LINE_ENUM_CAP:
            return None
        compset = set(comp)
        treeset = {tuple(sorted(t)) for t in tree}
        nontree = [e for e in inst.edges
                   if e[0] in compset and e[1] in compset and e not in treeset]
        best = None
        for signs in itertools.product((1, -1), repeat=len(tree)):
            x = {root: Fraction(0)}
            for (child, parent), sign in zip(tree, signs):
                x[child] = x[parent] + sign * lam[tuple(sorted((child, parent)))]
            worst, worst_edge = Fraction(0), None
            for e in nontree:
                gap = abs(abs(x[e[0]] - x[e[1]]) - lam[e])
                if gap > worst:
                    worst, worst_edge = gap, e
            wf = float(worst)
            if best is None or wf < best[0]:
                best = (wf, x, worst_edge)
            if wf == 0.0 or (not exact and wf <= _LINE_ACCEPT * scale):
                break
        defect, x, worst_edge = best
        good = defect == 0.0 if exact else defect <= _LINE_ACCEPT * scale
        if not good:
            if exact or defect > _LINE_REJECT * scale:
                entry = ConditionEntry(
                    "10", False,
                    {"matrix": "z", "component": sorted(comp),
                     "edge": list(worst_edge) if worst_edge else None},
                    residual=defect,
                    note="no placement of the component on a line meets every pinned length")
                return Verdict(NO, witness=InfeasibilityWitness("line-oracle", _fragment(entry)),
                               diagnostics={"stage": "line-oracle"})
            return None  # gray band: leave to the numeric search
        for i, value in x.items():
            positions[i] = value

    if inst.edges:
        ref = max(range(len(inst.edges)), key=lambda t: float(inst.lam[t]))
        s = lam_prime[inst.edges[ref]] / lam[inst.edges[ref]]
        if not exact:
            ratios = [(float(lam_prime[e]) / float(lam[e])) ** 2 for e in inst.edges]
            if max(ratios) - min(ratios) > 0.05 * tol.rel_eps * max(ratios):
                return None  # ratio drift too close to the checker's limits
    else:
        s = Fraction(1)
        positions = [Fraction(i) for i in range(n)]

    cert = _line_certificate(inst, positions, s)
    decisions = "auto" if exact else "tolerant"
    if not _verified(inst, cert, tol, decisions):
        raise InternalInconsistencyError(
            "line placement found but its certificate failed verification")
    return Verdict(YES, certificate=cert, diagnostics={"stage": "line-oracle"})


def _line_certificate(inst: Instance, positions, s) -> Certificate:
    n = inst.n
    eset = inst.edge_set
    lam2 = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam)}
    lamp2 = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam_prime)}
    s2 = s * s
    z_rows = [[Fraction(0)] * n for _ in range(n)]
    zp_rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in eset:
                a, b = lam2[(i, j)], lamp2[(i, j)]
            else:
                gap = (positions[i] - positions[j]) ** 2
                a, b = gap, s2 * gap
            z_rows[i][j] = z_rows[j][i] = a
            zp_rows[i][j] = zp_rows[j][i] = b
    assignment = Assignment(SquaredDistanceMatrix(z_rows),
                            SquaredDistanceMatrix(zp_rows), s2)
    p = Configuration(1, [(x,) for x in positions])
    p_prime = Configuration(1, [(s * x,) for x in positions])
    amap = AffineMap(((s,),), (Fraction(0),))
    return Certificate(assignment, p, p_prime, amap)


# -- certificate assembly and verification ----------------------------------


def _spread_certificate(inst: Instance) -> Certificate:
    """Any full-hull placement works when nothing is pinned."""
    n, d = inst.n, inst.d
    pts = [[0] * d for _ in range(n)]
    for i in range(1, n):
        if i <= d:
            pts[i][i - 1] = 1
        else:
            pts[i][0] = i - d + 1
    p = Configuration(d, [tuple(row) for row in pts])
    z = distances_of(p)
    return Certificate(Assignment(z, z, 1), p, p, AffineMap.identity(d))


def _certificate_from_arrays(inst: Instance, p_arr, B, b) -> Certificate:
    q_arr = p_arr @ B.T + b
    p = Configuration.from_array(p_arr)
    p_prime = Configuration.from_array(q_arr)
    amap = AffineMap(tuple(tuple(float(x) for x in row) for row in B),
                     tuple(float(x) for x in b))
    alpha = float(np.linalg.det(B)) ** 2
    return Certificate(Assignment(distances_of(p), distances_of(p_prime), alpha),
                       p, p_prime, amap)


def _verified(inst: Instance, cert: Certificate, tol: Tolerances,
              decisions: str) -> bool:
    try:
        report = check_assignment(inst, cert.assignment, tol, decisions=decisions)
        if not report.passed:
            return False
        return verify_problem1(inst, cert.p, cert.p_prime, cert.amap).passed
    except AffeqError:
        return False
