"""Export of the feasibility system as quantifier-free nonlinear real
arithmetic (SMT-LIB 2, logic QF_NRA).

Pinned squared lengths are substituted as rational constants, so the
exported problem ranges only over the free (non-edge) squared distances of
both sides plus the ratio ``alpha``.  Bordered determinants are expanded
symbolically into polynomials over those variables; each constraint family
member becomes one assertion:

  * nonnegativity of every free variable and positivity of ``alpha``;
  * the alternating sign rule on subsets of at most d+1 vertices;
  * flatness of every subset of d+2 vertices;
  * the common-ratio equation per (d+1)-subset;
  * one disjunction over candidate base simplices, each disjunct combining
    strict nondegeneracy with the matched side-classification sign tests.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import InputError
from .linalg import to_fraction
from .system import Instance

_CONST_ZERO = ("const", Fraction(0))
_CONST_ONE = ("const", Fraction(1))


def variable_name(side: str, i: int, j: int) -> str:
    """SMT variable for the squared distance of a free pair."""
    if side not in ("z", "z_prime"):
        raise InputError("side must be 'z' or 'z_prime'")
    i, j = min(i, j), max(i, j)
    prefix = "z" if side == "z" else "zp"
    return f"{prefix}_{i}_{j}"


# -- polynomials as {monomial tuple: Fraction} -------------------------------


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for mono, coeff in b.items():
        c = out.get(mono, Fraction(0)) + coeff
        if c:
            out[mono] = c
        else:
            out.pop(mono, None)
    return out


def _pmul_entry(p: dict, entry) -> dict:
    kind, payload = entry
    out = {}
    if kind == "const":
        if payload == 0:
            return out
        for mono, coeff in p.items():
            out[mono] = coeff * payload
        return out
    for mono, coeff in p.items():
        out[tuple(sorted(mono + (payload,)))] = coeff
    return out


def _pneg(p: dict) -> dict:
    return {mono: -coeff for mono, coeff in p.items()}


def _derivative(p: dict, var: str) -> dict:
    out = {}
    for mono, coeff in p.items():
        count = mono.count(var)
        if not count:
            continue
        reduced = list(mono)
        reduced.remove(var)
        key = tuple(reduced)
        c = out.get(key, Fraction(0)) + coeff * count
        if c:
            out[key] = c
        else:
            out.pop(key, None)
    return out


def _substitute(p: dict, var: str, entry) -> dict:
    out = {}
    for mono, coeff in p.items():
        count = mono.count(var)
        rest = tuple(x for x in mono if x != var)
        term = {rest: coeff}
        for _ in range(count):
            term = _pmul_entry(term, entry)
        out = _padd(out, term)
    return out


def _det(rows) -> dict:
    """Determinant of a matrix of ('const', Fraction) / ('var', name)
    entries, by first-row expansion with memoized minors."""
    size = len(rows)
    memo = {}

    def minor(r, cols):
        if r == size:
            return {(): Fraction(1)}
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = {}
        for idx, c in enumerate(cols):
            entry = rows[r][c]
            if entry[0] == "const" and entry[1] == 0:
                continue
            term = _pmul_entry(minor(r + 1, cols[:idx] + cols[idx + 1:]), entry)
            total = _padd(total, _pneg(term) if idx % 2 else term)
        memo[key] = total
        return total

    return minor(0, tuple(range(size)))


def _cmd_poly(subset, entry_fn) -> dict:
    """Bordered determinant of the subset as a polynomial."""
    k = len(subset)
    rows = [[_CONST_ZERO] + [_CONST_ONE] * k]
    for a, i in enumerate(subset):
        row = [_CONST_ONE]
        for b, j in enumerate(subset):
            row.append(_CONST_ZERO if a == b else entry_fn(i, j))
        rows.append(row)
    return _det(rows)


def _coeff_text(c: Fraction) -> str:
    mag = (str(abs(c.numerator)) if c.denominator == 1
           else f"(/ {abs(c.numerator)} {c.denominator})")
    return f"(- {mag})" if c < 0 else mag


def _poly_text(p: dict) -> str:
    terms = []
    for mono in sorted(p):
        coeff = p[mono]
        if coeff == 0:
            continue
        factors = list(mono)
        if not factors:
            terms.append(_coeff_text(coeff))
            continue
        if abs(coeff) != 1:
            factors = [_coeff_text(abs(coeff))] + factors
        body = factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")"
        terms.append(f"(- {body})" if coeff < 0 else body)
    if not terms:
        return "0"
    if len(terms) == 1:
        return terms[0]
    return "(+ " + " ".join(terms) + ")"


# -- system emission ----------------------------------------------------------


def export_smt(inst: Instance) -> str:
    """SMT-LIB 2 text whose models are exactly the passing assignments."""
    if not isinstance(inst, Instance):
        raise InputError("export_smt expects an Instance")
    n, d = inst.n, inst.d
    eset = inst.edge_set
    pinned = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam)}
    pinned_prime = {e: to_fraction(v) ** 2 for e, v in zip(inst.edges, inst.lam_prime)}
    free_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
                  if (i, j) not in eset]

    def entry_z(i, j):
        key = (min(i, j), max(i, j))
        if key in eset:
            return ("const", pinned[key])
        return ("var", variable_name("z", i, j))

    def entry_zp(i, j):
        key = (min(i, j), max(i, j))
        if key in eset:
            return ("const", pinned_prime[key])
        return ("var", variable_name("z_prime", i, j))

    sides = (("z", entry_z), ("z_prime", entry_zp))
    out = [
        "(set-logic QF_NRA)",
        f"; squared-distance feasibility system: n={n}, d={d}, "
        f"{len(free_pairs)} free pairs per side",
        "; pinned entries are substituted as rational constants",
    ]
    for i, j in free_pairs:
        out.append(f"(declare-const {variable_name('z', i, j)} Real)")
        out.append(f"(declare-const {variable_name('z_prime', i, j)} Real)")
    out.append("(declare-const alpha Real)")

    out.append("; nonnegativity of free squared distances, positivity of alpha")
    for i, j in free_pairs:
        out.append(f"(assert (>= {variable_name('z', i, j)} 0))")
        out.append(f"(assert (>= {variable_name('z_prime', i, j)} 0))")
    out.append("(assert (> alpha 0))")

    for size in range(3, min(d + 1, n) + 1):
        out.append(f"; sign rule on subsets of {size} vertices")
        for subset in itertools.combinations(range(n), size):
            for name, entry_fn in sides:
                poly = _cmd_poly(subset, entry_fn)
                if size % 2:
                    poly = _pneg(poly)
                out.append(f"; subset {subset}, side {name}")
                out.append(f"(assert (>= {_poly_text(poly)} 0))")

    if n >= d + 2:
        out.append(f"; flatness of subsets of {d + 2} vertices")
        for subset in itertools.combinations(range(n), d + 2):
            for name, entry_fn in sides:
                out.append(f"; subset {subset}, side {name}")
                out.append(f"(assert (= {_poly_text(_cmd_poly(subset, entry_fn))} 0))")

    out.append("; common determinant ratio on subsets of d+1 vertices")
    for subset in itertools.combinations(range(n), d + 1):
        lhs = _poly_text(_cmd_poly(subset, entry_zp))
        rhs = _poly_text(_cmd_poly(subset, entry_z))
        out.append(f"; subset {subset}")
        out.append(f"(assert (= {lhs} (* alpha {rhs})))")

    out.append("; some base simplex is nondegenerate and matches all side tests")
    disjuncts = []
    sign = 1 if (d + 1) % 2 == 0 else -1
    for base in itertools.combinations(range(n), d + 1):
        poly = _cmd_poly(base, entry_z)
        if sign < 0:
            poly = _pneg(poly)
        clauses = [f"(> {_poly_text(poly)} 0)"]
        for j in range(n):
            if j in base:
                continue
            subset = tuple(sorted(base + (j,)))
            for r in base:
                forms = []
                for name, entry_fn in sides:
                    probed = _cmd_poly(
                        subset,
                        lambda a, b, r=r, j=j, fn=entry_fn:
                            ("var", "__t") if {a, b} == {r, j} else fn(a, b))
                    linear = _substitute(_derivative(probed, "__t"), "__t",
                                         entry_fn(r, j))
                    forms.append(_poly_text(linear))
                lz, lp = forms
                clauses.append(f"(and (= (> {lz} 0) (> {lp} 0)) "
                               f"(= (< {lz} 0) (< {lp} 0)))")
        disjuncts.append("(and " + " ".join(clauses) + ")" if len(clauses) > 1
                         else clauses[0])
    if len(disjuncts) == 1:
        out.append(f"(assert {disjuncts[0]})")
    else:
        out.append("(assert (or " + " ".join(disjuncts) + "))")

    out.append("(check-sat)")
    out.append("(get-model)")
    return "\n".join(out) + "\n"
