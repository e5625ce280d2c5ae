"""Boolean Pythagorean Triples pipeline.

Enumerates Pythagorean triples up to a bound m, builds the CNF whose
unsatisfiability is equivalent to every 2-coloring of [m] containing a
monochromatic triple (one (x_a|x_b|x_c) & (~x_a|~x_b|~x_c) block per
triple), extracts and verifies colorings, and drives the threshold scan.

Reference-only facts, not desk-reproducible: the true threshold is 7825;
the published encodings had 3730 and 3745 variables after symmetry
handling, and the unsatisfiability certificate was about 200 terabytes.
We apply no symmetry breaking, so our variable count for a given m is
exactly the number of distinct triple members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import sat
from .logic import Assignment, Clause, Cnf

REFERENCE_THRESHOLD = 7825  # not desk-verified; recorded for documentation


class DomainGapError(ValueError):
    pass


class MissingVariableError(ValueError):
    pass


@dataclass(frozen=True)
class TripleSet:
    m: int
    triples: tuple  # (a, b, c) with a < b < c <= m, sorted


@dataclass(frozen=True)
class Coloring:
    m: int
    colors: dict  # member -> 0 | 1

    def __hash__(self):
        return hash((self.m, tuple(sorted(self.colors.items()))))


def triples(m):
    """All Pythagorean triples (a, b, c) with a < b < c <= m, sorted."""
    if m < 1:
        raise ValueError("m must be positive")
    out = []
    for c in range(1, m + 1):
        c2 = c * c
        for a in range(1, c):
            b2 = c2 - a * a
            if b2 <= a * a:
                break
            b = math.isqrt(b2)
            if b * b == b2:
                out.append((a, b, c))
    out.sort(key=lambda t: (t[2], t[0]))
    return TripleSet(m, tuple(out))


def members(m):
    """Distinct numbers appearing in some triple up to m."""
    out = set()
    for t in triples(m).triples:
        out.update(t)
    return out


def encode(m):
    """The paper-exact CNF: one two-clause block per triple.

    Returns (cnf, varmap) where varmap sends each triple member to its
    propositional variable id.  Numbers outside every triple get no
    variable.  num_vars = |members(m)|; clauses = 2 * |triples(m)|.
    """
    ts = triples(m)
    varmap = {}
    for i, member in enumerate(sorted(members(m)), 1):
        varmap[member] = i
    clauses = []
    for a, b, c in ts.triples:
        xa, xb, xc = varmap[a], varmap[b], varmap[c]
        clauses.append(Clause(frozenset((xa, xb, xc))))
        clauses.append(Clause(frozenset((-xa, -xb, -xc))))
    return Cnf(tuple(clauses), len(varmap)), varmap


def coloring_from_model(model, varmap, m=None):
    """Member i gets color 1 iff its variable is true in the model."""
    colors = {}
    for member, var in varmap.items():
        value = model.values.get(var)
        if value is None:
            raise MissingVariableError(f"model does not assign variable {var}")
        colors[member] = 1 if value else 0
    if m is None:
        m = max(colors, default=1)
    return Coloring(m, colors)


def coloring_to_model(coloring, varmap):
    """Inverse of coloring_from_model over varmap's domain."""
    return Assignment({varmap[i]: bool(c) for i, c in coloring.colors.items()})


VALID = "valid"


def verify_coloring(coloring, m):
    """VALID, or the first monochromatic triple as a witness."""
    missing = members(m) - set(coloring.colors)
    if missing:
        raise DomainGapError(f"coloring misses triple members {sorted(missing)}")
    for a, b, c in triples(m).triples:
        if coloring.colors[a] == coloring.colors[b] == coloring.colors[c]:
            return (a, b, c)
    return VALID


@dataclass(frozen=True)
class Threshold:
    m: int
    certificate: sat.Certificate


@dataclass(frozen=True)
class AllSatisfiable:
    max_m: int
    colorings: dict  # m -> Coloring for each tested m


def _solve_m(m, step_limit):
    cnf, varmap = encode(m)
    verdict = sat.solve(cnf, step_limit=step_limit)
    return cnf, varmap, verdict


def find_threshold(max_m, step=100, step_limit=None):
    """First m <= max_m whose encoding is unsatisfiable, or AllSatisfiable.

    Steps m by `step`, then bisects between the last satisfiable and the
    first unsatisfiable probe (unsatisfiability is monotone in m).  Every
    returned coloring and certificate is verified before being reported.
    """
    if max_m < 1 or step < 1:
        raise ValueError("max_m and step must be positive")
    colorings = {}

    def probe(m):
        cnf, varmap, verdict = _solve_m(m, step_limit)
        if verdict.satisfiable:
            coloring = coloring_from_model(verdict.model, varmap, m)
            assert verify_coloring(coloring, m) == VALID
            colorings[m] = coloring
            return None
        assert sat.check_certificate(cnf, verdict.certificate)
        return verdict.certificate

    last_sat = 0
    first_unsat = None
    m = min(step, max_m)
    while True:
        cert = probe(m)
        if cert is not None:
            first_unsat = (m, cert)
            break
        last_sat = m
        if m == max_m:
            break
        m = min(m + step, max_m)
    if first_unsat is None:
        return AllSatisfiable(max_m, colorings)
    lo, (hi, cert) = last_sat, first_unsat
    while hi - lo > 1:
        mid = (lo + hi) // 2
        c = probe(mid)
        if c is None:
            lo = mid
        else:
            hi, cert = mid, c
    return Threshold(hi, cert)


def exhaustive_satisfiable(m):
    """Oracle: does any 2-coloring of the triple members avoid mono triples?

    Exhausts all 2^|members(m)| colorings via the bitset truth table over
    the encoding; independent of the DPLL search path.
    """
    cnf, _ = encode(m)
    return sat.truth_table_satisfiable(cnf)
