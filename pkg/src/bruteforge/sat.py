"""Complete propositional satisfiability engine with checkable certificates.

The solver is a deterministic DPLL: unit propagation to fixpoint, branching
on the lowest-index unassigned variable (true first).  Every conflict and
every exhausted branch records the negation of the current decision set;
the resulting clause list is a reverse-unit-propagation (RUP) refutation
ending in the empty clause, checkable in one pass by check_certificate.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .logic import Assignment, Clause, Cnf

CONFLICT = "conflict"
STABLE = "stable"


class BudgetExhausted(RuntimeError):
    """Raised when an optional step limit is configured and hit."""


class PartialAssignmentError(ValueError):
    pass


class PivotAbsentError(ValueError):
    pass


class MalformedCertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Ordered RUP clause list; the last line is the empty clause."""

    lines: tuple

    def to_text(self):
        out = []
        for c in self.lines:
            lits = sorted(c.lits, key=lambda l: (abs(l), l < 0))
            out.append(" ".join(str(l) for l in lits) + (" 0" if lits else "0"))
        return "\n".join(out) + "\n"

    @staticmethod
    def from_text(text):
        lines = []
        for raw in text.splitlines():
            raw = raw.strip()
            if not raw:
                continue
            toks = [int(t) for t in raw.split()]
            if toks[-1] != 0:
                raise MalformedCertificateError(f"line not 0-terminated: {raw!r}")
            lines.append(Clause(frozenset(toks[:-1])))
        return Certificate(tuple(lines))


@dataclass(frozen=True)
class Verdict:
    satisfiable: bool
    model: Assignment | None = None
    certificate: Certificate | None = None


def unit_propagate(cnf, assignment):
    """Least fixpoint of unit propagation extending `assignment`.

    Returns (extended assignment, CONFLICT | STABLE).  CONFLICT iff some
    clause is falsified by the fixpoint.
    """
    a = assignment.copy()
    changed = True
    while changed:
        changed = False
        for clause in cnf.clauses:
            unassigned = None
            n_unassigned = 0
            satisfied = False
            for lit in clause.lits:
                v = a.value(lit)
                if v is True:
                    satisfied = True
                    break
                if v is None:
                    unassigned = lit
                    n_unassigned += 1
            if satisfied:
                continue
            if n_unassigned == 0:
                return a, CONFLICT
            if n_unassigned == 1:
                a.values[abs(unassigned)] = unassigned > 0
                changed = True
    return a, STABLE


def resolve(c1, c2, pivot):
    """Resolution rule: from (phi | p) and (~p | psi) derive (phi | psi)."""
    if pivot not in c1.lits:
        raise PivotAbsentError(f"pivot {pivot} does not occur positively in c1")
    if -pivot not in c2.lits:
        raise PivotAbsentError(f"pivot {pivot} does not occur negatively in c2")
    return Clause((c1.lits - {pivot}) | (c2.lits - {-pivot}))


def verify_model(cnf, assignment):
    """Independent model check: every clause has a true literal."""
    if not assignment.is_total(cnf.num_vars):
        raise PartialAssignmentError("model must assign every variable")
    return all(any(assignment.value(l) for l in c.lits) for c in cnf.clauses)


def _propagate_sets(clause_sets, assigned):
    """Unit propagation over literal frozensets; `assigned` is a literal set.

    Mutates and returns (assigned, conflict: bool).
    """
    changed = True
    while changed:
        changed = False
        for lits in clause_sets:
            unit = None
            count = 0
            sat = False
            for lit in lits:
                if lit in assigned:
                    sat = True
                    break
                if -lit not in assigned:
                    unit = lit
                    count += 1
                    if count > 1:
                        break
            if sat or count > 1:
                continue
            if count == 0:
                return assigned, True
            assigned.add(unit)
            changed = True
    return assigned, False


def check_certificate(cnf, cert):
    """True iff every line is RUP from cnf plus earlier lines, last line empty."""
    if not cert.lines or cert.lines[-1].lits:
        return False
    base = [c.lits for c in cnf.clauses if not c.is_tautological]
    for i, line in enumerate(cert.lines):
        for lit in line.lits:
            if lit == 0 or abs(lit) > cnf.num_vars:
                raise MalformedCertificateError(f"bad literal {lit} in line {i}")
        if line.is_tautological:
            base.append(line.lits)
            continue
        assigned = {-l for l in line.lits}
        _, conflict = _propagate_sets(base, assigned)
        if not conflict:
            return False
        base.append(line.lits)
    return True


class _Solver:
    def __init__(self, cnf, step_limit=None):
        self.clause_sets = [c.lits for c in cnf.clauses if not c.is_tautological]
        self.num_vars = cnf.num_vars
        self.step_limit = step_limit
        self.steps = 0
        self.cert_lines = []

    def search(self, assigned, decisions):
        """DFS from a given decision set; returns a model literal-set or None.

        On every conflict or exhausted branch, the negation of the decision
        set is recorded; the record order forms a valid RUP refutation.
        """
        self.steps += 1
        if self.step_limit is not None and self.steps > self.step_limit:
            raise BudgetExhausted(f"step limit {self.step_limit} exhausted")
        assigned, conflict = _propagate_sets(self.clause_sets, assigned)
        if conflict:
            self.cert_lines.append(Clause(frozenset(-d for d in decisions)))
            return None
        branch = None
        for v in range(1, self.num_vars + 1):
            if v not in assigned and -v not in assigned:
                branch = v
                break
        if branch is None:
            return assigned
        for lit in (branch, -branch):
            result = self.search(set(assigned) | {lit}, decisions + (lit,))
            if result is not None:
                return result
        self.cert_lines.append(Clause(frozenset(-d for d in decisions)))
        return None


def _model_assignment(assigned, num_vars):
    return Assignment({v: v in assigned for v in range(1, num_vars + 1)})


def solve(cnf, step_limit=None):
    """Decide satisfiability.  Total, sound, complete, deterministic.

    SAT verdicts carry a total model; UNSAT verdicts carry an RUP
    certificate.  `step_limit` bounds the number of search nodes and raises
    BudgetExhausted when hit (default: unbudgeted).
    """
    sys.setrecursionlimit(max(10000, cnf.num_vars * 50))
    solver = _Solver(cnf, step_limit)
    result = solver.search(set(), ())
    if result is not None:
        return Verdict(True, model=_model_assignment(result, cnf.num_vars))
    return Verdict(False, certificate=Certificate(tuple(solver.cert_lines)))


def _cube_order_key(cube):
    return [l < 0 for l in cube]


def solve_with_cubes(cnf, k, step_limit=None):
    """Naive top-k variable splitting plumbing for parallel runs.

    Splits on the first k variables, solves all 2^k cubes (none skipped, so
    the outcome is run-order independent), and merges deterministically:
    the first satisfiable cube in cube order supplies the model, else the
    concatenated per-cube certificates plus split-tree merge clauses refute
    the formula.
    """
    sys.setrecursionlimit(max(10000, cnf.num_vars * 50))
    k = min(k, cnf.num_vars)
    if k == 0:
        return solve(cnf, step_limit=step_limit)
    cubes = [()]
    for v in range(1, k + 1):
        cubes = [c + (v,) for c in cubes] + [c + (-v,) for c in cubes]
    cubes.sort(key=_cube_order_key)
    all_lines = []
    sat_model = None
    for cube in cubes:
        solver = _Solver(cnf, step_limit)
        model = solver.search(set(cube), tuple(cube))
        all_lines.extend(solver.cert_lines)
        if model is not None and sat_model is None:
            sat_model = model
    if sat_model is not None:
        return Verdict(True, model=_model_assignment(sat_model, cnf.num_vars))
    for depth in range(k - 1, -1, -1):
        prefixes = [()]
        for v in range(1, depth + 1):
            prefixes = [p + (v,) for p in prefixes] + [p + (-v,) for p in prefixes]
        prefixes.sort(key=_cube_order_key)
        for p in prefixes:
            all_lines.append(Clause(frozenset(-l for l in p)))
    return Verdict(False, certificate=Certificate(tuple(all_lines)))


_TABLE_CHUNK_VARS = 18


def truth_table_satisfiable(cnf):
    """Independent oracle: exhaustive truth-table check via bitset arithmetic.

    Bit k of a 2^j-bit integer represents the assignment of the lowest j
    variables whose variable i is true iff bit (i-1) of k is set.  Variables
    beyond the chunk width are enumerated explicitly, so memory stays
    bounded while the whole 2^n table is still covered.
    """
    import itertools

    n = cnf.num_vars
    low = min(n, _TABLE_CHUNK_VARS)
    size = 1 << low
    full = (1 << size) - 1
    var_masks = {}
    mask = full
    for v in range(1, low + 1):
        period = 1 << v
        half = period >> 1
        block = ((1 << half) - 1) << half
        rep = block
        length = period
        while length < size:
            rep |= rep << length
            length <<= 1
        var_masks[v] = rep & full
    high_vars = list(range(low + 1, n + 1))
    for high in itertools.product((False, True), repeat=len(high_vars)):
        values = dict(zip(high_vars, high))
        acc = full
        for c in cnf.clauses:
            m = 0
            satisfied = False
            for lit in c.lits:
                v = abs(lit)
                if v > low:
                    if values[v] == (lit > 0):
                        satisfied = True
                        break
                else:
                    m |= var_masks[v] if lit > 0 else (full ^ var_masks[v])
            if satisfied:
                continue
            acc &= m
            if acc == 0:
                break
        if acc:
            return True
    return False
