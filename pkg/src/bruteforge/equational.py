"""Unit-equational reasoning: unification, rewriting, LPO, completion,
proof checking, and budgeted proof search.

Ships the Robbins axioms (R1-R3 plus the definitional equations), the
Boolean-algebra axioms B1-B10, and the free-group axioms.  Proof search is
a fair dovetailed generate-and-test over equational rewrite steps; found
proofs are replayable step lists that check_proof validates.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field

from .logic import (
    App,
    BOOLEAN_SIG,
    GROUP_SIG,
    ROBBINS_SIG,
    Term,
    Var,
    format_term,
    parse_term,
    term_size,
    term_vars,
    with_constants,
)

FAIL = None  # mgu failure sentinel


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"


@dataclass(frozen=True)
class RewriteRule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if not term_vars(self.rhs) <= term_vars(self.lhs):
            raise ValueError("rule right-hand side introduces variables")

    def __str__(self):
        return f"{format_term(self.lhs)} -> {format_term(self.rhs)}"


class OrientationError(ValueError):
    def __init__(self, equation):
        super().__init__(f"equation not orientable under the precedence: {equation}")
        self.equation = equation


class CompletionBudgetExhausted(RuntimeError):
    def __init__(self, partial_rules):
        super().__init__("completion budget exhausted")
        self.partial_rules = partial_rules


# --- substitutions and unification ----------------------------------------


def apply_subst(t, sigma):
    if isinstance(t, Var):
        return sigma.get(t.id, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(apply_subst(a, sigma) for a in t.args))


def compose(sigma, tau):
    """Substitution equal to applying sigma then tau."""
    out = {v: apply_subst(t, tau) for v, t in sigma.items()}
    for v, t in tau.items():
        if v not in out:
            out[v] = t
    return {v: t for v, t in out.items() if t != Var(v)}


def occurs(vid, t):
    if isinstance(t, Var):
        return t.id == vid
    return any(occurs(vid, a) for a in t.args)


def mgu(t1, t2):
    """Most general unifier of two terms, or FAIL (clash / occurs check)."""
    sigma = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a = apply_subst(a, sigma)
        b = apply_subst(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var):
            if occurs(a.id, b):
                return FAIL
            sigma = compose(sigma, {a.id: b})
            continue
        if isinstance(b, Var):
            if occurs(b.id, a):
                return FAIL
            sigma = compose(sigma, {b.id: a})
            continue
        if a.symbol != b.symbol or len(a.args) != len(b.args):
            return FAIL
        stack.extend(zip(a.args, b.args))
    return sigma


def match(pattern, t):
    """One-way matching: sigma with pattern*sigma == t, or None."""
    sigma = {}
    stack = [(pattern, t)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.id)
            if bound is None:
                sigma[p.id] = s
            elif bound != s:
                return None
            continue
        if isinstance(s, Var) or p.symbol != s.symbol or len(p.args) != len(s.args):
            return None
        stack.extend(zip(p.args, s.args))
    return sigma


def rename_apart(t, offset):
    if isinstance(t, Var):
        return Var(t.id + offset)
    return App(t.symbol, tuple(rename_apart(a, offset) for a in t.args))


def max_var(t):
    vs = term_vars(t)
    return max(vs) if vs else -1


# --- lexicographic path order ---------------------------------------------


def lpo_gt(t1, t2, precedence):
    """Strict lexicographic path order; precedence maps symbol -> rank."""

    def gt(s, t):
        if isinstance(t, Var):
            return s != t and occurs(t.id, s)
        if isinstance(s, Var):
            return False
        if any(a == t or gt(a, t) for a in s.args):
            return True
        ps, pt = precedence[s.symbol], precedence[t.symbol]
        if ps > pt:
            return all(gt(s, b) for b in t.args)
        if ps == pt and s.symbol == t.symbol:
            for a, b in zip(s.args, t.args):
                if a == b:
                    continue
                return gt(a, b) and all(gt(s, b2) for b2 in t.args)
            return False
        return False

    return gt(t1, t2)


# --- rewriting -------------------------------------------------------------


def rewrite_at_root(t, rules):
    for idx, rule in enumerate(rules):
        sigma = match(rule.lhs, t)
        if sigma is not None:
            return apply_subst(rule.rhs, sigma), idx
    return None


def rewrite(t, rules, max_steps=100000):
    """Normal form under leftmost-innermost rewriting.

    Terminates for LPO-oriented rule sets; max_steps is a tripwire against
    mis-oriented inputs.
    """
    steps = 0

    def norm(u):
        nonlocal steps
        while True:
            if isinstance(u, App) and u.args:
                u = App(u.symbol, tuple(norm(a) for a in u.args))
            hit = rewrite_at_root(u, rules)
            if hit is None:
                return u
            steps += 1
            if steps > max_steps:
                raise RuntimeError("rewrite step bound exceeded; rules not terminating?")
            u = hit[0]

    return norm(t)


def positions(t, prefix=()):
    """All positions with their subterms, preorder; root first."""
    yield prefix, t
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            yield from positions(a, prefix + (i,))


def subterm_at(t, pos):
    for i in pos:
        if isinstance(t, Var) or i >= len(t.args):
            raise IndexError(f"no subterm at position {pos}")
        t = t.args[i]
    return t


def replace_at(t, pos, sub):
    if not pos:
        return sub
    if isinstance(t, Var) or pos[0] >= len(t.args):
        raise IndexError(f"no subterm at position {pos}")
    args = list(t.args)
    args[pos[0]] = replace_at(args[pos[0]], pos[1:], sub)
    return App(t.symbol, tuple(args))


# --- critical pairs and completion ----------------------------------------


def _overlaps(r1, r2):
    """Critical pairs from overlapping r1.lhs into non-variable subterms of
    r2.lhs; r2 is assumed renamed apart from r1."""
    out = []
    for pos, sub in positions(r2.lhs):
        if isinstance(sub, Var):
            continue
        sigma = mgu(r1.lhs, sub)
        if sigma is FAIL:
            continue
        if pos == () and apply_subst(r1.rhs, sigma) == apply_subst(r2.rhs, sigma):
            continue  # trivial identity overlap at the root
        left = apply_subst(replace_at(r2.lhs, pos, r1.rhs), sigma)
        right = apply_subst(r2.rhs, sigma)
        if left != right:
            out.append(Equation(left, right))
    return out


def superpose(r1, r2):
    """All critical pairs of two oriented rules (both overlap directions)."""
    offset = max_var(r1.lhs) + max_var(r1.rhs) + 2
    r2r = RewriteRule(rename_apart(r2.lhs, offset), rename_apart(r2.rhs, offset))
    pairs = _overlaps(r1, r2r)
    pairs += _overlaps(r2r, r1)
    # dedupe syntactically
    seen = set()
    unique = []
    for eq in pairs:
        key = (eq.lhs, eq.rhs)
        if key not in seen:
            seen.add(key)
            unique.append(eq)
    return unique


def orient(eq, precedence):
    if lpo_gt(eq.lhs, eq.rhs, precedence):
        return RewriteRule(eq.lhs, eq.rhs)
    if lpo_gt(eq.rhs, eq.lhs, precedence):
        return RewriteRule(eq.rhs, eq.lhs)
    raise OrientationError(eq)


def kb_complete(axioms, precedence, budget=2000):
    """Knuth-Bendix completion; returns a locally confluent, terminating
    rule list or raises OrientationError / CompletionBudgetExhausted.

    Standard loop with interreduction: new rules collapse existing rules
    (reducible left-hand sides go back to the pending queue) and compose
    their right-hand sides.
    """
    pending = deque(axioms)
    rules = []
    steps = 0
    while pending:
        steps += 1
        if steps > budget:
            raise CompletionBudgetExhausted(list(rules))
        # pick the smallest pending equation (fairness + small proofs)
        eq = min(pending, key=lambda e: term_size(e.lhs) + term_size(e.rhs))
        pending.remove(eq)
        lhs = rewrite(eq.lhs, rules)
        rhs = rewrite(eq.rhs, rules)
        if lhs == rhs:
            continue
        new_rule = orient(Equation(lhs, rhs), precedence)
        # collapse: rules whose lhs is reducible by the new rule re-enter
        kept = []
        for r in rules:
            if _reducible(r.lhs, new_rule):
                pending.append(Equation(r.lhs, r.rhs))
            else:
                kept.append(r)
        rules = kept
        # compose: normalize right-hand sides with the new rule included
        rules.append(new_rule)
        rules = [RewriteRule(r.lhs, rewrite(r.rhs, rules)) for r in rules]
        for r in rules:
            if r == new_rule:
                continue
            pending.extend(superpose(new_rule, r))
        pending.extend(superpose(new_rule, new_rule))
    return rules


def _reducible(t, rule):
    return any(
        isinstance(sub, App) and match(rule.lhs, sub) is not None
        for _, sub in positions(t)
    )


def critical_pairs_join(rules):
    """Confluence check: every critical pair rewrites to one normal form."""
    for r1, r2 in itertools.product(rules, repeat=2):
        for eq in superpose(r1, r2):
            if rewrite(eq.lhs, rules) != rewrite(eq.rhs, rules):
                return False
    return True


# --- axiom sets ------------------------------------------------------------


def _eqs(sig, pairs):
    return tuple(
        Equation(parse_term(l, sig), parse_term(r, sig)) for l, r in pairs
    )


BOOLEAN_AXIOMS = dict(
    zip(
        [f"B{i}" for i in range(1, 11)],
        _eqs(
            BOOLEAN_SIG,
            [
                ("x v (y v z)", "(x v y) v z"),
                ("x v y", "y v x"),
                ("x v (x ^ y)", "x"),
                ("x ^ (y v z)", "(x ^ y) v (x ^ z)"),
                ("x v -x", "1"),
                ("x ^ (y ^ z)", "(x ^ y) ^ z"),
                ("x ^ y", "y ^ x"),
                ("x ^ (x v z)", "x"),
                ("x v (y ^ z)", "(x v y) ^ (x v z)"),
                ("x ^ -x", "0"),
            ],
        ),
    )
)

_ROBBINS_CORE_SIG = with_constants(ROBBINS_SIG)
ROBBINS_AXIOMS = dict(
    zip(
        ["R1", "R2", "R3"],
        _eqs(
            _ROBBINS_CORE_SIG,
            [
                ("x v (y v z)", "(x v y) v z"),
                ("x v y", "y v x"),
                ("-(-(x v y) v -(x v -y))", "x"),
            ],
        ),
    )
)
ROBBINS_DEFS = dict(
    zip(
        ["Def1", "Def2", "Def3"],
        _eqs(
            BOOLEAN_SIG,
            [
                ("0", "-(x v -x)"),
                ("1", "x v -x"),
                ("x ^ y", "-(-x v -y)"),
            ],
        ),
    )
)

GROUP_AXIOMS = dict(
    zip(
        ["G1", "G2", "G3"],
        _eqs(
            GROUP_SIG,
            [
                ("(x * y) * z", "x * (y * z)"),
                ("e * x", "x"),
                ("i(x) * x", "e"),
            ],
        ),
    )
)

GROUP_PRECEDENCE = {"i": 3, "*": 2, "e": 1}

# McCune's ground witnesses for the Winker lemma (over the Robbins language)
T1 = parse_term("x v x", ROBBINS_SIG)
T2 = parse_term("-(-(x v x v x) v x)", ROBBINS_SIG)

AXIOM_SETS = {
    "boolean": BOOLEAN_AXIOMS,
    "robbins": {**ROBBINS_AXIOMS, **ROBBINS_DEFS},
    "group": GROUP_AXIOMS,
}

AXIOM_SIGNATURES = {
    "boolean": BOOLEAN_SIG,
    "robbins": BOOLEAN_SIG,
    "group": GROUP_SIG,
}


# --- proofs ----------------------------------------------------------------


@dataclass(frozen=True)
class ProofStep:
    eq_id: str
    pos: tuple
    subst: dict
    direction: str  # "lr" | "rl"

    def __hash__(self):
        return hash((self.eq_id, self.pos, tuple(sorted(self.subst.items())), self.direction))


@dataclass(frozen=True)
class EqProof:
    steps: tuple


class ProofStepError(ValueError):
    pass


def apply_step(t, step, axioms):
    if step.eq_id not in axioms:
        raise ProofStepError(f"unknown equation id {step.eq_id!r}")
    eq = axioms[step.eq_id]
    frm, to = (eq.lhs, eq.rhs) if step.direction == "lr" else (eq.rhs, eq.lhs)
    try:
        sub = subterm_at(t, step.pos)
    except IndexError as exc:
        raise ProofStepError(f"bad position {step.pos}: {exc}")
    if apply_subst(frm, step.subst) != sub:
        raise ProofStepError(
            f"instance mismatch at {step.pos}: {format_term(apply_subst(frm, step.subst))}"
            f" != {format_term(sub)}"
        )
    return replace_at(t, step.pos, apply_subst(to, step.subst))


def check_proof(proof, axioms, goal, diagnostics=None):
    """Replay every step; True iff the steps transform goal.lhs into goal.rhs."""
    t = goal.lhs
    for i, step in enumerate(proof.steps):
        try:
            t = apply_step(t, step, axioms)
        except ProofStepError as exc:
            if diagnostics is not None:
                diagnostics.append(f"step {i}: {exc}")
            return False
    if t != goal.rhs:
        if diagnostics is not None:
            diagnostics.append(
                f"final term {format_term(t)} differs from goal {format_term(goal.rhs)}"
            )
        return False
    return True


# proof file format: one step per line, "eqId position substitution direction"
# position: dot-separated child indices, "-" for the root
# substitution: semicolon-separated var=term bindings, "-" when empty
# (terms may contain spaces and commas, so the substitution field is
# delimited by its neighbours: the first two and the last whitespace fields)


def format_proof(proof):
    lines = []
    for s in proof.steps:
        pos = ".".join(str(i) for i in s.pos) if s.pos else "-"
        if s.subst:
            sub = "; ".join(
                f"{_var_text(v)}={format_term(t)}" for v, t in sorted(s.subst.items())
            )
        else:
            sub = "-"
        lines.append(f"{s.eq_id} {pos} {sub} {s.direction}")
    return "\n".join(lines) + "\n"


def _var_text(vid):
    from .logic import var_name

    return var_name(vid)


def parse_proof(text, signature):
    from .logic import var_id

    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 4:
            raise ProofStepError(f"line {lineno}: expected 4 fields")
        eq_id, pos_text, direction = parts[0], parts[1], parts[-1]
        sub_text = " ".join(parts[2:-1])
        if direction not in ("lr", "rl"):
            raise ProofStepError(f"line {lineno}: bad direction {direction!r}")
        pos = () if pos_text == "-" else tuple(int(p) for p in pos_text.split("."))
        subst = {}
        if sub_text != "-":
            for binding in sub_text.split(";"):
                name, _, term_text = binding.partition("=")
                subst[var_id(name.strip())] = parse_term(term_text, signature)
        steps.append(ProofStep(eq_id, pos, subst, direction))
    return EqProof(tuple(steps))


# --- proof search ----------------------------------------------------------


@dataclass(frozen=True)
class Timeout:
    """Search gave up; carries the usual prover counters."""

    equations_generated: int
    rewrites_attempted: int


@dataclass
class _Node:
    term: Term
    parent: object
    step: ProofStep | None
    size: int = field(init=False)

    def __post_init__(self):
        self.size = term_size(self.term)


def _ground_pool(goal, extra_terms=(), limit=6):
    """Small ground-instantiation pool: goal subterms plus supplied terms,
    size-lexicographic order."""
    pool = []
    seen = set()
    for t in (goal.lhs, goal.rhs, *extra_terms):
        for _, sub in positions(t):
            if sub not in seen:
                seen.add(sub)
                pool.append(sub)
    pool.sort(key=lambda t: (term_size(t), format_term(t)))
    return pool[:limit]


def _renamed_axioms(axioms, goal):
    """Axioms with variables renamed clear of the goal's variables."""
    offset = (
        max(
            [max_var(goal.lhs), max_var(goal.rhs)]
            + [max(max_var(e.lhs), max_var(e.rhs)) for e in axioms.values()]
        )
        + 1
    )
    out = {}
    for eq_id, eq in axioms.items():
        out[eq_id] = Equation(
            rename_apart(eq.lhs, offset), rename_apart(eq.rhs, offset)
        )
    return out, offset


def _successors(t, axioms, pool, max_size, max_extra_vars=2):
    for eq_id, eq in axioms.items():
        for frm, to, direction in ((eq.lhs, eq.rhs, "lr"), (eq.rhs, eq.lhs, "rl")):
            frm_vars = term_vars(frm)
            extra = sorted(term_vars(to) - frm_vars)
            if len(extra) > max_extra_vars:
                continue
            for pos, sub in positions(t):
                sigma0 = match(frm, sub)
                if sigma0 is None:
                    continue
                for fill in itertools.product(pool, repeat=len(extra)):
                    sigma = dict(sigma0)
                    sigma.update(zip(extra, fill))
                    new_sub = apply_subst(to, sigma)
                    new_term = replace_at(t, pos, new_sub)
                    if term_size(new_term) > max_size:
                        continue
                    yield ProofStep(eq_id, pos, sigma, direction), new_term


def prove(goal, axioms, max_expansions=5000, max_seconds=None, size_margin=8,
          age_weight_ratio=4):
    """Budgeted bidirectional-free proof search by fair generate-and-test.

    Explores terms reachable from goal.lhs by equational steps, dovetailing
    by age and by weight (term size): out of every `age_weight_ratio` + 1
    selections, one is the oldest frontier node and the rest are the
    smallest.  Returns an EqProof (always check_proof-valid) or Timeout
    with counters.
    """
    axioms_r, offset = _renamed_axioms(axioms, goal)
    pool = _ground_pool(goal)
    max_size = max(term_size(goal.lhs), term_size(goal.rhs)) + size_margin
    start = time.monotonic()

    root = _Node(goal.lhs, None, None)
    frontier = deque([root])
    visited = {goal.lhs}
    generated = 0
    rewrites = 0
    expansions = 0
    tick = 0

    def build_proof(node):
        # search ran over renamed-apart axioms; translate substitution keys
        # back to the original axiom variables
        steps = []
        while node.step is not None:
            s = node.step
            subst = {v - offset: t for v, t in s.subst.items()}
            steps.append(ProofStep(s.eq_id, s.pos, subst, s.direction))
            node = node.parent
        return EqProof(tuple(reversed(steps)))

    if goal.lhs == goal.rhs:
        return EqProof(())

    while frontier:
        expansions += 1
        if expansions > max_expansions:
            return Timeout(generated, rewrites)
        if max_seconds is not None and time.monotonic() - start > max_seconds:
            return Timeout(generated, rewrites)
        tick += 1
        if tick % (age_weight_ratio + 1) == 0:
            node = frontier.popleft()  # by age
        else:
            node = min(frontier, key=lambda nd: nd.size)  # by weight
            frontier.remove(node)
        for step, new_term in _successors(node.term, axioms_r, pool, max_size):
            rewrites += 1
            if new_term in visited:
                continue
            visited.add(new_term)
            generated += 1
            child = _Node(new_term, node, step)
            if new_term == goal.rhs:
                return build_proof(child)
            frontier.append(child)
    return Timeout(generated, rewrites)


def enumerate_ground_terms(signature, max_size, variables=()):
    """All terms over the signature (plus the given Vars), size-lex order."""
    consts = [App(s) for s, a in signature.items() if a == 0]
    by_size = {1: list(variables) + list(consts)}
    for size in range(2, max_size + 1):
        terms = []
        for sym, arity in sorted(signature.items()):
            if arity == 1:
                terms.extend(
                    App(sym, (t,)) for t in by_size.get(size - 1, [])
                )
            elif arity == 2:
                for ls in range(1, size - 1):
                    rs = size - 1 - ls
                    for a in by_size.get(ls, []):
                        for b in by_size.get(rs, []):
                            terms.append(App(sym, (a, b)))
        by_size[size] = terms
    out = []
    for size in range(1, max_size + 1):
        out.extend(sorted(by_size.get(size, []), key=format_term))
    return out


@dataclass(frozen=True)
class WitnessResult:
    """A witness substitution for the goal's variables, plus its proof."""

    witness: dict
    proof: EqProof


def prove_exists(goal, axioms, signature, max_candidates=200,
                 per_candidate_expansions=300, max_term_size=7):
    """Treat the goal's variables as existential: enumerate witness terms in
    size-lexicographic order and try to prove each ground instance.

    Witness terms may share one fresh variable (witnesses need not be
    ground).  Returns WitnessResult or Timeout with aggregate counters.
    """
    from . import search

    gvars = sorted(term_vars(goal.lhs) | term_vars(goal.rhs))
    if not gvars:
        result = prove(goal, axioms, max_expansions=per_candidate_expansions)
        if isinstance(result, EqProof):
            return WitnessResult({}, result)
        return result
    fresh = Var(max(max(gvars), max((max_var(e.lhs) for e in axioms.values()), default=-1)) + 1)
    terms = enumerate_ground_terms(signature, max_term_size, variables=(fresh,))
    generated = 0
    rewrites = 0
    hit = []

    def try_witness(assignment):
        nonlocal generated, rewrites
        sigma = dict(zip(gvars, assignment))
        instance = Equation(apply_subst(goal.lhs, sigma), apply_subst(goal.rhs, sigma))
        result = prove(instance, axioms, max_expansions=per_candidate_expansions)
        if isinstance(result, EqProof):
            hit.append(WitnessResult(sigma, result))
            return True
        generated += result.equations_generated
        rewrites += result.rewrites_attempted
        return False

    budget = search.Budget(max_candidates=max_candidates)
    outcome = search.run(
        itertools.product(terms, repeat=len(gvars)), try_witness, budget
    )
    if isinstance(outcome, search.Found):
        return hit[0]
    return Timeout(generated, rewrites)
