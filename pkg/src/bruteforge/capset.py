"""Cap-set laboratory: cap predicate, constructions, exact small-n oracle.

Vectors over {0,1,2} are plain tuples.  A set is a cap iff no three
distinct vectors sum to the zero vector mod 3, equivalently iff it
contains no 3-term arithmetic progression (affine line).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class DimensionBudgetError(ValueError):
    pass


MAX_GREEDY_DIMENSION = 12  # 3^12 = 531441 vectors; above this, refuse


def all_vectors(n):
    """All 3^n vectors of dimension n in lexicographic order."""
    return [tuple(v) for v in itertools.product((0, 1, 2), repeat=n)]


def vec_add(x, y):
    return tuple((a + b) % 3 for a, b in zip(x, y))


def vec_sub(x, y):
    return tuple((a - b) % 3 for a, b in zip(x, y))


def vec_neg(x):
    return tuple((-a) % 3 for a in x)


def is_cap(vectors):
    """No three distinct vectors sum to zero mod 3."""
    vs = list(vectors)
    vset = set(vs)
    if len(vset) != len(vs):
        raise ValueError("vectors must be distinct")
    for i, x in enumerate(vs):
        for y in vs[i + 1 :]:
            # z completing a zero-sum triple with x, y is determined
            z = vec_neg(vec_add(x, y))
            if z != x and z != y and z in vset:
                return False
    return True


def is_cap_ap(vectors):
    """Alternate definition: no distinct x,y,z with y-x = c(z-y), c in {0,1,2}."""
    vs = list(set(vectors))
    for x, y, z in itertools.permutations(vs, 3):
        d1 = vec_sub(y, x)
        d2 = vec_sub(z, y)
        for c in (0, 1, 2):
            if d1 == tuple((c * a) % 3 for a in d2):
                return False
    return True


def extends_cap(vset, v):
    """Does adjoining v to the cap `vset` keep it a cap?  O(|vset|^2)."""
    if v in vset:
        return False
    vs = list(vset)
    for i, x in enumerate(vs):
        for y in vs[i + 1 :]:
            if vec_neg(vec_add(x, y)) == v:
                return False
    return True


def binary_cap(n):
    """{0,1}^n, the classic 2^n lower-bound construction; always a cap."""
    if n < 1:
        raise ValueError("n must be positive")
    return set(itertools.product((0, 1), repeat=n))


@dataclass(frozen=True)
class CapBound:
    size: int
    exact: bool


def exact_cap(n, budget=None):
    """Maximum cap-set size by branch-and-bound over lex-ordered vectors.

    Translation symmetry lets us assume the zero vector is in some maximum
    cap (canonical-first pruning).  `budget` bounds search nodes; on
    exhaustion the best lower bound found is returned flagged inexact.
    """
    if n < 1:
        raise ValueError("n must be positive")
    vectors = all_vectors(n)
    total = len(vectors)
    best = [1]
    nodes = [0]
    exhausted = [False]

    def extend(chosen, start):
        if budget is not None:
            nodes[0] += 1
            if nodes[0] > budget:
                exhausted[0] = True
                return
        if len(chosen) > best[0]:
            best[0] = len(chosen)
        for i in range(start, total):
            if exhausted[0]:
                return
            if len(chosen) + (total - i) <= best[0]:
                return
            v = vectors[i]
            if extends_cap(chosen, v):
                chosen.add(v)
                extend(chosen, i + 1)
                chosen.remove(v)

    # canonical-first: every maximum cap can be translated to contain 0^n
    extend({vectors[0]}, 1)
    return CapBound(best[0], not exhausted[0])


def exact_cap_enumeration(n):
    """Independent cross-check for tiny n: scan every subset of (Z/3)^n."""
    vectors = all_vectors(n)
    best = 0
    for mask in range(1 << len(vectors)):
        subset = [v for i, v in enumerate(vectors) if mask >> i & 1]
        if len(subset) > best and is_cap(subset):
            best = len(subset)
    return best


def parse_capset_file(text, n=None):
    """One vector per line, written as base-3 digit strings."""
    vectors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not all(ch in "012" for ch in line):
            raise ValueError(f"line {lineno}: not a base-3 vector: {line!r}")
        v = tuple(int(ch) for ch in line)
        if n is not None and len(v) != n:
            raise ValueError(f"line {lineno}: expected dimension {n}, got {len(v)}")
        n = len(v)
        vectors.append(v)
    return vectors


def format_capset(vectors):
    return "\n".join("".join(str(d) for d in v) for v in sorted(vectors)) + "\n"
