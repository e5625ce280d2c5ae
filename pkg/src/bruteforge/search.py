"""Generic budgeted generate-and-test engine.

Enumerates candidates from a deterministic stream and returns the first
one passing the test predicate, or Exhausted when the budget runs out.
The budget unit is the number of test calls (generation is assumed cheap
relative to testing).
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass


@dataclass(frozen=True)
class Budget:
    max_candidates: int | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_candidates is None and self.max_seconds is None:
            raise ValueError("at least one budget bound must be set")


@dataclass(frozen=True)
class Found:
    certificate: object
    index: int
    elapsed: float


@dataclass(frozen=True)
class Exhausted:
    tested: int
    elapsed: float


def run(enumerator, test, budget, jobs=1, chunk_size=64):
    """First candidate (in enumeration order) passing `test`, or Exhausted.

    With jobs > 1, disjoint chunks are tested concurrently but the least
    passing index is still reported: a chunk's result is only accepted once
    all lower chunks have been scanned, so the outcome is schedule
    independent and identical to the serial run.
    """
    start = time.monotonic()
    if jobs <= 1:
        tested = 0
        for index, candidate in enumerate(enumerator):
            if budget.max_candidates is not None and tested >= budget.max_candidates:
                break
            if budget.max_seconds is not None and time.monotonic() - start > budget.max_seconds:
                break
            tested += 1
            if test(candidate):
                return Found(candidate, index, time.monotonic() - start)
        return Exhausted(tested, time.monotonic() - start)

    tested = 0
    it = iter(enumerator)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        base = 0
        while True:
            if budget.max_seconds is not None and time.monotonic() - start > budget.max_seconds:
                return Exhausted(tested, time.monotonic() - start)
            limit = chunk_size * jobs
            if budget.max_candidates is not None:
                limit = min(limit, budget.max_candidates - tested)
            if limit <= 0:
                return Exhausted(tested, time.monotonic() - start)
            batch = list(itertools.islice(it, limit))
            if not batch:
                return Exhausted(tested, time.monotonic() - start)
            results = list(pool.map(test, batch))
            tested += len(batch)
            for offset, ok in enumerate(results):
                if ok:
                    return Found(batch[offset], base + offset, time.monotonic() - start)
            base += len(batch)
