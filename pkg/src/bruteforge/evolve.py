"""Evolutionary search over priority programs (generate-and-test loop).

A generator proposes new priority expressions from one or two high-scoring
parents; candidates are scored by the size of their greedy cap set and
curated in a bounded population (tournament selection, best-member
elitism).  The Baseline generator is seeded mutation/crossover; an
External generator is a child process speaking one JSON request line in,
one JSON reply line out.

Determinism: per-candidate seeds are derived from (run seed, generation,
slot), and parents are drawn from the population snapshot at the start of
the generation, so serial and worker-pool runs produce identical logs.
"""

from __future__ import annotations

import hashlib
import json
import random
import select
import shlex
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .priority import (
    BinOp,
    Const,
    Dim,
    Expr,
    Index,
    MinMax,
    format_expr,
    parse_expr,
    score,
)


@dataclass(frozen=True)
class Candidate:
    expr: Expr
    score: int
    generator_id: str
    generation: int


@dataclass
class Population:
    capacity: int
    candidates: list = field(default_factory=list)
    _arrivals: int = 0

    def add(self, candidate):
        self.candidates.append((self._arrivals, candidate))
        self._arrivals += 1
        if len(self.candidates) > self.capacity:
            # keep the best `capacity` members; earliest arrival wins ties,
            # so the best-score member is never evicted
            self.candidates.sort(key=lambda ac: (-ac[1].score, ac[0]))
            del self.candidates[self.capacity :]

    def members(self):
        return [c for _, c in self.candidates]

    def best(self):
        return min(self.candidates, key=lambda ac: (-ac[1].score, ac[0]))[1]


def derive_seed(run_seed, generation, slot):
    digest = hashlib.sha256(f"{run_seed}:{generation}:{slot}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# --- baseline generator ----------------------------------------------------


def _random_expr(rng, depth):
    if depth <= 0 or rng.random() < 0.3:
        kind = rng.randrange(4)
        if kind == 0:
            return Const(rng.randint(-3, 3))
        if kind == 1:
            return Index(Const(rng.randrange(8)))
        if kind == 2:
            return Dim()
        return Index(Const(rng.randrange(8)))
    op = rng.choice(["+", "-", "*", "%", "min", "max"])
    left = _random_expr(rng, depth - 1)
    right = _random_expr(rng, depth - 1)
    if op in ("min", "max"):
        return MinMax(op, left, right)
    return BinOp(op, left, right)


def _subtrees(e, path=()):
    yield path, e
    if isinstance(e, Index):
        yield from _subtrees(e.index, path + (0,))
    elif isinstance(e, (BinOp, MinMax)):
        yield from _subtrees(e.left, path + (0,))
        yield from _subtrees(e.right, path + (1,))


def _replace(e, path, sub):
    if not path:
        return sub
    head, rest = path[0], path[1:]
    if isinstance(e, Index):
        return Index(_replace(e.index, rest, sub))
    if isinstance(e, BinOp):
        if head == 0:
            return BinOp(e.op, _replace(e.left, rest, sub), e.right)
        return BinOp(e.op, e.left, _replace(e.right, rest, sub))
    if isinstance(e, MinMax):
        if head == 0:
            return MinMax(e.fn, _replace(e.left, rest, sub), e.right)
        return MinMax(e.fn, e.left, _replace(e.right, rest, sub))
    raise ValueError("path does not exist in expression")


def _mutate(rng, e):
    nodes = list(_subtrees(e))
    path, node = nodes[rng.randrange(len(nodes))]
    roll = rng.random()
    if isinstance(node, Const) and roll < 0.4:
        return _replace(e, path, Const(node.value + rng.choice([-2, -1, 1, 2])))
    if roll < 0.75:
        return _replace(e, path, _random_expr(rng, rng.randint(1, 3)))
    # wrap the node in a fresh binary operation
    op = rng.choice(["+", "-", "*", "%", "min", "max"])
    other = _random_expr(rng, 2)
    left, right = (node, other) if rng.random() < 0.5 else (other, node)
    if op in ("min", "max"):
        return _replace(e, path, MinMax(op, left, right))
    return _replace(e, path, BinOp(op, left, right))


def _crossover(rng, e1, e2):
    nodes1 = list(_subtrees(e1))
    nodes2 = list(_subtrees(e2))
    path, _ = nodes1[rng.randrange(len(nodes1))]
    _, donor = nodes2[rng.randrange(len(nodes2))]
    return _replace(e1, path, donor)


def propose(parents, seed):
    """New well-formed expression from 1-2 parents; deterministic in seed."""
    if not 1 <= len(parents) <= 2:
        raise ValueError("propose expects one or two parents")
    rng = random.Random(seed)
    if len(parents) == 2 and rng.random() < 0.5:
        child = _crossover(rng, parents[0].expr, parents[1].expr)
        if rng.random() < 0.5:
            child = _mutate(rng, child)
    else:
        child = _mutate(rng, parents[0].expr)
    return child


# --- external generator protocol ------------------------------------------


class ExternalGenerator:
    """Child-process generator: one JSON request line, one JSON reply line.

    Request: {"parents": [{"expr": str, "score": int}, ...], "seed": int}
    Reply:   {"expr": str}
    Protocol violations (malformed reply, timeout) raise GeneratorError;
    the evolve loop logs and skips them, never aborts.
    """

    def __init__(self, command, timeout=10.0):
        self.command = command
        self.timeout = timeout
        self.proc = subprocess.Popen(
            shlex.split(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
        )

    def __call__(self, parents, seed):
        request = {
            "parents": [
                {"expr": format_expr(p.expr), "score": p.score} for p in parents
            ],
            "seed": seed,
        }
        try:
            self.proc.stdin.write(json.dumps(request) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, ValueError) as exc:
            raise GeneratorError(f"generator process gone: {exc}")
        ready, _, _ = select.select([self.proc.stdout], [], [], self.timeout)
        if not ready:
            raise GeneratorError(f"generator timed out after {self.timeout}s")
        line = self.proc.stdout.readline()
        if not line:
            raise GeneratorError("generator closed its output stream")
        try:
            reply = json.loads(line)
            return parse_expr(reply["expr"])
        except (ValueError, KeyError, TypeError) as exc:
            raise GeneratorError(f"malformed generator reply {line!r}: {exc}")

    def close(self):
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self.proc.kill()


class GeneratorError(RuntimeError):
    pass


# --- the loop --------------------------------------------------------------


@dataclass
class EvolveConfig:
    n: int
    capacity: int = 24
    seed: int = 0
    eval_budget: int = 500
    batch: int = 10
    tournament: int = 3
    generator: str = "baseline"  # "baseline" | "external"
    generator_command: str | None = None
    generator_timeout: float = 10.0
    jobs: int = 1


SEED_EXPRS = ("0", "v[0]", "n", "v[0] + v[1]")


def _score_text(args):
    text, n = args
    return score(parse_expr(text), n)


def _select_parents(rng, members, tournament):
    """Tournament selection over the generation-start snapshot."""
    chosen = []
    count = 2 if len(members) >= 2 else 1
    for _ in range(count):
        contenders = [members[rng.randrange(len(members))] for _ in range(tournament)]
        chosen.append(max(contenders, key=lambda c: c.score))
    return chosen


def evolve(config, log_sink=None):
    """Run the loop; returns (best Candidate, list of log records).

    Every log record is {"generation", "slot", "seed", "expr", "score"} or
    a generator_error event.  With the Baseline generator the full log is
    byte-reproducible given the seed, independent of the worker count.
    """
    records = []

    def emit(record):
        records.append(record)
        if log_sink is not None:
            log_sink(record)

    if config.generator == "external":
        if not config.generator_command:
            raise ValueError("external generator requires a command")
        generate = ExternalGenerator(config.generator_command, config.generator_timeout)
    else:
        generate = None  # baseline, inlined below

    pool = ProcessPoolExecutor(config.jobs) if config.jobs > 1 else None
    population = Population(config.capacity)
    evals = 0
    best = None
    try:
        seed_exprs = [parse_expr(t) for t in SEED_EXPRS]
        seed_exprs = seed_exprs[: max(1, config.eval_budget)]
        texts = [(format_expr(e), config.n) for e in seed_exprs]
        scores = list(pool.map(_score_text, texts)) if pool else [
            _score_text(t) for t in texts
        ]
        for slot, (expr, sc) in enumerate(zip(seed_exprs, scores)):
            cand = Candidate(expr, sc, "seed", 0)
            population.add(cand)
            evals += 1
            if best is None or sc > best.score:
                best = cand
            emit(
                {
                    "generation": 0,
                    "slot": slot,
                    "seed": config.seed,
                    "expr": format_expr(expr),
                    "score": sc,
                    "best": best.score,
                }
            )
        generation = 0
        while evals < config.eval_budget:
            generation += 1
            snapshot = population.members()
            batch = min(config.batch, config.eval_budget - evals)
            proposals = []
            for slot in range(batch):
                slot_seed = derive_seed(config.seed, generation, slot)
                rng = random.Random(slot_seed)
                parents = _select_parents(rng, snapshot, config.tournament)
                if generate is None:
                    expr = propose(parents, slot_seed)
                else:
                    try:
                        expr = generate(parents, slot_seed)
                    except GeneratorError as exc:
                        emit(
                            {
                                "generation": generation,
                                "slot": slot,
                                "seed": slot_seed,
                                "event": "generator_error",
                                "detail": str(exc),
                            }
                        )
                        # a failed proposal still consumes its evaluation
                        # slot, so an always-failing generator terminates
                        evals += 1
                        continue
                proposals.append((slot, slot_seed, expr))
            texts = [(format_expr(e), config.n) for _, _, e in proposals]
            scores = list(pool.map(_score_text, texts)) if pool else [
                _score_text(t) for t in texts
            ]
            for (slot, slot_seed, expr), sc in zip(proposals, scores):
                cand = Candidate(expr, sc, config.generator, generation)
                population.add(cand)
                evals += 1
                if sc > best.score:
                    best = cand
                emit(
                    {
                        "generation": generation,
                        "slot": slot,
                        "seed": slot_seed,
                        "expr": format_expr(expr),
                        "score": sc,
                        "best": best.score,
                    }
                )
    finally:
        if pool:
            pool.shutdown()
        if generate is not None:
            generate.close()
    return best, records


def record_to_json(record):
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def parse_config_file(text, n=None):
    """TOML-like key=value config lines; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip().strip('"')
    kwargs = {}
    int_keys = {"n", "capacity", "seed", "eval_budget", "batch", "tournament", "jobs"}
    for key, value in values.items():
        if key in int_keys:
            kwargs[key] = int(value)
        elif key == "generator_timeout":
            kwargs[key] = float(value)
        elif key in ("generator", "generator_command"):
            kwargs[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    if n is not None:
        kwargs["n"] = n
    if "n" not in kwargs:
        raise ValueError("config must set n")
    return EvolveConfig(**kwargs)
