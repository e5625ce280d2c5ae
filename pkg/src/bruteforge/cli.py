"""Single command-line entry point.

Exit codes: 0 success; 1 negative answer (unsatisfiable where a model was
sought, proof search timeout, not-a-cap); 2 usage error.  All output files
are written atomically (temp file + rename).  Machine logs are JSON lines;
human summaries go to standard output.

Environment: BRUTEFORGE_JOBS sets the default --jobs value; CAPSET_GENERATOR
supplies an external generator command for `capset evolve`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import bpt, capset, equational, evolve, hierarchy, priority, sat
from .logic import parse_dimacs, write_dimacs

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bruteforge-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require_file(parser, path):
    if not os.path.isfile(path):
        parser.error(f"no such file: {path}")


def _default_jobs():
    try:
        return max(1, int(os.environ.get("BRUTEFORGE_JOBS", "1")))
    except ValueError:
        return 1


# --- sat -------------------------------------------------------------------


def _cmd_sat_solve(args, parser):
    _require_file(parser, args.cnf)
    with open(args.cnf) as handle:
        cnf = parse_dimacs(handle.read())
    if args.cubes:
        verdict = sat.solve_with_cubes(cnf, args.cubes)
    else:
        verdict = sat.solve(cnf)
    if verdict.satisfiable:
        print("SATISFIABLE")
        if args.model:
            lits = [v if verdict.model.values[v] else -v for v in range(1, cnf.num_vars + 1)]
            _atomic_write(args.model, " ".join(str(l) for l in lits) + " 0\n")
        return EXIT_OK
    print("UNSATISFIABLE")
    if args.cert:
        _atomic_write(args.cert, verdict.certificate.to_text())
    return EXIT_NEGATIVE


# --- bpt -------------------------------------------------------------------


def _format_coloring(coloring):
    return "".join(
        f"{i} {c}\n" for i, c in sorted(coloring.colors.items())
    )


def _cmd_bpt_encode(args, parser):
    cnf, _ = bpt.encode(args.m)
    _atomic_write(args.output, write_dimacs(cnf))
    print(f"wrote {args.output}: {cnf.num_vars} variables, {len(cnf.clauses)} clauses")
    return EXIT_OK


def _cmd_bpt_solve(args, parser):
    cnf, varmap = bpt.encode(args.m)
    verdict = sat.solve(cnf)
    if verdict.satisfiable:
        coloring = bpt.coloring_from_model(verdict.model, varmap, args.m)
        assert bpt.verify_coloring(coloring, args.m) == bpt.VALID
        print(f"SATISFIABLE: valid 2-coloring for m={args.m}")
        if args.coloring:
            _atomic_write(args.coloring, _format_coloring(coloring))
        return EXIT_OK
    assert sat.check_certificate(cnf, verdict.certificate)
    print(f"UNSATISFIABLE: every 2-coloring has a monochromatic triple at m={args.m}")
    if args.cert:
        _atomic_write(args.cert, verdict.certificate.to_text())
    return EXIT_NEGATIVE


def _cmd_bpt_scan(args, parser):
    result = bpt.find_threshold(args.max, step=args.step)
    if isinstance(result, bpt.Threshold):
        print(f"threshold: first unsatisfiable m = {result.m}")
        if args.cert:
            _atomic_write(args.cert, result.certificate.to_text())
        return EXIT_OK
    print(f"all satisfiable up to m = {result.max_m}")
    return EXIT_NEGATIVE


# --- capset ----------------------------------------------------------------


def _cmd_capset_verify(args, parser):
    _require_file(parser, args.file)
    with open(args.file) as handle:
        vectors = capset.parse_capset_file(handle.read())
    if capset.is_cap(vectors):
        print(f"cap: {len(vectors)} vectors")
        return EXIT_OK
    print("not a cap")
    return EXIT_NEGATIVE


def _cmd_capset_greedy(args, parser):
    expr = priority.parse_expr(args.expr)
    chosen = priority.greedy(expr, args.n)
    print(f"greedy cap size {len(chosen)} for n={args.n}")
    if args.output:
        _atomic_write(args.output, capset.format_capset(chosen))
    else:
        sys.stdout.write(capset.format_capset(chosen))
    return EXIT_OK


def _cmd_capset_exact(args, parser):
    bound = capset.exact_cap(args.n, budget=args.budget)
    print(bound.size if bound.exact else f">= {bound.size} (budget exhausted)")
    return EXIT_OK if bound.exact else EXIT_NEGATIVE


def _cmd_capset_evolve(args, parser):
    if args.config:
        _require_file(parser, args.config)
        with open(args.config) as handle:
            config = evolve.parse_config_file(handle.read(), n=args.n)
    else:
        config = evolve.EvolveConfig(n=args.n)
    config.seed = args.seed if args.seed is not None else config.seed
    if args.evals is not None:
        config.eval_budget = args.evals
    config.jobs = args.jobs
    generator_command = args.generator_command or os.environ.get("CAPSET_GENERATOR")
    if generator_command:
        config.generator = "external"
        config.generator_command = generator_command
    best, records = evolve.evolve(config)
    if args.log:
        _atomic_write(
            args.log, "".join(evolve.record_to_json(r) + "\n" for r in records)
        )
    print(f"best score {best.score}: {priority.format_expr(best.expr)}")
    return EXIT_OK


# --- eq --------------------------------------------------------------------


def _load_axioms(parser, name):
    if name in equational.AXIOM_SETS:
        return equational.AXIOM_SETS[name], equational.AXIOM_SIGNATURES[name]
    _require_file(parser, name)
    with open(name) as handle:
        return _parse_axiom_file(handle.read(), parser)


_SIGNATURES = {
    "boolean": equational.BOOLEAN_SIG,
    "robbins": equational.ROBBINS_SIG,
    "group": equational.GROUP_SIG,
}


def _parse_axiom_file(text, parser):
    """Axiom file: optional "signature: NAME" line, then "ID: lhs = rhs"."""
    signature = equational.BOOLEAN_SIG
    axioms = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("signature:"):
            name = line.split(":", 1)[1].strip()
            if name not in _SIGNATURES:
                parser.error(f"line {lineno}: unknown signature {name!r}")
            signature = _SIGNATURES[name]
            continue
        if ":" not in line or "=" not in line:
            parser.error(f"line {lineno}: expected 'ID: lhs = rhs'")
        eq_id, _, rest = line.partition(":")
        lhs, _, rhs = rest.partition("=")
        from .logic import parse_term

        axioms[eq_id.strip()] = equational.Equation(
            parse_term(lhs.strip(), signature), parse_term(rhs.strip(), signature)
        )
    return axioms, signature


def _parse_goal(parser, text, signature):
    from .logic import parse_term

    if "=" not in text:
        parser.error("goal must have the form 'lhs = rhs'")
    lhs, _, rhs = text.partition("=")
    return equational.Equation(
        parse_term(lhs.strip(), signature), parse_term(rhs.strip(), signature)
    )


def _parse_precedence(parser, text, signature):
    if text is None:
        if signature is equational.GROUP_SIG:
            return equational.GROUP_PRECEDENCE
        parser.error("--precedence is required for this axiom set")
    symbols = [s.strip() for s in text.split(">")]
    for s in symbols:
        if s not in signature:
            parser.error(f"precedence symbol {s!r} not in signature")
    return {s: len(symbols) - i for i, s in enumerate(symbols)}


def _cmd_eq_prove(args, parser):
    axioms, signature = _load_axioms(parser, args.axioms)
    goal = _parse_goal(parser, args.goal, signature)
    if args.exists:
        result = equational.prove_exists(
            goal, axioms, signature, max_candidates=args.budget
        )
        if isinstance(result, equational.WitnessResult):
            from .logic import format_term, var_name

            witness = ", ".join(
                f"{var_name(v)} := {format_term(t)}"
                for v, t in sorted(result.witness.items())
            )
            print(f"witness found: {witness or '(trivial)'}")
            if args.output:
                _atomic_write(args.output, equational.format_proof(result.proof))
            return EXIT_OK
    else:
        result = equational.prove(
            goal, axioms, max_expansions=args.budget, max_seconds=args.max_seconds
        )
        if isinstance(result, equational.EqProof):
            diagnostics = []
            assert equational.check_proof(result, axioms, goal, diagnostics), diagnostics
            print(f"proof found: {len(result.steps)} steps")
            if args.output:
                _atomic_write(args.output, equational.format_proof(result))
            else:
                sys.stdout.write(equational.format_proof(result))
            return EXIT_OK
    print(
        "timeout: "
        f"{result.equations_generated} equations generated, "
        f"{result.rewrites_attempted} rewrites attempted"
    )
    return EXIT_NEGATIVE


def _cmd_eq_check(args, parser):
    _require_file(parser, args.proof)
    axioms, signature = _load_axioms(parser, args.axioms)
    goal = _parse_goal(parser, args.goal, signature)
    with open(args.proof) as handle:
        proof = equational.parse_proof(handle.read(), signature)
    diagnostics = []
    if equational.check_proof(proof, axioms, goal, diagnostics):
        print(f"proof valid: {len(proof.steps)} steps")
        return EXIT_OK
    for line in diagnostics:
        print(line)
    print("proof invalid")
    return EXIT_NEGATIVE


def _cmd_eq_complete(args, parser):
    axioms, signature = _load_axioms(parser, args.axioms)
    precedence = _parse_precedence(parser, args.precedence, signature)
    try:
        rules = equational.kb_complete(
            list(axioms.values()), precedence, budget=args.budget
        )
    except equational.OrientationError as exc:
        print(f"orientation failure: {exc.equation}")
        return EXIT_NEGATIVE
    except equational.CompletionBudgetExhausted as exc:
        print(f"budget exhausted with {len(exc.partial_rules)} partial rules")
        return EXIT_NEGATIVE
    for rule in rules:
        print(rule)
    return EXIT_OK


# --- classify --------------------------------------------------------------


def _cmd_classify(args, parser):
    _require_file(parser, args.file)
    with open(args.file) as handle:
        formula = hierarchy.parse_formula(handle.read().strip())
    print(hierarchy.classify(formula))
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bruteforge",
        description="Brute-force laboratory: SAT, colorings, cap sets, "
        "equational proofs, quantifier classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sat = sub.add_parser("sat", help="propositional satisfiability")
    sat_sub = p_sat.add_subparsers(dest="subcommand", required=True)
    p = sat_sub.add_parser("solve", help="solve a DIMACS CNF file")
    p.add_argument("cnf")
    p.add_argument("--cert", help="write the refutation certificate here")
    p.add_argument("--model", help="write the satisfying assignment here")
    p.add_argument("--cubes", type=int, default=0, help="split on the first K variables")
    p.set_defaults(handler=_cmd_sat_solve)

    p_bpt = sub.add_parser("bpt", help="Pythagorean-triple colorings")
    bpt_sub = p_bpt.add_subparsers(dest="subcommand", required=True)
    p = bpt_sub.add_parser("encode", help="write the CNF encoding for bound M")
    p.add_argument("m", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_bpt_encode)
    p = bpt_sub.add_parser("solve", help="solve the encoding for bound M")
    p.add_argument("m", type=int)
    p.add_argument("--coloring", help="write the 2-coloring here")
    p.add_argument("--cert", help="write the refutation certificate here")
    p.set_defaults(handler=_cmd_bpt_solve)
    p = bpt_sub.add_parser("scan", help="scan for the first unsatisfiable bound")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--step", type=int, default=100)
    p.add_argument("--cert", help="write the threshold certificate here")
    p.set_defaults(handler=_cmd_bpt_scan)

    p_cap = sub.add_parser("capset", help="cap sets in (Z/3)^n")
    cap_sub = p_cap.add_subparsers(dest="subcommand", required=True)
    p = cap_sub.add_parser("verify", help="verify a cap-set file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_capset_verify)
    p = cap_sub.add_parser("greedy", help="greedy construction from a priority expression")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_capset_greedy)
    p = cap_sub.add_parser("exact", help="exact maximum cap size by branch and bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, help="search-node budget")
    p.set_defaults(handler=_cmd_capset_exact)
    p = cap_sub.add_parser("evolve", help="evolve priority expressions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--log", help="write the JSON-lines run log here")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--evals", type=int, default=None, help="evaluation budget")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--generator-command", help="external generator (or CAPSET_GENERATOR)")
    p.set_defaults(handler=_cmd_capset_evolve)

    p_eq = sub.add_parser("eq", help="equational reasoning")
    eq_sub = p_eq.add_subparsers(dest="subcommand", required=True)
    p = eq_sub.add_parser("prove", help="search for an equational proof")
    p.add_argument("--axioms", required=True, help="robbins | boolean | group | FILE")
    p.add_argument("--goal", required=True, help="equation 'lhs = rhs'")
    p.add_argument("--budget", type=int, default=5000)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--exists", action="store_true",
                   help="treat goal variables as existential; enumerate witnesses")
    p.add_argument("-o", "--output", help="write the proof file here")
    p.set_defaults(handler=_cmd_eq_prove)
    p = eq_sub.add_parser("check", help="replay and validate a proof file")
    p.add_argument("proof")
    p.add_argument("--axioms", required=True)
    p.add_argument("--goal", required=True)
    p.set_defaults(handler=_cmd_eq_check)
    p = eq_sub.add_parser("complete", help="Knuth-Bendix completion")
    p.add_argument("--axioms", required=True)
    p.add_argument("--precedence", help="e.g. 'i>*>e'")
    p.add_argument("--budget", type=int, default=2000)
    p.set_defaults(handler=_cmd_eq_complete)

    p = sub.add_parser("classify", help="quantifier-alternation class of a formula file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_classify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
