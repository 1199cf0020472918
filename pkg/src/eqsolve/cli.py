"""Command-line front end: decide, equiv, oracle, dump-system, and bench.

Exit codes are the machine contract: 0 = SAT / equivalent, 1 = UNSAT / not
equivalent, 2 = error (parse, validation, guard), 3 = oracle disagreement.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time

from .domains import DomainError, make_domain
from .groups import (GroupError, brute_force_solve, evaluate_word,
                     full_pattern, make_group, word_variables)
from .poly import PolyError
from .problemfile import (ParseError, ProblemFile, _as_int, _as_list,
                          _factor_prime_power, _split_sections,
                          parse_problem_file)
from .reduction import build_system, decide_equation, separating_substitution
from .rings import (RNeg, RingError, RSum, brute_force_ring_solve,
                    build_ring_system, decide_factor_ring,
                    decide_ring_equation, enumerate_ideal)
from .solver import DEFAULT_GUARD, GuardExceeded, PolySystem, SolverError

_ERRORS = (ParseError, GuardExceeded, DomainError, GroupError, RingError,
           PolyError, SolverError, OSError, ValueError)


def render_system(system: PolySystem) -> str:
    """Stable text dump of a polynomial system plus its domain table."""
    lines = ["# system over %r: %d constraints, %d variables"
             % (system.domain, len(system.constraints), len(system.domains))]
    for c in system.constraints:
        lines.append("constraint %r = %r" % (c.poly, c.target))
    full = tuple(system.domain.elements())
    for v in sorted(system.domains, key=lambda v: v.name):
        values = system.domains[v]
        if tuple(values) == full:
            lines.append("domain %s = %r" % (v.name, system.domain))
        else:
            lines.append("domain %s = {%s}"
                         % (v.name, ", ".join(repr(s) for s in values)))
    return "\n".join(lines) + "\n"


def _print_witness(witness):
    for name in sorted(witness):
        print("  %s = %r" % (name, witness[name]))


def _problem_system(pf: ProblemFile):
    if pf.kind == "group":
        return build_system(pf.group, pf.lhs, pf.rhs).system
    rhs = pf.rhs
    expr = pf.lhs
    if pf.ideal_generators:
        expr = RSum((expr, RNeg(rhs)))
        rhs = pf.ring.zero()
    return build_ring_system(pf.ring, expr, rhs).system


def cmd_decide(args) -> int:
    pf = parse_problem_file(args.path)
    if args.dump_system:
        with open(args.dump_system, "w", encoding="utf-8") as handle:
            handle.write(render_system(_problem_system(pf)))
    if pf.kind == "group":
        decision = decide_equation(pf.group, pf.lhs, pf.rhs,
                                   guard=args.guard, backend=args.backend)
    elif pf.ideal_generators:
        ideal = enumerate_ideal(pf.ring, pf.ideal_generators)
        expr = RSum((pf.lhs, RNeg(pf.rhs)))
        decision = decide_factor_ring(pf.ring, ideal, expr,
                                      guard=args.guard, backend=args.backend)
    else:
        decision = decide_ring_equation(pf.ring, pf.lhs, pf.rhs,
                                        guard=args.guard, backend=args.backend)
    print("SAT" if decision.sat else "UNSAT")
    if decision.sat and decision.witness is not None:
        _print_witness(decision.witness)
        if decision.ideal_element is not None:
            print("  (ideal element %r)" % decision.ideal_element)
    print("explored %d assignments, %d prunes"
          % (decision.stats.explored, decision.stats.prunes))
    if args.oracle:
        oracle = _run_oracle(pf, args.guard)
        if oracle.sat != decision.sat:
            print("ORACLE DISAGREES: oracle says %s"
                  % ("SAT" if oracle.sat else "UNSAT"))
            return 3
        print("oracle agrees (%s)" % ("SAT" if oracle.sat else "UNSAT"))
    return 0 if decision.sat else 1


def _run_oracle(pf: ProblemFile, guard):
    if pf.kind == "group":
        return brute_force_solve(pf.group, pf.lhs, pf.rhs, guard=guard)
    ideal = (enumerate_ideal(pf.ring, pf.ideal_generators)
             if pf.ideal_generators else None)
    return brute_force_ring_solve(pf.ring, pf.lhs, pf.rhs, ideal=ideal,
                                  guard=guard)


def cmd_oracle(args) -> int:
    pf = parse_problem_file(args.path)
    decision = _run_oracle(pf, args.guard)
    print("SAT" if decision.sat else "UNSAT")
    if decision.sat and decision.witness:
        _print_witness(decision.witness)
    return 0 if decision.sat else 1


def cmd_equiv(args) -> int:
    pf = parse_problem_file(args.path)
    if pf.kind != "group":
        raise ParseError("equiv expects a [group] problem with two words")
    rhs = pf.rhs
    if not isinstance(rhs, tuple):
        rhs = (rhs,)
    witness = separating_substitution(pf.group, pf.lhs, rhs,
                                      guard=args.guard, backend=args.backend)
    if witness is None:
        print("EQUIVALENT")
        return 0
    print("NOT EQUIVALENT")
    _print_witness(witness)
    left = evaluate_word(pf.group, pf.lhs, witness)
    right = evaluate_word(pf.group, rhs, witness)
    print("  lhs value = %r" % left)
    print("  rhs value = %r" % right)
    if left == right:
        raise RuntimeError("internal error: separating substitution failed")
    return 1


def cmd_dump_system(args) -> int:
    pf = parse_problem_file(args.path)
    text = render_system(_problem_system(pf))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- bench ----------------------------------------------------------------

BENCH_HEADER = ("family", "m", "q", "n", "variables", "rep",
                "sym_size_total", "sym_size_top", "reduce_ms", "solve_ms",
                "verdict", "explored", "prunes", "oracle_ms",
                "oracle_verdict", "agree")

_FAMILY_KEYS = {"name", "q", "m", "pattern", "orders", "lengths",
                "variables", "reps"}


def parse_bench_config(text: str):
    """Bench config: repeatable [family] sections describing instance grids."""
    families = []
    for name, header_line, entries in _split_sections(text):
        if name != "family":
            raise ParseError("unknown section [%s] in bench config" % name,
                             header_line)
        table = {}
        for lineno, key, value in entries:
            if key not in _FAMILY_KEYS:
                raise ParseError("unknown key %r" % key, lineno)
            table[key] = (lineno, value)
        def need(key):
            if key not in table:
                raise ParseError("missing key %r in [family]" % key,
                                 header_line)
            return table[key]
        lineno, value = need("q")
        p, k = _factor_prime_power(_as_int(value, lineno), lineno)
        domain = make_domain(p, k, "field")
        lineno, value = need("m")
        m = _as_int(value, lineno)
        lineno, value = need("pattern")
        pattern = (full_pattern(m) if value.strip() == "full"
                   else tuple((int(i), int(j))
                              for i, j in _as_list(value, lineno)))
        lineno, value = need("orders")
        orders = _as_list(value, lineno)
        group = make_group(domain, m, pattern, orders)
        lineno, value = need("lengths")
        lengths = tuple(int(n) for n in _as_list(value, lineno))
        lineno, value = need("variables")
        variables = _as_int(value, lineno)
        reps = 1
        if "reps" in table:
            reps = _as_int(*reversed(table["reps"]))
        label = table["name"][1] if "name" in table else "family%d" % (
            len(families) + 1)
        families.append((label, group, lengths, variables, reps))
    if not families:
        raise ParseError("bench config has no [family] sections")
    return families


def _bench_word(group, n, nvars, rng):
    """All-distinct variables when enough are allowed, else seeded choices."""
    names = ["v%d" % (i + 1) for i in range(nvars)]
    if nvars >= n:
        return tuple(names[:n])
    return tuple(rng.choice(names) for _ in range(n))


def cmd_bench(args) -> int:
    with open(args.config, "r", encoding="utf-8") as handle:
        families = parse_bench_config(handle.read())
    rng = random.Random(args.seed)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out \
        else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(BENCH_HEADER)
        for label, group, lengths, nvars, reps in families:
            identity = group.identity()
            for n in lengths:
                for rep in range(reps):
                    word = _bench_word(group, n, nvars, rng)
                    t0 = time.perf_counter()
                    reduced = build_system(group, word, identity)
                    reduce_ms = 1000 * (time.perf_counter() - t0)
                    top = reduced.lhs_matrix.entry(1, group.m)
                    total = sum(poly.product_length() for (i, j), poly
                                in reduced.lhs_matrix.upper_entries() if i < j)
                    t0 = time.perf_counter()
                    explored = prunes = ""
                    try:
                        decision = decide_equation(group, word, identity,
                                                   guard=args.guard)
                        verdict = "SAT" if decision.sat else "UNSAT"
                        explored = decision.stats.explored
                        prunes = decision.stats.prunes
                    except GuardExceeded:
                        verdict = "guard-exceeded"
                    solve_ms = 1000 * (time.perf_counter() - t0)
                    space = group.order ** len(word_variables(word))
                    if space <= args.guard:
                        t0 = time.perf_counter()
                        oracle = brute_force_solve(group, word, identity,
                                                   guard=args.guard)
                        oracle_ms = "%.3f" % (1000 * (time.perf_counter() - t0))
                        oracle_verdict = "SAT" if oracle.sat else "UNSAT"
                        agree = "yes" if oracle_verdict == verdict else "no"
                    else:
                        oracle_ms = "skipped"
                        oracle_verdict = "skipped"
                        agree = ""
                    writer.writerow([
                        label, group.m, group.domain.size, n, nvars, rep,
                        total, top.product_length(),
                        "%.3f" % reduce_ms, "%.3f" % solve_ms, verdict,
                        explored, prunes, oracle_ms, oracle_verdict, agree])
    finally:
        if args.out:
            out.close()
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="eqsolve",
        description="Decide equation solvability over semipattern matrix "
                    "groups and nilpotent matrix rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--guard", type=int, default=DEFAULT_GUARD,
                       help="max search-space size (default %d)" % DEFAULT_GUARD)
        p.add_argument("--backend", default="pruned",
                       choices=("pruned", "naive"), help="solver backend")

    p = sub.add_parser("decide", help="decide solvability of a problem file")
    p.add_argument("path")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force oracle")
    p.add_argument("--dump-system", metavar="PATH",
                   help="write the reduced polynomial system to PATH")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("equiv", help="decide whether lhs and rhs agree "
                                     "under every substitution")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("oracle", help="run only the brute-force oracle")
    p.add_argument("path")
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dump-system", help="print the reduced polynomial system")
    p.add_argument("path")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_dump_system)

    p = sub.add_parser("bench", help="run a benchmark family grid, CSV output")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
