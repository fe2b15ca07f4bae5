"""Command-line front end for rule analysis, graph tools and labeling runs.

Exit status: 0 success, 1 semantic failure (rule violations, table
mismatches, non-dominating output), 2 usage or I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .analysis import analyze, bound
from .graph import (
    GraphFormatError,
    boost_girth,
    generate_random_cubic,
    girth,
    read_graph,
    save_graph,
)
from .labeling import NotDominating, run
from .oracle import (
    MAX_EXACT_N,
    TrialConfig,
    TrialFailure,
    exact_domination_number,
    greedy_domination,
    run_trials,
)
from .reproduce import TABLES, compare_bounds, compare_table
from .rules import RuleSyntaxError, bundled, check_complete, check_correct, expand, load_rule_set

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rules(name: str):
    path = Path(name)
    if path.exists():
        return load_rule_set(path)
    if name in ("example10", "main79"):
        return bundled(name)
    raise UsageError(f"rule file not found: {name}")


def _levels(value: str) -> int:
    k = int(value)
    if k < 2:
        raise argparse.ArgumentTypeError("the number of levels must be at least 2")
    return k


def _gen_size(value: str) -> int:
    # accepts "20000" or "n=20000"
    n = int(value.split("=", 1)[1] if value.startswith("n=") else value)
    if n < 4 or n % 2:
        raise argparse.ArgumentTypeError("n must be even and at least 4")
    return n


def cmd_rules_check(args) -> int:
    rs = _rules(args.file)
    problems = check_correct(rs) + check_complete(rs)
    for v in problems:
        print(v)
    ers = expand(rs)
    status = "OK" if not problems else f"{len(problems)} violation(s)"
    print(f"{rs.name}: {len(rs)} rules, {len(ers)} expanded, max length {rs.max_length}: {status}")
    return OK if not problems else FAIL


def cmd_rules_expand(args) -> int:
    ers = expand(_rules(args.file))
    for rule, origin in zip(ers.rules, ers.origin):
        print(f"{rule}\t# from rule {origin + 1}")
    return OK


def cmd_analyze(args) -> int:
    rs = _rules(args.rules)
    problems = check_correct(rs) + check_complete(rs)
    if problems:
        for v in problems:
            print(v, file=sys.stderr)
        return FAIL
    table = analyze(rs, args.levels)
    if args.json:
        print(table.to_json())
        return OK
    levels = None
    if args.rows:
        levels = [int(x) for x in args.rows.split(",")]
        if any(not 1 <= i <= args.levels for i in levels):
            raise UsageError(f"--rows must lie in 1..{args.levels}")
    sys.stdout.write(table.to_tsv(levels))
    if not args.tsv:
        print(f"bound = {bound(table).bound:.6f}")
    return OK


def cmd_graph_gen(args) -> int:
    g = generate_random_cubic(args.n, args.seed)
    if args.girth:
        res = boost_girth(g, args.girth, args.seed, args.max_iters)
        g = res.graph
        print(f"# girth {res.girth} after {res.swaps} swaps", file=sys.stderr)
        if not res.converged:
            print(f"# target girth {args.girth} not reached", file=sys.stderr)
    text = save_graph(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_graph_girth(args) -> int:
    rep = girth(read_graph(args.file))
    print(f"girth = {rep.girth}")
    if rep.cycle:
        print("cycle = " + " ".join(map(str, rep.cycle)))
    return OK


def cmd_simulate(args) -> int:
    rs = _rules(args.rules)
    if args.graph:
        g = read_graph(args.graph)
        if not g.is_cubic():
            raise UsageError("graph is not cubic")
        try:
            res = run(g, rs, args.levels, args.seed, g_override=args.path_girth)
        except NotDominating as exc:
            print(f"NOT DOMINATING: {exc}")
            return FAIL
        st = res.stats
        print(st.to_json() if args.json else f"|D| = {st.size}  n = {st.n}  ratio = {st.ratio:.6f}")
        return OK
    if not args.gen:
        raise UsageError("give --graph FILE or --gen N")
    cfg = TrialConfig(
        rules=args.rules if Path(args.rules).exists() else rs.name,
        K=args.levels,
        n=args.gen,
        g_target=args.girth,
        seeds=list(range(args.seed, args.seed + args.trials)),
        path_girth=args.path_girth,
        max_iters=args.max_iters,
        jobs=args.jobs,
    )
    try:
        report = run_trials(cfg)
    except TrialFailure as exc:
        print(f"FAILED: {exc}")
        return FAIL
    print(report.to_json() if args.json else report.table())
    return OK


def cmd_oracle(args) -> int:
    g = read_graph(args.file)
    greedy = greedy_domination(g)
    print(f"greedy = {len(greedy)}")
    if g.n > MAX_EXACT_N:
        print(f"exact search skipped (n = {g.n} > {MAX_EXACT_N})")
        return OK
    res = exact_domination_number(g)
    print(f"gamma = {res.gamma}  witness = {sorted(res.witness)}  nodes = {res.nodes_explored}")
    return OK


def cmd_reproduce(args) -> int:
    failed = False
    if args.target == "bounds":
        parts = []
        for name, K, printed, value, ok in compare_bounds():
            failed |= not ok
            print(f"{name} K={K}: computed {value:.7f} printed {printed:.6f} {'OK' if ok else 'MISMATCH'}")
            parts.append(f"{printed:.6f} {'OK' if ok else 'MISMATCH'}")
        print(", ".join(parts))
    else:
        table, cells = compare_table(args.target)
        for level in sorted({c.level for c in cells}):
            row = [c for c in cells if c.level == level]
            bad = [c for c in row if not c.ok]
            failed |= bool(bad)
            print(f"row {level}: {'OK' if not bad else 'MISMATCH'}")
            for c in bad:
                print(f"  {c}")
        print(f"bound = {bound(table).bound:.6f}")
    return FAIL if failed else OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubicdom", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    rules = sub.add_parser("rules", help="validate or expand a rule file")
    rsub = rules.add_subparsers(dest="action", required=True)
    for name, fn in (("check", cmd_rules_check), ("expand", cmd_rules_expand)):
        sp = rsub.add_parser(name)
        sp.add_argument("file")
        sp.set_defaults(func=fn)

    an = sub.add_parser("analyze", help="level probability table and bound")
    an.add_argument("--rules", required=True)
    an.add_argument("--levels", "-K", type=_levels, required=True)
    fmt = an.add_mutually_exclusive_group()
    fmt.add_argument("--tsv", action="store_true", help="table only")
    fmt.add_argument("--json", action="store_true")
    an.add_argument("--rows", help="comma-separated levels to print")
    an.set_defaults(func=cmd_analyze)

    gr = sub.add_parser("graph", help="generate graphs or measure girth")
    gsub = gr.add_subparsers(dest="action", required=True)
    gen = gsub.add_parser("gen")
    gen.add_argument("--n", type=_gen_size, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--girth", type=int)
    gen.add_argument("--max-iters", type=int, default=200_000)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_graph_gen)
    gg = gsub.add_parser("girth")
    gg.add_argument("file")
    gg.set_defaults(func=cmd_graph_girth)

    sim = sub.add_parser("simulate", help="run the labeling procedure")
    src = sim.add_mutually_exclusive_group()
    src.add_argument("--graph")
    src.add_argument("--gen", type=_gen_size, metavar="N")
    sim.add_argument("--girth", type=int, default=6, help="girth target for --gen")
    sim.add_argument("--rules", required=True)
    sim.add_argument("--levels", "-K", type=_levels, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--trials", type=int, default=1)
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--path-girth", type=int,
                     help="girth parameter for path lengths (default: measured girth)")
    sim.add_argument("--max-iters", type=int, default=200_000)
    sim.add_argument("--json", action="store_true")
    sim.set_defaults(func=cmd_simulate)

    orc = sub.add_parser("oracle", help="exact and greedy domination numbers")
    orc.add_argument("file")
    orc.set_defaults(func=cmd_oracle)

    rep = sub.add_parser("reproduce", help="recompute published tables and bounds")
    rep.add_argument("target", choices=sorted(TABLES) + ["bounds"])
    rep.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, RuleSyntaxError, GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
