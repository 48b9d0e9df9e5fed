"""Command-line front end.

Subcommands::

    otearley intersect -g G.mcfg -a M.wfsa [-o OUT.mcfg] [--annotated] [--dump-chart]
    otearley eval -g G.mcfg -c C1.wfsa [-c C2.wfsa ...] [-o OUT.mcfg]
    otearley enumerate (-g G.mcfg | -a M.wfsa) --max-len N
    otearley gen-redup --tiers C,V [--direction red-first|base-first] [-o OUT.mcfg]
    otearley encode [TABLE.tiers]
    otearley decode --tiers C,V [FLAT.txt]

Empty-language results are printed as an ``%empty`` grammar with exit code
0; malformed input exits nonzero with a message on stderr.
"""

from __future__ import annotations

import argparse
import sys

from .chart import intersect, success_items
from .errors import EmptyCandidateSetError, OtearleyError
from .fsa import parse_automaton
from .grammar import decompose, enumerate_strings, format_grammar, parse_grammar
from .fsa import enumerate_accepted
from .otp import (
    ConstraintRanking,
    TierInventory,
    decode_table,
    encode_table,
    evaluate,
    format_tier_table,
    gen_redup_grammar,
    optimal_intersection,
    parse_tier_table,
)


def _read(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write_output(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _tier_list(spec):
    tiers = [name.strip() for name in spec.split(",") if name.strip()]
    if not tiers:
        raise OtearleyError(f"--tiers {spec!r} names no tiers")
    return tiers


def _cmd_intersect(args):
    grammar = parse_grammar(_read(args.grammar))
    automaton = parse_automaton(_read(args.automaton))
    if args.dump_chart:
        chart = intersect(decompose(grammar), automaton)
        sys.stderr.write(chart.dump())
        sys.stderr.write(f"success items: {success_items(chart)}\n")
    result = optimal_intersection(grammar, automaton,
                                  keep_decorations=args.annotated)
    _write_output(format_grammar(result), args.output)
    return 0


def _cmd_eval(args):
    grammar = parse_grammar(_read(args.grammar))
    constraints = [parse_automaton(_read(path)) for path in args.constraint]
    ranking = ConstraintRanking(constraints)
    for rank, problem in ranking.problems():
        sys.stderr.write(f"warning: constraint {rank}: {problem}\n")
    result = evaluate(grammar, ranking)
    _write_output(format_grammar(result), args.output)
    return 0


def _cmd_enumerate(args):
    if (args.grammar is None) == (args.automaton is None):
        raise OtearleyError("enumerate needs exactly one of -g or -a")
    if args.grammar is not None:
        found = enumerate_strings(parse_grammar(_read(args.grammar)),
                                  args.max_len)
    else:
        found = enumerate_accepted(parse_automaton(_read(args.automaton)),
                                   args.max_len)
    for tokens in sorted(found, key=lambda t: (len(t), t)):
        sys.stdout.write(f"{' '.join(tokens)}\t{found[tokens]}\n")
    return 0


def _cmd_gen_redup(args):
    grammar = gen_redup_grammar(_tier_list(args.tiers), args.direction)
    _write_output(format_grammar(grammar), args.output)
    return 0


def _cmd_encode(args):
    table = parse_tier_table(_read(args.table))
    sys.stdout.write(encode_table(table) + "\n")
    return 0


def _cmd_decode(args):
    inventory = TierInventory(_tier_list(args.tiers))
    flat = "".join(_read(args.flat).split())
    table = decode_table(flat, inventory)
    sys.stdout.write(format_tier_table(table))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otearley",
        description="Weighted grammar/automaton intersection and "
                    "ranked-constraint evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("intersect",
                       help="keep a grammar's minimum-weight strings under "
                            "an automaton")
    p.add_argument("-g", "--grammar", required=True)
    p.add_argument("-a", "--automaton", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--annotated", action="store_true",
                   help="keep state decorations on category names")
    p.add_argument("--dump-chart", action="store_true",
                   help="print the chart to stderr")
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("eval",
                       help="winnow a candidate grammar through ranked "
                            "constraints (order = rank)")
    p.add_argument("-g", "--grammar", required=True)
    p.add_argument("-c", "--constraint", action="append", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("enumerate",
                       help="list derivable/accepted strings with weights")
    p.add_argument("-g", "--grammar")
    p.add_argument("-a", "--automaton")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("gen-redup",
                       help="emit the reduplication candidate grammar")
    p.add_argument("--tiers", required=True,
                   help="comma-separated surface tier names, e.g. C,V")
    p.add_argument("--direction", choices=("red-first", "base-first"),
                   default="red-first")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen_redup)

    p = sub.add_parser("encode", help="flatten a tier table to a string")
    p.add_argument("table", nargs="?", help="table file (default stdin)")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="rebuild a tier table from a string")
    p.add_argument("--tiers", required=True,
                   help="comma-separated surface tier names")
    p.add_argument("flat", nargs="?", help="flat string file (default stdin)")
    p.set_defaults(func=_cmd_decode)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OtearleyError, EmptyCandidateSetError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
