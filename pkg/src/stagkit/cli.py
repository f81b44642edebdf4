"""Command-line interface.

Exit status: 0 on success, 1 when a required result came up empty (no
parse, no transduction, nothing enumerated), 2 on usage or load errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import LoadError, StagError
from .derivation import MULTI, STANDARD
from .grammar_io import (
    load_document,
    read_grammar_source,
    serialize_mctag,
    serialize_tag,
)
from .parsing import parse, transduce
from .render import (
    derivation_inline,
    derivation_text,
    derivation_dot,
    pair_dot,
    pair_text,
    tree_dot,
    tree_text,
)
from .rewriting import complete_traces, enumerate_rewriting
from .sync import LEFT, RIGHT, SynchronousGrammar, enumerate_natural, project, to_mctag
from . import trees as T

PAIR_SEP = " ||| "


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="stagkit",
        description="Synchronous tree-adjoining grammar toolkit",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_grammar(p: argparse.ArgumentParser) -> None:
        p.add_argument("-g", "--grammar", required=True, help="grammar file or fixture name")

    p = sub.add_parser("parse", help="parse a string with the left projection")
    add_grammar(p)
    p.add_argument("-m", "--mode", choices=["std", "multi"], default="multi")
    p.add_argument("tokens", help="input string (tokenized per the grammar's options)")

    p = sub.add_parser("transduce", help="map a left string to its right strings")
    add_grammar(p)
    p.add_argument("tokens")

    p = sub.add_parser("rewrite", help="bounded enumeration under link rewriting")
    add_grammar(p)
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="show one step trace per result")

    p = sub.add_parser("enumerate", help="bounded string-pair language")
    add_grammar(p)
    p.add_argument("--mode", choices=["natural", "rewriting"], required=True)
    p.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("project", help="emit one constraint-mapped component as a TAG")
    add_grammar(p)
    p.add_argument("--side", choices=[LEFT, RIGHT], required=True)

    p = sub.add_parser("to-mctag", help="emit the multicomponent tree-set reduction")
    add_grammar(p)

    p = sub.add_parser("render", help="render a pair, a derivation, or a derived tree")
    add_grammar(p)
    p.add_argument(
        "--what",
        required=True,
        help="pair:<name> | derivation:<tokens> | derived:<tokens>",
    )
    p.add_argument("--dot", action="store_true")
    return top


def _load_sync(spec: str) -> SynchronousGrammar:
    doc = load_document(read_grammar_source(spec))
    if not isinstance(doc, SynchronousGrammar):
        raise LoadError("this command needs a synchronous grammar document")
    return doc


def _mode(flag: str) -> str:
    return STANDARD if flag == "std" else MULTI


def _cmd_parse(args: argparse.Namespace) -> int:
    doc = load_document(read_grammar_source(args.grammar))
    if isinstance(doc, SynchronousGrammar):
        from .sync import project_left

        trees = {t.name: t for t in project_left(doc)}
        tokens = doc.options.tokenize(args.tokens, LEFT)
    else:
        _, tree_list = doc
        trees = {t.name: t for t in tree_list}
        tokens = args.tokens.split()
    forest = parse(trees, tokens, _mode(args.mode))
    derivs = sorted(forest.derivations(), key=derivation_inline)
    print(f"derivations: {len(derivs)}")
    for deriv in derivs:
        print(derivation_inline(deriv))
    return 0 if derivs else 1


def _cmd_transduce(args: argparse.Namespace) -> int:
    grammar = _load_sync(args.grammar)
    tokens = grammar.options.tokenize(args.tokens, LEFT)
    outputs = sorted(transduce(grammar, tokens))
    for out in outputs:
        print(out)
    return 0 if outputs else 1


def _cmd_rewrite(args: argparse.Namespace) -> int:
    grammar = _load_sync(args.grammar)
    if args.trace:
        traces = complete_traces(grammar, args.max_steps)
        printed = set()
        for trace in traces:
            left, right = trace.final.tokens()
            line = (
                grammar.options.join(left, LEFT)
                + PAIR_SEP
                + grammar.options.join(right, RIGHT)
            )
            if line in printed:
                continue
            printed.add(line)
            print(line)
            print(f"  start: {trace.initial_pair}")
            for k, step in enumerate(trace.steps, start=1):
                print(
                    f"  step {k}: {step.pair_name} at "
                    f"{T.format_address(step.link.left)} ⌢ "
                    f"{T.format_address(step.link.right)}"
                )
        return 0 if traces else 1
    results = sorted(enumerate_rewriting(grammar, args.max_steps))
    for left, right in results:
        print(left + PAIR_SEP + right)
    return 0 if results else 1


def _cmd_enumerate(args: argparse.Namespace) -> int:
    grammar = _load_sync(args.grammar)
    if args.mode == "natural":
        results = sorted(enumerate_natural(grammar, args.bound))
    else:
        results = sorted(enumerate_rewriting(grammar, args.bound))
    for left, right in results:
        print(left + PAIR_SEP + right)
    return 0 if results else 1


def _cmd_project(args: argparse.Namespace) -> int:
    grammar = _load_sync(args.grammar)
    trees = project(grammar, args.side)
    sys.stdout.write(serialize_tag(f"{grammar.name}.{args.side}", trees))
    return 0


def _cmd_to_mctag(args: argparse.Namespace) -> int:
    grammar = _load_sync(args.grammar)
    sys.stdout.write(serialize_mctag(to_mctag(grammar)))
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    grammar = _load_sync(args.grammar)
    what = args.what
    if ":" not in what:
        raise LoadError("--what takes pair:<name>, derivation:<tokens>, or derived:<tokens>")
    kind, _, rest = what.partition(":")
    if kind == "pair":
        pair = grammar.pair(rest)
        print(pair_dot(pair) if args.dot else pair_text(pair))
        return 0
    from .sync import project_left
    from .derivation import interpret

    trees = {t.name: t for t in project_left(grammar)}
    tokens = grammar.options.tokenize(rest, LEFT)
    forest = parse(trees, tokens)
    derivs = sorted(forest.derivations(), key=derivation_inline)
    if not derivs:
        print("no derivation", file=sys.stderr)
        return 1
    if kind == "derivation":
        for i, deriv in enumerate(derivs):
            print(derivation_dot(deriv, f"d{i}") if args.dot else derivation_text(deriv))
        return 0
    if kind == "derived":
        for deriv in derivs:
            derived = interpret(deriv, trees)
            print(tree_dot(derived) if args.dot else tree_text(derived))
        return 0
    raise LoadError(f"unknown render target {kind!r}")


_COMMANDS = {
    "parse": _cmd_parse,
    "transduce": _cmd_transduce,
    "rewrite": _cmd_rewrite,
    "enumerate": _cmd_enumerate,
    "project": _cmd_project,
    "to-mctag": _cmd_to_mctag,
    "render": _cmd_render,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except LoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
