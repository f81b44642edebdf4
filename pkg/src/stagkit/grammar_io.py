"""The grammar document format.

A synchronous grammar document::

    ; adverb scope demo
    grammar blink
    option tokens left words
    option tokens right fused

    pair blink
      left  (S #1 (NP ↓ #3) (VP #2 (V blinked)))
      right (F #1 #2 (R "blink(") (T ↓ #3) ")")

Trees are s-expressions ``(Label marker... child...)``.  Children are
nested nodes, bare or quoted atoms (terminals), or ``<eps>``.  Markers:
``↓`` substitution, ``*`` foot, ``:NA`` ``:OA`` ``:SA(n,...)`` adjoining
constraints, ``:mod``/``:pred`` tree class (root only), and ``#k`` link
diacritics with an optional side suffix (``#2^`` top, ``#2v`` bottom; bare
diacritics take the document's default side).  Every diacritic must appear
exactly once in each component of its pair.  Terminals that would read as
markers must be quoted.

A plain-TAG document uses the header ``tag NAME`` and ``tree NAME SEXPR``
statements; projections are emitted in this form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import GrammarError, LoadError
from . import trees as T
from .sync import (
    FUSED,
    LEFT,
    RIGHT,
    WORDS,
    GrammarOptions,
    Link,
    MCTagGrammar,
    SynchronousGrammar,
    TreePair,
)
from .trees import Constraint, ElementaryTree, Node

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>;[^\n]*)
      | (?P<sa>:SA\([^)\s]*\))
      | (?P<open>\()
      | (?P<close>\))
      | (?P<quoted>"(?:[^"\\]|\\.)*")
      | (?P<atom>[^\s()";]+)
    """,
    re.VERBOSE,
)

_PLAIN_ATOM = re.compile(r"[A-Za-z0-9_.+'&/=,-]+\Z")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "(", ")", "atom", "quoted"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    out: list[_Tok] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LoadError(f"unreadable input {text[pos:pos + 10]!r}", line, col)
        chunk = m.group(0)
        kind = m.lastgroup
        if kind == "open":
            out.append(_Tok("(", chunk, line, col))
        elif kind == "close":
            out.append(_Tok(")", chunk, line, col))
        elif kind == "quoted":
            out.append(_Tok("quoted", chunk, line, col))
        elif kind in ("atom", "sa"):
            out.append(_Tok("atom", chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    return out


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, expect: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else None
            raise LoadError(
                "unexpected end of document",
                last.line if last else 1,
                last.column if last else 1,
            )
        if expect is not None and tok.kind != expect:
            raise LoadError(f"expected {expect!r}, found {tok.text!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def atom(self, what: str) -> _Tok:
        tok = self.next()
        if tok.kind != "atom":
            raise LoadError(f"expected {what}, found {tok.text!r}", tok.line, tok.column)
        return tok


_MARKER_SUBST = "↓"
_MARKER_FOOT = "*"
_SIDE_SUFFIX = {"^": T.TOP, "v": T.BOTTOM}


@dataclass
class _TreeDraft:
    node: Node
    foot: T.Address | None
    diacritics: list[tuple[int, str | None, T.Address]]
    tree_class: str | None
    start: _Tok


def _parse_tree(reader: _Reader, allow_links: bool) -> _TreeDraft:
    start = reader.peek()
    if start is None or start.kind != "(":
        tok = reader.next()
        raise LoadError(f"expected a tree, found {tok.text!r}", tok.line, tok.column)

    diacritics: list[tuple[int, str | None, T.Address]] = []
    feet: list[T.Address] = []
    classes: list[tuple[str, T.Address, _Tok]] = []

    def node_from(tok: _Tok) -> Node:
        if tok.kind == "quoted":
            return T.terminal(_unquote(tok.text))
        if tok.text == "<eps>":
            return T.epsilon()
        return T.terminal(tok.text)

    def parse_node(addr: T.Address) -> Node:
        reader.next("(")
        label_tok = reader.next()
        if label_tok.kind not in ("atom", "quoted"):
            raise LoadError("a node needs a label", label_tok.line, label_tok.column)
        label = _unquote(label_tok.text) if label_tok.kind == "quoted" else label_tok.text
        subst = False
        is_foot = False
        allowed: str | frozenset[str] = T.ANY_ALLOWED
        obligatory = False
        saw_na = False
        children: list[Node] = []
        while True:
            tok = reader.peek()
            if tok is None:
                raise LoadError("unclosed node", label_tok.line, label_tok.column)
            if tok.kind == ")":
                reader.next()
                break
            if tok.kind == "(":
                children.append(parse_node(addr + (len(children) + 1,)))
                continue
            tok = reader.next()
            text = tok.text
            if tok.kind == "quoted":
                children.append(node_from(tok))
            elif text == _MARKER_SUBST:
                subst = True
            elif text == _MARKER_FOOT:
                is_foot = True
            elif text == ":NA":
                saw_na = True
            elif text == ":OA":
                obligatory = True
            elif text.startswith(":SA("):
                names = [n for n in text[4:-1].split(",") if n]
                allowed = frozenset(names)
            elif text in (":mod", ":pred"):
                classes.append((text[1:], addr, tok))
            elif text.startswith(":"):
                raise LoadError(f"unknown marker {text!r}", tok.line, tok.column)
            elif text.startswith("#"):
                if not allow_links:
                    raise LoadError("link diacritics are not allowed here", tok.line, tok.column)
                body = text[1:]
                side = None
                if body and body[-1] in _SIDE_SUFFIX:
                    side = _SIDE_SUFFIX[body[-1]]
                    body = body[:-1]
                if not body.isdigit():
                    raise LoadError(f"bad link diacritic {text!r}", tok.line, tok.column)
                diacritics.append((int(body), side, addr))
            else:
                children.append(node_from(tok))
        if saw_na:
            if obligatory:
                raise LoadError(
                    ":NA and :OA cannot both mark a node", label_tok.line, label_tok.column
                )
            if isinstance(allowed, frozenset):
                raise LoadError(
                    ":NA and :SA cannot both mark a node", label_tok.line, label_tok.column
                )
            allowed = T.NONE_ALLOWED
        if is_foot:
            feet.append(addr)
        constraint = Constraint(allowed, obligatory)
        return Node(label, T.NONTERMINAL, tuple(children), constraint, subst)

    node = parse_node(())
    for kind, addr, tok in classes:
        if addr != ():
            raise LoadError(f":{kind} belongs on the root node", tok.line, tok.column)
    if len(feet) > 1:
        raise LoadError("a tree can have at most one foot", start.line, start.column)
    tree_class = {"mod": T.MODIFIER, "pred": T.PREDICATIVE}.get(classes[0][0]) if classes else None
    return _TreeDraft(node, feet[0] if feet else None, diacritics, tree_class, start)


def _build_elementary(name: str, draft: _TreeDraft) -> ElementaryTree:
    kind = T.AUXILIARY if draft.foot is not None else T.INITIAL
    if draft.tree_class and kind == T.INITIAL:
        raise LoadError(
            "tree classes only apply to auxiliary trees",
            draft.start.line,
            draft.start.column,
        )
    tree_class = draft.tree_class or T.PREDICATIVE
    try:
        return ElementaryTree(name, kind, draft.node, draft.foot, tree_class)
    except GrammarError as exc:
        raise LoadError(str(exc), draft.start.line, draft.start.column) from exc


def _assemble_links(
    name: str,
    left: _TreeDraft,
    right: _TreeDraft,
    default_side: str,
) -> frozenset[Link]:
    def collect(draft: _TreeDraft, which: str) -> dict[int, tuple[str, T.Address]]:
        seen: dict[int, tuple[str, T.Address]] = {}
        for k, side, addr in draft.diacritics:
            if k in seen:
                raise LoadError(
                    f"pair {name}: diacritic #{k} appears twice in the {which} tree",
                    draft.start.line,
                    draft.start.column,
                )
            seen[k] = (side or default_side, addr)
        return seen

    lefts = collect(left, "left")
    rights = collect(right, "right")
    if set(lefts) != set(rights):
        missing = sorted(set(lefts) ^ set(rights))
        raise LoadError(
            f"pair {name}: diacritic #{missing[0]} must appear once in each tree",
            left.start.line,
            left.start.column,
        )
    links = set()
    for k in lefts:
        lside, laddr = lefts[k]
        rside, raddr = rights[k]
        links.add(Link(laddr, raddr, lside, rside))
    return frozenset(links)


def load_document(text: str) -> SynchronousGrammar | tuple[str, list[ElementaryTree]]:
    """Load a document: a SynchronousGrammar for ``grammar`` headers, a
    ``(name, trees)`` tuple for ``tag`` headers."""
    reader = _Reader(text)
    head = reader.atom("a document header")
    if head.text not in ("grammar", "tag"):
        raise LoadError(
            f"expected 'grammar' or 'tag', found {head.text!r}", head.line, head.column
        )
    name = reader.atom("a name").text
    options = GrammarOptions()
    is_sync = head.text == "grammar"

    pairs: list[TreePair] = []
    trees: list[ElementaryTree] = []
    pair_names: set[str] = set()

    while reader.peek() is not None:
        stmt = reader.atom("a statement")
        if stmt.text == "option":
            options = _parse_option(reader, options, stmt)
        elif stmt.text == "pair" and is_sync:
            pname_tok = reader.atom("a pair name")
            if pname_tok.text in pair_names:
                raise LoadError(
                    f"duplicate pair name {pname_tok.text!r}", pname_tok.line, pname_tok.column
                )
            pair_names.add(pname_tok.text)
            kw = reader.atom("'left'")
            if kw.text != "left":
                raise LoadError("expected 'left'", kw.line, kw.column)
            ldraft = _parse_tree(reader, allow_links=True)
            kw = reader.atom("'right'")
            if kw.text != "right":
                raise LoadError("expected 'right'", kw.line, kw.column)
            rdraft = _parse_tree(reader, allow_links=True)
            links = _assemble_links(
                pname_tok.text, ldraft, rdraft, options.default_link_side
            )
            ltree = _build_elementary(pname_tok.text, ldraft)
            rtree = _build_elementary(pname_tok.text, rdraft)
            try:
                pairs.append(TreePair(pname_tok.text, ltree, rtree, links))
            except GrammarError as exc:
                raise LoadError(str(exc), pname_tok.line, pname_tok.column) from exc
        elif stmt.text == "tree" and not is_sync:
            tname = reader.atom("a tree name")
            draft = _parse_tree(reader, allow_links=False)
            trees.append(_build_elementary(tname.text, draft))
        else:
            raise LoadError(f"unexpected {stmt.text!r}", stmt.line, stmt.column)

    if is_sync:
        try:
            return SynchronousGrammar(name, tuple(pairs), options)
        except GrammarError as exc:
            raise LoadError(str(exc)) from exc
    return name, trees


def _parse_option(reader: _Reader, options: GrammarOptions, stmt: _Tok) -> GrammarOptions:
    key = reader.atom("an option name")
    if key.text == "default-side":
        val = reader.atom("top|bottom")
        if val.text not in (T.TOP, T.BOTTOM):
            raise LoadError("default-side is 'top' or 'bottom'", val.line, val.column)
        return GrammarOptions(options.left_tokens, options.right_tokens, val.text)
    if key.text == "tokens":
        side = reader.atom("left|right")
        if side.text not in (LEFT, RIGHT):
            raise LoadError("tokens option names 'left' or 'right'", side.line, side.column)
        val = reader.atom("words|fused")
        if val.text not in (WORDS, FUSED):
            raise LoadError("token mode is 'words' or 'fused'", val.line, val.column)
        if side.text == LEFT:
            return GrammarOptions(val.text, options.right_tokens, options.default_link_side)
        return GrammarOptions(options.left_tokens, val.text, options.default_link_side)
    raise LoadError(f"unknown option {key.text!r}", key.line, key.column)


def load_grammar(text: str) -> SynchronousGrammar:
    doc = load_document(text)
    if not isinstance(doc, SynchronousGrammar):
        raise LoadError("expected a synchronous grammar document, found a tag document")
    return doc


def load_tag(text: str) -> tuple[str, list[ElementaryTree]]:
    doc = load_document(text)
    if isinstance(doc, SynchronousGrammar):
        raise LoadError("expected a tag document, found a synchronous grammar")
    return doc


# ---------------------------------------------------------------------------
# serialization


def _quote_atom(text: str) -> str:
    if text and _PLAIN_ATOM.match(text) and not text[0] in ":#<" and text not in ("↓", "*"):
        return text
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _constraint_markers(constraint: Constraint) -> list[str]:
    out = []
    if constraint.allowed == T.NONE_ALLOWED:
        out.append(":NA")
    elif isinstance(constraint.allowed, frozenset):
        out.append(":SA(" + ",".join(sorted(constraint.allowed)) + ")")
    if constraint.obligatory:
        out.append(":OA")
    return out


def _write_node(
    node: Node,
    addr: T.Address,
    foot: T.Address | None,
    diacritics: dict[T.Address, list[str]],
    tree_class: str | None,
) -> str:
    if node.kind == T.TERMINAL:
        return _quote_atom(node.label)
    if node.kind == T.EPSILON:
        return "<eps>"
    parts = [_quote_atom(node.label)]
    if tree_class and addr == ():
        parts.append(":mod" if tree_class == T.MODIFIER else ":pred")
    if node.subst:
        parts.append(_MARKER_SUBST)
    if addr == foot:
        parts.append(_MARKER_FOOT)
    parts.extend(_constraint_markers(node.constraint))
    parts.extend(diacritics.get(addr, ()))
    for i, child in enumerate(node.children):
        parts.append(_write_node(child, addr + (i + 1,), foot, diacritics, tree_class))
    return "(" + " ".join(parts) + ")"


def _tree_text(tree: ElementaryTree, diacritics: dict[T.Address, list[str]] | None = None) -> str:
    tree_class = tree.tree_class if tree.kind == T.AUXILIARY else None
    if tree.kind == T.AUXILIARY and tree.tree_class == T.PREDICATIVE:
        tree_class = None  # predicative is the default; keep documents lean
    return _write_node(tree.root, (), tree.foot, diacritics or {}, tree_class)


def serialize_grammar(grammar: SynchronousGrammar) -> str:
    lines = [f"grammar {grammar.name}"]
    opts = grammar.options
    lines.append(f"option tokens left {opts.left_tokens}")
    lines.append(f"option tokens right {opts.right_tokens}")
    lines.append(f"option default-side {opts.default_link_side}")
    for pair in grammar.pairs:
        lines.append("")
        lines.append(f"pair {pair.name}")
        left_marks: dict[T.Address, list[str]] = {}
        right_marks: dict[T.Address, list[str]] = {}
        for k, link in enumerate(pair.sorted_links(), start=1):
            lsuffix = "^" if link.left_side == T.TOP else "v"
            rsuffix = "^" if link.right_side == T.TOP else "v"
            left_marks.setdefault(link.left, []).append(f"#{k}{lsuffix}")
            right_marks.setdefault(link.right, []).append(f"#{k}{rsuffix}")
        lines.append(f"  left  {_tree_text(pair.left, left_marks)}")
        lines.append(f"  right {_tree_text(pair.right, right_marks)}")
    return "\n".join(lines) + "\n"


def serialize_tag(name: str, trees: Sequence[ElementaryTree]) -> str:
    lines = [f"tag {name}"]
    for tree in trees:
        lines.append("")
        lines.append(f"tree {tree.name}")
        lines.append(f"  {_tree_text(tree)}")
    return "\n".join(lines) + "\n"


def serialize_mctag(mctag: MCTagGrammar) -> str:
    lines = [f"mctag {mctag.name}"]
    for set_name, (left, right) in mctag.tree_sets:
        lines.append("")
        lines.append(f"set {set_name}")
        lines.append(f"  tree L {_tree_text(left)}")
        lines.append(f"  tree R {_tree_text(right)}")
    for start in mctag.start_trees:
        lines.append("")
        lines.append(f"start {_tree_text(start)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fixtures


def fixture_names() -> list[str]:
    root = resources.files(__package__) / "fixtures"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".stag"))


def fixture_text(name: str) -> str:
    if not name.endswith(".stag"):
        name += ".stag"
    return (resources.files(__package__) / "fixtures" / name).read_text("utf-8")


def load_fixture(name: str) -> SynchronousGrammar:
    return load_grammar(fixture_text(name))


def read_grammar_source(spec: str) -> str:
    """Resolve a grammar argument: ``-`` reads stdin, a real path wins,
    then a packaged fixture by name."""
    if spec == "-":
        import sys

        return sys.stdin.read()
    path = Path(spec)
    if path.exists():
        return path.read_text("utf-8")
    try:
        return fixture_text(spec)
    except FileNotFoundError:
        raise LoadError(f"no grammar file or fixture named {spec!r}")
