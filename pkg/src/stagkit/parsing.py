"""Chart recognition and derivation-forest extraction for a component TAG,
plus the parse -> map -> generate transduction pipeline.

The recogniser is an agenda-driven bottom-up chart over items

    (state, tree, address, i, f1, f2, j)

where ``(i, j)`` is the spanned input interval and ``(f1, f2)`` the foot gap
for items on an auxiliary spine.  Each tree node passes through states:
``D`` (a dotted prefix of its children), ``B`` (children assembled, nothing
adjoined), ``M`` (one or more modifier auxiliaries wrapped around it), and
``T`` (finished).  The ``B -> M -> T`` ladder realises same-address stacks
directly: every wrap adds one stack element, the last wrap is outermost,
and a predicative auxiliary may only be wrapped last.  In the standard
regime a single wrap goes straight from ``B`` to ``T``.

Recognition is worst-case polynomial in the input length for a fixed
grammar; forests are packed with shared backpointers and enumerated lazily.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import LexiconError
from . import trees as T
from .derivation import (
    MULTI,
    STANDARD,
    DerivationChild,
    DerivationNode,
    GrammarMap,
    as_grammar_map,
    interpret,
)
from .sync import (
    LEFT,
    RIGHT,
    SyncChild,
    SyncNode,
    SynchronousGrammar,
    check_sync_derivation,
    project_derivation,
    project_left,
)

Item = tuple  # (state, tree, addr, i, f1, f2, j) with k spliced in for "D"

_D, _B, _M, _T = "D", "B", "M", "T"


@dataclass(frozen=True)
class _NodeInfo:
    label: str
    kind: str
    subst: bool
    obligatory: bool
    constraint: T.Constraint
    n_children: int
    is_foot: bool


class _Engine:
    """One chart run over a fixed token count with a pluggable scanner."""

    def __init__(
        self,
        trees: GrammarMap,
        n: int,
        scan: Callable[[int, str], bool],
        mode: str = MULTI,
    ):
        self.trees = trees
        self.n = n
        self.scan = scan
        self.mode = mode
        self.nodes: dict[tuple[str, T.Address], _NodeInfo] = {}
        self.subst_sites: dict[str, list[tuple[str, T.Address]]] = {}
        self.initial_names: list[str] = []
        self.aux_names: list[str] = []
        for name, tree in trees.items():
            if tree.kind == T.INITIAL:
                self.initial_names.append(name)
            else:
                self.aux_names.append(name)
            for addr, node in T.addresses(tree.root):
                info = _NodeInfo(
                    node.label,
                    node.kind,
                    node.subst,
                    node.constraint.obligatory,
                    node.constraint,
                    len(node.children),
                    tree.foot == addr,
                )
                self.nodes[(name, addr)] = info
                if node.subst:
                    self.subst_sites.setdefault(node.label, []).append((name, addr))
        self.seen: set[Item] = set()
        self.agenda: deque[Item] = deque()
        self.backptrs: dict[Item, list[tuple]] = {}
        self.tops_by_node_start: dict[tuple, list[Item]] = {}
        self.dots_by_need: dict[tuple, list[Item]] = {}
        self.hosts_by_span: dict[tuple, list[Item]] = {}
        self.aux_by_gap: dict[tuple, list[tuple[str, Item]]] = {}
        self.goals: list[Item] = []
        self._run()

    # -- item plumbing ------------------------------------------------------

    def _add(self, item: Item, reason: tuple) -> None:
        if item in self.seen:
            self.backptrs[item].append(reason)
            return
        self.seen.add(item)
        self.backptrs[item] = [reason]
        self.agenda.append(item)

    # -- deduction ----------------------------------------------------------

    def _run(self) -> None:
        n = self.n
        for (tree, addr), info in self.nodes.items():
            if info.kind == T.TERMINAL:
                for i in range(n):
                    if self.scan(i, info.label):
                        self._add((_T, tree, addr, i, None, None, i + 1), ("seed",))
            elif info.kind == T.EPSILON:
                for i in range(n + 1):
                    self._add((_T, tree, addr, i, None, None, i), ("seed",))
            elif info.is_foot:
                for i in range(n + 1):
                    for j in range(i, n + 1):
                        self._add((_B, tree, addr, i, i, j, j), ("seed",))
            elif info.n_children and not info.subst:
                for i in range(n + 1):
                    self._add((_D, tree, addr, 0, i, None, None, i), ("seed",))
        while self.agenda:
            item = self.agenda.popleft()
            self._fire(item)

    def _fire(self, item: Item) -> None:
        state = item[0]
        if state == _D:
            self._fire_dot(item)
        elif state == _B or state == _M:
            self._fire_host(item)
        else:
            self._fire_top(item)

    def _fire_dot(self, item: Item) -> None:
        _, tree, addr, k, i, f1, f2, j = item
        info = self.nodes[(tree, addr)]
        if k == info.n_children:
            self._add((_B, tree, addr, i, f1, f2, j), ("fin", item))
            return
        child = addr + (k + 1,)
        self.dots_by_need.setdefault((tree, child, j), []).append(item)
        for top in self.tops_by_node_start.get((tree, child, j), ()):
            self._extend(item, top)

    def _extend(self, dot: Item, top: Item) -> None:
        _, tree, addr, k, i, f1, f2, j = dot
        _, _, _, _, g1, g2, l = top
        if g1 is not None and f1 is not None:
            return
        nf1, nf2 = (f1, f2) if g1 is None else (g1, g2)
        self._add((_D, tree, addr, k + 1, i, nf1, nf2, l), ("ext", dot, top))

    def _fire_host(self, item: Item) -> None:
        state, tree, addr, i, f1, f2, j = item
        info = self.nodes[(tree, addr)]
        if state == _B and not info.obligatory:
            self._add((_T, tree, addr, i, f1, f2, j), ("noadj", item))
        if state == _M:
            self._add((_T, tree, addr, i, f1, f2, j), ("close", item))
        if not info.is_foot and not info.subst and info.kind == T.NONTERMINAL:
            self.hosts_by_span.setdefault((i, j), []).append(item)
            for aux_name, aux_item in self.aux_by_gap.get((i, j), ()):
                self._wrap(item, aux_name, aux_item)

    def _fire_top(self, item: Item) -> None:
        _, tree, addr, i, f1, f2, j = item
        self.tops_by_node_start.setdefault((tree, addr, i), []).append(item)
        for dot in list(self.dots_by_need.get((tree, addr, i), ())):
            self._extend(dot, item)
        if addr:
            return
        # a finished tree
        et = self.trees[tree]
        if et.kind == T.AUXILIARY:
            if f1 is None:
                return
            self.aux_by_gap.setdefault((f1, f2), []).append((tree, item))
            for host in self.hosts_by_span.get((f1, f2), ()):
                self._wrap(host, tree, item)
        else:
            for site_tree, site_addr in self.subst_sites.get(et.root.label, ()):
                self._add(
                    (_T, site_tree, site_addr, i, None, None, j),
                    ("subst", item, tree),
                )
            if i == 0 and j == self.n:
                self.goals.append(item)

    def _wrap(self, host: Item, aux_name: str, aux_item: Item) -> None:
        state, tree, addr, i, f1, f2, j = host
        _, _, _, ai, _, _, aj = aux_item
        info = self.nodes[(tree, addr)]
        aux = self.trees[aux_name]
        if info.label != aux.root.label:
            return
        if not info.constraint.permits(aux_name):
            return
        reason = ("wrap", host, aux_item, aux_name)
        if self.mode == STANDARD:
            if state == _B:
                self._add((_T, tree, addr, ai, f1, f2, aj), reason)
            return
        if aux.tree_class == T.MODIFIER:
            self._add((_M, tree, addr, ai, f1, f2, aj), reason)
        else:
            self._add((_T, tree, addr, ai, f1, f2, aj), reason)

    # -- extraction ---------------------------------------------------------

    def tree_derivations(self, item: Item) -> list[DerivationNode]:
        """All derivations packed under one finished-tree item."""
        memo: dict[Item, list[DerivationNode]] = {}
        active: set[Item] = set()

        def derivs(root_item: Item) -> list[DerivationNode]:
            if root_item in memo:
                return memo[root_item]
            if root_item in active:
                return []  # empty-span stacking cycles are cut
            active.add(root_item)
            tree = root_item[1]
            out = [
                DerivationNode(tree, tuple(arcs))
                for arcs in node_arcs(root_item)
            ]
            active.discard(root_item)
            memo[root_item] = list(dict.fromkeys(out))
            return memo[root_item]

        def node_arcs(top: Item) -> Iterator[list[DerivationChild]]:
            _, tree, addr, *_ = top
            info = self.nodes[(tree, addr)]
            if info.kind != T.NONTERMINAL:
                yield []
                return
            if info.subst:
                for bp in self.backptrs[top]:
                    if bp[0] != "subst":
                        continue
                    for sub in derivs(bp[1]):
                        yield [DerivationChild(addr, 0, sub)]
                return
            for stack, bottom in peel(top, frozenset()):
                for inner in bottom_arcs(bottom):
                    arcs = [
                        DerivationChild(addr, k, sub) for k, sub in enumerate(stack)
                    ]
                    yield arcs + inner

        def peel(
            item: Item, chain: frozenset
        ) -> Iterator[tuple[list[DerivationNode], Item]]:
            """Unwind wrap chains, outermost stack element first.  ``chain``
            holds the items already open in this unwinding; revisiting one
            means an empty-span stacking cycle, which is cut."""
            if item in chain:
                return
            chain = chain | {item}
            for bp in self.backptrs[item]:
                kind = bp[0]
                if kind == "noadj":
                    yield [], bp[1]
                elif kind == "close":
                    yield from peel(bp[1], chain)
                elif kind == "wrap":
                    _, host, aux_item, _ = bp
                    for sub in derivs(aux_item):
                        for stack, bottom in peel_host(host, chain):
                            yield [sub] + stack, bottom

        def peel_host(
            host: Item, chain: frozenset
        ) -> Iterator[tuple[list[DerivationNode], Item]]:
            if host[0] == _B:
                yield [], host
            else:
                yield from peel(host, chain)

        def bottom_arcs(bottom: Item) -> Iterator[list[DerivationChild]]:
            for bp in self.backptrs[bottom]:
                if bp[0] == "seed":
                    yield []
                elif bp[0] == "fin":
                    yield from dot_arcs(bp[1])

        def dot_arcs(dot: Item) -> Iterator[list[DerivationChild]]:
            for bp in self.backptrs[dot]:
                if bp[0] == "seed":
                    yield []
                elif bp[0] == "ext":
                    _, prev, child_top = bp
                    for left in dot_arcs(prev):
                        for right in node_arcs(child_top):
                            yield left + right

        return derivs(item)


class DerivationForest:
    """Packed representation of every well-formed derivation of the input.

    Enumeration is lazy and deduplicated; counting enumerates once and
    caches.  Every enumerated derivation is well-formed for the grammar in
    the active regime and interprets to a derived tree whose yield is the
    parsed string.
    """

    def __init__(self, engine: _Engine, tokens: Sequence[str], mode: str):
        self._engine = engine
        self.tokens = tuple(tokens)
        self.mode = mode
        self._cache: list[DerivationNode] | None = None

    def derivations(self) -> Iterator[DerivationNode]:
        if self._cache is not None:
            yield from self._cache
            return
        acc: list[DerivationNode] = []
        seen: set[DerivationNode] = set()
        for goal in self._engine.goals:
            for deriv in self._engine.tree_derivations(goal):
                if deriv not in seen:
                    seen.add(deriv)
                    acc.append(deriv)
                    yield deriv
        self._cache = acc

    def __iter__(self) -> Iterator[DerivationNode]:
        return self.derivations()

    def count(self) -> int:
        if self._cache is None:
            for _ in self.derivations():
                pass
        assert self._cache is not None
        return len(self._cache)

    @property
    def is_empty(self) -> bool:
        return not self._engine.goals


def parse(
    grammar: GrammarMap | Iterable[T.ElementaryTree],
    tokens: Sequence[str],
    mode: str = MULTI,
) -> DerivationForest:
    """Parse ``tokens`` with a component TAG, returning the packed forest.

    Unknown tokens raise LexiconError; an unparseable string yields an
    empty forest.
    """
    gmap = as_grammar_map(grammar)
    alphabet = {
        node.label
        for tree in gmap.values()
        for _, node in T.addresses(tree.root)
        if node.kind == T.TERMINAL
    }
    for token in tokens:
        if token not in alphabet:
            raise LexiconError(f"token {token!r} is not in the grammar's alphabet")
    tokens = list(tokens)
    engine = _Engine(gmap, len(tokens), lambda i, sym: tokens[i] == sym, mode)
    return DerivationForest(engine, tokens, mode)


def recognizes_some_string(
    grammar: GrammarMap | Iterable[T.ElementaryTree],
    length: int,
    mode: str = MULTI,
) -> bool:
    """True iff the TAG derives some string of exactly ``length`` tokens.

    This runs the same deduction engine over a universal scanner, so one
    run decides membership for every candidate string of that length at
    once.
    """
    gmap = as_grammar_map(grammar)
    engine = _Engine(gmap, length, lambda i, sym: True, mode)
    return bool(engine.goals)


# ---------------------------------------------------------------------------
# transduction


def map_derivation(
    deriv: DerivationNode, grammar: SynchronousGrammar, mode: str = MULTI
) -> set[DerivationNode]:
    """All right component derivations synchronisable with ``deriv``.

    Enumerates the link alternatives of every arc and the orderings of
    same-address right stacks, keeping exactly the candidates accepted by
    the paired-derivation checker.
    """

    def candidates(node: DerivationNode) -> list[SyncNode]:
        pair = grammar.pair_of_component(LEFT, node.tree_name)
        per_child: list[list[tuple]] = []
        for child in node.children:
            options = []
            for link in pair.sorted_links():
                if link.left != child.address:
                    continue
                for sub in candidates(child.node):
                    options.append((link, child, sub))
            if not options:
                return []
            per_child.append(options)
        out: list[SyncNode] = []
        for combo in itertools.product(*per_child):
            links_used = [link for link, _, _ in combo]
            if len(set(links_used)) != len(links_used):
                continue
            groups: dict[T.Address, list[int]] = {}
            for idx, (link, _, _) in enumerate(combo):
                groups.setdefault(link.right, []).append(idx)
            for assignment in _right_orderings(groups):
                children = tuple(
                    SyncChild(
                        child.address,
                        link.right,
                        child.order,
                        assignment.get(idx, 0),
                        sub,
                    )
                    for idx, (link, child, sub) in enumerate(combo)
                )
                out.append(SyncNode(pair.name, children))
        return list(dict.fromkeys(out))

    results: set[DerivationNode] = set()
    for sync in candidates(deriv):
        if check_sync_derivation(sync, grammar, mode):
            results.add(project_derivation(sync, grammar, RIGHT))
    return results


def _right_orderings(groups: Mapping[T.Address, list[int]]) -> list[dict[int, int]]:
    assignments: list[dict[int, int]] = [dict()]
    for _, members in sorted(groups.items()):
        new = []
        for perm in itertools.permutations(range(len(members))):
            for base in assignments:
                ext = dict(base)
                for pos, idx in enumerate(members):
                    ext[idx] = perm[pos]
                new.append(ext)
        assignments = new
    return assignments


def transduce(
    grammar: SynchronousGrammar, tokens: Sequence[str], mode: str = MULTI
) -> set[str]:
    """Transduce a left string: parse against the constraint-mapped left
    projection, synchronise each derivation, and generate right yields."""
    projected = {tree.name: tree for tree in project_left(grammar)}
    try:
        forest = parse(projected, tokens, mode)
    except LexiconError:
        return set()
    right_trees = grammar.right_trees()
    out: set[str] = set()
    for left_deriv in forest.derivations():
        for right_deriv in map_derivation(left_deriv, grammar, mode):
            derived = interpret(right_deriv, right_trees, mode)
            out.add(grammar.options.join(derived.tokens(), RIGHT))
    return out
