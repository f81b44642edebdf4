"""The flat rewriting semantics for synchronous grammars.

A rewriting state is a current derived tree pair plus a set of links over
the derived trees' addresses.  One step consumes a link, operates one tree
pair at the link's two ends (adjunction for auxiliary pairs, substitution
for initial pairs), and inherits the surviving links after readdressing:
a surviving end sitting exactly on an operated node moves to the adjoined
root when it impinges on the top of the node and to the foot image when it
impinges on the bottom.  The operated pair's own links come along, shifted
to their images.

Bounded enumeration explores the state graph breadth-first with states
memoised by structural identity, collecting the yields of complete states
(no undischarged obligation, no unfilled substitution leaf).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import LinkError, StagError, StateError
from . import trees as T
from .sync import LEFT, RIGHT, Link, SynchronousGrammar, TreePair
from .trees import Address, DerivedTree, adjoin, addresses, node_at, substitute


@dataclass(frozen=True)
class DerivedPairState:
    left: DerivedTree
    right: DerivedTree
    links: frozenset[Link] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", frozenset(self.links))
        for link in self.links:
            node_at(self.left.root, link.left)
            node_at(self.right.root, link.right)

    def tokens(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return self.left.tokens(), self.right.tokens()

    def sorted_links(self) -> list[Link]:
        return sorted(
            self.links, key=lambda l: (l.left, l.right, l.left_side, l.right_side)
        )


@dataclass(frozen=True)
class RewriteStep:
    link: Link
    pair_name: str


@dataclass(frozen=True)
class RewriteTrace:
    """Audit record of one rewriting run; replaying the steps from the
    initial pair reproduces the final state."""

    initial_pair: str
    steps: tuple[RewriteStep, ...]
    final: DerivedPairState

    def replay(self, grammar: SynchronousGrammar) -> DerivedPairState:
        state = init_state(grammar.pair(self.initial_pair))
        for step in self.steps:
            state = rewrite_step(state, step.link, grammar.pair(step.pair_name))
        return state


def init_state(pair: TreePair) -> DerivedPairState:
    if not pair.is_initial:
        raise StateError(f"pair {pair.name} is auxiliary; rewriting starts from an initial pair")
    return DerivedPairState(
        DerivedTree.from_elementary(pair.left),
        DerivedTree.from_elementary(pair.right),
        pair.links,
    )


def _survivor_end(end: Address, side_mark: str, t: Address, f: Address | None) -> Address:
    """Readdress one link end through an operation at ``t``.

    ``f`` is None for substitution: the site was a leaf, so only the end
    exactly at ``t`` is affected, and it stays at ``t`` (the planted root);
    top and bottom are equivalent there.
    """
    if f is None:
        return end
    if end == t:
        return T.address_map(t, f, end, side=T.TOP if side_mark == T.TOP else T.BOTTOM)
    return T.address_map(t, f, end)


def rewrite_step(
    state: DerivedPairState, link: Link, pair: TreePair
) -> DerivedPairState:
    """Operate ``pair`` at both ends of ``link``, inheriting the other links."""
    if link not in state.links:
        raise LinkError("chosen link is not present in the state")
    if pair.is_initial:
        new_left = substitute(state.left, pair.left, link.left)
        new_right = substitute(state.right, pair.right, link.right)
        foot_l = foot_r = None
    else:
        new_left = adjoin(state.left, pair.left, link.left)
        new_right = adjoin(state.right, pair.right, link.right)
        foot_l, foot_r = pair.left.foot, pair.right.foot

    survivors = []
    for other in state.links - {link}:
        survivors.append(
            Link(
                _survivor_end(other.left, other.left_side, link.left, foot_l),
                _survivor_end(other.right, other.right_side, link.right, foot_r),
                other.left_side,
                other.right_side,
            )
        )
    for inner in pair.links:
        survivors.append(
            Link(
                link.left + inner.left,
                link.right + inner.right,
                inner.left_side,
                inner.right_side,
            )
        )
    return DerivedPairState(new_left, new_right, frozenset(survivors))


def is_complete(state: DerivedPairState) -> bool:
    """No undischarged obligatory-adjunction node, no unfilled substitution
    leaf, in either tree.  Operated nodes are consumed by composition, so a
    lingering obligation is simply an obligatory node still present."""
    for tree in (state.left, state.right):
        for _, node in addresses(tree.root):
            if node.subst or node.constraint.obligatory:
                return False
    return True


def successors(
    state: DerivedPairState, grammar: SynchronousGrammar
) -> Iterator[tuple[RewriteStep, DerivedPairState]]:
    for link in state.sorted_links():
        for pair in grammar.pairs:
            try:
                nxt = rewrite_step(state, link, pair)
            except StagError:
                continue
            yield RewriteStep(link, pair.name), nxt


def reachable_states(
    grammar: SynchronousGrammar, max_steps: int
) -> Iterator[tuple[DerivedPairState, RewriteTrace]]:
    """Breadth-first state enumeration, one trace per distinct state."""
    frontier: list[tuple[DerivedPairState, RewriteTrace]] = []
    seen: set[DerivedPairState] = set()
    for pair in grammar.initial_pairs():
        state = init_state(pair)
        if state not in seen:
            seen.add(state)
            frontier.append((state, RewriteTrace(pair.name, (), state)))
    depth = 0
    while frontier:
        for item in frontier:
            yield item
        if depth >= max_steps:
            break
        depth += 1
        nxt: list[tuple[DerivedPairState, RewriteTrace]] = []
        for state, trace in frontier:
            for step, succ in successors(state, grammar):
                if succ in seen:
                    continue
                seen.add(succ)
                nxt.append(
                    (succ, RewriteTrace(trace.initial_pair, trace.steps + (step,), succ))
                )
        frontier = nxt


def enumerate_rewriting(
    grammar: SynchronousGrammar, max_steps: int
) -> set[tuple[str, str]]:
    """Yields of all complete states reachable in at most ``max_steps``."""
    out: set[tuple[str, str]] = set()
    for state, _ in reachable_states(grammar, max_steps):
        if is_complete(state):
            left, right = state.tokens()
            out.add(
                (
                    grammar.options.join(left, LEFT),
                    grammar.options.join(right, RIGHT),
                )
            )
    return out


def _state_key(state: DerivedPairState) -> tuple:
    links = tuple(
        (l.left, l.left_side, l.right, l.right_side) for l in state.sorted_links()
    )
    return state.left.tokens(), state.right.tokens(), links


def complete_traces(
    grammar: SynchronousGrammar, max_steps: int
) -> list[RewriteTrace]:
    """One shortest trace per distinct complete state, in deterministic order."""
    out = [
        trace
        for state, trace in reachable_states(grammar, max_steps)
        if is_complete(state)
    ]
    out.sort(key=lambda tr: (len(tr.steps), tr.initial_pair, _state_key(tr.final)))
    return out
