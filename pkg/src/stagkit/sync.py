"""Synchronous grammars: tree pairs, links, paired derivations, projection,
and the reduction to multicomponent tree sets.

A synchronous grammar is a set of named pairs of elementary trees with a
link relation between their node addresses.  A paired derivation is stored
canonically as one tree of pair names whose arcs carry both component
addresses (and per-side stack orders); parent preservation of the node
bijection then holds by construction, and checking reduces to component
well-formedness plus link sanctioning.  The explicit two-trees-plus-bijection
form is accepted at the API boundary and converted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, Sequence

from .errors import DerivationError, GrammarError
from . import trees as T
from .derivation import (
    MULTI,
    DerivationChild,
    DerivationNode,
    check_well_formed,
    interpret,
)
from .trees import (
    Address,
    Constraint,
    DerivedTree,
    ElementaryTree,
    Node,
    check_site,
    node_at,
    resolves,
)

LEFT = "left"
RIGHT = "right"

WORDS = "words"
FUSED = "fused"


@dataclass(frozen=True)
class Link:
    """A correspondence between a left and a right node address, each end
    marked as impinging on the top or bottom of its node."""

    left: Address
    right: Address
    left_side: str = T.TOP
    right_side: str = T.TOP

    def __post_init__(self) -> None:
        for side in (self.left_side, self.right_side):
            if side not in (T.TOP, T.BOTTOM):
                raise GrammarError(f"bad link side {side!r}")

    def ends(self) -> tuple[Address, Address]:
        return (self.left, self.right)


@dataclass(frozen=True)
class TreePair:
    name: str
    left: ElementaryTree
    right: ElementaryTree
    links: frozenset[Link] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", frozenset(self.links))
        if self.left.kind != self.right.kind:
            raise GrammarError(
                f"pair {self.name}: component kinds differ "
                f"({self.left.kind} vs {self.right.kind})"
            )
        for link in self.links:
            if not resolves(self.left.root, link.left):
                raise GrammarError(
                    f"pair {self.name}: link end {T.format_address(link.left)} "
                    "does not resolve in the left tree"
                )
            if not resolves(self.right.root, link.right):
                raise GrammarError(
                    f"pair {self.name}: link end {T.format_address(link.right)} "
                    "does not resolve in the right tree"
                )

    @property
    def is_initial(self) -> bool:
        return self.left.kind == T.INITIAL

    def sorted_links(self) -> list[Link]:
        return sorted(self.links, key=lambda l: (l.left, l.right, l.left_side, l.right_side))


@dataclass(frozen=True)
class GrammarOptions:
    """Presentation options carried with a grammar document: how each side's
    strings tokenize and join (whitespace words vs fused characters), and the
    default side for link ends."""

    left_tokens: str = WORDS
    right_tokens: str = WORDS
    default_link_side: str = T.TOP

    def joiner(self, side: str) -> str:
        mode = self.left_tokens if side == LEFT else self.right_tokens
        return " " if mode == WORDS else ""

    def join(self, tokens: Sequence[str], side: str) -> str:
        return self.joiner(side).join(tokens)

    def tokenize(self, text: str, side: str) -> list[str]:
        mode = self.left_tokens if side == LEFT else self.right_tokens
        return text.split() if mode == WORDS else [c for c in text if not c.isspace()]


@dataclass(frozen=True)
class SynchronousGrammar:
    name: str
    pairs: tuple[TreePair, ...]
    options: GrammarOptions = GrammarOptions()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))
        seen: set[str] = set()
        for pair in self.pairs:
            if pair.name in seen:
                raise GrammarError(f"duplicate pair name {pair.name!r}")
            seen.add(pair.name)
        for side in (LEFT, RIGHT):
            names = [self.component(p, side).name for p in self.pairs]
            if len(set(names)) != len(names):
                raise GrammarError(f"{side} tree names are not unique")

    @staticmethod
    def component(pair: TreePair, side: str) -> ElementaryTree:
        return pair.left if side == LEFT else pair.right

    def pair(self, name: str) -> TreePair:
        for p in self.pairs:
            if p.name == name:
                return p
        raise GrammarError(f"no pair named {name!r}")

    def trees(self, side: str) -> dict[str, ElementaryTree]:
        return {self.component(p, side).name: self.component(p, side) for p in self.pairs}

    def left_trees(self) -> dict[str, ElementaryTree]:
        return self.trees(LEFT)

    def right_trees(self) -> dict[str, ElementaryTree]:
        return self.trees(RIGHT)

    def pair_of_component(self, side: str, tree_name: str) -> TreePair:
        for p in self.pairs:
            if self.component(p, side).name == tree_name:
                return p
        raise GrammarError(f"no pair with {side} tree {tree_name!r}")

    def initial_pairs(self) -> list[TreePair]:
        return [p for p in self.pairs if p.is_initial]

    def swapped(self) -> "SynchronousGrammar":
        """Exchange components; bidirectional use swaps the grammar, not the
        machinery."""
        pairs = tuple(
            TreePair(
                p.name,
                p.right,
                p.left,
                frozenset(
                    Link(l.right, l.left, l.right_side, l.left_side) for l in p.links
                ),
            )
            for p in self.pairs
        )
        options = GrammarOptions(
            self.options.right_tokens, self.options.left_tokens,
            self.options.default_link_side,
        )
        return SynchronousGrammar(self.name, pairs, options)


@dataclass(frozen=True)
class SyncChild:
    left_address: Address
    right_address: Address
    left_order: int
    right_order: int
    node: "SyncNode"


@dataclass(frozen=True)
class SyncNode:
    """Canonical paired-derivation node; see the module docstring."""

    pair_name: str
    children: tuple[SyncChild, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(
            sorted(
                self.children,
                key=lambda c: (c.left_address, c.left_order, c.right_address, c.right_order),
            )
        )
        object.__setattr__(self, "children", ordered)

    @property
    def size(self) -> int:
        return 1 + sum(c.node.size for c in self.children)


def project_derivation(sd: SyncNode, grammar: SynchronousGrammar, side: str) -> DerivationNode:
    pair = grammar.pair(sd.pair_name)
    children = tuple(
        DerivationChild(
            c.left_address if side == LEFT else c.right_address,
            c.left_order if side == LEFT else c.right_order,
            project_derivation(c.node, grammar, side),
        )
        for c in sd.children
    )
    return DerivationNode(grammar.component(pair, side).name, children)


@dataclass(frozen=True)
class SynchronousDerivation:
    """Explicit form: two component derivations plus a node bijection.

    Nodes are addressed by child-index paths into the canonically sorted
    component derivations; ``mapping`` sends left paths to right paths.
    """

    left: DerivationNode
    right: DerivationNode
    mapping: Mapping[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)


def _paths(node: DerivationNode) -> dict[tuple[int, ...], DerivationNode]:
    out: dict[tuple[int, ...], DerivationNode] = {}

    def walk(n: DerivationNode, path: tuple[int, ...]) -> None:
        out[path] = n
        for i, c in enumerate(n.children):
            walk(c.node, path + (i,))

    walk(node, ())
    return out


def pair_up(
    sd: SynchronousDerivation, grammar: SynchronousGrammar
) -> tuple[SyncNode | None, str | None]:
    """Convert the explicit form to the canonical form.

    Returns (node, None) on success and (None, reason) when the mapping is
    not a parent-preserving bijection or the paired nodes do not name the
    two halves of one tree pair.
    """
    left_paths = _paths(sd.left)
    right_paths = _paths(sd.right)
    mapping = dict(sd.mapping)
    if not mapping and len(left_paths) == 1 and len(right_paths) == 1:
        mapping = {(): ()}
    if set(mapping) != set(left_paths):
        return None, "mapping is not total on the left derivation"
    if set(mapping.values()) != set(right_paths):
        return None, "mapping is not onto the right derivation"
    if len(set(mapping.values())) != len(mapping):
        return None, "mapping is not injective"
    if mapping.get(()) != ():
        return None, "mapping must send root to root"
    for lpath, rpath in mapping.items():
        if lpath and mapping[lpath[:-1]] != rpath[:-1]:
            return None, "mapping does not preserve parenthood"

    pairs_by_left = {p.left.name: p for p in grammar.pairs}

    def build(lpath: tuple[int, ...]) -> SyncNode | None:
        lnode = left_paths[lpath]
        rpath = mapping[lpath]
        rnode = right_paths[rpath]
        pair = pairs_by_left.get(lnode.tree_name)
        if pair is None or pair.right.name != rnode.tree_name:
            return None
        children = []
        for i, lc in enumerate(lnode.children):
            crpath = mapping[lpath + (i,)]
            rc = right_paths[crpath[:-1]].children[crpath[-1]]
            sub = build(lpath + (i,))
            if sub is None:
                return None
            children.append(
                SyncChild(lc.address, rc.address, lc.order, rc.order, sub)
            )
        return SyncNode(pair.name, tuple(children))

    node = build(())
    if node is None:
        return None, "matched nodes do not name the two halves of one pair"
    return node, None


SyncInput = SyncNode | SynchronousDerivation


def explain_sync_violation(
    sd: SyncInput, grammar: SynchronousGrammar, mode: str = MULTI
) -> str | None:
    """Identify the first violated condition of paired-derivation
    well-formedness, or None when the derivation is accepted.

    The conditions: both component derivations must be well-formed for their
    component grammars, the node mapping must be a parent-preserving
    bijection, and every matched arc must be sanctioned by a link of the
    parent pair.  Link ends' top/bottom marks play no role here.  Each link
    sanctions at most one arc per derivation node; stacking at a shared
    address therefore needs as many distinct links as stacked trees.
    """
    if isinstance(sd, SynchronousDerivation):
        node, reason = pair_up(sd, grammar)
        if node is None:
            return f"not an isomorphism: {reason}"
        sd = node

    names = {p.name for p in grammar.pairs}

    def check_names(n: SyncNode) -> None:
        if n.pair_name not in names:
            raise GrammarError(f"unknown pair {n.pair_name!r}")
        for c in n.children:
            check_names(c.node)

    check_names(sd)

    left = project_derivation(sd, grammar, LEFT)
    if not check_well_formed(left, grammar.left_trees(), mode):
        return "left derivation is ill-formed"
    right = project_derivation(sd, grammar, RIGHT)
    if not check_well_formed(right, grammar.right_trees(), mode):
        return "right derivation is ill-formed"

    def check_links(n: SyncNode) -> str | None:
        pair = grammar.pair(n.pair_name)
        ends = {l.ends() for l in pair.links}
        used: set[tuple[Address, Address]] = set()
        for c in n.children:
            arc = (c.left_address, c.right_address)
            if arc not in ends:
                return (
                    f"operation at {T.format_address(arc[0])} ⌢ "
                    f"{T.format_address(arc[1])} is not linked in pair {pair.name}"
                )
            if arc in used:
                return (
                    f"link {T.format_address(arc[0])} ⌢ {T.format_address(arc[1])} "
                    f"of pair {pair.name} is used by two operations"
                )
            used.add(arc)
            deeper = check_links(c.node)
            if deeper is not None:
                return deeper
        return None

    return check_links(sd)


def check_sync_derivation(
    sd: SyncInput, grammar: SynchronousGrammar, mode: str = MULTI
) -> bool:
    return explain_sync_violation(sd, grammar, mode) is None


def derived_pair(
    sd: SyncInput, grammar: SynchronousGrammar, mode: str = MULTI
) -> tuple[DerivedTree, DerivedTree]:
    reason = explain_sync_violation(sd, grammar, mode)
    if reason is not None:
        raise DerivationError(reason)
    if isinstance(sd, SynchronousDerivation):
        sd, _ = pair_up(sd, grammar)
        assert sd is not None
    left = interpret(project_derivation(sd, grammar, LEFT), grammar.left_trees(), mode)
    right = interpret(project_derivation(sd, grammar, RIGHT), grammar.right_trees(), mode)
    return left, right


def string_pair(
    sd: SyncNode, grammar: SynchronousGrammar, mode: str = MULTI
) -> tuple[str, str]:
    left, right = derived_pair(sd, grammar, mode)
    return (
        grammar.options.join(left.tokens(), LEFT),
        grammar.options.join(right.tokens(), RIGHT),
    )


def enumerate_sync_derivations(
    grammar: SynchronousGrammar, max_nodes: int, mode: str = MULTI
) -> Iterator[SyncNode]:
    """All accepted paired derivations with at most ``max_nodes`` nodes,
    rooted at initial pairs.

    Sub-derivations are generated bottom-up and only well-formed ones are
    combined, so grammars whose auxiliary pairs can never operate (dead
    links, undischargeable obligations) collapse immediately.
    """
    memo: dict[tuple[str, int], tuple[SyncNode, ...]] = {}

    def expand(pair: TreePair, budget: int) -> tuple[SyncNode, ...]:
        if budget < 1:
            return ()
        key = (pair.name, budget)
        if key in memo:
            return memo[key]
        results: list[SyncNode] = []
        links = pair.sorted_links()
        # operable sub-derivations per link, each consuming its own budget
        per_link: list[list[tuple[SyncNode, Link]]] = []
        for link in links:
            options: list[tuple[SyncNode, Link]] = []
            for q in grammar.pairs:
                if not (
                    check_site(pair.left, q.left, link.left)
                    and check_site(pair.right, q.right, link.right)
                ):
                    continue
                for sub in expand(q, budget - 1):
                    options.append((sub, link))
            per_link.append(options)

        for chosen in itertools.product(
            *[[None] + opts for opts in per_link]  # type: ignore[list-item]
        ):
            arcs = [c for c in chosen if c is not None]
            size = 1 + sum(sub.size for sub, _ in arcs)
            if size > budget:
                continue
            left_groups: dict[Address, list[int]] = {}
            right_groups: dict[Address, list[int]] = {}
            for idx, (sub, link) in enumerate(arcs):
                left_groups.setdefault(link.left, []).append(idx)
                right_groups.setdefault(link.right, []).append(idx)
            lorders = _group_orderings(left_groups)
            rorders = _group_orderings(right_groups)
            for lassign in lorders:
                for rassign in rorders:
                    children = tuple(
                        SyncChild(link.left, link.right, lassign[i], rassign[i], sub)
                        for i, (sub, link) in enumerate(arcs)
                    )
                    candidate = SyncNode(pair.name, children)
                    if check_sync_derivation(candidate, grammar, mode):
                        results.append(candidate)
        out = tuple(dict.fromkeys(results))
        memo[key] = out
        return out

    seen: set[SyncNode] = set()
    for pair in grammar.initial_pairs():
        for node in expand(pair, max_nodes):
            if node not in seen:
                seen.add(node)
                yield node


def _group_orderings(groups: dict[Address, list[int]]) -> list[dict[int, int]]:
    """All per-address order assignments: each address group independently
    permuted, singletons pinned at 0."""
    assignments: list[dict[int, int]] = [dict()]
    for _, members in sorted(groups.items()):
        new: list[dict[int, int]] = []
        for perm in itertools.permutations(range(len(members))):
            for base in assignments:
                ext = dict(base)
                for pos, idx in enumerate(members):
                    ext[idx] = perm[pos]
                new.append(ext)
        assignments = new
    return assignments


def enumerate_natural(
    grammar: SynchronousGrammar, max_nodes: int, mode: str = MULTI
) -> set[tuple[str, str]]:
    """The bounded string-pair language under paired-derivation semantics."""
    if max_nodes < 1:
        return set()
    out: set[tuple[str, str]] = set()
    for sd in enumerate_sync_derivations(grammar, max_nodes, mode):
        out.add(string_pair(sd, grammar, mode))
    return out


# ---------------------------------------------------------------------------
# projection


def _translate_names(
    names: frozenset[str], grammar: SynchronousGrammar, from_side: str
) -> frozenset[str]:
    """Map tree names from one component to the other through their pairs."""
    to_side = RIGHT if from_side == LEFT else LEFT
    out = set()
    for p in grammar.pairs:
        if grammar.component(p, from_side).name in names:
            out.add(grammar.component(p, to_side).name)
    return frozenset(out)


def _intersect_allowed(a, b):
    if a == T.ANY_ALLOWED:
        return b
    if b == T.ANY_ALLOWED:
        return a
    if a == T.NONE_ALLOWED or b == T.NONE_ALLOWED:
        return T.NONE_ALLOWED
    return frozenset(a) & frozenset(b)


def project(grammar: SynchronousGrammar, side: str) -> list[ElementaryTree]:
    """Project one component, folding the other side's constraints through
    the links.

    A kept node's allowed set is the intersection of its own with the
    translation of its partner's; obligatoriness is the disjunction.  A node
    whose link can never be operated on (no pair's halves both pass the site
    check) becomes a null-adjunction node; if an obligation also lands on
    it, the allowed set is the empty selective set, which keeps the
    obligation visible while admitting nothing.
    """
    if side == RIGHT:
        return project(grammar.swapped(), LEFT)

    projected: list[ElementaryTree] = []
    for pair in grammar.pairs:
        tree = pair.left
        new_root = tree.root
        for address, node in T.addresses(tree.root):
            if node.kind != T.NONTERMINAL:
                continue
            allowed = node.constraint.allowed
            obligatory = node.constraint.obligatory
            touched = False
            for link in pair.sorted_links():
                if link.left != address:
                    continue
                touched = True
                partner = node_at(pair.right.root, link.right)
                operable = any(
                    check_site(pair.left, q.left, link.left)
                    and check_site(pair.right, q.right, link.right)
                    for q in grammar.pairs
                )
                if not operable:
                    allowed = T.NONE_ALLOWED
                else:
                    partner_allowed = partner.constraint.allowed
                    if isinstance(partner_allowed, frozenset):
                        partner_allowed = _translate_names(
                            partner_allowed, grammar, RIGHT
                        )
                    allowed = _intersect_allowed(allowed, partner_allowed)
                obligatory = obligatory or partner.constraint.obligatory
            if not touched:
                continue
            if obligatory and allowed == T.NONE_ALLOWED:
                allowed = frozenset()
            constraint = Constraint(allowed, obligatory)
            new_root = T.replace_at(
                new_root, address, replace(node_at(new_root, address), constraint=constraint)
            )
        projected.append(replace(tree, root=new_root))
    return projected


def project_left(grammar: SynchronousGrammar) -> list[ElementaryTree]:
    return project(grammar, LEFT)


def project_right(grammar: SynchronousGrammar) -> list[ElementaryTree]:
    return project(grammar, RIGHT)


# ---------------------------------------------------------------------------
# multicomponent reduction


@dataclass(frozen=True)
class MCTagGrammar:
    """Tree-set-local multicomponent view of a synchronous grammar.

    Each pair becomes a named two-tree set over alphabets renamed apart;
    every node carries a selective constraint naming exactly the sets that
    can operate on some link impinging on it; fresh-rooted start trees pair
    the root symbols of the initial pairs.  The object is emitted and
    audited structurally, never parsed.
    """

    name: str
    tree_sets: tuple[tuple[str, tuple[ElementaryTree, ElementaryTree]], ...]
    start_trees: tuple[ElementaryTree, ...]

    def set_names(self) -> list[str]:
        return [name for name, _ in self.tree_sets]

    def nonterminals(self, member: int) -> set[str]:
        out: set[str] = set()
        for _, pair in self.tree_sets:
            for _, node in T.addresses(pair[member].root):
                if node.kind == T.NONTERMINAL:
                    out.add(node.label)
        return out


LEFT_PREFIX = "L."
RIGHT_PREFIX = "R."


def _rename(node: Node, prefix: str) -> Node:
    children = tuple(_rename(c, prefix) for c in node.children)
    if node.kind == T.NONTERMINAL:
        return replace(node, label=prefix + node.label, children=children)
    return replace(node, children=children)


def _with_sa_constraints(
    tree: ElementaryTree,
    pair: TreePair,
    grammar: SynchronousGrammar,
    side: str,
    prefix: str,
) -> ElementaryTree:
    root = _rename(tree.root, prefix)
    for address, node in T.addresses(tree.root):
        if node.kind != T.NONTERMINAL:
            continue
        sets: set[str] = set()
        for link in pair.links:
            end = link.left if side == LEFT else link.right
            if end != address:
                continue
            for q in grammar.pairs:
                if check_site(pair.left, q.left, link.left) and check_site(
                    pair.right, q.right, link.right
                ):
                    sets.add(q.name)
        if sets:
            allowed = frozenset(sets)
        elif node.constraint.obligatory:
            allowed = frozenset()  # an obligation nothing can discharge
        else:
            allowed = T.NONE_ALLOWED
        constraint = Constraint(allowed, node.constraint.obligatory)
        root = T.replace_at(
            root, address, replace(node_at(root, address), constraint=constraint)
        )
    return ElementaryTree(
        f"{pair.name}.{'L' if side == LEFT else 'R'}",
        tree.kind,
        root,
        tree.foot,
        tree.tree_class,
    )


def to_mctag(grammar: SynchronousGrammar) -> MCTagGrammar:
    sets = []
    for pair in grammar.pairs:
        left = _with_sa_constraints(pair.left, pair, grammar, LEFT, LEFT_PREFIX)
        right = _with_sa_constraints(pair.right, pair, grammar, RIGHT, RIGHT_PREFIX)
        sets.append((pair.name, (left, right)))

    used: set[str] = set()
    for _, members in sets:
        for member in members:
            for _, node in T.addresses(member.root):
                if node.kind == T.NONTERMINAL:
                    used.add(node.label)
    start_trees = []
    seen_roots: set[tuple[str, str]] = set()
    for pair in grammar.initial_pairs():
        key = (pair.left.root.label, pair.right.root.label)
        if key in seen_roots:
            continue
        seen_roots.add(key)
        label = f"S{len(start_trees)}"
        while label in used:
            label += "'"
        used.add(label)
        root = T.nonterminal(
            label,
            Node(LEFT_PREFIX + key[0], T.NONTERMINAL, subst=True),
            Node(RIGHT_PREFIX + key[1], T.NONTERMINAL, subst=True),
        )
        start_trees.append(ElementaryTree(f"start.{len(start_trees)}", T.INITIAL, root))
    return MCTagGrammar(grammar.name, tuple(sets), tuple(start_trees))
