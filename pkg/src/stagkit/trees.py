"""Elementary and derived trees, Gorn addressing, and the TAG composition primitives.

Trees are immutable: every operation returns a new tree and values can be
shared freely.  Node identity in derived trees is positional (by address);
provenance is the derivation module's business.

Addresses are 1-based tuples of child indices; the empty tuple is the root.
When an auxiliary tree is adjoined at address ``t``, the host node at ``t``
is consumed: the adjoined root takes its place at ``t`` and the adjoined
foot, carrying the foot's own constraint, takes over the host node's
children at ``t + foot``.  Addresses strictly below ``t`` move by foot
interposition, which is what :func:`address_map` computes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Union

from .errors import (
    AddressError,
    AdjunctionError,
    ConstraintError,
    GrammarError,
    SiteError,
)

Address = tuple[int, ...]

ROOT: Address = ()

NONTERMINAL = "nonterminal"
TERMINAL = "terminal"
EPSILON = "epsilon"

INITIAL = "initial"
AUXILIARY = "auxiliary"

MODIFIER = "modifier"
PREDICATIVE = "predicative"

TOP = "top"
BOTTOM = "bottom"


def format_address(addr: Address) -> str:
    """Render an address for display; the root prints as ``ε``."""
    return "ε" if not addr else ".".join(str(i) for i in addr)


def parse_address(text: str) -> Address:
    text = text.strip()
    if text in ("", "ε", "eps"):
        return ()
    try:
        parts = tuple(int(p) for p in text.split("."))
    except ValueError:
        raise AddressError(f"cannot parse address {text!r}")
    if any(p < 1 for p in parts):
        raise AddressError(f"address components are 1-based: {text!r}")
    return parts


def is_prefix(prefix: Address, addr: Address) -> bool:
    return len(prefix) <= len(addr) and addr[: len(prefix)] == prefix


def address_map(
    t: Address, f: Address, u: Address, side: str | None = None
) -> Address:
    """Map host address ``u`` through an adjunction at ``t`` with foot ``f``.

    Addresses outside the subtree at ``t`` are unchanged; addresses strictly
    below ``t`` acquire the foot infix.  For ``u == t`` the caller must say
    which image is meant: ``"top"`` yields ``t`` (the adjoined root) and
    ``"bottom"`` yields ``t + f`` (the adjoined foot).
    """
    if not is_prefix(t, u):
        return u
    if u == t:
        if side == TOP:
            return t
        if side == BOTTOM:
            return t + f
        raise AddressError(
            f"address {format_address(u)} is the adjunction site; a side "
            "(top/bottom) is required to map it"
        )
    return t + f + u[len(t):]


ANY_ALLOWED = "any"
NONE_ALLOWED = "none"


@dataclass(frozen=True)
class Constraint:
    """Adjoining constraint on a node.

    ``allowed`` is ``"any"``, ``"none"``, or a frozenset of auxiliary tree
    names (a selective constraint).  An empty frozenset behaves like
    ``"none"`` but is kept distinct: constraint projection can produce an
    obligatory node at which nothing may adjoin, and the literal ``"none"``
    is reserved for authored null-adjunction constraints.
    """

    allowed: Union[str, frozenset[str]] = ANY_ALLOWED
    obligatory: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.allowed, str):
            if self.allowed not in (ANY_ALLOWED, NONE_ALLOWED):
                raise GrammarError(f"bad constraint kind {self.allowed!r}")
        else:
            object.__setattr__(self, "allowed", frozenset(self.allowed))

    def permits(self, name: str) -> bool:
        if self.allowed == ANY_ALLOWED:
            return True
        if self.allowed == NONE_ALLOWED:
            return False
        return name in self.allowed

    @property
    def is_vacuous(self) -> bool:
        return self.allowed == ANY_ALLOWED and not self.obligatory


NO_CONSTRAINT = Constraint()


@dataclass(frozen=True)
class Node:
    """One tree node: a nonterminal (possibly substitution-marked), a
    terminal, or an explicit epsilon leaf."""

    label: str
    kind: str = NONTERMINAL
    children: tuple["Node", ...] = ()
    constraint: Constraint = NO_CONSTRAINT
    subst: bool = False

    def __post_init__(self) -> None:
        if self.kind not in (NONTERMINAL, TERMINAL, EPSILON):
            raise GrammarError(f"bad node kind {self.kind!r}")
        object.__setattr__(self, "children", tuple(self.children))

    @property
    def is_leaf(self) -> bool:
        return not self.children


def nonterminal(
    label: str,
    *children: Node,
    constraint: Constraint = NO_CONSTRAINT,
    subst: bool = False,
) -> Node:
    return Node(label, NONTERMINAL, tuple(children), constraint, subst)


def terminal(symbol: str) -> Node:
    return Node(symbol, TERMINAL)


def epsilon() -> Node:
    return Node("", EPSILON)


def node_at(root: Node, addr: Address) -> Node:
    """Resolve ``addr`` in the tree under ``root`` or raise AddressError."""
    node = root
    for i in addr:
        if i < 1 or i > len(node.children):
            raise AddressError(f"address {format_address(addr)} does not resolve")
        node = node.children[i - 1]
    return node


def resolves(root: Node, addr: Address) -> bool:
    try:
        node_at(root, addr)
    except AddressError:
        return False
    return True


def addresses(root: Node) -> Iterator[tuple[Address, Node]]:
    """Iterate (address, node) pairs in preorder."""
    stack = [(ROOT, root)]
    while stack:
        addr, node = stack.pop()
        yield addr, node
        for i in range(len(node.children), 0, -1):
            stack.append((addr + (i,), node.children[i - 1]))


def replace_at(root: Node, addr: Address, new: Node) -> Node:
    if not addr:
        return new
    i = addr[0]
    child = replace_at(root.children[i - 1], addr[1:], new)
    children = root.children[: i - 1] + (child,) + root.children[i:]
    return replace(root, children=children)


def yield_tokens(root: Node) -> tuple[str, ...]:
    """Left-to-right terminal symbols; epsilon leaves contribute nothing."""
    out: list[str] = []

    def walk(node: Node) -> None:
        if node.kind == TERMINAL:
            out.append(node.label)
        for child in node.children:
            walk(child)

    walk(root)
    return tuple(out)


@dataclass(frozen=True)
class ElementaryTree:
    """A named initial or auxiliary tree.

    Auxiliary trees carry the address of their foot node and a class,
    modifier or predicative, that governs same-address stacking in the
    multi-adjunction regime.
    """

    name: str
    kind: str
    root: Node
    foot: Address | None = None
    tree_class: str = PREDICATIVE

    def __post_init__(self) -> None:
        if self.kind not in (INITIAL, AUXILIARY):
            raise GrammarError(f"{self.name}: bad tree kind {self.kind!r}")
        if self.tree_class not in (MODIFIER, PREDICATIVE):
            raise GrammarError(f"{self.name}: bad tree class {self.tree_class!r}")
        if self.kind == INITIAL:
            if self.foot is not None:
                raise GrammarError(f"{self.name}: initial trees have no foot")
        else:
            if self.foot is None:
                raise GrammarError(f"{self.name}: auxiliary tree needs a foot")
            foot_node = node_at(self.root, self.foot)
            if foot_node.kind != NONTERMINAL or not foot_node.is_leaf:
                raise GrammarError(f"{self.name}: foot must be a nonterminal leaf")
            if foot_node.label != self.root.label:
                raise GrammarError(
                    f"{self.name}: foot label {foot_node.label!r} differs from "
                    f"root label {self.root.label!r}"
                )
            if foot_node.subst:
                raise GrammarError(f"{self.name}: foot node cannot be a substitution site")
        for addr, node in addresses(self.root):
            if node.kind in (TERMINAL, EPSILON):
                if node.children:
                    raise GrammarError(
                        f"{self.name}: terminal/epsilon at {format_address(addr)} "
                        "must be a leaf"
                    )
                if node.subst or not node.constraint.is_vacuous:
                    raise GrammarError(
                        f"{self.name}: marks and constraints belong on nonterminals "
                        f"({format_address(addr)})"
                    )
            else:
                if node.subst and node.children:
                    raise GrammarError(
                        f"{self.name}: substitution node {format_address(addr)} "
                        "must be a leaf"
                    )
                if node.is_leaf and not node.subst and addr != self.foot:
                    raise GrammarError(
                        f"{self.name}: bare nonterminal leaf at {format_address(addr)}; "
                        "mark it for substitution, make it the foot, or give it children"
                    )
                if node.constraint.obligatory and node.constraint.allowed == NONE_ALLOWED:
                    raise GrammarError(
                        f"{self.name}: obligatory adjunction at {format_address(addr)} "
                        "contradicts a null-adjunction constraint"
                    )

    @property
    def is_auxiliary(self) -> bool:
        return self.kind == AUXILIARY


@dataclass(frozen=True)
class DerivedTree:
    """The result of composing trees; auxiliary-rooted results keep a foot."""

    root: Node
    foot: Address | None = None

    @classmethod
    def from_elementary(cls, tree: ElementaryTree) -> "DerivedTree":
        return cls(tree.root, tree.foot)

    def tokens(self) -> tuple[str, ...]:
        return yield_tokens(self.root)


TreeLike = Union[ElementaryTree, DerivedTree]


def _as_derived(tree: TreeLike) -> DerivedTree:
    if isinstance(tree, ElementaryTree):
        return DerivedTree.from_elementary(tree)
    return tree


def splice(host: TreeLike, aux: TreeLike, t: Address) -> DerivedTree:
    """Structurally adjoin ``aux`` (which must have a foot) at ``t``.

    Only the label agreement needed for the splice itself is checked here;
    :func:`adjoin` is the constraint-checking public operation.  The host
    node at ``t`` is consumed: its children re-hang beneath the image of the
    foot, which keeps the foot's own constraint.
    """
    host = _as_derived(host)
    aux = _as_derived(aux)
    if aux.foot is None:
        raise AdjunctionError("cannot splice a tree without a foot")
    site = node_at(host.root, t)
    aux_foot = node_at(aux.root, aux.foot)
    if site.kind != NONTERMINAL or site.label != aux_foot.label:
        raise AdjunctionError(
            f"label mismatch at {format_address(t)}: "
            f"{site.label!r} vs {aux_foot.label!r}"
        )
    merged = replace(aux_foot, children=site.children)
    planted = replace_at(aux.root, aux.foot, merged)
    new_root = replace_at(host.root, t, planted)
    new_foot = host.foot
    if new_foot is not None:
        new_foot = address_map(t, aux.foot, new_foot, side=BOTTOM)
    return DerivedTree(new_root, new_foot)


def adjoin(host: TreeLike, aux: ElementaryTree, t: Address) -> DerivedTree:
    """Adjoin auxiliary tree ``aux`` at address ``t`` of ``host``.

    The site must be a nonterminal that is neither a substitution mark nor
    the host's foot, with a matching label and a constraint that permits
    ``aux`` by name.
    """
    host = _as_derived(host)
    site = node_at(host.root, t)
    if aux.kind != AUXILIARY:
        raise AdjunctionError(f"{aux.name} is not an auxiliary tree")
    if site.subst:
        raise SiteError(f"{format_address(t)} is a substitution site")
    if host.foot is not None and t == host.foot:
        raise SiteError(f"{format_address(t)} is the host's foot")
    if site.kind != NONTERMINAL or site.label != aux.root.label:
        raise AdjunctionError(
            f"cannot adjoin {aux.name} at {format_address(t)}: label mismatch"
        )
    if not site.constraint.permits(aux.name):
        raise ConstraintError(
            f"constraint at {format_address(t)} does not permit {aux.name}"
        )
    return splice(host, aux, t)


def substitute(host: TreeLike, tree: ElementaryTree, t: Address) -> DerivedTree:
    """Substitute initial tree ``tree`` at the substitution leaf ``t``."""
    host = _as_derived(host)
    site = node_at(host.root, t)
    if tree.kind != INITIAL:
        raise SiteError(f"{tree.name} is not an initial tree")
    if not site.subst:
        raise SiteError(f"{format_address(t)} is not a substitution site")
    if site.label != tree.root.label:
        raise SiteError(
            f"cannot substitute {tree.name} at {format_address(t)}: label mismatch"
        )
    return DerivedTree(replace_at(host.root, t, tree.root), host.foot)


def check_site(host: TreeLike, tree: ElementaryTree, t: Address) -> bool:
    """True iff ``tree`` may operate at ``t``: substitution for initial
    trees, adjunction for auxiliary trees.  Raises AddressError when ``t``
    does not resolve; total otherwise."""
    derived = _as_derived(host)
    site = node_at(derived.root, t)
    if tree.kind == INITIAL:
        return site.subst and site.kind == NONTERMINAL and site.label == tree.root.label
    if site.kind != NONTERMINAL or site.subst:
        return False
    if derived.foot is not None and t == derived.foot:
        return False
    if site.label != tree.root.label:
        return False
    return site.constraint.permits(tree.name)
