"""Derivation trees and their interpretation into derived trees.

A derivation tree records which elementary tree operated at which address of
its parent.  Two well-formedness regimes are supported:

* ``standard`` -- at most one operation per address in each tree, the
  classical exclusion that keeps interpretation determinate;
* ``multi`` -- any number of modifier auxiliaries may stack at one address,
  plus at most one predicative auxiliary, which must be outermost.  Stacks
  are ordered; order index 0 is the outermost (topmost) tree in the result.

Interpretation is a pure bottom-up fold; obligatory-adjunction discharge and
substitution completeness are judged here, at the derivation level, never by
mutating constraints inside trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    AddressError,
    DerivationError,
    GrammarError,
    MultiAdjunctionError,
)
from . import trees as T
from .trees import (
    Address,
    DerivedTree,
    ElementaryTree,
    check_site,
    node_at,
    splice,
)

STANDARD = "standard"
MULTI = "multi"

_MODES = (STANDARD, MULTI)


@dataclass(frozen=True)
class DerivationChild:
    address: Address
    order: int
    node: "DerivationNode"


@dataclass(frozen=True)
class DerivationNode:
    """A node of a derivation tree; children are canonically sorted by
    (address, order) so that structural equality and hashing are stable."""

    tree_name: str
    children: tuple[DerivationChild, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(
            sorted(self.children, key=lambda c: (c.address, c.order))
        )
        object.__setattr__(self, "children", ordered)

    def child(self, address: Address, node: "DerivationNode", order: int = 0):
        """Return a copy with one more child arc."""
        extra = DerivationChild(address, order, node)
        return DerivationNode(self.tree_name, self.children + (extra,))

    @property
    def size(self) -> int:
        return 1 + sum(c.node.size for c in self.children)

    def groups(self) -> dict[Address, list[DerivationChild]]:
        out: dict[Address, list[DerivationChild]] = {}
        for c in self.children:
            out.setdefault(c.address, []).append(c)
        for group in out.values():
            group.sort(key=lambda c: c.order)
        return out


def leaf(tree_name: str) -> DerivationNode:
    return DerivationNode(tree_name)


GrammarMap = Mapping[str, ElementaryTree]


def as_grammar_map(grammar: GrammarMap | Iterable[ElementaryTree]) -> dict[str, ElementaryTree]:
    if isinstance(grammar, Mapping):
        return dict(grammar)
    out: dict[str, ElementaryTree] = {}
    for tree in grammar:
        if tree.name in out:
            raise GrammarError(f"duplicate tree name {tree.name!r}")
        out[tree.name] = tree
    return out


def explain_ill_formed(
    deriv: DerivationNode,
    grammar: GrammarMap | Iterable[ElementaryTree],
    mode: str = MULTI,
) -> str | None:
    """Return a description of the first well-formedness violation, or None.

    Unknown tree names raise GrammarError; everything else is a judgement.
    """
    if mode not in _MODES:
        raise DerivationError(f"unknown well-formedness mode {mode!r}")
    gmap = as_grammar_map(grammar)

    def walk(node: DerivationNode) -> str | None:
        if node.tree_name not in gmap:
            raise GrammarError(f"unknown tree {node.tree_name!r}")
        parent = gmap[node.tree_name]
        groups = node.groups()
        for address, group in groups.items():
            orders = [c.order for c in group]
            if sorted(orders) != list(range(len(group))):
                return (
                    f"orders at {T.format_address(address)} of {parent.name} "
                    f"must be 0..{len(group) - 1}"
                )
            try:
                site = node_at(parent.root, address)
            except AddressError:
                return (
                    f"address {T.format_address(address)} does not resolve "
                    f"in {parent.name}"
                )
            for c in group:
                if c.node.tree_name not in gmap:
                    raise GrammarError(f"unknown tree {c.node.tree_name!r}")
                if not check_site(parent, gmap[c.node.tree_name], address):
                    return (
                        f"{c.node.tree_name} cannot operate at "
                        f"{T.format_address(address)} of {parent.name}"
                    )
            if site.subst:
                if len(group) != 1:
                    return (
                        f"substitution site {T.format_address(address)} of "
                        f"{parent.name} needs exactly one operation"
                    )
            else:
                if mode == STANDARD and len(group) > 1:
                    return (
                        f"multiple operations at {T.format_address(address)} "
                        f"of {parent.name} (standard regime)"
                    )
                if mode == MULTI:
                    preds = [
                        c
                        for c in group
                        if gmap[c.node.tree_name].tree_class == T.PREDICATIVE
                    ]
                    if len(preds) > 1:
                        return (
                            f"two predicative trees at {T.format_address(address)} "
                            f"of {parent.name}"
                        )
                    if preds and len(group) > 1 and preds[0].order != 0:
                        return (
                            f"predicative tree at {T.format_address(address)} "
                            f"of {parent.name} must be outermost"
                        )
        for address, site in T.addresses(parent.root):
            if site.constraint.obligatory and address not in groups:
                return (
                    f"obligatory adjunction at {T.format_address(address)} "
                    f"of {parent.name} is not discharged"
                )
            if site.subst and address not in groups:
                return (
                    f"substitution site {T.format_address(address)} of "
                    f"{parent.name} is unfilled"
                )
        for c in node.children:
            reason = walk(c.node)
            if reason is not None:
                return reason
        return None

    return walk(deriv)


def check_well_formed(
    deriv: DerivationNode,
    grammar: GrammarMap | Iterable[ElementaryTree],
    mode: str = MULTI,
) -> bool:
    return explain_ill_formed(deriv, grammar, mode) is None


def interpret_multi(
    host: DerivedTree,
    t: Address,
    stack: Sequence[DerivedTree],
    classes: Sequence[str] | None = None,
) -> DerivedTree:
    """Compose an ordered same-address stack at ``t``.

    ``stack[0]`` ends up outermost, ``stack[i+1]`` at ``stack[i]``'s foot
    image, and the original subtree of ``t`` beneath the last foot.  When
    tree classes are supplied, at most one may be predicative and it must
    come first.
    """
    if classes is not None:
        preds = [i for i, c in enumerate(classes) if c == T.PREDICATIVE]
        if len(preds) > 1:
            raise MultiAdjunctionError("two predicative trees in one stack")
        if preds and preds[0] != 0:
            raise MultiAdjunctionError("a predicative tree must head its stack")
    result = host
    for tree in reversed(stack):
        result = splice(result, tree, t)
    return result


def interpret(
    deriv: DerivationNode,
    grammar: GrammarMap | Iterable[ElementaryTree],
    mode: str = MULTI,
) -> DerivedTree:
    """Map a well-formed derivation tree to the derived tree it specifies."""
    gmap = as_grammar_map(grammar)
    reason = explain_ill_formed(deriv, gmap, mode)
    if reason is not None:
        raise DerivationError(reason)

    def build(node: DerivationNode) -> DerivedTree:
        tree = gmap[node.tree_name]
        result = DerivedTree.from_elementary(tree)
        groups = node.groups()
        # Deeper addresses first, so earlier compositions cannot displace
        # later sites; prefix-related sites only nest that way around.
        for address in sorted(groups, key=lambda a: (-len(a), a)):
            group = groups[address]
            operands = [build(c.node) for c in group]
            site = node_at(tree.root, address)
            if site.subst:
                result = DerivedTree(
                    T.replace_at(result.root, address, operands[0].root),
                    result.foot,
                )
            elif len(group) == 1:
                result = splice(result, operands[0], address)
            else:
                classes = [gmap[c.node.tree_name].tree_class for c in group]
                result = interpret_multi(result, address, operands, classes)
        return result

    return build(deriv)
