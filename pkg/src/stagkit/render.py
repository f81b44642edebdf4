"""Text and DOT rendering for trees, tree pairs, and derivations.

Rendering is total over any object the library can construct; the DOT
output is plain ``digraph`` syntax consumable by standard graph tools.
"""

from __future__ import annotations

from typing import Iterable

from . import trees as T
from .derivation import DerivationNode
from .rewriting import DerivedPairState
from .sync import Link, SynchronousGrammar, TreePair
from .trees import Address, DerivedTree, ElementaryTree, Node


def _marks(
    node: Node,
    addr: Address,
    foot: Address | None,
    links: dict[Address, list[str]] | None = None,
) -> str:
    parts = []
    if node.subst:
        parts.append("↓")
    if addr == foot:
        parts.append("*")
    c = node.constraint
    if c.allowed == T.NONE_ALLOWED:
        parts.append(":NA")
    elif isinstance(c.allowed, frozenset):
        parts.append(":SA(" + ",".join(sorted(c.allowed)) + ")")
    if c.obligatory:
        parts.append(":OA")
    if links:
        parts.extend(links.get(addr, ()))
    return (" " + " ".join(parts)) if parts else ""


def _node_text(node: Node) -> str:
    if node.kind == T.TERMINAL:
        return repr(node.label) if node.label.strip() != node.label or not node.label else node.label
    if node.kind == T.EPSILON:
        return "ε"
    return node.label


def tree_text(
    tree: ElementaryTree | DerivedTree | Node,
    links: dict[Address, list[str]] | None = None,
) -> str:
    """Indented tree rendering with marks after each label."""
    if isinstance(tree, ElementaryTree):
        root, foot = tree.root, tree.foot
    elif isinstance(tree, DerivedTree):
        root, foot = tree.root, tree.foot
    else:
        root, foot = tree, None

    lines: list[str] = []

    def walk(node: Node, addr: Address, prefix: str, tail: str) -> None:
        lines.append(prefix + tail + _node_text(node) + _marks(node, addr, foot, links))
        deeper = prefix + ("   " if tail in ("", "└─ ") else "│  ")
        for i, child in enumerate(node.children, start=1):
            branch = "└─ " if i == len(node.children) else "├─ "
            walk(child, addr + (i,), deeper, branch)

    walk(root, (), "", "")
    return "\n".join(lines)


def _link_marks(links: Iterable[Link]) -> tuple[dict[Address, list[str]], dict[Address, list[str]]]:
    left: dict[Address, list[str]] = {}
    right: dict[Address, list[str]] = {}
    ordered = sorted(links, key=lambda l: (l.left, l.right, l.left_side, l.right_side))
    for k, link in enumerate(ordered, start=1):
        lmark = f"#{k}" + ("" if link.left_side == T.TOP else "v")
        rmark = f"#{k}" + ("" if link.right_side == T.TOP else "v")
        left.setdefault(link.left, []).append(lmark)
        right.setdefault(link.right, []).append(rmark)
    return left, right


def pair_text(pair: TreePair | DerivedPairState, name: str | None = None) -> str:
    """Two trees side by side in source order, with a link overlay."""
    if isinstance(pair, TreePair):
        left_tree: ElementaryTree | DerivedTree = pair.left
        right_tree: ElementaryTree | DerivedTree = pair.right
        links = pair.links
        title = name or pair.name
    else:
        left_tree, right_tree = pair.left, pair.right
        links = pair.links
        title = name or "state"
    lmarks, rmarks = _link_marks(links)
    chunks = [f"== {title} =="]
    chunks.append("left:")
    chunks.append(tree_text(left_tree, lmarks))
    chunks.append("right:")
    chunks.append(tree_text(right_tree, rmarks))
    if links:
        chunks.append("links:")
        ordered = sorted(links, key=lambda l: (l.left, l.right, l.left_side, l.right_side))
        for k, link in enumerate(ordered, start=1):
            larrow = "↑" if link.left_side == T.TOP else "↓"
            rarrow = "↑" if link.right_side == T.TOP else "↓"
            chunks.append(
                f"  #{k}: {T.format_address(link.left)}{larrow} ⌢ "
                f"{T.format_address(link.right)}{rarrow}"
            )
    return "\n".join(chunks)


def derivation_text(deriv: DerivationNode) -> str:
    lines: list[str] = []

    def walk(node: DerivationNode, prefix: str, tail: str, label: str) -> None:
        lines.append(prefix + tail + label + node.tree_name)
        deeper = prefix + ("   " if tail in ("", "└─ ") else "│  ")
        for i, child in enumerate(node.children, start=1):
            branch = "└─ " if i == len(node.children) else "├─ "
            walk(
                child.node,
                deeper,
                branch,
                f"{T.format_address(child.address)}/{child.order} ← ",
            )

    walk(deriv, "", "", "")
    return "\n".join(lines)


def derivation_inline(deriv: DerivationNode) -> str:
    """One-line canonical form, convenient for forest listings."""
    if not deriv.children:
        return deriv.tree_name
    inner = ", ".join(
        f"{T.format_address(c.address)}/{c.order}={derivation_inline(c.node)}"
        for c in deriv.children
    )
    return f"{deriv.tree_name}({inner})"


# ---------------------------------------------------------------------------
# DOT


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _tree_dot_nodes(
    root: Node,
    foot: Address | None,
    prefix: str,
    lines: list[str],
    links: dict[Address, list[str]] | None = None,
) -> None:
    for addr, node in T.addresses(root):
        nid = f"{prefix}_{'_'.join(map(str, addr)) or 'r'}"
        label = _node_text(node) + _marks(node, addr, foot, links)
        shape = "box" if node.kind != T.NONTERMINAL else "ellipse"
        lines.append(f'  {nid} [label="{_dot_escape(label)}", shape={shape}];')
        if addr:
            parent = f"{prefix}_{'_'.join(map(str, addr[:-1])) or 'r'}"
            lines.append(f"  {parent} -> {nid};")


def tree_dot(tree: ElementaryTree | DerivedTree | Node, name: str = "tree") -> str:
    if isinstance(tree, (ElementaryTree, DerivedTree)):
        root, foot = tree.root, tree.foot
    else:
        root, foot = tree, None
    lines = [f'digraph "{_dot_escape(name)}" {{', "  ordering=out;"]
    _tree_dot_nodes(root, foot, "n", lines)
    lines.append("}")
    return "\n".join(lines)


def pair_dot(pair: TreePair | DerivedPairState, name: str | None = None) -> str:
    if isinstance(pair, TreePair):
        left_tree, right_tree = pair.left, pair.right
        links = pair.links
        left_root, left_foot = left_tree.root, left_tree.foot
        right_root, right_foot = right_tree.root, right_tree.foot
        title = name or pair.name
    else:
        left_root, left_foot = pair.left.root, pair.left.foot
        right_root, right_foot = pair.right.root, pair.right.foot
        links = pair.links
        title = name or "state"
    lines = [f'digraph "{_dot_escape(title)}" {{', "  ordering=out;"]
    lines.append("  subgraph cluster_left { label=left;")
    _tree_dot_nodes(left_root, left_foot, "l", lines)
    lines.append("  }")
    lines.append("  subgraph cluster_right { label=right;")
    _tree_dot_nodes(right_root, right_foot, "r", lines)
    lines.append("  }")
    for link in sorted(links, key=lambda l: (l.left, l.right)):
        a = f"l_{'_'.join(map(str, link.left)) or 'r'}"
        b = f"r_{'_'.join(map(str, link.right)) or 'r'}"
        lines.append(f"  {a} -> {b} [style=dashed, constraint=false, dir=none];")
    lines.append("}")
    return "\n".join(lines)


def derivation_dot(deriv: DerivationNode, name: str = "derivation") -> str:
    lines = [f'digraph "{_dot_escape(name)}" {{', "  ordering=out;"]
    counter = [0]

    def walk(node: DerivationNode) -> str:
        nid = f"d{counter[0]}"
        counter[0] += 1
        lines.append(f'  {nid} [label="{_dot_escape(node.tree_name)}", shape=plaintext];')
        for child in node.children:
            cid = walk(child.node)
            label = f"{T.format_address(child.address)}/{child.order}"
            lines.append(f'  {nid} -> {cid} [label="{_dot_escape(label)}"];')
        return nid

    walk(deriv)
    lines.append("}")
    return "\n".join(lines)


def grammar_text(grammar: SynchronousGrammar) -> str:
    return "\n\n".join(pair_text(pair) for pair in grammar.pairs)
