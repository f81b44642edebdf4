"""Derivation trees: well-formedness regimes and interpretation."""

import itertools

import pytest

from stagkit import trees as T
from stagkit.derivation import (
    MULTI,
    STANDARD,
    DerivationChild,
    DerivationNode,
    check_well_formed,
    explain_ill_formed,
    interpret,
    interpret_multi,
    leaf,
)
from stagkit.errors import DerivationError, GrammarError, MultiAdjunctionError
from stagkit.trees import DerivedTree, ElementaryTree, nonterminal, terminal

from oracles import (
    enumerate_tag_derivations,
    sequential_interpret,
    stack_splice_yield,
)


def child(addr, node, order=0):
    return DerivationChild(addr, order, node)


def _op_multiset(deriv):
    """The multiset of tree names a derivation uses, ignoring geometry."""
    yield deriv.tree_name
    for c in deriv.children:
        yield from _op_multiset(c.node)


@pytest.fixture(scope="module")
def two_adverb_right(blink):
    """Right component of the two-adverb derivation: both adverb trees
    operate at the formula root."""
    def build(outer, inner):
        return DerivationNode(
            "blink",
            (
                child((2,), leaf("john")),
                child((), leaf(outer), order=0),
                child((), leaf(inner), order=1),
            ),
        )

    return build


class TestWellFormed:
    def test_two_adverbs_at_root_rejected_standard(self, blink, two_adverb_right):
        deriv = two_adverb_right("intentionally", "twice")
        assert not check_well_formed(deriv, blink.right_trees(), STANDARD)

    def test_two_adverbs_at_root_accepted_multi(self, blink, two_adverb_right):
        deriv = two_adverb_right("intentionally", "twice")
        assert check_well_formed(deriv, blink.right_trees(), MULTI)

    def test_single_node_trivial(self, blink):
        assert check_well_formed(leaf("john"), blink.left_trees(), STANDARD)

    def test_unknown_tree_raises(self, blink):
        with pytest.raises(GrammarError):
            check_well_formed(leaf("nope"), blink.left_trees(), MULTI)

    def test_unfilled_substitution_site(self, blink):
        assert not check_well_formed(leaf("blink"), blink.left_trees(), MULTI)
        reason = explain_ill_formed(leaf("blink"), blink.left_trees(), MULTI)
        assert "substitution" in reason

    def test_two_fillers_rejected(self, blink):
        deriv = DerivationNode(
            "blink",
            (child((1,), leaf("john"), 0), child((1,), leaf("john"), 1)),
        )
        assert not check_well_formed(deriv, blink.left_trees(), MULTI)

    def test_undischarged_obligation(self, eight):
        assert not check_well_formed(leaf("b1"), eight.right_trees(), MULTI)
        reason = explain_ill_formed(leaf("b1"), eight.right_trees(), MULTI)
        assert "obligatory" in reason

    def test_two_predicative_at_one_address_rejected(self, four_count):
        deriv = DerivationNode(
            "start",
            (
                child((), leaf("count"), 0),
                child((), leaf("count"), 1),
            ),
        )
        assert not check_well_formed(deriv, four_count, MULTI)

    def test_orders_must_be_contiguous(self, blink):
        deriv = DerivationNode(
            "blink",
            (
                child((1,), leaf("john")),
                child((), leaf("twice"), order=1),
            ),
        )
        assert not check_well_formed(deriv, blink.left_trees(), MULTI)

    def test_predicative_must_head_its_stack(self, blink):
        # a predicative variant of the twice tree stacked under a modifier
        pred = ElementaryTree(
            "pred_twice",
            T.AUXILIARY,
            blink.pair("twice").left.root,
            blink.pair("twice").left.foot,
            T.PREDICATIVE,
        )
        trees = dict(blink.left_trees())
        trees["pred_twice"] = pred
        deriv = DerivationNode(
            "blink",
            (
                child((1,), leaf("john")),
                child((), leaf("twice"), order=0),
                child((), leaf("pred_twice"), order=1),
            ),
        )
        assert not check_well_formed(deriv, trees, MULTI)
        flipped = DerivationNode(
            "blink",
            (
                child((1,), leaf("john")),
                child((), leaf("pred_twice"), order=0),
                child((), leaf("twice"), order=1),
            ),
        )
        assert check_well_formed(flipped, trees, MULTI)

    def test_standard_acceptance_implies_multi(self, blink, eight, four_count):
        for trees in (blink.left_trees(), blink.right_trees(), four_count):
            for deriv in enumerate_tag_derivations(trees, 4, STANDARD):
                assert check_well_formed(deriv, trees, MULTI)


class TestInterpret:
    def test_single_node_is_elementary(self, blink):
        derived = interpret(leaf("john"), blink.left_trees())
        assert derived == DerivedTree.from_elementary(blink.pair("john").left)

    def test_two_adverb_int_outermost(self, blink, two_adverb_right):
        derived = interpret(two_adverb_right("intentionally", "twice"), blink.right_trees())
        assert "".join(derived.tokens()) == "int(twice(blink(john)))"

    def test_two_adverb_twice_outermost(self, blink, two_adverb_right):
        derived = interpret(two_adverb_right("twice", "intentionally"), blink.right_trees())
        assert "".join(derived.tokens()) == "twice(int(blink(john)))"

    def test_ill_formed_raises(self, blink):
        with pytest.raises(DerivationError):
            interpret(leaf("blink"), blink.left_trees())

    def test_standard_mode_injective_up_to_positional_commutation(self, blink, eight):
        """Distinct standard-regime derivations produce distinct derived
        trees unless they perform the same operations at positionally
        commuting sites (same trees, different chain geometry)."""
        for trees in (blink.left_trees(), eight.left_trees()):
            by_tree = {}
            for deriv in enumerate_tag_derivations(trees, 4, STANDARD):
                derived = interpret(deriv, trees, STANDARD)
                by_tree.setdefault(derived, []).append(deriv)
            for derived, group in by_tree.items():
                signatures = {
                    tuple(sorted(_op_multiset(d))) for d in group
                }
                assert len(signatures) == 1, group

    def test_matches_sequential_composition_exhaustively(self, blink, eight, four_count):
        """Interpretation agrees with one-at-a-time composition with explicit
        re-addressing, over every well-formed derivation of <= 5 nodes."""
        corpora = [
            blink.left_trees(),
            blink.right_trees(),
            eight.left_trees(),
            four_count,
        ]
        checked = 0
        for trees in corpora:
            for deriv in enumerate_tag_derivations(trees, 5, MULTI):
                assert interpret(deriv, trees, MULTI) == sequential_interpret(
                    deriv, trees
                ), deriv
                checked += 1
        assert checked > 50


class TestInterpretMulti:
    def test_singleton_stack_equals_adjoin(self, blink):
        host = T.substitute(blink.pair("blink").left, blink.pair("john").left, (1,))
        stacked = interpret_multi(
            host, (), [DerivedTree.from_elementary(blink.pair("twice").left)]
        )
        assert stacked == T.adjoin(host, blink.pair("twice").left, ())

    def test_adverb_stack_orders_scope(self, blink):
        host = T.substitute(blink.pair("blink").right, blink.pair("john").right, (2,))
        intl = DerivedTree.from_elementary(blink.pair("intentionally").right)
        twice = DerivedTree.from_elementary(blink.pair("twice").right)
        out = interpret_multi(host, (), [intl, twice])
        assert "".join(out.tokens()) == "int(twice(blink(john)))"
        out = interpret_multi(host, (), [twice, intl])
        assert "".join(out.tokens()) == "twice(int(blink(john)))"

    def test_three_stack_permutations_match_splice_oracle(self):
        host = ElementaryTree(
            "h", T.INITIAL, nonterminal("X", nonterminal("X", terminal("m")))
        )
        auxes = [
            ElementaryTree(
                "a%d" % i,
                T.AUXILIARY,
                nonterminal("X", terminal(l), nonterminal("X"), terminal(r)),
                foot=(2,),
                tree_class=T.MODIFIER,
            )
            for i, (l, r) in enumerate([("a", "A"), ("b", "B"), ("c", "C")])
        ]
        derived_host = DerivedTree.from_elementary(host)
        seen = set()
        for perm in itertools.permutations(auxes):
            stack = [DerivedTree.from_elementary(a) for a in perm]
            out = interpret_multi(derived_host, (1,), stack)
            expected = stack_splice_yield(derived_host, (1,), stack)
            assert out.tokens() == expected
            seen.add(out.tokens())
        assert len(seen) == 6

    def test_two_predicatives_rejected(self, blink):
        host = T.substitute(blink.pair("blink").right, blink.pair("john").right, (2,))
        twice = DerivedTree.from_elementary(blink.pair("twice").right)
        with pytest.raises(MultiAdjunctionError):
            interpret_multi(
                host, (), [twice, twice], classes=[T.PREDICATIVE, T.PREDICATIVE]
            )

    def test_predicative_must_be_first(self, blink):
        host = T.substitute(blink.pair("blink").right, blink.pair("john").right, (2,))
        twice = DerivedTree.from_elementary(blink.pair("twice").right)
        with pytest.raises(MultiAdjunctionError):
            interpret_multi(
                host, (), [twice, twice], classes=[T.MODIFIER, T.PREDICATIVE]
            )

    def test_reordering_preserves_yield_length(self, blink):
        host = T.substitute(blink.pair("blink").right, blink.pair("john").right, (2,))
        intl = DerivedTree.from_elementary(blink.pair("intentionally").right)
        twice = DerivedTree.from_elementary(blink.pair("twice").right)
        lengths = {
            len(interpret_multi(host, (), list(stack)).tokens())
            for stack in itertools.permutations([intl, twice])
        }
        assert len(lengths) == 1
