"""stagkit: a synchronous tree-adjoining grammar toolkit.

The package covers TAG composition primitives (adjunction, substitution,
address re-mapping), derivation trees under the standard and
multi-adjunction regimes, synchronous grammars with both the link-rewriting
and the paired-derivation semantics, component projection, the reduction to
multicomponent tree sets, a chart parser with packed forests, and the
parse -> map -> generate transduction pipeline.  Everything is immutable
and purely functional; values can be shared across threads freely.
"""

from .errors import (
    AddressError,
    AdjunctionError,
    ConstraintError,
    DerivationError,
    GrammarError,
    LexiconError,
    LinkError,
    LoadError,
    MultiAdjunctionError,
    SiteError,
    StagError,
    StateError,
)
from .trees import (
    AUXILIARY,
    BOTTOM,
    INITIAL,
    MODIFIER,
    PREDICATIVE,
    TOP,
    Address,
    Constraint,
    DerivedTree,
    ElementaryTree,
    Node,
    address_map,
    adjoin,
    check_site,
    epsilon,
    format_address,
    node_at,
    nonterminal,
    parse_address,
    substitute,
    terminal,
    yield_tokens,
)
from .derivation import (
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
from .sync import (
    GrammarOptions,
    Link,
    MCTagGrammar,
    SynchronousDerivation,
    SynchronousGrammar,
    SyncChild,
    SyncNode,
    TreePair,
    check_sync_derivation,
    derived_pair,
    enumerate_natural,
    enumerate_sync_derivations,
    explain_sync_violation,
    project,
    project_left,
    project_right,
    to_mctag,
)
from .rewriting import (
    DerivedPairState,
    RewriteStep,
    RewriteTrace,
    enumerate_rewriting,
    init_state,
    is_complete,
    rewrite_step,
)
from .parsing import (
    DerivationForest,
    map_derivation,
    parse,
    recognizes_some_string,
    transduce,
)
from .grammar_io import (
    fixture_names,
    fixture_text,
    load_fixture,
    load_grammar,
    load_tag,
    serialize_grammar,
    serialize_mctag,
    serialize_tag,
)

__all__ = [name for name in dir() if not name.startswith("_")]
