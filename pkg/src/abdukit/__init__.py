"""abdukit: hypothesis-graph abduction with user-feedback dialogues.

A workbench for a two-level many-sorted language, finite-structure model
checking, formula-graph embeddings and isomorphism, the
UFBD/Basic/Simple dialogue protocols with their ablations, and exhaustive
verification of their halting and convergence behaviour at desk scale.
"""

from .lang import (
    Alphabet,
    Formula,
    Literal,
    Sentence,
    existential_closure,
    free_variables,
    parse_formula,
    parse_literal,
    parse_sentence,
    serialize,
    well_sorted,
)
from .semantics import (
    Assignment,
    FiniteStructure,
    GroundLit,
    StructureClass,
    class_from_theory,
    equivalent_in,
    logically_implies,
    satisfies,
    valid_in,
)
from .graphs import (
    EMPTY_GRAPH,
    Embedding,
    FormulaGraph,
    canonical_key,
    can_embed,
    enumerate_graphs,
    enumerate_graphs_up_to,
    enumerate_subgraphs,
    find_embedding,
    is_isomorphic,
    is_subgraph,
    sent_of,
)
from .hypotheses import (
    CandidatePool,
    PropertyG,
    PropertyH,
    build_fixture_graph_pool,
    build_graph_pool,
    build_hypothesis_pool,
    is_hypothesis,
    is_hypothesis_graph,
    prop_g,
    prop_h,
)
from .dialogue import (
    DialogueState,
    Feedback,
    FeedbackSet,
    Presentation,
    ProtocolConfig,
    Transcript,
    check_convergence,
    is_maximal,
    next_feedback,
    next_presentation,
    run_dialogue,
    validate_feedback,
    validate_presentation,
    validate_transcript,
)
from .harness import (
    counterexample_prefix,
    exhaustive_dialogues,
    random_walk,
    reproduce_non_convergence,
    verify_convergence,
    verify_halting,
)

__version__ = "0.1.0"
