"""Exact tools for P5-free graphs: invariants, certificates and seeded corpora."""

__version__ = "0.1.0"

from .errors import (
    CapabilityError,
    Graph6Error,
    InvariantViolation,
    NotP5FreeError,
    P5LabError,
    PartitionError,
)
from .graph import (
    Graph,
    Relation,
    Sparsity,
    blow_up,
    complement,
    complete_graph,
    components,
    cycle_graph,
    disjoint_union,
    empty_graph,
    from_graph6,
    induced,
    is_connected,
    join,
    max_degree,
    neighborhood,
    pair_relation,
    path_graph,
    petersen_graph,
    sparsity_class,
    to_graph6,
)
from .invariants import (
    alpha,
    chi,
    chi_star,
    dual_weights,
    empirical_exponent,
    hall_ratio,
    maximal_stable_sets,
    omega,
    psi,
)
from .structure import (
    Blockade,
    CombOutcome,
    Mode,
    comb,
    cutset_attachment_split,
    find_anticomplete_pair,
    find_complete_blockade,
    find_eps_restricted_subgraph,
    find_induced_p5,
    minimal_cutset,
)
from .decomposition import (
    AnticompletePair,
    CompleteBlockade,
    CompletePair,
    anti_decompose,
    check_pq_sparse,
    induction_step_inequality,
    phi,
    phi_lower_bound_check,
    trichotomy_search,
    validate_certificate,
)
from .generators import (
    GenSpec,
    all_graphs,
    blowup_closure,
    exhaustive_p5_free,
    random_cograph,
    random_gnp,
    rejection_p5_free,
    triangle_free_complement,
)
