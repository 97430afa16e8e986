"""Workbench for dismantlable graphs and their fixed-point machinery.

Library surface: finite simple graphs and automorphism groups; dismantling
orders with a pursuit-game oracle; dismantling projections with exhaustive
axiom verification; group-invariant cliques; flag complexes, fixed
subcomplexes and their homology; hyperbolicity and Rips power graphs.
"""

from .dismantling import (
    DismantlingTrace,
    component_dismantling_orders,
    copwin_oracle,
    dismantling_order,
    is_dismantlable,
    random_dismantlable,
    remove_and_reorder,
    verify_trace,
)
from .errors import (
    CapExceededError,
    ClaimCheckError,
    ConvexityError,
    DisconnectedGraphError,
    DismantleError,
    ExposureError,
    HypothesisError,
    InvalidInput,
    InvalidTraceError,
    NotAnAutomorphismError,
    NotATreeError,
    NotDismantlableError,
    NotDominatedError,
    UnknownVertexError,
    VerificationBugError,
)
from .flag_complex import (
    DomSimplex,
    ReductionCertificate,
    ReductionStage,
    SimplicialComplex,
    dom_simplex,
    fixed_subcomplex,
    flag_complex,
    gf2_homology,
    greedy_collapse,
    invariant_simplex_poset,
    is_homology_trivial,
    theorem15_reduction,
)
from .graph import (
    Graph,
    Permutation,
    PermutationGroup,
    automorphism_group,
    closed_neighborhood,
    dominators,
    equal_neighborhood_quotient,
    graph_to_dot,
    group_closure,
    identity_permutation,
    induced_subgraph,
    is_automorphism,
    is_clique,
    is_tree,
    trivial_group,
)
from .hyperbolic import (
    ClaimCheckResult,
    ClaimStep,
    HyperbolicityReport,
    QuasiCentre,
    TriangleWitness,
    ball,
    hyperbolicity_delta,
    invariant_subgraph_for,
    lemma101_claim_check,
    quasi_centre,
    rips_ball_order,
    rips_power_graph,
    set_diameter,
)
from .instances import (
    complete_graph,
    cycle_graph,
    diagonals_cross,
    free_group_ball,
    grid_graph,
    path_graph,
    petersen_graph,
    polygon_diagonal_graph,
    polygon_diagonals,
    polygon_dihedral_generators,
    polygon_projection,
    polygon_surgery,
    random_tree,
    standard_graph,
    star_graph,
    wheel_graph,
)
from .invariant_clique import invariant_clique, verify_invariant_clique
from .projection import (
    AcyclicityReport,
    DismantlingProjection,
    ExposureReport,
    Pair,
    ProjectionFamily,
    exposure_failure_is_genuine,
    invariant_clique_via_projections,
    is_pi_convex,
    order_from_projection,
    restrict_projection,
    tree_power_projection,
    verify_axiom_acyclic,
    verify_axiom_exposed,
    verify_equivariant,
)

__version__ = "0.1.0"
