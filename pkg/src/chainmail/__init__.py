"""Finite order-theory toolkit: chainmails, exteriors, connectivity
lattices and their taxonomy, and an isomorph-free enumerator."""

from .errors import FormatError, GuardExceeded, PreconditionError
from .poset import ElementSet, FinitePoset, Violation
from .exterior import (
    TmdFamily,
    downclosed_subchainmails,
    downset_to_tmd,
    exterior,
    exterior_as_absolute,
    exterior_is_complete,
    inclusion_poset,
    tmd_to_downset,
)
from .connectivity import (
    ConnectivityPair,
    TaxonomyReport,
    absolutely_connected_elements,
    borger_implication_check,
    cl0,
    cl1,
    cl1_half,
    cl1_prime,
    cl2,
    cl3,
    classify,
    components,
    e1,
    e2,
    e3,
    e4,
    frame_equivalence_check,
    galois_adjunction_holds,
    is_absolute,
    is_multicoreflective,
    is_orthogonal,
    is_separated,
    is_subchainmail_of,
    kernel,
    local_join,
    sigma_closure,
)
from .generators import (
    Graph,
    Hypergraph,
    downset_lattice_pair,
    forest_poset_check,
    graph_connectivity_pair,
    hypergraph_connectivity_pair,
    k_connectivity_pair,
    named_fixture,
    topology_pair,
)
from .enumeration import (
    EnumerationResult,
    enumerate_connected_chainmails,
    enumerate_connectivity_pairs,
    enumerate_posets,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
