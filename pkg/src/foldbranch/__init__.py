"""Folding of root systems and branching of V(d rho) to fixed-point subalgebras."""

from .branching import (
    branch_rho,
    counterexample_demo,
    proposition_criterion,
    subset_weights,
    theorem_candidate_set,
    triality_demo,
    verify_lemma,
    verify_panyushev,
    verify_proposition,
    verify_theorem,
)
from .charalg import (
    FormalCharacter,
    IrrDecomposition,
    char_freudenthal,
    char_product,
    configured,
    decompose_character,
    folded_rho_character,
    is_weight_of,
    klimyk_tensor,
    restrict_character,
    weight_multiplicity,
)
from .errors import FoldBranchError, InvalidInput, ResourceGuardExceeded
from .folding import (
    SUPPORTED_PAIRS,
    DiagramAutomorphism,
    FoldedPair,
    enumerate_automorphisms,
    fold,
    folded_pair,
)
from .rootsys import LieType, RootSystem, Weight, build_root_system

__version__ = "0.1.0"
