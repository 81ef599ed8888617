"""Quantum metric structures on towers of finite-dimensional C*-algebras.

Builds inductive towers of matrix-block algebras with trace-compatible
embeddings, the trace-preserving projections onto their levels, the
associated quasi-Leibniz seminorms, transport (dual Monge-Kantorovich)
distances between states, and certified upper bounds on the quantum
propinquity between the resulting metric structures.
"""

from .algebra import (
    BlockElement,
    FdCStar,
    StateVec,
    TraceWeights,
    adjoint,
    cstar_norm,
    inner_mu,
    jordan,
    lie,
    mul,
    point_state,
    scale,
    state_eval,
    trace_eval,
    trace_state,
    unit,
)
from .cantor import cantor_oracle, u_element, verify_mk_vs_oracle
from .cfrac import BaireBox, CfExpansion, baire_distance, box_predicates, cf_expand, convergents
from .errors import (
    AfpropError,
    GridBudgetError,
    PrecisionError,
    SelfAdjointnessError,
    UndeterminedDistanceError,
    ValidationError,
)
from .expectation import ExpectationOperator, cantor_fast_expect, cond_expect
from .linalg import HermitianEigen, herm_eigen, operator_norm
from .lipnorm import LipData, lip, lip_lipschitz_constant, quasi_leibniz_margin
from .mk import (
    MkResult,
    mk_abelian,
    mk_depth1_closed_form,
    mk_general,
    pushforward_under_expectation,
)
from .propinquity import (
    BridgeBound,
    effros_shen_chain_bound,
    prefix_match_bound,
    truncation_bound,
    two_lipnorm_bridge_bound,
    uhf_holder_bound,
)
from .tower import (
    BetaSequence,
    EmbeddingLayout,
    InductiveTower,
    beta_geometric,
    cantor_tower,
    effros_shen_tower,
    embed,
    tower_from_spec,
    tower_to_spec,
    uhf_tower,
    validate,
)

__version__ = "0.1.0"
