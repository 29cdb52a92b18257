"""Exact decision procedures and chain certificates for statistical relations
(likelihood, sufficiency, conditionality, invariance) on finite inference bases."""

from .ancillarity import (
    AccuracyReport,
    ConditionalityWitness,
    NotAncillary,
    SpaceTooLarge,
    condition_on_cell,
    conditional_accuracy,
    enumerate_ancillaries,
    is_ancillary,
    maximal_ancillaries,
    mle,
    related_C,
    related_C_durbin,
    satisfies_durbin,
)
from .certificate import ChainCertificate, Link
from .closure import (
    RelationEdge,
    UnionFind,
    build_relation_graph,
    equivalence_classes,
    find_chain,
    reachability_classes,
)
from .constructions import (
    birnbaum_chain,
    efm_chain,
    rewrite_LG_to_CG,
    table4_experiment,
    theorem8_pair,
)
from .model import (
    Experiment,
    InferenceBase,
    ModelBijection,
    ModelError,
    StatisticPartition,
    canonicalize_experiment,
    experiments_isomorphic,
    likelihood_vector,
    validate_experiment,
)
from .relations import (
    LikelihoodWitness,
    SufficiencyWitness,
    minimal_sufficient_partition,
    reduce_experiment,
    related_G,
    related_L,
    related_S,
)
from .verify import VerificationReport, verify_chain, verify_certificate_json

__version__ = "0.1.0"
