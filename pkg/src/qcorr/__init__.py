"""Relative-entropy correlation measures for small multipartite quantum states."""

from .bases import ProductBasisPoint
from .config import OptimizerConfig
from .discord import (DiscordResult, closest_classical_state, discord,
                      discord_pure_bipartite, enumerate_local_minima)
from .entanglement import (ReeResult, SeparableEnsemble, pure_bipartite_ree,
                           ree_closed_form, ree_upper_bound)
from .measures import (EntropyValue, binary_entropy, classical_correlation,
                       lambda_functional, relative_entropy, shannon_entropy,
                       total_mutual_information, von_neumann_entropy)
from .relations import (CampaignSummary, MeasureEngine, RelationReport,
                        conjecture_campaign, evaluate, ordering_permutation)
from .states import (AcinParams, MultipartiteState, Partition, from_acin,
                     load_state, named_state, sample_random_mixed,
                     sample_random_pure, save_state)

__all__ = [
    "AcinParams", "CampaignSummary", "DiscordResult", "EntropyValue",
    "MeasureEngine", "MultipartiteState", "OptimizerConfig", "Partition",
    "ProductBasisPoint", "ReeResult", "RelationReport", "SeparableEnsemble",
    "binary_entropy", "classical_correlation", "closest_classical_state",
    "conjecture_campaign", "discord", "discord_pure_bipartite",
    "enumerate_local_minima", "evaluate", "from_acin", "lambda_functional",
    "load_state", "named_state", "ordering_permutation", "pure_bipartite_ree",
    "ree_closed_form", "ree_upper_bound", "relative_entropy",
    "sample_random_mixed", "sample_random_pure", "save_state",
    "shannon_entropy", "total_mutual_information", "von_neumann_entropy",
]

__version__ = "0.1.0"
