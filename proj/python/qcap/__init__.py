"""Quantum capacities of cloning machines and the Unruh channel.

Channels are lists of Kraus operators, each a ``dout x din`` complex array.
"""

from ._core import (
    DimensionError,
    ParseError,
    ResourceError,
    SingularConstructionError,
    ValidationError,
    alpha_coefficients,
    beta_coefficients,
    candidate_map_eigenvalues,
    channel_from_json,
    channel_to_json,
    choi,
    classify,
    clone_marginal,
    cloner_capacity,
    cloner_kraus,
    coherent_information,
    complementary_kraus,
    conjugate_antidegrading_spectrum,
    conjugate_degrading_spectrum,
    degrading_map_1to2,
    is_entanglement_breaking,
    maximize_coherent_information,
    rank2_kraus,
    unruh_capacity,
    unruh_capacity_entropy_route,
    unruh_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
