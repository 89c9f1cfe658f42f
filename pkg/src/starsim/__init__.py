"""Sparse Hamiltonian simulation through star (galaxy) decompositions.

Typical use::

    from starsim import BlackBox, basis_state, random_sparse_hermitian, simulate

    h = random_sparse_hermitian(64, 4, seed=1)
    result = simulate(BlackBox(h), basis_state(64), t=1.0, epsilon=1e-6, k=1)
"""
from .core_model import (
    NormReport,
    SparseHermitian,
    basis_state,
    load_json,
    max_column_norm,
    max_entry_norm,
    norms,
    random_state,
    save_json,
    spectral_norm,
    validate,
)
from .galaxy import DIAGONAL, GalaxyDecomposition, GalaxyIndex, StarInfo, star_expm_apply, star_info
from .instances import random_sparse_hermitian, star_hamiltonian
from .oracle import BlackBox, OracleEntry, QueryCounter, charge_template
from .recombination import (
    SuzukiSchedule,
    predicted_query_bounds,
    segment_count,
    simulate,
    suzuki_sequence,
)
from .reference import compare_operators, compare_states, dense_expm

__version__ = "0.1.0"

__all__ = [
    "BlackBox",
    "DIAGONAL",
    "GalaxyDecomposition",
    "GalaxyIndex",
    "NormReport",
    "OracleEntry",
    "QueryCounter",
    "SparseHermitian",
    "StarInfo",
    "SuzukiSchedule",
    "basis_state",
    "charge_template",
    "compare_operators",
    "compare_states",
    "dense_expm",
    "load_json",
    "max_column_norm",
    "max_entry_norm",
    "norms",
    "predicted_query_bounds",
    "random_sparse_hermitian",
    "random_state",
    "save_json",
    "segment_count",
    "simulate",
    "spectral_norm",
    "star_expm_apply",
    "star_hamiltonian",
    "star_info",
    "suzuki_sequence",
    "validate",
]
