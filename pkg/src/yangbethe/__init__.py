"""Exact and numerical tools for Yangian spin chains, Bethe vectors and Gaudin models."""

from .reps import vector_rep, wedge_rep, irrep_from_partition, module_from_descriptor
from .yangian import TensorChain, transfer_matrix, qdet, difference_operator
from .bethe_xxx import BetheProblem, bethe_vector_trace, bae_residual, verify_eigenpair
from .gaudin import GaudinProblem, gaudin_transfers, gaudin_weight_F, gaudin_bae_residual, verify_gaudin_eigenpair
from .solver import solve_bae

__all__ = [
    "vector_rep", "wedge_rep", "irrep_from_partition", "module_from_descriptor",
    "TensorChain", "transfer_matrix", "qdet", "difference_operator",
    "BetheProblem", "bethe_vector_trace", "bae_residual", "verify_eigenpair",
    "GaudinProblem", "gaudin_transfers", "gaudin_weight_F", "gaudin_bae_residual", "verify_gaudin_eigenpair",
    "solve_bae",
]
