"""Gromov width bounds for Grassmannians and toric manifolds.

Exact quantum Schubert calculus and lattice-polytope arithmetic give the
certificates; a numerical Moser construction builds the ball embeddings.
"""
__version__ = "0.1.0"

from .schubert import BoxContext, Partition, QuantumProduct, gw_invariant_3pt, quantum_product
from .certificates import WidthCertificate, grassmannian_width_certificate
from .toric import DelzantPolytope, toric_lower_bound, validate_delzant, vertex_capacity
from .chart_forms import ChartForm, builtin_form
from .moser import FlowMap, MoserError, construct_embedding, verify_pullback

__all__ = [
    "BoxContext", "Partition", "QuantumProduct", "gw_invariant_3pt", "quantum_product",
    "WidthCertificate", "grassmannian_width_certificate",
    "DelzantPolytope", "toric_lower_bound", "validate_delzant", "vertex_capacity",
    "ChartForm", "builtin_form",
    "FlowMap", "MoserError", "construct_embedding", "verify_pullback",
    "__version__",
]
