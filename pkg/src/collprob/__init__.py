"""Collision-probability toolkit for random quantum circuit architectures.

Computes the expected collision probability Z of a circuit architecture
exactly (transfer matrix, domain-wall enumeration, Hamming-weight DP),
estimates it by Monte Carlo (trajectory walks, direct Haar simulation),
and evaluates closed-form upper/lower bounds on the anticoncentration
depth.
"""

__version__ = "0.1.0"

from .arch import (CircuitDiagram, QuditParams, depth, generate_1d,
                   generate_complete_graph, load_diagram, normalize_gate,
                   save_diagram)
from .errors import GuardError, NotReachedError
from .exact import (find_s_ac, z_complete_graph_exact, z_domain_wall_enum,
                    z_transfer_matrix)
from .oracle import apply_gate, estimate_z_haar_mc, sample_haar_gate
from .records import BoundReport, CollisionEstimate, RunRecord
from .theory import (absorption_probabilities, bound, coefficient_table,
                     fixed_point_weight_Q, lemma_sums, log_z_haar,
                     paley_zygmund_fraction, qbar, reach_probability,
                     trajectory_sum, z_haar)
from .walk import (Trajectory, WalkSpec, estimate_z_biased,
                   estimate_z_unbiased, sample_absorption_trajectories,
                   sample_initial, step_biased, step_unbiased)

__all__ = [
    "BoundReport", "CircuitDiagram", "CollisionEstimate", "GuardError",
    "NotReachedError", "QuditParams", "RunRecord", "Trajectory", "WalkSpec",
    "absorption_probabilities", "apply_gate", "bound", "coefficient_table",
    "depth", "estimate_z_biased", "estimate_z_haar_mc", "estimate_z_unbiased",
    "find_s_ac", "fixed_point_weight_Q", "generate_1d",
    "generate_complete_graph", "lemma_sums", "load_diagram", "log_z_haar",
    "normalize_gate", "paley_zygmund_fraction", "qbar", "reach_probability",
    "sample_absorption_trajectories", "sample_haar_gate", "sample_initial",
    "save_diagram", "step_biased", "step_unbiased", "trajectory_sum",
    "z_complete_graph_exact", "z_domain_wall_enum", "z_haar",
    "z_transfer_matrix",
]
