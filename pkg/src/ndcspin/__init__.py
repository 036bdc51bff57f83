"""Parity-measurement tests of the no-disturbance condition on collective
spin ensembles coupled to a cavity."""

__version__ = "0.1.0"

from .errors import CheckFailure, DomainError, NumericError, ResourceError
from .spin_math import (SpinJ, coherent_state, husimi_q, parity_mask, parity_project, rotate,
                        wigner_d, wigner_d_column, wigner_d_matrix)
from .ideal import (ProbabilityTable, QuadratureSpec, ViolationResult, gaussian_averaged_violation,
                    ideal_probabilities, ideal_violation, orthogonal_error_violation,
                    small_angle_violation, two_angle_probabilities)
from .cavity import CavityAmplitude
from .decoherence import (BranchedJointState, DecoherenceRates, decohered_probabilities,
                          decohered_violation, evolve_open, optimal_alpha)
from .inhomogeneity import (averaged_violation, effective_angles, group_couplings,
                            inhomogeneous_probabilities, inhomogeneous_violation,
                             sample_couplings)
