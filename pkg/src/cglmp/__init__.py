"""Maximal quantum violations of the CGLMP inequality on both of its sides."""
from .bell import (BellMatrix, DenseBellMatrix, SegmentedBellMatrix, ToeplitzBellMatrix, build,
                   element_general, element_rule, matvec, quadratic_form)
from .classical import DeterministicStrategy, classical_extremes
from .core import (CapacityError, InvalidDimensionError, NoiseModel, PhaseSettings, SchmidtState,
                   bell_value_closed_form, bell_value_from_probabilities, classical_bounds,
                   correlation_eigenvalue, entropy_ratio, joint_probability,
                   noise_threshold_negative, noise_threshold_positive)
from .eigen import ConvergenceError, EigenResult, SolverConfig, full_spectrum_oracle, max_eigen, min_eigen
from .rules import PhaseRule, Side, negative_rule, phases_from_rule, positive_rule
from .search import SearchProblem, objective, search
from .violation import ViolationResult, solve_violation

__version__ = "0.1.0"
