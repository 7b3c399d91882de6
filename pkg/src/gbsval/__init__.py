"""Simulation and validation toolkit for threshold-detected GBS networks."""

from .config import RunConfig, load_config
from .errors import (ConfigError, DataError, DimensionError, GbsError,
                     NumericalGuardError, RepresentationError)
from .faker import (PatternSet, PatternSource, generate_classical_patterns,
                    read_patterns, write_patterns)
from .gcp import (GcpDistribution, GcpSpec, Source, bin_patterns,
                  partition_modes, permutation_count, simulate_gcp)
from .network import (TransmissionMatrix, UnitaryMatrix, generate_haar_unitary,
                      load_matrix, make_transmission, save_matrix,
                      unitarity_defect)
from .oracle import (QuadratureCovariance, exact_gcp, output_covariance,
                     pattern_probability, vacuum_probability)
from .pipeline import fake_pattern_set, run_pipeline, simulate_distribution
from .sampler import (ClickMoments, PhaseSpaceEnsemble, Representation, Stage,
                      click_moments, draw_input_ensemble, propagate)
from .states import (GaussianInputSpec, GaussianModeMoments, StateKind,
                     derive_moments, is_classical)
from .stats import TestReport, chi_square_test, compare_report, z_score

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
