"""Symbol-level simulator and analytic toolkit for double-threshold AF device selection."""

__version__ = "0.1.0"

from .channel import (LinkGain, NoiseParams, awgn_samples, db_to_linear, draw_awgn,
                      draw_rayleigh, linear_to_db, rayleigh_coefficients, stream)
from .engine import BerEstimate, ExperimentConfig, run_ber_point, run_intercept_sweep, run_sweep
from .errors import ConfigurationError, FramingError, ParameterError
from .modem import count_bit_errors, demodulate, modulate
from .relaying import af_branch_snr, amplification_factor, phase_one, phase_two
from .security import (InterceptEstimate, SecurityScenario, WiretapStats,
                       estimate_intercept_mc, intercept_probability_direct,
                       intercept_probability_ods, secrecy_capacity_direct)
from .selection import (CombinerReport, DeviceLinkState, Scheme, Thresholds,
                        apply_input_threshold, combine_output, instantaneous_snr_sd,
                        ods_a_metric, ods_p_metric, select_best)
from .topology import (CaseId, DistanceCase, PowerAllocation, allocate_power,
                       case_variances)
