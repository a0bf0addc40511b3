"""Gossip-based sequential and parallel distributed power EVD/SVD."""
from .centralized import PowerConfig, centralized_power_evd, centralized_power_svd
from .consensus import (CommLedger, GossipSession, ac_estimate, exact_average, init_session,
                        run_consensus, step_round)
from .distributed import (BridgeMap, Exact, Gossip, cross_set_relay, parallel_power_evd,
                          parallel_power_svd, sequential_power_evd, sequential_power_svd)
from .errors import GenerationError, GossipPowerError, NumericError, ParameterError
from .graph import (ConsensusWeights, Topology, best_constant_weights, generate_small_world,
                    laplacian, spectral_gap)
from .harness import ExperimentConfig, run_sweep, run_trial
from .kernels import BACKEND
from .linalg import hermitian_evd_oracle, inner, svd_oracle
from .metrics import nmse_evd, nmse_svd, predicted_handshakes
from .signal import (SampleSet, SignalModelConfig, generate_passive_radar, sample_covariance,
                     sample_cross_correlation)

__version__ = "0.1.0"
