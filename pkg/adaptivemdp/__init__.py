from .config import AdaptiveMdpError, ModelValidationError, SpecValidationError, SolverFailure, \
    EnumerationCapExceeded, EpisodeFailure, RegretAuditMismatch
from .mdpcore import MdpModel, GainBias, DeterministicPolicy, solve_optimality, l_value, optimal_action_set, \
    delta, delta_table, brute_force_gain, policy_gain, greedy_policy, bellman_residual
from .klopt import kl_divergence, ucb_index, min_kl_above_threshold, kl_grid_oracle
from .estimation import CountTables, record_transition, estimate_probs, good_action_set
from .policies import PolicyKind, RngStream, shared_estimates, dirichlet_sample, makePolicy, \
    ucb_choose, dmed_choose, ps_choose, oracle_choose
from .simulator import SimConfig, RegretSeries, AggregateCurves, step_chain, run_episode, run_experiment, \
    inject_rigged_prior
from .experimentspec import ExperimentSpec, readSpec
import sys


def commandline():
    from .commandline import main
    sys.exit(main())
