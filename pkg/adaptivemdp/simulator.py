""" Runs episodes of an MDP under a policy, accrues regret per step and audits it against the counts, and
aggregates replications into mean/variance/confidence curves """

import logging, math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from adaptivemdp import estimation
from adaptivemdp.config import AdaptiveMdpError, EpisodeFailure, RegretAuditMismatch
from adaptivemdp.estimation import CountTables
from adaptivemdp.mdpcore import solve_optimality, delta_table, greedy_policy
from adaptivemdp.policies import PolicyKind, RngStream, makePolicy

CONFIDENCE_Z = 1.96
CHAIN_STREAM = 0
POLICY_STREAM = 1
# step-accrued series against the recount from the final tables
AUDIT_TOLERANCE = 1e-9
MAX_SEED = 2 ** 64 - 1

# per-step cumulative regret R(1..T), index t-1
RegretSeries = namedtuple("RegretSeries", "values")
AggregateCurves = namedtuple("AggregateCurves", "mean variance halfWidth replications")
EpisodeResult = namedtuple("EpisodeResult", "series counts audit")


class SimConfig:
    def __init__(self, model, policy, horizon, replications=1, baseSeed=0, initialState=0,
                 riggedPrior=None, workers=1):
        self.model = model
        self.policy = policy if isinstance(policy, PolicyKind) else PolicyKind.fromName(policy)
        self.horizon = int(horizon)
        self.replications = int(replications)
        self.baseSeed = int(baseSeed)
        self.initialState = int(initialState)
        self.riggedPrior = riggedPrior
        self.workers = int(workers)
        self.validate()

    def validate(self):
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1, got " + str(self.horizon))
        if self.replications < 1:
            raise ValueError("replications must be at least 1, got " + str(self.replications))
        if not 0 <= self.initialState < self.model.numStates:
            raise ValueError("initial state " + str(self.initialState) + " out of range")
        if self.baseSeed < 0:
            raise ValueError("seed must be non-negative, got " + str(self.baseSeed))
        if self.baseSeed + self.replications - 1 > MAX_SEED:
            raise ValueError("seed " + str(self.baseSeed) + " leaves no room for " + str(self.replications) +
                             " replications below 2**64")
        if self.riggedPrior is not None:
            if self.riggedPrior.actionCounts != self.model.actionCounts:
                raise ValueError("rigged prior does not match the model's action sets")
            if not self.riggedPrior.isConsistent():
                raise ValueError("rigged prior count tables are inconsistent")

    def withPolicy(self, policy, riggedPrior=None):
        return SimConfig(self.model, policy, self.horizon, self.replications, self.baseSeed,
                         self.initialState, riggedPrior, self.workers)


def step_chain(model, x, a, rng):
    """ Inverse-CDF draw of the successor, one uniform per step """
    model.checkAction(x, a)
    cumulative = np.cumsum(model.row(x, a))
    y = int(np.searchsorted(cumulative, rng.uniform() * cumulative[-1], side="right"))
    return min(y, model.numStates - 1)


def regret_from_counts(activations, deltas):
    """ Sum of T_{x,a} * Delta(x,a) over the pairs, in one fixed order """
    return float(np.dot(activations.ravel().astype(float), deltas.ravel()))


def inject_rigged_prior(template):
    """ Fresh count tables preloaded with the template's transition counts, clock after the last of them """
    if template.transitions.sum() == 0:
        return CountTables(template.actionCounts, template.numStates)
    if not template.isConsistent():
        raise ValueError("rigged prior template is inconsistent: row sums do not match activation counts")
    return CountTables.fromPrior(template)


def estimated_greedy_policy(model, counts):
    """ The policy the estimator alone would follow: solve on the estimated rows over every action """
    estimated = model.withTransitions(estimation.estimate_all_probs(counts))
    return greedy_policy(estimated, solve_optimality(estimated).bias)


def run_episode(config, replicate=0, deltas=None):
    diag = logging.getLogger("Simulator")
    model = config.model
    if deltas is None:
        deltas = delta_table(model)
    seed = config.baseSeed + replicate
    chainRng = RngStream(seed, CHAIN_STREAM)
    policy = makePolicy(config.policy, model, RngStream(seed, POLICY_STREAM))
    counts = inject_rigged_prior(config.riggedPrior) if config.riggedPrior is not None else CountTables.forModel(model)
    start = counts.clock
    values = np.zeros(config.horizon)
    state = config.initialState
    regret = 0.0
    for t in range(start, config.horizon + 1):
        try:
            action = policy.chooseAction(state, counts, t)
        except AdaptiveMdpError as e:
            raise EpisodeFailure(e, config.policy.value, replicate, t)
        nextState = step_chain(model, state, action, chainRng)
        estimation.record_transition(counts, state, action, nextState)
        regret += float(deltas[state, action])
        values[t - 1] = regret
        state = nextState
    audit = regret_from_counts(counts.episodeActivations(), deltas)
    if not math.isclose(regret, audit, rel_tol=AUDIT_TOLERANCE, abs_tol=AUDIT_TOLERANCE):
        raise RegretAuditMismatch(config.policy.value, replicate, regret, audit)
    diag.info(config.policy.value + " replicate " + str(replicate) + " finished, regret " + repr(audit))
    return EpisodeResult(RegretSeries(values), counts, audit)


def _runReplicate(args):
    config, replicate, deltas = args
    return run_episode(config, replicate, deltas).series.values


def aggregate(seriesList):
    stacked = np.vstack(seriesList)
    replications = stacked.shape[0]
    mean = stacked.mean(axis=0)
    if replications > 1:
        variance = stacked.var(axis=0, ddof=1)
    else:
        variance = np.zeros_like(mean)
    halfWidth = CONFIDENCE_Z * np.sqrt(variance) / np.sqrt(replications)
    return AggregateCurves(mean, variance, halfWidth, replications)


def run_experiment(config):
    diag = logging.getLogger("Simulator")
    deltas = delta_table(config.model)
    jobs = [ (config, replicate, deltas) for replicate in range(config.replications) ]
    diag.info("Running " + str(config.replications) + " replications of " + config.policy.value +
              " over horizon " + str(config.horizon) + " with " + str(config.workers) + " workers")
    if config.workers > 1 and config.replications > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            # map keeps replicate order whatever order the workers finish in
            seriesList = list(executor.map(_runReplicate, jobs))
    else:
        seriesList = [ _runReplicate(job) for job in jobs ]
    return aggregate(seriesList)


def late_slope(values, start, end):
    """ Least-squares slope of R(t) against t over start <= t <= end """
    times = np.arange(start, end + 1, dtype=float)
    slope, _ = np.polyfit(times, np.asarray(values)[start - 1:end], 1)
    return float(slope)
