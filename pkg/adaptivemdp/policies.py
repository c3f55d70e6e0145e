""" The adaptive decision rules (UCB, DMED, posterior sampling), the complete-information oracle
and a uniform-random baseline, all choosing an action from the current state and count tables """

import logging, math
from collections import namedtuple
from enum import Enum

import numpy as np

from adaptivemdp import estimation, klopt
from adaptivemdp.mdpcore import solve_optimality, optimal_action_set, stateLabel, actionLabel


class PolicyKind(Enum):
    UCB = "ucb"
    DMED = "dmed"
    PS = "ps"
    ORACLE = "oracle"
    RANDOM = "random"

    @classmethod
    def fromName(cls, name):
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError("unknown policy " + repr(name) + ", expected one of " +
                             ", ".join(kind.value for kind in cls))


class RngStream:
    """ Seeded PCG64 stream. The same (seed, streamId) gives the same draws on every platform """
    def __init__(self, seed, streamId=0):
        if seed < 0 or seed >= 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer, got " + repr(seed))
        self.seed = int(seed)
        self.streamId = streamId
        self.position = 0
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(streamId,))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def uniform(self):
        self.position += 1
        return self.generator.random()

    def standardGamma(self, shape):
        draws = self.generator.standard_gamma(shape)
        self.position += np.size(draws)
        return draws

    def choice(self, candidates):
        self.position += 1
        return candidates[int(self.generator.integers(len(candidates)))]


# probs is the estimator for every (state, action) slot, goodSets the restricted sets A-hat per state
SharedEstimates = namedtuple("SharedEstimates", "probs goodSets gain bias")


def shared_estimates(model, counts, state, initialBias=None):
    """ Estimated transition rows, good action sets and the solution of the optimality equations
    for the estimated model restricted to the good sets. Only the rewards and shape of the model are read.
    The current state only has to be valid: every index reads v-hat over all successors, so the whole
    estimated model is solved whatever the state """
    if not 0 <= state < model.numStates:
        raise IndexError("state " + str(state) + " out of range for " + str(model.numStates) + " states")
    probs = estimation.estimate_all_probs(counts)
    goodSets = [ estimation.good_action_set(counts, x) for x in range(model.numStates) ]
    solution = solve_optimality(model.withTransitions(probs), goodSets, initialBias)
    return SharedEstimates(probs, goodSets, solution.gain, solution.bias)


def dirichlet_sample(alpha, rng):
    """ Normalised independent unit-scale gamma draws """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or not np.all(alpha > 0):
        raise ValueError("Dirichlet parameters must be a vector of positive reals, got " + repr(alpha.tolist()))
    draws = np.maximum(rng.standardGamma(alpha), np.finfo(float).tiny)
    return draws / draws.sum()


class Policy(object):
    kind = None
    def __init__(self, model, rng=None):
        self.model = model
        self.rng = rng
        self.diag = logging.getLogger("Policies")

    def chooseAction(self, state, counts, t=None):
        raise NotImplementedError

    def argmaxAtRandom(self, values):
        values = np.asarray(values)
        candidates = np.flatnonzero(values == values.max())
        if len(candidates) == 1:
            return int(candidates[0])
        return int(self.rng.choice(candidates))


class AdaptivePolicy(Policy):
    """ Shared estimate construction, warm-starting each solve from the previous bias """
    def __init__(self, *args, **kw):
        super(AdaptivePolicy, self).__init__(*args, **kw)
        self.lastBias = None

    def estimates(self, state, counts):
        estimates = shared_estimates(self.model, counts, state, self.lastBias)
        self.lastBias = estimates.bias
        if self.diag.isEnabledFor(logging.DEBUG):
            self.diag.debug(self.kind.value + " at t=" + str(counts.clock) + " in " + stateLabel(state) +
                            ": estimated gain " + repr(estimates.gain))
        return estimates

    def lValues(self, state, estimates):
        actions = self.model.actions(state)
        return np.array([ self.model.reward(state, a) + float(estimates.probs[state, a] @ estimates.bias)
                          for a in actions ])


class UcbPolicy(AdaptivePolicy):
    kind = PolicyKind.UCB
    def indices(self, state, counts, t):
        estimates = self.estimates(state, counts)
        logTime = math.log(t)
        indices = []
        for a in self.model.actions(state):
            tries = counts.activations[state, a]
            radius = logTime / tries if tries > 0 else np.inf
            index, _ = klopt.ucb_index(estimates.probs[state, a], estimates.bias, self.model.reward(state, a), radius)
            indices.append(index)
        return indices

    def chooseAction(self, state, counts, t=None):
        return self.argmaxAtRandom(self.indices(state, counts, t or counts.clock))


class DmedPolicy(AdaptivePolicy):
    kind = PolicyKind.DMED
    def discrepancies(self, state, counts, t, estimates):
        values = self.lValues(state, estimates)
        best = int(np.argmax(values))
        logTime = math.log(t)
        discrepancies = {}
        for a in self.model.actions(state):
            if a == best:
                continue
            tries = int(counts.activations[state, a])
            threshold = values[best] - self.model.reward(state, a)
            divergence = klopt.min_kl_above_threshold(estimates.probs[state, a], estimates.bias, threshold)
            if np.isinf(divergence):
                discrepancies[a] = -tries
            elif divergence == 0:
                discrepancies[a] = np.inf if logTime > 0 else -tries
            else:
                discrepancies[a] = logTime / divergence - tries
        return best, discrepancies

    def chooseAction(self, state, counts, t=None):
        estimates = self.estimates(state, counts)
        best, discrepancies = self.discrepancies(state, counts, t or counts.clock, estimates)
        forced, largest = best, 0
        for a, discrepancy in discrepancies.items():
            if discrepancy > largest:
                forced, largest = a, discrepancy
        if forced != best:
            self.diag.debug("DMED forcing " + actionLabel(forced) + " in " + stateLabel(state) +
                            ", discrepancy " + repr(largest))
        return forced


class PosteriorSamplingPolicy(AdaptivePolicy):
    kind = PolicyKind.PS
    def posteriorValues(self, state, counts):
        estimates = self.estimates(state, counts)
        values = []
        for a in self.model.actions(state):
            sample = dirichlet_sample(counts.transitions[state, a] + 1.0, self.rng)
            values.append(self.model.reward(state, a) + float(sample @ estimates.bias))
        return values

    def chooseAction(self, state, counts, t=None):
        return self.argmaxAtRandom(self.posteriorValues(state, counts))


class OraclePolicy(Policy):
    """ Knows the true transitions: lowest-id member of O(x,P) """
    kind = PolicyKind.ORACLE
    def __init__(self, *args, **kw):
        super(OraclePolicy, self).__init__(*args, **kw)
        self.actionByState = [ min(actions) for actions in optimal_action_set(self.model) ]

    def chooseAction(self, state, counts=None, t=None):
        return self.actionByState[state]


class RandomPolicy(Policy):
    kind = PolicyKind.RANDOM
    def chooseAction(self, state, counts=None, t=None):
        return int(self.rng.choice(range(self.model.actionCounts[state])))


policyClasses = { cls.kind : cls for cls in [ UcbPolicy, DmedPolicy, PosteriorSamplingPolicy, OraclePolicy, RandomPolicy ] }

def makePolicy(kind, model, rng=None):
    if not isinstance(kind, PolicyKind):
        kind = PolicyKind.fromName(kind)
    return policyClasses[kind](model, rng)


def ucb_choose(model, state, counts, rng, t=None):
    return UcbPolicy(model, rng).chooseAction(state, counts, t)

def dmed_choose(model, state, counts, rng=None, t=None):
    return DmedPolicy(model, rng).chooseAction(state, counts, t)

def ps_choose(model, state, counts, rng, t=None):
    return PosteriorSamplingPolicy(model, rng).chooseAction(state, counts, t)

def oracle_choose(model, state):
    return OraclePolicy(model).chooseAction(state)
