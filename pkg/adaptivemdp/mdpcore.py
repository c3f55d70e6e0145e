""" The MDP model, the complete-information average-reward solver and the value/loss functions the policies share """

import itertools, logging
from collections import namedtuple

import numpy as np

from adaptivemdp.config import ModelValidationError, SolverFailure, EnumerationCapExceeded

ROW_SUM_TOLERANCE = 1e-12
TIE_TOLERANCE = 1e-9
SPAN_TOLERANCE = 1e-10
MAX_ITERATIONS = 10 ** 6
ENUMERATION_CAP = 10 ** 6

# Gain phi and bias v of the average-reward optimality equations, v[0] == 0
GainBias = namedtuple("GainBias", "gain bias iterations")


def stateLabel(x):
    return "x" + str(x + 1)

def actionLabel(a):
    return "a" + str(a + 1)


class MdpModel:
    """ Finite MDP with known rewards r_x(a) and transition rows p^x(a), actions numbered per state from 0 """
    def __init__(self, rewards, transitions, stateNames=None, validate=True):
        self.numStates = len(rewards)
        if self.numStates == 0:
            raise ModelValidationError("model has no states")
        self.actionCounts = tuple(len(stateRewards) for stateRewards in rewards)
        maxActions = max(self.actionCounts)
        self.admissible = np.zeros((self.numStates, maxActions), dtype=bool)
        self.rewards = np.zeros((self.numStates, maxActions))
        self.transitions = np.zeros((self.numStates, maxActions, self.numStates))
        if len(transitions) != self.numStates:
            raise ModelValidationError("transition table has " + str(len(transitions)) +
                                       " states, rewards have " + str(self.numStates))
        for x, stateRewards in enumerate(rewards):
            if len(transitions[x]) != len(stateRewards):
                raise ModelValidationError("state " + stateLabel(x) + " has " + str(len(stateRewards)) +
                                           " rewards but " + str(len(transitions[x])) + " transition rows",
                                           stateLabel(x))
            for a, reward in enumerate(stateRewards):
                self.admissible[x, a] = True
                self.rewards[x, a] = reward
                row = np.asarray(transitions[x][a], dtype=float)
                if row.shape != (self.numStates,):
                    raise ModelValidationError("row " + self.rowLabel(x, a) + " has " + str(row.size) +
                                               " entries, expected " + str(self.numStates), self.rowLabel(x, a))
                self.transitions[x, a] = row
        self.stateNames = tuple(stateNames) if stateNames else tuple(map(stateLabel, range(self.numStates)))
        self._penalty = np.where(self.admissible, 0.0, -np.inf)
        if validate:
            self.validate()

    def rowLabel(self, x, a):
        return stateLabel(x) + "/" + actionLabel(a)

    def validate(self):
        for x in range(self.numStates):
            if self.actionCounts[x] == 0:
                raise ModelValidationError("state " + stateLabel(x) + " has no admissible actions", stateLabel(x))
            for a in self.actions(x):
                label = self.rowLabel(x, a)
                if not np.isfinite(self.rewards[x, a]):
                    raise ModelValidationError("reward of " + label + " is not finite", label)
                row = self.transitions[x, a]
                if not np.all(row > 0):
                    raise ModelValidationError("row " + label + " has a non-positive probability", label)
                if abs(row.sum() - 1.0) > ROW_SUM_TOLERANCE:
                    raise ModelValidationError("row " + label + " sums to " + repr(float(row.sum())) +
                                               ", not 1", label)

    def actions(self, x):
        return range(self.actionCounts[x])

    def pairs(self):
        for x in range(self.numStates):
            for a in self.actions(x):
                yield x, a

    def reward(self, x, a):
        return float(self.rewards[x, a])

    def row(self, x, a):
        return self.transitions[x, a]

    def checkAction(self, x, a):
        if not 0 <= x < self.numStates:
            raise IndexError("state index " + str(x) + " out of range")
        if not 0 <= a < self.actionCounts[x]:
            raise IndexError("action " + str(a) + " not admissible in state " + stateLabel(x))

    def withTransitions(self, transitions):
        """ Same shape and rewards, different transition law (the estimated model of the learning policies) """
        model = MdpModel.__new__(MdpModel)
        model.__dict__.update(self.__dict__)
        model.transitions = np.asarray(transitions, dtype=float)
        return model

    def withRewardShift(self, shift):
        model = self.withTransitions(self.transitions)
        model.rewards = np.where(self.admissible, self.rewards + shift, 0.0)
        return model

    def makeMask(self, allowed):
        if allowed is None:
            return self.admissible
        mask = np.zeros_like(self.admissible)
        for x, actions in enumerate(allowed):
            for a in actions:
                self.checkAction(x, a)
                mask[x, a] = True
            if not mask[x].any():
                raise ValueError("allowed action set of state " + stateLabel(x) + " is empty")
        return mask

    def lValues(self, bias, mask=None):
        """ Table of L(x, a, p^x(a), v) with -inf at actions outside the mask """
        penalty = self._penalty if mask is None else np.where(mask, 0.0, -np.inf)
        return self.rewards + self.transitions @ bias + penalty

    def __repr__(self):
        return "MdpModel(states=" + repr(self.stateNames) + ", actions=" + repr(self.actionCounts) + ")"


class DeterministicPolicy:
    def __init__(self, actionByState):
        self.actionByState = tuple(int(a) for a in actionByState)

    def __getitem__(self, x):
        return self.actionByState[x]

    def __len__(self):
        return len(self.actionByState)

    def __eq__(self, other):
        return isinstance(other, DeterministicPolicy) and self.actionByState == other.actionByState

    def __hash__(self):
        return hash(self.actionByState)

    def labels(self):
        return tuple(map(actionLabel, self.actionByState))

    def __repr__(self):
        return "DeterministicPolicy(" + ", ".join(self.labels()) + ")"


def solve_optimality(model, allowed=None, initialBias=None, tolerance=SPAN_TOLERANCE, maxIterations=MAX_ITERATIONS):
    """ Relative value iteration on the allowed actions, stopping on the span of successive differences.
    Returns the gain (midpoint of the final difference range) and the bias normalised to v[0] = 0 """
    diag = logging.getLogger("Solver")
    mask = model.makeMask(allowed)
    if initialBias is None:
        bias = np.zeros(model.numStates)
    else:
        bias = np.asarray(initialBias, dtype=float)
        if bias.shape != (model.numStates,):
            raise ValueError("warm-start bias has shape " + repr(bias.shape) + ", expected " + repr((model.numStates,)))
        bias = bias - bias[0]
    span = np.inf
    for iteration in range(1, maxIterations + 1):
        updated = model.lValues(bias, mask).max(axis=1)
        difference = updated - bias
        low, high = difference.min(), difference.max()
        span = high - low
        bias = updated - updated[0]
        if span < tolerance:
            gain = (low + high) / 2
            diag.debug("RVI converged after " + str(iteration) + " iterations, gain " + repr(gain))
            return GainBias(float(gain), bias, iteration)
    raise SolverFailure("relative value iteration did not converge in " + str(maxIterations) + " iterations",
                        residual=float(span), diagnostics={ "bias" : bias })


def l_value(model, x, a, q, v):
    model.checkAction(x, a)
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    if q.shape != (model.numStates,) or v.shape != (model.numStates,):
        raise ValueError("q and v must both have " + str(model.numStates) + " entries, got " +
                         repr(q.shape) + " and " + repr(v.shape))
    return model.reward(x, a) + float(q @ v)


def bellman_residual(model, gainBias, allowed=None):
    best = model.lValues(gainBias.bias, model.makeMask(allowed)).max(axis=1)
    return float(np.abs(gainBias.gain + gainBias.bias - best).max())


def optimal_action_set(model, gainBias=None, tolerance=TIE_TOLERANCE):
    """ O(x,P) per state: the actions whose L value is within the tie tolerance of the best """
    if gainBias is None:
        gainBias = solve_optimality(model)
    values = model.lValues(gainBias.bias)
    best = values.max(axis=1)
    return [ frozenset(a for a in model.actions(x) if values[x, a] >= best[x] - tolerance)
             for x in range(model.numStates) ]


def delta(model, x, a, gainBias=None):
    model.checkAction(x, a)
    if gainBias is None:
        gainBias = solve_optimality(model)
    values = model.lValues(gainBias.bias)[x]
    return float(values.max() - values[a])


def delta_table(model, gainBias=None, tolerance=TIE_TOLERANCE):
    """ Regret weights: Delta(x,a) for sub-optimal pairs, exactly 0 on O(x,P) and on inadmissible slots """
    if gainBias is None:
        gainBias = solve_optimality(model)
    values = model.lValues(gainBias.bias)
    best = values.max(axis=1, keepdims=True)
    weights = np.where(model.admissible, best - values, 0.0)
    return np.where(weights <= tolerance, 0.0, weights)


def greedy_policy(model, bias, allowed=None, tolerance=TIE_TOLERANCE):
    """ Lowest-id action attaining the per-state maximum of L within the tie tolerance """
    values = model.lValues(np.asarray(bias, dtype=float), model.makeMask(allowed))
    best = values.max(axis=1, keepdims=True)
    return DeterministicPolicy(np.argmax(values >= best - tolerance, axis=1))


def policy_gain(model, policy):
    """ Average reward of a deterministic policy from the stationary law of its chain """
    if len(policy) != model.numStates:
        raise ValueError("policy covers " + str(len(policy)) + " states, model has " + str(model.numStates))
    for x, a in enumerate(policy.actionByState):
        model.checkAction(x, a)
    states = np.arange(model.numStates)
    actions = np.asarray(policy.actionByState)
    chain = model.transitions[states, actions]
    system = chain.T - np.eye(model.numStates)
    system[-1] = 1.0
    rhs = np.zeros(model.numStates)
    rhs[-1] = 1.0
    stationary = np.linalg.solve(system, rhs)
    return float(stationary @ model.rewards[states, actions]), stationary


def brute_force_gain(model, cap=ENUMERATION_CAP):
    total = int(np.prod(model.actionCounts, dtype=object))
    if total > cap:
        raise EnumerationCapExceeded("model has " + str(total) + " deterministic policies, cap is " + str(cap))
    bestGain, bestPolicy = -np.inf, None
    for actions in itertools.product(*(model.actions(x) for x in range(model.numStates))):
        policy = DeterministicPolicy(actions)
        gain, _ = policy_gain(model, policy)
        if gain > bestGain:
            bestGain, bestPolicy = gain, policy
    return bestGain, bestPolicy
