""" Count bookkeeping plus the estimators and "good" action sets every learning policy shares """

import logging, math

import numpy as np

from adaptivemdp.config import ModelValidationError, RcFileHandler
from adaptivemdp.mdpcore import stateLabel, actionLabel

SNAPSHOT_PREFIX = "rigged_prior"


class CountTables:
    """ T_x, T_{x,a}, T_{x,a,y} and the clock t (the step about to be taken, starting at 1).
    A preloaded prior is remembered so real activations can be told apart from injected ones """
    def __init__(self, actionCounts, numStates=None):
        self.actionCounts = tuple(actionCounts)
        self.numStates = numStates or len(self.actionCounts)
        maxActions = max(self.actionCounts)
        self.stateVisits = np.zeros(self.numStates, dtype=np.int64)
        self.activations = np.zeros((self.numStates, maxActions), dtype=np.int64)
        self.transitions = np.zeros((self.numStates, maxActions, self.numStates), dtype=np.int64)
        self.clock = 1
        self.prior = None
        self.diag = logging.getLogger("Estimation")

    @classmethod
    def forModel(cls, model):
        return cls(model.actionCounts, model.numStates)

    @classmethod
    def fromPrior(cls, template):
        """ Fresh tables preloaded with the transition counts of the template, clock after its last action """
        tables = cls(template.actionCounts, template.numStates)
        tables.preload(template.transitions)
        return tables

    def preload(self, transitionCounts):
        counts = np.asarray(transitionCounts, dtype=np.int64)
        if counts.shape != self.transitions.shape:
            raise ValueError("prior has shape " + repr(counts.shape) + ", expected " + repr(self.transitions.shape))
        if np.any(counts < 0):
            raise ValueError("prior has negative counts")
        for x in range(self.numStates):
            if counts[x, self.actionCounts[x]:].any():
                raise ValueError("prior counts inadmissible actions of state " + stateLabel(x))
        self.transitions = counts.copy()
        self.activations = self.transitions.sum(axis=2)
        self.stateVisits = self.activations.sum(axis=1)
        self.clock = int(self.stateVisits.sum()) + 1
        self.prior = counts.copy()
        self.diag.debug("Preloaded " + str(self.clock - 1) + " recorded actions, clock now " + str(self.clock))

    def copy(self):
        tables = CountTables(self.actionCounts, self.numStates)
        tables.stateVisits = self.stateVisits.copy()
        tables.activations = self.activations.copy()
        tables.transitions = self.transitions.copy()
        tables.clock = self.clock
        tables.prior = None if self.prior is None else self.prior.copy()
        return tables

    def checkIndices(self, x, a, y=0):
        if not 0 <= x < self.numStates or not 0 <= y < self.numStates:
            raise IndexError("state index out of range: " + repr((x, y)))
        if not 0 <= a < self.actionCounts[x]:
            raise IndexError("action " + str(a) + " not admissible in state " + stateLabel(x))

    def priorTotal(self):
        return 0 if self.prior is None else int(self.prior.sum())

    def episodeActivations(self):
        """ Activations recorded since the tables were created, excluding any preloaded prior """
        if self.prior is None:
            return self.activations
        return self.activations - self.prior.sum(axis=2)

    def isConsistent(self):
        return bool(np.array_equal(self.transitions.sum(axis=2), self.activations) and
                    np.array_equal(self.activations.sum(axis=1), self.stateVisits) and
                    self.stateVisits.sum() == self.clock - 1 and
                    (self.transitions >= 0).all())

    def toRcSections(self, stateNames=None):
        """ Rc-file text holding the transition counts, one [rigged_prior <state>] section per state """
        stateNames = stateNames or [ stateLabel(x) for x in range(self.numStates) ]
        lines = []
        for x, name in enumerate(stateNames):
            lines.append("[" + SNAPSHOT_PREFIX + " " + name + "]")
            for a in range(self.actionCounts[x]):
                lines.append(actionLabel(a) + " = " + ", ".join(str(int(n)) for n in self.transitions[x, a]))
            lines.append("")
        return "\n".join(lines)

    @classmethod
    def fromRcSections(cls, rcHandler, actionCounts, stateNames):
        """ Transition counts read back from [rigged_prior <state>] sections, None if there are none """
        sections = rcHandler.sectionsWithPrefix(SNAPSHOT_PREFIX)
        if not sections:
            return None
        numStates = len(stateNames)
        template = cls(actionCounts, numStates)
        counts = np.zeros_like(template.transitions)
        for section in sections:
            name = section[len(SNAPSHOT_PREFIX):].strip()
            if name not in stateNames:
                raise ModelValidationError("count section [" + section + "] names unknown state " + repr(name), section)
            x = stateNames.index(name)
            for key, value in rcHandler.getSection(section).items():
                a = parseActionLabel(key, actionCounts[x], section)
                row = [ item.strip() for item in value.split(",") ]
                if len(row) != numStates or not all(item.isdigit() for item in row):
                    raise ModelValidationError("count row " + name + "/" + key + " needs " + str(numStates) +
                                               " non-negative integers, got " + repr(value), section + "/" + key)
                counts[x, a] = [ int(item) for item in row ]
        template.transitions = counts
        template.activations = counts.sum(axis=2)
        template.stateVisits = template.activations.sum(axis=1)
        template.clock = int(template.stateVisits.sum()) + 1
        return template

    def writeSnapshot(self, fileName, stateNames=None):
        with open(fileName, "w") as f:
            f.write(self.toRcSections(stateNames))

    @classmethod
    def readSnapshot(cls, fileName, actionCounts, stateNames):
        return cls.fromRcSections(RcFileHandler([ fileName ]), actionCounts, stateNames)

    def __repr__(self):
        return "CountTables(clock=" + str(self.clock) + ", visits=" + repr(self.stateVisits.tolist()) + ")"


def parseActionLabel(key, numActions, where):
    if key.startswith("a") and key[1:].isdigit() and 1 <= int(key[1:]) <= numActions:
        return int(key[1:]) - 1
    raise ModelValidationError("[" + where + "] has unknown action " + repr(key) +
                               ", expected a1..a" + str(numActions), where + "/" + key)


def record_transition(counts, x, a, y):
    counts.checkIndices(x, a, y)
    counts.stateVisits[x] += 1
    counts.activations[x, a] += 1
    counts.transitions[x, a, y] += 1
    counts.clock += 1
    return counts


def estimate_probs(counts, x, a, numStates=None):
    """ (T_{x,a,y} + 1) / (T_{x,a} + s): strictly positive, unit sum """
    counts.checkIndices(x, a)
    numStates = numStates or counts.numStates
    return (counts.transitions[x, a] + 1.0) / (counts.activations[x, a] + numStates)


def estimate_all_probs(counts):
    """ The estimator applied to every (state, action) slot at once """
    return (counts.transitions + 1.0) / (counts.activations[:, :, np.newaxis] + counts.numStates)


def good_action_set(counts, x, actions=None):
    """ Actions with T_{x,a} >= (ln T_x)^2, the whole set when none qualify; ln T_x taken as 0 when T_x = 0 """
    if actions is None:
        actions = range(counts.actionCounts[x])
    actions = list(actions)
    if not actions:
        raise ValueError("action set of state " + stateLabel(x) + " is empty")
    visits = int(counts.stateVisits[x])
    threshold = math.log(visits) ** 2 if visits > 0 else 0.0
    good = [ a for a in actions if counts.activations[x, a] >= threshold ]
    return good or actions
