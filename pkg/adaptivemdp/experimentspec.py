""" Reading experiment specs from rc files (or named presets) and writing them back out """

import logging, os

import numpy as np

from adaptivemdp import presets
from adaptivemdp.config import RcFileHandler, SpecValidationError, ModelValidationError
from adaptivemdp.estimation import CountTables, parseActionLabel, SNAPSHOT_PREFIX
from adaptivemdp.mdpcore import MdpModel, ROW_SUM_TOLERANCE, actionLabel
from adaptivemdp.policies import PolicyKind
from adaptivemdp.simulator import SimConfig

TRANSITIONS_PREFIX = "transitions"
DEFAULT_POLICIES = "ps, ucb, dmed"


class ExperimentSpec:
    def __init__(self, name, model, policies, horizon, replications, seed,
                 initialState=0, riggedPrior=None, outDir=".", workers=1, logX=False):
        self.name = name
        self.model = model
        self.policies = list(policies)
        self.horizon = horizon
        self.replications = replications
        self.seed = seed
        self.initialState = initialState
        self.riggedPrior = riggedPrior
        self.outDir = outDir
        self.workers = workers
        self.logX = logX

    def simConfig(self, policy, rigged=False):
        return SimConfig(self.model, policy, self.horizon, self.replications, self.seed,
                         self.initialState, self.riggedPrior if rigged else None, self.workers)

    def hasRiggedPrior(self):
        return self.riggedPrior is not None and self.riggedPrior.transitions.sum() > 0

    def outputPath(self, command, extension):
        return os.path.join(self.outDir, self.name + "_" + command + "." + extension)

    def key(self):
        model = self.model
        prior = None if self.riggedPrior is None else self.riggedPrior.transitions.tolist()
        return (self.name, model.stateNames, model.actionCounts, model.rewards.tolist(), model.transitions.tolist(),
                tuple(self.policies), self.horizon, self.replications, self.seed, self.initialState, prior,
                self.outDir, self.workers, self.logX)

    def __eq__(self, other):
        return isinstance(other, ExperimentSpec) and self.key() == other.key()

    def toRcText(self):
        model = self.model
        lines = [ "[general]",
                  "name = " + self.name,
                  "policies = " + ", ".join(kind.value for kind in self.policies),
                  "horizon = " + str(self.horizon),
                  "replications = " + str(self.replications),
                  "seed = " + str(self.seed),
                  "initial_state = " + model.stateNames[self.initialState],
                  "out_dir = " + self.outDir,
                  "workers = " + str(self.workers),
                  "log_x = " + str(self.logX).lower(),
                  "",
                  "[rewards]" ]
        for x, name in enumerate(model.stateNames):
            lines.append(name + " = " + ", ".join(repr(model.reward(x, a)) for a in model.actions(x)))
        lines.append("")
        for x, name in enumerate(model.stateNames):
            lines.append("[" + TRANSITIONS_PREFIX + " " + name + "]")
            for a in model.actions(x):
                lines.append(actionLabel(a) + " = " + ", ".join(repr(float(p)) for p in model.row(x, a)))
            lines.append("")
        text = "\n".join(lines) + "\n"
        if self.riggedPrior is not None:
            text += self.riggedPrior.toRcSections(model.stateNames)
        return text

    def writeRcFile(self, fileName):
        with open(fileName, "w") as f:
            f.write(self.toRcText())


class SpecReader:
    def __init__(self, rcHandler, specName):
        self.rcHandler = rcHandler
        self.specName = specName
        self.diag = logging.getLogger("Experiment")

    def fail(self, message, section, setting=None):
        fileName, lineNumber = self.rcHandler.findLocation(section, setting)
        raise SpecValidationError(message, fileName or self.specName, lineNumber)

    def parseNumbers(self, text, section, setting, converter=float):
        try:
            return [ converter(item.strip()) for item in text.split(",") ]
        except ValueError:
            self.fail("[" + section + "] " + setting + ": cannot read numbers from " + repr(text), section, setting)

    def readModel(self):
        rewardTable = self.rcHandler.getSection("rewards")
        if not rewardTable:
            self.fail("spec has no [rewards] section", "rewards")
        stateNames = list(rewardTable.keys())
        numStates = len(stateNames)
        rewards, transitions = [], []
        for name in stateNames:
            stateRewards = self.parseNumbers(rewardTable[name], "rewards", name)
            if not all(np.isfinite(stateRewards)):
                self.fail("rewards of state " + name + " must be finite", "rewards", name)
            rewards.append(stateRewards)
            section = TRANSITIONS_PREFIX + " " + name
            rowTexts = self.rcHandler.getSection(section)
            if len(rowTexts) != len(stateRewards):
                self.fail("state " + name + " has " + str(len(stateRewards)) + " rewards but [" + section + "] has " +
                          str(len(rowTexts)) + " rows", section)
            rows = [ None ] * len(stateRewards)
            for key, text in rowTexts.items():
                try:
                    a = parseActionLabel(key, len(stateRewards), section)
                except ModelValidationError as e:
                    self.fail(str(e), section, key)
                rows[a] = self.checkRow(self.parseNumbers(text, section, key), numStates, section, key)
            transitions.append(rows)
        for section in self.rcHandler.sectionsWithPrefix(TRANSITIONS_PREFIX):
            if section[len(TRANSITIONS_PREFIX):].strip() not in stateNames:
                self.fail("[" + section + "] names a state missing from [rewards]", section)
        return MdpModel(rewards, transitions, stateNames)

    def checkRow(self, row, numStates, section, key):
        label = section[len(TRANSITIONS_PREFIX):].strip() + "/" + key
        if len(row) != numStates:
            self.fail("row " + label + " has " + str(len(row)) + " entries, expected " + str(numStates), section, key)
        if not all(p > 0 for p in row):
            self.fail("row " + label + " must be strictly positive", section, key)
        total = sum(row)
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            self.fail("row " + label + " sums to " + repr(total) + ", not 1", section, key)
        return row

    def readPolicies(self, override):
        names = override.split(",") if override else self.rcHandler.getList("policies", [ "general" ]) or DEFAULT_POLICIES.split(",")
        try:
            return [ PolicyKind.fromName(name) for name in names ]
        except ValueError as e:
            self.fail(str(e), "general", "policies")

    def readPositive(self, setting, override, default):
        value = override if override is not None else self.rcHandler.getint(setting, [ "general" ], default)
        if value < 1:
            self.fail(setting + " must be at least 1, got " + str(value), "general", setting)
        return value

    def readSpec(self, options=None):
        get = lambda attr: getattr(options, attr, None) if options is not None else None
        model = self.readModel()
        stateName = get("initial_state") or self.rcHandler.get("initial_state", [ "general" ], model.stateNames[0])
        if stateName not in model.stateNames:
            self.fail("initial state " + repr(stateName) + " is not a state of the model", "general", "initial_state")
        seed = get("seed")
        if seed is None:
            seed = self.rcHandler.getint("seed", [ "general" ], 0)
        if seed < 0:
            self.fail("seed must be non-negative", "general", "seed")
        try:
            riggedPrior = CountTables.fromRcSections(self.rcHandler, model.actionCounts, list(model.stateNames))
        except ModelValidationError as e:
            self.fail(str(e), e.rowLabel.split("/")[0] if e.rowLabel else SNAPSHOT_PREFIX)
        spec = ExperimentSpec(name=self.rcHandler.get("name", [ "general" ], self.specName),
                              model=model,
                              policies=self.readPolicies(get("policy")),
                              horizon=self.readPositive("horizon", get("horizon"), 10000),
                              replications=self.readPositive("replications", get("reps"), 1),
                              seed=seed,
                              initialState=model.stateNames.index(stateName),
                              riggedPrior=riggedPrior,
                              outDir=get("out_dir") or self.rcHandler.get("out_dir", [ "general" ], "."),
                              workers=self.readPositive("workers", get("workers"), 1),
                              logX=bool(get("log_x")) or self.rcHandler.getboolean("log_x", [ "general" ], False))
        self.diag.info("Read spec " + spec.name + ": " + repr(model) + ", policies " +
                       ", ".join(kind.value for kind in spec.policies))
        return spec


def makeRcHandler(specArg, rcFiles=None):
    """ Preset names resolve to the embedded text; anything else is an rc file. Extra rc files override """
    presetText = presets.getPreset(specArg)
    if presetText is not None:
        return RcFileHandler(rcFiles, presetText)
    if not os.path.isfile(specArg):
        raise SpecValidationError("no spec file or preset called " + repr(specArg))
    return RcFileHandler([ specArg ] + list(rcFiles or []))


def readSpec(specArg, rcFiles=None, options=None):
    return SpecReader(makeRcHandler(specArg, rcFiles), specArg).readSpec(options)
