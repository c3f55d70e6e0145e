""" The solve, simulate and robustness subcommands """

import logging, sys
from collections import OrderedDict

from adaptivemdp import cmdlineutils, experimentspec, plotting
from adaptivemdp.config import AdaptiveMdpError, SpecValidationError, ModelValidationError, \
    EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME
from adaptivemdp.mdpcore import solve_optimality, optimal_action_set, delta, greedy_policy, actionLabel
from adaptivemdp.resultfilehandler import ResultFileHandler
from adaptivemdp.simulator import run_experiment, inject_rigged_prior, estimated_greedy_policy

RIGGED_SUFFIX = "-rigged"


def cmd_solve(spec, out=None):
    out = out or sys.stdout
    model = spec.model
    solution = solve_optimality(model)
    optimal = optimal_action_set(model, solution)
    names = model.stateNames
    out.write("Model " + spec.name + ": " + str(model.numStates) + " states, actions per state " +
              ", ".join(map(str, model.actionCounts)) + "\n")
    out.write("Gain phi = " + repr(solution.gain) + "\n")
    out.write("Bias v = " + ", ".join(name + ": " + repr(float(value)) for name, value in zip(names, solution.bias)) + "\n")
    out.write("Optimal actions O(x,P):\n")
    for x, name in enumerate(names):
        out.write("  " + name + ": " + ", ".join(actionLabel(a) for a in sorted(optimal[x])) + "\n")
    policy = greedy_policy(model, solution.bias)
    out.write("Optimal policy: (" + ", ".join(policy.labels()) + ")\n")
    out.write("Delta(x,a):\n")
    for x, a in model.pairs():
        out.write("  " + names[x] + "/" + actionLabel(a) + " " + repr(delta(model, x, a, solution)) + "\n")
    if spec.hasRiggedPrior():
        rigged = estimated_greedy_policy(model, inject_rigged_prior(spec.riggedPrior))
        out.write("Greedy policy under the rigged counts: (" + ", ".join(rigged.labels()) + ")\n")
    return policy


def runPolicies(spec, rigged, labelSuffix=""):
    curvesByLabel = OrderedDict()
    for kind in spec.policies:
        curvesByLabel[kind.value + labelSuffix] = run_experiment(spec.simConfig(kind, rigged))
    return curvesByLabel


def writeOutputs(spec, command, curvesByLabel, title):
    csvFile = spec.outputPath(command, "csv")
    svgFile = spec.outputPath(command, "svg")
    handler = ResultFileHandler(csvFile)
    for label, curves in curvesByLabel.items():
        handler.record(label, curves)
    plotting.writeRegretSvg(svgFile, curvesByLabel, title, spec.logX)
    return csvFile, svgFile


def cmd_simulate(spec):
    curvesByLabel = runPolicies(spec, rigged=False)
    return writeOutputs(spec, "simulate", curvesByLabel, "Average cumulative regret, " + spec.name)


def cmd_robustness(spec, paired=False):
    if not spec.hasRiggedPrior():
        sys.stderr.write("WARNING: spec " + spec.name + " has no rigged counts, running from empty tables.\n")
    curvesByLabel = OrderedDict()
    if paired:
        curvesByLabel.update(runPolicies(spec, rigged=False))
        curvesByLabel.update(runPolicies(spec, rigged=True, labelSuffix=RIGGED_SUFFIX))
    else:
        curvesByLabel.update(runPolicies(spec, rigged=True))
    return writeOutputs(spec, "robustness", curvesByLabel, "Regret from rigged counts, " + spec.name)


commands = OrderedDict([ ("solve", lambda spec, options: cmd_solve(spec)),
                         ("simulate", lambda spec, options: cmd_simulate(spec)),
                         ("robustness", lambda spec, options: cmd_robustness(spec, options.paired)) ])


def main(argv=None):
    parser = cmdlineutils.create_option_parser()
    options, args = parser.parse_args(argv)
    if len(args) == 0 or args[0] not in commands:
        parser.print_help()
        return EXIT_VALIDATION
    command = args[0]
    specArg = args[1] if len(args) > 1 else "paper_example"
    rcFiles = options.rcfiles.split(",") if options.rcfiles else []
    try:
        rcHandler = experimentspec.makeRcHandler(specArg, rcFiles)
        diag = rcHandler.setUpLogging("Commandline")
        spec = experimentspec.SpecReader(rcHandler, specArg).readSpec(options)
    except (SpecValidationError, ModelValidationError, ValueError) as e:
        sys.stderr.write("ERROR: " + str(e) + "\n")
        return EXIT_VALIDATION

    try:
        if options.dump_spec:
            spec.writeRcFile(options.dump_spec)
            diag.info("Wrote resolved spec to " + options.dump_spec)
        result = commands[command](spec, options)
        if command != "solve":
            sys.stdout.write("Wrote " + " and ".join(result) + "\n")
    except (SpecValidationError, ModelValidationError, ValueError) as e:
        sys.stderr.write("ERROR: " + str(e) + "\n")
        return EXIT_VALIDATION
    except (AdaptiveMdpError, OSError) as e:
        sys.stderr.write("ERROR: " + str(e) + "\n")
        logging.getLogger("Commandline").debug("Failure in " + command, exc_info=True)
        return EXIT_RUNTIME
    return EXIT_OK
