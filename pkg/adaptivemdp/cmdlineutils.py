""" Utility functions for command line interfaces """
import optparse

def create_option_parser():
    usage = """usage: %prog [options] solve|simulate|robustness [<spec file or preset>]

Adaptive control of average-reward MDPs with unknown transitions. Solves the model of the experiment spec,
simulates the learning policies on it, or reruns them from rigged count tables.
The experiment spec defaults to the embedded preset 'paper_example'."""

    parser = optparse.OptionParser(usage)
    parser.add_option("-R", "--rcfiles",
                      help="read further configuration from the given comma-separated rc files, overriding the experiment spec")
    parser.add_option("-p", "--policy",
                      help="comma-separated policies to run: ucb, dmed, ps, oracle, random", metavar="POLICIES")
    parser.add_option("-T", "--horizon", type="int",
                      help="number of steps per episode", metavar="T")
    parser.add_option("-n", "--reps", type="int",
                      help="number of replications per policy", metavar="N")
    parser.add_option("-s", "--seed", type="int",
                      help="base seed, replicate i uses SEED+i", metavar="SEED")
    parser.add_option("-x", "--initial-state", dest="initial_state",
                      help="state each episode starts in", metavar="STATE")
    parser.add_option("-o", "--out-dir", dest="out_dir",
                      help="write CSV and SVG results under DIR", metavar="DIR")
    parser.add_option("-w", "--workers", type="int",
                      help="run replications on N worker processes", metavar="N")
    parser.add_option("-d", "--dump-spec", dest="dump_spec",
                      help="write the resolved spec to FILE", metavar="FILE")
    parser.add_option("-l", "--log-x", dest="log_x", action="store_true", default=False,
                      help="plot t on a log scale")
    parser.add_option("-P", "--paired", action="store_true", default=False,
                      help="robustness: also run without the rigged counts and plot both")
    return parser
