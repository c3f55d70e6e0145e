""" Experiment specs shipped with the package, usable wherever a spec file name is accepted """

BENCHMARK_EXAMPLE = """
[general]
name = paper_example
policies = ps, ucb, dmed
horizon = 10000
replications = 100
seed = 20190601
initial_state = x1

[rewards]
x1 = 0.13, 0.18
x2 = 0.47, 0.71
x3 = 0.89, 0.63

[transitions x1]
a1 = 0.04, 0.69, 0.27
a2 = 0.28, 0.68, 0.04

[transitions x2]
a1 = 0.88, 0.01, 0.11
a2 = 0.26, 0.33, 0.41

[transitions x3]
a1 = 0.02, 0.46, 0.52
a2 = 0.43, 0.35, 0.22

[rigged_prior x1]
a1 = 8, 1, 1
a2 = 1, 1, 8

[rigged_prior x2]
a1 = 1, 1, 8
a2 = 8, 1, 1

[rigged_prior x3]
a1 = 8, 1, 1
a2 = 1, 1, 8
"""

presets = { "paper_example" : BENCHMARK_EXAMPLE }

def getPreset(name):
    return presets.get(name)
