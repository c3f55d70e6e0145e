import numpy as np
import pytest

from adaptivemdp.mdpcore import MdpModel

BENCHMARK_REWARDS = [ [ 0.13, 0.18 ], [ 0.47, 0.71 ], [ 0.89, 0.63 ] ]
BENCHMARK_TRANSITIONS = [ [ [ 0.04, 0.69, 0.27 ], [ 0.28, 0.68, 0.04 ] ],
                      [ [ 0.88, 0.01, 0.11 ], [ 0.26, 0.33, 0.41 ] ],
                      [ [ 0.02, 0.46, 0.52 ], [ 0.43, 0.35, 0.22 ] ] ]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="also run the full-scale reproduction experiments")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale reproduction, only runs with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skipSlow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skipSlow)


@pytest.fixture
def benchmarkModel():
    return MdpModel(BENCHMARK_REWARDS, BENCHMARK_TRANSITIONS)


def makeRandomModel(generator, numStates, actionCounts, floor=0.05):
    """ Rewards uniform on [0,1), rows Dirichlet(1) mixed with the uniform row so every entry is at least floor/s """
    rewards, transitions = [], []
    for x in range(numStates):
        rewards.append(list(generator.random(actionCounts[x])))
        rows = []
        for _ in range(actionCounts[x]):
            row = (1 - floor) * generator.dirichlet(np.ones(numStates)) + floor / numStates
            rows.append(row / row.sum())
        transitions.append(rows)
    return MdpModel(rewards, transitions)


@pytest.fixture
def randomModelFactory():
    return makeRandomModel


@pytest.fixture
def duplicatedActionModel():
    # state x1 has two copies of the same action
    return MdpModel([ [ 0.5, 0.5, 0.2 ], [ 0.3 ] ],
                    [ [ [ 0.3, 0.7 ], [ 0.3, 0.7 ], [ 0.6, 0.4 ] ], [ [ 0.5, 0.5 ] ] ])


@pytest.fixture
def equalRewardModel():
    return MdpModel([ [ 0.4, 0.4 ], [ 0.4, 0.4 ], [ 0.4 ] ],
                    [ [ [ 0.2, 0.3, 0.5 ], [ 0.6, 0.2, 0.2 ] ],
                      [ [ 0.1, 0.1, 0.8 ], [ 0.3, 0.3, 0.4 ] ],
                      [ [ 0.5, 0.25, 0.25 ] ] ])
