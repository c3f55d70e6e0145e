import numpy as np
import pytest

from adaptivemdp.estimation import CountTables, record_transition
from adaptivemdp.mdpcore import MdpModel, solve_optimality, policy_gain, DeterministicPolicy
from adaptivemdp.policies import PolicyKind, RngStream, DmedPolicy, UcbPolicy, PosteriorSamplingPolicy, \
    shared_estimates, dirichlet_sample, makePolicy, ucb_choose, dmed_choose, ps_choose, oracle_choose
from adaptivemdp.simulator import step_chain


def largeCounts(model, scale=10 ** 6):
    """ Count tables whose rows are the model's true rows times scale """
    counts = CountTables.forModel(model)
    counts.transitions = np.rint(model.transitions * scale).astype(np.int64)
    counts.activations = counts.transitions.sum(axis=2)
    counts.stateVisits = counts.activations.sum(axis=1)
    counts.clock = int(counts.stateVisits.sum()) + 1
    return counts


def runActions(model, kind, seed, steps, shift=0.0):
    """ Action sequence of a policy driving the chain for the given number of steps """
    policy = makePolicy(kind, model.withRewardShift(shift) if shift else model, RngStream(seed, 1))
    chainRng = RngStream(seed, 0)
    counts = CountTables.forModel(model)
    state, actions = 0, []
    for t in range(1, steps + 1):
        action = policy.chooseAction(state, counts, t)
        nextState = step_chain(model, state, action, chainRng)
        record_transition(counts, state, action, nextState)
        actions.append(action)
        state = nextState
    return actions


class TestRngStream:
    def test_same_seed_same_draws(self):
        first, second = RngStream(42, 1), RngStream(42, 1)
        assert [ first.uniform() for _ in range(5) ] == [ second.uniform() for _ in range(5) ]
        assert first.position == 5

    def test_streams_differ(self):
        assert RngStream(42, 0).uniform() != RngStream(42, 1).uniform()

    def test_negative_seed_rejected(self):
        with pytest.raises(ValueError):
            RngStream(-1)


class TestDirichletSample:
    def test_on_simplex(self):
        rng = RngStream(1)
        for alpha in [ [ 1.0, 1.0 ], [ 0.01, 0.01, 0.01 ], [ 500.0, 1.0, 3.0 ] ]:
            sample = dirichlet_sample(alpha, rng)
            assert (sample > 0).all()
            assert sample.sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [ [ 1.0, 1.0, 1.0 ], [ 9.0, 1.0 ] ])
    def test_moments(self, alpha):
        rng = RngStream(2024)
        draws = np.array([ dirichlet_sample(alpha, rng) for _ in range(10 ** 5) ])
        alpha = np.array(alpha)
        total = alpha.sum()
        mean = alpha / total
        variance = alpha * (total - alpha) / (total ** 2 * (total + 1))
        tolerance = 4 * np.sqrt(variance / len(draws))
        assert (np.abs(draws.mean(axis=0) - mean) <= tolerance).all()

    def test_non_positive_parameter_rejected(self):
        with pytest.raises(ValueError):
            dirichlet_sample([ 1.0, 0.0 ], RngStream(1))


class TestSharedEstimates:
    def test_fresh_counts(self, benchmarkModel):
        counts = CountTables.forModel(benchmarkModel)
        estimates = shared_estimates(benchmarkModel, counts, 0)
        np.testing.assert_allclose(estimates.probs[benchmarkModel.admissible], 1.0 / 3)
        assert estimates.goodSets == [ [ 0, 1 ] ] * 3
        uniform = benchmarkModel.withTransitions(np.full((3, 2, 3), 1.0 / 3))
        assert estimates.gain == pytest.approx(solve_optimality(uniform).gain, abs=1e-9)

    def test_large_counts_recover_gain(self, benchmarkModel):
        estimates = shared_estimates(benchmarkModel, largeCounts(benchmarkModel), 0)
        assert estimates.gain == pytest.approx(solve_optimality(benchmarkModel).gain, abs=1e-3)

    def test_restricted_to_good_actions(self, benchmarkModel):
        counts = CountTables.forModel(benchmarkModel)
        generator = np.random.default_rng(4)
        for x in range(3):
            for _ in range(2000):
                record_transition(counts, x, 0, int(generator.integers(3)))
        estimates = shared_estimates(benchmarkModel, counts, 0)
        assert estimates.goodSets == [ [ 0 ] ] * 3
        estimated = benchmarkModel.withTransitions(estimates.probs)
        gain, _ = policy_gain(estimated, DeterministicPolicy([ 0, 0, 0 ]))
        assert estimates.gain == pytest.approx(gain, abs=1e-8)

    def test_same_solution_from_every_state(self, benchmarkModel):
        counts = largeCounts(benchmarkModel, 1000)
        first = shared_estimates(benchmarkModel, counts, 0)
        np.testing.assert_array_equal(shared_estimates(benchmarkModel, counts, 2).bias, first.bias)

    def test_state_out_of_range(self, benchmarkModel):
        with pytest.raises(IndexError):
            shared_estimates(benchmarkModel, CountTables.forModel(benchmarkModel), 3)


class TestUcb:
    def test_untried_action_dominates(self, benchmarkModel):
        counts = CountTables.forModel(benchmarkModel)
        for y in [ 0, 1, 2, 1 ]:
            record_transition(counts, 0, 0, y)
        assert ucb_choose(benchmarkModel, 0, counts, RngStream(3)) == 1

    def test_every_action_tried_first(self):
        # rewards constant within each state so the untried sentinel strictly wins
        model = MdpModel([ [ 0.2, 0.2, 0.2 ], [ 0.9, 0.9 ] ],
                         [ [ [ 0.5, 0.5 ], [ 0.3, 0.7 ], [ 0.8, 0.2 ] ], [ [ 0.6, 0.4 ], [ 0.1, 0.9 ] ] ])
        actions = runActions(model, PolicyKind.UCB, 8, 60)
        chainRng = RngStream(8, 0)
        state, visitsByState = 0, { 0 : [], 1 : [] }
        for action in actions:
            visitsByState[state].append(action)
            state = step_chain(model, state, action, chainRng)
        for x, visited in visitsByState.items():
            first = visited[:model.actionCounts[x]]
            if len(first) == model.actionCounts[x]:
                assert sorted(first) == list(model.actions(x))

    def test_indices_at_least_estimated_l_values(self, benchmarkModel):
        counts = largeCounts(benchmarkModel, 50)
        policy = UcbPolicy(benchmarkModel, RngStream(1))
        indices = policy.indices(1, counts, counts.clock)
        values = policy.lValues(1, shared_estimates(benchmarkModel, counts, 1))
        assert all(index >= value - 1e-12 for index, value in zip(indices, values))


class TestDmed:
    def test_exploits_when_nothing_is_owed(self, benchmarkModel):
        counts = largeCounts(benchmarkModel, 10 ** 9)
        policy = DmedPolicy(benchmarkModel)
        estimates = shared_estimates(benchmarkModel, counts, 0)
        for x in range(3):
            best, discrepancies = policy.discrepancies(x, counts, counts.clock, estimates)
            assert all(value <= 0 for value in discrepancies.values())
            assert best == int(np.argmax(policy.lValues(x, estimates)))
            assert dmed_choose(benchmarkModel, x, counts) == best

    def test_unreachable_threshold_never_forces(self):
        model = MdpModel([ [ 1.0, -5.0 ], [ 0.0 ] ], [ [ [ 0.5, 0.5 ], [ 0.5, 0.5 ] ], [ [ 0.5, 0.5 ] ] ])
        counts = CountTables.forModel(model)
        policy = DmedPolicy(model)
        for t in range(1, 30):
            estimates = shared_estimates(model, counts, 0)
            best, discrepancies = policy.discrepancies(0, counts, t, estimates)
            assert best == 0 and discrepancies[1] == 0
            assert policy.chooseAction(0, counts, t) == 0
            record_transition(counts, 0, 0, t % 2)

    def test_forces_first_largest_discrepancy(self, monkeypatch):
        model = MdpModel([ [ 0.5, 0.4, 0.3 ], [ 0.1 ] ],
                         [ [ [ 0.5, 0.5 ], [ 0.4, 0.6 ], [ 0.7, 0.3 ] ], [ [ 0.5, 0.5 ] ] ])
        counts = CountTables.forModel(model)
        policy = DmedPolicy(model)
        for fake, expected in [ ({ 1 : 3.2, 2 : -1.0 }, 1),
                                ({ 1 : 3.2, 2 : 3.2 }, 1),
                                ({ 1 : 0.5, 2 : 3.2 }, 2),
                                ({ 1 : -0.5, 2 : 0.0 }, 0) ]:
            monkeypatch.setattr(policy, "discrepancies", lambda *args, fake=fake: (0, fake))
            assert policy.chooseAction(0, counts, 5) == expected


class TestPosteriorSampling:
    def test_fresh_counts(self, benchmarkModel):
        counts = CountTables.forModel(benchmarkModel)
        assert ps_choose(benchmarkModel, 0, counts, RngStream(5)) in (0, 1)

    def test_identical_actions_chosen_equally(self, duplicatedActionModel):
        counts = CountTables.forModel(duplicatedActionModel)
        for a in (0, 1):
            for y in (0, 1, 1):
                record_transition(counts, 0, a, y)
        policy = PosteriorSamplingPolicy(duplicatedActionModel, RngStream(17))
        picks = [ policy.chooseAction(0, counts, counts.clock) for _ in range(10 ** 4) ]
        firstShare = picks.count(0) / len(picks)
        assert abs(firstShare - picks.count(1) / len(picks)) <= 2 * 3 * np.sqrt(0.25 / len(picks))

    def test_samples_concentrate_with_data(self, benchmarkModel):
        counts = largeCounts(benchmarkModel, 10 ** 5)
        policy = PosteriorSamplingPolicy(benchmarkModel, RngStream(6))
        estimates = shared_estimates(benchmarkModel, counts, 2)
        expected = [ benchmarkModel.reward(2, a) + float(benchmarkModel.row(2, a) @ estimates.bias) for a in (0, 1) ]
        samples = np.array([ policy.posteriorValues(2, counts) for _ in range(200) ])
        assert (samples.std(axis=0) < 0.01).all()
        np.testing.assert_allclose(samples.mean(axis=0), expected, atol=0.005)


class TestOracleAndBaseline:
    def test_benchmark_oracle(self, benchmarkModel):
        assert [ oracle_choose(benchmarkModel, x) for x in range(3) ] == [ 0, 1, 0 ]

    def test_lowest_id_on_ties(self, duplicatedActionModel, equalRewardModel):
        assert oracle_choose(duplicatedActionModel, 0) == 0
        assert [ oracle_choose(equalRewardModel, x) for x in range(3) ] == [ 0, 0, 0 ]

    def test_random_policy_admissible(self, equalRewardModel):
        policy = makePolicy("random", equalRewardModel, RngStream(9))
        assert { policy.chooseAction(0) for _ in range(50) } == { 0, 1 }
        assert { policy.chooseAction(2) for _ in range(10) } == { 0 }

    def test_unknown_policy_name(self, benchmarkModel):
        with pytest.raises(ValueError):
            makePolicy("greedy", benchmarkModel)


class TestDeterminismAndInvariance:
    @pytest.mark.parametrize("kind", [ PolicyKind.UCB, PolicyKind.DMED, PolicyKind.PS ])
    def test_same_seed_same_actions(self, benchmarkModel, kind):
        assert runActions(benchmarkModel, kind, 21, 150) == runActions(benchmarkModel, kind, 21, 150)

    @pytest.mark.parametrize("kind", [ PolicyKind.UCB, PolicyKind.DMED, PolicyKind.PS ])
    def test_reward_shift_keeps_choices(self, benchmarkModel, kind):
        assert runActions(benchmarkModel, kind, 22, 150, shift=0.75) == runActions(benchmarkModel, kind, 22, 150)
