import math

import numpy as np
import pytest

from adaptivemdp.config import RcFileHandler, ModelValidationError
from adaptivemdp.estimation import CountTables, record_transition, estimate_probs, estimate_all_probs, \
    good_action_set
from adaptivemdp.presets import BENCHMARK_EXAMPLE


def benchmarkTemplate():
    return CountTables.fromRcSections(RcFileHandler([], BENCHMARK_EXAMPLE), (2, 2, 2), [ "x1", "x2", "x3" ])


class TestRecordTransition:
    def test_updates_every_table(self):
        counts = CountTables((2, 2, 2))
        record_transition(counts, 0, 1, 2)
        assert counts.stateVisits.tolist() == [ 1, 0, 0 ]
        assert counts.activations[0].tolist() == [ 0, 1 ]
        assert counts.transitions[0, 1].tolist() == [ 0, 0, 1 ]
        assert counts.clock == 2

    def test_consistency_after_many_records(self):
        generator = np.random.default_rng(5)
        actionCounts = (3, 1, 2, 2)
        counts = CountTables(actionCounts)
        expected = np.zeros_like(counts.transitions)
        for _ in range(10 ** 4):
            x = int(generator.integers(4))
            a = int(generator.integers(actionCounts[x]))
            y = int(generator.integers(4))
            record_transition(counts, x, a, y)
            expected[x, a, y] += 1
        assert counts.isConsistent()
        np.testing.assert_array_equal(counts.transitions, expected)
        assert counts.clock == 10 ** 4 + 1

    def test_out_of_range_indices(self):
        counts = CountTables((2, 1))
        with pytest.raises(IndexError):
            record_transition(counts, 1, 1, 0)
        with pytest.raises(IndexError):
            record_transition(counts, 0, 0, 2)
        assert counts.clock == 1


class TestEstimateProbs:
    def test_uniform_with_no_data(self):
        counts = CountTables((2, 2, 2))
        np.testing.assert_allclose(estimate_probs(counts, 1, 0), 1.0 / 3)

    def test_seven_observations_of_one_successor(self):
        counts = CountTables((1, 1, 1))
        for _ in range(7):
            record_transition(counts, 0, 0, 0)
        np.testing.assert_allclose(estimate_probs(counts, 0, 0), [ 0.8, 0.1, 0.1 ])

    def test_strictly_positive_and_normalised(self):
        generator = np.random.default_rng(9)
        counts = CountTables((2, 2, 2))
        for _ in range(500):
            record_transition(counts, int(generator.integers(3)), int(generator.integers(2)), 0)
        probs = estimate_all_probs(counts)
        assert (probs > 0).all()
        np.testing.assert_allclose(probs.sum(axis=2), 1.0, atol=1e-12)

    def test_converges_to_frequencies(self):
        counts = CountTables((1, 1, 1))
        counts.transitions[0, 0] = [ 200000, 500000, 300000 ]
        counts.activations[0, 0] = 10 ** 6
        np.testing.assert_allclose(estimate_probs(counts, 0, 0), [ 0.2, 0.5, 0.3 ], atol=1e-5)


class TestGoodActionSet:
    def recordActivations(self, activationsByAction):
        counts = CountTables((len(activationsByAction), 1))
        for a, n in enumerate(activationsByAction):
            for _ in range(n):
                record_transition(counts, 0, a, 1)
        return counts

    def test_threshold_from_state_visits(self):
        counts = self.recordActivations([ 25, 10, 65 ])
        assert counts.stateVisits[0] == 100
        assert math.log(100) ** 2 == pytest.approx(21.21, abs=0.01)
        assert good_action_set(counts, 0) == [ 0, 2 ]

    def test_everything_good_early_on(self):
        assert good_action_set(CountTables((3, 1)), 0) == [ 0, 1, 2 ]
        assert good_action_set(self.recordActivations([ 1, 0, 0 ]), 0) == [ 0, 1, 2 ]

    def test_falls_back_to_every_action(self):
        counts = CountTables((2, 1))
        counts.stateVisits[0] = 1000
        assert good_action_set(counts, 0) == [ 0, 1 ]

    def test_restricted_candidate_list(self):
        counts = self.recordActivations([ 25, 10, 65 ])
        assert good_action_set(counts, 0, [ 1 ]) == [ 1 ]
        with pytest.raises(ValueError):
            good_action_set(counts, 0, [])


class TestPriorAndSnapshots:
    def test_benchmark_prior_counts(self):
        tables = CountTables.fromPrior(benchmarkTemplate())
        assert tables.stateVisits[0] == 20
        assert tables.activations[0, 0] == 10
        assert tables.transitions[0, 0, 0] == 8
        assert tables.clock == 61
        assert tables.isConsistent()
        assert tables.priorTotal() == 60
        assert not tables.episodeActivations().any()

    def test_episode_activations_exclude_prior(self):
        tables = CountTables.fromPrior(benchmarkTemplate())
        record_transition(tables, 1, 1, 2)
        assert tables.episodeActivations().sum() == 1
        assert tables.episodeActivations()[1, 1] == 1

    def test_copy_is_independent(self):
        tables = CountTables.fromPrior(benchmarkTemplate())
        duplicate = tables.copy()
        record_transition(duplicate, 0, 0, 0)
        assert tables.clock == 61 and duplicate.clock == 62

    def test_snapshot_round_trip(self, tmp_path):
        tables = CountTables((2, 1, 3))
        generator = np.random.default_rng(3)
        for _ in range(50):
            x = int(generator.integers(3))
            record_transition(tables, x, int(generator.integers(tables.actionCounts[x])), int(generator.integers(3)))
        fileName = str(tmp_path / "counts.rc")
        tables.writeSnapshot(fileName, [ "s", "t", "u" ])
        restored = CountTables.readSnapshot(fileName, (2, 1, 3), [ "s", "t", "u" ])
        np.testing.assert_array_equal(restored.transitions, tables.transitions)
        assert restored.clock == tables.clock
        assert restored.isConsistent()

    def test_no_sections_gives_none(self):
        assert CountTables.fromRcSections(RcFileHandler([], "[general]\nname = x\n"), (1,), [ "x1" ]) is None

    def test_bad_count_row(self):
        handler = RcFileHandler([], "[rigged_prior x1]\na1 = 1, -2\n")
        with pytest.raises(ModelValidationError):
            CountTables.fromRcSections(handler, (1, 1), [ "x1", "x2" ])

    def test_preload_rejects_negative_counts(self):
        with pytest.raises(ValueError):
            CountTables((1, 1)).preload([ [ [ 1, -1 ] ], [ [ 0, 0 ] ] ])
