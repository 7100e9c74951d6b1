import math
import unittest

import numpy as np

from graph.manager import GraphManager
from models import (
    CubicBenchConfig, ExperimentConfig, PivotRule, RealGraph, SmoothedError,
)
from smoothed.manager import SmoothedManager


class TestPerturbation(unittest.TestCase):
    def test_normalize(self):
        rg = SmoothedManager.normalize(GraphManager.build_graph(3, [(0, 1, 2), (1, 2, 4)]))
        self.assertEqual(rg.weights.tolist(), [0.5, 1.0])
        self.assertEqual(rg.w_max, 4.0)
        self.assertEqual(rg.edge_count, 2)

    def test_normalize_equal_weights(self):
        rg = SmoothedManager.normalize(GraphManager.build_graph(3, [(0, 1, 7), (1, 2, 7)]))
        self.assertEqual(rg.weights.tolist(), [1.0, 1.0])

    def test_normalize_edgeless(self):
        with self.assertRaises(SmoothedError):
            SmoothedManager.normalize(GraphManager.build_graph(2, []))

    def test_perturb_is_deterministic(self):
        rg = SmoothedManager.normalize(SmoothedManager.random_regular(16, 4, seed=3))
        first = SmoothedManager.perturb(rg, 0.1, seed=5)
        second = SmoothedManager.perturb(rg, 0.1, seed=5)
        third = SmoothedManager.perturb(rg, 0.1, seed=6)
        np.testing.assert_array_equal(first.weights, second.weights)
        self.assertFalse(np.array_equal(first.weights, third.weights))

    def test_perturbation_mean(self):
        count = 100_000
        rg = RealGraph(2, np.zeros(count, dtype=np.int64), np.ones(count, dtype=np.int64), np.zeros(count))
        sigma = 0.2
        noise = SmoothedManager.perturb(rg, sigma, seed=1).weights
        self.assertLess(abs(noise.mean()), 4 * sigma / math.sqrt(count))
        self.assertAlmostEqual(noise.std(), sigma, delta=0.01)

    def test_sigma_range(self):
        rg = SmoothedManager.normalize(GraphManager.build_graph(2, [(0, 1, 1)]))
        for sigma in (0.0, 1.0, -0.1):
            with self.assertRaises(SmoothedError):
                SmoothedManager.perturb(rg, sigma, seed=0)


class TestGraphs(unittest.TestCase):
    def test_degree_for(self):
        self.assertEqual(SmoothedManager.degree_for(64), 12)
        self.assertEqual(SmoothedManager.degree_for(256), 16)
        self.assertEqual(SmoothedManager.degree_for(100, "cubic"), 3)
        self.assertEqual(SmoothedManager.degree_for(10, "4"), 4)
        # 9 * 7 is odd
        self.assertEqual(SmoothedManager.degree_for(9), 6)

    def test_degree_rule_must_be_a_number(self):
        for rule in ("abc", "-2", "2.5"):
            with self.assertRaises(SmoothedError, msg=rule):
                SmoothedManager.degree_for(16, rule)

    def test_random_regular(self):
        g = SmoothedManager.random_regular(20, 3, seed=4, max_weight=50)
        self.assertEqual({g.degree(v) for v in range(20)}, {3})
        self.assertTrue(all(1 <= e.weight <= 50 for e in g.edges))
        self.assertEqual(g, SmoothedManager.random_regular(20, 3, seed=4, max_weight=50))

    def test_no_regular_graph(self):
        with self.assertRaises(SmoothedError):
            SmoothedManager.random_regular(7, 3, seed=0)


class TestRunTrial(unittest.TestCase):
    def test_single_edge(self):
        rg = SmoothedManager.normalize(GraphManager.build_graph(2, [(0, 1, 1)]))
        stats = SmoothedManager.run_trial(rg, 0.1, seed=2)
        self.assertLessEqual(stats.steps, 1)
        self.assertTrue(stats.converged)

    def test_bounded_degree_graph_converges(self):
        rg = SmoothedManager.normalize(SmoothedManager.random_regular(64, 12, seed=8))
        for rule in PivotRule:
            stats = SmoothedManager.run_trial(rg, 0.1, seed=21, rule=rule)
            self.assertTrue(stats.converged)
            self.assertEqual(stats.d, 12)
            self.assertGreater(stats.steps, 0)
            self.assertGreater(stats.min_flip_gain, 0)

    def test_trial_is_deterministic(self):
        rg = SmoothedManager.normalize(SmoothedManager.random_regular(32, 10, seed=1))
        self.assertEqual(SmoothedManager.run_trial(rg, 0.1, seed=4), SmoothedManager.run_trial(rg, 0.1, seed=4))

    def test_safety_cap(self):
        rg = SmoothedManager.normalize(SmoothedManager.random_regular(32, 10, seed=1))
        stats = SmoothedManager.run_trial(rg, 0.1, seed=4, rule=PivotRule.FIRST, safety_cap_factor=0)
        self.assertFalse(stats.converged)
        self.assertEqual(stats.steps, 0)


class TestBounds(unittest.TestCase):
    def test_improvement_floor(self):
        self.assertAlmostEqual(SmoothedManager.improvement_floor(64, 12, 0.1, 0.1, 0.01),
                               0.01 * 0.1 * 0.1 / (64 * 4096))

    def test_theorem16_bound(self):
        self.assertAlmostEqual(SmoothedManager.theorem16_bound(16, 2, 0.5, 0.1), 256 * 16 * 4 / 0.05)

    def test_alpha_moment(self):
        self.assertAlmostEqual(SmoothedManager.alpha_moment([1, 4, 9], 0.5), 2.0)
        self.assertEqual(SmoothedManager.alpha_moment([], 0.5), 0.0)


class TestClaim17(unittest.TestCase):
    def test_single_variable(self):
        result = SmoothedManager.claim17_check(1, [1], 0.0, 0.5, 0.1, samples=20_000, seed=3, c=10)
        self.assertEqual(result.bound, 0.25)
        self.assertLess(result.estimate, 0.25)
        self.assertTrue(result.passed)

    def test_far_target(self):
        result = SmoothedManager.claim17_check(2, [1], 10.0, 0.5, 0.1, samples=10_000, seed=3)
        self.assertEqual(result.hits, 0)

    def test_tail_bound_grid(self):
        for k in (1, 2, 4, 8):
            for delta_prime in (0.2, 0.5):
                subset = list(range(1, k + 1, 2))
                result = SmoothedManager.claim17_check(k, subset, 0.0, delta_prime, 0.1,
                                                       samples=100_000, seed=k, c=10)
                self.assertTrue(result.passed, msg=f"k={k} delta'={delta_prime}")

    def test_argument_checks(self):
        with self.assertRaises(SmoothedError):
            SmoothedManager.claim17_check(2, [1], 0.0, 0.5, 0.1, samples=0, seed=0)
        with self.assertRaises(SmoothedError):
            SmoothedManager.claim17_check(2, [3], 0.0, 0.5, 0.1, samples=10, seed=0)
        with self.assertRaises(SmoothedError):
            SmoothedManager.claim17_check(2, [1], 0.0, 1.0, 0.1, samples=10, seed=0)


class TestExperiment(unittest.TestCase):
    def config(self, **overrides):
        values = dict(sizes=[16, 32], sigmas=[0.1, 0.2], trials=3, rules=[PivotRule.RANDOM], seed=7,
                      max_workers=2)
        values.update(overrides)
        return ExperimentConfig(**values)

    def test_grid(self):
        report = SmoothedManager.experiment(self.config())
        self.assertEqual(len(report.trials), 12)
        self.assertTrue(report.checks["all_converged"])
        self.assertTrue(report.checks["positive_gains"])
        self.assertTrue(report.checks["low_gain_fraction_ok"])
        self.assertTrue(report.checks["quantile_ok"])
        self.assertEqual(report.checks["quantile_fraction"], 1.0)
        self.assertEqual(report.aggregates, SmoothedManager.aggregate(report.trials))
        self.assertIn("n_exponent", report.fits)
        self.assertIn("inv_sigma_exponent", report.fits)
        self.assertGreater(report.fits["theorem16_constant"], 0)
        self.assertEqual([t.n for t in report.trials[:6]], [16] * 6)

    def test_quantile_constants_reach_the_check(self):
        tight = SmoothedManager.experiment(self.config(sizes=[16], sigmas=[0.1], quantile_constant=1e-12))
        self.assertFalse(tight.checks["quantile_ok"])
        self.assertFalse(tight.checks["passed"])

    def test_reproducible(self):
        first = SmoothedManager.experiment(self.config(sizes=[16], sigmas=[0.1]))
        second = SmoothedManager.experiment(self.config(sizes=[16], sigmas=[0.1], max_workers=1))
        self.assertEqual(first.trials, second.trials)
        self.assertEqual(first.fits, second.fits)

    def test_empty_grid(self):
        with self.assertRaises(SmoothedError):
            SmoothedManager.experiment(self.config(sizes=[]))
        with self.assertRaises(SmoothedError):
            SmoothedManager.experiment(self.config(trials=0))

    def test_size_too_small(self):
        with self.assertRaises(SmoothedError):
            SmoothedManager.experiment(self.config(sizes=[1]))


class TestCubicBench(unittest.TestCase):
    def test_small_bench(self):
        report = SmoothedManager.cubic_bench(CubicBenchConfig(sizes=[10, 20], starts=3, seed=2, max_workers=2))
        for weighting in ("unit", "random"):
            self.assertEqual(len(report[weighting]["max_steps"]), 2)
            self.assertFalse(report[weighting]["truncated"])
            self.assertIsNotNone(report[weighting]["slope"])
        for n, steps in zip([10, 20], report["unit"]["max_steps"]):
            self.assertLessEqual(steps, 3 * n // 2)
        self.assertIsInstance(report["passed"], bool)


if __name__ == '__main__':
    unittest.main()
