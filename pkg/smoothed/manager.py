"""Smoothed-analysis manager: perturbed FLIP runs, tail-bound checks and benchmarks."""

import concurrent.futures
import logging
import math
import statistics
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from config.manager import ConfigurationManager
from flip.manager import FlipManager
from graph.manager import GraphManager
from models import (
    Claim17Result, CubicBenchConfig, ExperimentConfig, Graph, Partition, PivotRule,
    RealGraph, SmoothedError, SmoothedReport, TrialStats,
)
import constants

logger = logging.getLogger(__name__)


class SmoothedManager:
    """Handles Gaussian perturbation experiments on bounded-degree graphs"""

    @staticmethod
    def normalize(g: Graph) -> RealGraph:
        """Divide every weight by the largest one"""
        if not g.edges:
            raise SmoothedError(constants.ERROR_EDGELESS)
        w_max = max(e.weight for e in g.edges)
        return RealGraph(
            node_count=g.node_count,
            us=np.array([e.u for e in g.edges], dtype=np.int64),
            vs=np.array([e.v for e in g.edges], dtype=np.int64),
            weights=np.array([e.weight / w_max for e in g.edges], dtype=np.float64),
            w_max=float(w_max),
        )

    @staticmethod
    def _check_sigma(sigma: float):
        if not 0 < sigma < 1:
            raise SmoothedError(constants.ERROR_SIGMA.format(sigma=sigma))

    @staticmethod
    def perturb(rg: RealGraph, sigma: float, seed: int) -> RealGraph:
        """Add i.i.d. N(0, sigma^2) noise to the normalized weights in edge order"""
        SmoothedManager._check_sigma(sigma)
        noise = np.random.default_rng(seed).normal(0.0, sigma, size=rg.edge_count)
        return RealGraph(rg.node_count, rg.us, rg.vs, rg.weights + noise, rg.w_max)

    @staticmethod
    def degree_for(n: int, rule: str = "log", factor: float = constants.DEFAULT_DEGREE_FACTOR) -> int:
        """Degree for an n-node regular graph: ceil(factor * log2 n), 3, or a fixed number"""
        if n < 2:
            raise SmoothedError(constants.ERROR_SIZE.format(n=n))
        if rule == "cubic":
            return 3
        if rule == "log":
            d = int(math.ceil(factor * math.log2(n)))
        elif str(rule).isdigit():
            d = int(rule)
        else:
            raise SmoothedError(constants.ERROR_DEGREE_RULE.format(value=rule))
        d = max(1, min(d, n - 1))
        if (n * d) % 2:
            d -= 1
        return d

    @staticmethod
    def random_regular(n: int, d: int, seed: int, max_weight: int = 1) -> Graph:
        """Random d-regular graph with weights drawn uniformly from 1..max_weight"""
        if n < 2:
            raise SmoothedError(constants.ERROR_SIZE.format(n=n))
        if d < 1 or d >= n or (n * d) % 2:
            raise SmoothedError(constants.ERROR_REGULAR.format(d=d, n=n))
        nx_graph = nx.random_regular_graph(d, n, seed=seed)
        pairs = sorted((min(u, v), max(u, v)) for u, v in nx_graph.edges())
        rng = np.random.default_rng([seed, 0])
        weights = rng.integers(1, max_weight, size=len(pairs), endpoint=True)
        return GraphManager.build_graph(n, [(u, v, int(w)) for (u, v), w in zip(pairs, weights)])

    @staticmethod
    def improvement_floor(n: int, d: int, sigma: float, delta: float, tau: float) -> float:
        """tau * delta * sigma / (n * 2^d); flips at or below it count as low-gain"""
        return tau * delta * sigma / (n * 2.0 ** d)

    @staticmethod
    def theorem16_bound(n: int, d: int, sigma: float, delta: float, constant: float = 1.0) -> float:
        """constant * n^2 * log2(n)^2 * 2^d / (delta * sigma)"""
        return constant * n ** 2 * math.log2(n) ** 2 * 2.0 ** d / (delta * sigma)

    @staticmethod
    def alpha_moment(steps: Sequence[int], alpha: float) -> float:
        if not steps:
            return 0.0
        return float(np.mean(np.asarray(steps, dtype=np.float64) ** alpha))

    @staticmethod
    def _adjacency(rg: RealGraph) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR arrays (indptr, neighbors, weights)"""
        sources = np.concatenate([rg.us, rg.vs])
        targets = np.concatenate([rg.vs, rg.us])
        weights = np.concatenate([rg.weights, rg.weights])
        order = np.argsort(sources, kind="stable")
        indptr = np.zeros(rg.node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(sources, minlength=rg.node_count), out=indptr[1:])
        return indptr, targets[order], weights[order]

    @staticmethod
    def max_degree(rg: RealGraph) -> int:
        if rg.edge_count == 0:
            return 0
        return int(np.bincount(np.concatenate([rg.us, rg.vs]), minlength=rg.node_count).max())

    @staticmethod
    def run_trial(rg: RealGraph, sigma: float, seed: int, rule: PivotRule = PivotRule.RANDOM,
                  failure_delta: float = constants.DEFAULT_FAILURE_DELTA,
                  tau: float = constants.DEFAULT_TAU,
                  degree_factor: float = constants.DEFAULT_DEGREE_FACTOR,
                  safety_cap_factor: int = constants.DEFAULT_SAFETY_CAP_FACTOR,
                  near_zero_gain: float = constants.DEFAULT_NEAR_ZERO_GAIN) -> TrialStats:
        """Perturb rg, then run FLIP from a seeded random start until no node is unhappy.

        Hitting the safety cap of safety_cap_factor * n^2 steps marks the trial
        unconverged instead of truncating it silently.
        """
        perturbed = SmoothedManager.perturb(rg, sigma, seed)
        n = rg.node_count
        d = SmoothedManager.max_degree(rg)
        degree_limit = int(math.ceil(degree_factor * math.log2(n))) if n > 1 else 1
        if d > degree_limit:
            logger.warning(constants.LOG_DEGREE_WARNING.format(d=d, limit=degree_limit, factor=degree_factor, n=n))

        indptr, neighbors, neighbor_weights = SmoothedManager._adjacency(perturbed)
        colors = np.random.default_rng([seed, 1]).integers(0, 2, size=n).astype(np.int8)
        pivot_rng = np.random.default_rng([seed, 2])
        us, vs, ws = perturbed.us, perturbed.vs, perturbed.weights

        signed = np.where(colors[us] == colors[vs], ws, -ws)
        gains = np.bincount(us, signed, minlength=n) + np.bincount(vs, signed, minlength=n)

        floor = SmoothedManager.improvement_floor(n, d, sigma, failure_delta, tau)
        cap = safety_cap_factor * n * n
        steps = 0
        low_gain = 0
        near_zero = 0
        min_gain: Optional[float] = None
        converged = True

        while True:
            unhappy = np.flatnonzero(gains > 0)
            if unhappy.size == 0:
                break
            if steps >= cap:
                converged = False
                logger.warning(constants.LOG_TRIAL_CAP.format(seed=seed, cap=cap))
                break
            v = FlipManager.choose_node(rule, unhappy, gains, pivot_rng)
            gained = float(gains[v])
            steps += 1
            min_gain = gained if min_gain is None else min(min_gain, gained)
            if gained <= floor:
                low_gain += 1
            if gained < near_zero_gain:
                near_zero += 1
                logger.debug(constants.LOG_NEAR_ZERO_GAIN.format(seed=seed, gain=gained))

            colors[v] ^= 1
            gains[v] = -gained
            lo, hi = indptr[v], indptr[v + 1]
            nbrs, nws = neighbors[lo:hi], neighbor_weights[lo:hi]
            gains[nbrs] += np.where(colors[nbrs] == colors[v], 2 * nws, -2 * nws)

        final_cut = float(ws[colors[us] != colors[vs]].sum())
        return TrialStats(
            n=n,
            m=rg.edge_count,
            d=d,
            sigma=sigma,
            seed=seed,
            rule=rule,
            steps=steps,
            min_flip_gain=min_gain,
            final_cut=final_cut,
            converged=converged,
            low_gain_flips=low_gain,
            near_zero_flips=near_zero,
        )

    @staticmethod
    def claim17_check(k: int, subset: Sequence[int], a: float, delta_prime: float, sigma: float,
                      samples: int, seed: int, c: float = constants.DEFAULT_CLAIM17_C) -> Claim17Result:
        """Monte Carlo estimate of Pr[|sum_S X_j - sum_notS X_j - a| <= delta' sigma / (c 2^k)].

        Passes when the estimate stays within three binomial standard errors of
        delta' * 2^-k.
        """
        if samples < 1:
            raise SmoothedError(constants.ERROR_EMPTY_TRIALS)
        if k < 1 or any(not 1 <= j <= k for j in subset):
            raise SmoothedError(constants.ERROR_CLAIM17_K)
        if not 0 < delta_prime < 1:
            raise SmoothedError(constants.ERROR_DELTA_PRIME.format(value=delta_prime))
        SmoothedManager._check_sigma(sigma)

        members = set(subset)
        signs = np.array([1.0 if j in members else -1.0 for j in range(1, k + 1)])
        draws = np.random.default_rng(seed).normal(0.0, sigma, size=(samples, k))
        window = delta_prime * sigma / (c * 2.0 ** k)
        hits = int(np.count_nonzero(np.abs(draws @ signs - a) <= window))

        estimate = hits / samples
        bound = delta_prime * 2.0 ** -k
        standard_error = math.sqrt(bound * (1 - bound) / samples)
        passed = estimate <= bound + constants.CLAIM17_SE_FACTOR * standard_error
        logger.info(constants.LOG_CLAIM17.format(k=k, estimate=estimate, bound=bound))
        return Claim17Result(
            k=k,
            subset=tuple(sorted(members)),
            a=a,
            delta_prime=delta_prime,
            sigma=sigma,
            c=c,
            samples=samples,
            hits=hits,
            estimate=estimate,
            bound=bound,
            standard_error=standard_error,
            passed=passed,
        )

    @staticmethod
    def _check_grid(config: ExperimentConfig):
        if not config.sizes or not config.sigmas or not config.rules or config.trials < 1:
            raise SmoothedError(constants.ERROR_EMPTY_GRID)
        for n in config.sizes:
            if n < 2:
                raise SmoothedError(constants.ERROR_SIZE.format(n=n))
        for sigma in config.sigmas:
            SmoothedManager._check_sigma(sigma)

    @staticmethod
    def experiment(config: ExperimentConfig) -> SmoothedReport:
        """Run the (size, sigma, rule, trial) grid and fit the step counts"""
        SmoothedManager._check_grid(config)
        graph_seeds = ConfigurationManager.derive_seeds(config.seed, len(config.sizes))
        bases: Dict[int, RealGraph] = {}
        for n, graph_seed in zip(config.sizes, graph_seeds):
            d = SmoothedManager.degree_for(n, config.degree_rule, config.degree_factor)
            bases[n] = SmoothedManager.normalize(SmoothedManager.random_regular(n, d, graph_seed))

        jobs = [(n, sigma, rule) for n in config.sizes for sigma in config.sigmas
                for rule in config.rules for _ in range(config.trials)]
        trial_seeds = ConfigurationManager.derive_seeds(config.seed + 1, len(jobs))
        logger.info(constants.LOG_EXPERIMENT_START.format(jobs=len(jobs), workers=config.max_workers))

        def run(job: Tuple[Tuple[int, float, PivotRule], int]) -> TrialStats:
            (n, sigma, rule), seed = job
            return SmoothedManager.run_trial(
                bases[n], sigma, seed, rule,
                failure_delta=config.failure_delta,
                tau=config.tau,
                degree_factor=config.degree_factor,
                safety_cap_factor=config.safety_cap_factor,
                near_zero_gain=config.near_zero_gain,
            )

        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, config.max_workers)) as pool:
            trials = list(pool.map(run, zip(jobs, trial_seeds)))

        aggregates = SmoothedManager.aggregate(trials)
        fits = SmoothedManager.fit(trials, config)
        checks = SmoothedManager.checks(trials, aggregates, fits, config)
        logger.info(constants.LOG_EXPERIMENT_DONE.format(
            converged=sum(t.converged for t in trials), jobs=len(trials)))
        return SmoothedReport(
            config={
                "sizes": list(config.sizes),
                "sigmas": list(config.sigmas),
                "trials": config.trials,
                "rules": [rule.value for rule in config.rules],
                "seed": config.seed,
                "degree_rule": config.degree_rule,
                "degree_factor": config.degree_factor,
                "failure_delta": config.failure_delta,
                "tau": config.tau,
                "safety_cap_factor": config.safety_cap_factor,
                "near_zero_gain": config.near_zero_gain,
                "quantile_constant": config.quantile_constant,
                "n_power": config.n_power,
                "sigma_power": config.sigma_power,
            },
            trials=trials,
            aggregates=aggregates,
            fits=fits,
            checks=checks,
        )

    @staticmethod
    def aggregate(trials: Sequence[TrialStats]) -> Dict[str, object]:
        """Per-cell and overall statistics; a pure function of the trials"""
        cells: Dict[str, List[TrialStats]] = {}
        for t in trials:
            cells.setdefault(f"n={t.n},sigma={t.sigma},rule={t.rule.value}", []).append(t)

        per_cell = {}
        for key, group in cells.items():
            steps = [t.steps for t in group]
            gains = [t.min_flip_gain for t in group if t.min_flip_gain is not None]
            per_cell[key] = {
                "trials": len(group),
                "median_steps": statistics.median(steps),
                "max_steps": max(steps),
                "min_flip_gain": min(gains) if gains else None,
                "converged": sum(t.converged for t in group),
                "alpha_moment_0.5": SmoothedManager.alpha_moment(steps, 0.5),
            }

        total_flips = sum(t.steps for t in trials)
        low_gain = sum(t.low_gain_flips for t in trials)
        return {
            "cells": per_cell,
            "total_flips": total_flips,
            "low_gain_flips": low_gain,
            "low_gain_fraction": low_gain / total_flips if total_flips else 0.0,
            "near_zero_flips": sum(t.near_zero_flips for t in trials),
            "max_steps": max(t.steps for t in trials),
        }

    @staticmethod
    def fit(trials: Sequence[TrialStats], config: ExperimentConfig) -> Dict[str, object]:
        """Least-squares fit of log(median steps) on log n and log(1/sigma)"""
        cells: Dict[Tuple[int, float], List[int]] = {}
        for t in trials:
            cells.setdefault((t.n, t.sigma), []).append(t.steps)
        keys = sorted(cells)
        sizes = sorted({n for n, _ in keys})
        sigmas = sorted({s for _, s in keys})

        columns = [np.ones(len(keys))]
        names = ["intercept"]
        if len(sizes) > 1:
            columns.append(np.log([n for n, _ in keys]))
            names.append("n_exponent")
        if len(sigmas) > 1:
            columns.append(np.log([1.0 / s for _, s in keys]))
            names.append("inv_sigma_exponent")
        target = np.log([max(1.0, statistics.median(cells[key])) for key in keys])
        coefficients, *_ = np.linalg.lstsq(np.column_stack(columns), target, rcond=None)
        fitted = {name: float(value) for name, value in zip(names, coefficients)}

        ratios = [t.steps / SmoothedManager.theorem16_bound(t.n, t.d, t.sigma, config.failure_delta)
                  for t in trials]
        fitted["theorem16_constant"] = max(ratios)
        fitted["median_steps_by_sigma"] = {
            str(s): statistics.median([t.steps for t in trials if t.sigma == s]) for s in sigmas
        }
        return fitted

    @staticmethod
    def checks(trials: Sequence[TrialStats], aggregates: Dict[str, object], fits: Dict[str, object],
               config: ExperimentConfig) -> Dict[str, object]:
        delta = config.failure_delta
        within_quantile = [
            t.steps < delta ** -2 * config.quantile_constant * t.n ** config.n_power * t.sigma ** -config.sigma_power
            for t in trials
        ]
        by_sigma = [fits["median_steps_by_sigma"][str(s)] for s in sorted(config.sigmas)]
        result = {
            "all_converged": all(t.converged for t in trials),
            "positive_gains": all(t.min_flip_gain is None or t.min_flip_gain > 0 for t in trials),
            "low_gain_fraction_ok": aggregates["low_gain_fraction"] <= delta,
            "quantile_fraction": sum(within_quantile) / len(trials),
            "quantile_ok": sum(within_quantile) / len(trials) > 1 - delta,
            "n_exponent_ok": fits.get("n_exponent", 0.0) <= constants.SMOOTH_N_EXPONENT_LIMIT,
            # descriptive only
            "median_nonincreasing_in_sigma": all(x >= y for x, y in zip(by_sigma, by_sigma[1:])),
        }
        result["passed"] = all(result[key] for key in (
            "all_converged", "positive_gains", "low_gain_fraction_ok", "quantile_ok", "n_exponent_ok"))
        return result

    @staticmethod
    def cubic_bench(config: CubicBenchConfig) -> Dict[str, object]:
        """Max FLIP steps over random starts on random cubic graphs, with a log-log slope per weighting"""
        if not config.sizes or config.starts < 1:
            raise SmoothedError(constants.ERROR_EMPTY_GRID)
        weightings = {"unit": 1, "random": config.max_weight}
        graph_seeds = ConfigurationManager.derive_seeds(config.seed, len(config.sizes))
        graphs = {(n, name): SmoothedManager.random_regular(n, 3, graph_seed, max_weight)
                  for n, graph_seed in zip(config.sizes, graph_seeds)
                  for name, max_weight in weightings.items()}

        jobs = [(n, name) for n in config.sizes for name in weightings for _ in range(config.starts)]
        start_seeds = ConfigurationManager.derive_seeds(config.seed + 1, len(jobs))

        def run(job: Tuple[Tuple[int, str], int]) -> Tuple[int, bool]:
            (n, name), seed = job
            start = Partition(tuple(int(c) for c in np.random.default_rng(seed).integers(0, 2, size=n)))
            trace = FlipManager.run_flip(graphs[(n, name)], start, config.rule, seed=seed)
            return trace.step_count, trace.reached_limit

        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, config.max_workers)) as pool:
            results = list(pool.map(run, zip(jobs, start_seeds)))

        report: Dict[str, object] = {"sizes": list(config.sizes), "starts": config.starts,
                                     "seed": config.seed, "rule": config.rule.value,
                                     "slope_limit": config.slope_limit}
        passed = True
        for name in weightings:
            max_steps = []
            truncated = False
            for n in config.sizes:
                runs = [r for job, r in zip(jobs, results) if job == (n, name)]
                max_steps.append(max(steps for steps, _ in runs))
                truncated = truncated or any(limit for _, limit in runs)
            slope = None
            if len(config.sizes) > 1:
                slope = float(np.polyfit(np.log(config.sizes), np.log(np.maximum(max_steps, 1)), 1)[0])
                logger.info(constants.LOG_CUBIC_DONE.format(slope=slope, limit=config.slope_limit))
            ok = not truncated and (slope is None or slope <= config.slope_limit)
            passed = passed and ok
            report[name] = {"max_steps": max_steps, "slope": slope, "truncated": truncated, "passed": ok}
        report["passed"] = passed
        return report
