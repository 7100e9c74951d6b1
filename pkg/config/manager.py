"""Configuration manager for experiment runs."""

import logging
from typing import List, Optional, Sequence

import numpy as np
import psutil

from models import CubicBenchConfig, ExperimentConfig, LabSettings, PivotRule
import constants

logger = logging.getLogger(__name__)


class ConfigurationManager:
    """Handles run configuration from settings and command-line values"""

    @staticmethod
    def resolve_workers(requested: int = 0) -> int:
        """Worker count; 0 means one per physical core"""
        if requested and requested > 0:
            return int(requested)
        workers = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
        logger.debug(constants.LOG_WORKERS.format(workers=workers))
        return workers

    @staticmethod
    def derive_seeds(master_seed: int, count: int) -> List[int]:
        """Independent per-job seeds spawned from one master seed"""
        children = np.random.SeedSequence(master_seed).spawn(count)
        return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in children]

    @staticmethod
    def experiment_config(settings: LabSettings, sizes: Sequence[int], sigmas: Sequence[float],
                          trials: int, rules: Sequence[PivotRule], seed: int,
                          degree_rule: str = "log", quantile_constant: Optional[float] = None,
                          n_power: Optional[float] = None, sigma_power: Optional[float] = None) -> ExperimentConfig:
        """Command-line values win; unset quantile constants come from the settings"""
        return ExperimentConfig(
            sizes=list(sizes),
            sigmas=list(sigmas),
            trials=trials,
            rules=list(rules),
            seed=seed,
            degree_rule=degree_rule,
            degree_factor=settings.degree_factor,
            failure_delta=settings.failure_delta,
            tau=settings.tau,
            quantile_constant=settings.quantile_constant if quantile_constant is None else quantile_constant,
            n_power=settings.n_power if n_power is None else n_power,
            sigma_power=settings.sigma_power if sigma_power is None else sigma_power,
            max_workers=ConfigurationManager.resolve_workers(settings.max_workers),
            safety_cap_factor=settings.safety_cap_factor,
            near_zero_gain=settings.near_zero_gain,
        )

    @staticmethod
    def cubic_config(settings: LabSettings, sizes: Sequence[int], starts: int, seed: int,
                     rule: PivotRule = PivotRule.RANDOM, max_weight: Optional[int] = None) -> CubicBenchConfig:
        return CubicBenchConfig(
            sizes=list(sizes),
            starts=starts,
            seed=seed,
            rule=rule,
            max_weight=max_weight or constants.DEFAULT_CUBIC_MAX_WEIGHT,
            slope_limit=constants.CUBIC_SLOPE_LIMIT,
            max_workers=ConfigurationManager.resolve_workers(settings.max_workers),
        )
