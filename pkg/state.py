"""Settings and report persistence for cutlab."""

import json
import os
import logging
import threading
from typing import Any, Dict

from models import LabSettings, LogLevel
import constants

logger = logging.getLogger(__name__)

_settings_lock = threading.RLock()


class StateManager:
    """Handles the settings file and written reports"""

    @staticmethod
    def settings_to_dict(settings: LabSettings) -> Dict[str, Any]:
        return {
            'enumeration_cap': settings.enumeration_cap,
            'log_level': settings.log_level.name,
            'claim17_c': settings.claim17_c,
            'failure_delta': settings.failure_delta,
            'tau': settings.tau,
            'quantile_constant': settings.quantile_constant,
            'n_power': settings.n_power,
            'sigma_power': settings.sigma_power,
            'degree_factor': settings.degree_factor,
            'max_workers': settings.max_workers,
            'near_zero_gain': settings.near_zero_gain,
            'safety_cap_factor': settings.safety_cap_factor,
        }

    @staticmethod
    def settings_from_dict(settings_dict: Dict[str, Any]) -> LabSettings:
        """Missing keys fall back to the defaults"""
        defaults = LabSettings()
        return LabSettings(
            enumeration_cap=int(settings_dict.get('enumeration_cap', defaults.enumeration_cap)),
            log_level=LogLevel[settings_dict.get('log_level', defaults.log_level.name)],
            claim17_c=float(settings_dict.get('claim17_c', defaults.claim17_c)),
            failure_delta=float(settings_dict.get('failure_delta', defaults.failure_delta)),
            tau=float(settings_dict.get('tau', defaults.tau)),
            quantile_constant=float(settings_dict.get('quantile_constant', defaults.quantile_constant)),
            n_power=float(settings_dict.get('n_power', defaults.n_power)),
            sigma_power=float(settings_dict.get('sigma_power', defaults.sigma_power)),
            degree_factor=float(settings_dict.get('degree_factor', defaults.degree_factor)),
            max_workers=int(settings_dict.get('max_workers', defaults.max_workers)),
            near_zero_gain=float(settings_dict.get('near_zero_gain', defaults.near_zero_gain)),
            safety_cap_factor=int(settings_dict.get('safety_cap_factor', defaults.safety_cap_factor)),
        )

    @staticmethod
    def save_settings(settings: LabSettings, path: str = constants.SETTINGS_FILE):
        """Save lab settings"""
        with _settings_lock:
            try:
                with open(path, 'w', encoding='utf-8') as f:
                    json.dump(StateManager.settings_to_dict(settings), f, indent=2)
                logger.debug(f"Settings saved to {path}")
            except Exception as e:
                logger.error(constants.LOG_SETTINGS_SAVE_ERROR.format(error=str(e)))

    @staticmethod
    def load_settings(path: str = constants.SETTINGS_FILE) -> LabSettings:
        """Load lab settings, create a default file if it doesn't exist"""
        with _settings_lock:
            try:
                if os.path.exists(path):
                    with open(path, 'r', encoding='utf-8') as f:
                        settings = StateManager.settings_from_dict(json.load(f))
                    logger.debug(constants.LOG_SETTINGS_LOADED.format(path=path))
                    return settings

                default_settings = LabSettings()
                StateManager.save_settings(default_settings, path)
                logger.info(constants.LOG_SETTINGS_CREATED.format(path=path))
                return default_settings

            except Exception as e:
                logger.error(constants.LOG_SETTINGS_ERROR.format(error=str(e)))
                logger.info("Using default settings due to error")
                return LabSettings()

    @staticmethod
    def dump_report(report: Dict[str, Any]) -> str:
        """Deterministic JSON text: sorted keys, two-space indent, trailing newline"""
        return json.dumps(report, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def save_report(report: Dict[str, Any], path: str):
        """Write a JSON report; failures propagate"""
        StateManager.save_text(StateManager.dump_report(report), path)
        logger.info(constants.LOG_REPORT_SAVED.format(path=path))

    @staticmethod
    def save_text(text: str, path: str):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
