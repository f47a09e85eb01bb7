"""Configuration constants and settings for ekldeg.

This module provides centralized configuration for the computations: the
guards that stop runaway reductions, the logging defaults used by the CLI and
the list of accepted field specs.

Example:
    >>> from ekldeg.config import Config
    >>> Config.get_step_limit()
    1000000
    >>> Config.FIELD_SPECS
    ('QQ', 'RR', 'Fp:<p>', 'Qp:<p>')

Attributes:
    STEP_LIMIT: Maximum reduction steps in one normal form computation
    PAIR_LIMIT: Maximum critical pairs treated in one standard basis run
    HASSE_EXTRA_PRIMES: Primes always examined when classifying over QQ
    LOG_LEVEL: Default logging level for the ``ekldeg`` logger
    LOG_FORMAT: Format string handed to the rich logging handler
"""

import logging
import os
from dataclasses import dataclass


@dataclass
class Config:
    """Configuration settings for ekldeg."""

    # Algorithm guards
    STEP_LIMIT: int = 1_000_000
    PAIR_LIMIT: int = 100_000

    # Classification
    HASSE_EXTRA_PRIMES: tuple[int, ...] = ()

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(message)s"

    FIELD_SPECS: tuple[str, ...] = ("QQ", "RR", "Fp:<p>", "Qp:<p>")

    @classmethod
    def get_step_limit(cls) -> int:
        """Get the reduction step limit.

        Can be overridden by setting the EKLDEG_STEP_LIMIT environment variable.

        Returns:
            Maximum number of reduction steps for one normal form

        Raises:
            ValueError: If the environment override is not a positive integer
        """
        env_limit = os.getenv("EKLDEG_STEP_LIMIT")
        if env_limit:
            value = int(env_limit)
            if value <= 0:
                raise ValueError(f"EKLDEG_STEP_LIMIT must be positive: {env_limit}")
            return value
        return cls.STEP_LIMIT

    @classmethod
    def get_log_level(cls) -> int:
        """Get the numeric log level, honouring EKLDEG_LOG_LEVEL."""
        name = os.getenv("EKLDEG_LOG_LEVEL", cls.LOG_LEVEL).upper()
        level = logging.getLevelName(name)
        return level if isinstance(level, int) else logging.WARNING

    @classmethod
    def get_field_spec_help(cls) -> str:
        """Describe the accepted field spec strings for CLI help texts.

        Example:
            >>> Config.get_field_spec_help()
            'QQ, RR, Fp:<p>, Qp:<p>'
        """
        return ", ".join(cls.FIELD_SPECS)
