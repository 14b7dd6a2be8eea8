"""Errors raised by the filter-combination search."""
from filtersem.core.exceptions import ConfigurationError


class GAConfigurationError(ConfigurationError):
    """Search hyperparameters that cannot run."""
