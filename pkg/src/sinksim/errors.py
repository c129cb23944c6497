class ConfigurationError(ValueError):
    """Raised when a scenario, field, trajectory or parameter set is invalid."""
