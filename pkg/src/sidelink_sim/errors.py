"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all simulator-specific errors."""


class ConfigError(SimulationError):
    """Invalid or inconsistent configuration.

    ``key`` names the offending configuration key so callers (and the CLI)
    can point the user at the exact line to fix.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class ChannelModelError(SimulationError):
    """Channel model evaluated outside its validity region."""


class CapacityExceededError(SimulationError):
    """Offered traffic cannot be served by any configured MCS or slot grid."""


class MetricsError(SimulationError):
    """Metric aggregation is undefined for the given inputs."""
