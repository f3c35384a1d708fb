"""Exception types shared across the simulator."""


class ParameterError(ValueError):
    """A numeric argument violates its precondition (e.g. non-positive variance)."""


class ConfigurationError(ValueError):
    """A scenario/experiment configuration is internally inconsistent."""


class FramingError(ValueError):
    """Bit-block length does not match the modulation framing."""
