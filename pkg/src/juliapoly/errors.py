"""Exception types shared across the toolkit."""


class ConfigError(ValueError):
    """Invalid configuration, domain description, or parameter."""


class NumericalError(RuntimeError):
    """A numerical stage failed (non-convergence, residual breach, ...).

    ``stage`` names the failing stage so the CLI can report it.
    """

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")
