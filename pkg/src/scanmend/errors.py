"""Exception types shared across the package."""


class PgmParseError(ValueError):
    """Malformed PGM header or truncated pixel payload."""


class UnsupportedPgmError(PgmParseError):
    """Structurally valid PGM that this library does not handle (e.g. maxval != 255)."""


class ShapeError(ValueError):
    """Operand dimensions or channel counts do not match."""


class WeightFormatError(ValueError):
    """Weight blob has a bad magic/version or is truncated."""


class ModelValidationError(ValueError):
    """Deserialized layers do not satisfy the declared architecture."""


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, lr: float):
        super().__init__(f"non-finite training loss at epoch {epoch} (lr={lr:g})")
        self.epoch = epoch
        self.lr = lr


class ConfigError(ValueError):
    """Invalid or incomplete run configuration (CLI level)."""
