"""Exception types shared across the package."""


class DomainError(ValueError):
    """Parameter outside the open interval a closed-form expression needs."""


class DegenerateSpinorError(ValueError):
    """Eigenspinor could not be normalized (vanishing norm)."""


class RingSizeError(ValueError):
    """Ring too small for the requested transform or propagation time."""


class WindowLimitError(RuntimeError):
    """Evolution would grow the dense window past the configured cap."""


class BoundaryLeakError(RuntimeError):
    """Envelope amplitude reached the edge of a non-periodic grid."""


class PacketSeparationError(RuntimeError):
    """Distribution does not split into the assumed number of packets."""


class InvalidSpecError(ValueError):
    """Initial-condition specification violates its own invariants."""


class NonUniformCoinError(ValueError):
    """State's coin part varies from site to site; projection undefined."""


class TransientError(ValueError):
    """Flatness metrics requested before the plateau has formed."""


class SchemaError(ValueError):
    """File or config does not match the expected schema."""
