"""Exception types shared across the package."""


class EnneperError(Exception):
    """Base class for every error raised by this package."""


class SingularPoint(EnneperError):
    def __init__(self, z, what="singular point"):
        self.z = z
        super().__init__(f"{what} at z={z!r}")


class DomainError(EnneperError):
    """Evaluation landed exactly on a declared branch cut."""

    def __init__(self, z, what="branch cut"):
        self.z = z
        super().__init__(f"z={z!r} lies on a {what}")


class OutOfRange(EnneperError, ValueError):
    pass


class DegeneratePlanarPart(EnneperError):
    pass


class DilatationMismatch(EnneperError):
    def __init__(self, z, nu_i, nu_j):
        self.z, self.nu_i, self.nu_j = z, nu_i, nu_j
        super().__init__(
            f"dilatations differ at z={z!r}: {nu_i!r} vs {nu_j!r} "
            f"(|diff|={abs(nu_i - nu_j):.3e})"
        )


class ZeroPlanarSum(EnneperError):
    pass


class EmptyDomainIntersection(EnneperError):
    pass


class ZeroPitch(EnneperError, ValueError):
    pass


class InsideConvergenceRadius(EnneperError, ValueError):
    pass


class PathThroughSingularity(EnneperError):
    pass


class NonremovableSingularity(EnneperError):
    pass


class DegenerateGaussMap(EnneperError):
    pass


class EmptyMesh(EnneperError):
    pass


class StencilHitsSingularity(EnneperError):
    pass


class LoopHitsSingularity(EnneperError):
    pass


class ConfigError(EnneperError, ValueError):
    pass


class ExpressionParseError(ConfigError):
    pass


class IoError(EnneperError, OSError):
    pass
