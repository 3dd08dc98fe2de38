"""Exception hierarchy shared by all bdconvex modules."""


class BDConvexError(Exception):
    """Base class for every error raised by this package."""


# -- states ---------------------------------------------------------------

class InvalidStateError(BDConvexError, ValueError):
    """The input does not describe a valid Bell-diagonal state."""


class NegativeProbabilityError(InvalidStateError):
    pass


class NotNormalizedError(InvalidStateError):
    pass


class OutsideTetrahedronError(InvalidStateError):
    pass


class NotHermitianError(InvalidStateError):
    pass


class StateFormatError(BDConvexError, ValueError):
    """Malformed state document (wrong keys, arity or element types)."""


class NotEntangledError(BDConvexError, ValueError):
    pass


class NotSeparableError(BDConvexError, ValueError):
    pass


# -- solvers --------------------------------------------------------------

class SolverError(BDConvexError):
    """A convex solver could not certify an optimum.

    ``solution`` carries the best iterate when one exists.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class InfeasibleError(SolverError):
    pass


class UnboundedError(SolverError):
    pass


class MaxIterationsError(SolverError):
    pass


class NotFeasibleError(BDConvexError, ValueError):
    """A supplied primal or dual point violates its constraints."""


class DimensionMismatchError(BDConvexError, ValueError):
    pass


# -- entropy --------------------------------------------------------------

class NotDistributionError(BDConvexError, ValueError):
    pass


class NoSlaterPointError(BDConvexError, ValueError):
    pass


class NewtonDivergenceError(SolverError):
    pass


class OutOfRangeError(BDConvexError, ValueError):
    pass


class StepOutOfRangeError(OutOfRangeError):
    pass


class MismatchError(BDConvexError, ValueError):
    """A decomposition does not recombine to the state it claims to describe."""
