"""Exception hierarchy shared by all qszilard modules."""


class QszilardError(Exception):
    """Base class for all errors raised by this package."""


class InvalidStateError(QszilardError):
    """A matrix failed density-matrix validation (hermiticity, trace or positivity)."""


class InvalidBlochError(QszilardError):
    """A Bloch vector lies outside the unit ball (beyond tolerance)."""


class InvalidParamError(QszilardError):
    """A physical parameter is outside its allowed range."""


class NonDiagonalReducedError(QszilardError):
    """The reduced working-medium state carries transverse Bloch components."""


class DecompositionMismatchError(QszilardError):
    """A decomposition was built for a different Gibbs parameter than the state's."""


class InvalidStrategyError(QszilardError):
    """Strategy weights are negative or do not sum to one."""


class InfeasibleConstraintError(QszilardError):
    """The hidden-state ensemble constraints admit no solution."""


class NoConvergenceError(QszilardError):
    """An iterative solver exceeded its iteration budget."""


class InvalidConfigError(QszilardError):
    """A sampling configuration value is out of range."""
