
class SpinChainError(RuntimeError):
    """ Base class of every error raised by spinchain."""
    pass


class ConfigError(SpinChainError, ValueError):
    """ Raised when a chain spec, run config or sweep grid is invalid."""
    pass


class RegimeError(ConfigError):
    """ Raised when an analytic formula is evaluated outside of the regime it holds in."""
    pass


class UndefinedPairError(RegimeError):
    """ Raised when a bound pair would have a negative decrement."""
    pass


class MissingObservableError(ConfigError):
    """ Raised when a trace lacks the observables a metric is defined on."""
    pass


class NumericalError(SpinChainError):
    """ Base class of numerical failures."""
    pass


class ConvergenceError(NumericalError):
    """ Raised when the eigensolver exceeds its iteration cap."""
    pass


class ConsistencyError(NumericalError):
    """ Raised when an internal invariant does not hold, eg. a root count mismatch."""
    pass


class InsufficientSupportError(NumericalError):
    """ Raised when too few amplitudes are above the floor to fit a decay."""
    pass


class InvalidNodeError(SpinChainError):
    """ Raised when invalid node (inlet or outlet) is provided."""
    pass
