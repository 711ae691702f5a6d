import dataclasses
import logging
import os
from dataclasses import dataclass

_LOGGER = logging.getLogger('spinchain.config')


@dataclass(frozen=True)
class Tolerances():
    """
    Numeric knobs shared by the quantization, eigensolver and analysis modules.
    """

    tol_im: float = 1e-9
    """Roots with :code:`|Im θ|` below this are classified as extended."""

    residual_tol: float = 1e-8
    """Relative polynomial residual every accepted root must satisfy."""

    band_widening: float = 3.0
    """Band windows are widened by :code:`band_widening·|J|/|Δ|`."""

    amplitude_floor: float = 1e-12
    """Amplitudes below this are ignored by localization fits."""

    extended_fit: float = 0.05
    """Fitted :code:`Im θ` below this flags a state as extended."""

    norm_tol: float = 1e-10
    """Allowed deviation of :code:`‖ψ0‖` from 1."""

    newton_steps: int = 50
    """Cap on Newton polishing iterations per root."""

    workers: int = 1
    """Number of worker threads used by sweeps."""

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_ENV_OVERRIDES = {
    'SPINCHAIN_TOL_IM': ('tol_im', float),
    'SPINCHAIN_RESIDUAL_TOL': ('residual_tol', float),
    'SPINCHAIN_WORKERS': ('workers', int),
}

_TOLERANCES = Tolerances()


def get_tolerances() -> Tolerances:
    """
    :returns: The tolerances currently in use.
    :rtype: :any:`Tolerances`
    """
    return _TOLERANCES


def set_tolerances(**overrides) -> Tolerances:
    """
    Replace some of the active tolerances.

    :raises: :any:`ConfigError` if an unknown knob or a non-positive value is given.

    :returns: The new active tolerances.
    :rtype: :any:`Tolerances`
    """
    from spinchain.errors import ConfigError

    global _TOLERANCES
    known = {f.name for f in dataclasses.fields(Tolerances)}
    for key, value in overrides.items():
        if key not in known:
            raise ConfigError(f'Unknown tolerance: {key}')
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            raise ConfigError(f'Tolerance {key} must be a positive number, found: {value!r}')

    _TOLERANCES = dataclasses.replace(_TOLERANCES, **overrides)
    _LOGGER.debug(f'Tolerances set to: {_TOLERANCES}')
    return _TOLERANCES


def reset_tolerances() -> Tolerances:
    global _TOLERANCES
    _TOLERANCES = Tolerances()
    return _TOLERANCES


def initialise():
    from spinchain.misc.logs import make_handler

    default_logger = logging.getLogger('spinchain')
    if not any(getattr(h, '_spinchain_default', False) for h in default_logger.handlers):
        stream_handler = make_handler()
        stream_handler._spinchain_default = True
        default_logger.addHandler(stream_handler)

    default_logger.setLevel(logging.WARNING)

    overrides = {}
    for variable, (name, cast) in _ENV_OVERRIDES.items():
        raw = os.environ.get(variable, '')
        if raw == '':
            continue
        try:
            overrides[name] = cast(raw)
        except ValueError:
            default_logger.warning(f'Ignoring {variable}={raw!r}: expected {cast.__name__}.')

    if overrides:
        try:
            set_tolerances(**overrides)
        except ValueError as e:
            default_logger.warning(f'Ignoring environment tolerances: {e}')
