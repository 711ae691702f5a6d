"""
Closed-form predictions for magnon, bound-pair (BP) and localized-delocalized pair (LDP) energies
and for the states localized on the defect, on the chain edges and next to the defect.

All functions are pure. Sign-sensitive branches follow the case lists for positive parameters;
any other sign combination is resolved by continuity and reported as
:code:`metadata['branch'] == 'continuity'`.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from spinchain.chain import ChainSpec
from spinchain.errors import ConfigError, RegimeError, UndefinedPairError


class LocalizedKind(Enum):
    DEFECT_ONE_EXC = 'DefectOneExc'
    SURFACE_ONE_EXC = 'SurfaceOneExc'
    BP_DOUBLET_PLUS = 'BPDoubletPlus'
    BP_DOUBLET_MINUS = 'BPDoubletMinus'
    BP_SURFACE = 'BPSurface'
    LDP_HYBRID_SURFACE = 'LDPHybridSurface'


class BandKind(Enum):
    MAGNON = 'Magnon'
    TWO_MAGNON = 'TwoMagnon'
    LDP = 'LDP'
    BP = 'BP'


@dataclass(frozen=True)
class LocalizedStatePrediction():
    """
    A predicted localized state. :code:`energy` and :code:`theta` are :code:`None` unless :code:`exists`.
    """

    kind: LocalizedKind
    exists: bool
    energy: Optional[float] = None
    theta: Optional[complex] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.exists and (self.energy is not None or self.theta is not None):
            raise ConfigError(f'{self.kind.value}: a non-existing state carries no energy or theta')
        if self.exists and not self.theta.imag > 0:
            raise ConfigError(f'{self.kind.value}: a localized state needs Im theta > 0, found: {self.theta}')

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'exists': self.exists,
            'energy': self.energy,
            'theta_re': None if self.theta is None else self.theta.real,
            'theta_im': None if self.theta is None else self.theta.imag,
            **{f'meta_{k}': v for k, v in self.metadata.items()},
        }


@dataclass(frozen=True)
class BandPrediction():
    center: float
    half_width: float
    kind: BandKind

    def __post_init__(self):
        if self.half_width < 0:
            raise ConfigError(f'Band half width must be non-negative, found: {self.half_width}')

    @property
    def low(self) -> float:
        return self.center - self.half_width

    @property
    def high(self) -> float:
        return self.center + self.half_width


def _absent(kind:LocalizedKind, **meta) -> LocalizedStatePrediction:
    return LocalizedStatePrediction(kind=kind, exists=False, metadata=meta)


def _sign(x:float) -> float:
    return 1.0 if x > 0 else -1.0


def magnon_energy(spec:ChainSpec, theta:float) -> float:
    """
    One-excitation dispersion :code:`ε1 + J cos θ`.
    """
    return spec.eps1 + spec.J * math.cos(theta)


def bp_band_center(spec:ChainSpec) -> float:
    """
    :code:`E_BP^(0) = 2ε1 + JΔ + J/2Δ`.
    """
    if spec.Delta == 0:
        raise RegimeError('Bound pairs need Delta != 0')
    return 2 * spec.eps1 + spec.J * spec.Delta + spec.J / (2 * spec.Delta)


def bp_hopping(spec:ChainSpec) -> float:
    """
    Effective hopping of a bound pair, :code:`J/4Δ`.
    """
    if spec.Delta == 0:
        raise RegimeError('Bound pairs need Delta != 0')
    return spec.J / (4 * spec.Delta)


def bp_shift(spec:ChainSpec) -> float:
    """
    Extra energy of the bound pair next to the defect, :code:`δE_BP = Jg/(4Δ(JΔ-g))`.

    :raises: :any:`RegimeError` at :code:`g = JΔ` or :code:`Δ = 0`.
    """
    if spec.Delta == 0:
        raise RegimeError('Bound pairs need Delta != 0')
    mismatch = spec.J * spec.Delta - spec.g
    if mismatch == 0:
        raise RegimeError('g = J*Delta is singular for the bound pair shift, use ldp_hybrid_surface_state')
    return spec.J * spec.g / (4 * spec.Delta * mismatch)


def defect_state(spec:ChainSpec) -> LocalizedStatePrediction:
    """
    One-excitation state bound to the defect in an infinite chain:
    :code:`θ_d = i·asinh|g/J| + π·Θ(-g/J)`, :code:`E_d = ε1 + sgn(g)·√(g²+J²)`.

    :type spec: :any:`ChainSpec`
    :param spec: Chain configuration. Finite-size effects are ignored.

    :returns: The prediction; absent for :code:`g = 0`.
    :rtype: :any:`LocalizedStatePrediction`
    """
    if spec.g == 0:
        return _absent(LocalizedKind.DEFECT_ONE_EXC)

    ratio = spec.g / spec.J
    theta = complex(math.pi if ratio < 0 else 0.0, math.asinh(abs(ratio)))
    energy = spec.eps1 + _sign(spec.g) * math.hypot(spec.g, spec.J)
    return LocalizedStatePrediction(LocalizedKind.DEFECT_ONE_EXC, True, energy, theta, {'branch': 'listed'})


def surface_state(spec:ChainSpec) -> LocalizedStatePrediction:
    """
    One-excitation state bound to an edge of an open chain with :code:`|Δ| > 1`:
    :code:`θ_s = i ln|Δ| + πΘ(-Δ)`, :code:`E_s = ε1 + J(Δ²+1)/2Δ`.
    """
    if spec.closed or abs(spec.Delta) <= 1:
        return _absent(LocalizedKind.SURFACE_ONE_EXC)

    theta = complex(math.pi if spec.Delta < 0 else 0.0, math.log(abs(spec.Delta)))
    energy = spec.eps1 + spec.J * (spec.Delta ** 2 + 1) / (2 * spec.Delta)
    return LocalizedStatePrediction(LocalizedKind.SURFACE_ONE_EXC, True, energy, theta, {'branch': 'listed'})


def bp_dispersion(spec:ChainSpec, theta:float) -> Tuple[float, float]:
    """
    Bound-pair band :code:`E = E_BP^(0) + (J/2Δ) cos θ` and the decrement
    :code:`κ = -ln|cos(θ/2)/Δ|` of the relative wave function. :code:`κ` is infinite at :code:`θ = π`.

    :raises: :any:`RegimeError` for :code:`|Δ| <= 1`; :any:`UndefinedPairError` if :code:`κ < 0`.

    :returns: (energy, kappa)
    :rtype: tuple
    """
    if abs(spec.Delta) <= 1:
        raise RegimeError(f'Bound pairs need |Delta| > 1, found: {spec.Delta}')

    energy = bp_band_center(spec) + spec.J / (2 * spec.Delta) * math.cos(theta)
    ratio = abs(math.cos(theta / 2) / spec.Delta)
    if ratio < 1e-15:
        return energy, math.inf
    kappa = -math.log(ratio)
    if kappa < 0:
        raise UndefinedPairError(f'Decrement {kappa} < 0 at theta={theta}')
    return energy, kappa


def ldp_band(spec:ChainSpec) -> List[Tuple[float, float]]:
    """
    LDP levels of a closed chain: :code:`θ_k = πk/(N-2)`, :code:`k = 1..N-3`,
    :code:`E_k = 2ε1 + g + J cos θ_k + J²/2g`.

    :raises: :any:`RegimeError` for :code:`g = 0` (no defect, no LDPs) or an open chain.

    :returns: List of :code:`(theta_k, energy)` in order of :code:`k`.
    :rtype: list[tuple]
    """
    if not spec.closed:
        raise RegimeError(f'LDP band levels are derived for closed chains, found: {spec.boundary.value}')
    if spec.g == 0:
        raise RegimeError('LDPs need a defect, found g = 0')
    shift = spec.J ** 2 / (2 * spec.g)
    levels = []
    for k in range(1, spec.N - 2):
        theta = math.pi * k / (spec.N - 2)
        levels.append((theta, 2 * spec.eps1 + spec.g + spec.J * math.cos(theta) + shift))
    return levels


def doublet(spec:ChainSpec) -> Tuple[LocalizedStatePrediction, LocalizedStatePrediction]:
    """
    Symmetric and antisymmetric states of a bound pair sitting on the defect:
    :code:`E_D^(±) = 2ε1 + g + JΔ + J(2JΔ+g)/(4Δ(JΔ+g)) ± J²/(4(JΔ+g))`.
    :code:`theta` is the decrement of the tail along the LDP direction,
    :code:`cos θ = (E - 2ε1 - g)/J`.

    :raises: :any:`RegimeError` for :code:`|JΔ+g| <= |J|` or a level inside the LDP band.

    :returns: (plus, minus)
    """
    J, D, g = spec.J, spec.Delta, spec.g
    total = J * D + g
    if abs(total) <= abs(J) or D == 0:
        raise RegimeError(f'Doublet needs |J*Delta + g| > |J|, found {abs(total)}')

    center = 2 * spec.eps1 + g + J * D + J * (2 * J * D + g) / (4 * D * total)
    half_split = J ** 2 / (4 * total)

    states = []
    for kind, energy in ((LocalizedKind.BP_DOUBLET_PLUS, center + half_split),
                         (LocalizedKind.BP_DOUBLET_MINUS, center - half_split)):
        detuning = (energy - 2 * spec.eps1 - g) / J
        if abs(detuning) <= 1:
            raise RegimeError(f'Doublet level {energy} lies inside the LDP band')
        theta = complex(math.pi if detuning < 0 else 0.0, math.acosh(abs(detuning)))
        states.append(LocalizedStatePrediction(kind, True, energy, theta, {'splitting': abs(2 * half_split)}))
    return states[0], states[1]


def bp_surface_state(spec:ChainSpec) -> LocalizedStatePrediction:
    """
    Bound pair localized next to the defect, away from resonance.

    :code:`Im θ = ln|g/(JΔ-g)|`; it exists when that is positive. Re θ is 0 when
    :code:`q = (JΔ-g)/g > 0` and π when :code:`q < 0`.
    :code:`E = E_BP^(0) + δE_BP + (J/4Δ)²/δE_BP`.

    :raises: :any:`RegimeError` at :code:`g = JΔ`.
    """
    shift = bp_shift(spec)
    if spec.g == 0:
        return _absent(LocalizedKind.BP_SURFACE)

    q = (spec.J * spec.Delta - spec.g) / spec.g
    im_theta = -math.log(abs(q))
    listed = spec.g > 0 and spec.J * spec.Delta > 0
    branch = 'listed' if listed else 'continuity'
    if not im_theta > 0:
        return _absent(LocalizedKind.BP_SURFACE, q=q, branch=branch)

    hop = bp_hopping(spec)
    energy = bp_band_center(spec) + shift + hop ** 2 / shift
    theta = complex(0.0 if q > 0 else math.pi, im_theta)
    return LocalizedStatePrediction(LocalizedKind.BP_SURFACE, True, energy, theta,
                                    {'q': q, 'shift': shift, 'branch': branch})


def ldp_hybrid_surface_state(spec:ChainSpec) -> LocalizedStatePrediction:
    """
    Next-to-defect bound pair hybridized with LDPs in the resonant region:
    :code:`Im θ = ln|2(JΔ-g)/J|`, exists iff :code:`2|JΔ-g| > |J|`,
    :code:`E = 2ε1 + JΔ + (J/2)²/(JΔ-g)`.
    """
    mismatch = spec.J * spec.Delta - spec.g
    x = 2 * mismatch / spec.J
    listed = spec.g > 0 and spec.J > 0 and spec.Delta > 0
    branch = 'listed' if listed else 'continuity'
    if not abs(x) > 1:
        return _absent(LocalizedKind.LDP_HYBRID_SURFACE, x=x, branch=branch)

    energy = 2 * spec.eps1 + spec.J * spec.Delta + (spec.J / 2) ** 2 / mismatch
    theta = complex(math.pi if x < 0 else 0.0, math.log(abs(x)))
    return LocalizedStatePrediction(LocalizedKind.LDP_HYBRID_SURFACE, True, energy, theta,
                                    {'x': x, 'branch': branch})


def antiresonance_coupling(spec:ChainSpec, theta:float) -> float:
    """
    LDP to BP coupling factor :code:`sin θ · cos θ · (JΔ - g - J cos θ)`, up to normalization.
    It vanishes at :code:`cos θ = (JΔ-g)/J`.
    """
    c = math.cos(theta)
    return math.sin(theta) * c * (spec.J * spec.Delta - spec.g - spec.J * c)


def band_predictions(spec:ChainSpec, excitations:int) -> List[BandPrediction]:
    """
    Bands of extended states of a sector: the magnon band for one excitation; the two-magnon band,
    the LDP band (:code:`g != 0`, shifted by :code:`J²/2g`) and the BP band (:code:`|Δ| > 1`) for two.
    """
    J = abs(spec.J)
    if excitations == 1:
        return [BandPrediction(spec.eps1, J, BandKind.MAGNON)]
    if excitations != 2:
        raise ConfigError(f'Only the 1- and 2-excitation sectors are supported, found: {excitations!r}')

    bands = [BandPrediction(2 * spec.eps1, 2 * J, BandKind.TWO_MAGNON)]
    if spec.g != 0:
        bands.append(BandPrediction(2 * spec.eps1 + spec.g + spec.J ** 2 / (2 * spec.g), J, BandKind.LDP))
    if abs(spec.Delta) > 1:
        bands.append(BandPrediction(bp_band_center(spec), abs(spec.J / (2 * spec.Delta)), BandKind.BP))
    return bands


def localized_predictions(spec:ChainSpec) -> List[LocalizedStatePrediction]:
    """
    Every two-excitation localized state predicted for the configuration, skipping formulas
    whose regime does not hold.
    """
    predictions = []
    try:
        predictions.extend(doublet(spec))
    except RegimeError:
        pass
    try:
        predictions.append(bp_surface_state(spec))
    except RegimeError:
        pass
    predictions.append(ldp_hybrid_surface_state(spec))
    return [p for p in predictions if p.exists]
