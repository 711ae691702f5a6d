"""
Quantization conditions of finite chains, solved for every complex :code:`θ`.

Each condition is rewritten as a polynomial in :code:`z = e^{iθ}` with real coefficients
(ascending order, :mod:`numpy.polynomial.polynomial` convention). Roots come from the companion
matrix; the known spurious factors at :code:`z = ±1` are removed by exact deflation; roots pair up
as :code:`(z, 1/z)` since :code:`θ` and :code:`-θ` describe one wave function, and one
representative per pair is Newton-polished on the undeflated polynomial.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from spinchain import analytic
from spinchain.chain import ChainSpec
from spinchain.config import Tolerances, get_tolerances
from spinchain.errors import ConfigError, ConsistencyError, RegimeError

_LOGGER = logging.getLogger('spinchain.quantization')


class RootClass(Enum):
    EXTENDED = 'Extended'
    LOCALIZED = 'Localized'
    SPURIOUS = 'Spurious'


class RootSource(Enum):
    """ Which quantization condition a root solves."""

    OPEN_CHAIN = 'OpenChain'
    """One excitation, open chain with a defect."""

    CLOSED_CHAIN_NODE = 'ClosedChainNode'
    """One excitation, closed chain, standing waves with a node on the defect."""

    CLOSED_CHAIN_DEFECT = 'ClosedChainDefect'
    """One excitation, closed chain, waves that see the defect (or plane waves when :code:`g = 0`)."""

    BP_SURFACE = 'BPSurface'
    """Bound pair scattered by the defect, nonresonant region."""

    HYBRID = 'Hybrid'
    """Bound pair hybridized with LDPs, resonant region."""


@dataclass(frozen=True)
class ThetaRoot():
    """
    One physically distinct solution :code:`θ` of a quantization condition, canonicalized to
    :code:`Im θ >= 0`.
    """

    theta: complex
    z: complex
    classification: RootClass
    source: RootSource
    energy: float
    residual: float = 0.0

    @property
    def localized(self) -> bool:
        return self.classification == RootClass.LOCALIZED

    def to_dict(self) -> dict:
        return {
            'source': self.source.value,
            'classification': self.classification.value,
            'theta_re': self.theta.real,
            'theta_im': self.theta.imag,
            'z_re': self.z.real,
            'z_im': self.z.imag,
            'energy': self.energy,
            'residual': self.residual,
        }


@dataclass(frozen=True)
class Onset():
    """ A parameter value at which the number of localized roots grows to :code:`count`."""
    parameter: float
    count: int


def _monomial(power:int, coefficient:float=1.0) -> np.ndarray:
    c = np.zeros(power + 1)
    c[power] = coefficient
    return c


def open_chain_polynomial(spec:ChainSpec) -> np.ndarray:
    """
    One-excitation condition of an open chain with the defect on :code:`n0`, multiplied through by
    :code:`J(z²-1)(z-Δ)²z^(N-1)`:

    :code:`J(z²-1)[z^2N (z-Δ)² - (1-Δz)²] - 2gz[z^2N (z-Δ)² + (1-Δz)² - (1-Δz)(z-Δ)(z^(2N-2n0+1) + z^(2n0-1))]`

    Degree :code:`2N+4`; :code:`z = ±1` are double roots.
    """
    N, D, J, g = spec.N, spec.Delta, spec.J, spec.g
    a = np.array([-D, 1.0])              # z - Δ
    b = np.array([1.0, -D])              # 1 - Δz
    a2_z2n = P.polymul(_monomial(2 * N), P.polymul(a, a))
    b2 = P.polymul(b, b)
    ab = P.polymul(a, b)
    cross = P.polyadd(_monomial(2 * N - 2 * spec.n0 + 1), _monomial(2 * spec.n0 - 1))

    first = J * P.polymul([-1.0, 0.0, 1.0], P.polysub(a2_z2n, b2))
    second = 2 * g * P.polymul([0.0, 1.0], P.polysub(P.polyadd(a2_z2n, b2), P.polymul(ab, cross)))
    return P.polysub(first, second)


def closed_chain_polynomial(spec:ChainSpec) -> np.ndarray:
    """
    One-excitation condition of a closed chain for waves touching the defect,
    :code:`J(z²-1)(z^N - 1) - 2gz(z^N + 1)`. Palindromic of degree :code:`N+2`; :code:`z = -1`
    is a root for odd :code:`N`.
    """
    N, J, g = spec.N, spec.J, spec.g
    first = J * P.polymul([-1.0, 0.0, 1.0], P.polysub(_monomial(N), [1.0]))
    second = 2 * g * P.polymul([0.0, 1.0], P.polyadd(_monomial(N), [1.0]))
    return P.polysub(first, second)


def bp_surface_polynomial(spec:ChainSpec) -> np.ndarray:
    """
    Bound pair scattered by the defect. With :code:`b = JΔ - g` the condition reads
    :code:`(g - bz)² z^(2N-4) - (gz - b)²`, degree :code:`2N-2`, antipalindromic, spurious roots :code:`z = ±1`.

    :raises: :any:`RegimeError` at :code:`g = JΔ`, where the leading coefficient vanishes.
    """
    g = spec.g
    b = spec.J * spec.Delta - g
    if b == 0:
        raise RegimeError('g = J*Delta: the bound-pair condition degenerates, use the hybrid condition')
    left = P.polymul(_monomial(2 * spec.N - 4), P.polymul([g, -b], [g, -b]))
    right = P.polymul([-b, g], [-b, g])
    return P.polysub(left, right)


def hybrid_polynomial(spec:ChainSpec) -> np.ndarray:
    """
    Bound pair next to the defect hybridized with LDPs: :code:`z^(2N-2)(2b - Jz)² - (2bz - J)²` with
    :code:`b = JΔ - g`. Degree :code:`2N`, spurious roots :code:`z = ±1`.
    """
    J = spec.J
    b = spec.J * spec.Delta - spec.g
    left = P.polymul(_monomial(2 * spec.N - 2), P.polymul([2 * b, -J], [2 * b, -J]))
    right = P.polymul([-J, 2 * b], [-J, 2 * b])
    return P.polysub(left, right)


def _deflate(coefficients:np.ndarray, factor:Sequence[float], tolerances:Tolerances) -> np.ndarray:
    quotient, remainder = P.polydiv(coefficients, factor)
    scale = np.max(np.abs(coefficients))
    if np.max(np.abs(remainder)) > tolerances.residual_tol * scale:
        raise ConsistencyError(f'Spurious factor {list(factor)} does not divide the quantization polynomial, '
                               f'remainder {np.max(np.abs(remainder)):.3e}')
    return quotient


def _polish(coefficients:np.ndarray, z:complex, steps:int) -> complex:
    derivative = P.polyder(coefficients)
    value = abs(P.polyval(z, coefficients))
    for _ in range(steps):
        slope = P.polyval(z, derivative)
        if slope == 0 or value == 0:
            break
        candidate = z - P.polyval(z, coefficients) / slope
        candidate_value = abs(P.polyval(candidate, coefficients))
        if not candidate_value < value:
            break
        z, value = candidate, candidate_value
    return complex(z)


def _representatives(roots:np.ndarray, pairs:int) -> List[complex]:
    """
    Split roots into :code:`(z, 1/z)` pairs by greedily matching the product closest to 1 and keep
    the member inside the unit circle (upper half-plane on the circle).
    """
    if len(roots) != 2 * pairs:
        raise ConsistencyError(f'Expected {2 * pairs} roots, found {len(roots)}')

    order = np.lexsort((roots.imag, roots.real, -np.abs(np.log(np.abs(roots)))))
    unmatched = list(order)
    chosen = []
    worst = 0.0
    while unmatched:
        i = unmatched.pop(0)
        rest = np.array(unmatched)
        mismatch = np.abs(roots[i] * roots[rest] - 1)
        k = int(np.argmin(mismatch))
        j = unmatched.pop(k)
        worst = max(worst, float(mismatch[k]))

        zi, zj = roots[i], roots[j]
        if abs(abs(zi) - abs(zj)) > 1e-12:
            chosen.append(complex(zi if abs(zi) < abs(zj) else zj))
        else:
            chosen.append(complex(zi if zi.imag >= zj.imag else zj))

    if worst > 1e-4:
        raise ConsistencyError(f'Roots do not come in (z, 1/z) pairs, worst product mismatch {worst:.3e}')
    return chosen


def _canonical_theta(z:complex, tolerances:Tolerances) -> complex:
    theta = -1j * cmath.log(z)
    if theta.imag < 0:
        theta = -theta
    if abs(theta.imag) < tolerances.tol_im:
        return complex(abs(theta.real), abs(theta.imag))
    if theta.real <= -math.pi + 1e-12:
        theta += 2 * math.pi
    return theta


def _classify(theta:complex, tolerances:Tolerances) -> RootClass:
    return RootClass.LOCALIZED if theta.imag >= tolerances.tol_im else RootClass.EXTENDED


def _roots_of(coefficients:np.ndarray,
              deflated:np.ndarray,
              source:RootSource,
              energy_of,
              tolerances:Tolerances) -> List[ThetaRoot]:
    companion = P.polycompanion(deflated)
    raw = np.linalg.eigvals(companion)
    chosen = _representatives(raw, len(raw) // 2)

    scale = float(np.max(np.abs(coefficients)))
    result = []
    for z0 in chosen:
        z = _polish(coefficients, z0, tolerances.newton_steps)
        residual = abs(P.polyval(z, coefficients)) / scale
        if residual >= tolerances.residual_tol:
            raise ConsistencyError(f'{source.value} root z={z} has residual {residual:.3e} >= {tolerances.residual_tol}')
        theta = _canonical_theta(z, tolerances)
        result.append(ThetaRoot(theta=theta,
                                z=z,
                                classification=_classify(theta, tolerances),
                                source=source,
                                energy=float(energy_of(cmath.cos(theta)).real),
                                residual=residual))
    return result


def _spurious(thetas:Iterable[float], source:RootSource, energy_of) -> List[ThetaRoot]:
    return [ThetaRoot(theta=complex(t, 0.0), z=cmath.exp(1j * t), classification=RootClass.SPURIOUS,
                      source=source, energy=float(energy_of(math.cos(t)).real)) for t in thetas]


def _plane_waves(thetas:Iterable[float], source:RootSource, energy_of) -> List[ThetaRoot]:
    return [ThetaRoot(theta=complex(t, 0.0), z=cmath.exp(1j * t), classification=RootClass.EXTENDED,
                      source=source, energy=float(energy_of(math.cos(t)).real)) for t in thetas]


def _sorted(roots:List[ThetaRoot]) -> List[ThetaRoot]:
    return sorted(roots, key=lambda r: (r.source.value, round(r.theta.real, 12), r.theta.imag))


def _expect(roots:List[ThetaRoot], count:int, source:RootSource) -> List[ThetaRoot]:
    physical = [r for r in roots if r.classification != RootClass.SPURIOUS]
    if len(physical) != count:
        raise ConsistencyError(f'{source.value}: expected {count} physically distinct roots, found {len(physical)}')
    return roots


def solve_open_chain(spec:ChainSpec, include_spurious:bool=False, tolerances:Tolerances=None) -> List[ThetaRoot]:
    """
    Solve the one-excitation condition of an open chain.

    :type spec: :any:`ChainSpec`
    :param spec: Open chain configuration.

    :type include_spurious: bool
    :param include_spurious: Also return the removed :code:`θ = 0, π` roots, classified as spurious. |default| :code:`False`

    :type tolerances: :any:`Tolerances`
    :param tolerances: Overrides the active tolerances. |default| :code:`None`

    :raises: :any:`ConfigError` for a closed chain; :any:`ConsistencyError` if the filtered count differs from :code:`N`.

    :returns: :code:`N` roots.
    :rtype: list[:any:`ThetaRoot`]
    """
    if spec.closed:
        raise ConfigError('solve_open_chain needs an open chain')
    tolerances = tolerances or get_tolerances()
    source = RootSource.OPEN_CHAIN
    energy_of = lambda c: spec.eps1 + spec.J * c

    if spec.g == 0 and abs(spec.Delta) == 1:
        # ideal Heisenberg chain: z^2N = 1 with θ = 0 (Δ = 1) or θ = π (Δ = -1) physical
        if spec.Delta > 0:
            thetas = [math.pi * k / spec.N for k in range(spec.N)]
        else:
            thetas = [math.pi * (spec.N - k) / spec.N for k in range(spec.N)]
        _LOGGER.debug(f'{spec}: ideal open chain, {spec.N} plane-wave roots')
        return _sorted(_plane_waves(thetas, source, energy_of))

    coefficients = open_chain_polynomial(spec)
    deflated = _deflate(coefficients, P.polypow([-1.0, 0.0, 1.0], 2), tolerances)
    roots = _roots_of(coefficients, deflated, source, energy_of, tolerances)
    if include_spurious:
        roots += _spurious((0.0, math.pi), source, energy_of)
    _LOGGER.debug(f'{spec}: {sum(r.localized for r in roots)} localized open-chain roots')
    return _sorted(_expect(roots, spec.N, source))


def solve_closed_chain(spec:ChainSpec, include_spurious:bool=False, tolerances:Tolerances=None) -> List[ThetaRoot]:
    """
    Solve the one-excitation conditions of a closed chain: standing waves with a node on the defect,
    :code:`θ = 2πk/N` for :code:`k = 1..⌊(N-1)/2⌋`, plus the roots of the defect condition. For
    :code:`g = 0` the ideal ring plane waves :code:`θ = 2πk/N, k = 0..N-1` are returned, folded into :code:`[0, π]`.

    :raises: :any:`ConfigError` for an open chain; :any:`ConsistencyError` if the count differs from :code:`N`.
    """
    if not spec.closed:
        raise ConfigError('solve_closed_chain needs a closed chain')
    tolerances = tolerances or get_tolerances()
    N = spec.N
    energy_of = lambda c: spec.eps1 + spec.J * c

    if spec.g == 0:
        thetas = [_canonical_theta(cmath.exp(2j * math.pi * k / N), tolerances).real for k in range(N)]
        return _sorted(_plane_waves(thetas, RootSource.CLOSED_CHAIN_DEFECT, energy_of))

    nodes = _plane_waves([2 * math.pi * k / N for k in range(1, (N - 1) // 2 + 1)],
                         RootSource.CLOSED_CHAIN_NODE, energy_of)

    source = RootSource.CLOSED_CHAIN_DEFECT
    coefficients = closed_chain_polynomial(spec)
    deflated = _deflate(coefficients, [1.0, 1.0], tolerances) if N % 2 else coefficients
    roots = _roots_of(coefficients, deflated, source, energy_of, tolerances)
    if include_spurious and N % 2:
        roots += _spurious((math.pi,), source, energy_of)

    localized = [r for r in roots if r.localized]
    if len(localized) > 1:
        raise ConsistencyError(f'Closed chain has at most one defect-localized root, found {len(localized)}')
    return _sorted(_expect(nodes + roots, N, source))


def solve_bp_surface(spec:ChainSpec, include_spurious:bool=False, tolerances:Tolerances=None) -> List[ThetaRoot]:
    """
    Solve the condition for bound pairs scattered by the defect on a closed chain. Energies follow
    :code:`E_BP^(0) + (J/2Δ) cos θ`.

    :raises: :any:`RegimeError` at :code:`g = JΔ` or :code:`Δ = 0`.

    :returns: :code:`N-2` roots; 0, 1 or 2 of them localized depending on :code:`q = (JΔ-g)/g`.
    :rtype: list[:any:`ThetaRoot`]
    """
    if not spec.closed:
        raise ConfigError('solve_bp_surface needs a closed chain')
    tolerances = tolerances or get_tolerances()
    source = RootSource.BP_SURFACE
    center = analytic.bp_band_center(spec)
    energy_of = lambda c: center + spec.J / (2 * spec.Delta) * c

    coefficients = bp_surface_polynomial(spec)
    deflated = _deflate(coefficients, [-1.0, 0.0, 1.0], tolerances)
    roots = _roots_of(coefficients, deflated, source, energy_of, tolerances)
    if include_spurious:
        roots += _spurious((0.0, math.pi), source, energy_of)
    return _sorted(_expect(roots, spec.N - 2, source))


def solve_hybrid(spec:ChainSpec, include_spurious:bool=False, tolerances:Tolerances=None) -> List[ThetaRoot]:
    """
    Solve the condition for the bound pair next to the defect hybridized with LDPs. Energies follow
    :code:`2ε1 + g + J cos θ`; a localized pair appears for :code:`2|JΔ-g| > |J|`.

    :returns: :code:`N-1` roots.
    :rtype: list[:any:`ThetaRoot`]
    """
    if not spec.closed:
        raise ConfigError('solve_hybrid needs a closed chain')
    tolerances = tolerances or get_tolerances()
    source = RootSource.HYBRID
    energy_of = lambda c: 2 * spec.eps1 + spec.g + spec.J * c

    coefficients = hybrid_polynomial(spec)
    deflated = _deflate(coefficients, [-1.0, 0.0, 1.0], tolerances)
    roots = _roots_of(coefficients, deflated, source, energy_of, tolerances)
    if include_spurious:
        roots += _spurious((0.0, math.pi), source, energy_of)
    return _sorted(_expect(roots, spec.N - 1, source))


_SOLVERS = {
    RootSource.OPEN_CHAIN: solve_open_chain,
    RootSource.CLOSED_CHAIN_DEFECT: solve_closed_chain,
    RootSource.CLOSED_CHAIN_NODE: solve_closed_chain,
    RootSource.BP_SURFACE: solve_bp_surface,
    RootSource.HYBRID: solve_hybrid,
}


def solve(spec:ChainSpec, source:Union[RootSource, str, None]=None, **kwargs) -> List[ThetaRoot]:
    """
    Dispatch to the solver of :code:`source`; the one-excitation condition matching the boundary
    when :code:`None`.

    :type source: :any:`RootSource` or str
    :param source: Condition to solve, or its value such as :code:`'BPSurface'`. |default| :code:`None`
    """
    if source is None:
        source = RootSource.CLOSED_CHAIN_DEFECT if spec.closed else RootSource.OPEN_CHAIN
    if isinstance(source, str):
        try:
            source = RootSource(source)
        except ValueError:
            raise ConfigError(f'Unknown root source: {source!r}, expected one of {[s.value for s in RootSource]}')
    return _SOLVERS[source](spec, **kwargs)


def localized_count(roots:Iterable[ThetaRoot]) -> int:
    return sum(1 for r in roots if r.localized)


def defect_root(roots:Sequence[ThetaRoot], spec:ChainSpec) -> Optional[ThetaRoot]:
    """
    Pick the defect-localized one-excitation root. On an open chain with :code:`|Δ| > 1` the two
    localized roots closest to the surface energy :code:`E_s` are set aside first.

    :returns: The localized root closest to :code:`E_d`, or :code:`None` if there is none.
    :rtype: :any:`ThetaRoot`
    """
    if spec.g == 0:
        return None
    candidates = [r for r in roots if r.localized and r.source != RootSource.CLOSED_CHAIN_NODE]

    surface = analytic.surface_state(spec)
    if surface.exists:
        candidates.sort(key=lambda r: abs(r.energy - surface.energy))
        candidates = candidates[2:]

    if not candidates:
        return None
    target = analytic.defect_state(spec).energy
    return min(candidates, key=lambda r: abs(r.energy - target))


def _onsets(parameters:Sequence[float], counts:Sequence[int]) -> List[Onset]:
    onsets = []
    for i in range(1, len(counts)):
        if counts[i] > counts[i - 1]:
            onsets.append(Onset(parameter=(parameters[i] + parameters[i - 1]) / 2, count=counts[i]))
    return onsets


def bp_localized_counts(N:int, q_grid:Iterable[float], J:float=1.0, Delta:float=10.0,
                        tolerances:Tolerances=None) -> List[Tuple[float, int]]:
    """
    Number of localized bound-pair roots for each :code:`q = (JΔ-g)/g`, with :code:`g = JΔ/(1+q)`.
    """
    counts = []
    for q in q_grid:
        if q == -1 or q == 0:
            raise ConfigError(f'q must differ from 0 and -1, found: {q}')
        spec = ChainSpec(N=N, boundary='closed', J=J, Delta=Delta, g=J * Delta / (1 + q))
        counts.append((float(q), localized_count(solve_bp_surface(spec, tolerances=tolerances))))
    return counts


def find_bp_bifurcations(N:int, q_grid:Iterable[float], J:float=1.0, Delta:float=10.0,
                         tolerances:Tolerances=None) -> List[Onset]:
    """
    Scan :code:`q` from large to small :code:`|q|` and report where complex bound-pair roots appear.
    Expected onsets are :code:`|q| = 1` and :code:`|q| = 1 - 2/(N-1)`.

    :returns: One :any:`Onset` per increase of the localized count, located mid-way between grid points.
    :rtype: list[:any:`Onset`]
    """
    grid = sorted(q_grid, key=lambda q: -abs(q))
    counts = bp_localized_counts(N, grid, J, Delta, tolerances)
    return _onsets([abs(q) for q, _ in counts], [c for _, c in counts])


def closed_chain_threshold(N:int, g_grid:Iterable[float], J:float=1.0,
                           tolerances:Tolerances=None) -> Optional[Onset]:
    """
    Smallest :code:`|g|` of the grid at which a closed chain of :code:`N` sites binds an excitation
    to the defect. For odd :code:`N` and :code:`g/J < 0` the expected value is :code:`2/N`.

    :returns: The first onset scanning :code:`|g|` upwards, or :code:`None`.
    :rtype: :any:`Onset`
    """
    grid = sorted(g_grid, key=abs)
    counts = []
    for g in grid:
        spec = ChainSpec(N=N, boundary='closed', J=J, Delta=0.0, g=g)
        counts.append(localized_count(solve_closed_chain(spec, tolerances=tolerances)))
    onsets = _onsets([abs(g) for g in grid], counts)
    return onsets[0] if onsets else None
