"""
Post-processing of exact spectra and propagations: band assignment, localization fits and the
antiresonance diagnostics.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from spinchain import analytic
from spinchain.analytic import BandKind, LocalizedKind
from spinchain.chain import ChainSpec, SectorBasis, build_basis, build_hamiltonian
from spinchain.config import Tolerances, get_tolerances
from spinchain.eigensolver import EigenDecomposition, EvolutionTrace, eigh
from spinchain.errors import ConfigError, ConsistencyError, InsufficientSupportError, MissingObservableError

_LOGGER = logging.getLogger('spinchain.analysis')


@dataclass(frozen=True)
class Band():
    """
    Eigenvalues that fell into one window. A merged band carries every kind whose windows overlap.
    """

    kinds: Tuple[BandKind, ...]
    indices: Tuple[int, ...]
    low: float
    high: float
    window: Tuple[float, float]

    @property
    def merged(self) -> bool:
        return len(self.kinds) > 1

    @property
    def name(self) -> str:
        return '+'.join(k.value for k in self.kinds)


@dataclass(frozen=True)
class LocalizedLevel():
    index: int
    energy: float
    kind: LocalizedKind
    prediction: float

    @property
    def residual(self) -> float:
        return abs(self.energy - self.prediction)


@dataclass(frozen=True)
class BandReport():
    """
    Partition of the eigenvalue indices of a two-excitation spectrum into bands, matched localized
    levels and left-overs. :code:`widening` is the margin the windows were widened by.
    """

    bands: Tuple[Band, ...]
    localized_levels: Tuple[LocalizedLevel, ...]
    unassigned: Tuple[int, ...]
    widening: float

    @property
    def merged(self) -> bool:
        return any(b.merged for b in self.bands)

    def band(self, kind:BandKind) -> Optional[Band]:
        for b in self.bands:
            if kind in b.kinds:
                return b
        return None

    def level(self, kind:LocalizedKind) -> Optional[LocalizedLevel]:
        for level in self.localized_levels:
            if level.kind == kind:
                return level
        return None

    def to_dict(self) -> dict:
        return {
            'merged': self.merged,
            'widening': self.widening,
            'bands': [{'name': b.name, 'low': b.low, 'high': b.high, 'levels': len(b.indices)} for b in self.bands],
            'localized': [{'kind': level.kind.value, 'index': level.index, 'energy': level.energy,
                           'prediction': level.prediction, 'residual': level.residual}
                          for level in self.localized_levels],
            'unassigned': list(self.unassigned),
        }


@dataclass(frozen=True)
class LocalizationMeasure():
    """
    Decay of an eigenvector away from a site (one excitation) or pair of sites (two excitations).
    """

    im_theta_fit: float
    ipr: float
    peak_site: Tuple[int, ...]
    re_theta_flag: float
    extended: bool
    support: int = field(default=0, compare=False)


class AntiresonanceMetric(NamedTuple):
    leak_bp: float
    leak_ldp: float


def _widening(spec:ChainSpec, tolerances:Tolerances) -> float:
    return tolerances.band_widening * abs(spec.J) / max(abs(spec.Delta), 1.0)


def classify_bands(decomp:EigenDecomposition, spec:ChainSpec, tolerances:Tolerances=None) -> BandReport:
    """
    Assign every eigenvalue of a two-excitation spectrum to the TwoMagnon, LDP or BP window
    (each widened by :code:`band_widening·|J|/|Δ|`), or to the nearest predicted localized state.

    Overlapping windows are merged into one band carrying both kinds.

    :type decomp: :any:`EigenDecomposition`
    :param decomp: Two-excitation spectrum; vectors are not needed.

    :type spec: :any:`ChainSpec`
    :param spec: The configuration the spectrum belongs to.

    :raises: :any:`ConsistencyError` if the partition does not cover every index exactly once.

    :rtype: :any:`BandReport`
    """
    tolerances = tolerances or get_tolerances()
    widen = _widening(spec, tolerances)

    windows = sorted(([(p.kind,), p.low - widen, p.high + widen] for p in analytic.band_predictions(spec, 2)),
                     key=lambda w: w[1])
    merged = []
    for window in windows:
        if merged and window[1] <= merged[-1][2]:
            merged[-1][0] = merged[-1][0] + window[0]
            merged[-1][2] = max(merged[-1][2], window[2])
        else:
            merged.append(window)
    if any(len(w[0]) > 1 for w in merged):
        _LOGGER.info(f'{spec}: overlapping band windows merged: {[w[0] for w in merged if len(w[0]) > 1]}')

    members = [[] for _ in merged]
    outside = []
    for i, value in enumerate(decomp.values):
        for slot, (_, low, high) in enumerate(merged):
            if low <= value <= high:
                members[slot].append(i)
                break
        else:
            outside.append(i)

    bands = []
    for (kinds, low, high), indices in zip(merged, members):
        if indices:
            values = decomp.values[indices]
            bands.append(Band(kinds=tuple(kinds), indices=tuple(indices), low=float(values.min()),
                              high=float(values.max()), window=(low, high)))

    predictions = analytic.localized_predictions(spec)
    levels, unassigned = [], []
    for i in outside:
        value = float(decomp.values[i])
        nearest = min(predictions, key=lambda p: abs(p.energy - value), default=None)
        if nearest is not None and abs(nearest.energy - value) <= widen:
            levels.append(LocalizedLevel(index=i, energy=value, kind=nearest.kind, prediction=nearest.energy))
        else:
            unassigned.append(i)

    covered = sorted([i for b in bands for i in b.indices] + [l.index for l in levels] + unassigned)
    if covered != list(range(decomp.dim)):
        raise ConsistencyError(f'Band report does not partition the {decomp.dim} eigenvalues')

    return BandReport(bands=tuple(bands), localized_levels=tuple(levels), unassigned=tuple(unassigned), widening=widen)


def _basis_for(vector:np.ndarray, spec:ChainSpec) -> SectorBasis:
    if len(vector) == spec.N:
        return build_basis(spec, 1)
    if len(vector) == spec.N * (spec.N - 1) // 2:
        return build_basis(spec, 2)
    raise ConfigError(f'Vector of length {len(vector)} belongs to no sector of a {spec.N}-site chain')


def _state_distance(spec:ChainSpec, state:Tuple[int, ...], around:Tuple[int, ...]) -> int:
    if len(state) == 1:
        return spec.distance(state[0], around[0])
    (n, m), (a, b) = state, around
    return min(max(spec.distance(n, a), spec.distance(m, b)),
               max(spec.distance(n, b), spec.distance(m, a)))


def measure_localization(vector:np.ndarray, spec:ChainSpec, around:Union[int, Sequence[int]],
                         basis:SectorBasis=None, tolerances:Tolerances=None) -> LocalizationMeasure:
    """
    Fit :code:`ln|a|` against the distance from :code:`around`. For each distance the largest
    amplitude is used; on two excitations the distance of a pair is the larger of the two site
    distances. Closed chains use the ring metric.

    :type vector: numpy.ndarray
    :param vector: Normalized eigenvector in the sector basis.

    :type around: int or tuple
    :param around: Site, or pair of sites, the state is expected to be localized on.

    :raises: :any:`InsufficientSupportError` if fewer than 3 distances carry amplitude above the floor.

    :rtype: :any:`LocalizationMeasure`
    """
    tolerances = tolerances or get_tolerances()
    vector = np.real_if_close(np.asarray(vector))
    basis = basis or _basis_for(vector, spec)
    around = (around,) if isinstance(around, (int, np.integer)) else tuple(around)
    if len(around) != basis.excitations:
        raise ConfigError(f'Reference {around} does not match the {basis.excitations}-excitation sector')

    magnitude = np.abs(vector)
    weights = magnitude ** 2
    ipr = float(np.sum(weights ** 2) / np.sum(weights) ** 2)
    peak_site = basis.states[int(np.argmax(magnitude))]

    envelope: Dict[int, Tuple[float, float]] = {}
    for state, amplitude in zip(basis.states, vector):
        if abs(amplitude) <= tolerances.amplitude_floor:
            continue
        d = _state_distance(spec, state, around)
        if d not in envelope or abs(amplitude) > abs(envelope[d][0]):
            envelope[d] = (amplitude, abs(amplitude))

    if len(envelope) < 3:
        raise InsufficientSupportError(f'Only {len(envelope)} distances carry amplitude above {tolerances.amplitude_floor}')

    distances = np.array(sorted(envelope))
    logs = np.log([envelope[d][1] for d in distances])
    slope, _ = np.polyfit(distances, logs, 1)
    im_theta_fit = float(abs(slope))

    signs = np.sign(np.real([envelope[d][0] for d in distances]))
    consecutive = distances[1:] - distances[:-1] == 1
    flips = (signs[1:] != signs[:-1])[consecutive]
    re_theta_flag = math.pi if flips.size and flips.mean() > 0.5 else 0.0

    reliable = im_theta_fit * distances[-1] >= 4
    extended = im_theta_fit < tolerances.extended_fit or (not reliable and ipr < 4.0 / len(vector))
    return LocalizationMeasure(im_theta_fit=im_theta_fit, ipr=ipr, peak_site=tuple(peak_site),
                               re_theta_flag=re_theta_flag, extended=bool(extended), support=len(distances))


def _observable(trace:EvolutionTrace, spec:ChainSpec, pair:Tuple[int, int]) -> np.ndarray:
    target = spec.pair(*pair)
    for key, series in trace.observables.items():
        if len(key) == 2 and spec.pair(*key) == target:
            return series
    raise MissingObservableError(f'Trace has no observable for pair {target}')


def antiresonance_metric(trace:EvolutionTrace, n0:int=None) -> AntiresonanceMetric:
    """
    Largest occupations over the trace of the pair two sites past the start,
    :code:`|a(n0+2, n0+3)|²`, and of the LDP configuration :code:`|a(n0, n0+2)|²`.

    :raises: :any:`MissingObservableError` if the trace lacks either observable.

    :returns: :code:`(leak_bp, leak_ldp)`
    """
    spec = trace.spec
    if spec is None:
        raise MissingObservableError('Trace carries no chain spec to locate the defect on')
    n0 = spec.n0 if n0 is None else n0
    leak_bp = float(np.max(_observable(trace, spec, (n0 + 2, n0 + 3))))
    leak_ldp = float(np.max(_observable(trace, spec, (n0, n0 + 2))))
    return AntiresonanceMetric(leak_bp=leak_bp, leak_ldp=leak_ldp)


def smooth(times:np.ndarray, series:np.ndarray, window:float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Moving average over :code:`window` time units; returns the centers and averaged values.
    """
    if len(times) < 2:
        return times, series
    step = float(times[1] - times[0])
    width = max(1, int(round(window / step)))
    if width >= len(series):
        return times, series
    kernel = np.ones(width) / width
    averaged = np.convolve(series, kernel, mode='valid')
    centers = np.convolve(times, kernel, mode='valid')
    return centers, averaged


def oscillation_period(trace:EvolutionTrace, pair:Tuple[int, int], window:float=None,
                       rebound:float=0.5) -> Optional[float]:
    """
    Period of the slow oscillation of an occupation: twice the time of the first minimum of the
    series averaged over the fast oscillations.

    The period is undefined when the occupation decays onto a plateau: ripples on the plateau make
    minima, but the series never comes back. A minimum only counts if the averaged series later
    recovers at least :code:`rebound` of the drop from its start.

    :type window: float
    :param window: Averaging window. |default| :code:`2π/|J|`

    :type rebound: float
    :param rebound: Fraction of the drop that must be recovered after the minimum. |default| :code:`0.5`

    :returns: The period, or :code:`None` if the averaged series does not oscillate inside the trace.
    """
    spec = trace.spec
    series = _observable(trace, spec, pair) if spec is not None else trace.observables[tuple(pair)]
    window = 2 * math.pi / abs(spec.J) if window is None else window
    centers, averaged = smooth(trace.times, series, window)
    for i in range(1, len(averaged) - 1):
        if averaged[i] < averaged[i - 1] and averaged[i] <= averaged[i + 1]:
            drop = averaged[0] - averaged[i]
            if drop > 0 and np.max(averaged[i:]) - averaged[i] >= rebound * drop:
                return float(2 * centers[i])
            return None
    return None


def finite_size_series(spec:ChainSpec, sizes:Iterable[int], backend:str='native',
                       tolerances:Tolerances=None) -> Dict[LocalizedKind, List[Tuple[int, float]]]:
    """
    Residual between the exact level and the prediction of every matched localized state as the
    chain grows. The defect stays at the same relative position.

    :returns: For each localized kind, :code:`(N, residual)` in order of :code:`N`.
    """
    series: Dict[LocalizedKind, List[Tuple[int, float]]] = {}
    for N in sorted(sizes):
        n0 = max(1, min(N, round(spec.n0 * N / spec.N)))
        sized = spec.with_changes(N=N, n0=n0)
        decomp = eigh(build_hamiltonian(sized, 2), vectors=False, backend=backend)
        report = classify_bands(decomp, sized, tolerances)
        for level in report.localized_levels:
            series.setdefault(level.kind, []).append((N, level.residual))
    return series


def classify_one_excitation(decomp:EigenDecomposition, spec:ChainSpec, tolerances:Tolerances=None) -> BandReport:
    """
    One-excitation counterpart of :func:`classify_bands`: the magnon window, then the defect and
    surface predictions for levels outside of it.
    """
    tolerances = tolerances or get_tolerances()
    widen = _widening(spec, tolerances)
    magnon = analytic.band_predictions(spec, 1)[0]
    low, high = magnon.low - widen, magnon.high + widen

    inside = [i for i, v in enumerate(decomp.values) if low <= v <= high]
    predictions = [p for p in (analytic.defect_state(spec), analytic.surface_state(spec)) if p.exists]
    levels, unassigned = [], []
    taken = set(inside)
    for i in (i for i in range(decomp.dim) if i not in taken):
        value = float(decomp.values[i])
        nearest = min(predictions, key=lambda p: abs(p.energy - value), default=None)
        if nearest is not None and abs(nearest.energy - value) <= widen:
            levels.append(LocalizedLevel(index=i, energy=value, kind=nearest.kind, prediction=nearest.energy))
        else:
            unassigned.append(i)

    bands = ()
    if inside:
        values = decomp.values[inside]
        bands = (Band(kinds=(BandKind.MAGNON,), indices=tuple(inside), low=float(values.min()),
                      high=float(values.max()), window=(low, high)),)
    return BandReport(bands=bands, localized_levels=tuple(levels), unassigned=tuple(unassigned), widening=widen)
