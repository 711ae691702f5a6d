"""
Inlets verifying root counts, bifurcations and thresholds of the quantization conditions.
"""
import logging
from typing import List

import numpy as np

from spinchain.chain import ChainSpec
from spinchain.errors import NumericalError
from spinchain.inlet import Inlet
from spinchain.quantization import (RootSource, closed_chain_threshold, find_bp_bifurcations,
                                    localized_count, solve)

_LOGGER = logging.getLogger('spinchain.census_inlets')

EXPECTED_COUNTS = {
    RootSource.OPEN_CHAIN: lambda N: N,
    RootSource.CLOSED_CHAIN_DEFECT: lambda N: N,
    RootSource.BP_SURFACE: lambda N: N - 2,
    RootSource.HYBRID: lambda N: N - 1,
}

_SOURCE_ORDER = list(EXPECTED_COUNTS)


def draw_spec(source:RootSource, N:int, rng:np.random.Generator, J:float=1.0) -> ChainSpec:
    """
    Random configuration inside the regime of a condition.
    """
    if source == RootSource.OPEN_CHAIN:
        return ChainSpec(N=N, boundary='open', J=J, Delta=rng.uniform(-4, 4), g=rng.uniform(-4, 4),
                         n0=int(rng.integers(1, N + 1)))
    if source == RootSource.CLOSED_CHAIN_DEFECT:
        return ChainSpec(N=N, boundary='closed', J=J, Delta=rng.uniform(-4, 4), g=rng.uniform(-4, 4),
                         n0=int(rng.integers(1, N + 1)))

    delta = rng.uniform(2, 20)
    if source == RootSource.BP_SURFACE:
        ratio = rng.uniform(0.05, 3.0)
        while abs(ratio - 1) < 0.05:
            ratio = rng.uniform(0.05, 3.0)
        return ChainSpec(N=N, boundary='closed', J=J, Delta=delta, g=ratio * J * delta)
    return ChainSpec(N=N, boundary='closed', J=J, Delta=delta, g=J * delta - rng.uniform(-6, 6) * J / 2)


class CensusInlet(Inlet):
    """
    Solve one condition for several random configurations of an :code:`N`-site chain and compare
    the number of physically distinct roots with the expected one.
    """

    def __init__(self, source:RootSource, N:int, draws:int=10, seed:int=0, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.source = source
        self.N = N
        self.draws = draws
        self.seed = seed

    def specs(self) -> List[ChainSpec]:
        """ The drawn configurations; the same for every call."""
        rng = np.random.default_rng([self.seed, self.N, _SOURCE_ORDER.index(self.source)])
        return [draw_spec(self.source, self.N, rng) for _ in range(self.draws)]

    def pull(self, update):
        expected = EXPECTED_COUNTS[self.source](self.N)
        rows = []
        for draw, spec in enumerate(self.specs()):
            row = {'check': 'count', 'source': self.source.value, 'N': self.N, 'draw': draw,
                   'Delta': spec.Delta, 'g': spec.g, 'n0': spec.n0, 'expected': expected,
                   'found': None, 'localized': None, 'ok': False, 'error': ''}
            try:
                roots = solve(spec, self.source)
                row.update(found=len(roots), localized=localized_count(roots), ok=len(roots) == expected)
            except NumericalError as e:
                _LOGGER.warning(f'{update} {self.source.value} N={self.N} draw {draw}: {e}')
                row['error'] = str(e)
            rows.append(row)
        return rows

    def __repr__(self):
        return '%s(source=%s, N=%s, draws=%s)' % (self.__class__.__name__, self.source.value, self.N, self.draws)


class BifurcationInlet(Inlet):
    """
    Locate the onsets of the localized bound-pair roots of an :code:`N`-site ring on a grid of
    :code:`q` with the given resolution, around the expected values :code:`1` and :code:`1 - 2/(N-1)`.
    """

    def __init__(self, N:int, resolution:float=1e-3, delta:float=10.0, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.N = N
        self.resolution = resolution
        self.delta = delta

    @property
    def expected(self):
        return (1.0, 1.0 - 2.0 / (self.N - 1))

    def grid(self) -> np.ndarray:
        low = max(self.resolution, self.expected[1] - 0.05)
        count = int(round((1.05 - low) / self.resolution))
        # grid points sit half a step off the expected onsets
        return low + self.resolution * (np.arange(count) + 0.5)

    def pull(self, update):
        onsets = find_bp_bifurcations(self.N, self.grid(), Delta=self.delta)
        rows = []
        for count, expected in enumerate(self.expected, start=1):
            found = next((o.parameter for o in onsets if o.count == count), None)
            deviation = None if found is None else abs(found - expected)
            rows.append({'check': 'bifurcation', 'source': RootSource.BP_SURFACE.value, 'N': self.N,
                         'count': count, 'expected': expected, 'found': found, 'deviation': deviation,
                         'resolution': self.resolution,
                         'ok': deviation is not None and deviation <= self.resolution})
        return rows

    def __repr__(self):
        return '%s(N=%s, resolution=%s)' % (self.__class__.__name__, self.N, self.resolution)


class ThresholdInlet(Inlet):
    """
    Locate the smallest :code:`|g/J|` binding an excitation to an attractive-sign defect on a ring
    of odd :code:`N`; expected at :code:`2/N`.
    """

    def __init__(self, N:int, resolution:float=1e-3, J:float=1.0, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.N = N
        self.resolution = resolution
        self.J = J

    def grid(self) -> np.ndarray:
        expected = 2.0 / self.N
        low = max(self.resolution, expected - 0.05)
        count = int(round((expected + 0.05 - low) / self.resolution))
        return -(low + self.resolution * (np.arange(count) + 0.5)) * abs(self.J) * np.sign(self.J)

    def pull(self, update):
        expected = 2.0 / self.N
        onset = closed_chain_threshold(self.N, self.grid(), J=self.J)
        found = None if onset is None else onset.parameter / abs(self.J)
        deviation = None if found is None else abs(found - expected)
        return [{'check': 'threshold', 'source': RootSource.CLOSED_CHAIN_DEFECT.value, 'N': self.N,
                 'count': 1, 'expected': expected, 'found': found, 'deviation': deviation,
                 'resolution': self.resolution, 'ok': deviation is not None and deviation <= self.resolution}]

    def __repr__(self):
        return '%s(N=%s, resolution=%s)' % (self.__class__.__name__, self.N, self.resolution)
