"""
Inlets producing the rows of one grid point of the figure sweeps. Each row carries the analytic
prediction and, where requested, the exact value it is checked against.
"""
import logging
import math

import numpy as np

from spinchain import analytic
from spinchain.analysis import classify_bands
from spinchain.analytic import BandKind, LocalizedKind
from spinchain.chain import ChainSpec, build_hamiltonian
from spinchain.eigensolver import eigh
from spinchain.errors import ConsistencyError, RegimeError
from spinchain.inlet import Inlet
from spinchain.inlets.spectrum_inlet import spec_columns
from spinchain.quantization import defect_root, solve, solve_hybrid

_LOGGER = logging.getLogger('spinchain.sweep_inlets')


def _nearest(values:np.ndarray, target:float) -> float:
    return float(values[int(np.argmin(np.abs(values - target)))])


def _two_excitation_values(spec:ChainSpec, backend:str) -> np.ndarray:
    return eigh(build_hamiltonian(spec, 2), vectors=False, backend=backend).values


class Fig2Inlet(Inlet):
    """
    Distance of the bound pair localized next to the defect from the center of the BP band,
    :code:`ε_BP = (E_BP^(s) - E_BP^(0))/(J/4Δ)`, at one value of :code:`g/JΔ`.
    """

    def __init__(self, delta:float, ratio:float, J:float=1.0, oracle_N:int=None, N:int=40,
                 backend:str='native', *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.delta = delta
        self.ratio = ratio
        self.J = J
        self.oracle_N = oracle_N
        self.N = oracle_N or N
        self.backend = backend

    def pull(self, update):
        spec = ChainSpec(N=self.N, boundary='closed', J=self.J, Delta=self.delta, g=self.ratio * self.J * self.delta)
        hop = analytic.bp_hopping(spec)
        center = analytic.bp_band_center(spec)
        row = {'ratio': self.ratio, **spec_columns(spec), 'q': None, 'exists': False, 'eps_bp': None,
               'eps_bp_shift': None, 'im_theta': None, 're_theta': None, 'threshold': 0.5, 'asymptote': -2.0,
               'oracle_energy': None, 'eps_bp_oracle': None, 'oracle_residual': None}
        try:
            state = analytic.bp_surface_state(spec)
        except RegimeError:
            _LOGGER.info(f'{update} g/JΔ={self.ratio}: singular, no surface state')
            return [row]

        row['q'] = state.metadata.get('q')
        row['eps_bp_shift'] = analytic.bp_shift(spec) / hop
        if state.exists:
            row.update(exists=True, eps_bp=(state.energy - center) / hop,
                       im_theta=state.theta.imag, re_theta=state.theta.real)
            if self.oracle_N:
                exact = _nearest(_two_excitation_values(spec, self.backend), state.energy)
                row.update(oracle_energy=exact, eps_bp_oracle=(exact - center) / hop,
                           oracle_residual=abs(exact - state.energy) / abs(hop))
        return [row]

    def __repr__(self):
        return '%s(delta=%s, ratio=%s)' % (self.__class__.__name__, self.delta, self.ratio)


class Fig3Inlet(Inlet):
    """
    Distance of the LDP-hybridized surface state from the LDP band center,
    :code:`ε_LDP = (E_LDP^(s) - 2ε1 - g)/(J/2)`, at one value of :code:`x = 2(JΔ-g)/J`.
    """

    def __init__(self, x:float, delta:float=20.0, J:float=1.0, oracle_N:int=None, N:int=60,
                 backend:str='native', *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.x = x
        self.delta = delta
        self.J = J
        self.oracle_N = oracle_N
        self.N = oracle_N or N
        self.backend = backend

    def pull(self, update):
        g = self.J * self.delta - self.x * self.J / 2
        spec = ChainSpec(N=self.N, boundary='closed', J=self.J, Delta=self.delta, g=g)
        state = analytic.ldp_hybrid_surface_state(spec)
        center = 2 * spec.eps1 + spec.g
        half = spec.J / 2
        row = {'x': self.x, **spec_columns(spec), 'exists': state.exists, 'window_edge': abs(self.x) == 1,
               'eps_ldp': None, 'im_theta': None, 're_theta': None, 'im_theta_finite': None,
               'oracle_energy': None, 'eps_ldp_oracle': None, 'oracle_residual': None}
        if state.exists:
            row.update(eps_ldp=(state.energy - center) / half, im_theta=state.theta.imag, re_theta=state.theta.real)
            if self.oracle_N:
                localized = [r.theta.imag for r in solve_hybrid(spec) if r.localized]
                row['im_theta_finite'] = max(localized) if localized else None
                exact = _nearest(_two_excitation_values(spec, self.backend), state.energy)
                row.update(oracle_energy=exact, eps_ldp_oracle=(exact - center) / half,
                           oracle_residual=abs(exact - state.energy) / abs(half))
        return [row]

    def __repr__(self):
        return '%s(x=%s, delta=%s)' % (self.__class__.__name__, self.x, self.delta)


class Fig5Inlet(Inlet):
    """
    Reciprocal localization length of the one-excitation defect state of a finite chain, next to
    the infinite-chain value :code:`asinh|g/J|`.
    """

    def __init__(self, N:int, boundary:str, g:float, delta:float=10.0, J:float=1.0, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.spec = ChainSpec(N=N, boundary=boundary, J=J, Delta=delta, g=g, n0=max(1, N // 2))

    def pull(self, update):
        spec = self.spec
        root = defect_root(solve(spec), spec)
        small_g = math.sqrt(2 * abs(spec.g) / (spec.N * abs(spec.J))) if spec.closed else None
        return [{
            'series': f'{spec.boundary.value}-{spec.N}',
            **spec_columns(spec),
            'localized': root is not None,
            'im_theta_d': None if root is None else root.theta.imag,
            're_theta_d': None if root is None else root.theta.real,
            'energy_d': None if root is None else root.energy,
            'im_theta_infinite': math.asinh(abs(spec.g / spec.J)),
            'im_theta_small_g': small_g,
        }]

    def __repr__(self):
        return '%s(N=%s, boundary=%s, g=%s)' % (self.__class__.__name__, self.spec.N, self.spec.boundary.value, self.spec.g)


class LDPTableInlet(Inlet):
    """
    Exact LDP-band levels of a closed chain against :code:`2ε1 + g + J cos(πk/(N-2)) + J²/2g`,
    paired by rank.
    """

    def __init__(self, spec:ChainSpec, backend:str='native', *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.spec = spec
        self.backend = backend

    def pull(self, update):
        spec = self.spec
        decomp = eigh(build_hamiltonian(spec, 2), vectors=False, backend=self.backend)
        band = classify_bands(decomp, spec).band(BandKind.LDP)
        predicted = analytic.ldp_band(spec)
        exact = [] if band is None else sorted(float(decomp.values[i]) for i in band.indices)
        if len(exact) != len(predicted):
            raise ConsistencyError(f'LDP window holds {len(exact)} levels, expected {len(predicted)}')

        shift = spec.J ** 2 / (2 * spec.g)
        by_energy = sorted(range(len(predicted)), key=lambda i: predicted[i][1])
        rows = []
        for rank, i in enumerate(by_energy):
            theta, energy = predicted[i]
            rows.append({**spec_columns(spec), 'k': i + 1, 'theta_k': theta, 'predicted': energy,
                         'oracle': exact[rank], 'residual': abs(exact[rank] - energy), 'shift': shift})
        _LOGGER.info(f'{update} {len(rows)} LDP levels, max residual {max(r["residual"] for r in rows):.3e}')
        return rows

    def __repr__(self):
        return '%s(N=%s, g=%s)' % (self.__class__.__name__, self.spec.N, self.spec.g)


class DoubletInlet(Inlet):
    """
    Exact levels of the localized states of one configuration against their predictions: the
    one-excitation defect state, the doublet and the surface-type bound pair.
    """

    def __init__(self, spec:ChainSpec, backend:str='native', *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.spec = spec
        self.backend = backend

    def _surface_type(self):
        try:
            state = analytic.bp_surface_state(self.spec)
        except RegimeError:
            state = None
        if state is not None and state.exists:
            return state, abs(analytic.bp_hopping(self.spec)) * 2
        hybrid = analytic.ldp_hybrid_surface_state(self.spec)
        resonant = abs(self.spec.J * self.spec.Delta - self.spec.g) <= 2 * abs(self.spec.J)
        if hybrid.exists and resonant:
            return hybrid, abs(self.spec.J)
        return None, None

    def pull(self, update):
        spec = self.spec
        one = eigh(build_hamiltonian(spec, 1), vectors=False, backend=self.backend).values
        two = _two_excitation_values(spec, self.backend)

        checks = []
        defect = analytic.defect_state(spec)
        if defect.exists:
            checks.append((defect, _nearest(one, defect.energy), 1e-2 * abs(spec.J), 1))
        for state in analytic.doublet(spec):
            checks.append((state, _nearest(two, state.energy), 1e-2 * abs(spec.J), 2))
        surface, half_width = self._surface_type()
        if surface is not None:
            checks.append((surface, _nearest(two, surface.energy), 0.05 * half_width, 2))

        rows = []
        for state, exact, tolerance, excitations in checks:
            residual = abs(exact - state.energy)
            rows.append({**spec_columns(spec), 'kind': state.kind.value, 'excitations': excitations,
                         'predicted': state.energy, 'oracle': exact, 'residual': residual,
                         'tolerance': tolerance, 'within': residual <= tolerance})
        if surface is None:
            rows.append({**spec_columns(spec), 'kind': LocalizedKind.BP_SURFACE.value, 'excitations': 2,
                         'predicted': None, 'oracle': None, 'residual': None, 'tolerance': None, 'within': None})
        return rows

    def __repr__(self):
        return '%s(N=%s, g=%s)' % (self.__class__.__name__, self.spec.N, self.spec.g)
