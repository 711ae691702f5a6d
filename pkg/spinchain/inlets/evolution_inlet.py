import logging
from typing import Sequence, Tuple

import numpy as np

from spinchain.chain import ChainSpec, build_hamiltonian
from spinchain.eigensolver import EvolutionTrace, basis_state, eigh, evolve
from spinchain.errors import ConfigError
from spinchain.inlet import Inlet
from spinchain.inlets.spectrum_inlet import spec_columns

_LOGGER = logging.getLogger('spinchain.EvolutionInlet')


def observable_column(pair:Sequence[int]) -> str:
    """ Column name of the occupation of a basis state, eg. :code:`p_6_7`."""
    return 'p_' + '_'.join(str(n) for n in pair)


class EvolutionInlet(Inlet):
    """
    Inlet propagating a two-excitation state exactly and producing one row per time sample with the
    requested occupations, the norm and the energy.
    """

    def __init__(self, spec:ChainSpec, times:Sequence[float], observables:Sequence[Tuple[int, int]],
                 initial:Tuple[int, int]=None, psi0:np.ndarray=None, backend:str='native', *args, **kwargs):
        """
        :type spec: :any:`ChainSpec`
        :param spec: Chain configuration.

        :type times: list[float]
        :param times: Sampling times.

        :type observables: list[tuple]
        :param observables: Pairs whose occupation is recorded.

        :type initial: tuple
        :param initial: Pair the excitations start on. Exclusive with :code:`psi0`. |default| :code:`None`

        :type psi0: numpy.ndarray
        :param psi0: Normalized initial amplitudes in the two-excitation basis. |default| :code:`None`

        :type backend: str
        :param backend: Eigensolver backend. |default| :code:`'native'`
        """
        super().__init__(*args, **kwargs)
        if (initial is None) == (psi0 is None):
            raise ConfigError('Provide exactly one of initial pair or psi0')
        self.spec = spec
        self.times = np.asarray(times, dtype=float)
        self.observables = [tuple(p) for p in observables]
        self.initial = None if initial is None else tuple(initial)
        self.psi0 = psi0
        self.backend = backend
        self.trace: EvolutionTrace = None

    def run(self) -> EvolutionTrace:
        H = build_hamiltonian(self.spec, 2)
        if self.initial is not None:
            psi0 = basis_state(H.basis, self.spec.pair(*self.initial))
        else:
            psi0 = self.psi0
        decomp = eigh(H, vectors=True, backend=self.backend)
        return evolve(decomp, psi0, self.times, self.observables)

    def pull(self, update):
        self.trace = trace = self.run()
        columns = spec_columns(self.spec)
        rows = []
        for k, t in enumerate(trace.times):
            row = {**columns, 't': float(t)}
            for pair in self.observables:
                row[observable_column(pair)] = float(trace.observables[pair][k])
            row['norm'] = float(trace.norm[k])
            row['energy'] = float(trace.energy[k])
            rows.append(row)
        _LOGGER.info(f'{update} g={self.spec.g}: {len(rows)} samples, '
                     f'max norm drift {float(np.max(np.abs(trace.norm - 1))) if len(rows) else 0.0:.3e}')
        return rows

    def __repr__(self):
        return '%s(N=%s, g=%s, initial=%s)' % (self.__class__.__name__, self.spec.N, self.spec.g, self.initial)
