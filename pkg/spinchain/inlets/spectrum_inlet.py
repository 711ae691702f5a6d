import logging

from spinchain.analysis import classify_bands, classify_one_excitation
from spinchain.chain import ChainSpec, build_hamiltonian
from spinchain.eigensolver import eigh
from spinchain.inlet import Inlet

_LOGGER = logging.getLogger('spinchain.SpectrumInlet')


def spec_columns(spec:ChainSpec) -> dict:
    """ Leading columns every row carries: the chain parameters it was computed for."""
    return {
        'N': spec.N,
        'boundary': spec.boundary.value,
        'J': spec.J,
        'Delta': spec.Delta,
        'eps': spec.eps,
        'g': spec.g,
        'n0': spec.n0,
    }


class SpectrumInlet(Inlet):
    """
    Inlet diagonalizing one sector of a chain and producing one row per eigenvalue, labelled with
    the band or localized state it was assigned to.
    """

    def __init__(self, spec:ChainSpec, excitations:int=2, backend:str='native',
                 construction:str='direct', *args, **kwargs):
        """
        :type spec: :any:`ChainSpec`
        :param spec: Chain to diagonalize.

        :type excitations: int
        :param excitations: Sector, 1 or 2. |default| :code:`2`

        :type backend: str
        :param backend: Eigensolver backend. |default| :code:`'native'`

        :type construction: str
        :param construction: Hamiltonian builder, :code:`'direct'` or :code:`'transcribed'`. |default| :code:`'direct'`
        """
        super().__init__(*args, **kwargs)
        self.spec = spec
        self.excitations = excitations
        self.backend = backend
        self.construction = construction
        self.report = None

    def pull(self, update):
        H = build_hamiltonian(self.spec, self.excitations, self.construction)
        decomp = eigh(H, vectors=False, backend=self.backend)
        if self.excitations == 1:
            report = classify_one_excitation(decomp, self.spec)
        else:
            report = classify_bands(decomp, self.spec)
        self.report = report

        assignment = {}
        for band in report.bands:
            for i in band.indices:
                assignment[i] = (band.name, None)
        for level in report.localized_levels:
            assignment[level.index] = (level.kind.value, level.prediction)

        rows = []
        for i, value in enumerate(decomp.values):
            label, prediction = assignment.get(i, ('unassigned', None))
            rows.append({
                **spec_columns(self.spec),
                'excitations': self.excitations,
                'index': i,
                'energy': float(value),
                'assignment': label,
                'prediction': prediction,
                'residual': None if prediction is None else abs(float(value) - prediction),
            })

        _LOGGER.info(f'{update} {self.spec.boundary.value} N={self.spec.N}: {len(rows)} levels, '
                     f'{len(report.localized_levels)} localized, merged={report.merged}')
        return rows

    def __repr__(self):
        return '%s(N=%s, boundary=%s, excitations=%s)' % (self.__class__.__name__, self.spec.N,
                                                          self.spec.boundary.value, self.excitations)
