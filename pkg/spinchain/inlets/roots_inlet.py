from spinchain.chain import ChainSpec
from spinchain.inlet import Inlet
from spinchain.inlets.spectrum_inlet import spec_columns
from spinchain.quantization import RootSource, solve


class RootsInlet(Inlet):
    """
    Inlet solving one quantization condition and producing one row per root.
    """

    def __init__(self, spec:ChainSpec, source:RootSource=None, include_spurious:bool=False, *args, **kwargs):
        """
        :type spec: :any:`ChainSpec`
        :param spec: Chain configuration.

        :type source: :any:`RootSource`
        :param source: Condition to solve; the one-excitation condition of the boundary if :code:`None`. |default| :code:`None`

        :type include_spurious: bool
        :param include_spurious: Also emit the spurious roots. |default| :code:`False`
        """
        super().__init__(*args, **kwargs)
        self.spec = spec
        self.source = source
        self.include_spurious = include_spurious

    def pull(self, update):
        roots = solve(self.spec, self.source, include_spurious=self.include_spurious)
        return [{**spec_columns(self.spec), 'root': i, **root.to_dict()} for i, root in enumerate(roots)]

    def __repr__(self):
        source = self.source.value if isinstance(self.source, RootSource) else self.source
        return '%s(N=%s, g=%s, source=%s)' % (self.__class__.__name__, self.spec.N, self.spec.g, source)
