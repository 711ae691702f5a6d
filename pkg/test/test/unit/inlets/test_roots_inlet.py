import asyncio

from unittest.mock import patch

from spinchain import Update
from spinchain.chain import ChainSpec
from spinchain.errors import RegimeError
from spinchain.inlets import RootsInlet
from spinchain.misc import inlet_tester
from spinchain.quantization import RootSource
from test_utils import fqname


class TestRootsInlet(inlet_tester.InletTester):

    required_columns = ('N', 'g', 'root', 'source', 'classification', 'theta_re', 'theta_im', 'energy', 'residual')

    def get_inlet(self):
        return [
            RootsInlet(ChainSpec(N=9, boundary='closed', J=1.0, Delta=0.0, g=-0.9)),
            RootsInlet(ChainSpec(N=10, boundary='open', J=1.0, Delta=0.5, g=0.7, n0=4), include_spurious=True),
            RootsInlet(ChainSpec(N=12, boundary='closed', J=1.0, Delta=10.0, g=8.0), RootSource.BP_SURFACE),
        ]

    @patch(fqname(Update))
    def test_counts(self, update):
        for inlet, count in zip(self.inlets, (9, 12, 10)):
            with self.subTest(inlet=inlet):
                records = asyncio.run(inlet._pull(update))
                self.assertEqual(len(records), count)
                self.assertEqual([r.payload['root'] for r in records], list(range(count)))

    @patch(fqname(Update))
    def test_localized(self, update):
        records = asyncio.run(self.inlet._pull(update))
        localized = [r.payload for r in records if r.payload['classification'] == 'Localized']
        self.assertEqual(len(localized), 1)
        self.assertEqual(localized[0]['source'], 'ClosedChainDefect')

    @patch(fqname(Update))
    def test_regime(self, update):
        inlet = RootsInlet(ChainSpec(N=12, boundary='closed', J=1.0, Delta=10.0, g=10.0), RootSource.BP_SURFACE)
        self.assertRaises(RegimeError, asyncio.run, inlet._pull(update))

    def test_repr(self):
        self.assertEqual(repr(self.inlets[2]), 'RootsInlet(N=12, g=8.0, source=BPSurface)')
