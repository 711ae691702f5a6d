import asyncio

import numpy as np
from unittest.mock import patch

from spinchain import Update
from spinchain.inlets import BifurcationInlet, CensusInlet, ThresholdInlet
from spinchain.inlets.census_inlets import EXPECTED_COUNTS, draw_spec
from spinchain.misc import inlet_tester
from spinchain.quantization import RootSource
from test_utils import fqname


class TestCensusInlet(inlet_tester.InletTester):

    required_columns = ('check', 'source', 'N', 'draw', 'expected', 'found', 'ok', 'error')

    def get_inlet(self):
        return [CensusInlet(source, 8, draws=3) for source in EXPECTED_COUNTS]

    @patch(fqname(Update))
    def test_counts(self, update):
        for inlet in self.inlets:
            with self.subTest(inlet=inlet):
                rows = [r.payload for r in asyncio.run(inlet._pull(update))]
                self.assertEqual(len(rows), 3)
                for row in rows:
                    self.assertEqual(row['error'], '')
                    self.assertTrue(row['ok'], f'{row}')

    def test_deterministic_draws(self):
        first = CensusInlet(RootSource.HYBRID, 10, draws=4, seed=7).specs()
        second = CensusInlet(RootSource.HYBRID, 10, draws=4, seed=7).specs()
        self.assertEqual(first, second)
        self.assertNotEqual(first, CensusInlet(RootSource.HYBRID, 10, draws=4, seed=8).specs())

    def test_draw_regimes(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            spec = draw_spec(RootSource.BP_SURFACE, 10, rng)
            self.assertGreaterEqual(abs(spec.g / (spec.J * spec.Delta) - 1), 0.05)
            self.assertTrue(spec.closed)
        self.assertFalse(draw_spec(RootSource.OPEN_CHAIN, 10, rng).closed)


class TestBifurcationInlet(inlet_tester.InletTester):

    required_columns = ('check', 'count', 'expected', 'found', 'deviation', 'ok')

    def get_inlet(self):
        return BifurcationInlet(6, resolution=1e-2)

    def test_grid(self):
        grid = self.inlet.grid()
        self.assertAlmostEqual(grid[1] - grid[0], 1e-2)
        self.assertTrue(grid[0] < self.inlet.expected[1] < 1.0 < grid[-1])

    @patch(fqname(Update))
    def test_onsets(self, update):
        rows = [r.payload for r in asyncio.run(self.inlet._pull(update))]
        self.assertEqual([r['count'] for r in rows], [1, 2])
        self.assertAlmostEqual(rows[1]['expected'], 0.6)
        for row in rows:
            self.assertTrue(row['ok'], f'{row}')


class TestThresholdInlet(inlet_tester.InletTester):

    required_columns = ('check', 'expected', 'found', 'deviation', 'ok')

    def get_inlet(self):
        return ThresholdInlet(5, resolution=2e-3)

    def test_grid_sign(self):
        self.assertTrue(np.all(self.inlet.grid() < 0))

    @patch(fqname(Update))
    def test_threshold(self, update):
        (record,) = asyncio.run(self.inlet._pull(update))
        self.assertAlmostEqual(record.payload['expected'], 0.4)
        self.assertTrue(record.payload['ok'], f'{record.payload}')
