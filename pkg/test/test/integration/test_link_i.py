import asyncio
import csv
import json
import logging
import os
import tempfile
import time
from unittest import TestCase

from spinchain.chain import ChainSpec
from spinchain.inlet import Inlet
from spinchain.inlets import RootsInlet, SpectrumInlet
from spinchain.link import Link
from spinchain.outlet import Outlet
from spinchain.outlets import CsvOutlet, JsonOutlet
from spinchain.quantization import RootSource


class SlowPointInlet(Inlet):
    """Returns one fixed row after sleeping, either cooperatively or by blocking the loop."""

    def __init__(self, value=10, delay:float=0.0, blocking:bool=False, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.delay = delay
        self.blocking = blocking
        self.record = self.new_record({'value': value})

    async def pull(self, update):
        if self.blocking:
            time.sleep(self.delay)
        elif self.delay:
            await asyncio.sleep(self.delay)
        return [self.record]


class KeepingOutlet(Outlet):
    async def push(self, records, update):
        self.records = records


class TestLink(TestCase):

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        logging.getLogger('spinchain').setLevel(logging.WARNING)

    def timed_transfer(self, inlets):
        outlet = KeepingOutlet()
        start = time.perf_counter()
        Link(inlets, outlet, copy_records=False).transfer()
        elapsed = time.perf_counter() - start
        self.assertEqual(outlet.records, [inlet.record for inlet in inlets])
        return elapsed

    def test_rows_reach_every_outlet(self):
        inlets = [SlowPointInlet(1), SlowPointInlet(2)]
        outlets = [KeepingOutlet(), KeepingOutlet()]

        Link(inlets, outlets, copy_records=False).transfer()

        for outlet in outlets:
            self.assertEqual(outlet.records, [inlet.record for inlet in inlets])

    def test_metadata_reaches_outlet(self):
        inlet = SlowPointInlet(metadata={'experiment': 'sweep', 'sector': 1})
        inlet.record = inlet.new_record({'value': 20}, metadata={'sector': 2})
        outlet = KeepingOutlet()

        Link(inlet, outlet).transfer()

        metadata = outlet.records[0].metadata
        self.assertEqual(metadata['experiment'], 'sweep')
        self.assertEqual(metadata['sector'], 2, 'Record metadata should override inlet metadata')

    def test_coroutine_pulls_overlap(self):
        inlets = [SlowPointInlet(i, delay=0.05) for i in range(3)]
        self.assertLess(self.timed_transfer(inlets), 0.05 * len(inlets))

    def test_blocking_pulls_serialise(self):
        inlets = [SlowPointInlet(i, delay=0.02, blocking=True) for i in range(3)]
        self.assertGreaterEqual(self.timed_transfer(inlets), 0.02 * len(inlets))

    def test_spectrum_to_files(self):
        spec = ChainSpec(N=12, boundary='closed', J=1.0, Delta=20.0, g=10.0, n0=6)
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = os.path.join(tmp, 'spectrum.csv')
            json_path = os.path.join(tmp, 'spectrum.json')
            link = Link(SpectrumInlet(spec, backend='lapack'), [CsvOutlet(csv_path), JsonOutlet(json_path, 'spectrum')],
                        name='spectrum', sort_by=['index'])

            records = link.transfer()

            with open(csv_path, newline='') as f:
                rows = list(csv.DictReader(f))
            with open(json_path) as f:
                sidecar = json.load(f)
        self.assertEqual(len(rows), len(records))
        self.assertEqual([int(row['index']) for row in rows], list(range(66)))
        self.assertEqual(sidecar['rows'], 66)
        self.assertEqual(sidecar['experiment'], 'spectrum')

    def test_roots_workers(self):
        specs = [ChainSpec(N=10, boundary='closed', J=1.0, Delta=10.0, g=g, n0=5) for g in (1.0, 2.0, 4.0, 8.0)]
        sort_by = ('g', 'root')

        serial = Link([RootsInlet(s, RootSource.CLOSED_CHAIN_DEFECT) for s in specs], [], sort_by=sort_by).transfer()
        pooled = Link([RootsInlet(s, RootSource.CLOSED_CHAIN_DEFECT) for s in reversed(specs)], [], sort_by=sort_by,
                      workers=4).transfer()

        self.assertEqual([r.payload for r in serial], [r.payload for r in pooled],
                         'Rows should not depend on inlet order or worker count')
