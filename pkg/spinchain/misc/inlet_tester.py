"""
Base test case for concrete inlets. Subclass :any:`InletTester`, return the inlets under test
from :py:func:`InletTester.get_inlet` and list the columns every row must carry in
:code:`required_columns`; the checks below then run once per inlet.
"""
import asyncio
import numbers
from unittest import TestCase
from unittest.mock import patch

import numpy as np

from spinchain import Record, Update
from spinchain.inlet import Inlet

_SCALARS = (str, bool, numbers.Number, np.generic, type(None))


def fqname(obj):
    return ".".join([obj.__module__, obj.__name__])


def for_each_inlet(fn):
    """Runs the test for each inlet returned from :any:`InletTester.get_inlet`"""

    def wrapper(test_kls, *args, **kwargs):
        for inlet in test_kls.inlets:
            inlet._metadata = {**inlet._metadata, **test_kls.gmetadata}
            test_kls.inlet = inlet
            with test_kls.subTest(msg=f"Inlet {str(inlet)}"):
                fn(test_kls, *args, **kwargs)

    return wrapper


class InletTester(TestCase):
    """
    Checks every inlet of a subclass for record creation, metadata propagation, row shape and
    reproducibility of its rows.
    """

    required_columns = ()

    def get_inlet(self): # pragma: no cover
        """Return an inlet, or a list of inlets, of the class under test."""
        raise NotImplementedError()

    def setUp(self):
        if type(self) is InletTester:
            self.skipTest('InletTester is a base class')
        self.gmetadata = {'global':'global'}
        self.inlets = self.get_inlet()
        if not isinstance(self.inlets, list):
            self.inlets = [self.inlets]

        self.inlet = self.inlets[0]
        self.inlet._metadata = {**self.inlet._metadata, **self.gmetadata}

    def pull(self, update):
        return asyncio.run(self.inlet._pull(update))

    @for_each_inlet
    def test_is_inlet(self):
        self.assertIsInstance(self.inlet, Inlet)
        self.assertTrue(repr(self.inlet).startswith(type(self.inlet).__name__), 'Repr should name the inlet class')

    @for_each_inlet
    def test_new_record(self):
        """
        |decorated| :any:`for_each_inlet`

        Local metadata is merged over the inlet's global metadata.
        """
        record = self.inlet.new_record(payload={'test':123}, metadata={'global':'local', 'metadata':321})
        self.assertIsInstance(record, Record)
        self.assertEqual(record.payload, {'test':123})
        self.assertEqual(record.metadata['metadata'], 321)
        self.assertEqual(record.metadata['global'], 'local', 'Global metadata should be overridden by local metadata')
        self.assertEqual(record.metadata['__inlet__'], str(self.inlet))

    @for_each_inlet
    @patch(fqname(Update))
    def test_pull(self, update):
        """
        |decorated| :any:`for_each_inlet`

        Rows are records carrying the required columns, scalar values and the global metadata.
        """
        records = self.pull(update)

        self.assertIsInstance(records, list)
        self.assertGreater(len(records), 0, 'Inlet should produce at least one row')
        columns = records[0].columns
        for record in records:
            self.assertIsInstance(record, Record)
            for column in self.required_columns:
                self.assertIn(column, record.payload, f'Row should carry column {column}')
            self.assertEqual(record.columns, columns, 'Rows of one inlet should share their columns')
            for column, value in record.payload.items():
                self.assertIsInstance(value, _SCALARS, f'Column {column} should hold a scalar')
            self.assertLessEqual(self.gmetadata.items(), record.metadata.items(),
                                 'Global metadata should be contained in record.metadata')

    @for_each_inlet
    @patch(fqname(Update))
    def test_pull_repeatable(self, update):
        """
        |decorated| :any:`for_each_inlet`

        Pulling twice gives the same rows.
        """
        first = [record.payload for record in self.pull(update)]
        second = [record.payload for record in self.pull(update)]
        self.assertEqual(first, second)
