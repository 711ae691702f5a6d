import csv
import io
import os
import tempfile
from unittest import TestCase
from unittest.mock import patch

from spinchain import Record, Update
from spinchain.outlets.csv_outlet import CsvOutlet, format_value
from test_utils import fqname


class TestCsvOutlet(TestCase):

    @patch(fqname(Update), spec=Update)
    def setUp(self, update):
        self.tmp = tempfile.TemporaryDirectory()
        self.attempt_filepath = os.path.join(self.tmp.name, 'attempt.csv')
        self.custom_filepath = os.path.join(self.tmp.name, 'custom.csv')
        self.csv_outlet = CsvOutlet(self.attempt_filepath)
        self.update = update
        update.__repr__ = lambda x: 'TestUpdate()'

        self.records = [Record({'foo': 'bar', 'value': 0.1 * i, 'count': i, 'ok': i % 2 == 0}) for i in range(4)]

    def tearDown(self):
        self.tmp.cleanup()

    def read(self, filepath):
        with open(filepath, 'r', newline='') as f:
            return f.read()

    def test_push(self):
        self.csv_outlet.push(self.records, self.update)

        self.assertTrue(os.path.exists(self.attempt_filepath), 'File should exist')
        text = self.read(self.attempt_filepath)
        lines = text.split('\r\n')
        self.assertEqual(lines[0], 'foo,value,count,ok')
        self.assertEqual(lines[2], 'bar,1.0000000000000001e-01,1,false')
        self.assertEqual(len(lines), 6, 'Header, four rows and a trailing line break')

    def test_round_trip(self):
        values = [0.1, 1 / 3, -2.5e-17, 12345.678901234567]
        self.csv_outlet.push([Record({'v': v}) for v in values], self.update)

        rows = list(csv.DictReader(io.StringIO(self.read(self.attempt_filepath))))
        self.assertEqual([float(r['v']) for r in rows], values, 'Parsing the file should give back the exact floats')

    def test_push_custom_file(self):
        for record in self.records[2:]:
            record.metadata[CsvOutlet.CSV_FILE] = self.custom_filepath

        self.csv_outlet.push(self.records, self.update)

        self.assertEqual(self.read(self.attempt_filepath).count('\r\n'), 3)
        self.assertEqual(self.read(self.custom_filepath).count('\r\n'), 3)

    def test_union_of_columns(self):
        records = [Record({'a': 1}), Record({'a': 2, 'b': 'x'})]
        self.csv_outlet.push(records, self.update)
        self.assertEqual(self.read(self.attempt_filepath), 'a,b\r\n1,\r\n2,x\r\n')

    def test_quoting(self):
        self.csv_outlet.push([Record({'label': 'a,b "c"'})], self.update)
        self.assertEqual(self.read(self.attempt_filepath), 'label\r\n"a,b ""c"""\r\n')

    def test_deterministic(self):
        first = self.csv_outlet.render(self.records)
        second = self.csv_outlet.render(self.records)
        self.assertEqual(first, second)

    def test_format_value(self):
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value(float('nan')), '')
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(7), '7')
        self.assertEqual(format_value(0.5), '5.0000000000000000e-01')
        self.assertEqual(format_value('open'), 'open')
