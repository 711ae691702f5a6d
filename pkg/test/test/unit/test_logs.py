import io
import logging
from unittest import TestCase

from spinchain.misc.logs import ISO8601Formatter, LOG_FORMAT, make_handler, set_verbosity


class TestLogs(TestCase):

    def tearDown(self):
        logging.getLogger('spinchain').setLevel(logging.DEBUG)

    def test_handler_format(self):
        stream = io.StringIO()
        logger = logging.getLogger('spinchain.test_logs')
        handler = make_handler(stream, pretty=False)
        logger.addHandler(handler)
        try:
            logger.warning('pulled 97 records')
        finally:
            logger.removeHandler(handler)

        line = stream.getvalue().strip()
        self.assertRegex(line, r'^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{3}[+-]\d{4}\|W\| pulled 97 records \(spinchain.test_logs\)$')

    def test_pretty(self):
        formatter = ISO8601Formatter(LOG_FORMAT, millis_precision=2, pretty=True)
        record = logging.LogRecord('spinchain', logging.INFO, __file__, 1, 'message', None, None)
        self.assertRegex(formatter.format(record), r'^\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}\.\d{2}\|I\| message \(spinchain\)$')

    def test_set_verbosity(self):
        set_verbosity(True)
        self.assertEqual(logging.getLogger('spinchain').level, logging.INFO)
        set_verbosity(False)
        self.assertEqual(logging.getLogger('spinchain').level, logging.WARNING)
