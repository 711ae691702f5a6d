import csv
import io
import logging
import math
from typing import Dict, List

from spinchain.outlet import Outlet, metadata, write_atomic
from spinchain.record import Record

_LOGGER = logging.getLogger('spinchain.CsvOutlet')


def format_value(value) -> str:
    """
    Render one cell. Floats use 17 significant digits in scientific notation so that parsing
    the file gives back the exact value; :code:`None` and NaN become empty fields.
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ''
        return '%.16e' % value
    if hasattr(value, 'dtype'):
        return format_value(value.item())
    return str(value)


class CsvOutlet(Outlet):
    """
    Outlet that writes every pushed row into csv files, one file per destination, each written once.
    """

    CSV_FILE:metadata = 'CsvOutlet.CSV_FILE'
    """Filepath of the csv file a record should be written to instead of the default one."""

    def __init__(self, default_filepath:str):
        """

        :param default_filepath: Filepath of the default csv file to write records to.
        :type default_filepath: str
        """
        super().__init__()
        self.default_filepath = default_filepath

    def render(self, records:List[Record]) -> Dict[str, str]:
        """
        Group records by destination and render each group as RFC-4180 text.

        :returns: Filepath to file contents.
        :rtype: dict
        """
        groups = {}
        for record in records:
            filepath = record.metadata.get(self.CSV_FILE, self.default_filepath)
            groups.setdefault(filepath, []).append(record)

        rendered = {}
        for filepath, group in groups.items():
            fieldnames = list(group[0].columns)
            for record in group[1:]:
                for column in record.columns:
                    if column not in fieldnames:
                        fieldnames.append(column)

            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator='\r\n')
            writer.writerow(fieldnames)
            for record in group:
                writer.writerow([format_value(record.payload.get(column)) for column in fieldnames])
            rendered[filepath] = buffer.getvalue()

        return rendered

    def push(self, records:List[Record], update):
        """
        Writes records to csv files.

        :type records: list[:any:`Record`]
        :param records: Rows to write, in order.

        :type update: :any:`Update`
        :param update: Update object representing the particular Link transfer.
        """
        for filepath, text in self.render(records).items():
            _LOGGER.info(f'{update} writing {text.count(chr(10)) - 1} rows into: {filepath}')
            write_atomic(filepath, text)

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.default_filepath)
