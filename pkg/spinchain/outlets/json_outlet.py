import json
import logging
import math
from typing import List

from spinchain.outlet import Outlet, metadata, write_atomic
from spinchain.record import Record

_LOGGER = logging.getLogger('spinchain.JsonOutlet')


def to_jsonable(value):
    """ Convert numpy scalars, arrays, tuples and complex numbers into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    if hasattr(value, 'tolist'):
        return to_jsonable(value.tolist())
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    if hasattr(value, 'value') and hasattr(value, 'name'):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class JsonOutlet(Outlet):
    """
    Outlet writing the provenance sidecar of a transfer: the columns and row count of the data
    together with the :code:`PROVENANCE` and :code:`SUMMARY` metadata of the first record.
    """

    PROVENANCE:metadata = 'JsonOutlet.PROVENANCE'
    """Provenance (code version, tolerances, inputs) of the run producing the record."""

    SUMMARY:metadata = 'JsonOutlet.SUMMARY'
    """Summary values computed over the whole experiment."""

    def __init__(self, filepath:str, experiment:str=''):
        """
        :type filepath: str
        :param filepath: Where the sidecar is written.

        :type experiment: str
        :param experiment: Experiment identifier stored in the sidecar. |default| :code:`''`
        """
        super().__init__()
        self.filepath = filepath
        self.experiment = experiment

    def render(self, records:List[Record]) -> str:
        columns = []
        for record in records:
            for column in record.columns:
                if column not in columns:
                    columns.append(column)

        first = records[0].metadata if records else {}
        document = {
            'experiment': self.experiment,
            'columns': columns,
            'rows': len(records),
            'provenance': to_jsonable(first.get(self.PROVENANCE, {})),
            'summary': to_jsonable(first.get(self.SUMMARY, {})),
        }
        return json.dumps(document, indent=2, sort_keys=True, allow_nan=False, default=str) + '\n'

    def push(self, records:List[Record], update):
        _LOGGER.info(f'{update} writing sidecar: {self.filepath}')
        write_atomic(self.filepath, self.render(records))

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.filepath)
