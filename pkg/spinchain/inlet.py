"""
Producers of rows. Each concrete inlet computes one grid point of an experiment, such as the
spectrum of one chain or the trajectory of one initial state.

.. seealso::

    * :any:`Outlet` receiving the rows.
    * :any:`Link` pulling many inlets at once.
"""

import asyncio
from abc import ABC, abstractmethod
from concurrent.futures import Executor
from typing import List, Union

from spinchain.record import Record


class Inlet(ABC):
    """
    Base class of every row producer. Subclasses implement :py:func:`pull`, returning one row,
    a list of rows or ready-made records.
    """

    def __init__(self, metadata:dict=None):
        """
        :type metadata: dict
        :param metadata: Inlet-wide metadata attached to every record this inlet creates. Entries can be overridden per record in :py:func:`new_record`. |default| :code:`None`
        """
        self._metadata = dict(metadata) if metadata is not None else {}
        self._uses_coroutine = asyncio.iscoroutinefunction(self.pull)

    @property
    def metadata(self) -> dict:
        """
        :returns: Inlet-wide metadata.
        :rtype: dict
        """
        return self._metadata

    async def _pull(self, update, executor:Executor=None) -> List[Record]:
        if self._uses_coroutine:
            produced = await self.pull(update)
        elif executor is None:
            produced = self.pull(update)
        else:
            produced = await asyncio.get_running_loop().run_in_executor(executor, self.pull, update)

        if not isinstance(produced, list):
            produced = [produced]
        return [entry if isinstance(entry, Record) else self.new_record(payload=entry) for entry in produced]

    @abstractmethod
    def pull(self, update) -> Union[dict, Record, List[Union[dict, Record]]]:
        """
        Compute the rows of this inlet. May be a coroutine; plain methods run on the link's
        worker pool when it has one.

        :type update: :any:`Update`
        :param update: The transfer asking for rows.

        :return: A row, a record or a list of either.
        """
        raise NotImplementedError()

    def new_record(self, payload:dict, metadata:dict=None) -> Record:
        """
        Wrap a row in a :any:`Record` carrying this inlet's metadata.

        :type payload: dict
        :param payload: Column name to scalar value.

        :type metadata: dict
        :param metadata: Per-record entries merged over the inlet-wide metadata. |default| :code:`None`

        :rtype: :any:`Record`
        """
        merged = dict(self._metadata)
        merged.update(metadata or {})
        merged['__inlet__'] = str(self)
        return Record(payload=payload, metadata=merged)

    def __repr__(self):
        if self.metadata:
            return f'{type(self).__name__}(metadata={self.metadata})'
        return f'{type(self).__name__}()'
