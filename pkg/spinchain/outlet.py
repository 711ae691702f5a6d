"""
Consumers of the rows a :any:`Link` collects, plus the atomic file write every file outlet uses.

.. seealso::

    * :any:`Inlet` producing the rows.
"""
import asyncio
import os
import tempfile
from abc import ABC, abstractmethod
from typing import List

from spinchain.record import Record


class metadata(str):
    """Annotation for outlet class attributes naming a record metadata key."""


class Outlet(ABC):
    """
    Receives the merged, sorted rows of every transfer of the links it is attached to.
    Subclasses implement :py:func:`push` either as a plain method or as a coroutine.
    """

    def __init__(self):
        self._uses_coroutine = asyncio.iscoroutinefunction(self.push)

    async def _push(self, records:List[Record], update):
        result = self.push(records, update)
        if self._uses_coroutine:
            await result

    @abstractmethod
    def push(self, records:List[Record], update):
        """
        Handle the rows of one transfer.

        :type records: list[:any:`Record`]
        :param records: Rows of every inlet of the transfer, already sorted.

        :type update: :any:`Update`
        :param update: The transfer these rows belong to.
        """
        raise NotImplementedError()

    def __repr__(self):
        return f'{type(self).__name__}()'


def write_atomic(filepath:str, text:str):
    """
    Write :code:`text` to a temporary file next to :code:`filepath` and rename it into place.

    :type filepath: str
    :param filepath: Destination file. Missing parent directories are created.

    :type text: str
    :param text: Full contents.
    """
    directory = os.path.dirname(os.path.abspath(filepath))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix='.' + os.path.basename(filepath) + '.', dir=directory)
    try:
        with os.fdopen(fd, 'w', newline='', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp_path, filepath)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
