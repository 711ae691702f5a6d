import copy
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Union

import asyncio

from spinchain.errors import InvalidNodeError
from spinchain.record import Record

_LOGGER = logging.getLogger('spinchain.Link')


class Update():
    """
    One transfer of a Link, passed to every pull and push. Prints as :code:`{name}.{index}`, or
    just :code:`{index}` for an unnamed link.
    """
    def __init__(self, name:str, index:int):
        self.name = name
        self.index = index

    def __repr__(self):
        return f'{self.name}.{self.index}' if self.name else f'{self.index}'


from spinchain.inlet import Inlet
from spinchain.outlet import Outlet


def _as_list(nodes) -> list:
    return list(nodes) if isinstance(nodes, (list, tuple)) else [nodes]


class Link():
    """
    Runs a set of inlets, one per grid point, merges and orders their rows and hands them to outlets.
    """

    def __init__(self,
                 inlets: Union[Inlet, List[Inlet]],
                 outlets: Union[Outlet, List[Outlet]],
                 name:str='',
                 sort_by:Sequence[str]=(),
                 workers:int=1,
                 copy_records:bool=True,
                 catch_exceptions:bool=False):
        """
        :type inlets: :any:`Inlet` or list[:any:`Inlet`]
        :param inlets: Row producers, typically one per configuration of a sweep.

        :type outlets: :any:`Outlet` or list[:any:`Outlet`]
        :param outlets: Consumers of the merged rows.

        :type name: str
        :param name: Human readable identifier of this link, prefixes every :any:`Update`. |default| :code:`''`

        :type sort_by: list[str]
        :param sort_by: Columns the merged rows are ordered by. Rows keep inlet order when empty. |default| :code:`()`

        :type workers: int
        :param workers: Threads synchronous inlets are pulled on; :code:`1` pulls them in the event loop. |default| :code:`1`

        :type copy_records: bool
        :param copy_records: Give every outlet its own deep copy of the rows. |default| :code:`True`

        :type catch_exceptions: bool
        :param catch_exceptions: Log exceptions of inlets and outlets and carry on instead of raising. |default| :code:`False`
        """
        self._inlets:List[Inlet] = []
        self._outlets:List[Outlet] = []
        self.add_inlets(inlets)
        self.add_outlets(outlets)
        self._count = -1
        self._name = name
        self._sort_by = tuple(sort_by)
        self._workers = max(1, int(workers))
        self._copy_records = copy_records
        self._catch_exceptions = catch_exceptions

    @staticmethod
    def _added(current:list, nodes, kind:type) -> list:
        nodes = _as_list(nodes)
        for node in nodes:
            assert isinstance(node, kind), f'Expected {kind.__name__}, found: {node!r}'
            if node in current:
                raise InvalidNodeError(f'Link already contains {kind.__name__.lower()}: {node}')
        return current + nodes

    @staticmethod
    def _removed(current:list, nodes, kind:type) -> list:
        remaining = list(current)
        for node in _as_list(nodes):
            if node not in remaining:
                raise InvalidNodeError(f'Link does not contain {kind.__name__.lower()}: {node}')
            remaining.remove(node)
        return remaining

    @property
    def inlets(self) -> List[Inlet]:
        return self._inlets

    def add_inlets(self, inlets: Union[Inlet, List[Inlet]]):
        """
        :raises: :any:`InvalidNodeError` if any of the inlets is already on this link.
        """
        self._inlets = self._added(self._inlets, inlets, Inlet)

    def remove_inlets(self, inlets: Union[Inlet, List[Inlet]]):
        """
        :raises: :any:`InvalidNodeError` if any of the inlets is not on this link.
        """
        self._inlets = self._removed(self._inlets, inlets, Inlet)

    @property
    def outlets(self) -> List[Outlet]:
        return self._outlets

    def add_outlets(self, outlets:Union[Outlet, List[Outlet]]):
        """
        :raises: :any:`InvalidNodeError` if any of the outlets is already on this link.
        """
        self._outlets = self._added(self._outlets, outlets, Outlet)

    def remove_outlets(self, outlets: Union[Outlet, List[Outlet]]):
        """
        :raises: :any:`InvalidNodeError` if any of the outlets is not on this link.
        """
        self._outlets = self._removed(self._outlets, outlets, Outlet)

    @property
    def name(self) -> str:
        return self._name

    @property
    def workers(self) -> int:
        return self._workers

    def transfer(self) -> List[Record]:
        """
        Pull every inlet, order the merged rows and push them to all outlets.

        :returns: The merged rows, in the order they were pushed.
        :rtype: list[:any:`Record`]
        """
        return asyncio.run(self._run())

    async def _guarded(self, start, node, update:Update, kind:str, default=None):
        try:
            return await start()
        except Exception as e:
            if not self._catch_exceptions:
                raise
            _LOGGER.exception(f'{kind} exception: "{e}" for {kind.lower()}: {node}, in: {self}, during: {update}')
            return default

    async def _run(self) -> List[Record]:
        self._count += 1
        update = Update(name=self.name, index=self._count)
        _LOGGER.debug(f'{update} transfer of {len(self._inlets)} inlets on {self._workers} workers')

        executor:Optional[ThreadPoolExecutor] = None
        if self._workers > 1:
            executor = ThreadPoolExecutor(max_workers=self._workers)
        try:
            pulled = await asyncio.gather(*[self._guarded(lambda inlet=inlet: inlet._pull(update, executor), inlet, update, 'Inlet', [])
                                            for inlet in self._inlets])
        finally:
            if executor is not None:
                executor.shutdown(wait=True)

        records = list(itertools.chain.from_iterable(pulled))
        if self._sort_by:
            records.sort(key=lambda record: record.sort_key(self._sort_by))

        await asyncio.gather(*[
            self._guarded(lambda outlet=outlet: outlet._push(copy.deepcopy(records) if self._copy_records else records, update),
                          outlet, update, 'Outlet')
            for outlet in self._outlets])

        _LOGGER.debug(f'{update} done, {len(records)} records')
        return records

    def __repr__(self):
        return "Link(name:'%s', inlets:%s, outlets:%s, workers:%s)" % (self.name, self.inlets, self.outlets, self.workers)
