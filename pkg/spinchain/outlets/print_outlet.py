import sys
from typing import List

from spinchain.outlet import Outlet
from spinchain.record import Record


class PrintOutlet(Outlet):
    """
    Outlet printing progress of a transfer to stdout: one line per transfer, optionally followed by the rows.
    """

    def __init__(self, only_summary:bool=True, skip_update:bool=False, stream=None):
        """
        :param only_summary: If True, prints only the row count instead of every row.
        :type only_summary: bool

        :param skip_update: If True, Update prefix will not be added to the print.
        :type skip_update: bool

        :param stream: Stream to print to. |default| :code:`sys.stdout`
        """

        super().__init__()
        self.only_summary = only_summary
        self.skip_update = skip_update
        self.stream = stream

    async def push(self, records:List[Record], update):
        """
        Prints the progress line.

        :type records: list[:any:`Record`]
        :param records: Rows of the transfer.

        :type update: :any:`Update`
        :param update: Update object representing the particular Link update run.
        """
        stream = self.stream if self.stream is not None else sys.stdout
        prefix = str(update)+' ' if not self.skip_update else ''
        print(f'{prefix}{len(records)} rows', file=stream)
        if not self.only_summary:
            for record in records:
                print(f'{prefix}{record.payload}', file=stream)
