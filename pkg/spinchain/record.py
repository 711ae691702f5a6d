from typing import Any, Sequence, Tuple


class Record():
    """
    One row of experiment output together with the metadata describing where it came from.

    .. warning:: You should prefer :py:func:`Inlet.new_record() <spinchain.inlet.Inlet.new_record>` function over instantiating this class directly.
    """
    def __init__(self, payload:dict, metadata:dict=None):
        """

        :type payload: dict
        :param payload: Column name to scalar value. Column order is preserved when written out.

        :type metadata: dict
        :param metadata: Metadata attached to this record |default| :code:`None` (Set to empty :code:`dict` if not provided)
        """

        self._payload = payload
        self._metadata = metadata if metadata is not None else {}

    @property
    def payload(self) -> dict:
        """
        :returns: Row values keyed by column.
        :rtype: dict
        """

        return self._payload

    @property
    def metadata(self) -> dict:
        """
        :returns: Metadata attached to this record.
        :rtype: :any:`dict`
        """

        return self._metadata

    @property
    def columns(self) -> Tuple[str, ...]:
        return tuple(self._payload.keys())

    def sort_key(self, columns:Sequence[str]) -> Tuple[Any, ...]:
        """
        Key used to order rows deterministically. Missing or empty values sort first.

        :type columns: list[str]
        :param columns: Columns to order by, most significant first.
        """
        key = []
        for column in columns:
            value = self._payload.get(column)
            if value is None:
                key.append((0, ''))
            elif isinstance(value, str):
                key.append((1, value))
            else:
                key.append((2, value))
        return tuple(key)

    def __repr__(self):
        """
        :returns: Record(payload=%s, metadata=%s)
        """

        return ('Record(payload=%s, metadata=%s)' % (self.payload, self.metadata))
