import logging
import sys
import time

LOG_FORMAT = '%(asctime)s|%(levelname)-.1s| %(message)s (%(name)s)'


class ISO8601Formatter(logging.Formatter):
    """
    Formatter printing record times as ISO 8601 with a configurable number of
    sub-second digits, eg. :code:`2026-03-01T12:00:00.123+0000`.
    """

    def __init__(self, *args, millis_precision:int=3, pretty:bool=False, **kwargs):
        """
        :type millis_precision: int
        :param millis_precision: Number of sub-second digits printed. |default| :code:`3`

        :type pretty: bool
        :param pretty: Use a space instead of :code:`T` and drop the timezone. |default| :code:`False`
        """
        super().__init__(*args, **kwargs)
        self.millis_precision = millis_precision
        self.pretty = pretty

    @property
    def time_format(self) -> str:
        return '%Y-%m-%d %H:%M:%S' if self.pretty else '%Y-%m-%dT%H:%M:%S'

    def set_pretty(self, pretty:bool):
        self.pretty = pretty

    def formatTime(self, record, datefmt=None): # pragma: no cover
        ct = self.converter(record.created)
        stamp = time.strftime(self.time_format, ct)
        zone = '' if self.pretty else time.strftime('%z', ct)

        if self.millis_precision <= 0:
            return stamp + zone

        fraction = int((record.created % 1) * 10 ** self.millis_precision)
        return f'{stamp}.{fraction:0{self.millis_precision}d}{zone}'


def make_handler(stream=None, level:int=logging.DEBUG, pretty:bool=True) -> logging.Handler:
    """
    Create a stream handler using the package's log format.

    :type stream: io.TextIOBase
    :param stream: Stream to write to. |default| :code:`sys.stderr`

    :type level: int
    :param level: Handler level. |default| :code:`logging.DEBUG`

    :returns: Configured handler.
    :rtype: :class:`logging.Handler`
    """
    formatter = ISO8601Formatter(LOG_FORMAT, millis_precision=3, pretty=pretty)
    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def set_verbosity(verbose:bool):
    """
    Switch the package logger between WARNING (default) and INFO.

    :type verbose: bool
    :param verbose: Whether progress messages should be logged.
    """
    logging.getLogger('spinchain').setLevel(logging.INFO if verbose else logging.WARNING)
