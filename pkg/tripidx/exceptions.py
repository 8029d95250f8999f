"""Exceptions.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


class DataError(Exception): pass
class OfferFormatError(DataError): pass
class TripFormatError(DataError): pass
class UnknownStopError(DataError): pass
class UnknownLineError(DataError): pass
class TripError(DataError): pass
class VocabularyError(DataError): pass
class IndexFormatError(DataError): pass
class VerificationError(Exception): pass


class GtfsParseError(DataError):
    """Malformed GTFS input.

    Args:
        message (str): what went wrong.
        file (str, optional): GTFS file name, e.g. `stop_times.txt`.
        row (int, optional): 1-based line number in that file (header is line 1).
    """
    def __init__(self, message: str, file: str = '', row: int = 0):
        self.file = file
        self.row = row
        where = file
        if row:
            where = f'{file}:{row}'
        super().__init__(f'{where}: {message}' if where else message)
