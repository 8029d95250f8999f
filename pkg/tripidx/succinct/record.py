"""Tagged, versioned binary records.

Every succinct structure serializes itself as::

    magic (4 bytes) | version (1 byte) | n (8 bytes) | w (1 byte) | length (8 bytes) | payload

Records nest: a payload is often the concatenation of child records.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import struct
from typing import NamedTuple

import numpy as np

from tripidx.exceptions import IndexFormatError


RECORD_VERSION = 1
HEADER = struct.Struct('<4sBQBQ')


class Record(NamedTuple):
    magic: bytes
    version: int
    n: int
    w: int
    payload: bytes


def pack_record(magic: bytes, n: int, w: int, payload: bytes, version: int = RECORD_VERSION) -> bytes:
    """Build a record.

    Args:
        magic (bytes): 4 byte tag
        n (int): element count of the structure
        w (int): width parameter (0 when meaningless)
        payload (bytes): body

    Returns:
        bytes: header + payload
    """
    if len(magic) != 4:
        raise ValueError(f"Record magic must be 4 bytes, {magic!r} given")
    return HEADER.pack(magic, version, n, w, len(payload)) + payload


class RecordReader():
    """Sequential reader over concatenated records.

    Args:
        buf (bytes): buffer holding one or more records
    """
    def __init__(self, buf: bytes):
        self.buf = memoryview(buf)
        self.offset = 0

    def at_end(self) -> bool:
        return self.offset >= len(self.buf)

    def peek_magic(self) -> bytes:
        if self.offset + 4 > len(self.buf):
            raise IndexFormatError("Truncated record header")
        return bytes(self.buf[self.offset:self.offset + 4])

    def read(self, *magics: bytes) -> Record:
        """Read the next record and check its tag.

        Args:
            magics (bytes): accepted tags, any tag when none given

        Raises:
            IndexFormatError: on truncation, unexpected tag or unsupported version

        Returns:
            Record: the record
        """
        if self.offset + HEADER.size > len(self.buf):
            raise IndexFormatError("Truncated record header")
        magic, version, n, w, length = HEADER.unpack_from(self.buf, self.offset)
        if magics and magic not in magics:
            raise IndexFormatError(f"Expected record {magics}, found {magic!r}")
        if version != RECORD_VERSION:
            raise IndexFormatError(f"Unsupported record version {version} for {magic!r}")
        start = self.offset + HEADER.size
        end = start + length
        if end > len(self.buf):
            raise IndexFormatError(f"Truncated payload in record {magic!r}")
        self.offset = end
        return Record(magic, version, n, w, bytes(self.buf[start:end]))


def pack_int_array(magic: bytes, values) -> bytes:
    """Record holding plain little endian int64 values (small tables only).
    """
    arr = np.ascontiguousarray(np.asarray(values, dtype='<i8'))
    return pack_record(magic, len(arr), 64, arr.tobytes())

def unpack_int_array(rec: Record) -> np.ndarray:
    arr = np.frombuffer(rec.payload, dtype='<i8')
    if len(arr) != rec.n:
        raise IndexFormatError(f"Record {rec.magic!r} holds {len(arr)} values, header says {rec.n}")
    return arr.astype(np.int64)
