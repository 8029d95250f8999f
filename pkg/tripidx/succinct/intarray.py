"""Fixed width integer array.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


from typing import Iterator, Optional

import numpy as np
from bitarray import bitarray
from bitarray.util import zeros, ba2int, int2ba

from tripidx.utils import bits_needed
from tripidx.succinct.record import pack_record, Record
from tripidx.exceptions import IndexFormatError


class FixedWidthIntArray(object):
    """Array of `n` unsigned integers, each stored in exactly `w` bits.

    ```python
    a = FixedWidthIntArray.from_values([5, 2, 7], w=3)
    a[2]        # 7
    a[0] = 1
    ```

    Args:
        n (int): number of values
        w (int): bits per value, 1 to 64
    """
    MAGIC = b'FWIA'

    def __init__(self, n: int, w: int):
        if not 1 <= w <= 64:
            raise ValueError(f"Width must be in [1, 64], {w} given")
        if n < 0:
            raise ValueError(f"Negative length: {n}")
        self._n = n
        self._w = w
        self._bits = zeros(n * w, endian='big')

    @classmethod
    def from_values(cls, values, w: Optional[int] = None) -> 'FixedWidthIntArray':
        """Pack values; the width defaults to the smallest one fitting the maximum.

        Raises:
            ValueError: if a value is negative or does not fit in `w` bits
        """
        arr = np.asarray(values, dtype=np.int64).ravel()
        if len(arr) and int(arr.min()) < 0:
            raise ValueError("FixedWidthIntArray stores non-negative values only")
        top = int(arr.max()) if len(arr) else 0
        if w is None:
            w = bits_needed(top)
        elif top >= (1 << w):
            raise ValueError(f"Value {top} does not fit in {w} bits")
        obj = cls(0, w)
        obj._n = len(arr)
        if len(arr):
            shifts = np.arange(w - 1, -1, -1, dtype=np.uint64)
            bits = ((arr.astype(np.uint64)[:, None] >> shifts) & np.uint64(1)).astype(np.uint8).ravel()
            ba = bitarray(endian='big')
            ba.frombytes(np.packbits(bits).tobytes())
            del ba[len(bits):]
            obj._bits = ba
        return obj

    @property
    def width(self) -> int:
        return self._w

    def __len__(self) -> int:
        return self._n

    def _check(self, i: int) -> int:
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(f"Index {i} out of range [0, {self._n})")
        return i

    def get(self, i: int) -> int:
        """Return the i-th value (0-based).
        """
        i = self._check(i)
        w = self._w
        return ba2int(self._bits[i * w:(i + 1) * w])

    def set(self, i: int, v: int):
        """Store `v` at position i (0-based), neighbours are untouched.
        """
        i = self._check(i)
        if not 0 <= v < (1 << self._w):
            raise ValueError(f"Value {v} does not fit in {self._w} bits")
        w = self._w
        self._bits[i * w:(i + 1) * w] = int2ba(int(v), length=w, endian='big')

    __getitem__ = get
    __setitem__ = set

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_numpy().tolist())

    def to_numpy(self) -> np.ndarray:
        """All values as an int64 array.
        """
        n, w = self._n, self._w
        if not n:
            return np.zeros(0, dtype=np.int64)
        raw = np.unpackbits(np.frombuffer(self._bits.tobytes(), dtype=np.uint8))[:n * w]
        shifts = np.arange(w - 1, -1, -1, dtype=np.uint64)
        vals = (raw.reshape(n, w).astype(np.uint64) << shifts).sum(axis=1, dtype=np.uint64)
        return vals.astype(np.int64)

    def to_record(self) -> bytes:
        return pack_record(self.MAGIC, self._n, self._w, self._bits.tobytes())

    @classmethod
    def from_record(cls, rec: Record) -> 'FixedWidthIntArray':
        obj = cls(0, max(1, rec.w))
        obj._n = rec.n
        ba = bitarray(endian='big')
        ba.frombytes(rec.payload)
        if len(ba) < rec.n * rec.w:
            raise IndexFormatError("Truncated FixedWidthIntArray payload")
        del ba[rec.n * rec.w:]
        obj._bits = ba
        return obj

    def size_in_bytes(self) -> int:
        return len(self.to_record())

    def __eq__(self, other) -> bool:
        return isinstance(other, FixedWidthIntArray) and self._w == other._w and self._bits == other._bits

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self._n}, w={self._w})'
