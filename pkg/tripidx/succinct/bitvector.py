"""Plain rank/select bitvector.

Positions in the public interface are 1-based: `rank1(i)` counts the ones in
positions [1, i] and `select1(k)` returns the position of the k-th one.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from bisect import bisect_left
from typing import Union, Iterable

import numpy as np
from bitarray import bitarray
from bitarray.util import count_n

from tripidx.succinct.record import pack_record, Record


LOGGER_NAME = 'tripidx.succinct.bitvector-'
log = logging.getLogger(LOGGER_NAME)


BitsLike = Union[bitarray, str, Iterable[int], np.ndarray]

_POPCOUNT8 = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).sum(axis=1).astype(np.int64)


def to_bitarray(bits: BitsLike) -> bitarray:
    """Copy anything bit-like into a big endian bitarray.

    Accepts a bitarray, a string of `0`/`1`, or any sequence/array of 0/1 values.
    """
    if isinstance(bits, bitarray):
        return bitarray(bits, endian='big')
    if isinstance(bits, str):
        return bitarray(bits, endian='big')
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
    if arr.dtype != np.bool_:
        if len(arr) and (int(arr.min()) < 0 or int(arr.max()) > 1):
            raise ValueError("Bits must be 0 or 1")
    ba = bitarray(endian='big')
    if len(arr):
        ba.frombytes(np.packbits(arr.astype(np.bool_)).tobytes())
        del ba[len(arr):]
    return ba

def bitarray_from_positions(n: int, positions) -> bitarray:
    """Length n bitarray with ones at the given 1-based positions.
    """
    pos = np.asarray(positions, dtype=np.int64)
    if len(pos) and (int(pos.min()) < 1 or int(pos.max()) > n):
        raise ValueError(f"Positions must lie in [1, {n}]")
    arr = np.zeros(n, dtype=np.bool_)
    arr[pos - 1] = True
    return to_bitarray(arr)

def popcount_bytes(buf: bytes) -> np.ndarray:
    """Per byte popcounts of a buffer.
    """
    return _POPCOUNT8[np.frombuffer(buf, dtype=np.uint8)]


class RankSelect(object):
    """Shared rank/select contract.

    Subclasses provide `__len__`, `ones` and `rank1`; everything else has a
    generic (binary search) fallback which faster structures override.
    """
    MAGIC = b'????'

    def __len__(self) -> int:
        raise NotImplementedError

    @property
    def ones(self) -> int:
        raise NotImplementedError

    @property
    def zeros(self) -> int:
        return len(self) - self.ones

    def _check_rank(self, i: int):
        if not 0 <= i <= len(self):
            raise IndexError(f"Rank position {i} out of range [0, {len(self)}]")

    def _check_pos(self, i: int):
        if not 1 <= i <= len(self):
            raise IndexError(f"Position {i} out of range [1, {len(self)}]")

    def rank1(self, i: int) -> int:
        raise NotImplementedError

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def access(self, i: int) -> int:
        self._check_pos(i)
        return self.rank1(i) - self.rank1(i - 1)

    def select1(self, k: int) -> int:
        if not 1 <= k <= self.ones:
            raise IndexError(f"select1({k}) out of range [1, {self.ones}]")
        return bisect_left(range(len(self) + 1), k, key=self.rank1)

    def select0(self, k: int) -> int:
        if not 1 <= k <= self.zeros:
            raise IndexError(f"select0({k}) out of range [1, {self.zeros}]")
        return bisect_left(range(len(self) + 1), k, key=self.rank0)

    def positions(self) -> np.ndarray:
        """1-based positions of all set bits.
        """
        return np.array([self.select1(k) for k in range(1, self.ones + 1)], dtype=np.int64)

    def to_bitarray(self) -> bitarray:
        return bitarray_from_positions(len(self), self.positions())

    def to_record(self) -> bytes:
        raise NotImplementedError

    def size_in_bytes(self) -> int:
        return len(self.to_record())

    def __repr__(self):
        return f'{self.__class__.__name__}(n={len(self)}, ones={self.ones})'


class BitVector(RankSelect):
    """Uncompressed bitvector with a block rank directory.

    The directory keeps one cumulative count per `BLOCK` bits (64 bits of
    counter per 512 bits of data, 12.5% overhead); rank finishes with a
    popcount inside one block and select with a binary search over the
    directory followed by `count_n` inside one block.

    ```python
    bv = BitVector('1010')
    bv.rank1(3)     # 2
    bv.select1(2)   # 3
    ```

    Args:
        bits (BitsLike): bit content
    """
    MAGIC = b'BITV'
    BLOCK = 512

    def __init__(self, bits: BitsLike = ''):
        self._bits = to_bitarray(bits)
        self._build()

    @classmethod
    def from_positions(cls, n: int, positions) -> 'BitVector':
        """Bitvector of length n with ones at the 1-based positions.
        """
        return cls(bitarray_from_positions(n, positions))

    def _build(self):
        pop = popcount_bytes(self._bits.tobytes())
        per_block = self.BLOCK // 8
        pad = (-len(pop)) % per_block
        if pad:
            pop = np.concatenate((pop, np.zeros(pad, dtype=np.int64)))
        blocks = pop.reshape(-1, per_block).sum(axis=1)
        self._dir = np.concatenate(([0], np.cumsum(blocks))).astype(np.int64)
        self._dir_list = self._dir.tolist()
        self._zdir = np.arange(len(self._dir), dtype=np.int64) * self.BLOCK - self._dir
        self._ones = int(self._dir[-1])

    def __len__(self) -> int:
        return len(self._bits)

    @property
    def ones(self) -> int:
        return self._ones

    def rank1(self, i: int) -> int:
        """Number of ones in positions [1, i].

        Raises:
            IndexError: unless 0 ≤ i ≤ n
        """
        if not 0 <= i <= len(self._bits):
            raise IndexError(f"Rank position {i} out of range [0, {len(self._bits)}]")
        b = i // self.BLOCK
        return self._dir_list[b] + self._bits.count(1, b * self.BLOCK, i)

    def access(self, i: int) -> int:
        self._check_pos(i)
        return self._bits[i - 1]

    def select1(self, k: int) -> int:
        """Position of the k-th one.

        Raises:
            IndexError: unless 1 ≤ k ≤ ones
        """
        if not 1 <= k <= self._ones:
            raise IndexError(f"select1({k}) out of range [1, {self._ones}]")
        b = int(np.searchsorted(self._dir, k, side='left')) - 1
        start = b * self.BLOCK
        return start + count_n(self._bits[start:start + self.BLOCK], k - self._dir_list[b])

    def select0(self, k: int) -> int:
        if not 1 <= k <= self.zeros:
            raise IndexError(f"select0({k}) out of range [1, {self.zeros}]")
        b = int(np.searchsorted(self._zdir, k, side='left')) - 1
        start = b * self.BLOCK
        return start + count_n(~self._bits[start:start + self.BLOCK], k - int(self._zdir[b]))

    def positions(self) -> np.ndarray:
        return np.array(list(self._bits.search(bitarray('1'))), dtype=np.int64) + 1

    def to_bitarray(self) -> bitarray:
        return bitarray(self._bits)

    def to_record(self) -> bytes:
        return pack_record(self.MAGIC, len(self._bits), 0, self._bits.tobytes())

    @classmethod
    def from_record(cls, rec: Record) -> 'BitVector':
        ba = bitarray(endian='big')
        ba.frombytes(rec.payload)
        del ba[rec.n:]
        return cls(ba)

    def __eq__(self, other) -> bool:
        return isinstance(other, RankSelect) and len(self) == len(other) and self._bits == other.to_bitarray()
