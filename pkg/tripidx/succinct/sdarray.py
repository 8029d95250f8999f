"""Sparse (SDArray style) bitvector.

The set positions are split in a low part of `low_width` bits, kept in a
FixedWidthIntArray, and a high part written in unary into a plain BitVector:
the k-th one (0-based) with high value h sets bit h + k of the high vector.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging

import numpy as np

from tripidx.succinct.record import pack_record, Record, RecordReader
from tripidx.succinct.bitvector import RankSelect, BitVector, BitsLike, to_bitarray
from tripidx.succinct.intarray import FixedWidthIntArray


LOGGER_NAME = 'tripidx.succinct.sdarray-'
log = logging.getLogger(LOGGER_NAME)


class SparseBitVector(RankSelect):
    """Elias-Fano coded bitvector with the BitVector rank/select contract.

    Args:
        n (int): length in bits
        positions (array-like): strictly increasing 1-based positions of the ones
    """
    MAGIC = b'SDAR'

    def __init__(self, n: int, positions=()):
        pos = np.asarray(positions, dtype=np.int64)
        if len(pos):
            if int(pos[0]) < 1 or int(pos[-1]) > n:
                raise ValueError(f"Positions must lie in [1, {n}]")
            if len(pos) > 1 and not bool(np.all(np.diff(pos) > 0)):
                raise ValueError("Positions must be strictly increasing")
        self._n = n
        self._m = len(pos)
        low_width = 0
        if self._m and n > self._m:
            low_width = int(np.floor(np.log2(n / self._m)))
        self._lw = low_width
        vals = pos - 1
        highs = vals >> low_width
        self._high = BitVector.from_positions(self._m + (n >> low_width) + 1, highs + np.arange(self._m) + 1)
        self._low = None
        self._low_list: list = []
        if low_width:
            self._low = FixedWidthIntArray.from_values(vals & ((1 << low_width) - 1), w=low_width)
            self._low_list = self._low.to_numpy().tolist()

    @classmethod
    def from_bits(cls, bits: BitsLike) -> 'SparseBitVector':
        ba = to_bitarray(bits)
        return cls(len(ba), BitVector(ba).positions())

    def __len__(self) -> int:
        return self._n

    @property
    def ones(self) -> int:
        return self._m

    @property
    def low_width(self) -> int:
        return self._lw

    def _low_at(self, k: int) -> int:
        return self._low_list[k] if self._lw else 0

    def select1(self, k: int) -> int:
        if not 1 <= k <= self._m:
            raise IndexError(f"select1({k}) out of range [1, {self._m}]")
        high = self._high.select1(k) - k
        return ((high << self._lw) | self._low_at(k - 1)) + 1

    def rank1(self, i: int) -> int:
        """Number of ones in positions [1, i].
        """
        self._check_rank(i)
        if i >= self._n:
            return self._m
        # count values v = position - 1 with v < i
        hx = i >> self._lw
        lx = i & ((1 << self._lw) - 1)
        j = self._high.select0(hx) if hx else 0
        k = j - hx
        hn = len(self._high)
        while j < hn and self._high.access(j + 1) and self._low_at(k) < lx:
            j += 1
            k += 1
        return k

    def positions(self) -> np.ndarray:
        if not self._m:
            return np.zeros(0, dtype=np.int64)
        highs = self._high.positions() - 1 - np.arange(self._m)
        lows = self._low.to_numpy() if self._low is not None else np.zeros(self._m, dtype=np.int64)
        return ((highs << self._lw) | lows) + 1

    def to_record(self) -> bytes:
        payload = self._high.to_record()
        if self._low is not None:
            payload += self._low.to_record()
        return pack_record(self.MAGIC, self._n, self._lw, payload)

    @classmethod
    def from_record(cls, rec: Record) -> 'SparseBitVector':
        reader = RecordReader(rec.payload)
        high = BitVector.from_record(reader.read(BitVector.MAGIC))
        m = high.ones
        obj = cls.__new__(cls)
        obj._n = rec.n
        obj._m = m
        obj._lw = rec.w
        obj._high = high
        obj._low = None
        obj._low_list = []
        if rec.w:
            obj._low = FixedWidthIntArray.from_record(reader.read(FixedWidthIntArray.MAGIC))
            obj._low_list = obj._low.to_numpy().tolist()
        return obj

    def __eq__(self, other) -> bool:
        return isinstance(other, RankSelect) and len(self) == len(other) \
            and bool(np.array_equal(self.positions(), other.positions()))
