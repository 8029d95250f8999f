"""Wavelet matrix over a sequence of non-negative integers.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from typing import Optional, Sequence, List

import numpy as np

from tripidx.utils import bits_needed
from tripidx.succinct import RankSelect, make_bitvector, bitvector_from_record, RecordReader, Record, pack_record
from tripidx.succinct.record import pack_int_array, unpack_int_array


LOGGER_NAME = 'tripidx.wavelet-'
log = logging.getLogger(LOGGER_NAME)


class WaveletMatrix():
    """Access and two dimensional range counting over `values`.

    Level 0 holds the most significant bit. Positions are 1-based.

    Args:
        values (Sequence[int]): the sequence
        sigma (int, optional): alphabet size, defaults to max(values) + 1
        rrr_sampling (int, optional): use RRR bitmaps with this sampling
    """
    MAGIC = b'WMX1'

    def __init__(self, values: Sequence[int] = (), sigma: Optional[int] = None, rrr_sampling: Optional[int] = None):
        cur = np.asarray(values, dtype=np.int64)
        if len(cur) and int(cur.min()) < 0:
            raise ValueError("Wavelet matrix values must be non-negative")
        top = int(cur.max()) if len(cur) else 0
        self.sigma = max(sigma or 0, top + 1)
        self.rrr_sampling = rrr_sampling
        self.n = len(cur)
        self.height = bits_needed(self.sigma - 1)
        self.levels: List[RankSelect] = []
        for lv in range(self.height):
            bits = ((cur >> (self.height - 1 - lv)) & 1).astype(np.bool_)
            self.levels.append(make_bitvector(bits, rrr_sampling))
            cur = np.concatenate((cur[~bits], cur[bits]))
        self._zeros = [bv.zeros for bv in self.levels]
        log.debug(f'built {self!r}')

    def __len__(self) -> int:
        return self.n

    def access(self, i: int) -> int:
        """Value at position i."""
        if not 1 <= i <= self.n:
            raise IndexError(f"Position {i} out of range [1, {self.n}]")
        p = i - 1
        v = 0
        for bv, z in zip(self.levels, self._zeros):
            if bv.access(p + 1):
                p = z + bv.rank1(p)
                v = (v << 1) | 1
            else:
                p = bv.rank0(p)
                v <<= 1
        return v

    def _count_less(self, lo: int, hi: int, x: int) -> int:
        # values < x among 0-based positions [lo, hi)
        if x <= 0:
            return 0
        if x >= (1 << self.height):
            return hi - lo
        res = 0
        for lv, (bv, z) in enumerate(zip(self.levels, self._zeros)):
            r0lo, r0hi = bv.rank0(lo), bv.rank0(hi)
            if (x >> (self.height - 1 - lv)) & 1:
                res += r0hi - r0lo
                lo, hi = z + lo - r0lo, z + hi - r0hi
            else:
                lo, hi = r0lo, r0hi
            if lo >= hi:
                break
        return res

    def range_count(self, pos_lo: int, pos_hi: int, val_lo: int, val_hi: int) -> int:
        """Number of positions in [pos_lo, pos_hi] holding a value in [val_lo, val_hi].

        Raises:
            ValueError: on an invalid position or value range
        """
        if not 1 <= pos_lo <= pos_hi <= self.n:
            raise ValueError(f"Invalid position range [{pos_lo}, {pos_hi}] for length {self.n}")
        if not 0 <= val_lo <= val_hi:
            raise ValueError(f"Invalid value range [{val_lo}, {val_hi}]")
        lo, hi = pos_lo - 1, pos_hi
        return self._count_less(lo, hi, val_hi + 1) - self._count_less(lo, hi, val_lo)

    def to_numpy(self) -> np.ndarray:
        return np.array([self.access(i) for i in range(1, self.n + 1)], dtype=np.int64)

    def size_in_bytes(self) -> int:
        return len(self.to_record())

    def to_record(self) -> bytes:
        payload = pack_int_array(b'WMXP', [self.sigma, self.rrr_sampling or 0])
        for bv in self.levels:
            payload += bv.to_record()
        return pack_record(self.MAGIC, self.n, self.height, payload)

    @classmethod
    def from_record(cls, rec: Record) -> 'WaveletMatrix':
        reader = RecordReader(rec.payload)
        sigma, rrr = (int(x) for x in unpack_int_array(reader.read(b'WMXP')))
        obj = cls.__new__(cls)
        obj.sigma = sigma
        obj.rrr_sampling = rrr or None
        obj.n = rec.n
        obj.height = rec.w
        obj.levels = [bitvector_from_record(reader.read()) for _ in range(rec.w)]
        obj._zeros = [bv.zeros for bv in obj.levels]
        return obj

    def __repr__(self):
        return f'WaveletMatrix(n={self.n}, sigma={self.sigma}, levels={self.height})'
