"""RRR compressed bitvector.

Bits are cut in blocks of 15. Each block is stored as its class (popcount,
4 bits) plus its offset, the index of the block among all 15-bit words of
that class, written in ⌈log₂ C(15, class)⌉ bits. Every `sample_rate` blocks a
superblock sample keeps the rank and the offset stream pointer.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from math import comb
from bisect import bisect_left

import numpy as np
from bitarray import bitarray
from bitarray.util import ba2int

from tripidx.succinct.record import pack_record, Record, RecordReader
from tripidx.succinct.bitvector import RankSelect, BitsLike, to_bitarray, bitarray_from_positions
from tripidx.succinct.intarray import FixedWidthIntArray


LOGGER_NAME = 'tripidx.succinct.rrr-'
log = logging.getLogger(LOGGER_NAME)


BLOCK_BITS = 15
SAMPLE_RATES = (32, 64, 128)


def _tables():
    words = np.arange(1 << BLOCK_BITS, dtype=np.int64)
    classes = ((words[:, None] >> np.arange(BLOCK_BITS)) & 1).sum(axis=1)
    order = np.lexsort((words, classes))
    class_start = np.concatenate(([0], np.cumsum(np.bincount(classes, minlength=BLOCK_BITS + 1))))
    offset_of = np.empty_like(words)
    offset_of[order] = np.arange(len(words)) - class_start[classes[order]]
    widths = np.array([(comb(BLOCK_BITS, c) - 1).bit_length() for c in range(BLOCK_BITS + 1)], dtype=np.int64)
    return classes, words[order], class_start, offset_of, widths

_CLASS_OF, _WORD_AT, _CLASS_START, _OFFSET_OF, _WIDTH = _tables()
_CLASS_START_L = _CLASS_START.tolist()
_WIDTH_L = _WIDTH.tolist()


class RRRBitVector(RankSelect):
    """Compressed bitvector with the BitVector rank/select contract.

    Bit `b` of a block (0-based) is bit `b` of its 15-bit word, least
    significant first.

    Args:
        bits (BitsLike): bit content
        sample_rate (int): blocks per superblock sample, one of 32, 64, 128
    """
    MAGIC = b'RRRB'

    def __init__(self, bits: BitsLike = '', sample_rate: int = 32):
        if sample_rate not in SAMPLE_RATES:
            raise ValueError(f"RRR sample rate must be one of {SAMPLE_RATES}, {sample_rate} given")
        ba = to_bitarray(bits)
        self._n = len(ba)
        self._s = sample_rate
        nb = -(-self._n // BLOCK_BITS)
        raw = np.zeros(nb * BLOCK_BITS, dtype=np.int64)
        if self._n:
            raw[:self._n] = np.unpackbits(np.frombuffer(ba.tobytes(), dtype=np.uint8))[:self._n]
        words = (raw.reshape(nb, BLOCK_BITS) << np.arange(BLOCK_BITS)).sum(axis=1)
        classes = _CLASS_OF[words]
        offsets = _OFFSET_OF[words]
        widths = _WIDTH[classes]
        ptr = np.concatenate(([0], np.cumsum(widths)))
        stream = np.zeros(int(ptr[-1]), dtype=np.uint8)
        for w in np.unique(widths):
            w = int(w)
            if not w:
                continue
            sel = widths == w
            bits_ = (offsets[sel][:, None] >> np.arange(w - 1, -1, -1)) & 1
            stream[ptr[:-1][sel][:, None] + np.arange(w)] = bits_
        self._offsets = bitarray(endian='big')
        if len(stream):
            self._offsets.frombytes(np.packbits(stream).tobytes())
            del self._offsets[len(stream):]
        self._set_classes(classes.astype(np.int64))

    def _set_classes(self, classes: np.ndarray):
        self._classes = classes
        self._classes_l = classes.tolist()
        cum = np.concatenate(([0], np.cumsum(classes)))
        ptr = np.concatenate(([0], np.cumsum(_WIDTH[classes])))
        self._rank_samples = cum[::self._s].tolist()
        self._ptr_samples = ptr[::self._s].tolist()
        self._ones = int(cum[-1])

    def __len__(self) -> int:
        return self._n

    @property
    def ones(self) -> int:
        return self._ones

    @property
    def sample_rate(self) -> int:
        return self._s

    def _seek(self, blk: int):
        """Rank before block `blk` and the offset pointer of that block."""
        sb = blk // self._s
        ones = self._rank_samples[sb]
        ptr = self._ptr_samples[sb]
        for c in self._classes_l[sb * self._s:blk]:
            ones += c
            ptr += _WIDTH_L[c]
        return ones, ptr

    def _word(self, blk: int, ptr: int) -> int:
        c = self._classes_l[blk]
        w = _WIDTH_L[c]
        off = ba2int(self._offsets[ptr:ptr + w]) if w else 0
        return int(_WORD_AT[_CLASS_START_L[c] + off])

    def rank1(self, i: int) -> int:
        self._check_rank(i)
        blk, r = divmod(i, BLOCK_BITS)
        ones, ptr = self._seek(blk)
        if r:
            ones += (self._word(blk, ptr) & ((1 << r) - 1)).bit_count()
        return ones

    def access(self, i: int) -> int:
        self._check_pos(i)
        blk, r = divmod(i - 1, BLOCK_BITS)
        _, ptr = self._seek(blk)
        return (self._word(blk, ptr) >> r) & 1

    def select1(self, k: int) -> int:
        if not 1 <= k <= self._ones:
            raise IndexError(f"select1({k}) out of range [1, {self._ones}]")
        sb = bisect_left(self._rank_samples, k) - 1
        blk = sb * self._s
        ones, ptr = self._rank_samples[sb], self._ptr_samples[sb]
        while ones + self._classes_l[blk] < k:
            ones += self._classes_l[blk]
            ptr += _WIDTH_L[self._classes_l[blk]]
            blk += 1
        word = self._word(blk, ptr)
        for r in range(BLOCK_BITS):
            if (word >> r) & 1:
                ones += 1
                if ones == k:
                    return blk * BLOCK_BITS + r + 1
        raise AssertionError('unreachable')

    def positions(self) -> np.ndarray:
        return np.flatnonzero(np.frombuffer(self.to_bitarray().unpack(), dtype=np.uint8)) + 1

    def to_bitarray(self) -> bitarray:
        words = np.empty(len(self._classes_l), dtype=np.int64)
        ptr = 0
        for blk, c in enumerate(self._classes_l):
            words[blk] = self._word(blk, ptr)
            ptr += _WIDTH_L[c]
        raw = ((words[:, None] >> np.arange(BLOCK_BITS)) & 1).ravel()[:self._n]
        return bitarray_from_positions(self._n, np.flatnonzero(raw) + 1)

    def to_record(self) -> bytes:
        payload = FixedWidthIntArray.from_values(self._classes, w=4).to_record()
        payload += FixedWidthIntArray.from_values(self._rank_samples).to_record()
        payload += FixedWidthIntArray.from_values(self._ptr_samples).to_record()
        payload += pack_record(b'OFFS', len(self._offsets), 0, self._offsets.tobytes())
        return pack_record(self.MAGIC, self._n, self._s, payload)

    @classmethod
    def from_record(cls, rec: Record) -> 'RRRBitVector':
        reader = RecordReader(rec.payload)
        classes = FixedWidthIntArray.from_record(reader.read(FixedWidthIntArray.MAGIC)).to_numpy()
        # samples are rebuilt from the classes
        reader.read(FixedWidthIntArray.MAGIC)
        reader.read(FixedWidthIntArray.MAGIC)
        offs = reader.read(b'OFFS')
        obj = cls.__new__(cls)
        obj._n = rec.n
        obj._s = rec.w
        obj._offsets = bitarray(endian='big')
        obj._offsets.frombytes(offs.payload)
        del obj._offsets[offs.n:]
        obj._set_classes(classes)
        return obj

    def __eq__(self, other) -> bool:
        return isinstance(other, RankSelect) and len(self) == len(other) and self.to_bitarray() == other.to_bitarray()
