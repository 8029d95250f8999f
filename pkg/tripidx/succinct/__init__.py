"""Succinct building blocks: bitvectors with rank/select and packed integer arrays.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


from typing import Optional

from tripidx.succinct.record import Record, RecordReader, pack_record
from tripidx.succinct.intarray import FixedWidthIntArray
from tripidx.succinct.bitvector import RankSelect, BitVector, BitsLike
from tripidx.succinct.sdarray import SparseBitVector
from tripidx.succinct.rrr import RRRBitVector
from tripidx.exceptions import IndexFormatError


_BY_MAGIC = {
    BitVector.MAGIC: BitVector,
    SparseBitVector.MAGIC: SparseBitVector,
    RRRBitVector.MAGIC: RRRBitVector,
}


def make_bitvector(bits: BitsLike, rrr_sampling: Optional[int] = None) -> RankSelect:
    """Plain bitvector, or an RRR one when a sampling rate is given.
    """
    if rrr_sampling:
        return RRRBitVector(bits, rrr_sampling)
    return BitVector(bits)

def bitvector_from_record(rec: Record) -> RankSelect:
    """Load any bitvector kind from its record.
    """
    try:
        cls = _BY_MAGIC[rec.magic]
    except KeyError:
        raise IndexFormatError(f"Not a bitvector record: {rec.magic!r}") from None
    return cls.from_record(rec)
