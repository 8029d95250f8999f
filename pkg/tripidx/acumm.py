"""AcumM: per line accumulated get-on / get-off matrices.

Rows are journeys (row r is journey r-1), columns are the stops of the line in
travel order. M(r, c) is the sum of the raw counts over [1, r] x [1, c], so any
window sum takes four reads. Row 0 and column 0 are virtual zeros.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from fractions import Fraction
from typing import Dict, Sequence, Optional, Tuple, List, Union

import numpy as np

from tripidx.exceptions import DataError, IndexFormatError
from tripidx.offer import NetworkOffer
from tripidx.succinct import FixedWidthIntArray, RecordReader, Record, pack_record
from tripidx.succinct.record import pack_int_array, unpack_int_array
from tripidx.trips import UserTrip, check_trip
from tripidx.utils import bits_needed


LOGGER_NAME = 'tripidx.acumm-'
log = logging.getLogger(LOGGER_NAME)


CONTAINER_MAGIC = b'ACUMM1'
ENCODINGS = ('plain', 'diff')


def accumulate(raw: np.ndarray) -> np.ndarray:
    """2D prefix sums of a raw count matrix."""
    return np.asarray(raw, dtype=np.int64).cumsum(axis=0).cumsum(axis=1)

def middle_column(cols: int) -> int:
    """1-based explicit column of a differential matrix, ⌈(cols+1)/2⌉."""
    return (cols + 2) // 2


class _Matrix():
    MAGIC = b'????'
    rows: int
    cols: int

    def cell(self, r: int, c: int) -> int:
        raise NotImplementedError

    def count_range(self, x1: int, y1: int, x2: int, y2: int) -> int:
        """Sum of the raw counts over rows [x1, x2] and columns [y1, y2], four reads.

        Raises:
            ValueError: if the window is empty or out of the matrix
        """
        if not (1 <= x1 <= x2 <= self.rows and 1 <= y1 <= y2 <= self.cols):
            raise ValueError(f"Window ({x1},{y1})-({x2},{y2}) outside a {self.rows}x{self.cols} matrix")
        return self.cell(x2, y2) - self.cell(x2, y1 - 1) - self.cell(x1 - 1, y2) + self.cell(x1 - 1, y1 - 1)

    def to_numpy(self) -> np.ndarray:
        return np.array([[self.cell(r, c) for c in range(1, self.cols + 1)] for r in range(1, self.rows + 1)],
                        dtype=np.int64).reshape(self.rows, self.cols)

    def payload_bytes(self) -> int:
        raise NotImplementedError

    def to_record(self) -> bytes:
        raise NotImplementedError


class AccumulatedMatrix(_Matrix):
    """Accumulated matrix stored as 32 bit cells."""
    MAGIC = b'ACPL'

    def __init__(self, acc: np.ndarray):
        acc = np.asarray(acc, dtype=np.int64)
        if acc.ndim != 2:
            raise ValueError("Accumulated matrix must be two dimensional")
        if acc.size and int(acc.max()) >= 1 << 32:
            raise DataError("Accumulated counts exceed 32 bits")
        self.rows, self.cols = acc.shape
        self.cells = acc.astype(np.uint32)
        self._flat = self.cells.ravel().tolist()

    @classmethod
    def from_raw(cls, raw: np.ndarray) -> 'AccumulatedMatrix':
        return cls(accumulate(raw))

    def cell(self, r: int, c: int) -> int:
        if r == 0 or c == 0:
            return 0
        return self._flat[(r - 1) * self.cols + c - 1]

    def to_numpy(self) -> np.ndarray:
        return self.cells.astype(np.int64)

    def payload_bytes(self) -> int:
        return self.cells.size * 4

    def to_record(self) -> bytes:
        return pack_record(self.MAGIC, self.rows, 32, pack_int_array(b'SHAP', [self.rows, self.cols])
                           + self.cells.astype('<u4').tobytes())

    @classmethod
    def from_record(cls, rec: Record) -> 'AccumulatedMatrix':
        reader = RecordReader(rec.payload)
        rows, cols = (int(x) for x in unpack_int_array(reader.read(b'SHAP')))
        body = rec.payload[reader.offset:]
        if len(body) != rows * cols * 4:
            raise IndexFormatError("Truncated accumulated matrix")
        return cls(np.frombuffer(body, dtype='<u4').reshape(rows, cols))


class DifferentialMatrix(_Matrix):
    """Accumulated matrix as an explicit middle column plus per cell magnitudes.

    Column m = ⌈(cols+1)/2⌉ is stored with 32 bits per row. Every other cell
    stores |M(r, c) - M(r, m)| with one global width ⌈log₂(N+1)⌉; the sign
    follows from the side of m (M grows along columns).
    """
    MAGIC = b'ACDF'

    def __init__(self, rows: int, cols: int, middle: np.ndarray, diffs: FixedWidthIntArray):
        self.rows = rows
        self.cols = cols
        self.m = middle_column(cols)
        if len(middle) and int(np.max(middle)) >= 1 << 32:
            raise DataError("Accumulated counts exceed 32 bits")
        self.middle = np.asarray(middle, dtype=np.uint32)
        self._middle = self.middle.tolist()
        self.diffs = diffs

    @classmethod
    def from_accumulated(cls, acc: np.ndarray) -> 'DifferentialMatrix':
        acc = np.asarray(acc, dtype=np.int64)
        if acc.size and int(acc.max()) >= 1 << 32:
            raise DataError("Accumulated counts exceed 32 bits")
        rows, cols = acc.shape
        m = middle_column(cols)
        mid = acc[:, m - 1] if cols else np.zeros(rows, dtype=np.int64)
        rest = np.delete(acc, m - 1, axis=1) if cols else acc
        mags = np.abs(rest - mid[:, None])
        return cls(rows, cols, mid, FixedWidthIntArray.from_values(mags.ravel()))

    @property
    def width(self) -> int:
        return self.diffs.width

    def cell(self, r: int, c: int) -> int:
        if r == 0 or c == 0:
            return 0
        mid = self._middle[r - 1]
        m = self.m
        if c == m:
            return mid
        base = (r - 1) * (self.cols - 1)
        if c < m:
            return mid - self.diffs.get(base + c - 1)
        return mid + self.diffs.get(base + c - 2)

    def payload_bytes(self) -> int:
        return self.rows * 4 + -(-len(self.diffs) * self.diffs.width // 8)

    def to_record(self) -> bytes:
        payload = pack_int_array(b'SHAP', [self.rows, self.cols])
        payload += pack_record(b'MIDC', self.rows, 32, self.middle.astype('<u4').tobytes())
        payload += self.diffs.to_record()
        return pack_record(self.MAGIC, self.rows, self.diffs.width, payload)

    @classmethod
    def from_record(cls, rec: Record) -> 'DifferentialMatrix':
        reader = RecordReader(rec.payload)
        rows, cols = (int(x) for x in unpack_int_array(reader.read(b'SHAP')))
        mid = np.frombuffer(reader.read(b'MIDC').payload, dtype='<u4')
        diffs = FixedWidthIntArray.from_record(reader.read(FixedWidthIntArray.MAGIC))
        return cls(rows, cols, mid, diffs)


Matrix = Union[AccumulatedMatrix, DifferentialMatrix]


def make_matrix(raw: np.ndarray, encoding: str = 'plain') -> Matrix:
    if encoding == 'plain':
        return AccumulatedMatrix.from_raw(raw)
    if encoding == 'diff':
        return DifferentialMatrix.from_accumulated(accumulate(raw))
    raise ValueError(f"Unknown encoding {encoding!r}, choose from {ENCODINGS}")

def matrix_from_record(rec: Record) -> Matrix:
    if rec.magic == AccumulatedMatrix.MAGIC:
        return AccumulatedMatrix.from_record(rec)
    if rec.magic == DifferentialMatrix.MAGIC:
        return DifferentialMatrix.from_record(rec)
    raise IndexFormatError(f"Not a matrix record: {rec.magic!r}")


class AccumulatedMatrixPair():
    """Get-on and get-off matrices of one line and the load queries over them."""
    def __init__(self, line_id: int, on: Matrix, off: Matrix):
        if (on.rows, on.cols) != (off.rows, off.cols):
            raise DataError(f"Line {line_id}: get-on and get-off matrices differ in shape")
        self.line_id = line_id
        self.on = on
        self.off = off

    @property
    def rows(self) -> int:
        return self.on.rows

    @property
    def cols(self) -> int:
        return self.on.cols

    @property
    def encoding(self) -> str:
        return 'diff' if isinstance(self.on, DifferentialMatrix) else 'plain'

    def boardings_at_stop(self, stop_pos: int, j_lo: int, j_hi: int) -> int:
        """Boardings at one stop over journeys [j_lo, j_hi]; 0 for an empty range."""
        if j_lo > j_hi:
            return 0
        return self.on.count_range(j_lo + 1, stop_pos, j_hi + 1, stop_pos)

    def journey_boardings(self, j: int) -> int:
        """Boardings over all stops of journey j."""
        if not 0 <= j < self.rows:
            raise IndexError(f"Line {self.line_id} has no journey {j}")
        return self.on.count_range(j + 1, 1, j + 1, self.cols)

    def window_boardings(self, j_lo: int, j_hi: int, p_lo: int, p_hi: int) -> int:
        return self.on.count_range(j_lo + 1, p_lo, j_hi + 1, p_hi)

    def window_alightings(self, j_lo: int, j_hi: int, p_lo: int, p_hi: int) -> int:
        return self.off.count_range(j_lo + 1, p_lo, j_hi + 1, p_hi)

    def load_between_stops(self, j: int, x: int) -> int:
        """Passengers aboard journey j between stop positions x and x+1."""
        if not 1 <= x < self.cols:
            raise ValueError(f"No segment after stop position {x} on line {self.line_id}")
        up = self.on.count_range(j + 1, 1, j + 1, x)
        down = self.off.count_range(j + 1, 1, j + 1, x)
        return up - down

    def average_over_days(self, days: Sequence[Optional[Tuple[int, int]]], p_lo: int, p_hi: int) -> Fraction:
        """Mean window boardings per day; a day is a journey range, None when it has no journeys."""
        if not days:
            raise ValueError("At least one day is needed")
        total = sum(self.window_boardings(d[0], d[1], p_lo, p_hi) for d in days if d is not None)
        return Fraction(total, len(days))

    def payload_bytes(self) -> int:
        return self.on.payload_bytes() + self.off.payload_bytes()

    def to_record(self) -> bytes:
        return pack_record(b'ACLP', self.line_id, 0, self.on.to_record() + self.off.to_record())

    @classmethod
    def from_record(cls, rec: Record) -> 'AccumulatedMatrixPair':
        reader = RecordReader(rec.payload)
        on = matrix_from_record(reader.read())
        off = matrix_from_record(reader.read())
        return cls(rec.n, on, off)


def raw_counts(o: NetworkOffer, trips: Sequence[UserTrip]) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
    """M⁺ get-on and get-off count matrices of every line.

    Raises:
        TripError: naming the first trip inconsistent with the offer
    """
    cols: Dict[str, List[int]] = {'line': [], 'row': [], 'on': [], 'off': []}
    for t in trips:
        check_trip(o, t)
        for st in t.stages:
            line = o.lines[st.line - 1]
            cols['line'].append(st.line)
            cols['row'].append(st.journey)
            cols['on'].append(line.position(st.stop) - 1)
            cols['off'].append(line.position(st.alight) - 1)
    arr = {k: np.asarray(v, dtype=np.int64) for k, v in cols.items()}
    res = {}
    for line in o.lines:
        shape = (o.journeys(line.line_id), len(line))
        on = np.zeros(shape, dtype=np.int64)
        off = np.zeros(shape, dtype=np.int64)
        sel = arr['line'] == line.line_id
        np.add.at(on, (arr['row'][sel], arr['on'][sel]), 1)
        np.add.at(off, (arr['row'][sel], arr['off'][sel]), 1)
        res[line.line_id] = (on, off)
    return res

def check_capacity(line_id: int, raw: np.ndarray, capacity: int):
    """Per journey, the raw counts between any column c and the middle one stay within |c-m|·C.

    Raises:
        DataError: if a journey carries more events than its capacity allows
    """
    if not raw.size:
        return
    m = middle_column(raw.shape[1])
    row_acc = raw.cumsum(axis=1)
    diff = np.abs(row_acc - row_acc[:, [m - 1]])
    bound = np.abs(np.arange(1, raw.shape[1] + 1) - m) * capacity
    if bool(np.any(diff > bound[None, :])):
        raise DataError(f"Line {line_id}: counts exceed the vehicle capacity {capacity}")

def build_matrices(o: NetworkOffer, trips: Sequence[UserTrip], encoding: str = 'plain',
                   capacity: Optional[int] = None) -> Dict[int, AccumulatedMatrixPair]:
    """AcumM of every line of the offer."""
    if encoding not in ENCODINGS:
        raise ValueError(f"Unknown encoding {encoding!r}, choose from {ENCODINGS}")
    pairs = {}
    for l, (on, off) in raw_counts(o, trips).items():
        if capacity is not None:
            check_capacity(l, on, capacity)
            check_capacity(l, off, capacity)
        pairs[l] = AccumulatedMatrixPair(l, make_matrix(on, encoding), make_matrix(off, encoding))
    log.info(f'built {encoding} AcumM for {len(pairs)} lines over {len(trips)} trips')
    return pairs

def day_rows(o: NetworkOffer, l: int, day: int) -> Optional[Tuple[int, int]]:
    """Journey range of line l departing on the 0-based day of the period."""
    t1, t2 = o.day_interval(day)
    return o.journeys_in_interval(l, t1, t2)

def acumm_sizes(pairs: Dict[int, AccumulatedMatrixPair]) -> Dict[str, int]:
    """Payload bytes of get-on and get-off matrices."""
    sizes = {'on': 0, 'off': 0}
    for p in pairs.values():
        sizes['on'] += p.on.payload_bytes()
        sizes['off'] += p.off.payload_bytes()
    sizes['total'] = sizes['on'] + sizes['off']
    return sizes

def save_acumm(pairs: Dict[int, AccumulatedMatrixPair], path: str, checksum: str = ''):
    ck = checksum.encode('ascii')
    with open(path, 'wb') as f:
        f.write(CONTAINER_MAGIC)
        f.write(pack_record(b'OFCK', len(ck), 8, ck))
        for l in sorted(pairs):
            f.write(pairs[l].to_record())

def load_acumm(path: str, checksum: Optional[str] = None) -> Dict[int, AccumulatedMatrixPair]:
    """Load matrices written by `save_acumm`.

    Raises:
        IndexFormatError: on a foreign file, or a checksum different from the expected one
    """
    with open(path, 'rb') as f:
        buf = f.read()
    if not buf.startswith(CONTAINER_MAGIC):
        raise IndexFormatError(f"{path}: not an AcumM index")
    reader = RecordReader(buf[len(CONTAINER_MAGIC):])
    stored = reader.read(b'OFCK').payload.decode('ascii')
    if checksum is not None and stored != checksum:
        raise IndexFormatError(f"{path}: index was built on a different offer")
    pairs = {}
    while not reader.at_end():
        p = AccumulatedMatrixPair.from_record(reader.read(b'ACLP'))
        pairs[p.line_id] = p
    return pairs
