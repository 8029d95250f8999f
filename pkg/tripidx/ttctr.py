"""TTCTR: a cyclic CSA over encoded trips aligned with a journey wavelet matrix.

Every trip becomes the symbols of its boarding (stop, line) pairs, the symbol
of its final stop and the terminator 0. Symbols come from the vocabulary:
stop x as a trip end has id x, pair (s, l) has id n_s + n_l(s-1) + l, and the
stored symbol is id′ = rank1(B, id) where B marks the used ids. The journey of
each symbol is kept in suffix array order in a wavelet matrix; the terminator
carries the journey of the first stage.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from typing import Optional, Sequence, List, Tuple, Dict, Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from tripidx.config import BuildConfig
from tripidx.csa import CyclicCsa, build_cyclic_sa, build_psi
from tripidx.exceptions import VocabularyError, TripError, IndexFormatError, DataError
from tripidx.offer import NetworkOffer, offer_checksum
from tripidx.succinct import BitVector, RecordReader, Record, pack_record
from tripidx.succinct.record import pack_int_array, unpack_int_array
from tripidx.trips import UserTrip, check_trip, Triple
from tripidx.utils import bits_needed
from tripidx.wavelet import WaveletMatrix


LOGGER_NAME = 'tripidx.ttctr-'
log = logging.getLogger(LOGGER_NAME)


CONTAINER_MAGIC = b'TTCTR1'


class TripCountQuery(BaseModel):
    """Origin/destination trip count restrictions; times are epoch seconds, [t1, t2)."""
    model_config = ConfigDict(frozen=True)

    start_stop: Optional[int] = None
    end_stop: Optional[int] = None
    start_line: Optional[int] = None
    end_line: Optional[int] = None
    t1: Optional[int] = None
    t2: Optional[int] = None

    @model_validator(mode='after')
    def _check(self) -> 'TripCountQuery':
        if self.start_stop is None and self.end_stop is None:
            raise ValueError("A start or an end stop is required")
        if self.start_line is not None and self.start_stop is None:
            raise ValueError("start_line needs start_stop")
        if self.end_line is not None and self.end_stop is None:
            raise ValueError("end_line needs end_stop")
        if (self.t1 is None) != (self.t2 is None):
            raise ValueError("t1 and t2 go together")
        if self.t1 is not None and self.t2 is not None and self.t1 > self.t2:
            raise ValueError("t1 must not exceed t2")
        return self

    @property
    def timed(self) -> bool:
        return self.t1 is not None


class Vocabulary():
    """Id space of trip symbols.

    Args:
        n_s (int): stops
        n_l (int): lines
        B (BitVector): used ids, length n_s(1 + n_l), 1-based position = id
    """
    MAGIC = b'VOCB'

    def __init__(self, n_s: int, n_l: int, B: BitVector):
        if len(B) != n_s * (1 + n_l):
            raise VocabularyError(f"B has length {len(B)}, expected {n_s * (1 + n_l)}")
        self.n_s = n_s
        self.n_l = n_l
        self.B = B
        self.enders = B.rank1(n_s)

    @classmethod
    def from_ids(cls, n_s: int, n_l: int, ids) -> 'Vocabulary':
        return cls(n_s, n_l, BitVector.from_positions(n_s * (1 + n_l), np.unique(np.asarray(ids, dtype=np.int64))))

    @classmethod
    def topology(cls, o: NetworkOffer) -> 'Vocabulary':
        """Every stop as an end and every (stop, line) of the network."""
        ids = list(range(1, o.n_s + 1))
        ids += [pair_id(o.n_s, o.n_l, s, l.line_id) for l in o.lines for s in l.stops]
        return cls.from_ids(o.n_s, o.n_l, ids)

    @property
    def size(self) -> int:
        """Used entries, the terminator excluded."""
        return self.B.ones

    def _rank_used(self, i: int) -> int:
        rank = self.B.rank1(i)
        if not self.B.access(i):
            raise VocabularyError(f"Vocabulary entry {i} was never observed")
        return rank

    def encode_ender(self, x: int) -> int:
        if not 1 <= x <= self.n_s:
            raise VocabularyError(f"Unknown stop {x}")
        return self._rank_used(x)

    def encode_pair(self, s: int, l: int) -> int:
        """id′ of pair (s, l).

        Raises:
            VocabularyError: if the pair never occurs
        """
        if not (1 <= s <= self.n_s and 1 <= l <= self.n_l):
            raise VocabularyError(f"Pair ({s}, {l}) outside the vocabulary")
        return self._rank_used(pair_id(self.n_s, self.n_l, s, l))

    def pair_range(self, s: int) -> Optional[Tuple[int, int]]:
        """Contiguous id′ range of all used pairs of stop s."""
        base = self.n_s + self.n_l * (s - 1)
        lo = self.B.rank1(base) + 1
        hi = self.B.rank1(base + self.n_l)
        return (lo, hi) if lo <= hi else None

    def is_ender(self, sym: int) -> bool:
        return 1 <= sym <= self.enders

    def decode_symbol(self, sym: int) -> Tuple:
        """('$',) for 0, ('end', stop) for a trip end, ('pair', stop, line) otherwise."""
        if sym == 0:
            return ('$',)
        i = self.B.select1(sym)
        if i <= self.n_s:
            return ('end', i)
        q = i - self.n_s - 1
        return ('pair', q // self.n_l + 1, q % self.n_l + 1)

    def pair_of(self, sym: int) -> Tuple[int, int]:
        d = self.decode_symbol(sym)
        if d[0] != 'pair':
            raise VocabularyError(f"Symbol {sym} is not a (stop, line) pair")
        return d[1], d[2]

    def to_record(self) -> bytes:
        payload = pack_int_array(b'VOCP', [self.n_s, self.n_l]) + self.B.to_record()
        return pack_record(self.MAGIC, self.size, 0, payload)

    @classmethod
    def from_record(cls, rec: Record) -> 'Vocabulary':
        reader = RecordReader(rec.payload)
        n_s, n_l = (int(x) for x in unpack_int_array(reader.read(b'VOCP')))
        return cls(n_s, n_l, BitVector.from_record(reader.read(BitVector.MAGIC)))


def pair_id(n_s: int, n_l: int, s: int, l: int) -> int:
    return n_s + n_l * (s - 1) + l


class TtctrIndex():
    """The index; build with `build_ttctr` or `load_ttctr`."""
    def __init__(self, offer: NetworkOffer, vocab: Vocabulary, csa: CyclicCsa, journeys: WaveletMatrix):
        self.offer = offer
        self.vocab = vocab
        self.csa = csa
        self.journeys = journeys
        if journeys.n != csa.N:
            raise IndexFormatError(f"Wavelet matrix length {journeys.n} differs from the CSA ({csa.N})")

    def encode_pair(self, s: int, l: int) -> int:
        return self.vocab.encode_pair(s, l)

    def _check_query(self, q: TripCountQuery):
        o = self.offer
        for s in (q.start_stop, q.end_stop):
            if s is not None:
                o.stop(s)
        for l in (q.start_line, q.end_line):
            if l is not None:
                o.line(l)

    def _start_symbols(self, q: TripCountQuery) -> Optional[Tuple[int, int]]:
        v = self.vocab
        if q.start_line is not None:
            try:
                sym = v.encode_pair(q.start_stop, q.start_line)  # type: ignore
            except VocabularyError:
                return None
            return sym, sym
        return v.pair_range(q.start_stop)  # type: ignore

    def _match(self, q: TripCountQuery) -> Optional[Tuple[int, int]]:
        """Rank range of the pattern of q: [Y][0][X], [0][X] or [Y][0]."""
        pattern: List[Tuple[int, int]] = []
        if q.end_stop is not None:
            try:
                y = self.vocab.encode_ender(q.end_stop)
            except VocabularyError:
                return None
            pattern.append((y, y))
        pattern.append((0, 0))
        if q.start_stop is not None:
            xs = self._start_symbols(q)
            if xs is None:
                return None
            pattern.append(xs)
        return self.csa.backward_search(pattern)

    def _first_pair(self, term: int) -> Tuple[int, int, int]:
        """(first pair rank, start line, first journey) of the trip whose terminator has rank `term`."""
        f = self.csa.psi(term)
        _, line = self.vocab.pair_of(self.csa.symbol_at(f))
        return f, line, self.journeys.access(term)

    def _last_line(self, first: int) -> int:
        csa, v = self.csa, self.vocab
        r = first
        line = -1
        while True:
            sym = csa.symbol_at(r)
            if v.is_ender(sym):
                return line
            line = v.pair_of(sym)[1]
            r = csa.psi(r)

    def _occurrences(self, q: TripCountQuery) -> Iterator[int]:
        """Terminator ranks of the trips matching q."""
        self._check_query(q)
        rng = self._match(q)
        if rng is None:
            return
        o = self.offer
        from_ender = q.end_stop is not None
        for r in range(rng[0], rng[1] + 1):
            term = self.csa.psi(r) if from_ender else r
            if q.end_line is not None or q.timed:
                first, line, j1 = self._first_pair(term)
                if q.timed and not (q.t1 <= o.departure(line, j1) < q.t2):  # type: ignore
                    continue
                if q.end_line is not None and self._last_line(first) != q.end_line:
                    continue
            yield term

    def count_trips(self, q: TripCountQuery) -> int:
        """Trips matching every restriction of q.

        Raises:
            UnknownStopError, UnknownLineError: on stops or lines outside the offer
        """
        if q.timed and q.end_stop is None:
            return self._count_started_in(q)
        return sum(1 for _ in self._occurrences(q))

    def _count_started_in(self, q: TripCountQuery) -> int:
        # one wavelet matrix range count per boarding line of the start stop
        self._check_query(q)
        v, o = self.vocab, self.offer
        lines = [q.start_line] if q.start_line is not None else o.lines_of_stop(q.start_stop)  # type: ignore
        total = 0
        for l in lines:
            try:
                sym = v.encode_pair(q.start_stop, l)  # type: ignore
            except VocabularyError:
                continue
            jr = o.journeys_in_interval(l, q.t1, q.t2)  # type: ignore
            if jr is None:
                continue
            rng = self.csa.backward_search([(0, 0), (sym, sym)])
            if rng is None:
                continue
            total += self.journeys.range_count(rng[0], rng[1], jr[0], jr[1])
        return total

    def count_boardings(self, s: int, l: int, t1: int, t2: int) -> int:
        """Boardings of line l at stop s on journeys departing in [t1, t2), mid trip ones included."""
        self.offer.stop(s)
        jr = self.offer.journeys_in_interval(l, t1, t2)
        if jr is None:
            return 0
        try:
            sym = self.vocab.encode_pair(s, l)
        except VocabularyError:
            return 0
        rng = self.csa.region(sym)
        if rng is None:
            return 0
        return self.journeys.range_count(rng[0], rng[1], jr[0], jr[1])

    def decode_trip(self, term: int) -> List[Triple]:
        """Canonical triples of the trip whose terminator has rank `term`."""
        csa, v = self.csa, self.vocab
        out: List[Triple] = []
        r = csa.psi(term)
        while r != term:
            sym = csa.symbol_at(r)
            j = self.journeys.access(r)
            d = v.decode_symbol(sym)
            if d[0] == 'pair':
                out.append((d[1], d[2], j))
            else:
                out.append((d[1], out[-1][1], j))
            r = csa.psi(r)
        return out

    def list_matches(self, q: TripCountQuery, limit: Optional[int] = None) -> List[List[Triple]]:
        """Up to `limit` matching trips decoded to canonical triples."""
        res: List[List[Triple]] = []
        if limit is not None and limit <= 0:
            return res
        for term in self._occurrences(q):
            res.append(self.decode_trip(term))
            if limit is not None and len(res) >= limit:
                break
        return res

    def sizes(self) -> Dict[str, int]:
        """Component bytes and the fixed width baselines."""
        csa = self.csa.sizes()
        sizes = {
            'psi': csa['psi'],
            'D': csa['D'],
            'symbols': csa['symbols'],
            'B': self.vocab.B.size_in_bytes(),
            'wm': self.journeys.size_in_bytes(),
        }
        sizes['csa'] = sizes['psi'] + sizes['D'] + sizes['symbols'] + sizes['B']
        sizes['total'] = sizes['csa'] + sizes['wm']
        full_v = 1 + self.vocab.n_s * (1 + self.vocab.n_l)
        sizes['csa_baseline'] = -(-self.csa.n * bits_needed(full_v - 1) // 8)
        sizes['wm_baseline'] = -(-self.csa.n * bits_needed(max(0, self.journeys.sigma - 1)) // 8)
        return sizes

    def __repr__(self):
        return f'TtctrIndex(n={self.csa.n}, vocabulary={self.vocab.size}, sigma_j={self.journeys.sigma})'


def ttctr_sizes(ix: TtctrIndex) -> Dict[str, int]:
    return ix.sizes()

def encode_trips(vocab: Vocabulary, trips: Sequence[UserTrip]) -> Tuple[np.ndarray, np.ndarray]:
    """S and Jcodes, both 0-based arrays of the same length."""
    used = vocab.B.positions()
    n_s, n_l = vocab.n_s, vocab.n_l
    ids: List[int] = []
    jcodes: List[int] = []
    for t in trips:
        for st in t.stages:
            ids.append(pair_id(n_s, n_l, st.stop, st.line))
            jcodes.append(st.journey)
        ids.append(t.last.alight)
        jcodes.append(t.last.journey)
        ids.append(0)
        jcodes.append(t.first.journey)
    raw = np.asarray(ids, dtype=np.int64)
    nz = raw > 0
    k = np.searchsorted(used, raw[nz])
    if len(k) and (int(k.max()) >= len(used) or not bool(np.all(used[np.minimum(k, len(used) - 1)] == raw[nz]))):
        raise VocabularyError("Trips use entries missing from the vocabulary")
    S = np.zeros(len(raw), dtype=np.int64)
    S[nz] = k + 1
    return S, np.asarray(jcodes, dtype=np.int64)

def build_ttctr(o: NetworkOffer, trips: Sequence[UserTrip], cfg: Optional[BuildConfig] = None) -> TtctrIndex:
    """Build the index.

    Raises:
        TripError: naming the first trip inconsistent with the offer
        DataError: on an empty trip list
    """
    cfg = cfg or BuildConfig()
    if not trips:
        raise DataError("Cannot index an empty trip list")
    for t in trips:
        check_trip(o, t)
    if cfg.vocabulary == 'topology':
        vocab = Vocabulary.topology(o)
    else:
        ids = [t.last.alight for t in trips]
        ids += [pair_id(o.n_s, o.n_l, st.stop, st.line) for t in trips for st in t.stages]
        vocab = Vocabulary.from_ids(o.n_s, o.n_l, ids)
    S, jcodes = encode_trips(vocab, trips)
    A, A_inv = build_cyclic_sa(S, cfg.suffix_sort)
    csa = build_psi(A, A_inv, S, cfg.t_psi)
    jpsi = np.zeros(csa.N, dtype=np.int64)
    jpsi[1:] = jcodes[A[2:] - 1]
    wm = WaveletMatrix(jpsi, sigma=max(1, o.max_journeys), rrr_sampling=cfg.wm_sampling)
    ix = TtctrIndex(o, vocab, csa, wm)
    log.info(f'built {ix!r} with t_psi={cfg.t_psi} wm_sampling={cfg.wm_sampling}')
    return ix

def save_ttctr(ix: TtctrIndex, path: str):
    checksum = offer_checksum(ix.offer).encode('ascii')
    with open(path, 'wb') as f:
        f.write(CONTAINER_MAGIC)
        f.write(pack_record(b'OFCK', len(checksum), 8, checksum))
        f.write(ix.vocab.to_record())
        f.write(ix.csa.to_record())
        f.write(ix.journeys.to_record())

def load_ttctr(path: str, offer: NetworkOffer) -> TtctrIndex:
    """Load an index written by `save_ttctr`.

    Raises:
        IndexFormatError: on a foreign file or an index built on another offer
    """
    with open(path, 'rb') as f:
        buf = f.read()
    if not buf.startswith(CONTAINER_MAGIC):
        raise IndexFormatError(f"{path}: not a TTCTR index")
    reader = RecordReader(buf[len(CONTAINER_MAGIC):])
    checksum = reader.read(b'OFCK').payload.decode('ascii')
    if checksum != offer_checksum(offer):
        raise IndexFormatError(f"{path}: index was built on a different offer")
    vocab = Vocabulary.from_record(reader.read(Vocabulary.MAGIC))
    csa = CyclicCsa.from_record(reader.read(CyclicCsa.MAGIC))
    wm = WaveletMatrix.from_record(reader.read(WaveletMatrix.MAGIC))
    return TtctrIndex(offer, vocab, csa, wm)
