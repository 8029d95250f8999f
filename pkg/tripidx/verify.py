"""Cross checks of both indexes against the brute force oracle.

Every query family is answered by the index and by `tripidx.oracle`; the
first disagreement raises `VerificationError`. Saved indexes are reloaded
and checked the same way.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import os
import logging
import tempfile
from typing import Dict, Sequence, Optional, List

from pydantic import BaseModel

from tripidx.config import BuildConfig, GeneratorConfig
from tripidx.exceptions import VerificationError
from tripidx.offer import NetworkOffer, offer_checksum
from tripidx.trips import UserTrip
from tripidx.tripgen import validate_trip
from tripidx.oracle import TripStore, oracle_count_trips, oracle_boardings, oracle_window, oracle_load, \
    oracle_list, oracle_average
from tripidx.ttctr import TtctrIndex, TripCountQuery, build_ttctr, save_ttctr, load_ttctr
from tripidx.acumm import AccumulatedMatrixPair, build_matrices, save_acumm, load_acumm, day_rows
from tripidx.bench import Workload, TTCTR_FAMILIES, OPEN_FAMILIES


LOGGER_NAME = 'tripidx.verify-'
log = logging.getLogger(LOGGER_NAME)


class VerifyReport(BaseModel):
    trips: int
    checks: Dict[str, int] = {}

    def add(self, family: str, n: int = 1):
        self.checks[family] = self.checks.get(family, 0) + n

    @property
    def total(self) -> int:
        return sum(self.checks.values())


def _expect(family: str, what: str, got, want):
    if got != want:
        raise VerificationError(f"{family}: {what} gave {got}, the oracle says {want}")


def verify_ttctr(ix: TtctrIndex, store: TripStore, report: VerifyReport, queries: int = 200, seed: int = 1):
    """Counts of every trip family, boardings and decoded trips against the oracle."""
    o = store.offer
    w = Workload(o, store.trips, seed)
    for fam in TTCTR_FAMILIES:
        for _ in range(queries):
            if fam == 'JkS1':
                l, s, _, _, (t1, t2) = w.column_query()
                _expect(fam, f'boardings({s},{l},{t1},{t2})', ix.count_boardings(s, l, t1, t2),
                        oracle_boardings(store, s, l, t1, t2))
            else:
                q = w.trip_query(fam)
                _expect(fam, repr(q), ix.count_trips(q), oracle_count_trips(store, q))
            report.add(fam)
    # listing order is by rank, compare as multisets
    for _ in range(min(queries, 50)):
        q = w.trip_query('xy')
        got = sorted(tuple(t) for t in ix.list_matches(q))
        want = sorted(tuple(t) for t in oracle_list(store, q))
        _expect('list', repr(q), got, want)
        report.add('list')
    # start only and end only patterns; timed start only ones take the wavelet matrix path
    for fam in OPEN_FAMILIES:
        for _ in range(queries):
            q = w.trip_query(fam)
            _expect(fam, repr(q), ix.count_trips(q), oracle_count_trips(store, q))
            report.add(fam)
    # stage pairs, the end stop and the terminator of every trip, plus the end sentinel
    n_tokens = sum(len(t.stages) + 2 for t in store.trips) + 1
    _expect('size', 'CSA length', ix.csa.N, n_tokens)
    report.add('size')

def verify_acumm(pairs: Dict[int, AccumulatedMatrixPair], store: TripStore, report: VerifyReport,
                 queries: int = 200, seed: int = 1):
    """Every AcumM query family against the oracle."""
    o = store.offer
    w = Workload(o, store.trips, seed)
    for _ in range(queries):
        l, _, p, rows, (t1, t2) = w.column_query()
        got = 0 if rows is None else pairs[l].boardings_at_stop(p, rows[0], rows[1])
        _expect('JkS1', f'line {l} position {p}', got, oracle_boardings(store, o.line(l).stops[p - 1], l, t1, t2))
        l, j = w.row_query()
        _expect('J1S', f'line {l} journey {j}', pairs[l].journey_boardings(j),
                oracle_window(store, l, j, j, 1, len(o.line(l))))
        l, a, b, c, d = w.window_query()
        _expect('JkSk', f'line {l} on [{a},{b}]x[{c},{d}]', pairs[l].window_boardings(a, b, c, d),
                oracle_window(store, l, a, b, c, d))
        _expect('JkSk', f'line {l} off [{a},{b}]x[{c},{d}]', pairs[l].window_alightings(a, b, c, d),
                oracle_window(store, l, a, b, c, d, kind='off'))
        l, j, x = w.load_query()
        _expect('load', f'line {l} journey {j} after {x}', pairs[l].load_between_stops(j, x),
                oracle_load(store, l, j, x))
        report.add('JkS1')
        report.add('J1S')
        report.add('JkSk', 2)
        report.add('load')
    for l, pair in pairs.items():
        days = [day_rows(o, l, d) for d in range(o.days)]
        _expect('average', f'line {l}', pair.average_over_days(days, 1, pair.cols),
                oracle_average(store, l, days, 1, pair.cols))
        report.add('average')

def verify_trips(o: NetworkOffer, trips: Sequence[UserTrip], cfg: GeneratorConfig, report: VerifyReport):
    """Generator invariants of every trip."""
    for t in trips:
        bad = validate_trip(o, t, cfg)
        if bad:
            raise VerificationError(f"trip {t.trip_id}: {'; '.join(bad)}")
    report.add('trips', len(trips))

def verify_all(o: NetworkOffer, trips: Sequence[UserTrip], build: Optional[BuildConfig] = None,
               queries: int = 200, seed: int = 1, generator: Optional[GeneratorConfig] = None,
               reload: bool = True) -> VerifyReport:
    """Build both indexes, check them, then check them again after a save and load.

    Args:
        generator: also validate the trips against these generator settings

    Raises:
        VerificationError: on the first disagreement
    """
    build = build or BuildConfig()
    report = VerifyReport(trips=len(trips))
    store = TripStore(o, trips)
    if generator is not None:
        verify_trips(o, trips, generator, report)
    ix = build_ttctr(o, trips, build)
    pairs = build_matrices(o, trips, build.encoding, build.capacity)
    verify_ttctr(ix, store, report, queries, seed)
    verify_acumm(pairs, store, report, queries, seed)
    if reload:
        ck = offer_checksum(o)
        with tempfile.TemporaryDirectory() as d:
            save_ttctr(ix, os.path.join(d, 'trips.ttctr'))
            save_acumm(pairs, os.path.join(d, 'trips.acumm'), ck)
            ix2 = load_ttctr(os.path.join(d, 'trips.ttctr'), o)
            pairs2 = load_acumm(os.path.join(d, 'trips.acumm'), ck)
        verify_ttctr(ix2, store, report, max(1, queries // 4), seed + 1)
        verify_acumm(pairs2, store, report, max(1, queries // 4), seed + 1)
    log.info(f'verified {report.total} answers over {len(trips)} trips')
    return report
