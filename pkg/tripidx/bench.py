"""Query workloads and the benchmark harness.

A workload draws queries of one family from the trips themselves, so most
queries hit. The harness builds every requested configuration, times each
family with `time.perf_counter_ns` after a warm up and reports one row per
(structure, configuration, family).
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import os
import time
import asyncio
import logging
import tempfile
from itertools import product
from typing import List, Dict, Any, Sequence, Callable, Optional, Tuple

import numpy as np
import pandas as pd

from tripidx.config import BuildConfig, BenchConfig, OPEN_QUERY_FAMILIES
from tripidx.offer import NetworkOffer, offer_sizes
from tripidx.trips import UserTrip
from tripidx.ttctr import TripCountQuery, TtctrIndex, build_ttctr, save_ttctr
from tripidx.acumm import AccumulatedMatrixPair, build_matrices, save_acumm, acumm_sizes, day_rows


LOGGER_NAME = 'tripidx.bench-'
log = logging.getLogger(LOGGER_NAME)


TTCTR_FAMILIES = ('xy', 'xyS', 'xyE', 'xySE', 'xyT', 'xyST', 'xyET', 'xySET', 'JkS1')
OPEN_FAMILIES = OPEN_QUERY_FAMILIES
ACUMM_FAMILIES = ('JkS1', 'J1S', 'JkSk', 'load')


class Workload():
    """Random queries over one offer and trip set.

    Args:
        offer (NetworkOffer): the offer
        trips (Sequence[UserTrip]): trips to draw stops, lines and days from
        seed (int): RNG seed
    """
    def __init__(self, offer: NetworkOffer, trips: Sequence[UserTrip], seed: int = 1):
        self.offer = offer
        self.trips = list(trips)
        self.rng = np.random.default_rng(seed)
        self.active = [l.line_id for l, s in zip(offer.lines, offer.schedules) if len(s)]

    def _trip(self) -> UserTrip:
        return self.trips[int(self.rng.integers(len(self.trips)))]

    def trip_query(self, family: str) -> TripCountQuery:
        """A query of one of the xy, x or y families, built around a random trip.

        `x` fixes the start stop, `y` the end stop; S, E and T add the start
        line, the end line and the day of the first departure.
        """
        t = self._trip()
        ends = family.rstrip('SET')
        flags = family[len(ends):]
        kw: Dict[str, Any] = {}
        if 'x' in ends:
            kw['start_stop'] = t.first.stop
        if 'y' in ends:
            kw['end_stop'] = t.last.alight
        if 'S' in flags:
            kw['start_line'] = t.first.line
        if 'E' in flags:
            kw['end_line'] = t.last.line
        if 'T' in flags:
            day = self.offer.day_of(self.offer.departure(t.first.line, t.first.journey))
            if self.rng.random() < 0.25:
                day = int(self.rng.integers(self.offer.days))
            kw['t1'], kw['t2'] = self.offer.day_interval(day)
        return TripCountQuery(**kw)

    def column_query(self) -> Tuple[int, int, int, Optional[Tuple[int, int]], Tuple[int, int]]:
        """(line, stop, stop position, journey range of a day, day interval) for J^kS^1."""
        st = self._trip().stages[0] if self.rng.random() < 0.5 else None
        if st is None:
            l = self.active[int(self.rng.integers(len(self.active)))]
            line = self.offer.line(l)
            p = int(self.rng.integers(1, len(line) + 1))
            day = int(self.rng.integers(self.offer.days))
        else:
            l, line = st.line, self.offer.line(st.line)
            p = line.position(st.stop)
            day = self.offer.day_of(self.offer.departure(l, st.journey))
        return l, line.stops[p - 1], p, day_rows(self.offer, l, day), self.offer.day_interval(day)

    def row_query(self) -> Tuple[int, int]:
        l = self.active[int(self.rng.integers(len(self.active)))]
        return l, int(self.rng.integers(self.offer.journeys(l)))

    def window_query(self) -> Tuple[int, int, int, int, int]:
        l = self.active[int(self.rng.integers(len(self.active)))]
        nj, ns = self.offer.journeys(l), len(self.offer.line(l))
        j_lo, j_hi = sorted(int(x) for x in self.rng.integers(nj, size=2))
        p_lo, p_hi = sorted(int(x) for x in self.rng.integers(1, ns + 1, size=2))
        return l, j_lo, j_hi, p_lo, p_hi

    def load_query(self) -> Tuple[int, int, int]:
        l, j = self.row_query()
        return l, j, int(self.rng.integers(1, len(self.offer.line(l))))


def ttctr_calls(ix: TtctrIndex, w: Workload, family: str, count: int) -> List[Callable[[], int]]:
    """Zero argument closures answering `count` queries of a family on TTCTR."""
    calls: List[Callable[[], int]] = []
    for _ in range(count):
        if family == 'JkS1':
            l, s, _, _, (t1, t2) = w.column_query()
            calls.append(lambda s=s, l=l, t1=t1, t2=t2: ix.count_boardings(s, l, t1, t2))
        else:
            q = w.trip_query(family)
            calls.append(lambda q=q: ix.count_trips(q))
    return calls

def acumm_calls(pairs: Dict[int, AccumulatedMatrixPair], w: Workload, family: str, count: int) -> List[Callable[[], int]]:
    calls: List[Callable[[], int]] = []
    for _ in range(count):
        if family == 'JkS1':
            l, _, p, rows, _ = w.column_query()
            if rows is None:
                calls.append(lambda: 0)
            else:
                calls.append(lambda m=pairs[l], p=p, r=rows: m.boardings_at_stop(p, r[0], r[1]))
        elif family == 'J1S':
            l, j = w.row_query()
            calls.append(lambda m=pairs[l], j=j: m.journey_boardings(j))
        elif family == 'JkSk':
            l, a, b, c, d = w.window_query()
            calls.append(lambda m=pairs[l], a=a, b=b, c=c, d=d: m.window_boardings(a, b, c, d))
        elif family == 'load':
            l, j, x = w.load_query()
            calls.append(lambda m=pairs[l], j=j, x=x: m.load_between_stops(j, x))
        else:
            raise ValueError(f"AcumM does not answer {family!r}")
    return calls

def time_calls(calls: Sequence[Callable[[], int]], warmup: int = 0) -> float:
    """Mean nanoseconds per call."""
    for c in calls[:warmup]:
        c()
    t0 = time.perf_counter_ns()
    for c in calls:
        c()
    return (time.perf_counter_ns() - t0) / max(1, len(calls))

async def _time_concurrently(calls: Sequence[Callable[[], int]], warmup: int, readers: int) -> float:
    times = await asyncio.gather(*(asyncio.to_thread(time_calls, calls, warmup) for _ in range(readers)))
    return float(np.mean(times))

def measure(calls: Sequence[Callable[[], int]], warmup: int = 0, readers: int = 1) -> float:
    if readers <= 1:
        return time_calls(calls, warmup)
    return asyncio.run(_time_concurrently(calls, warmup, readers))

def _file_size(save: Callable[[str], None]) -> int:
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, 'index.bin')
        save(path)
        return os.path.getsize(path)

def run_bench(offer: NetworkOffer, trips: Sequence[UserTrip], cfg: BenchConfig,
              t_psis: Sequence[int] = (128,), wm_samplings: Sequence[Optional[int]] = (None,),
              encodings: Sequence[str] = ('plain',)) -> pd.DataFrame:
    """Benchmark every (t_psi, wm_sampling) TTCTR and every AcumM encoding.

    Returns:
        pd.DataFrame: columns structure, t_psi, wm_sampling, encoding, family,
        queries, mean_ns, size_bytes, trips
    """
    rows: List[Dict[str, Any]] = []
    corpus = len(trips)
    log.info(f'common structures: {offer_sizes(offer)}')
    tt_fams = [f for f in cfg.families if f in TTCTR_FAMILIES + OPEN_FAMILIES]
    ac_fams = [f for f in cfg.families if f in ACUMM_FAMILIES]
    if tt_fams:
        for t_psi, wm in product(t_psis, wm_samplings):
            ix = build_ttctr(offer, trips, BuildConfig(t_psi=t_psi, wm_sampling=wm))
            size = _file_size(lambda p: save_ttctr(ix, p))
            for fam in tt_fams:
                calls = ttctr_calls(ix, Workload(offer, trips, cfg.seed), fam, cfg.queries)
                mean = measure(calls, cfg.warmup, cfg.readers)
                rows.append(dict(structure='ttctr', t_psi=t_psi, wm_sampling=wm or 0, encoding='',
                                 family=fam, queries=len(calls), mean_ns=mean, size_bytes=size, trips=corpus))
                print(f'=> ttctr t_psi={t_psi} wm={wm or "plain"} {fam}: {mean / 1000:.2f} us/query')
    if ac_fams:
        for enc in encodings:
            pairs = build_matrices(offer, trips, enc)
            size = _file_size(lambda p: save_acumm(pairs, p))
            log.info(f'AcumM {enc} payload: {acumm_sizes(pairs)}')
            for fam in ac_fams:
                calls = acumm_calls(pairs, Workload(offer, trips, cfg.seed), fam, cfg.queries)
                mean = measure(calls, cfg.warmup, cfg.readers)
                rows.append(dict(structure='acumm', t_psi=0, wm_sampling=0, encoding=enc,
                                 family=fam, queries=len(calls), mean_ns=mean, size_bytes=size, trips=corpus))
                print(f'=> acumm {enc} {fam}: {mean / 1000:.2f} us/query')
    return pd.DataFrame(rows, columns=['structure', 't_psi', 'wm_sampling', 'encoding', 'family',
                                       'queries', 'mean_ns', 'size_bytes', 'trips'])
