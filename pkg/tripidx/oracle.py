"""Brute force answers by scanning every trip; the reference for the indexes.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from fractions import Fraction
from typing import Sequence, List, Optional, Tuple

import numpy as np

from tripidx.offer import NetworkOffer
from tripidx.trips import UserTrip, Triple
from tripidx.ttctr import TripCountQuery


LOGGER_NAME = 'tripidx.oracle-'
log = logging.getLogger(LOGGER_NAME)


class TripStore():
    """Trips plus column arrays over trips and over stages.

    Args:
        offer (NetworkOffer): the offer the trips run on
        trips (Sequence[UserTrip]): the trips, kept in the given order
    """
    def __init__(self, offer: NetworkOffer, trips: Sequence[UserTrip]):
        self.offer = offer
        self.trips = list(trips)
        st = [(k, s.stop, s.line, s.journey, s.alight) for k, t in enumerate(self.trips) for s in t.stages]
        a = np.asarray(st, dtype=np.int64).reshape(-1, 5)
        self.stage_trip, self.stage_stop, self.stage_line, self.stage_journey, self.stage_alight = a.T
        self.stage_pos = np.zeros(len(a), dtype=np.int64)
        self.stage_alight_pos = np.zeros(len(a), dtype=np.int64)
        self.stage_dep = np.zeros(len(a), dtype=np.int64)
        for line, sch in zip(offer.lines, offer.schedules):
            sel = np.flatnonzero(self.stage_line == line.line_id)
            if not len(sel):
                continue
            pos = {s: i + 1 for i, s in enumerate(line.stops)}
            self.stage_pos[sel] = [pos[s] for s in self.stage_stop[sel].tolist()]
            self.stage_alight_pos[sel] = [pos[s] for s in self.stage_alight[sel].tolist()]
            self.stage_dep[sel] = sch.departures[self.stage_journey[sel]]
        n = len(self.trips)
        counts = np.array([len(t.stages) for t in self.trips], dtype=np.int64)
        first = np.concatenate(([0], np.cumsum(counts)[:-1])) if n else np.zeros(0, dtype=np.int64)
        last = first + counts - 1
        self.first_stop = self.stage_stop[first]
        self.first_line = self.stage_line[first]
        self.first_dep = self.stage_dep[first]
        self.last_stop = self.stage_alight[last]
        self.last_line = self.stage_line[last]
        self.last_dep = self.stage_dep[last]

    def __len__(self) -> int:
        return len(self.trips)


def _trip_mask(store: TripStore, q: TripCountQuery, day_of: str) -> np.ndarray:
    mask = np.ones(len(store), dtype=np.bool_)
    if q.start_stop is not None:
        mask &= store.first_stop == q.start_stop
    if q.start_line is not None:
        mask &= store.first_line == q.start_line
    if q.end_stop is not None:
        mask &= store.last_stop == q.end_stop
    if q.end_line is not None:
        mask &= store.last_line == q.end_line
    if q.timed:
        if day_of not in ('start', 'end'):
            raise ValueError(f"day_of must be 'start' or 'end', {day_of!r} given")
        dep = store.first_dep if day_of == 'start' else store.last_dep
        mask &= (dep >= q.t1) & (dep < q.t2)
    return mask

def oracle_count_trips(store: TripStore, q: TripCountQuery, day_of: str = 'start') -> int:
    """Trips matching q; the time window applies to the first (`start`) or last (`end`) stage."""
    return int(_trip_mask(store, q, day_of).sum())

def oracle_list(store: TripStore, q: TripCountQuery, limit: Optional[int] = None,
                day_of: str = 'start') -> List[List[Triple]]:
    hits = np.flatnonzero(_trip_mask(store, q, day_of))
    if limit is not None:
        hits = hits[:max(0, limit)]
    return [store.trips[k].triples() for k in hits.tolist()]

def oracle_boardings(store: TripStore, s: int, l: int, t1: int, t2: int) -> int:
    """Stages boarding line l at stop s on journeys departing in [t1, t2)."""
    m = (store.stage_stop == s) & (store.stage_line == l) & (store.stage_dep >= t1) & (store.stage_dep < t2)
    return int(m.sum())

def oracle_window(store: TripStore, l: int, j_lo: int, j_hi: int, p_lo: int, p_hi: int, kind: str = 'on') -> int:
    """Boardings (`on`) or alightings (`off`) of line l over journeys [j_lo, j_hi] and stop positions [p_lo, p_hi]."""
    pos = store.stage_pos if kind == 'on' else store.stage_alight_pos
    m = (store.stage_line == l) & (store.stage_journey >= j_lo) & (store.stage_journey <= j_hi) \
        & (pos >= p_lo) & (pos <= p_hi)
    return int(m.sum())

def oracle_load(store: TripStore, l: int, j: int, x: int) -> int:
    """Passengers aboard journey j of line l between stop positions x and x+1."""
    m = (store.stage_line == l) & (store.stage_journey == j) & (store.stage_pos <= x) & (store.stage_alight_pos > x)
    return int(m.sum())

def oracle_average(store: TripStore, l: int, days: Sequence[Optional[Tuple[int, int]]], p_lo: int, p_hi: int) -> Fraction:
    if not days:
        raise ValueError("At least one day is needed")
    total = sum(oracle_window(store, l, d[0], d[1], p_lo, p_hi) for d in days if d is not None)
    return Fraction(total, len(days))
