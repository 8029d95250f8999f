"""Synthetic user trip generator.

A trip starts on a random journey of a random line at a random stop and
follows the journey. After each traversed stop (once the current stage has
traversed `min_stage_stops`) the trip ends with probability 0.01λ, λ being the
stops traversed so far; otherwise the stage ends with `switch_probability` and
the user transfers, waiting at the same stop or walking to a nearby one. A
stage that reaches the end of its line always tries to transfer; when no
transfer exists the trip ends there.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple, Optional, Sequence

import numpy as np

from tripidx.config import GeneratorConfig
from tripidx.exceptions import TripError
from tripidx.offer import NetworkOffer
from tripidx.trips import UserTrip, Stage, check_trip, Triple
from tripidx.utils import haversine_m


LOGGER_NAME = 'tripidx.tripgen-'
log = logging.getLogger(LOGGER_NAME)


def nearby_stops(o: NetworkOffer, radius: float) -> List[Tuple[int, ...]]:
    """For every stop, the stops within `radius` meters (itself first).

    Stops without coordinates only reach themselves.
    """
    lat = np.array([np.nan if st.lat is None else st.lat for st in o.stops], dtype=np.float64)
    lon = np.array([np.nan if st.lon is None else st.lon for st in o.stops], dtype=np.float64)
    res: List[Tuple[int, ...]] = []
    for i in range(o.n_s):
        if np.isnan(lat[i]) or radius <= 0:
            res.append((i + 1,))
            continue
        d = haversine_m(lat[i], lon[i], lat, lon)
        near = np.flatnonzero(d <= radius) + 1
        res.append((i + 1,) + tuple(int(s) for s in near if s != i + 1))
    return res

def distance_m(o: NetworkOffer, a: int, b: int) -> float:
    if a == b:
        return 0.0
    sa, sb = o.stop(a), o.stop(b)
    if sa.lat is None or sb.lat is None:
        return float('inf')
    return float(haversine_m(sa.lat, sa.lon, sb.lat, sb.lon))

def find_transfer_candidates(o: NetworkOffer, s: int, t: int, prev_line: int,
                             cfg: Optional[GeneratorConfig] = None,
                             near: Optional[Sequence[int]] = None) -> List[Triple]:
    """Boardings reachable from stop s at time t.

    Candidates are journeys stopping at s or at a stop within the walking
    radius, arriving there within [t, t + max_wait_seconds], on any line but
    `prev_line`, and not at the last stop of their line.

    Args:
        o (NetworkOffer): the offer
        s (int): alighting stop
        t (int): alighting time, epoch seconds
        prev_line (int): line just left
        cfg (GeneratorConfig, optional): wait and walk limits
        near (Sequence[int], optional): precomputed stops within the radius

    Returns:
        List[Triple]: (stop, line, journey) sorted
    """
    cfg = cfg or GeneratorConfig()
    if near is None:
        near = [x for x in range(1, o.n_s + 1) if distance_m(o, s, x) <= cfg.walk_radius_meters]
    res: List[Triple] = []
    for x in near:
        for l in o.inverted[x - 1]:
            if l == prev_line:
                continue
            line = o.lines[l - 1]
            pos = line.position(x)
            if pos == len(line):
                continue
            acc = line.acc_times[pos - 1]
            rng = o.journeys_in_interval(l, t - acc, t - acc + cfg.max_wait_seconds + 1)
            if rng is None:
                continue
            res.extend((x, l, j) for j in range(rng[0], rng[1] + 1))
    res.sort()
    return res

def validate_trip(o: NetworkOffer, trip: UserTrip, cfg: Optional[GeneratorConfig] = None) -> List[str]:
    """Replay a trip against the offer and list every broken generator rule.

    Returns:
        List[str]: violations, empty when the trip is fine
    """
    cfg = cfg or GeneratorConfig()
    try:
        check_trip(o, trip)
    except TripError as e:
        return [str(e)]
    bad = []
    total = 0
    for k, st in enumerate(trip.stages):
        line = o.lines[st.line - 1]
        span = line.position(st.alight) - line.position(st.stop)
        total += span
        if span < cfg.min_stage_stops:
            bad.append(f"trip {trip.trip_id} stage {k + 1}: {span} traversed stops")
        if k:
            prev = trip.stages[k - 1]
            if st.line == prev.line:
                bad.append(f"trip {trip.trip_id} stage {k + 1}: reboards line {st.line}")
            walk = distance_m(o, prev.alight, st.stop)
            if walk > cfg.walk_radius_meters:
                bad.append(f"trip {trip.trip_id} stage {k + 1}: walks {walk:.0f} m")
            wait = o.stop_arrival_time(st.line, st.journey, st.stop) - o.stop_arrival_time(prev.line, prev.journey, prev.alight)
            if not 0 <= wait <= cfg.max_wait_seconds:
                bad.append(f"trip {trip.trip_id} stage {k + 1}: waits {wait} s")
    if total > cfg.max_trip_stops:
        bad.append(f"trip {trip.trip_id}: {total} traversed stops")
    return bad


class TripGenerator():
    """Generates trips over one offer.

    Args:
        o (NetworkOffer): the offer
        cfg (GeneratorConfig): generator knobs
    """
    def __init__(self, o: NetworkOffer, cfg: GeneratorConfig):
        self.o = o
        self.cfg = cfg
        self.near = nearby_stops(o, cfg.walk_radius_meters)
        self.boardable = [l.line_id for l, s in zip(o.lines, o.schedules)
                          if len(l) > cfg.min_stage_stops and len(s)]
        if not self.boardable:
            raise TripError("No line long enough to board")

    def _room(self, l: int, s: int) -> bool:
        line = self.o.lines[l - 1]
        return line.position(s) <= len(line) - self.cfg.min_stage_stops

    def generate_trip(self, rng: np.random.Generator, trip_id: int) -> UserTrip:
        o, cfg = self.o, self.cfg
        l = self.boardable[int(rng.integers(len(self.boardable)))]
        line = o.lines[l - 1]
        j = int(rng.integers(o.journeys(l)))
        pos = int(rng.integers(1, len(line) - cfg.min_stage_stops + 1))
        board = (line.stops[pos - 1], l, j)
        stages: List[Stage] = []
        total = 0
        while True:
            s0, l, j = board
            line = o.lines[l - 1]
            cur = line.position(s0)
            span = 0
            done = False
            while True:
                cur += 1
                span += 1
                total += 1
                if total >= cfg.max_trip_stops:
                    done = True
                    break
                if span < cfg.min_stage_stops:
                    continue
                if rng.random() < min(1.0, cfg.end_prob_coefficient * total):
                    done = True
                    break
                if cur == len(line) or rng.random() < cfg.switch_probability:
                    break
            alight = line.stops[cur - 1]
            stages.append(Stage(s0, l, j, alight))
            if done or total + cfg.min_stage_stops > cfg.max_trip_stops:
                break
            t = o.stop_arrival_time(l, j, alight)
            cands = [c for c in find_transfer_candidates(o, alight, t, l, cfg, self.near[alight - 1])
                     if self._room(c[1], c[0])]
            if not cands:
                break
            board = cands[int(rng.integers(len(cands)))]
        return UserTrip(trip_id, tuple(stages))

    def generate_shard(self, k: int, first_id: int, count: int) -> List[UserTrip]:
        """Trips `first_id` .. `first_id + count - 1` from the RNG stream (seed, k)."""
        rng = np.random.default_rng([self.cfg.rng_seed, k])
        return [self.generate_trip(rng, first_id + i) for i in range(count)]


def _shard_worker(o: NetworkOffer, cfg: GeneratorConfig, k: int, first_id: int, count: int) -> List[UserTrip]:
    return TripGenerator(o, cfg).generate_shard(k, first_id, count)

def generate_trips(o: NetworkOffer, cfg: GeneratorConfig) -> List[UserTrip]:
    """Generate `cfg.trip_count` trips with ids 1..trip_count.

    The result only depends on the seed and the shard size, not on the
    number of workers.
    """
    shards = []
    for k, first in enumerate(range(0, cfg.trip_count, cfg.shard_size)):
        shards.append((k, first + 1, min(cfg.shard_size, cfg.trip_count - first)))
    trips: List[UserTrip] = []
    if cfg.workers > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futs = [pool.submit(_shard_worker, o, cfg, *sh) for sh in shards]
            for fut in futs:
                trips.extend(fut.result())
    else:
        gen = TripGenerator(o, cfg)
        for sh in shards:
            trips.extend(gen.generate_shard(*sh))
    log.info(f'generated {len(trips)} trips, {sum(len(t.stages) for t in trips)} stages')
    return trips
