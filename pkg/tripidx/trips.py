"""User trips and the trips file.

A trip is a sequence of stages. Its canonical triple form lists the boarding
(stop, line, journey) of every stage and ends with a triple that repeats the
line and journey of the last stage at its alighting stop.

Trips file::

    # seed 42
    # period 1493942400 1494115200
    t 1 (1,1,0) (10,2,1) (11,2,1)
    t 2 (3,1,1,9) (8,2,2) (12,2,2)

A fourth field is present when a stage alights at a stop other than the next
boarding stop (a walking transfer).
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import re
import logging
from typing import NamedTuple, Tuple, List, Sequence, Optional, Dict, Iterable

from tripidx.exceptions import TripFormatError, TripError, DataError
from tripidx.offer import NetworkOffer
from tripidx.utils import Open


LOGGER_NAME = 'tripidx.trips-'
log = logging.getLogger(LOGGER_NAME)


Triple = Tuple[int, int, int]


class Stage(NamedTuple):
    stop: int
    line: int
    journey: int
    alight: int


class UserTrip(NamedTuple):
    trip_id: int
    stages: Tuple[Stage, ...]

    def triples(self) -> List[Triple]:
        """Canonical triple form."""
        out = [(st.stop, st.line, st.journey) for st in self.stages]
        last = self.stages[-1]
        out.append((last.alight, last.line, last.journey))
        return out

    @property
    def first(self) -> Stage:
        return self.stages[0]

    @property
    def last(self) -> Stage:
        return self.stages[-1]

    @classmethod
    def from_triples(cls, trip_id: int, triples: Sequence[Triple],
                     alights: Optional[Sequence[Optional[int]]] = None) -> 'UserTrip':
        """Build a trip from its canonical triples.

        Args:
            trip_id (int): trip id
            triples (Sequence[Triple]): at least two triples, the last two on the same line and journey
            alights (Sequence[Optional[int]], optional): per stage alighting stop when it
                differs from the next boarding stop

        Raises:
            TripFormatError: if the triple form is broken
        """
        if len(triples) < 2:
            raise TripFormatError(f"Trip {trip_id}: at least two triples are needed")
        if tuple(triples[-1][1:]) != tuple(triples[-2][1:]):
            raise TripFormatError(f"Trip {trip_id}: last triple must repeat line and journey of the previous one")
        stages = []
        for k in range(len(triples) - 1):
            s, l, j = triples[k]
            a = alights[k] if alights is not None and alights[k] is not None else triples[k + 1][0]
            stages.append(Stage(int(s), int(l), int(j), int(a)))
        return cls(int(trip_id), tuple(stages))


def check_trip(o: NetworkOffer, trip: UserTrip):
    """Check that a trip only uses stops, lines and journeys of the offer.

    Raises:
        TripError: naming the trip
    """
    if not trip.stages:
        raise TripError(f"Trip {trip.trip_id} has no stages")
    for st in trip.stages:
        try:
            line = o.line(st.line)
            bp = line.position(st.stop)
            ap = line.position(st.alight)
            o.departure(st.line, st.journey)
        except (DataError, IndexError) as e:
            raise TripError(f"Trip {trip.trip_id}: {e}") from e
        if ap <= bp:
            raise TripError(f"Trip {trip.trip_id}: alights at stop {st.alight} before boarding stop {st.stop} on line {st.line}")


_TRIPLE = re.compile(r'\((\d+),(\d+),(\d+)(?:,(\d+))?\)')


def format_trip(trip: UserTrip) -> str:
    parts = [f't {trip.trip_id}']
    stages = trip.stages
    for k, st in enumerate(stages):
        nxt = stages[k + 1].stop if k + 1 < len(stages) else None
        if nxt is not None and st.alight != nxt:
            parts.append(f'({st.stop},{st.line},{st.journey},{st.alight})')
        else:
            parts.append(f'({st.stop},{st.line},{st.journey})')
    last = stages[-1]
    parts.append(f'({last.alight},{last.line},{last.journey})')
    return ' '.join(parts)

def parse_trip(rec: str) -> UserTrip:
    """Parse one `t` record.

    Raises:
        TripFormatError: on malformed input
    """
    tokens = rec.split()
    if len(tokens) < 4 or tokens[0] != 't' or not tokens[1].isdigit():
        raise TripFormatError(f"malformed trip record: {rec!r}")
    triples: List[Triple] = []
    alights: List[Optional[int]] = []
    for tok in tokens[2:]:
        m = _TRIPLE.fullmatch(tok)
        if not m:
            raise TripFormatError(f"malformed triple {tok!r}")
        triples.append((int(m.group(1)), int(m.group(2)), int(m.group(3))))
        alights.append(int(m.group(4)) if m.group(4) else None)
    if alights[-1] is not None:
        raise TripFormatError(f"final triple cannot carry an alighting stop: {tokens[-1]!r}")
    return UserTrip.from_triples(int(tokens[1]), triples, alights[:-1])

def write_trips(path: str, trips: Iterable[UserTrip], header: Optional[Dict[str, object]] = None):
    """Write a trips file; header values are written as `# key value` lines.
    """
    trips = list(trips)
    head = dict(header or {})
    head.setdefault('trips', len(trips))
    head.setdefault('stages', sum(len(t.stages) for t in trips))
    with Open(path, 'w') as f:
        for k, v in head.items():
            if isinstance(v, (tuple, list)):
                v = ' '.join(str(x) for x in v)
            f.write(f'# {k} {v}\n')
        for t in trips:
            f.write(format_trip(t) + '\n')

def read_trips(path: str) -> Tuple[Dict[str, str], List[UserTrip]]:
    """Read a trips file.

    Returns:
        Tuple[Dict[str, str], List[UserTrip]]: header and trips in file order
    """
    header: Dict[str, str] = {}
    trips: List[UserTrip] = []
    with Open(path, 'r') as f:
        for no, raw in enumerate(f, 1):
            rec = raw.strip()
            if not rec:
                continue
            if rec.startswith('#'):
                kv = rec[1:].strip().split(maxsplit=1)
                if kv:
                    header[kv[0]] = kv[1] if len(kv) > 1 else ''
                continue
            try:
                trips.append(parse_trip(rec))
            except TripFormatError as e:
                raise TripFormatError(f"{path}:{no}: {e}") from e
    if 'trips' in header and header['trips'].isdigit() and int(header['trips']) != len(trips):
        raise TripFormatError(f"{path}: header announces {header['trips']} trips, found {len(trips)}")
    log.debug(f'read {len(trips)} trips from {path}')
    return header, trips
