"""Network offer: stops, lines, journey schedules and the inverted stop index.

Times are epoch seconds (see `tripidx.dt`). Journeys of a line are numbered
0..n_j-1 over the whole analysis period, sorted by departure, so any time
window maps to a contiguous journey range.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import logging
import math
from typing import List, Tuple, Optional, NamedTuple, Sequence, Dict

import numpy as np

from tripidx import dt
from tripidx.config import NetworkConfig
from tripidx.exceptions import OfferFormatError, UnknownStopError, UnknownLineError
from tripidx.utils import Open, bits_needed, sha256_hex, haversine_m


LOGGER_NAME = 'tripidx.offer-'
log = logging.getLogger(LOGGER_NAME)


class Stop(NamedTuple):
    stop_id: int
    label: str
    lat: Optional[float] = None
    lon: Optional[float] = None


class Line():
    """A stop sequence with the average accumulated seconds to reach each stop.

    Args:
        line_id (int): 1-based line id
        stops (Sequence[int]): stop ids in travel order
        acc_times (Sequence[int]): seconds from the first stop, starts at 0

    Raises:
        OfferFormatError: on any broken invariant
    """
    def __init__(self, line_id: int, stops: Sequence[int], acc_times: Sequence[int]):
        self.line_id = int(line_id)
        self.stops = tuple(int(s) for s in stops)
        self.acc_times = tuple(int(t) for t in acc_times)
        if len(self.stops) != len(self.acc_times):
            raise OfferFormatError(f"Line {line_id}: {len(self.stops)} stops but {len(self.acc_times)} times")
        if len(self.stops) < 2:
            raise OfferFormatError(f"Line {line_id}: a line needs at least 2 stops")
        if self.acc_times[0] != 0:
            raise OfferFormatError(f"Line {line_id}: accumulated time of the first stop must be 0")
        if any(b <= a for a, b in zip(self.acc_times, self.acc_times[1:])):
            raise OfferFormatError(f"Line {line_id}: accumulated times must be strictly increasing")
        if len(set(self.stops)) != len(self.stops):
            raise OfferFormatError(f"Line {line_id}: a stop repeats within the line")
        self._pos = {s: i + 1 for i, s in enumerate(self.stops)}

    def __len__(self) -> int:
        return len(self.stops)

    def position(self, stop_id: int) -> int:
        """1-based position of a stop on this line.

        Raises:
            UnknownStopError: if the stop is not on the line
        """
        try:
            return self._pos[stop_id]
        except KeyError:
            raise UnknownStopError(f"Stop {stop_id} is not on line {self.line_id}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, Line) and (self.line_id, self.stops, self.acc_times) == (other.line_id, other.stops, other.acc_times)

    def __repr__(self):
        return f'Line({self.line_id}, stops={len(self.stops)})'


class LineSchedule():
    """Sorted absolute departures of the journeys of one line."""
    def __init__(self, line_id: int, departures: Sequence[int]):
        self.line_id = int(line_id)
        self.departures = np.asarray(departures, dtype=np.int64)
        if len(self.departures) > 1 and not bool(np.all(np.diff(self.departures) > 0)):
            raise OfferFormatError(f"Line {line_id}: departures must be strictly increasing")

    def __len__(self) -> int:
        return len(self.departures)

    def __eq__(self, other) -> bool:
        return isinstance(other, LineSchedule) and self.line_id == other.line_id \
            and bool(np.array_equal(self.departures, other.departures))


class NetworkOffer():
    """The static transport supply over an analysis period [t_begin, t_end).

    Stops and lines are given in id order (ids are dense and 1-based); the
    schedules list is aligned with the lines.
    """
    def __init__(self, stops: Sequence[Stop], lines: Sequence[Line], schedules: Sequence[LineSchedule],
                 t_begin: int, t_end: int):
        self.stops = list(stops)
        self.lines = list(lines)
        self.schedules = list(schedules)
        self.t_begin = int(t_begin)
        self.t_end = int(t_end)
        self._validate()
        inv: List[List[int]] = [[] for _ in self.stops]
        for line in self.lines:
            for s in line.stops:
                inv[s - 1].append(line.line_id)
        self.inverted: List[Tuple[int, ...]] = [tuple(sorted(x)) for x in inv]
        self._departures = [sch.departures for sch in self.schedules]
        self._departures_l = [sch.departures.tolist() for sch in self.schedules]

    def _validate(self):
        for i, st in enumerate(self.stops):
            if st.stop_id != i + 1:
                raise OfferFormatError(f"Stop ids must be dense from 1, found {st.stop_id} at position {i + 1}")
        for i, line in enumerate(self.lines):
            if line.line_id != i + 1:
                raise OfferFormatError(f"Line ids must be dense from 1, found {line.line_id} at position {i + 1}")
            for s in line.stops:
                if not 1 <= s <= len(self.stops):
                    raise OfferFormatError(f"Line {line.line_id} references unknown stop {s}")
        if len(self.schedules) != len(self.lines):
            raise OfferFormatError("Every line needs exactly one schedule")
        if self.t_end <= self.t_begin:
            raise OfferFormatError("Empty analysis period")
        for line, sch in zip(self.lines, self.schedules):
            if sch.line_id != line.line_id:
                raise OfferFormatError(f"Schedule of line {sch.line_id} is out of order")
            d = sch.departures
            if len(d) and (int(d[0]) < self.t_begin or int(d[-1]) >= self.t_end):
                raise OfferFormatError(f"Line {line.line_id}: departures outside the analysis period")

    @property
    def n_s(self) -> int:
        return len(self.stops)

    @property
    def n_l(self) -> int:
        return len(self.lines)

    @property
    def days(self) -> int:
        return -(-(self.t_end - self.t_begin) // dt.DAY)

    @property
    def max_journeys(self) -> int:
        return max((len(s) for s in self.schedules), default=0)

    def stop(self, s: int) -> Stop:
        if not 1 <= s <= len(self.stops):
            raise UnknownStopError(f"Unknown stop {s}")
        return self.stops[s - 1]

    def line(self, l: int) -> Line:
        if not 1 <= l <= len(self.lines):
            raise UnknownLineError(f"Unknown line {l}")
        return self.lines[l - 1]

    def journeys(self, l: int) -> int:
        """Number of journeys of line l."""
        self.line(l)
        return len(self.schedules[l - 1])

    def lines_of_stop(self, s: int) -> List[int]:
        """Lines visiting stop s, ascending."""
        self.stop(s)
        return list(self.inverted[s - 1])

    def stop_position(self, l: int, s: int) -> int:
        return self.line(l).position(s)

    def departure(self, l: int, j: int) -> int:
        """Departure (epoch seconds) of journey j of line l."""
        self.line(l)
        deps = self._departures_l[l - 1]
        if not 0 <= j < len(deps):
            raise IndexError(f"Line {l} has no journey {j}")
        return deps[j]

    def stop_arrival_time(self, l: int, j: int, s: int) -> int:
        """Arrival of journey j of line l at stop s, from the average accumulated times."""
        line = self.line(l)
        return self.departure(l, j) + line.acc_times[line.position(s) - 1]

    def journeys_in_interval(self, l: int, t1: int, t2: int) -> Optional[Tuple[int, int]]:
        """Journeys of line l departing in [t1, t2).

        Returns:
            Optional[Tuple[int, int]]: inclusive (j_lo, j_hi), None when empty
        """
        self.line(l)
        if t1 > t2:
            raise ValueError(f"Invalid interval [{t1}, {t2})")
        deps = self._departures[l - 1]
        lo = int(np.searchsorted(deps, t1, side='left'))
        hi = int(np.searchsorted(deps, t2, side='left')) - 1
        if lo > hi:
            return None
        return lo, hi

    def day_interval(self, day: int) -> Tuple[int, int]:
        """[midnight, next midnight) of the 0-based day of the period."""
        if not 0 <= day < self.days:
            raise ValueError(f"Day {day} outside the analysis period of {self.days} days")
        t1 = dt.day_start(self.t_begin) + day * dt.DAY
        return t1, t1 + dt.DAY

    def day_of(self, t: int) -> int:
        return (t - dt.day_start(self.t_begin)) // dt.DAY

    def __eq__(self, other) -> bool:
        return isinstance(other, NetworkOffer) and self.stops == other.stops and self.lines == other.lines \
            and self.schedules == other.schedules and (self.t_begin, self.t_end) == (other.t_begin, other.t_end)

    def __repr__(self):
        return f'NetworkOffer(stops={self.n_s}, lines={self.n_l}, journeys={sum(len(s) for s in self.schedules)})'


def _fmt_coord(v: Optional[float]) -> str:
    return '-' if v is None else repr(float(v))

def _parse_coord(v: str) -> Optional[float]:
    return None if v == '-' else float(v)

def export_offer(o: NetworkOffer) -> str:
    """Serialize an offer into the plain text format described in README.md.
    """
    out = [f'P {o.t_begin} {o.t_end}']
    for st in o.stops:
        out.append(f'S {st.stop_id} {_fmt_coord(st.lat)} {_fmt_coord(st.lon)} {st.label}'.rstrip())
    for line in o.lines:
        body = ' '.join(f'{s}:{t}' for s, t in zip(line.stops, line.acc_times))
        out.append(f'L {line.line_id} {body}')
    for sch in o.schedules:
        body = ' '.join(str(int(d)) for d in sch.departures)
        out.append(f'J {sch.line_id} {body}'.rstrip())
    return '\n'.join(out) + '\n'

def load_offer(text: str) -> NetworkOffer:
    """Parse the plain text offer format.

    Raises:
        OfferFormatError: with the 1-based line number of the bad record
    """
    period = None
    stops: List[Stop] = []
    lines: List[Line] = []
    deps: Dict[int, List[int]] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        rec = raw.strip()
        if not rec or rec.startswith('#'):
            continue
        tag = rec[0]
        try:
            if tag == 'P':
                _, a, b = rec.split()
                period = (int(a), int(b))
            elif tag == 'S':
                parts = rec.split(maxsplit=4)
                label = parts[4] if len(parts) > 4 else ''
                stops.append(Stop(int(parts[1]), label, _parse_coord(parts[2]), _parse_coord(parts[3])))
            elif tag == 'L':
                parts = rec.split()
                pairs = [p.split(':') for p in parts[2:]]
                lines.append(Line(int(parts[1]), [int(s) for s, _ in pairs], [int(t) for _, t in pairs]))
            elif tag == 'J':
                parts = rec.split()
                deps[int(parts[1])] = [int(x) for x in parts[2:]]
            else:
                raise OfferFormatError(f"unknown record tag {tag!r}")
        except OfferFormatError as e:
            raise OfferFormatError(f"line {no}: {e}") from e
        except (ValueError, IndexError) as e:
            raise OfferFormatError(f"line {no}: malformed {tag} record: {e}") from e
    if period is None:
        raise OfferFormatError("missing P (period) record")
    if not stops and lines:
        # stops without coordinates may be left implicit
        n = max(max(l.stops) for l in lines)
        stops = [Stop(i, f'S{i}') for i in range(1, n + 1)]
    schedules = [LineSchedule(l.line_id, deps.get(l.line_id, ())) for l in lines]
    if set(deps) - {l.line_id for l in lines}:
        raise OfferFormatError(f"schedules for unknown lines {sorted(set(deps) - {l.line_id for l in lines})}")
    return NetworkOffer(stops, lines, schedules, period[0], period[1])

def write_offer(path: str, o: NetworkOffer):
    with Open(path, 'w') as f:
        f.write(export_offer(o))

def read_offer(path: str) -> NetworkOffer:
    with Open(path, 'r') as f:
        return load_offer(f.read())

def offer_checksum(o: NetworkOffer) -> str:
    """sha256 of the text export; identifies the offer an index was built on."""
    return sha256_hex(export_offer(o))

def offer_sizes(o: NetworkOffer) -> Dict[str, int]:
    """Bytes of the common structures stored with fixed width fields.

    Line stop sequences use ⌈log₂ n_s⌉ bits per stop plus 32 bits per
    accumulated time, schedules 32 bits per departure, and the inverted index
    ⌈log₂ n_l⌉ bits per entry plus one 32 bit pointer per stop.
    """
    ws, wl = bits_needed(o.n_s), bits_needed(o.n_l)
    stops_in_lines = sum(len(l) for l in o.lines)
    journeys = sum(len(s) for s in o.schedules)
    inv = sum(len(x) for x in o.inverted)
    sizes = {
        'lines': math.ceil(stops_in_lines * (ws + 32) / 8),
        'schedules': journeys * 4,
        'inverted_index': math.ceil(inv * wl / 8) + 4 * (o.n_s + 1),
    }
    sizes['total'] = sum(sizes.values())
    return sizes


_METERS_PER_DEGREE = 111320.0
_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _walk(rng: np.random.Generator, cfg: NetworkConfig, length: int) -> List[Tuple[int, int]]:
    """Self avoiding random walk over the node grid."""
    best: List[Tuple[int, int]] = []
    for _ in range(50):
        x, y = int(rng.integers(cfg.grid_width)), int(rng.integers(cfg.grid_height))
        path = [(x, y)]
        seen = {(x, y)}
        while len(path) < length:
            nxt = [(x + dx, y + dy) for dx, dy in _STEPS
                   if 0 <= x + dx < cfg.grid_width and 0 <= y + dy < cfg.grid_height and (x + dx, y + dy) not in seen]
            if not nxt:
                break
            x, y = nxt[int(rng.integers(len(nxt)))]
            path.append((x, y))
            seen.add((x, y))
        if len(path) > len(best):
            best = path
        if len(best) >= length:
            break
    return best

def synthetic_network(cfg: NetworkConfig) -> NetworkOffer:
    """Desk scale network on a jittered grid of nodes.

    Every node carries two twin stops `A` and `B`, `twin_offset_meters` apart.
    A route is a self avoiding walk over the grid; its outbound line serves
    the `A` stops and its return line the `B` stops in reverse order. Both
    directions share one headway drawn from `headways_minutes`.
    """
    rng = np.random.default_rng(cfg.seed)
    w, h = cfg.grid_width, cfg.grid_height
    jitter = rng.uniform(-0.2, 0.2, size=(h, w, 2)) * cfg.node_spacing_meters
    xs = np.arange(w)[None, :] * cfg.node_spacing_meters + jitter[:, :, 0]
    ys = np.arange(h)[:, None] * cfg.node_spacing_meters + jitter[:, :, 1]
    lat0 = cfg.origin_lat
    deg_lon = _METERS_PER_DEGREE * math.cos(math.radians(lat0))
    stops: List[Stop] = []
    for y in range(h):
        for x in range(w):
            lat = lat0 + float(ys[y, x]) / _METERS_PER_DEGREE
            lon = cfg.origin_lon + float(xs[y, x]) / deg_lon
            k = y * w + x
            stops.append(Stop(2 * k + 1, f'N{x}_{y}A', round(lat, 7), round(lon, 7)))
            stops.append(Stop(2 * k + 2, f'N{x}_{y}B', round(lat, 7), round(lon + cfg.twin_offset_meters / deg_lon, 7)))

    t_begin = dt.parse_date(cfg.period_start)
    t_end = t_begin + cfg.days * dt.DAY
    first, last = dt.parse_hms(cfg.service_start), dt.parse_hms(cfg.service_end)
    lines: List[Line] = []
    schedules: List[LineSchedule] = []
    for r in range(cfg.n_routes):
        length = int(rng.integers(cfg.min_line_stops, cfg.max_line_stops + 1))
        path = _walk(rng, cfg, length)
        headway = int(rng.choice(np.asarray(cfg.headways_minutes))) * 60
        times = [t_begin + d * dt.DAY + t for d in range(cfg.days) for t in range(first, last, headway)]
        times = [t for t in times if t < t_end]
        for direction, nodes in (('A', path), ('B', path[::-1])):
            ids = [2 * (y * w + x) + (1 if direction == 'A' else 2) for x, y in nodes]
            lat = np.array([stops[s - 1].lat for s in ids])
            lon = np.array([stops[s - 1].lon for s in ids])
            legs = haversine_m(lat[:-1], lon[:-1], lat[1:], lon[1:]) / cfg.speed_mps + cfg.dwell_seconds
            acc = [0]
            for leg in legs.tolist():
                acc.append(acc[-1] + max(1, math.floor(leg + 0.5)))
            line_id = len(lines) + 1
            lines.append(Line(line_id, ids, acc))
            schedules.append(LineSchedule(line_id, times))
    o = NetworkOffer(stops, lines, schedules, t_begin, t_end)
    log.info(f'synthetic network: {o!r}')
    return o
