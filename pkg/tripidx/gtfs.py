"""GTFS subset import.

Reads `stops.txt`, `routes.txt`, `trips.txt` and `stop_times.txt`. Each distinct
(route, direction, stop sequence) becomes a line; calendars are ignored and every
service runs on every day of the analysis period.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import os
import logging
from typing import Tuple, Dict, List

import numpy as np
import pandas as pd

from tripidx import dt
from tripidx.exceptions import GtfsParseError, OfferFormatError
from tripidx.offer import NetworkOffer, Stop, Line, LineSchedule


LOGGER_NAME = 'tripidx.gtfs-'
log = logging.getLogger(LOGGER_NAME)


REQUIRED_COLUMNS: Dict[str, Tuple[str, ...]] = {
    'stops.txt': ('stop_id',),
    'routes.txt': ('route_id',),
    'trips.txt': ('route_id', 'trip_id'),
    'stop_times.txt': ('trip_id', 'stop_id', 'stop_sequence'),
}


def _row(i: int) -> int:
    # header is row 1
    return int(i) + 2

def read_table(path: str, name: str) -> pd.DataFrame:
    """Read one GTFS file as strings and check its mandatory columns.

    Raises:
        GtfsParseError: on a missing file or column
    """
    fn = os.path.join(path, name)
    if not os.path.isfile(fn):
        raise GtfsParseError("missing file", file=name)
    try:
        df = pd.read_csv(fn, dtype=str, keep_default_na=False, encoding='utf-8-sig')
    except pd.errors.EmptyDataError:
        df = pd.DataFrame(columns=list(REQUIRED_COLUMNS[name]))
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise GtfsParseError(str(e), file=name) from e
    df.columns = [c.strip() for c in df.columns]
    for col in REQUIRED_COLUMNS[name]:
        if col not in df.columns:
            raise GtfsParseError(f"missing column {col!r}", file=name, row=1)
    return df

def _parse_times(st: pd.DataFrame) -> Tuple[np.ndarray, np.ndarray]:
    arr = st['arrival_time'] if 'arrival_time' in st.columns else pd.Series([''] * len(st), index=st.index)
    dep = st['departure_time'] if 'departure_time' in st.columns else pd.Series([''] * len(st), index=st.index)
    a_out = np.empty(len(st), dtype=np.int64)
    d_out = np.empty(len(st), dtype=np.int64)
    for k, (i, a, d) in enumerate(zip(st.index, arr, dep)):
        a, d = a.strip(), d.strip()
        if not a and not d:
            raise GtfsParseError("stop time without arrival or departure", file='stop_times.txt', row=_row(i))
        try:
            a_out[k] = dt.parse_hms(a or d)
            d_out[k] = dt.parse_hms(d or a)
        except ValueError as e:
            raise GtfsParseError(str(e), file='stop_times.txt', row=_row(i)) from e
    return a_out, d_out

def import_gtfs(path: str, period: Tuple[int, int]) -> NetworkOffer:
    """Build a NetworkOffer from a GTFS directory.

    Accumulated times are the per stop average over all trips of a line of
    (arrival at the stop − departure at the first stop), rounded half up and
    bumped by one second where equal clock readings would not be strictly
    increasing.

    Args:
        path (str): GTFS directory
        period (Tuple[int, int]): analysis period [t_begin, t_end) in epoch seconds

    Raises:
        GtfsParseError: with file and row of the offending record

    Returns:
        NetworkOffer: the offer
    """
    stops_df = read_table(path, 'stops.txt')
    routes_df = read_table(path, 'routes.txt')
    trips_df = read_table(path, 'trips.txt')
    st = read_table(path, 'stop_times.txt')
    if not len(st):
        raise GtfsParseError("no journeys", file='stop_times.txt')

    stop_index: Dict[str, int] = {}
    stops: List[Stop] = []
    for i, rec in stops_df.iterrows():
        sid = rec['stop_id'].strip()
        if sid in stop_index:
            raise GtfsParseError(f"duplicate stop_id {sid!r}", file='stops.txt', row=_row(i))
        try:
            lat = float(rec['stop_lat']) if rec.get('stop_lat', '').strip() else None
            lon = float(rec['stop_lon']) if rec.get('stop_lon', '').strip() else None
        except ValueError as e:
            raise GtfsParseError(f"bad coordinates: {e}", file='stops.txt', row=_row(i)) from e
        stop_index[sid] = len(stops) + 1
        stops.append(Stop(len(stops) + 1, (rec.get('stop_name', '') or sid).strip(), lat, lon))

    routes = set(routes_df['route_id'].str.strip())
    trip_route: Dict[str, Tuple[str, str]] = {}
    for i, rec in trips_df.iterrows():
        rid = rec['route_id'].strip()
        if rid not in routes:
            raise GtfsParseError(f"unknown route_id {rid!r}", file='trips.txt', row=_row(i))
        trip_route[rec['trip_id'].strip()] = (rid, rec.get('direction_id', '0').strip() or '0')

    for i, tid, sid in zip(st.index, st['trip_id'], st['stop_id']):
        if tid.strip() not in trip_route:
            raise GtfsParseError(f"unknown trip_id {tid!r}", file='stop_times.txt', row=_row(i))
        if sid.strip() not in stop_index:
            raise GtfsParseError(f"unknown stop_id {sid!r}", file='stop_times.txt', row=_row(i))
    try:
        st = st.assign(seq=st['stop_sequence'].astype(int))
    except ValueError as e:
        raise GtfsParseError(f"bad stop_sequence: {e}", file='stop_times.txt') from e
    arr, dep = _parse_times(st)
    st = st.assign(arr=arr, dep=dep, trip=st['trip_id'].str.strip(),
                   stop=[stop_index[s.strip()] for s in st['stop_id']])

    groups: Dict[Tuple[str, str, Tuple[int, ...]], List[Tuple[int, np.ndarray]]] = {}
    for tid, g in st.sort_values(['trip', 'seq'], kind='stable').groupby('trip', sort=False):
        seqs = g['seq'].to_numpy()
        times = g['arr'].to_numpy()
        if len(g) < 2:
            raise GtfsParseError(f"trip {tid!r} has fewer than 2 stop times", file='stop_times.txt', row=_row(g.index[0]))
        bad = np.flatnonzero((np.diff(seqs) <= 0) | (np.diff(times) < 0))
        if len(bad):
            raise GtfsParseError(f"non-monotone stop_times in trip {tid!r}", file='stop_times.txt',
                                 row=_row(g.index[bad[0] + 1]))
        first_dep = int(g['dep'].iloc[0])
        key = (*trip_route[tid], tuple(g['stop'].tolist()))
        groups.setdefault(key, []).append((first_dep, times - first_dep))

    t_begin, t_end = period
    days = -(-(t_end - t_begin) // dt.DAY)
    base = dt.day_start(t_begin)
    lines: List[Line] = []
    schedules: List[LineSchedule] = []
    for (rid, direction, seq), runs in groups.items():
        rel = np.vstack([r for _, r in runs]).mean(axis=0)
        acc = np.floor(rel + 0.5).astype(np.int64).tolist()
        acc[0] = 0
        for k in range(1, len(acc)):
            acc[k] = max(acc[k], acc[k - 1] + 1)
        starts = sorted({s for s, _ in runs})
        deps = np.array([base + d * dt.DAY + s for d in range(days) for s in starts], dtype=np.int64)
        deps = np.unique(deps[(deps >= t_begin) & (deps < t_end)])
        line_id = len(lines) + 1
        try:
            lines.append(Line(line_id, seq, acc))
        except OfferFormatError as e:
            raise GtfsParseError(f"route {rid!r} direction {direction}: {e}", file='stop_times.txt') from e
        schedules.append(LineSchedule(line_id, deps))
        log.debug(f'line {line_id} <- route {rid} dir {direction}: {len(seq)} stops, {len(runs)} trips')
    o = NetworkOffer(stops, lines, schedules, t_begin, t_end)
    log.info(f'imported {o!r} from {path}')
    return o
