"""datetime handling.

All times are timezone-naive epoch seconds; a naive datetime is read as UTC and a
day is [midnight, next midnight).
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.2.0'


import re
from datetime import datetime, timezone
from typing import Tuple


DAY = 86400
'''Seconds in a day.'''


def to_epoch(d: datetime) -> int:
    """Convert a datetime to epoch seconds, naive datetimes are taken as UTC.

    Args:
        d (datetime): datetime

    Returns:
        int: epoch seconds
    """
    if d.tzinfo is None:
        d = d.replace(tzinfo=timezone.utc)
    return int(d.timestamp())

def from_epoch(t: int) -> datetime:
    """Convert epoch seconds to a naive datetime (UTC wall clock).

    Args:
        t (int): epoch seconds

    Returns:
        datetime: naive datetime
    """
    return datetime.fromtimestamp(t, timezone.utc).replace(tzinfo=None)

def day_start(t: int) -> int:
    """Midnight of the day containing `t`.
    """
    return t - t % DAY

def parse_hms(value: str) -> int:
    """Parse a GTFS-like `H:MM:SS` time of day into seconds.

    Hours may exceed 23 for services running past midnight.

    Args:
        value (str): time string

    Raises:
        ValueError: if the string is not a valid time

    Returns:
        int: seconds since midnight
    """
    m = re.fullmatch(r'\s*(\d{1,3}):([0-5]\d):([0-5]\d)\s*', value)
    if not m:
        raise ValueError(f"Invalid time of day: {value!r}")
    h, mi, s = (int(x) for x in m.groups())
    return (h * 60 + mi) * 60 + s

def format_hms(seconds: int) -> str:
    """Format seconds since midnight as `HH:MM:SS`.
    """
    h, rem = divmod(int(seconds), 3600)
    m, s = divmod(rem, 60)
    return f'{h:02d}:{m:02d}:{s:02d}'

def parse_date(value: str) -> int:
    """Parse `YYYY-MM-DD` or `YYYYMMDD` into the epoch seconds of its midnight.
    """
    value = value.strip()
    fmt = '%Y%m%d' if re.fullmatch(r'\d{8}', value) else '%Y-%m-%d'
    try:
        return to_epoch(datetime.strptime(value, fmt))
    except ValueError as e:
        raise ValueError(f"Invalid date: {value!r}") from e

def parse_period(value: str) -> Tuple[int, int]:
    """Parse an analysis period.

    Accepted forms: `2017-05-05:7` (start date and number of days) and
    `2017-05-05..2017-05-12` (end date exclusive).

    Returns:
        Tuple[int, int]: [t_begin, t_end) in epoch seconds
    """
    if '..' in value:
        a, b = value.split('..', 1)
        t_begin, t_end = parse_date(a), parse_date(b)
    elif ':' in value:
        a, n = value.rsplit(':', 1)
        if not n.strip().isdigit():
            raise ValueError(f"Invalid period: {value!r}")
        t_begin = parse_date(a)
        t_end = t_begin + int(n) * DAY
    else:
        t_begin = parse_date(value)
        t_end = t_begin + DAY
    if t_end <= t_begin:
        raise ValueError(f"Empty period: {value!r}")
    return t_begin, t_end
