"""Small reference data sets used by the tests and by `generate --example`.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


from typing import List

from tripidx import dt
from tripidx.config import NetworkConfig
from tripidx.offer import NetworkOffer, Stop, Line, LineSchedule, synthetic_network
from tripidx.trips import UserTrip


EXAMPLE_PERIOD_START = '2017-05-05'
EXAMPLE_DAYS = 2

# (stop, accumulated seconds)
EXAMPLE_LINE1 = ((1, 0), (2, 150), (3, 305), (4, 600), (10, 840), (7, 960), (8, 1080), (9, 1200), (14, 1380))
EXAMPLE_LINE2 = ((13, 0), (6, 150), (10, 300), (5, 433), (11, 520), (9, 640), (12, 760))

EXAMPLE_TRIPS = (
    ((1, 1, 0), (10, 2, 1), (11, 2, 1)),
    ((2, 1, 1), (7, 1, 1)),
    ((3, 1, 1), (10, 2, 2), (12, 2, 2)),
    ((6, 2, 0), (11, 2, 0)),
    ((13, 2, 2), (9, 1, 2), (14, 1, 2)),
)


def example_offer() -> NetworkOffer:
    """Two line network of 14 stops.

    Line 1 runs 48 journeys a day every 20 minutes from 06:00, line 2 runs 64
    journeys a day every 15 minutes from 06:00, over two days. Stops lie about
    500 m apart on a diagonal.
    """
    t_begin = dt.parse_date(EXAMPLE_PERIOD_START)
    stops = [Stop(i, f'S{i}', round(40.0 + 0.0032 * i, 6), round(-3.7 + 0.0042 * i, 6)) for i in range(1, 15)]
    lines = [
        Line(1, [s for s, _ in EXAMPLE_LINE1], [t for _, t in EXAMPLE_LINE1]),
        Line(2, [s for s, _ in EXAMPLE_LINE2], [t for _, t in EXAMPLE_LINE2]),
    ]
    six = 6 * 3600
    schedules = [
        LineSchedule(1, [t_begin + d * dt.DAY + six + k * 1200 for d in range(EXAMPLE_DAYS) for k in range(48)]),
        LineSchedule(2, [t_begin + d * dt.DAY + six + k * 900 for d in range(EXAMPLE_DAYS) for k in range(64)]),
    ]
    return NetworkOffer(stops, lines, schedules, t_begin, t_begin + EXAMPLE_DAYS * dt.DAY)

def example_trips() -> List[UserTrip]:
    """The five trips t1..t5 over `example_offer`."""
    return [UserTrip.from_triples(i, t) for i, t in enumerate(EXAMPLE_TRIPS, 1)]

def small_network_config(**changes) -> NetworkConfig:
    """A reduced synthetic network for fast tests."""
    base = dict(n_routes=4, grid_width=6, grid_height=6, min_line_stops=6, max_line_stops=10,
                days=3, headways_minutes=(15, 20), service_start='06:00:00', service_end='12:00:00', seed=3)
    base.update(changes)
    return NetworkConfig(**base)

def small_network(**changes) -> NetworkOffer:
    return synthetic_network(small_network_config(**changes))
