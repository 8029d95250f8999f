import logging
import unittest
import os
import tempfile
import shutil

from tripidx import dt
from tripidx.exceptions import GtfsParseError, DataError
from tripidx.gtfs import import_gtfs, read_table


LOGGER_NAME = 'tripidx-test-gtfs-'
log = logging.getLogger(LOGGER_NAME)


FEED = {
    'stops.txt': """stop_id,stop_name,stop_lat,stop_lon
A,Atocha,40.4066,-3.6892
B,Sol,40.4169,-3.7035
C,Callao,40.4199,-3.7058
""",
    'routes.txt': """route_id,route_short_name
R1,1
""",
    'trips.txt': """route_id,service_id,trip_id,direction_id
R1,WK,T1,0
R1,WK,T2,0
R1,WK,T3,1
""",
    'stop_times.txt': """trip_id,arrival_time,departure_time,stop_id,stop_sequence
T1,08:00:00,08:00:00,A,1
T1,08:05:00,08:05:00,B,2
T1,08:10:30,08:10:30,C,3
T2,09:00:00,09:00:00,A,1
T2,09:06:00,09:06:00,B,2
T2,09:10:01,09:10:01,C,3
T3,10:00:00,10:00:00,C,1
T3,10:04:00,10:04:00,A,2
""",
}


class TestMethods(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.write(FEED)
        self.period = dt.parse_period('2017-05-05:2')

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def write(self, files):
        for name, content in files.items():
            with open(os.path.join(self.tmpdir, name), 'w', encoding='utf-8') as f:
                f.write(content)

    def test_import(self):
        o = import_gtfs(self.tmpdir, self.period)
        t0 = self.period[0]
        print(' - [x] stops keep their names and coordinates')
        self.assertEqual(o.n_s, 3)
        self.assertEqual(o.stop(2).label, 'Sol')
        self.assertEqual(o.stop(1).lat, 40.4066)
        print(' - [x] one line per route, direction and stop sequence')
        self.assertEqual(o.n_l, 2)
        self.assertEqual(o.line(1).stops, (1, 2, 3))
        self.assertEqual(o.line(2).stops, (3, 1))
        print(' - [x] accumulated times are averages rounded half up')
        self.assertEqual(o.line(1).acc_times, (0, 330, 616))
        self.assertEqual(o.line(2).acc_times, (0, 240))
        print(' - [x] every service runs every day of the period')
        self.assertEqual(o.schedules[0].departures.tolist(),
                         [t0 + 8 * 3600, t0 + 9 * 3600, t0 + dt.DAY + 8 * 3600, t0 + dt.DAY + 9 * 3600])
        self.assertEqual(o.journeys(2), 2)

    def test_errors(self):
        print(' - [x] non-monotone stop times report file and row')
        self.write({'stop_times.txt': FEED['stop_times.txt'].replace('T1,08:05:00,08:05:00', 'T1,07:59:00,07:59:00')})
        with self.assertRaises(GtfsParseError) as cm:
            import_gtfs(self.tmpdir, self.period)
        self.assertEqual((cm.exception.file, cm.exception.row), ('stop_times.txt', 3))
        self.assertIsInstance(cm.exception, DataError)
        print(' - [x] dangling references')
        self.write({'stop_times.txt': FEED['stop_times.txt'] + 'T2,09:20:00,09:20:00,Z,4\n'})
        with self.assertRaises(GtfsParseError) as cm:
            import_gtfs(self.tmpdir, self.period)
        self.assertEqual(cm.exception.row, 10)
        self.write({'stop_times.txt': FEED['stop_times.txt'], 'trips.txt': FEED['trips.txt'] + 'R9,WK,T4,0\n'})
        with self.assertRaisesRegex(GtfsParseError, 'trips.txt:5'):
            import_gtfs(self.tmpdir, self.period)
        self.write({'trips.txt': FEED['trips.txt']})
        print(' - [x] empty stop times and missing files')
        self.write({'stop_times.txt': 'trip_id,arrival_time,departure_time,stop_id,stop_sequence\n'})
        with self.assertRaisesRegex(GtfsParseError, 'no journeys'):
            import_gtfs(self.tmpdir, self.period)
        os.remove(os.path.join(self.tmpdir, 'routes.txt'))
        with self.assertRaises(GtfsParseError) as cm:
            import_gtfs(self.tmpdir, self.period)
        self.assertEqual(cm.exception.file, 'routes.txt')
        print(' - [x] missing mandatory column')
        self.write({'routes.txt': 'route_name\nx\n'})
        with self.assertRaisesRegex(GtfsParseError, 'route_id'):
            read_table(self.tmpdir, 'routes.txt')




if __name__ == "__main__":
    unittest.main(verbosity=2)
