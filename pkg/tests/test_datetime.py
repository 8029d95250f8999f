import logging
import unittest
from datetime import datetime

from tripidx import dt


LOGGER_NAME = 'tripidx-test-datetime-'
log = logging.getLogger(LOGGER_NAME)



class TestMethods(unittest.TestCase):
    def test_epoch(self):
        print(' - [x] naive datetimes are UTC')
        self.assertEqual(dt.to_epoch(datetime(1970, 1, 2)), dt.DAY)
        self.assertEqual(dt.from_epoch(dt.DAY + 61), datetime(1970, 1, 2, 0, 1, 1))
        self.assertEqual(dt.day_start(dt.DAY + 3600), dt.DAY)

    def test_parse(self):
        print(' - [x] time of day, dates and periods')
        self.assertEqual(dt.parse_hms('06:00:00'), 6 * 3600)
        self.assertEqual(dt.parse_hms('25:10:05'), 25 * 3600 + 605)
        self.assertEqual(dt.format_hms(25 * 3600 + 605), '25:10:05')
        with self.assertRaises(ValueError):
            dt.parse_hms('6h')
        t0 = dt.parse_date('2017-05-05')
        self.assertEqual(t0, dt.to_epoch(datetime(2017, 5, 5)))
        self.assertEqual(dt.parse_date('20170505'), t0)
        self.assertEqual(dt.parse_period('2017-05-05:7'), (t0, t0 + 7 * dt.DAY))
        self.assertEqual(dt.parse_period('2017-05-05..2017-05-07'), (t0, t0 + 2 * dt.DAY))
        self.assertEqual(dt.parse_period('2017-05-05'), (t0, t0 + dt.DAY))
        with self.assertRaises(ValueError):
            dt.parse_period('2017-05-05..2017-05-05')
        with self.assertRaises(ValueError):
            dt.parse_period('2017-05-05:x')
        with self.assertRaises(ValueError):
            dt.parse_date('05/05/2017')




if __name__ == "__main__":
    unittest.main(verbosity=2)
