import logging
import unittest
import os
import tempfile
import shutil

from tripidx import dt
from tripidx.exceptions import OfferFormatError, UnknownStopError, UnknownLineError
from tripidx.offer import Stop, Line, LineSchedule, NetworkOffer, export_offer, load_offer, write_offer, \
    read_offer, offer_checksum, offer_sizes
from tripidx.fixtures import example_offer, small_network
from tripidx.tripgen import distance_m


LOGGER_NAME = 'tripidx-test-offer-'
log = logging.getLogger(LOGGER_NAME)


class TestMethods(unittest.TestCase):
    def setUp(self):
        self.o = example_offer()
        self.t0 = dt.parse_date('2017-05-05')

    def test_example_offer(self):
        o, t0 = self.o, self.t0
        print(' - [x] sizes of the worked example network')
        self.assertEqual((o.n_s, o.n_l, o.days), (14, 2, 2))
        self.assertEqual(o.journeys(1), 96)
        self.assertEqual(o.journeys(2), 128)
        self.assertEqual(o.max_journeys, 128)
        print(' - [x] inverted index and stop positions')
        self.assertEqual(o.lines_of_stop(10), [1, 2])
        self.assertEqual(o.lines_of_stop(9), [1, 2])
        self.assertEqual(o.lines_of_stop(13), [2])
        self.assertEqual(o.stop_position(2, 10), 3)
        self.assertEqual(o.stop_position(1, 14), 9)
        with self.assertRaises(UnknownStopError):
            o.stop_position(1, 13)
        with self.assertRaises(UnknownStopError):
            o.stop(15)
        with self.assertRaises(UnknownLineError):
            o.line(3)
        print(' - [x] departures and arrival times')
        self.assertEqual(o.departure(1, 0), t0 + 6 * 3600)
        self.assertEqual(o.departure(1, 48), t0 + dt.DAY + 6 * 3600)
        self.assertEqual(o.departure(2, 1), t0 + 6 * 3600 + 900)
        self.assertEqual(o.stop_arrival_time(1, 0, 10), t0 + 6 * 3600 + 840)
        with self.assertRaises(IndexError):
            o.departure(1, 96)

    def test_journeys_in_interval(self):
        o, t0 = self.o, self.t0
        print(' - [x] a day maps to a contiguous journey range')
        self.assertEqual(o.day_interval(0), (t0, t0 + dt.DAY))
        self.assertEqual(o.journeys_in_interval(1, *o.day_interval(0)), (0, 47))
        self.assertEqual(o.journeys_in_interval(1, *o.day_interval(1)), (48, 95))
        self.assertEqual(o.journeys_in_interval(2, *o.day_interval(1)), (64, 127))
        print(' - [x] half open bounds')
        six = t0 + 6 * 3600
        self.assertEqual(o.journeys_in_interval(2, six, six + 900), (0, 0))
        self.assertEqual(o.journeys_in_interval(2, six, six + 901), (0, 1))
        self.assertIsNone(o.journeys_in_interval(2, six + 1, six + 900))
        self.assertIsNone(o.journeys_in_interval(2, t0, six))
        self.assertIsNone(o.journeys_in_interval(2, six, six))
        with self.assertRaises(ValueError):
            o.journeys_in_interval(2, six, six - 1)
        with self.assertRaises(ValueError):
            o.day_interval(2)
        self.assertEqual(o.day_of(six), 0)
        self.assertEqual(o.day_of(six + dt.DAY), 1)

    def test_validation(self):
        print(' - [x] lines reject broken stop sequences')
        with self.assertRaises(OfferFormatError):
            Line(1, [1, 2], [0])
        with self.assertRaises(OfferFormatError):
            Line(1, [1], [0])
        with self.assertRaises(OfferFormatError):
            Line(1, [1, 2], [5, 10])
        with self.assertRaises(OfferFormatError):
            Line(1, [1, 2, 3], [0, 10, 10])
        with self.assertRaises(OfferFormatError):
            Line(1, [1, 2, 1], [0, 10, 20])
        with self.assertRaises(OfferFormatError):
            LineSchedule(1, [10, 5])
        print(' - [x] offers reject sparse ids and departures outside the period')
        stops = [Stop(1, 'a'), Stop(2, 'b')]
        line = Line(1, [1, 2], [0, 60])
        NetworkOffer(stops, [line], [LineSchedule(1, [100])], 0, dt.DAY)
        with self.assertRaises(OfferFormatError):
            NetworkOffer([Stop(2, 'b')], [], [], 0, dt.DAY)
        with self.assertRaises(OfferFormatError):
            NetworkOffer(stops, [line], [LineSchedule(1, [dt.DAY])], 0, dt.DAY)
        with self.assertRaises(OfferFormatError):
            NetworkOffer(stops, [line], [], 0, dt.DAY)
        with self.assertRaises(OfferFormatError):
            NetworkOffer(stops, [Line(1, [1, 3], [0, 60])], [LineSchedule(1, [])], 0, dt.DAY)

    def test_text_format(self):
        o = self.o
        print(' - [x] export then load gives the same offer')
        text = export_offer(o)
        self.assertTrue(text.startswith(f'P {o.t_begin} {o.t_end}\n'))
        self.assertIn('L 2 13:0 6:150 10:300 5:433 11:520 9:640 12:760\n', text)
        self.assertEqual(load_offer(text), o)
        tmpdir = tempfile.mkdtemp()
        path = os.path.join(tmpdir, 'offer.txt')
        write_offer(path, o)
        self.assertEqual(read_offer(path), o)
        shutil.rmtree(tmpdir)
        print(' - [x] checksum follows the content')
        self.assertEqual(offer_checksum(o), offer_checksum(load_offer(text)))
        self.assertNotEqual(offer_checksum(o), offer_checksum(small_network()))
        print(' - [x] stops may be implicit and labels may hold spaces')
        small = load_offer('# comment\nP 0 86400\nL 1 1:0 2:30 3:90\nJ 1 100 200\n')
        self.assertEqual(small.n_s, 3)
        self.assertEqual(small.stop(2).label, 'S2')
        spaced = load_offer('P 0 86400\nS 1 - - Plaza Mayor\nS 2 40.5 -3.7 Sol\nL 1 1:0 2:30\n')
        self.assertEqual(spaced.stop(1), Stop(1, 'Plaza Mayor', None, None))
        self.assertEqual(spaced.stop(2).lat, 40.5)
        self.assertEqual(spaced.journeys(1), 0)
        print(' - [x] malformed records name their line')
        with self.assertRaisesRegex(OfferFormatError, 'line 2'):
            load_offer('P 0 86400\nL 1 1:0 2:x\n')
        with self.assertRaisesRegex(OfferFormatError, 'line 2'):
            load_offer('P 0 86400\nX 1\n')
        with self.assertRaises(OfferFormatError):
            load_offer('L 1 1:0 2:30\n')
        with self.assertRaises(OfferFormatError):
            load_offer('P 0 86400\nL 1 1:0 2:30\nJ 2 100\n')

    def test_offer_sizes(self):
        print(' - [x] fixed width sizes of the common structures')
        sizes = offer_sizes(self.o)
        self.assertEqual(sizes['lines'], 72)
        self.assertEqual(sizes['schedules'], 896)
        self.assertEqual(sizes['inverted_index'], 64)
        self.assertEqual(sizes['total'], 1032)

    def test_synthetic_network(self):
        o = small_network()
        print(' - [x] twin stops and return lines')
        self.assertEqual(o.n_s, 72)
        self.assertEqual(o.n_l, 8)
        self.assertEqual(o.days, 3)
        for r in range(4):
            out, back = o.line(2 * r + 1), o.line(2 * r + 2)
            self.assertEqual(back.stops, tuple(s + 1 for s in reversed(out.stops)))
            self.assertTrue(all(s % 2 == 1 for s in out.stops))
            self.assertEqual(o.schedules[2 * r].departures.tolist(), o.schedules[2 * r + 1].departures.tolist())
            self.assertLessEqual(len(out), 10)
        self.assertAlmostEqual(distance_m(o, 1, 2), 40.0, delta=1.0)
        self.assertTrue(o.stop(1).label.endswith('A'))
        self.assertTrue(o.stop(2).label.endswith('B'))
        print(' - [x] departures stay inside the service window')
        for sch in o.schedules:
            tod = (sch.departures - dt.day_start(o.t_begin)) % dt.DAY
            self.assertTrue(bool(((tod >= 6 * 3600) & (tod < 12 * 3600)).all()))
        print(' - [x] the network only depends on its seed')
        self.assertEqual(small_network(), o)
        self.assertNotEqual(small_network(seed=4), o)




if __name__ == "__main__":
    unittest.main(verbosity=2)
