import logging
import unittest

from tripidx.config import GeneratorConfig
from tripidx.trips import UserTrip, Stage
from tripidx.tripgen import TripGenerator, generate_trips, find_transfer_candidates, validate_trip, nearby_stops
from tripidx.fixtures import example_offer, example_trips, small_network


LOGGER_NAME = 'tripidx-test-tripgen-'
log = logging.getLogger(LOGGER_NAME)


class TestMethods(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.net = small_network()
        cls.cfg = GeneratorConfig(trip_count=300, rng_seed=5, shard_size=100)
        cls.trips = generate_trips(cls.net, cls.cfg)

    def test_transfer_candidates(self):
        o = example_offer()
        six = o.departure(1, 0)
        print(' - [x] same stop transfer candidates within the wait limit')
        t = o.stop_arrival_time(1, 0, 10)
        self.assertEqual(t, six + 840)
        self.assertEqual(find_transfer_candidates(o, 10, t, 1), [(10, 2, 1), (10, 2, 2)])
        print(' - [x] the line just left and last stops are excluded')
        self.assertEqual(find_transfer_candidates(o, 10, t, 2), [(10, 1, 0), (10, 1, 1)])
        self.assertEqual(find_transfer_candidates(o, 14, t, 2), [])
        print(' - [x] the wait limit bounds the candidates')
        short = GeneratorConfig(max_wait_seconds=400)
        self.assertEqual(find_transfer_candidates(o, 10, t, 1, short), [(10, 2, 1)])

    def test_validate_trip(self):
        o = example_offer()
        trips = example_trips()
        print(' - [x] the replayed example trips follow the generator rules but t5')
        for t in trips[:4]:
            self.assertEqual(validate_trip(o, t), [])
        bad = validate_trip(o, trips[4])
        self.assertEqual(len(bad), 1)
        self.assertIn('stage 2', bad[0])
        print(' - [x] reboarding, long trips and broken trips are reported')
        rb = UserTrip(9, (Stage(1, 1, 0, 3), Stage(3, 1, 1, 8)))
        self.assertTrue(any('reboards' in b for b in validate_trip(o, rb)))
        self.assertTrue(any('traversed stops' in b for b in validate_trip(o, trips[0], GeneratorConfig(max_trip_stops=5))))
        self.assertEqual(len(validate_trip(o, UserTrip(3, (Stage(10, 1, 0, 4),)))), 1)

    def test_generated_trips(self):
        o, trips = self.net, self.trips
        print(' - [x] trip ids are 1..trip_count in order')
        self.assertEqual([t.trip_id for t in trips], list(range(1, 301)))
        print(' - [x] every generated trip satisfies the generator rules')
        for t in trips:
            self.assertEqual(validate_trip(o, t, self.cfg), [], msg=str(t))
        print(' - [x] some trips transfer')
        self.assertTrue(any(len(t.stages) > 1 for t in trips))
        print(' - [x] boarding positions leave room for two stops')
        for t in trips:
            for st in t.stages:
                line = o.line(st.line)
                self.assertLessEqual(line.position(st.stop), len(line) - 2)

    def test_determinism(self):
        print(' - [x] the same seed gives the same trips, another seed does not')
        self.assertEqual(generate_trips(self.net, self.cfg), self.trips)
        other = generate_trips(self.net, GeneratorConfig(trip_count=300, rng_seed=6, shard_size=100))
        self.assertNotEqual(other, self.trips)
        print(' - [x] shards are independent of the worker count')
        par = generate_trips(self.net, GeneratorConfig(trip_count=300, rng_seed=5, shard_size=100, workers=2))
        self.assertEqual(par, self.trips)
        print(' - [x] shard k only depends on (seed, k)')
        gen = TripGenerator(self.net, self.cfg)
        self.assertEqual(gen.generate_shard(1, 101, 100), self.trips[100:200])

    def test_nearby(self):
        print(' - [x] twin stops are within walking distance')
        near = nearby_stops(self.net, 100.0)
        self.assertEqual(near[0], (1, 2))
        self.assertEqual(near[1], (2, 1))
        self.assertEqual(nearby_stops(self.net, 0.0)[0], (1,))




if __name__ == "__main__":
    unittest.main(verbosity=2)
