import logging
import unittest
import os
import tempfile
import shutil

import orjson
from pydantic import ValidationError

from tripidx.config import Settings, GeneratorConfig, NetworkConfig, BuildConfig, BenchConfig, load_settings, \
    override, QUERY_FAMILIES


LOGGER_NAME = 'tripidx-test-config-'
log = logging.getLogger(LOGGER_NAME)


class TestMethods(unittest.TestCase):
    def test_defaults(self):
        print(' - [x] defaults of every section')
        s = load_settings()
        self.assertEqual(s.generator.switch_probability, 0.1)
        self.assertEqual(s.generator.end_prob_coefficient, 0.01)
        self.assertEqual(s.generator.max_trip_stops, 100)
        self.assertEqual(s.build.t_psi, 128)
        self.assertIsNone(s.build.wm_sampling)
        self.assertEqual(s.build.encoding, 'plain')
        self.assertEqual(s.bench.families, QUERY_FAMILIES)
        self.assertEqual(s.bench.queries, 10000)
        self.assertEqual(s.network.n_routes * 2, 20)
        self.assertEqual(s.network.grid_width * s.network.grid_height * 2, 200)

    def test_validation(self):
        print(' - [x] invalid values raise ValidationError')
        with self.assertRaises(ValidationError):
            BuildConfig(t_psi=64)
        with self.assertRaises(ValidationError):
            BuildConfig(wm_sampling=16)
        with self.assertRaises(ValidationError):
            BuildConfig(encoding='zip')
        with self.assertRaises(ValidationError):
            GeneratorConfig(switch_probability=1.5)
        with self.assertRaises(ValidationError):
            GeneratorConfig(unknown=1)
        with self.assertRaises(ValidationError):
            NetworkConfig(min_line_stops=20, max_line_stops=10)
        with self.assertRaises(ValidationError):
            BenchConfig(families=('xy', 'zz'))
        self.assertEqual(BenchConfig(families=('xT', 'yE')).families, ('xT', 'yE'))
        print(' - [x] configs are frozen')
        with self.assertRaises(ValidationError):
            BuildConfig().t_psi = 32

    def test_override(self):
        print(' - [x] override applies only the given values')
        b = override(BuildConfig(), t_psi=32, encoding=None)
        self.assertEqual(b.t_psi, 32)
        self.assertEqual(b.encoding, 'plain')
        with self.assertRaises(ValidationError):
            override(BuildConfig(), t_psi=33)

    def test_file(self):
        print(' - [x] JSON settings file with partial sections')
        tmpdir = tempfile.mkdtemp()
        path = os.path.join(tmpdir, 'settings.json')
        with open(path, 'wb') as f:
            f.write(orjson.dumps({'generator': {'trip_count': 50, 'rng_seed': 9}, 'build': {'t_psi': 512}}))
        s = load_settings(path)
        self.assertEqual(s.generator.trip_count, 50)
        self.assertEqual(s.generator.rng_seed, 9)
        self.assertEqual(s.build.t_psi, 512)
        self.assertEqual(s.network, NetworkConfig())
        with open(path, 'wb') as f:
            f.write(orjson.dumps({'gen': {}}))
        with self.assertRaises(ValidationError):
            load_settings(path)
        shutil.rmtree(tmpdir)
        self.assertEqual(load_settings(None), Settings())




if __name__ == "__main__":
    unittest.main(verbosity=2)
