import logging
import unittest
import io
import os
import tempfile
from contextlib import redirect_stdout, redirect_stderr
from unittest import mock

import orjson
import pandas as pd

from tripidx.admin import main, run
from tripidx.exceptions import VerificationError
from tripidx.fixtures import small_network_config


LOGGER_NAME = 'tripidx-test-admin-'
log = logging.getLogger(LOGGER_NAME)


def quiet(fn, argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        res = fn(argv)
    return res, out.getvalue()


class TestMethods(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        self.offer = self.path('offer.txt')
        self.trips = self.path('trips.txt')
        quiet(main, ['generate', '--example', '--network-out', self.offer, '--out', self.trips])

    def tearDown(self):
        self._tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp, name)

    def test_example_flow(self):
        print(' - [x] generate --example writes the offer and the trips')
        self.assertTrue(os.path.exists(self.offer))
        with open(self.trips, encoding='utf-8') as f:
            self.assertIn('# trips 5', f.read())
        print(' - [x] build and query a TTCTR index')
        ttctr = self.path('trips.ttctr')
        code, _ = quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'ttctr',
                               '--tpsi', '32', '--out', ttctr])
        self.assertEqual(code, 0)
        res, out = quiet(run, ['query', '--offer', self.offer, '--index', ttctr, '--start', 'S3', '--end', 'S12'])
        self.assertEqual(res, 1)
        self.assertEqual(out.strip(), '1')
        res, _ = quiet(run, ['query', '--offer', self.offer, '--index', ttctr, '--end', '11', '--end-line', '2',
                             '--day', '0'])
        self.assertEqual(res, 2)
        res, out = quiet(run, ['query', '--offer', self.offer, '--index', ttctr, '--kind', 'list',
                               '--start', 'S3', '--end', 'S12'])
        self.assertEqual(out.strip(), '(3,1,1) (10,2,2) (12,2,2)')
        res, _ = quiet(run, ['query', '--offer', self.offer, '--index', ttctr, '--kind', 'boardings',
                             '--stop', '10', '--line', '2', '--day', '0'])
        self.assertEqual(res, 2)
        print(' - [x] build and query an AcumM index')
        acumm = self.path('trips.acumm')
        code, _ = quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'acumm',
                               '--encoding', 'diff', '--out', acumm])
        self.assertEqual(code, 0)
        base = ['query', '--offer', self.offer, '--index', acumm, '--line', '2']
        self.assertEqual(quiet(run, base + ['--kind', 'window', '--journeys', '0:2', '--positions', '1:7'])[0], 4)
        self.assertEqual(quiet(run, base + ['--kind', 'load', '--journeys', '2', '--positions', '3'])[0], 2)
        self.assertEqual(quiet(run, base + ['--kind', 'journey', '--journeys', '2'])[0], 2)
        self.assertEqual(quiet(run, base + ['--kind', 'boardings', '--stop', 'S10', '--day', '0'])[0], 2)
        res, out = quiet(run, base + ['--kind', 'average'])
        self.assertEqual(res, 2)
        self.assertEqual(out.strip(), '2')
        print(' - [x] verify the example files')
        code, out = quiet(main, ['verify', '--offer', self.offer, '--trips', self.trips, '--count', '5'])
        self.assertEqual(code, 0)
        self.assertIn('answers match the oracle', out)

    def test_sizes_and_bench(self):
        print(' - [x] sizes report as JSON')
        out_json = self.path('sizes.json')
        code, _ = quiet(main, ['sizes', '--offer', self.offer, '--trips', self.trips, '--out', out_json])
        self.assertEqual(code, 0)
        with open(out_json, 'rb') as f:
            sizes = orjson.loads(f.read())
        self.assertEqual(sizes['common']['total'], 1032)
        self.assertEqual(sorted(sizes), ['acumm_diff', 'acumm_plain', 'common', 'ttctr'])
        print(' - [x] bench writes one CSV row per configuration and family')
        csv = self.path('bench.csv')
        code, _ = quiet(main, ['bench', '--offer', self.offer, '--trips', self.trips, '--tpsi', '32,128',
                               '--queries', 'xy,JkSk', '--count', '5', '--warmup', '1', '--out', csv])
        self.assertEqual(code, 0)
        df = pd.read_csv(csv)
        self.assertEqual(len(df), 3)
        self.assertEqual(sorted(df['t_psi'].tolist()), [0, 32, 128])

    def test_generate_with_config(self):
        print(' - [x] synthetic network and trips from a settings file')
        cfg = self.path('settings.json')
        with open(cfg, 'wb') as f:
            f.write(orjson.dumps({'network': small_network_config().model_dump(), 'generator': {'shard_size': 20}}))
        net, trips = self.path('net.txt'), self.path('gen.txt')
        code, _ = quiet(main, ['generate', '--config', cfg, '--trips', '40', '--seed', '7', '--network-out', net,
                               '--out', trips])
        self.assertEqual(code, 0)
        with open(trips, encoding='utf-8') as f:
            text = f.read()
        self.assertIn('# seed 7', text)
        self.assertIn('# trips 40', text)
        code, _ = quiet(main, ['verify', '--offer', net, '--trips', trips, '--count', '5', '--config', cfg])
        self.assertEqual(code, 0)

    def test_exit_codes(self):
        print(' - [x] usage errors exit with 1')
        self.assertEqual(quiet(main, ['frobnicate'])[0], 1)
        self.assertEqual(quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'ttctr'])[0], 1)
        self.assertEqual(quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'ttctr',
                                      '--tpsi', '7', '--out', self.path('x')])[0], 1)
        self.assertEqual(quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'btree',
                                      '--out', self.path('x')])[0], 1)
        self.assertEqual(quiet(main, ['generate', '--out', self.path('t.txt')])[0], 1)
        print(' - [x] a journey outside the line exits with 1')
        acumm = self.path('trips.acumm')
        quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'acumm', '--out', acumm])
        err = io.StringIO()
        with redirect_stdout(io.StringIO()), redirect_stderr(err):
            code = main(['query', '--offer', self.offer, '--index', acumm, '--line', '2', '--kind', 'journey',
                         '--journeys', '999'])
        self.assertEqual(code, 1)
        self.assertIn('no journey 999', err.getvalue())
        print(' - [x] data errors exit with 2')
        self.assertEqual(quiet(main, ['query', '--offer', self.offer, '--index', self.trips, '--end', '11'])[0], 2)
        self.assertEqual(quiet(main, ['sizes', '--offer', self.path('missing.txt'), '--trips', self.trips])[0], 2)
        ttctr = self.path('trips.ttctr')
        quiet(main, ['build', '--offer', self.offer, '--trips', self.trips, '--index', 'ttctr', '--out', ttctr])
        self.assertEqual(quiet(main, ['query', '--offer', self.offer, '--index', ttctr, '--end', 'Nowhere'])[0], 2)
        print(' - [x] verification mismatches exit with 3')
        with mock.patch('tripidx.admin.verify_all', side_effect=VerificationError('xy: count gave 1, the oracle says 2')):
            self.assertEqual(quiet(main, ['verify', '--offer', self.offer, '--trips', self.trips])[0], 3)




if __name__ == "__main__":
    unittest.main(verbosity=2)
