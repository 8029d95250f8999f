import logging
import unittest

import numpy as np

from tripidx.wavelet import WaveletMatrix
from tripidx.succinct import RecordReader, RRRBitVector


LOGGER_NAME = 'tripidx-test-wavelet-'
log = logging.getLogger(LOGGER_NAME)


# journey values of the example index in suffix array order (rank 1 is the sentinel)
JPSI = [0, 0, 1, 1, 0, 2, 1, 1, 0, 2, 2, 0, 1, 1, 0, 2, 1, 2, 2]


class TestMethods(unittest.TestCase):
    def test_example(self):
        wm = WaveletMatrix(JPSI, sigma=128)
        print(' - [x] access of the aligned journey values')
        self.assertEqual(wm.access(14), 1)
        self.assertEqual(wm.access(18), 2)
        self.assertEqual(wm.to_numpy().tolist(), JPSI)
        self.assertEqual((wm.sigma, wm.height, len(wm)), (128, 7, 19))
        print(' - [x] range counts over the terminator ranks')
        self.assertEqual(wm.range_count(2, 6, 0, 0), 2)
        self.assertEqual(wm.range_count(2, 6, 1, 2), 3)
        self.assertEqual(wm.range_count(1, 19, 0, 127), 19)
        self.assertEqual(wm.range_count(8, 9, 1, 1), 1)
        self.assertEqual(wm.range_count(8, 9, 3, 100), 0)
        with self.assertRaises(ValueError):
            wm.range_count(3, 2, 0, 1)
        with self.assertRaises(ValueError):
            wm.range_count(1, 20, 0, 1)
        with self.assertRaises(ValueError):
            wm.range_count(1, 2, 2, 1)
        with self.assertRaises(IndexError):
            wm.access(0)

    def test_against_naive(self):
        rng = np.random.default_rng(21)
        vals = rng.integers(0, 300, size=2000)
        print(' - [x] range_count against a numpy count, plain and RRR levels')
        for sampling in (None, 32, 128):
            wm = WaveletMatrix(vals, rrr_sampling=sampling)
            if sampling:
                self.assertIsInstance(wm.levels[0], RRRBitVector)
            for _ in range(60):
                a, b = sorted(int(x) for x in rng.integers(1, 2001, size=2))
                lo, hi = sorted(int(x) for x in rng.integers(0, 320, size=2))
                want = int(((vals[a - 1:b] >= lo) & (vals[a - 1:b] <= hi)).sum())
                self.assertEqual(wm.range_count(a, b, lo, hi), want)
            for i in (1, 2, 1000, 2000):
                self.assertEqual(wm.access(i), int(vals[i - 1]))
        print(' - [x] record reload keeps the sampling')
        wm = WaveletMatrix(vals, rrr_sampling=64)
        back = WaveletMatrix.from_record(RecordReader(wm.to_record()).read())
        self.assertEqual(back.rrr_sampling, 64)
        self.assertEqual(back.sigma, wm.sigma)
        self.assertEqual(back.to_numpy().tolist(), vals.tolist())
        self.assertEqual(back.range_count(1, 2000, 10, 20), wm.range_count(1, 2000, 10, 20))

    def test_small_alphabets(self):
        print(' - [x] one value alphabet and negative values')
        wm = WaveletMatrix([0, 0, 0])
        self.assertEqual(wm.height, 1)
        self.assertEqual(wm.range_count(1, 3, 0, 0), 3)
        with self.assertRaises(ValueError):
            WaveletMatrix([1, -1])




if __name__ == "__main__":
    unittest.main(verbosity=2)
