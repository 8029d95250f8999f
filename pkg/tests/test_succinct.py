import logging
import unittest

import numpy as np
from bitarray import bitarray

from tripidx.exceptions import IndexFormatError
from tripidx.succinct import BitVector, SparseBitVector, RRRBitVector, FixedWidthIntArray, RecordReader, \
    pack_record, make_bitvector, bitvector_from_record
from tripidx.succinct.bitvector import to_bitarray, bitarray_from_positions
from tripidx.succinct.record import HEADER, pack_int_array, unpack_int_array


LOGGER_NAME = 'tripidx-test-succinct-'
log = logging.getLogger(LOGGER_NAME)


def naive_rank(bits, i):
    return sum(bits[:i])

def naive_select(bits, k, v=1):
    c = 0
    for p, b in enumerate(bits, 1):
        if b == v:
            c += 1
            if c == k:
                return p
    raise IndexError(k)


class TestMethods(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(11)
        self.dense = rng.integers(0, 2, size=3000).tolist()
        self.sparse = (rng.random(5000) < 0.02).astype(int).tolist()

    def check_contract(self, bv, bits):
        n = len(bits)
        ones = sum(bits)
        self.assertEqual(len(bv), n)
        self.assertEqual(bv.ones, ones)
        self.assertEqual(bv.zeros, n - ones)
        for i in list(range(0, min(n, 70))) + list(range(max(0, n - 40), n + 1)) + [n // 2, n // 3]:
            self.assertEqual(bv.rank1(i), naive_rank(bits, i), msg=f'rank1({i})')
            self.assertEqual(bv.rank0(i), i - naive_rank(bits, i))
        for i in (1, 2, n // 2, n):
            self.assertEqual(bv.access(i), bits[i - 1])
        for k in sorted(k for k in {1, 2, ones // 2, ones - 1, ones} if 1 <= k <= ones):
            self.assertEqual(bv.select1(k), naive_select(bits, k), msg=f'select1({k})')
        zeros = n - ones
        for k in sorted(k for k in {1, zeros // 2, zeros} if 1 <= k <= zeros):
            self.assertEqual(bv.select0(k), naive_select(bits, k, 0), msg=f'select0({k})')
        self.assertEqual(bv.positions().tolist(), [p for p, b in enumerate(bits, 1) if b])
        with self.assertRaises(IndexError):
            bv.rank1(n + 1)
        with self.assertRaises(IndexError):
            bv.select1(ones + 1)
        with self.assertRaises(IndexError):
            bv.access(0)

    def test_bitvector_small(self):
        print(' - [x] BitVector rank/select on 1010')
        bv = BitVector('1010')
        self.assertEqual(bv.rank1(0), 0)
        self.assertEqual(bv.rank1(1), 1)
        self.assertEqual(bv.rank1(3), 2)
        self.assertEqual(bv.rank1(4), 2)
        self.assertEqual(bv.select1(1), 1)
        self.assertEqual(bv.select1(2), 3)
        self.assertEqual(bv.select0(1), 2)
        self.assertEqual(bv.select0(2), 4)
        self.assertEqual(bv.access(2), 0)
        self.assertEqual(BitVector.from_positions(4, [1, 3]), bv)
        print(' - [x] empty bitvector')
        empty = BitVector('')
        self.assertEqual(len(empty), 0)
        self.assertEqual(empty.rank1(0), 0)
        self.assertEqual(empty.positions().tolist(), [])

    def test_bitvector_random(self):
        print(' - [x] BitVector against naive rank/select (crosses rank blocks)')
        self.check_contract(BitVector(self.dense), self.dense)
        self.check_contract(BitVector(self.sparse), self.sparse)

    def test_rrr(self):
        print(' - [x] RRRBitVector against naive rank/select for every sample rate')
        for rate in (32, 64, 128):
            self.check_contract(RRRBitVector(self.dense, rate), self.dense)
            self.check_contract(RRRBitVector(self.sparse, rate), self.sparse)
        print(' - [x] RRR block boundaries: all ones and all zeros')
        ones = [1] * 45
        self.check_contract(RRRBitVector(ones), ones)
        with self.assertRaises(IndexError):
            RRRBitVector(ones).select0(1)
        zeros = [0] * 31 + [1]
        self.check_contract(RRRBitVector(zeros), zeros)
        print(' - [x] RRR rejects other sample rates')
        with self.assertRaises(ValueError):
            RRRBitVector('1', 16)
        print(' - [x] RRR compresses a sparse vector below the plain one')
        self.assertLess(RRRBitVector(self.sparse).size_in_bytes(), BitVector(self.sparse).size_in_bytes())

    def test_sdarray(self):
        print(' - [x] SparseBitVector against naive rank/select')
        self.check_contract(SparseBitVector.from_bits(self.sparse), self.sparse)
        self.check_contract(SparseBitVector.from_bits(self.dense), self.dense)
        print(' - [x] SparseBitVector with a single one and with no ones')
        one = [0] * 99 + [1]
        self.check_contract(SparseBitVector(100, [100]), one)
        self.assertEqual(SparseBitVector(100, [100]).select1(1), 100)
        with self.assertRaises(IndexError):
            SparseBitVector(100, [100]).select1(2)
        none = SparseBitVector(10, [])
        self.assertEqual(none.rank1(10), 0)
        self.assertEqual(none.positions().tolist(), [])
        print(' - [x] SparseBitVector validates positions')
        with self.assertRaises(ValueError):
            SparseBitVector(5, [3, 3])
        with self.assertRaises(ValueError):
            SparseBitVector(5, [6])

    def test_records(self):
        print(' - [x] every bitvector kind reloads from its record')
        for bv in (BitVector(self.dense), RRRBitVector(self.dense, 64), SparseBitVector.from_bits(self.sparse)):
            rec = RecordReader(bv.to_record()).read()
            back = bitvector_from_record(rec)
            self.assertIs(type(back), type(bv))
            self.assertEqual(back, bv)
            self.assertEqual(bv.size_in_bytes(), len(bv.to_record()))
        self.assertIsInstance(make_bitvector('101', 32), RRRBitVector)
        self.assertIsInstance(make_bitvector('101'), BitVector)
        print(' - [x] record header layout and errors')
        raw = pack_record(b'TEST', 7, 3, b'abc')
        self.assertEqual(len(raw), HEADER.size + 3)
        reader = RecordReader(raw + pack_int_array(b'INTS', [1, -2, 3]))
        rec = reader.read(b'TEST')
        self.assertEqual((rec.magic, rec.n, rec.w, rec.payload), (b'TEST', 7, 3, b'abc'))
        self.assertEqual(reader.peek_magic(), b'INTS')
        self.assertEqual(unpack_int_array(reader.read()).tolist(), [1, -2, 3])
        self.assertTrue(reader.at_end())
        with self.assertRaises(IndexFormatError):
            RecordReader(raw).read(b'NOPE')
        with self.assertRaises(IndexFormatError):
            RecordReader(raw[:-1]).read()
        with self.assertRaises(IndexFormatError):
            bitvector_from_record(rec)
        with self.assertRaises(ValueError):
            pack_record(b'TOOLONG', 0, 0, b'')

    def test_intarray(self):
        print(' - [x] FixedWidthIntArray get/set keeps neighbours')
        a = FixedWidthIntArray.from_values([5, 2, 7], w=3)
        self.assertEqual(list(a), [5, 2, 7])
        self.assertEqual(a[2], 7)
        self.assertEqual(a[-1], 7)
        a[1] = 6
        self.assertEqual(list(a), [5, 6, 7])
        with self.assertRaises(ValueError):
            a[0] = 8
        with self.assertRaises(IndexError):
            a.get(3)
        print(' - [x] default width fits the maximum')
        b = FixedWidthIntArray.from_values([0, 1, 1000])
        self.assertEqual(b.width, 10)
        self.assertEqual(b.to_numpy().tolist(), [0, 1, 1000])
        c = FixedWidthIntArray.from_values([0, 0])
        self.assertEqual(c.width, 1)
        print(' - [x] 64 bit values and record reload')
        big = FixedWidthIntArray.from_values([2 ** 62, 3], w=64)
        self.assertEqual(big.to_numpy().tolist(), [2 ** 62, 3])
        back = FixedWidthIntArray.from_record(RecordReader(big.to_record()).read())
        self.assertEqual(back, big)
        with self.assertRaises(ValueError):
            FixedWidthIntArray.from_values([-1])
        with self.assertRaises(ValueError):
            FixedWidthIntArray.from_values([4], w=2)
        with self.assertRaises(ValueError):
            FixedWidthIntArray(3, 0)
        print(' - [x] zero initialised array')
        z = FixedWidthIntArray(4, 5)
        self.assertEqual(list(z), [0, 0, 0, 0])

    def test_bit_helpers(self):
        print(' - [x] bit helpers')
        self.assertEqual(to_bitarray([1, 0, 1]), bitarray('101'))
        self.assertEqual(to_bitarray(np.array([True, False])), bitarray('10'))
        self.assertEqual(bitarray_from_positions(5, [2, 5]), bitarray('01001'))
        with self.assertRaises(ValueError):
            to_bitarray([2])
        with self.assertRaises(ValueError):
            bitarray_from_positions(3, [0])




if __name__ == "__main__":
    unittest.main(verbosity=2)
