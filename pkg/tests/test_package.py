import unittest

from tripidx.version import __version__, __version_info__

class TestMethods(unittest.TestCase):
    def test_version(self):
        self.assertTrue(isinstance(__version__, str))
        self.assertTrue(len(__version__.split('.')) >= 3)
        self.assertEqual(__version__, '.'.join(str(x) for x in __version_info__))

if __name__ == "__main__":
    unittest.main(verbosity=2)
