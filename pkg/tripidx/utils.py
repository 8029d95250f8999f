"""Common utils.

"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


import hashlib
from typing import Union

import numpy as np


EARTH_RADIUS_METERS = 6371008.8


def Open(path: str, mode: str, **kwargs):
    """Wrapper for open with utf-8 encoding

    Args:
        path (str): path to file
        mode (str): file open mode

    Returns:
        open: open context manager handle
    """
    return open(path, mode, encoding='utf-8', **kwargs)

def bits_needed(value: int) -> int:
    """Number of bits needed to store any integer in [0, value].

    It is ⌈log₂(value+1)⌉, with a minimum of 1.

    Args:
        value (int): largest value to be stored

    Returns:
        int: width in bits
    """
    if value < 0:
        raise ValueError(f"Negative value: {value}")
    return max(1, int(value).bit_length())

def sha256_hex(data: Union[str, bytes]) -> str:
    """Hex sha256 digest of text (utf-8) or bytes.
    """
    if isinstance(data, str):
        data = data.encode('utf-8')
    return hashlib.sha256(data).hexdigest()

def haversine_m(lat1, lon1, lat2, lon2):
    """Great circle distance in meters.

    Works on scalars and numpy arrays (broadcasting).
    """
    lat1, lon1, lat2, lon2 = (np.radians(np.asarray(x, dtype=np.float64)) for x in (lat1, lon1, lat2, lon2))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_METERS * np.arcsin(np.sqrt(np.minimum(1.0, a)))
