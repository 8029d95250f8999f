"""Trip index: compact structures for user trips over public transportation networks.
"""

__version_info__ = (0, 3, 0)
__version__ = '.'.join([str(x) for x in __version_info__])
