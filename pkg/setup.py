# -*- coding: utf-8 -*-
import os
import sys
from codecs import open
from setuptools import setup, find_packages

sys.path[0:0] = ['tripidx']

from version import __version__

def get_readme(filename):
    content = ""
    try:
        with open(os.path.join(os.path.dirname(__file__), filename), 'r', encoding='utf-8') as readme:
            content = readme.read()
    except Exception as e:
        pass
    return content

setup(name="tripidx",
      version=__version__,
      author="tripidx developers",
      description="Compact indexes of user trips over a public transport network",
      license="BSD",
      keywords="transit, trips, compressed suffix array, wavelet matrix, succinct",
      packages=find_packages(include=('tripidx*',)),
      long_description=get_readme("README.md"),
      long_description_content_type="text/markdown",
      classifiers=[
        # See: https://pypi.python.org/pypi?:action=list_classifiers
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Information Technology',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Information Analysis',
      ],
      python_requires='>=3.10.0',
      install_requires=['pydantic>=2.6.4', 'orjson', 'numpy', 'bitarray>=2.6', 'pandas'],
      scripts=['tripidx/tripidx_admin',],
test_suite="tests")
