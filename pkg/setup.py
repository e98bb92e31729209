# setuptools installation of TongueMotion
# Released under the GNU Public License 3 (or higher, your choice)
#
# See the files README.rst and COPYING for details.
from __future__ import with_statement
from setuptools import setup, find_packages

import os

with open("README.rst") as readme:
    long_description = readme.read()

# The version is set in tonguemotion/version.py; read it without
# importing the package (which needs numpy before it is installed).
version_file = os.path.join(os.path.dirname(__file__), 'tonguemotion', 'version.py')
version_ns = {}
with open(version_file) as f:
    exec(f.read(), version_ns)
version = version_ns['get_version']()

setup(name="TongueMotion",
      version=version,
      description="ConvLSTM prediction of ultrasound tongue video frames, from scratch in numpy.",
      long_description=long_description,
      license="GPLv3",
      keywords="science ultrasound tongue speech 'video prediction' ConvLSTM",
      classifiers=['Development Status :: 3 - Alpha',
                   'Environment :: Console',
                   'Intended Audience :: Science/Research',
                   'License :: OSI Approved :: GNU General Public License (GPL)',
                   'Operating System :: POSIX',
                   'Operating System :: MacOS :: MacOS X',
                   'Programming Language :: Python',
                   'Topic :: Scientific/Engineering :: Artificial Intelligence',
                   'Topic :: Scientific/Engineering :: Image Recognition',
                   'Topic :: Software Development :: Libraries :: Python Modules',
                   ],
      packages=find_packages(exclude=['scripts', 'doc', 'examples']),
      scripts = ['scripts/tonguemotion',
                 ],
      package_data={'tonguemotion': ['templates/*.cfg',     # configuration template
                                     ],
                    },
      install_requires = ['numpy>=1.20',   # sliding_window_view
                          'scipy',         # splines, banded solves, filters
                          'six',           # py 2/3 compatibility
                          'pandas',        # loss curves and reports
                          ],
      extras_require = {
                'plotting': ['matplotlib>=1.5',
                             ],
                },
      tests_require = ['pytest', 'numpy', 'pandas'],
      zip_safe = False,
)
