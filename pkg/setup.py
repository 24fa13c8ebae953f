# -*- coding: utf-8 -*-

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

try:
    import pypandoc
    LDESC = open('README.md', 'r').read()
    LDESC = pypandoc.convert_text(LDESC, 'rst', format='md')
except (ImportError, IOError, RuntimeError) as e:
    print("Could not create long description:")
    print(str(e))
    LDESC = ''

setup(name='pshopt',
      version = '1.0.dev0',
      description = 'Exact and grid-based scheduling of a single pumped-storage hydropower unit',
      long_description = LDESC,
      license = 'GPL',
      packages = [
          'pshopt',
          'pshopt.instance',
          'pshopt.lp',
          'pshopt.time_indexed',
          'pshopt.events',
          'pshopt.netflow',
          'pshopt.bnb',
          'pshopt.harness',
          'pshopt.cli',
          'pshopt.python',
          'pshopt.python.context_manager',
          'pshopt.python.decorators',
          ],
      entry_points = {
          'console_scripts': [
              'pshopt = pshopt.cli.main:main',
          ],
      },
      include_package_data = False,
      zip_safe = True,
      python_requires = '>=3.7',
      install_requires = [
          "attrs",
          "numpy",
          "scipy>=1.9",
          "networkx",
          "pandas",
          "matplotlib",
          "plotille",
      ],
      extras_require = {
          'test': ['pytest'],
      },
      keywords = 'pumped storage hydropower unit commitment scheduling dynamic programming branch and bound',
      classifiers = [
          'Development Status :: 4 - Beta',
          'Operating System :: OS Independent',
          'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
          'Programming Language :: Python',
          'Programming Language :: Python :: 3',
          'Topic :: Scientific/Engineering :: Mathematics',
      ]
)
