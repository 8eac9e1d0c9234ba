# -*- coding: utf-8 -*-
import os
import re
from setuptools import setup, find_packages

here = os.path.abspath(os.path.dirname(__file__))

requirements = (
    'flask>=2.0',
    'flask-restx>=1.0',
    'pyyaml',
    'numpy>=1.22',
    'scipy>=1.7',
    'pandas>=1.5',
)

dev_requirements = (
    'pytest',
    'pytest-flask',
    'tox',
    'flake8',
    'invoke',
    'pytest-cov',
)

prod_requirements = (
    'uwsgi',
)


def find_version(*file_paths):
    """
    Read __version__ without importing the package
    """
    with open(os.path.join(here, *file_paths), 'r') as f:
        version_file = f.read()

    version_match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]",
                              version_file, re.M)
    if version_match:
        return version_match.group(1)
    raise RuntimeError("Unable to find version string in {}".format(os.path.join(*file_paths)))


setup(
    name='dfc_mvsv',
    version=find_version('dfc_mvsv', '__init__.py'),
    description="Dynamic functional connectivity estimation with a "
                "multivariate stochastic volatility model",
    license='GPLv3',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Medical Science Apps.',
        'Programming Language :: Python :: 3',
    ],
    python_requires='>=3.8',
    packages=find_packages(exclude=('tests',)),
    install_requires=requirements,
    include_package_data=True,
    entry_points={
        'console_scripts': ['dfc-mvsv = dfc_mvsv.cli:main'],
    },
    extras_require={
        'dev': dev_requirements,
        'prod': prod_requirements
    }
)
