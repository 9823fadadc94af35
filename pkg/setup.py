#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Personalized coupled tensor decomposition
'''

from setuptools import setup, find_packages

def readme():
    ''' emit README '''
    with open('README.md', encoding='utf8') as file:
        return file.read()

setup(
    name='perstd',
    version='1.0',
    description='Personalized coupled tensor decomposition',
    long_description=readme(),
    long_description_content_type='text/markdown',
    classifiers=[],
    keywords='tensor decomposition cpd coupled uniqueness image fusion',
    license='BSD',
    packages=find_packages(exclude=['tests']),
    package_data={'perstd': ['samples/*.cfg']},
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.9',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': ['perstd=perstd.__main__:main_exit'],
    },
    zip_safe=False
)
