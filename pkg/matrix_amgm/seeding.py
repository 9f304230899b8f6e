"""
Deterministic random streams.

Every random draw in the package comes from a generator keyed by a tuple
of non-negative integers, e.g. (seed, trial, member). The same keys give
the same stream whatever process or worker asks for it.
"""
# This file is part of 'matrix-amgm' - a laboratory for matrix AM-GM inequalities
# Copyright (C) 2026  matrix-amgm developers
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; either version 2
# of the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA  02110-1301, USA.

import numpy

GENERATOR_NAME = 'numpy.random.PCG64'
"Bit generator behind every stream. Written to output metadata"
SEEDING_NAME = 'numpy.random.SeedSequence(entropy=keys)'
"How the integer keys become a generator state"
NORMAL_NAME = 'numpy.random.Generator.standard_normal'
"Transform used for Gaussian draws"


def flattenKeys(*keys):
    """
    Flatten ints and tuples of ints into one list of keys. Negative
    keys are rejected as SeedSequence would.
    """
    flat = []
    for key in keys:
        if isinstance(key, (tuple, list)):
            flat.extend(flattenKeys(*key))
        else:
            key = int(key)
            if key < 0:
                raise ValueError('random stream keys must be non-negative, got %d' % key)
            flat.append(key)
    return flat


def streamRng(*keys):
    """
    Return a numpy Generator for the given stream keys
    """
    return numpy.random.default_rng(numpy.random.SeedSequence(flattenKeys(*keys)))


def generatorInfo():
    "Names written to the metadata header of every output"
    return {'bit_generator': GENERATOR_NAME, 'seeding': SEEDING_NAME,
        'normal': NORMAL_NAME}
