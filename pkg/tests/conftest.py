"""
Shared fixtures and hypothesis strategies
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

import functools

import numpy
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

MAX_DIM = 6


@st.composite
def symmetricMatrices(draw, minDim=1, maxDim=MAX_DIM):
    d = draw(st.integers(min_value=minDim, max_value=maxDim))
    m = draw(arrays(numpy.float64, (d, d),
        elements=st.floats(min_value=-1.0, max_value=1.0, width=64)))
    return 0.5 * (m + m.T)


@pytest.fixture
def rng():
    return numpy.random.default_rng(20260)


def randomSymmetric(rng, d):
    g = rng.standard_normal((d, d))
    return 0.5 * (g + g.T)


def randomWindow(rng, d, eta):
    "(1 - eta) I + eta Q diag(u) Q^T"
    q, _ = numpy.linalg.qr(rng.standard_normal((d, d)))
    m = (q * rng.uniform(0.0, 1.0, d)) @ q.T
    return (1.0 - eta) * numpy.eye(d) + eta * 0.5 * (m + m.T)


def orderedProduct(matrices):
    d = matrices[0].shape[0]
    return functools.reduce(numpy.matmul, matrices, numpy.eye(d))
