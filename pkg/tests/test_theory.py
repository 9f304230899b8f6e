"""
Tests for the small-step expansion, the two-matrix results, the numerical
radius identities and the regression bounds
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

import math

import numpy
import pytest
from numpy.testing import assert_allclose

from conftest import randomSymmetric, randomWindow
from matrix_amgm import theory
from matrix_amgm import permprod
from matrix_amgm import matcore
from matrix_amgm import inequality
from matrix_amgm.errors import OutOfRangeError, NotPsdError, SingularMatrixError
from matrix_amgm.errors import NotUnitVectorError, DimensionMismatchError
from matrix_amgm.errors import WindowViolationError

EXPANSION_ETAS = (1e-2, 5e-3, 2.5e-3)

# commutator [[0, 2], [-2, 0]]
STRONG_PAIR = [numpy.diag([1.0, -1.0]), numpy.array([[0.0, 1.0], [1.0, 0.0]])]


def test_nearIdentityPower(rng):
    x = 0.1 * randomSymmetric(rng, 3)
    for K in (1, 2, 5, 8):
        expected = numpy.linalg.matrix_power(numpy.eye(3) + x, K) - numpy.eye(3)
        assert_allclose(theory.nearIdentityPower(x, K), expected, atol=1e-14)


def test_shuffleDeviations_match_means(rng):
    mfamily = [randomSymmetric(rng, 2) for _ in range(3)]
    eta = 0.2
    ss, rs = theory.shuffleDeviations(mfamily, 3, eta)
    triple = permprod.meansTriple([numpy.eye(2) - eta * m for m in mfamily], 3)
    assert_allclose(ss, triple.wSS - numpy.eye(2), atol=1e-13)
    assert_allclose(rs, triple.wRS - numpy.eye(2), atol=1e-13)


def test_degree_four_coefficient_two_members():
    c4 = theory.degreeFourCoefficient(STRONG_PAIR, 2)
    assert_allclose(c4, numpy.eye(2), atol=1e-15)


def test_expansion_exact_for_two_members_two_epochs():
    check = theory.lemma1ExpansionCheck(STRONG_PAIR, 2, EXPANSION_ETAS)
    for eta, norm in zip(check.etaValues, check.differenceNorms):
        assert_allclose(norm, eta ** 4, rtol=1e-5)
    assert check.bounded()
    assert set(check.toDict()) == {'eta_values', 'c4_norm', 'residual_ratios',
        'difference_norms'}


def test_expansion_residual_band(rng):
    for _ in range(5):
        mfamily = [randomSymmetric(rng, 3) for _ in range(3)]
        check = theory.lemma1ExpansionCheck(mfamily, 2, EXPANSION_ETAS)
        assert check.bounded()
        assert check.spread() > 0.0


def test_expansion_arguments():
    with pytest.raises(OutOfRangeError):
        theory.lemma1ExpansionCheck(STRONG_PAIR, 2, (1e-3, 1e-2))
    with pytest.raises(OutOfRangeError):
        theory.lemma1ExpansionCheck(STRONG_PAIR, 2, (0.0,))


def test_lemma1Suite():
    records = list(theory.lemma1Suite(20, seed=11))
    assert len(records) == 20
    assert all(r.holds for r in records)


def test_theorem1Condition():
    assert theory.theorem1Condition(STRONG_PAIR)
    assert not theory.theorem1Condition([numpy.diag([1.0, 2.0]), numpy.diag([3.0, 1.0])])
    # skew-symmetric matrices of odd order are singular
    rng = numpy.random.default_rng(5)
    assert not theory.theorem1Condition([randomSymmetric(rng, 3) for _ in range(2)])


def test_theorem1EtaSearch_two_members():
    search = theory.theorem1EtaSearch(STRONG_PAIR, 2)
    assert search.etaMax == max(theory.DEFAULT_ETA_GRID)
    assert all(m > 0 for m in search.margins)
    assert_allclose(search.margins[-1], search.etas[-1] ** 4, rtol=1e-2)


def test_theorem1EtaSearch_grid_floor():
    with pytest.raises(OutOfRangeError):
        theory.theorem1EtaSearch(STRONG_PAIR, 2, etaGrid=(1e-8,))


def test_theorem1Suite():
    for record in theory.theorem1Suite(8, seed=2):
        assert record.holds


def test_lemma2Check(rng):
    for K in range(1, 6):
        eta = 1.0 / (2 * K)
        assert theory.lemma2Check(randomWindow(rng, 3, eta), randomWindow(rng, 3, eta), K)
    with pytest.raises(WindowViolationError):
        theory.lemma2Check(0.1 * numpy.eye(2), numpy.eye(2), 2)


def test_theorem2Check(rng):
    for m in (1, 2, 3):
        eta = 1.0 / (2 * 2 ** m)
        report = theory.theorem2Check(randomWindow(rng, 4, eta), randomWindow(rng, 4, eta), m)
        assert report.variant == inequality.THEOREM2
        assert report.K == 2 ** m
        assert report.holds
    with pytest.raises(OutOfRangeError):
        theory.theorem2Check(numpy.eye(2), numpy.eye(2), 0)


def test_theorem3Check(rng):
    for K in range(1, 21):
        a = theory.randomPsd(rng, 2)
        b = theory.randomPsd(rng, 2)
        report = theory.theorem3Check(a, b, K)
        assert report.holds, K
    with pytest.raises(NotPsdError):
        theory.theorem3Check(numpy.diag([1.0, -1.0]), numpy.eye(2), 2)
    with pytest.raises(DimensionMismatchError):
        theory.theorem3Check(numpy.eye(3), numpy.eye(3), 2)


def test_theorem2Suite_and_theorem3Suite():
    assert all(r.holds for r in theory.theorem2Suite(60, seed=1))
    assert all(r.holds for r in theory.theorem3Suite(100, seed=1))


def test_lemma6_formula(rng):
    for _ in range(200):
        a, b, c, d = rng.standard_normal(4)
        theta = rng.uniform(0.0, math.pi)
        oracle = theory.lemma6Oracle(a, b, c, d, theta)
        assert_allclose(theory.lemma6NormFormula(a, b, c, d, theta), oracle,
            rtol=1e-9, atol=1e-12)


def test_lemma6_at_right_angle():
    assert_allclose(theory.lemma6NormFormula(0.3, -1.2, 0.7, 0.8, math.pi / 2), 2 * 0.8 ** 2,
        rtol=1e-12)
    assert_allclose(theory.lemma6Oracle(0.3, -1.2, 0.7, 0.8, math.pi / 2), 2 * 0.8 ** 2,
        rtol=1e-12)


def test_lemma3Check(rng):
    for _ in range(50):
        q = rng.standard_normal((2, 2)) + 2.0 * numpy.eye(2)
        lam = numpy.diag(rng.uniform(0.0, 1.0, 2))
        w, half = theory.lemma3Check(q, lam)
        assert_allclose(w, half, rtol=theory.RADIUS_TOL)
    with pytest.raises(SingularMatrixError):
        theory.lemma3Check(numpy.ones((2, 2)), numpy.eye(2))
    with pytest.raises(OutOfRangeError):
        theory.lemma3Check(numpy.eye(2), numpy.diag([1.0, -1.0]))


def test_lemma3_fails_in_three_dimensions():
    w, half = theory.lemma3Sides(theory.NUMRAD_COUNTEREXAMPLE)
    assert abs(w - 3.0004) <= 5e-4
    assert abs(half - 3.0) <= 1e-9
    assert w > half


def test_checkAssumptionsA1A2():
    check = theory.checkAssumptionsA1A2(numpy.eye(4))
    assert check.a1 and check.a2
    assert check.coherence == 0.0
    assert_allclose([check.sMin, check.sMax], [1.0, 1.0], atol=1e-14)
    crowded = numpy.array([[1.0, 0.0], [math.sqrt(0.5), math.sqrt(0.5)], [0.0, 1.0]])
    assert not theory.checkAssumptionsA1A2(crowded).a1
    with pytest.raises(NotUnitVectorError):
        theory.checkAssumptionsA1A2(2.0 * numpy.eye(3))


def test_incoherentVectors():
    x = theory.incoherentVectors(4, seed=3)
    check = theory.checkAssumptionsA1A2(x)
    assert check.a1 and check.a2
    assert numpy.array_equal(x, theory.incoherentVectors(4, seed=3))
    with pytest.raises(OutOfRangeError):
        theory.incoherentVectors(3, d=4)


def test_regressionFamily():
    family = theory.regressionFamily(numpy.eye(3), 0.25)
    assert_allclose(family[1], numpy.diag([1.0, 0.75, 1.0]))


@pytest.mark.parametrize('n', [4, 8])
def test_theorem4Check(n):
    for t in range(3):
        x = theory.incoherentVectors(n, seed=(17, t))
        for eta in (0.0, 1.0 / (12 * n), 1.0 / (6 * n)):
            report = theory.theorem4Check(x, eta)
            assert report.variant == inequality.THEOREM4
            assert report.holds


def test_lemma4Bounds_canonical():
    for n in range(4, 65):
        assert theory.canonicalLemma4Bounds(n).nonnegative(), n


def test_lemma4Bounds_fields():
    bounds = theory.lemma4Bounds(4, 1, 0.0, 0.5, 0.7, 1.4)
    assert bounds.gapBound == 0.0
    assert bounds.rsBound == 1.0
    assert set(bounds.toDict()) >= {'rhs_gap_bound', 'rhs_rs_bound'}
    with pytest.raises(OutOfRangeError):
        theory.lemma4Bounds(1, 1, 0.1, 0.5, 0.7, 1.4)


def test_lemma4Check_orthonormal_frame():
    n = 4
    eta = 1.0 / (6 * n)
    comparison = theory.lemma4Check(numpy.eye(n), eta)
    # commuting members: W_RS = (1 - eta) I, W_GD = (1 - eta/n)^n I
    assert_allclose(comparison.rsMin, 1 - eta, rtol=1e-12)
    assert_allclose(comparison.gapMin, (1 - eta / n) ** n - (1 - eta), rtol=1e-9)
    assert comparison.gapMin >= comparison.gapBound
    assert comparison.rsMin >= comparison.rsBound - 1e-12


@pytest.mark.parametrize('n', [4, 6, 8])
def test_lemma4Check_incoherent_frames(n):
    for t in range(3):
        x = theory.incoherentVectors(n, seed=(23, t))
        for eta in (1.0 / (12 * n), 1.0 / (6 * n)):
            comparison = theory.lemma4Check(x, eta)
            assert comparison.gapMin >= comparison.gapBound - 1e-12, (t, eta)
            assert comparison.rsMin >= comparison.rsBound - 1e-12, (t, eta)


def test_skewSquareCheck(rng):
    for K in (2, 4, 6):
        eta = 1.0 / (2 * K)
        assert theory.skewSquareCheck(randomWindow(rng, 3, eta), randomWindow(rng, 3, eta),
            K) <= theory.SKEW_TOL
    with pytest.raises(OutOfRangeError):
        theory.skewSquareCheck(numpy.eye(2), numpy.eye(2), 3)


@pytest.mark.parametrize('name', sorted(theory.SUITES))
def test_suites_are_seeded(name):
    first = list(theory.SUITES[name](2, 9))
    second = list(theory.SUITES[name](2, 9))
    assert first == second
    assert all(r.check in (name, 'skew') for r in first)


@pytest.mark.slow
def test_property_suites_at_full_size():
    assert all(r.holds for r in theory.lemma3Suite(1000, 1))
    assert all(r.holds for r in theory.lemma6Suite(10000, 1))
    assert all(r.holds for r in theory.theorem2Suite(3000, 1))
    assert all(r.holds for r in theory.theorem3Suite(20000, 1))
    assert all(r.holds for r in theory.theorem4Suite(50, 1, n=4))
    assert all(r.holds for r in theory.theorem4Suite(50, 1, n=8))


@pytest.mark.slow
def test_theorem1Suite_many_families():
    records = list(theory.theorem1Suite(100, seed=2))
    assert len(records) == 100
    assert all(r.holds for r in records)
