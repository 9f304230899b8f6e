"""
Tests for permutation enumeration, the shuffle means and the
with/without-replacement expectations
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
import itertools

import numpy
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from conftest import randomSymmetric, randomWindow, orderedProduct
from matrix_amgm import permprod
from matrix_amgm.errors import NotSymmetricError, WindowViolationError, OutOfRangeError
from matrix_amgm.errors import TooManyMatricesError, TooManyTuplesError, IndexOutOfRangeError
from matrix_amgm.errors import DimensionMismatchError


def bruteMean(members, K=1):
    prods = [numpy.linalg.matrix_power(orderedProduct([members[i] for i in perm]), K)
        for perm in itertools.permutations(range(len(members)))]
    return numpy.mean(prods, axis=0)


@pytest.fixture
def family(rng):
    return permprod.MatrixFamily([randomWindow(rng, 3, 0.8) for _ in range(4)], etaWindow=0.8)


def test_family_validation():
    with pytest.raises(NotSymmetricError):
        permprod.MatrixFamily([numpy.array([[1.0, 1.0], [0.0, 1.0]])])
    with pytest.raises(WindowViolationError):
        permprod.MatrixFamily([2.0 * numpy.eye(2)], etaWindow=0.5)
    with pytest.raises(WindowViolationError):
        permprod.MatrixFamily([0.2 * numpy.eye(2)], etaWindow=0.5)
    with pytest.raises(OutOfRangeError):
        permprod.MatrixFamily([numpy.eye(2)], etaWindow=1.5)
    with pytest.raises(DimensionMismatchError):
        permprod.MatrixFamily([])


def test_family_is_read_only(family):
    with pytest.raises(ValueError):
        family.stacked[0, 0, 0] = 5.0


def test_family_helpers(family):
    assert len(family) == 4
    assert_allclose(family.mean(), family.stacked.mean(axis=0))
    assert_allclose(family.scaled(2.0, index=1)[1], 2.0 * family[1])
    assert_array_equal(family.scaled(2.0, index=1)[0], family[0])
    assert_allclose(family.shifted(0.5)[2], family[2] + 0.5 * numpy.eye(3))


def test_padded():
    base = permprod.MatrixFamily([numpy.diag([1.0, 0.0]), numpy.diag([0.0, 1.0])], etaWindow=1.0)
    more = base.padded(n=4)
    assert more.n == 4
    assert_array_equal(more[3], numpy.eye(2))
    bigger = base.padded(d=3)
    assert bigger.d == 3
    assert bigger.etaWindow == 1.0
    assert_array_equal(bigger[0], numpy.diag([1.0, 0.0, 0.0]))
    lifted = permprod.MatrixFamily([0.5 * numpy.eye(2)], etaWindow=0.5)
    assert lifted.padded(d=3).etaWindow is None


@pytest.mark.parametrize('n', [1, 3, 4, 8])
def test_permutationTuples_lexicographic(n):
    tuples = numpy.concatenate(list(permprod.permutationTuples(n)))
    if n <= 4:
        assert_array_equal(tuples, numpy.array(list(itertools.permutations(range(n)))))
    assert tuples.shape == (math.factorial(n), n)
    assert tuple(tuples[0]) == tuple(range(n))
    assert tuple(tuples[-1]) == tuple(reversed(range(n)))
    assert (numpy.diff(tuples @ (n ** numpy.arange(n)[::-1])) > 0).all()


def test_permutationTuples_blocks_are_bounded():
    for block in permprod.permutationTuples(8):
        assert len(block) <= permprod.MAX_BLOCK


def test_partial_tuples():
    tuples = numpy.concatenate(list(permprod.permutationTuples(5, 2)))
    assert_array_equal(tuples, numpy.array(list(itertools.permutations(range(5), 2))))
    assert permprod.tupleCount(5, 2) == 20
    with pytest.raises(IndexOutOfRangeError):
        list(permprod.permutationTuples(3, 4))
    with pytest.raises(TooManyMatricesError):
        list(permprod.permutationTuples(11))


def test_permutationProducts(family):
    for tuples, prods in permprod.permutationProducts(family):
        for t, p in zip(tuples, prods):
            assert_allclose(p, orderedProduct([family[i] for i in t]), rtol=1e-13)


def test_permutationMean_matches_brute_force(family):
    assert_allclose(permprod.permutationMean(family), bruteMean(family.stacked), atol=1e-14)


def test_permutationMean_single_member():
    m = numpy.diag([0.5, 0.25])
    assert_array_equal(permprod.permutationMean([m]), m)


def test_permutationMean_too_many():
    with pytest.raises(TooManyMatricesError):
        permprod.permutationMean([numpy.eye(1)] * 11)


def test_permutationMean_same_with_workers(rng):
    members = [randomWindow(rng, 2, 0.5) for _ in range(8)]
    assert_array_equal(permprod.permutationMean(members, workers=2),
        permprod.permutationMean(members))


def test_meansTriple_brute_force(family):
    triple = permprod.meansTriple(family, 3)
    assert_allclose(triple.wSS, bruteMean(family.stacked, 3), atol=1e-14)
    assert_allclose(triple.wRS, numpy.linalg.matrix_power(bruteMean(family.stacked), 3), atol=1e-14)
    assert_allclose(triple.wGD, numpy.linalg.matrix_power(family.mean(), 12), atol=1e-14)
    assert triple.norms == (triple.normSS, triple.normRS, triple.normGD)


def test_meansTriple_one_epoch_collapse(family):
    triple = permprod.meansTriple(family, 1)
    assert_allclose(triple.wSS, triple.wRS, atol=1e-15)
    assert triple.ssHolds(1e-15)


def test_meansTriple_commuting_family():
    family = [numpy.diag([0.9, 0.5]), numpy.diag([0.3, 0.8]), numpy.diag([0.6, 0.6])]
    triple = permprod.meansTriple(family, 4)
    assert_allclose(triple.normSS, triple.normRS, rtol=1e-14)
    assert triple.rsHolds()
    assert triple.toDict()['K'] == 4


def test_meansTriple_power_range(family):
    with pytest.raises(OutOfRangeError):
        permprod.meansTriple(family, 0)


def test_ratio_of_zero_mean():
    triple = permprod.MeansTriple(numpy.eye(2), numpy.zeros((2, 2)), numpy.eye(2), 2, 2)
    assert triple.ratio == math.inf


def test_batchMeansNorms_matches_meansTriple(rng):
    stacks = numpy.array([[randomWindow(rng, 2, 1.0) for _ in range(3)] for _ in range(4)])
    normSS, normRS, normGD = permprod.batchMeansNorms(stacks, 3)
    for t in range(4):
        triple = permprod.meansTriple(stacks[t], 3)
        assert_allclose([normSS[t], normRS[t], normGD[t]], triple.norms, rtol=1e-12)


def test_elementarySymmetric_generating_function(rng):
    family = permprod.MatrixFamily([randomSymmetric(rng, 3) for _ in range(4)])
    sigma = [2, 0, 3, 1]
    t = 0.3
    expected = orderedProduct([numpy.eye(3) + t * family[s] for s in sigma])
    total = sum(t ** k * permprod.elementarySymmetric(family, sigma, k) for k in range(5))
    assert_allclose(total, expected, atol=1e-13)
    assert_array_equal(permprod.elementarySymmetric(family, sigma, 0), numpy.eye(3))
    with pytest.raises(IndexOutOfRangeError):
        permprod.elementarySymmetric(family, [0, 0, 1, 2], 2)


@pytest.mark.parametrize('n', [3, 4, 5])
def test_e2_differences_are_skew(rng, n):
    family = permprod.MatrixFamily([randomSymmetric(rng, 3) for _ in range(n)])
    for _ in range(10):
        first, second = rng.permutation(n), rng.permutation(n)
        diff = (permprod.elementarySymmetric(family, first, 2) -
            permprod.elementarySymmetric(family, second, 2))
        assert_allclose(diff.T, -diff, atol=1e-12)


def test_e2_reversal_is_commutator_sum(rng):
    members = [randomSymmetric(rng, 3) for _ in range(3)]
    family = permprod.MatrixFamily(members)
    diff = (permprod.elementarySymmetric(family, [0, 1, 2], 2) -
        permprod.elementarySymmetric(family, [2, 1, 0], 2))
    commutators = sum(members[i] @ members[j] - members[j] @ members[i]
        for i, j in itertools.combinations(range(3), 2))
    assert_allclose(diff, commutators, atol=1e-12)


def test_elementarySymmetricMean(rng):
    family = permprod.MatrixFamily([randomSymmetric(rng, 2) for _ in range(4)])
    perms = list(itertools.permutations(range(4)))
    for m in range(5):
        expected = numpy.mean([permprod.elementarySymmetric(family, p, m) for p in perms], axis=0)
        assert_allclose(permprod.elementarySymmetricMean(family, m), expected, atol=1e-13)


def test_ewoMean_full_length_is_permutationMean(family):
    assert_allclose(permprod.ewoMean(family, family.n), permprod.permutationMean(family),
        atol=1e-13)


def test_ewoMean_partial(family):
    tuples = list(itertools.permutations(range(4), 2))
    expected = numpy.mean([family[i] @ family[j] for i, j in tuples], axis=0)
    assert_allclose(permprod.ewoMean(family, 2), expected, atol=1e-14)
    assert_allclose(permprod.ewoMean(family, 1), family.mean(), atol=1e-15)
    with pytest.raises(IndexOutOfRangeError):
        permprod.ewoMean(family, 0)


def test_ewrMean_enumerate_matches_power(family):
    for m in (1, 2, 5):
        assert_allclose(permprod.ewrMean(family, m, method='enumerate'),
            permprod.ewrMean(family, m, method='power'), atol=1e-12)


def test_ewrMean_tuple_cap():
    family = [numpy.eye(1)] * 10
    with pytest.raises(TooManyTuplesError):
        permprod.ewrMean(family, 8, method='enumerate')
    assert_allclose(permprod.ewrMean(family, 8), numpy.eye(1))


def test_productBlocks_order(rng):
    stack = rng.standard_normal((3, 2, 2))
    prods = numpy.concatenate(list(permprod.productBlocks(stack, 3, chunk=4)))
    expected = [stack[i] @ stack[j] @ stack[k]
        for i, j, k in itertools.product(range(3), repeat=3)]
    assert_allclose(prods, numpy.array(expected), rtol=1e-13)


@pytest.mark.parametrize('K', [2, 3])
def test_symmetrizedMeans_brute_force(rng, K):
    family = permprod.MatrixFamily([randomWindow(rng, 3, 0.9) for _ in range(2)])
    perms = [orderedProduct([family[i] for i in p]) for p in itertools.permutations(range(2))]
    right = numpy.mean([orderedProduct(list(chosen)).T @ orderedProduct(list(chosen))
        for chosen in itertools.product(perms, repeat=K)], axis=0)
    left = numpy.mean([numpy.linalg.matrix_power(p, K).T @ numpy.linalg.matrix_power(p, K)
        for p in perms], axis=0)
    gotLeft, gotRight = permprod.symmetrizedMeans(family, K)
    assert_allclose(gotLeft, left, atol=1e-13)
    assert_allclose(gotRight, right, atol=1e-13)


def test_normExpectation_one_epoch(family):
    expect = permprod.normExpectationMeans(family, 1)
    assert expect.left == expect.right
    assert expect.exact


def test_normExpectation_exact(rng):
    family = permprod.MatrixFamily([randomWindow(rng, 2, 1.0) for _ in range(3)])
    perms = [orderedProduct([family[i] for i in p]) for p in itertools.permutations(range(3))]
    right = numpy.mean([numpy.linalg.norm(a @ b, 2) for a in perms for b in perms])
    left = numpy.mean([numpy.linalg.norm(a @ a, 2) for a in perms])
    expect = permprod.normExpectationMeans(family, 2)
    assert expect.exact and expect.stderr is None
    assert_allclose(expect.left, left, rtol=1e-12)
    assert_allclose(expect.right, right, rtol=1e-12)


def test_normExpectation_monte_carlo(rng):
    family = permprod.MatrixFamily([randomWindow(rng, 2, 1.0) for _ in range(3)])
    exact = permprod.normExpectationMeans(family, 2, symmetrized=True)
    sampled = permprod.normExpectationMeans(family, 2, symmetrized=True, budget=1,
        seed=5, samples=2000)
    assert not sampled.exact
    assert sampled.left == exact.left
    assert abs(sampled.right - exact.right) <= 5 * sampled.stderr + 1e-12
    again = permprod.normExpectationMeans(family, 2, symmetrized=True, budget=1,
        seed=5, samples=2000)
    assert again.right == sampled.right


def test_tuple_statistics_brute_force(family):
    wo = permprod.ewoStatistics(family, 2)
    pairs = [family[i] @ family[j] for i, j in itertools.permutations(range(4), 2)]
    assert_allclose(wo.mean, numpy.mean(pairs, axis=0), atol=1e-14)
    assert_allclose(wo.symmetrized, numpy.mean([p.T @ p for p in pairs], axis=0), atol=1e-14)
    assert_allclose(wo.normMean, numpy.mean([numpy.linalg.norm(p, 2) for p in pairs]), rtol=1e-12)

    wr = permprod.ewrStatistics(family, 2)
    pairs = [family[i] @ family[j] for i, j in itertools.product(range(4), repeat=2)]
    assert_allclose(wr.mean, numpy.mean(pairs, axis=0), atol=1e-14)
    assert_allclose(wr.symmetrized, numpy.mean([p.T @ p for p in pairs], axis=0), atol=1e-14)
    assert_allclose(wr.symNormMean,
        numpy.mean([numpy.linalg.norm(p.T @ p, 2) for p in pairs]), rtol=1e-12)
