"""
Exact permutation-averaged matrix products.

Computes the single-shuffle, random-shuffle and GD means of a matrix
family, the noncommutative elementary symmetric polynomials, and the
without/with-replacement expectations of m-fold products with their
symmetrized and expectation-of-norm versions.

Permutations (and, more generally, ordered tuples of distinct indices) are
enumerated in lexicographic order, in blocks that share a fixed prefix.
Each block is summed on its own and block sums are added in block order,
so results are bitwise identical whatever the number of workers.
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
import logging
import functools
import itertools
import collections
from concurrent import futures

import numpy

from matrix_amgm import matcore
from matrix_amgm import seeding
from matrix_amgm.errors import DimensionMismatchError, TooManyMatricesError
from matrix_amgm.errors import TooManyTuplesError, IndexOutOfRangeError
from matrix_amgm.errors import OutOfRangeError, WindowViolationError
from matrix_amgm.errors import NotSymmetricError

logger = logging.getLogger(__name__)

MAX_ENUM_N = 10
"Largest family that is enumerated over all n! permutations"
MAX_BLOCK = 5040
"Largest number of tuples in one enumeration block (7!)"
MAX_POWER = 10 ** 6
"Largest epoch count K"
EWR_TUPLE_CAP = 10 ** 7
"Largest n**m enumerated by the with-replacement expectations"
NORM_BUDGET = 10 ** 6
"Default number of permutation K-tuples enumerated before Monte Carlo"
NORM_SAMPLES = 10 ** 4
"Default Monte Carlo sample count"
CHUNK = 20000
"Matrices handled at once when streaming products"


class MatrixFamily(object):
    """
    An ordered tuple of symmetric d x d matrices, stored as an (n, d, d)
    float array. If etaWindow is given every member must satisfy
    (1 - etaWindow) I <= A_i <= I within matcore.PSD_TOL.
    """
    def __init__(self, members, etaWindow=None, name=None):
        stack = numpy.array([numpy.asarray(m, dtype=float) for m in members])
        if stack.ndim != 3 or stack.shape[0] == 0:
            raise DimensionMismatchError('a family needs at least one d x d matrix, ' +
                'got shape %s' % (stack.shape,))
        stack = matcore.asMatrix(stack)
        if not matcore.isSymmetric(stack):
            raise NotSymmetricError('family members must be symmetric')

        if etaWindow is not None:
            etaWindow = float(etaWindow)
            if not (0.0 <= etaWindow <= 1.0):
                raise OutOfRangeError('etaWindow must be in [0, 1], got %r' % etaWindow)
            eye = numpy.eye(stack.shape[1])
            if not matcore.isPSD(eye - stack):
                raise WindowViolationError('a member exceeds I')
            if not matcore.isPSD(stack - (1.0 - etaWindow) * eye):
                raise WindowViolationError('a member is below (1 - %g) I' % etaWindow)

        stack.setflags(write=False)
        self.stacked = stack
        self.etaWindow = etaWindow
        self.name = name

    @property
    def n(self):
        return self.stacked.shape[0]

    @property
    def d(self):
        return self.stacked.shape[1]

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.stacked)

    def __getitem__(self, i):
        return self.stacked[i]

    def __repr__(self):
        return 'MatrixFamily(n=%d, d=%d, etaWindow=%r, name=%r)' % (self.n,
            self.d, self.etaWindow, self.name)

    def mean(self):
        "Arithmetic mean of the members"
        return self.stacked.mean(axis=0)

    def scaled(self, c, index=None):
        """
        Multiply every member (or only member index) by c
        """
        stack = self.stacked.copy()
        if index is None:
            stack *= c
        else:
            stack[index] *= c
        return MatrixFamily(stack, name=self.name)

    def shifted(self, c):
        "Add c * I to every member"
        return MatrixFamily(self.stacked + c * numpy.eye(self.d), name=self.name)

    def padded(self, n=None, d=None):
        """
        Extend to n members by appending identities and to dimension d by a
        direct sum with a zero block.
        """
        stack = self.stacked
        window = self.etaWindow
        if d is not None and d > self.d:
            big = numpy.zeros((stack.shape[0], d, d))
            big[:, :self.d, :self.d] = stack
            stack = big
            # zero block only sits in the window for eta = 1
            if window != 1.0:
                window = None
        if n is not None and n > stack.shape[0]:
            extra = numpy.broadcast_to(numpy.eye(stack.shape[1]),
                (n - stack.shape[0],) + stack.shape[1:])
            stack = numpy.concatenate([stack, extra])
        return MatrixFamily(stack, etaWindow=window, name=self.name)


def asFamily(family):
    "Accept a MatrixFamily or any sequence of symmetric matrices"
    if isinstance(family, MatrixFamily):
        return family
    return MatrixFamily(family)


def _checkEnumerable(family):
    if family.n > MAX_ENUM_N:
        raise TooManyMatricesError('n=%d is above the enumeration cap %d' %
            (family.n, MAX_ENUM_N))


def tupleCount(n, m):
    "Number of ordered m-tuples of distinct indices from range(n)"
    return math.perm(n, m)


def _prefixLength(n, m):
    """
    Shortest prefix whose remaining tails fit in one block
    """
    p = 0
    while p < m and math.perm(n - p, m - p) > MAX_BLOCK:
        p += 1
    return p


def _blockTuples(n, m, prefix):
    """
    All ordered m-tuples of distinct indices starting with prefix,
    lexicographic, as an int array
    """
    rest = [i for i in range(n) if i not in prefix]
    tails = numpy.array(list(itertools.permutations(rest, m - len(prefix))),
        dtype=numpy.intp).reshape(-1, m - len(prefix))
    head = numpy.broadcast_to(numpy.array(prefix, dtype=numpy.intp),
        (tails.shape[0], len(prefix)))
    return numpy.concatenate([head, tails], axis=1)


def tupleProducts(stack, tuples):
    """
    Left-to-right products stack[t0] @ stack[t1] @ ... for every row of tuples
    """
    if tuples.shape[1] == 0:
        return numpy.broadcast_to(numpy.eye(stack.shape[1]),
            (tuples.shape[0],) + stack.shape[1:]).copy()
    prods = stack[tuples[:, 0]]
    for j in range(1, tuples.shape[1]):
        prods = numpy.matmul(prods, stack[tuples[:, j]])
    return prods


def permutationTuples(n, m=None):
    """
    Generator over the lexicographic blocks of ordered m-tuples of distinct
    indices from range(n), m=None meaning all n! permutations
    """
    m = n if m is None else m
    if n > MAX_ENUM_N:
        raise TooManyMatricesError('n=%d is above the enumeration cap %d' % (n, MAX_ENUM_N))
    if not (0 <= m <= n):
        raise IndexOutOfRangeError('m must be in [0, %d], got %d' % (n, m))
    for prefix in itertools.permutations(range(n), _prefixLength(n, m)):
        yield _blockTuples(n, m, prefix)


def permutationProducts(family, m=None):
    """
    As permutationTuples, yielding (tuples, products) with products[b] the
    left-to-right product along tuples[b].
    """
    family = asFamily(family)
    for tuples in permutationTuples(family.n, m):
        yield tuples, tupleProducts(family.stacked, tuples)


def _runBlock(stack, m, reducer, prefix):
    tuples = _blockTuples(stack.shape[0], m, prefix)
    return reducer(tupleProducts(stack, tuples))


def _reduceBlocks(family, m, reducer, workers=None):
    """
    Apply reducer to every block of products and add the per-block results
    in lexicographic block order. reducer returns a tuple of arrays.
    """
    _checkEnumerable(family)
    n = family.n
    prefixes = list(itertools.permutations(range(n), _prefixLength(n, m)))
    logger.debug('enumerating %d tuples of length %d in %d blocks',
        tupleCount(n, m), m, len(prefixes))

    job = functools.partial(_runBlock, numpy.array(family.stacked), m, reducer)
    if workers is not None and workers > 1 and len(prefixes) > 1:
        with futures.ProcessPoolExecutor(max_workers=workers) as pool:
            chunksize = max(1, len(prefixes) // (4 * workers))
            results = pool.map(job, prefixes, chunksize=chunksize)
            totals = _fold(results)
    else:
        totals = _fold(map(job, prefixes))
    return totals


def _fold(results):
    totals = None
    for parts in results:
        if totals is None:
            totals = [numpy.array(p, dtype=float) for p in parts]
        else:
            for total, p in zip(totals, parts):
                total += p
    return totals


# block reducers, kept at module level so worker processes can unpickle them

def _sumReducer(prods):
    return (prods.sum(axis=0),)


def _triplePartsReducer(prods, K):
    return (prods.sum(axis=0), numpy.linalg.matrix_power(prods, K).sum(axis=0))


def _symmetrizedReducer(prods, K):
    powered = numpy.linalg.matrix_power(prods, K)
    sym = numpy.matmul(numpy.swapaxes(powered, -1, -2), powered)
    kron = numpy.einsum('bij,bkl->ikjl', prods, prods)
    return (sym.sum(axis=0), kron)


def _normReducer(prods, K):
    powered = numpy.linalg.matrix_power(prods, K)
    sym = numpy.matmul(numpy.swapaxes(powered, -1, -2), powered)
    return (numpy.sum(matcore.spectralNorm(powered)),
        numpy.sum(matcore.spectralNorm(sym)))


def _tupleStatsReducer(prods):
    sym = numpy.matmul(numpy.swapaxes(prods, -1, -2), prods)
    return (prods.sum(axis=0), sym.sum(axis=0),
        numpy.sum(matcore.spectralNorm(prods)), numpy.sum(matcore.spectralNorm(sym)))


def permutationMean(family, workers=None):
    """
    (1/n!) * sum over all permutations sigma of A_sigma(1) ... A_sigma(n)
    """
    family = asFamily(family)
    total, = _reduceBlocks(family, family.n, _sumReducer, workers)
    return total / math.factorial(family.n)


class MeansTriple(object):
    """
    The single-shuffle, random-shuffle and GD means of a family for
    K epochs, with their spectral norms.
    """
    def __init__(self, wSS, wRS, wGD, n, K):
        self.wSS = wSS
        self.wRS = wRS
        self.wGD = wGD
        self.n = n
        self.K = K
        norms = matcore.spectralNorm(numpy.array([wSS, wRS, wGD]))
        self.normSS, self.normRS, self.normGD = (float(x) for x in norms)

    @property
    def norms(self):
        return (self.normSS, self.normRS, self.normGD)

    @property
    def ratio(self):
        "normSS / normRS, inf when normRS is zero"
        if self.normRS == 0.0:
            return math.inf
        return self.normSS / self.normRS

    def ssHolds(self, tol=0.0):
        return self.normRS - self.normSS >= -tol

    def rsHolds(self, tol=0.0):
        return self.normGD - self.normRS >= -tol

    def toDict(self):
        return {'n': self.n, 'K': self.K, 'norm_ss': self.normSS,
            'norm_rs': self.normRS, 'norm_gd': self.normGD}


def checkPower(K):
    K = int(K)
    if not (1 <= K <= MAX_POWER):
        raise OutOfRangeError('K must be in [1, %d], got %d' % (MAX_POWER, K))
    return K


def meansTriple(family, K, workers=None):
    """
    W_SS = E_sigma[(A_sigma(1) ... A_sigma(n))^K]
    W_RS = (E_sigma[A_sigma(1) ... A_sigma(n)])^K
    W_GD = ((1/n) sum A_i)^(nK)
    """
    family = asFamily(family)
    K = checkPower(K)
    reducer = functools.partial(_triplePartsReducer, K=K)
    total, totalK = _reduceBlocks(family, family.n, reducer, workers)
    count = math.factorial(family.n)
    wSS = totalK / count
    wRS = numpy.linalg.matrix_power(total / count, K)
    wGD = numpy.linalg.matrix_power(family.mean(), family.n * K)
    return MeansTriple(wSS, wRS, wGD, family.n, K)


def batchMeansNorms(stacks, K):
    """
    (normSS, normRS, normGD) arrays for a batch of families given as a
    (T, n, d, d) array. All n! products of every family are held at once,
    so keep T * n! moderate.
    """
    stacks = matcore.asMatrix(stacks)
    T, n, d, _ = stacks.shape
    if n > MAX_ENUM_N:
        raise TooManyMatricesError('n=%d is above the enumeration cap %d' % (n, MAX_ENUM_N))
    K = checkPower(K)
    perms = numpy.array(list(itertools.permutations(range(n))), dtype=numpy.intp)
    prods = stacks[:, perms[:, 0]]
    for j in range(1, n):
        prods = numpy.matmul(prods, stacks[:, perms[:, j]])
    count = perms.shape[0]
    wSS = numpy.linalg.matrix_power(prods, K).sum(axis=1) / count
    wRS = numpy.linalg.matrix_power(prods.sum(axis=1) / count, K)
    wGD = numpy.linalg.matrix_power(stacks.mean(axis=1), n * K)
    norms = numpy.atleast_2d(matcore.spectralNorm(numpy.stack([wSS, wRS, wGD], axis=1)))
    return norms[:, 0], norms[:, 1], norms[:, 2]


def elementarySymmetric(family, sigma, m):
    """
    Noncommutative elementary symmetric polynomial: the sum over increasing
    positions i1 < ... < im of M_sigma(i1) ... M_sigma(im). sigma is a
    permutation of range(n). e_0 is the identity.
    """
    family = asFamily(family)
    n = family.n
    if sorted(int(s) for s in sigma) != list(range(n)):
        raise IndexOutOfRangeError('sigma must be a permutation of range(%d)' % n)
    if not (0 <= m <= n):
        raise IndexOutOfRangeError('m must be in [0, %d], got %d' % (n, m))

    # e[k] holds e_k of the prefix processed so far
    e = [numpy.eye(family.d)] + [numpy.zeros((family.d, family.d))] * m
    for s in sigma:
        b = family.stacked[int(s)]
        for k in range(m, 0, -1):
            e[k] = e[k] + e[k - 1] @ b
    return e[m]


def orderedSubsetSums(stack, m):
    """
    For every index set S with |S| <= m, the sum over all orderings of S
    of the ordered product. Returned as an array indexed by bitmask.
    """
    n, d, _ = stack.shape
    sums = numpy.zeros((1 << n, d, d))
    sums[0] = numpy.eye(d)
    for mask in sorted(range(1, 1 << n), key=lambda x: bin(x).count('1')):
        if bin(mask).count('1') > m:
            break
        for i in range(n):
            if mask & (1 << i):
                sums[mask] += sums[mask ^ (1 << i)] @ stack[i]
    return sums


def _levelSum(stack, m):
    sums = orderedSubsetSums(stack, m)
    masks = [mask for mask in range(1 << stack.shape[0]) if bin(mask).count('1') == m]
    return sums[masks].sum(axis=0)


def elementarySymmetricMean(family, m):
    """
    Mean of e_m(sigma) over all permutations: (1/m!) times the sum of
    ordered products over m-tuples of distinct indices.
    """
    family = asFamily(family)
    _checkEnumerable(family)
    if not (0 <= m <= family.n):
        raise IndexOutOfRangeError('m must be in [0, %d], got %d' % (family.n, m))
    return _levelSum(family.stacked, m) / math.factorial(m)


def ewoMean(family, m):
    """
    Without-replacement expectation of the m-fold product:
    ((n-m)!/n!) times the sum over ordered distinct m-tuples.
    """
    family = asFamily(family)
    _checkEnumerable(family)
    if not (1 <= m <= family.n):
        raise IndexOutOfRangeError('m must be in [1, %d], got %d' % (family.n, m))
    return _levelSum(family.stacked, m) / tupleCount(family.n, m)


def productBlocks(stack, levels, chunk=CHUNK):
    """
    Stream the left-to-right products over all levels-tuples of stack
    entries (repeats allowed) in lexicographic order, in pieces of about
    chunk matrices.
    """
    count, d, _ = stack.shape
    if levels == 1:
        for start in range(0, count, chunk):
            yield stack[start:start + chunk]
        return
    step = max(1, chunk // count)
    for head in productBlocks(stack, levels - 1, chunk):
        for start in range(0, head.shape[0], step):
            part = head[start:start + step]
            yield numpy.matmul(part[:, None], stack[None]).reshape(-1, d, d)


def ewrMean(family, m, method='auto'):
    """
    With-replacement expectation of the m-fold product, (1/n^m) times the
    sum over [n]^m. method 'enumerate' sums all tuples, 'power' uses
    ((1/n) sum A_i)^m, 'auto' enumerates while n^m <= EWR_TUPLE_CAP.
    """
    family = asFamily(family)
    if m < 1:
        raise IndexOutOfRangeError('m must be at least 1, got %d' % m)
    if method not in ('auto', 'enumerate', 'power'):
        raise ValueError('unknown method %r' % method)
    tuples = family.n ** m
    if method == 'auto':
        method = 'enumerate' if tuples <= EWR_TUPLE_CAP else 'power'
    if method == 'power':
        return numpy.linalg.matrix_power(family.mean(), m)
    if tuples > EWR_TUPLE_CAP:
        raise TooManyTuplesError('%d tuples is above the cap %d' % (tuples, EWR_TUPLE_CAP))

    total = numpy.zeros((family.d, family.d))
    for block in productBlocks(family.stacked, m):
        total += block.sum(axis=0)
    return total / tuples


def _kroneckerPower(kron, d, K):
    """
    Apply T -> E[P^T T P] K times to the identity, where kron is
    E[P kron P] as a (d, d, d, d) array indexed [i, k, j, l].
    """
    op = kron.reshape(d * d, d * d).T
    vec = numpy.linalg.matrix_power(op, K) @ numpy.eye(d).reshape(-1)
    out = vec.reshape(d, d)
    return 0.5 * (out + out.T)


def symmetrizedMeans(family, K, workers=None):
    """
    Returns (left, right) for the symmetrized single-/random-shuffle means

        left  = E_sigma[(P_sigma^T)^K P_sigma^K]
        right = E_sigma1..K[P_sigmaK^T ... P_sigma1^T P_sigma1 ... P_sigmaK]

    left by enumeration, right by the independence recursion
    T_1 = E[P^T P], T_k+1 = E[P^T T_k P].
    """
    family = asFamily(family)
    K = checkPower(K)
    reducer = functools.partial(_symmetrizedReducer, K=K)
    symTotal, kronTotal = _reduceBlocks(family, family.n, reducer, workers)
    count = math.factorial(family.n)
    left = symTotal / count
    left = 0.5 * (left + left.T)
    right = _kroneckerPower(kronTotal / count, family.d, K)
    return left, right


NormExpectation = collections.namedtuple('NormExpectation',
    ['left', 'right', 'stderr', 'exact'])
NormExpectation.__doc__ = """
Expectation-of-norm sides. stderr is None when right was enumerated
exactly, else the Monte Carlo standard error of right.
"""


def _stackedNorm(prods, symmetrized):
    if symmetrized:
        prods = numpy.matmul(numpy.swapaxes(prods, -1, -2), prods)
    return numpy.atleast_1d(matcore.spectralNorm(prods))


def _allPermutationProducts(family):
    parts = [prods for _, prods in permutationProducts(family)]
    return numpy.concatenate(parts)


def _sampleStackedNorms(family, K, symmetrized, seed, samples):
    """
    Norms of K-epoch random-shuffle products, one rng stream per sample
    """
    n = family.n
    index = numpy.empty((samples, K * n), dtype=numpy.intp)
    for s in range(samples):
        rng = seeding.streamRng(seed, s)
        index[s] = numpy.concatenate([rng.permutation(n) for _ in range(K)])
    norms = []
    for start in range(0, samples, CHUNK):
        part = index[start:start + CHUNK]
        norms.append(_stackedNorm(tupleProducts(family.stacked, part), symmetrized))
    return numpy.concatenate(norms)


def normExpectationMeans(family, K, symmetrized=False, budget=NORM_BUDGET,
        seed=0, samples=NORM_SAMPLES, workers=None):
    """
    Expectation-of-norm versions of the single/random-shuffle comparison:

        left  = E_sigma ||P_sigma^K||
        right = E_sigma1..K ||P_sigma1 ... P_sigmaK||

    (with X replaced by X^T X when symmetrized). right is enumerated over
    all (n!)^K tuples when that is at most budget, else estimated from
    samples Monte Carlo draws.
    """
    family = asFamily(family)
    K = checkPower(K)
    reducer = functools.partial(_normReducer, K=K)
    plainTotal, symTotal = _reduceBlocks(family, family.n, reducer, workers)
    count = math.factorial(family.n)
    left = float((symTotal if symmetrized else plainTotal) / count)

    if K == 1:
        return NormExpectation(left, left, None, True)

    if count ** K <= budget:
        perms = _allPermutationProducts(family)
        total = 0.0
        for block in productBlocks(perms, K):
            total += _stackedNorm(block, symmetrized).sum()
        return NormExpectation(left, float(total / count ** K), None, True)

    if samples < 2:
        raise OutOfRangeError('Monte Carlo needs at least 2 samples')
    logger.info('(n!)^K = %d tuples exceeds budget %d, sampling %d with seed %s',
        count ** K, budget, samples, seed)
    norms = _sampleStackedNorms(family, K, symmetrized, seed, samples)
    stderr = float(norms.std(ddof=1) / math.sqrt(samples))
    return NormExpectation(left, float(norms.mean()), stderr, False)


TupleStatistics = collections.namedtuple('TupleStatistics',
    ['mean', 'symmetrized', 'normMean', 'symNormMean'])
TupleStatistics.__doc__ = """
Expectations of an m-fold product P: E[P], E[P^T P], E||P|| and E||P^T P||
"""


def ewoStatistics(family, m, workers=None):
    """
    Without-replacement expectations of the m-fold product and its
    symmetrized and norm versions, by enumeration of distinct tuples.
    """
    family = asFamily(family)
    if not (1 <= m <= family.n):
        raise IndexOutOfRangeError('m must be in [1, %d], got %d' % (family.n, m))
    parts = _reduceBlocks(family, m, _tupleStatsReducer, workers)
    count = tupleCount(family.n, m)
    mean, sym, normSum, symNormSum = (p / count for p in parts)
    return TupleStatistics(mean, 0.5 * (sym + sym.T), float(normSum), float(symNormSum))


def ewrStatistics(family, m):
    """
    With-replacement expectations of the m-fold product. The symmetrized
    mean uses the recursion T <- E_i[A_i^T T A_i]; the norm expectations
    enumerate [n]^m.
    """
    family = asFamily(family)
    if m < 1:
        raise IndexOutOfRangeError('m must be at least 1, got %d' % m)
    tuples = family.n ** m
    if tuples > EWR_TUPLE_CAP:
        raise TooManyTuplesError('%d tuples is above the cap %d' % (tuples, EWR_TUPLE_CAP))

    stack = family.stacked
    sym = numpy.eye(family.d)
    for _ in range(m):
        sym = numpy.matmul(numpy.swapaxes(stack, -1, -2), numpy.matmul(sym, stack)).mean(axis=0)

    total = numpy.zeros((family.d, family.d))
    normSum = 0.0
    symNormSum = 0.0
    for block in productBlocks(stack, m):
        total += block.sum(axis=0)
        normSum += _stackedNorm(block, False).sum()
        symNormSum += _stackedNorm(block, True).sum()
    return TupleStatistics(total / tuples, 0.5 * (sym + sym.T),
        float(normSum / tuples), float(symNormSum / tuples))
