"""
Executable checks of the provable statements about the shuffle means.

Small-step expansion of W_RS - W_SS, the commutator condition and the
constructive search for a step size below which single shuffle wins,
the two-matrix results (PSD sums, power-of-two epochs, d = 2), the
numerical radius identity and its d = 3 failure, the 2x2 closed form
norm, and the incoherent-regression bounds for random shuffle vs GD.

Each check also has a seeded property suite (see SUITES) that the command
line runs over many random instances.
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
import collections

import numpy

from matrix_amgm import matcore
from matrix_amgm import permprod
from matrix_amgm import seeding
from matrix_amgm import inequality
from matrix_amgm.errors import TooManyMatricesError, OutOfRangeError
from matrix_amgm.errors import DimensionMismatchError, NotPsdError
from matrix_amgm.errors import SingularMatrixError, NotUnitVectorError, NonFiniteError

logger = logging.getLogger(__name__)

MAX_EXPANSION_N = 8
"Largest family for the expansion check and the step size search"
RESIDUAL_BAND = 4.0
"Allowed growth of the expansion residual ratio as eta decreases"
RESIDUAL_FLOOR = 1e-13
"Residuals below RESIDUAL_FLOOR * eta are rounding noise"
ETA_FLOOR = 1e-6
"Smallest step size the search will try"
DEFAULT_ETA_GRID = tuple(10.0 ** (-k / 4.0) for k in range(4, 17))
"Step sizes 1e-1 down to 1e-4 in quarter decades"
SINGULAR_TOL = 1e-10
"Smallest |det Q| accepted by lemma3Check"
RADIUS_TOL = 1e-8
"Agreement required between w(m) and half the symmetric part norm in d = 2"
UNIT_TOL = 1e-10
"Allowed deviation from unit length"
ASSUMPTION_TOL = 1e-12
"Slack on the incoherence and spectrum assumptions"
SKEW_TOL = 1e-10
"Largest eigenvalue allowed for a skew-symmetric square"

NUMRAD_COUNTEREXAMPLE = numpy.array([
    [3.0, 0.05, 0.3],
    [-0.05, 3.0, -0.1],
    [-0.3, 0.1, 2.0]])
"Diagonalizable 3x3 matrix with positive spectrum and w > half its symmetric part norm"
NUMRAD_COUNTEREXAMPLE.setflags(write=False)


def _symmetricFamily(mfamily):
    mfamily = permprod.asFamily(mfamily)
    if mfamily.n > MAX_EXPANSION_N:
        raise TooManyMatricesError('n=%d is above %d' % (mfamily.n, MAX_EXPANSION_N))
    return mfamily


def nearIdentityPower(x, K):
    """
    Given X (or a stack), return (I + X)^K - I without forming I + X, by
    binary exponentiation with (I + S)(I + T) - I = S + T + S T.
    """
    result = None
    base = x
    while K:
        if K & 1:
            result = base if result is None else result + base + numpy.matmul(result, base)
        K >>= 1
        if K:
            base = base + base + numpy.matmul(base, base)
    return result


def _stepDeviations(stack, tuples, eta):
    """
    X_sigma = prod_j (I - eta M_sigma(j)) - I for every row of tuples,
    accumulated as X <- X - eta M - eta X M
    """
    d = stack.shape[1]
    x = numpy.zeros((tuples.shape[0], d, d))
    for j in range(tuples.shape[1]):
        m = stack[tuples[:, j]]
        x = x - eta * m - eta * numpy.matmul(x, m)
    return x


def shuffleDeviations(mfamily, K, eta):
    """
    Returns (W_SS - I, W_RS - I) for A_i = I - eta M_i, both symmetrized.
    Small-step differences survive because I is never added in.
    """
    mfamily = permprod.asFamily(mfamily)
    K = permprod.checkPower(K)
    count = math.factorial(mfamily.n)
    xSum = numpy.zeros((mfamily.d, mfamily.d))
    ssSum = numpy.zeros((mfamily.d, mfamily.d))
    for tuples in permprod.permutationTuples(mfamily.n):
        x = _stepDeviations(mfamily.stacked, tuples, eta)
        xSum += x.sum(axis=0)
        ssSum += nearIdentityPower(x, K).sum(axis=0)
    ss = ssSum / count
    rs = nearIdentityPower(xSum / count, K)
    return 0.5 * (ss + ss.T), 0.5 * (rs + rs.T)


def _normExcess(s):
    "||I + s|| - 1 for symmetric s"
    evals = matcore.symEigenvalues(s)
    return max(evals[-1], -2.0 - evals[0])


class ExpansionCheck(object):
    """
    Degree-4 coefficient C4 of W_RS - W_SS in the step size, and the
    ratios ||D(eta) - eta^4 C4|| / eta^5 over a descending eta ladder.
    """
    def __init__(self, etaValues, c4, residualRatios, differenceNorms):
        self.etaValues = list(etaValues)
        self.c4 = c4
        self.residualRatios = list(residualRatios)
        self.differenceNorms = list(differenceNorms)

    def bounded(self, factor=RESIDUAL_BAND):
        """
        True when no ratio exceeds factor times the ratio at the largest
        eta. Residuals at the rounding floor always pass (for n = 2, K = 2
        the difference is exactly degree 4).
        """
        first = self.residualRatios[0]
        for eta, ratio in zip(self.etaValues, self.residualRatios):
            floor = RESIDUAL_FLOOR * eta / eta ** 5
            if ratio > factor * max(first, floor):
                return False
        return True

    def spread(self):
        "max/min of the residual ratios, inf when one is zero"
        lo = min(self.residualRatios)
        return max(self.residualRatios) / lo if lo > 0.0 else math.inf

    def toDict(self):
        return {'eta_values': self.etaValues, 'c4_norm': matcore.spectralNorm(self.c4),
            'residual_ratios': self.residualRatios, 'difference_norms': self.differenceNorms}


def degreeFourCoefficient(mfamily, K):
    """
    C4 = K(K-1)/2 * [(E e2)^2 - E(e2^2)], e2 the second noncommutative
    elementary symmetric polynomial of the permuted family
    """
    mfamily = _symmetricFamily(mfamily)
    d = mfamily.d
    count = math.factorial(mfamily.n)
    e2Sum = numpy.zeros((d, d))
    e2SqSum = numpy.zeros((d, d))
    for tuples in permprod.permutationTuples(mfamily.n):
        e1 = numpy.zeros((tuples.shape[0], d, d))
        e2 = numpy.zeros((tuples.shape[0], d, d))
        for j in range(mfamily.n):
            m = mfamily.stacked[tuples[:, j]]
            e2 = e2 + numpy.matmul(e1, m)
            e1 = e1 + m
        e2Sum += e2.sum(axis=0)
        e2SqSum += numpy.matmul(e2, e2).sum(axis=0)
    e2Mean = e2Sum / count
    return 0.5 * K * (K - 1) * (e2Mean @ e2Mean - e2SqSum / count)


def lemma1ExpansionCheck(mfamily, K, etaValues):
    """
    Compare D(eta) = W_RS - W_SS on A_i = I - eta M_i against eta^4 C4
    """
    mfamily = _symmetricFamily(mfamily)
    etaValues = [float(e) for e in etaValues]
    if not etaValues or min(etaValues) <= 0:
        raise OutOfRangeError('eta values must be positive')
    if any(a <= b for a, b in zip(etaValues, etaValues[1:])):
        raise OutOfRangeError('eta values must be strictly descending')

    c4 = degreeFourCoefficient(mfamily, K)
    ratios = []
    diffs = []
    for eta in etaValues:
        ss, rs = shuffleDeviations(mfamily, K, eta)
        diff = rs - ss
        diffs.append(matcore.spectralNorm(diff))
        ratios.append(matcore.spectralNorm(diff - eta ** 4 * c4) / eta ** 5)
    logger.debug('expansion residual ratios %s', ratios)
    return ExpansionCheck(etaValues, c4, ratios, diffs)


def theorem1Condition(mfamily):
    """
    True when the sum of squared commutators is negative definite:
    its largest eigenvalue is below -1e-10 times its norm
    """
    total = matcore.commutatorSquareSum(permprod.asFamily(mfamily))
    evals = matcore.symEigenvalues(0.5 * (total + total.T))
    norm = max(abs(evals[0]), abs(evals[-1]))
    return bool(evals[-1] < -matcore.COMMUTATOR_TOL * norm)


EtaSearch = collections.namedtuple('EtaSearch', ['etaMax', 'etas', 'margins'])
EtaSearch.__doc__ = """
etaMax is the largest grid step size at and below which ||W_SS|| <= ||W_RS||
held at every grid point (margins within rounding of zero count as held),
None when even the smallest one failed
"""


def theorem1EtaSearch(mfamily, K, etaGrid=DEFAULT_ETA_GRID):
    """
    Descend the eta grid on A_i = I - eta M_i looking for the point below
    which the single-shuffle mean never has the larger norm.
    """
    mfamily = _symmetricFamily(mfamily)
    etas = sorted((float(e) for e in etaGrid if e >= ETA_FLOOR), reverse=True)
    if not etas:
        raise OutOfRangeError('no grid step size at or above %g' % ETA_FLOOR)

    margins = []
    for eta in etas:
        ss, rs = shuffleDeviations(mfamily, K, eta)
        margins.append(_normExcess(rs) - _normExcess(ss))

    etaMax = None
    for eta, margin in zip(reversed(etas), reversed(margins)):
        if margin < -RESIDUAL_FLOOR * eta:
            break
        etaMax = eta
    if etaMax is None:
        logger.info('step size search inconclusive down to %g', etas[-1])
    return EtaSearch(etaMax, etas, margins)


def _windowPair(A, B, K):
    return permprod.MatrixFamily([A, B], etaWindow=1.0 / (2 * K))


def lemma2Check(A, B, K):
    """
    (AB)^K + (BA)^K is PSD for A, B in the window (1 - 1/(2K)) I <= . <= I
    """
    pair = _windowPair(A, B, K)
    a, b = pair.stacked
    total = numpy.linalg.matrix_power(a @ b, K) + numpy.linalg.matrix_power(b @ a, K)
    return matcore.isPSD(0.5 * (total + total.T))


def _twoMatrixSides(a, b, K):
    lhs = 0.5 * matcore.spectralNorm(numpy.linalg.matrix_power(a @ b, K) +
        numpy.linalg.matrix_power(b @ a, K))
    rhs = matcore.spectralNorm(0.5 * (a @ b + b @ a)) ** K
    return lhs, rhs


def theorem2Check(A, B, m, tol=inequality.DEFAULT_TOL):
    """
    For K = 2^m and A, B in the window (1 - 1/(2K)) I <= . <= I:
    1/2 ||(AB)^K + (BA)^K|| <= ||(AB + BA)/2||^K
    """
    if m < 1:
        raise OutOfRangeError('m must be at least 1, got %d' % m)
    K = 2 ** m
    pair = _windowPair(A, B, K)
    lhs, rhs = _twoMatrixSides(pair.stacked[0], pair.stacked[1], K)
    return inequality.InequalityReport(inequality.THEOREM2, lhs, rhs,
        inequality.relativeTolerance(tol, rhs), n=2, K=K, d=pair.d,
        etaWindow=pair.etaWindow)


def theorem3Check(A, B, K, tol=inequality.DEFAULT_TOL):
    """
    The same inequality for any 2x2 PSD A, B and any K >= 1
    """
    pair = permprod.MatrixFamily([A, B])
    if pair.d != 2:
        raise DimensionMismatchError('theorem3Check is for 2x2 matrices')
    if not matcore.isPSD(pair.stacked):
        raise NotPsdError('A and B must be positive semidefinite')
    K = permprod.checkPower(K)
    lhs, rhs = _twoMatrixSides(pair.stacked[0], pair.stacked[1], K)
    return inequality.InequalityReport(inequality.THEOREM3, lhs, rhs,
        inequality.relativeTolerance(tol, rhs), n=2, K=K, d=2)


def lemma6NormFormula(a, b, c, d, theta):
    """
    Closed form of 2 ||cos(theta) [[a, b], [b, c]] + i sin(theta) [[0, d], [-d, 0]]||^2
    """
    cos2 = math.cos(theta) ** 2
    sin2 = math.sin(theta) ** 2
    root = math.sqrt((a * a - c * c) ** 2 * cos2 * cos2 +
        4.0 * (a + c) ** 2 * cos2 * (b * b * cos2 + d * d * sin2))
    return (a * a + 2.0 * b * b + c * c) * cos2 + 2.0 * d * d * sin2 + root


def lemma6Oracle(a, b, c, d, theta):
    "The same quantity through the Hermitian embedding eigensolver"
    re = math.cos(theta) * numpy.array([[a, b], [b, c]])
    im = math.sin(theta) * numpy.array([[0.0, d], [-d, 0.0]])
    return 2.0 * matcore.hermitianNorm(re, im) ** 2


def lemma3Sides(m):
    "(w(m), ||m + m^T|| / 2)"
    m = matcore.asMatrix(m)
    return matcore.numericalRadius(m), 0.5 * matcore.spectralNorm(m + m.T)


def lemma3Check(Q, L):
    """
    Returns (w(Q L Q^-1), ||Q L Q^-1 + Q^-T L Q^T|| / 2) for invertible 2x2 Q
    and nonnegative diagonal L. The two agree in d = 2.
    """
    Q = matcore.asMatrix(Q)
    L = matcore.asMatrix(L)
    if Q.shape != (2, 2) or L.shape != (2, 2):
        raise DimensionMismatchError('lemma3Check is for 2x2 matrices')
    if abs(numpy.linalg.det(Q)) < SINGULAR_TOL:
        raise SingularMatrixError('|det Q| is below %g' % SINGULAR_TOL)
    if L[0, 1] != 0.0 or L[1, 0] != 0.0 or (numpy.diag(L) < 0).any():
        raise OutOfRangeError('L must be diagonal with nonnegative entries')
    return lemma3Sides(Q @ L @ numpy.linalg.inv(Q))


AssumptionCheck = collections.namedtuple('AssumptionCheck',
    ['a1', 'a2', 'coherence', 'sMin', 'sMax'])
AssumptionCheck.__doc__ = """
Incoherence (a1: max |x_i^T x_j| <= n^-1/2) and frame spectrum
(a2: eigenvalues of sum x_i x_i^T within [n^-1/4, n^1/4]) of a vector set
"""


def _unitRows(X):
    X = numpy.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatchError('expected an (n, d) array of vectors')
    if not numpy.isfinite(X).all():
        raise NonFiniteError('vectors have NaN or Inf entries')
    if (numpy.abs(numpy.linalg.norm(X, axis=1) - 1.0) > UNIT_TOL).any():
        raise NotUnitVectorError('every vector must have unit length')
    return X


def checkAssumptionsA1A2(X):
    """
    X holds the n unit vectors as rows. The frame spectrum comes from the
    eigenvalues of X^T X, the extremes of sum (u^T x_i)^2 over unit u.
    """
    X = _unitRows(X)
    n = X.shape[0]
    gram = X @ X.T
    offdiag = numpy.abs(gram[~numpy.eye(n, dtype=bool)])
    coherence = float(offdiag.max()) if offdiag.size else 0.0
    evals = matcore.symEigenvalues(X.T @ X)
    sMin = float(evals[0])
    sMax = float(evals[-1])
    a1 = coherence <= n ** -0.5 + ASSUMPTION_TOL
    a2 = sMin >= n ** -0.25 - ASSUMPTION_TOL and sMax <= n ** 0.25 + ASSUMPTION_TOL
    return AssumptionCheck(a1, a2, coherence, sMin, sMax)


def incoherentVectors(n, d=None, seed=0, spread=0.1, maxTries=1000):
    """
    Rejection sampler for n unit vectors in dimension d <= n meeting both
    assumptions: rows of a random orthogonal frame plus spread times
    Gaussian noise, normalized. Attempt t uses the stream (seed, t).
    """
    d = n if d is None else d
    if not (1 <= d <= n):
        raise OutOfRangeError('need 1 <= d <= n, got d=%d n=%d' % (d, n))
    for attempt in range(maxTries):
        rng = seeding.streamRng(seed, attempt)
        q, _ = numpy.linalg.qr(rng.standard_normal((n, n)))
        x = q[:, :d] + spread * rng.standard_normal((n, d))
        x /= numpy.linalg.norm(x, axis=1)[:, None]
        check = checkAssumptionsA1A2(x)
        if check.a1 and check.a2:
            return x
    raise OutOfRangeError('no vector set met the assumptions in %d tries' % maxTries)


def regressionFamily(X, eta):
    "A_i = I - eta x_i x_i^T"
    X = _unitRows(X)
    d = X.shape[1]
    return permprod.MatrixFamily(numpy.eye(d) - eta * numpy.einsum('ni,nj->nij', X, X))


class Lemma4Bounds(object):
    """
    Lower bounds for lambda_min(W_GD - W_RS) (gapBound) and
    lambda_min(W_RS) (rsBound) at one epoch.
    """
    def __init__(self, n, K, eta, delta, sMin, sMax):
        if n < 2:
            raise OutOfRangeError('n must be at least 2')
        self.n = n
        self.K = K
        self.eta = eta
        self.delta = delta
        self.sMin = sMin
        self.sMax = sMax

        high = sum(eta ** m * (sMax ** m + sMax * n ** (m - 1) * delta ** (m - 1))
            for m in range(4, n + 1))
        cubic = eta ** 3 / 6.0 * (3.0 * sMax ** 3 / n +
            sMax * math.sqrt(n) * math.sqrt(n * n * delta ** 4 + 6 * n * delta ** 2 + 1))
        self.gapBound = eta ** 2 * (n - 1) * (1 - delta) * sMin / (2.0 * n) - high - cubic
        self.rsBound = 1.0 - sMax * sum(eta ** m * n ** (m - 1) * delta ** (m - 1)
            for m in range(1, n + 1))

    def nonnegative(self):
        return self.gapBound >= 0.0 and self.rsBound >= 0.0

    def toDict(self):
        return {'n': self.n, 'K': self.K, 'eta': self.eta, 'delta': self.delta,
            's_min': self.sMin, 's_max': self.sMax, 'rhs_gap_bound': self.gapBound,
            'rhs_rs_bound': self.rsBound}


def lemma4Bounds(n, K, eta, delta, sMin, sMax):
    return Lemma4Bounds(n, K, eta, delta, sMin, sMax)


def canonicalLemma4Bounds(n, K=1, eta=None):
    """
    Bounds at delta = n^-1/2, sMin = n^-1/4, sMax = n^1/4 and, by default,
    the largest allowed step eta = 1/(6n)
    """
    eta = 1.0 / (6 * n) if eta is None else eta
    return Lemma4Bounds(n, K, eta, n ** -0.5, n ** -0.25, n ** 0.25)


Lemma4Comparison = collections.namedtuple('Lemma4Comparison',
    ['gapMin', 'gapBound', 'rsMin', 'rsBound'])


def lemma4Check(X, eta):
    """
    Exact lambda_min(W_GD - W_RS) and lambda_min(W_RS) at K = 1 for
    A_i = I - eta x_i x_i^T, next to the bounds for the measured
    coherence and frame spectrum
    """
    check = checkAssumptionsA1A2(X)
    family = regressionFamily(X, eta)
    triple = permprod.meansTriple(family, 1)
    wRS = 0.5 * (triple.wRS + triple.wRS.T)
    gap = triple.wGD - wRS
    bounds = Lemma4Bounds(family.n, 1, eta, check.coherence, check.sMin, check.sMax)
    return Lemma4Comparison(matcore.minEigenvalue(0.5 * (gap + gap.T)), bounds.gapBound,
        matcore.minEigenvalue(wRS), bounds.rsBound)


def theorem4Check(X, eta, K=1, tol=inequality.DEFAULT_TOL):
    "||W_RS|| <= ||W_GD|| for A_i = I - eta x_i x_i^T"
    family = regressionFamily(X, eta)
    _, rs = inequality.checkMain(family, K, tol)
    return inequality.InequalityReport(inequality.THEOREM4, rs.lhs, rs.rhs, tol,
        n=family.n, K=K, m=family.n, d=family.d)


def skewSquareCheck(A, B, K):
    """
    Largest eigenvalue of ((AB)^(K/2) - (BA)^(K/2))^2 for symmetric A, B
    and even K; the square of a skew-symmetric matrix, so never positive
    """
    if K < 2 or K % 2:
        raise OutOfRangeError('K must be even and at least 2, got %d' % K)
    pair = permprod.MatrixFamily([A, B])
    a, b = pair.stacked
    skew = numpy.linalg.matrix_power(a @ b, K // 2) - numpy.linalg.matrix_power(b @ a, K // 2)
    square = skew @ skew
    return float(matcore.symEigenvalues(0.5 * (square + square.T))[-1])


def randomWindowMatrix(rng, d, eta):
    "(1 - eta) I + eta Q diag(u) Q^T with u uniform on [0, 1]"
    q, _ = numpy.linalg.qr(rng.standard_normal((d, d)))
    m = (q * rng.uniform(0.0, 1.0, d)) @ q.T
    return (1.0 - eta) * numpy.eye(d) + eta * 0.5 * (m + m.T)


def randomPsd(rng, d):
    g = rng.standard_normal((d, d))
    return g @ g.T


def randomSymmetric(rng, d):
    "Symmetric Gaussian matrix scaled to unit spectral norm"
    g = rng.standard_normal((d, d))
    m = 0.5 * (g + g.T)
    return m / matcore.spectralNorm(m)


SuiteRecord = collections.namedtuple('SuiteRecord',
    ['check', 'trial', 'lhs', 'rhs', 'holds', 'detail'])
SuiteRecord.__doc__ = """
One instance of a property suite. lhs/rhs are the two compared
quantities (their meaning depends on check), detail a short string.
"""


def lemma1Suite(trials, seed, K=None, n=None, d=None):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        nn = n or 2 + t % 2
        dd = d or 2 + (t // 2) % 2
        kk = K or 2 + (t // 4) % 2
        family = [randomSymmetric(rng, dd) for _ in range(nn)]
        check = lemma1ExpansionCheck(family, kk, (1e-2, 5e-3, 2.5e-3))
        yield SuiteRecord('lemma1', t, min(check.residualRatios),
            max(check.residualRatios), check.bounded(), 'n=%d d=%d K=%d' % (nn, dd, kk))


def lemma2Suite(trials, seed, K=None, d=3):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        kk = K or 1 + t % 8
        eta = 1.0 / (2 * kk)
        a = randomWindowMatrix(rng, d, eta)
        b = randomWindowMatrix(rng, d, eta)
        total = numpy.linalg.matrix_power(a @ b, kk) + numpy.linalg.matrix_power(b @ a, kk)
        lowest = matcore.minEigenvalue(0.5 * (total + total.T))
        yield SuiteRecord('lemma2', t, lowest, 0.0, lemma2Check(a, b, kk), 'K=%d' % kk)


def lemma3Suite(trials, seed):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        q = rng.standard_normal((2, 2))
        while abs(numpy.linalg.det(q)) < 1e-3:
            q = rng.standard_normal((2, 2))
        lam = numpy.diag(rng.uniform(0.0, 1.0, 2))
        w, half = lemma3Check(q, lam)
        yield SuiteRecord('lemma3', t, w, half,
            abs(w - half) <= RADIUS_TOL * max(1.0, half), '')


def lemma6Suite(trials, seed):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        a, b, c, d = rng.standard_normal(4)
        theta = rng.uniform(0.0, math.pi)
        formula = lemma6NormFormula(a, b, c, d, theta)
        oracle = lemma6Oracle(a, b, c, d, theta)
        yield SuiteRecord('lemma6', t, formula, oracle,
            abs(formula - oracle) <= 1e-9 * max(1.0, oracle), '')


def theorem1Suite(trials, seed, K=None):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        nn = 2 + t % 2
        dd = 2 + (t // 2) % 2
        kk = K or 2 + (t // 4) % 2
        family = [randomSymmetric(rng, dd) for _ in range(nn)]
        if not theorem1Condition(family):
            yield SuiteRecord('theorem1', t, 0.0, 0.0, True, 'condition fails, skipped')
            continue
        search = theorem1EtaSearch(family, kk)
        found = search.etaMax is not None
        yield SuiteRecord('theorem1', t, search.etaMax or 0.0, search.etas[-1], found,
            'n=%d d=%d K=%d' % (nn, dd, kk))


def theorem2Suite(trials, seed, d=5, m=None):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        mm = m or 1 + t % 3
        eta = 1.0 / (2 * 2 ** mm)
        report = theorem2Check(randomWindowMatrix(rng, d, eta),
            randomWindowMatrix(rng, d, eta), mm)
        yield SuiteRecord('theorem2', t, report.lhs, report.rhs, report.holds, 'K=%d' % report.K)


def theorem3Suite(trials, seed, K=None):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        kk = K or 1 + t % 20
        report = theorem3Check(randomPsd(rng, 2), randomPsd(rng, 2), kk)
        yield SuiteRecord('theorem3', t, report.lhs, report.rhs, report.holds, 'K=%d' % kk)


def theorem4Suite(trials, seed, n=4, K=1):
    etas = (0.0, 1.0 / (12 * n), 1.0 / (6 * n))
    for t in range(trials):
        x = incoherentVectors(n, seed=(seed, t))
        for eta in etas:
            report = theorem4Check(x, eta, K)
            yield SuiteRecord('theorem4', t, report.lhs, report.rhs, report.holds,
                'eta=%r' % eta)


def skewSuite(trials, seed, d=4):
    for t in range(trials):
        rng = seeding.streamRng(seed, t)
        kk = 2 * (1 + t % 4)
        eta = 1.0 / (2 * kk)
        top = skewSquareCheck(randomWindowMatrix(rng, d, eta),
            randomWindowMatrix(rng, d, eta), kk)
        yield SuiteRecord('skew', t, top, 0.0, top <= SKEW_TOL, 'K=%d' % kk)


SUITES = {
    'lemma1': lemma1Suite,
    'lemma2': lemma2Suite,
    'lemma3': lemma3Suite,
    'lemma6': lemma6Suite,
    'theorem1': theorem1Suite,
    'theorem2': theorem2Suite,
    'theorem3': theorem3Suite,
    'theorem4': theorem4Suite,
    'skew': skewSuite,
}
"Property suites by name. Each takes (trials, seed) and yields SuiteRecords"
