"""
Known counterexamples, the randomized counterexample search and the
eta sweep of the single/random-shuffle norm ratio.
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
from concurrent import futures

import numpy

from matrix_amgm import matcore
from matrix_amgm import permprod
from matrix_amgm import seeding
from matrix_amgm import inequality
from matrix_amgm.errors import OutOfRangeError, TooManyMatricesError

logger = logging.getLogger(__name__)

RS_ROOT = -4.0 + 2.0 * math.sqrt(6.0)
"Root in [0, 1] of the random-shuffle polynomial of the lifted family"
INFINITE_RATIO_TOL = 1e-15
"One-epoch random-shuffle norm at or below which a sweep row is infinite"
SEARCH_CHUNK = 1000
"Trials screened together by randomSearch"
MAX_SEARCH_N = 7
"Largest n randomSearch screens in batches"
DECAY_POWERS = (0.25, 1.0 / 3.0, 0.5, 1.0)
"Powers p used for the decaying step sizes (nK)^-p"

APPENDIX_A = 'appendix_a'
DESA = 'desa'
RANDOM_SEARCH = 'random_search'


def appendixAFamily():
    """
    Three rank-1 2x2 projectors for which the single-shuffle mean beats
    the random-shuffle mean for every K >= 2
    """
    r3 = math.sqrt(3.0)
    a1 = numpy.array([[0.25, r3 / 4], [r3 / 4, 0.75]])
    a2 = numpy.array([[0.25, -r3 / 4], [-r3 / 4, 0.75]])
    a3 = numpy.array([[1.0, 0.0], [0.0, 0.0]])
    return permprod.MatrixFamily([a1, a2, a3], etaWindow=1.0, name=APPENDIX_A)


def liftedFamily(eta):
    """
    (1 - eta) I + eta A_i for the appendixAFamily members
    """
    eta = float(eta)
    if not (0.0 <= eta <= 1.0):
        raise OutOfRangeError('eta must be in [0, 1], got %r' % eta)
    base = appendixAFamily().stacked
    lifted = (1.0 - eta) * numpy.eye(2) + eta * base
    return permprod.MatrixFamily(lifted, etaWindow=eta, name='lifted:%r' % eta)


def rsPolynomial(eta):
    "1 - 3 eta/2 + 3 eta^2/8 + eta^3/16; the lifted family's permutation mean is this times I"
    return 1.0 - 1.5 * eta + 0.375 * eta ** 2 + eta ** 3 / 16.0


def desaFamily(n):
    """
    The n x n family A_i = I + 1 y_i^T + y_i 1^T with
    [y_i]_i = sqrt(n-1)/n and [y_i]_j = -1/(n sqrt(n-1)) otherwise.
    """
    n = int(n)
    if n < 2:
        raise OutOfRangeError('desa family needs n >= 2, got %d' % n)
    ones = numpy.ones(n)
    members = []
    for i in range(n):
        y = numpy.full(n, -1.0 / (n * math.sqrt(n - 1)))
        y[i] = math.sqrt(n - 1) / n
        members.append(numpy.eye(n) + numpy.outer(ones, y) + numpy.outer(y, ones))
    return permprod.MatrixFamily(members, name='%s:%d' % (DESA, n))


def desaCriterion(n):
    """
    Returns (value, value > 1) for
    |(1 + 1/(n-1))^(n/2) cos(n arcsin(1/sqrt(n)))|
    """
    n = int(n)
    if n < 2:
        raise OutOfRangeError('desa criterion needs n >= 2, got %d' % n)
    value = abs((1.0 + 1.0 / (n - 1)) ** (n / 2.0) * math.cos(n * math.asin(1.0 / math.sqrt(n))))
    return value, value > 1.0


def perturbationBreakCheck(n, c, K=1, tol=inequality.DEFAULT_TOL):
    """
    Recht-Re check (m = n) on the desa family with c I added to each member.
    For K > 1 both sides are raised to the power K.
    """
    if c < 0:
        raise OutOfRangeError('shift c must be non-negative, got %r' % c)
    family = desaFamily(n).shifted(c)
    report = inequality.checkRechtRe(family, family.n, tol)
    if K == 1:
        return report
    return inequality.InequalityReport(inequality.RECHT_RE_M, report.lhs ** K,
        report.rhs ** K, tol, n=family.n, K=K, m=family.n, d=family.d)


def decayingEta(n, K, power):
    "(nK)^-power"
    if power <= 0:
        raise OutOfRangeError('power must be positive')
    return float(n * K) ** -power


class CounterexampleReport(object):
    """
    A family that violates one of the inequality variants, stored with
    enough context to re-check it offline.
    """
    def __init__(self, source, family, K, eta, violatedVariant, margin,
            trialIndex=None, seed=None):
        self.source = source
        self.family = family
        self.n = family.n
        self.d = family.d
        self.K = K
        self.eta = eta
        self.violatedVariant = violatedVariant
        self.margin = margin
        self.trialIndex = trialIndex
        self.seed = seed

    def __repr__(self):
        return 'CounterexampleReport(%s, %s, trial=%s, margin=%.3g)' % (self.source,
            self.violatedVariant, self.trialIndex, self.margin)

    def toDict(self):
        return {'source': self.source, 'n': self.n, 'K': self.K, 'd': self.d,
            'eta': self.eta, 'violated_variant': self.violatedVariant,
            'margin': self.margin, 'trial_index': self.trialIndex, 'seed': self.seed,
            'family': self.family.stacked.tolist()}


def knownCounterexamples(K=2):
    """
    CounterexampleReports for the appendix_a triple (main_ss_rs) and the
    n=5 desa family (recht_re_m)
    """
    ss, _ = inequality.checkMain(appendixAFamily(), K)
    desa = desaFamily(5)
    rr = inequality.checkRechtRe(desa, 5)
    return [CounterexampleReport(APPENDIX_A, appendixAFamily(), K, 1.0, ss.variant, ss.margin),
        CounterexampleReport(DESA, desa, 1, None, rr.variant, rr.margin)]


def drawUnitPsd(n, d, seed, trial):
    """
    M_i = U_i U_i^T / ||U_i U_i^T|| with U_i standard normal from
    the stream (seed, trial, i)
    """
    u = numpy.array([seeding.streamRng(seed, trial, i).standard_normal((d, d))
        for i in range(n)])
    gram = numpy.matmul(u, numpy.swapaxes(u, -1, -2))
    norms = numpy.atleast_1d(matcore.spectralNorm(gram))
    return gram / norms[:, None, None]


def randomWindowFamily(n, d, eta, seed, trial=0):
    """
    A_i = (1 - eta) I + eta M_i, the family of one search trial
    """
    if not (0.0 <= eta <= 1.0):
        raise OutOfRangeError('eta must be in [0, 1], got %r' % eta)
    m = drawUnitPsd(n, d, seed, trial)
    members = (1.0 - eta) * numpy.eye(d) + eta * m
    return permprod.MatrixFamily(members, etaWindow=eta,
        name='random:%d:%d' % (seed, trial))


def _trialViolations(n, K, d, eta, seed, trial, variants, tol, budget, samples):
    family = randomWindowFamily(n, d, eta, seed, trial)
    if variants:
        reports = inequality.checkAllVariants(family, K, budget, (seed, trial), tol,
            samples)
    else:
        reports = inequality.checkMain(family, K, tol)
    return [CounterexampleReport(RANDOM_SEARCH, family, K, eta, r.variant,
        r.margin, trial, seed) for r in reports if not r.holds]


def _searchChunk(n, K, d, eta, seed, variants, tol, budget, samples, trials):
    """
    Screen a range of trials in one batch, then confirm candidates one
    family at a time through the inequality checks
    """
    trials = list(trials)
    if variants or n > MAX_SEARCH_N:
        candidates = trials
    else:
        candidates = []
        step = max(1, permprod.CHUNK // math.factorial(n))
        for start in range(0, len(trials), step):
            part = trials[start:start + step]
            m = numpy.array([drawUnitPsd(n, d, seed, t) for t in part])
            stacks = (1.0 - eta) * numpy.eye(d) + eta * m
            normSS, normRS, normGD = permprod.batchMeansNorms(stacks, K)
            flagged = (normSS > normRS) | (normRS > normGD)
            candidates.extend(t for t, flag in zip(part, flagged) if flag)

    found = []
    for t in candidates:
        found.extend(_trialViolations(n, K, d, eta, seed, t, variants, tol,
            budget, samples))
    return found


def randomSearch(n, K, d, eta, trials, seed, variants=True, tol=inequality.DEFAULT_TOL,
        budget=permprod.NORM_BUDGET, samples=permprod.NORM_SAMPLES, workers=None,
        progress=None):
    """
    Randomized counterexample search. Each trial draws a windowed family
    with randomWindowFamily and tests both main inequalities together with
    the symmetrized and expectation-of-norm forms. variants=False keeps
    only the two main inequalities and screens trials in batches. Returns
    the violations in trial order.

    progress, if given, is called with the number of trials finished.
    """
    if trials < 1:
        raise OutOfRangeError('need at least one trial')
    if n > permprod.MAX_ENUM_N:
        raise TooManyMatricesError('n=%d is above the enumeration cap' % n)
    if not (0.0 <= eta <= 1.0):
        raise OutOfRangeError('eta must be in [0, 1], got %r' % eta)
    permprod.checkPower(K)

    chunks = [range(start, min(start + SEARCH_CHUNK, trials))
        for start in range(0, trials, SEARCH_CHUNK)]
    job = functools.partial(_searchChunk, n, K, d, eta, seed, variants, tol,
        budget, samples)

    found = []
    if workers is not None and workers > 1 and len(chunks) > 1:
        with futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(job, chunks)
            for chunk, result in zip(chunks, results):
                found.extend(result)
                if progress is not None:
                    progress(len(chunk))
    else:
        for chunk in chunks:
            found.extend(job(chunk))
            if progress is not None:
                progress(len(chunk))

    logger.info('search n=%d K=%d d=%d eta=%g: %d violations in %d trials',
        n, K, d, eta, len(found), trials)
    return found


def summarizeSearch(reports, trials):
    """
    Hit counts and empirical hit rates per violated variant
    """
    summary = {}
    for variant in inequality.VARIANTS:
        hits = len({r.trialIndex for r in reports if r.violatedVariant == variant})
        if hits:
            summary[variant] = {'hits': hits, 'rate': hits / trials}
    return summary


class SweepRow(object):
    """
    Norms of the single- and random-shuffle means of the lifted family at
    one (eta, K), with their ratio.
    """
    def __init__(self, eta, K, normSS, normRS, ratio, infinite):
        self.eta = eta
        self.K = K
        self.normSS = normSS
        self.normRS = normRS
        self.ratio = ratio
        self.infinite = infinite

    def toDict(self):
        return {'K': self.K, 'eta': self.eta, 'norm_ss': self.normSS,
            'norm_rs': self.normRS, 'ratio': self.ratio, 'infinite_flag': self.infinite}


def _normalizedPower(m, K):
    """
    (m / r)^K and K log r, r being the largest spectral radius in the
    matrix or stack m (1 when that is zero)
    """
    radius = float(numpy.abs(numpy.linalg.eigvals(m)).max())
    if radius == 0.0:
        radius = 1.0
    return numpy.linalg.matrix_power(m / radius, K), K * math.log(radius)


def _rescaled(value, logScale):
    "value * exp(logScale), going to 0 or inf instead of raising"
    if value == 0.0:
        return 0.0
    with numpy.errstate(over='ignore', under='ignore'):
        return float(numpy.exp(math.log(value) + logScale))


def ratioSweep(Kvalues, etaGrid):
    """
    ||W_SS|| / ||W_RS|| on the lifted family for every K and eta. W_GD is
    not formed.

    Both means are raised to the K-th power after dividing by the largest
    spectral radius among the matrices being powered, so nothing overflows
    for large K; the scale factors are put back in log space. Reported
    norms that do not fit in a float come out as 0 or inf.

    A row is flagged infinite when the one-epoch random-shuffle norm
    ||W_RS(K=1)|| = |p(eta)| is at most INFINITE_RATIO_TOL, or when the
    ratio itself is not finite. The threshold is applied at one epoch, not
    to norm_rs = |p(eta)|^K, which falls below it for large K away from
    the root.
    """
    rows = []
    for eta in etaGrid:
        eta = float(eta)
        family = liftedFamily(eta)
        products = numpy.concatenate([prods for _, prods in
            permprod.permutationProducts(family)])
        mean = products.mean(axis=0)
        nearRoot = abs(rsPolynomial(eta)) <= INFINITE_RATIO_TOL
        for K in Kvalues:
            K = permprod.checkPower(K)
            powers, logSS = _normalizedPower(products, K)
            wRS, logRS = _normalizedPower(mean, K)
            normSS = matcore.spectralNorm(powers.mean(axis=0))
            normRS = matcore.spectralNorm(wRS)
            if nearRoot or normRS == 0.0:
                ratio = math.inf
            else:
                ratio = _rescaled(normSS / normRS, logSS - logRS)
            infinite = nearRoot or not math.isfinite(ratio)
            rows.append(SweepRow(eta, K, _rescaled(normSS, logSS),
                _rescaled(normRS, logRS), ratio, infinite))
    return rows
