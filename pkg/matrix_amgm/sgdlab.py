"""
Linear regression runs of GD, with-replacement SGD, RandomShuffle and
SingleShuffle, recording the loss and the norm of the projected product of
step matrices at each iteration.

The objective is F(z) = 1/2 sum_i (x_i^T z - y_i)^2 with unit vectors x_i.
Component i steps with z <- z - eta x_i (x_i^T z - y_i), i.e. multiplies the
homogeneous part by I - eta x_i x_i^T.
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

import logging
import functools
from concurrent import futures

import numpy

from matrix_amgm import matcore
from matrix_amgm.seeding import streamRng
from matrix_amgm.errors import (DimensionMismatchError, NotUnitVectorError,
    OutOfRangeError, NonFiniteError)

logger = logging.getLogger(__name__)

GD = 'gd'
SGD = 'sgd'
RANDOM_SHUFFLE = 'random_shuffle'
SINGLE_SHUFFLE = 'single_shuffle'
SCHEMES = (GD, SGD, RANDOM_SHUFFLE, SINGLE_SHUFFLE)
"Scheme identifiers, in the order they are run and reported"

UNIT_TOL = 1e-10
"Allowed deviation of |x_i| from 1"
RANK_TOL = 1e-12
"Gram-Schmidt residual below which a vector is taken as dependent"
WIN_THRESHOLD = 0.6
"Win fraction for the SS<=RS and RS<=SGD orderings to count as reproduced"

PROBLEM_STREAM = 0
"Stream key for the data of a run"
INIT_STREAM = 1
"Stream key for the shared initial iterate of a run"
SCHEME_STREAM = 2
"First stream key for the index sequences; scheme k uses SCHEME_STREAM + k"

PAIRS = (('ss<=rs', SINGLE_SHUFFLE, RANDOM_SHUFFLE),
    ('rs<=sgd', RANDOM_SHUFFLE, SGD),
    ('rs<=gd', RANDOM_SHUFFLE, GD),
    ('ss<=sgd', SINGLE_SHUFFLE, SGD),
    ('ss<=gd', SINGLE_SHUFFLE, GD),
    ('sgd<=gd', SGD, GD))
"(label, left scheme, right scheme) for the pairwise ordering indicators"


class RegressionProblem(object):
    """
    n unit data vectors (the rows of xVectors) with labels, plus the step
    size and epoch count used by the schemes.
    """
    def __init__(self, xVectors, yLabels, eta, K):
        X = numpy.array(xVectors, dtype=float)
        y = numpy.array(yLabels, dtype=float)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise DimensionMismatchError('need an (n, d) array of vectors and n labels, '
                'got %s and %s' % (X.shape, y.shape))
        if not (numpy.isfinite(X).all() and numpy.isfinite(y).all()):
            raise NonFiniteError('data has NaN or Inf entries')
        if (numpy.abs(numpy.linalg.norm(X, axis=1) - 1.0) > UNIT_TOL).any():
            raise NotUnitVectorError('every x_i must have unit length')
        if K < 1:
            raise OutOfRangeError('K must be at least 1')
        X.setflags(write=False)
        y.setflags(write=False)
        self.xVectors = X
        self.yLabels = y
        self.eta = float(eta)
        self.K = int(K)

    @property
    def n(self):
        return self.xVectors.shape[0]

    @property
    def d(self):
        return self.xVectors.shape[1]

    @property
    def iterations(self):
        return self.n * self.K

    def residuals(self, z):
        return self.xVectors @ z - self.yLabels

    def loss(self, z):
        r = self.residuals(z)
        return 0.5 * float(r @ r)

    def componentGradient(self, i, z):
        x = self.xVectors[i]
        return x * (x @ z - self.yLabels[i])

    def fullGradient(self, z):
        return self.xVectors.T @ self.residuals(z)

    def stepMatrix(self, i):
        "I - eta x_i x_i^T"
        x = self.xVectors[i]
        return numpy.eye(self.d) - self.eta * numpy.outer(x, x)

    def gdMatrix(self):
        "I - (eta/n) sum_i x_i x_i^T"
        X = self.xVectors
        return numpy.eye(self.d) - (self.eta / self.n) * (X.T @ X)

    def projectorBasis(self):
        """
        Orthonormal basis of span{x_1, ..., x_n} as the columns of a (d, r)
        array, from Gram-Schmidt applied twice per vector. V = Q Q^T.
        """
        basis = []
        for x in self.xVectors:
            v = x.copy()
            for _ in range(2):
                for q in basis:
                    v -= (q @ v) * q
            size = numpy.linalg.norm(v)
            if size > RANK_TOL:
                basis.append(v / size)
        if not basis:
            return numpy.zeros((self.d, 0))
        return numpy.stack(basis, axis=1)


def gaussianProblem(n, d, eta, K, seed, zeroLabels=False):
    """
    Standard normal data vectors scaled to unit length, with standard
    normal labels (or zeros). seed may be an int or a tuple of stream keys.
    """
    if n < 1 or d < 1:
        raise OutOfRangeError('need n, d >= 1')
    rng = streamRng(seed, PROBLEM_STREAM)
    X = rng.standard_normal((n, d))
    X /= numpy.linalg.norm(X, axis=1)[:, numpy.newaxis]
    y = rng.standard_normal(n)
    if zeroLabels:
        y = numpy.zeros(n)
    return RegressionProblem(X, y, eta, K)


def initialIterate(d, seed):
    "The standard normal z0 shared by all schemes of one run"
    return streamRng(seed, INIT_STREAM).standard_normal(d)


def _checkStart(problem, z0):
    z = numpy.array(z0, dtype=float)
    if z.shape != (problem.d,):
        raise DimensionMismatchError('z0 has shape %s, problem dimension is %d' %
            (z.shape, problem.d))
    return z


def runOrder(problem, indices, z0):
    """
    Apply the component steps in the given index order and return the
    final iterate.
    """
    z = _checkStart(problem, z0)
    X = problem.xVectors
    y = problem.yLabels
    for i in indices:
        z -= problem.eta * X[i] * (X[i] @ z - y[i])
    return z


def schemeIndices(problem, scheme, seed):
    """
    The nK component indices visited by scheme (None for gd).
    """
    n, K = problem.n, problem.K
    if scheme not in SCHEMES:
        raise ValueError('unknown scheme %r' % scheme)
    rng = streamRng(seed, SCHEME_STREAM + SCHEMES.index(scheme))
    if scheme == GD:
        indices = None
    elif scheme == SGD:
        indices = rng.integers(0, n, size=n * K)
    elif scheme == RANDOM_SHUFFLE:
        indices = numpy.concatenate([rng.permutation(n) for _ in range(K)])
    else:
        indices = numpy.tile(rng.permutation(n), K)
    return indices


def _normSchedule(total, normStride):
    if normStride is None:
        iters = {0, total}
    else:
        if normStride < 1:
            raise OutOfRangeError('normStride must be at least 1')
        iters = set(range(0, total + 1, normStride))
        iters.add(total)
    return sorted(iters)


class Trajectory(object):
    """
    One run of one scheme. losses[t] is F(z_t) for t = 0..nK; projNorms[j]
    is ||V P_t|| at iteration normIters[j], P_t being the product of the
    step matrices applied so far.
    """
    def __init__(self, scheme, seed, losses, projNorms, normIters, finalIterate):
        self.scheme = scheme
        self.seed = seed
        self.losses = losses
        self.projNorms = projNorms
        self.normIters = normIters
        self.finalIterate = finalIterate

    @property
    def finalLoss(self):
        return float(self.losses[-1])

    @property
    def finalProjNorm(self):
        return float(self.projNorms[-1])

    def records(self, run=0):
        """
        Per-iteration rows (scheme, run, iter, loss, proj_norm); proj_norm
        is None where it was not recorded.
        """
        norms = dict(zip(self.normIters, self.projNorms))
        for t, loss in enumerate(self.losses):
            yield {'scheme': self.scheme, 'run': run, 'iter': t, 'loss': float(loss),
                'proj_norm': None if t not in norms else float(norms[t])}


def runScheme(problem, scheme, seed, z0, normStride=1):
    """
    Run nK iterations of scheme from z0. gd steps with the mean gradient,
    so that its product is (I - (eta/n) sum_i M_i)^t. Projected norms are
    taken every normStride iterations plus the first and last (None keeps
    only the first and last).
    """
    z = _checkStart(problem, z0)
    X = problem.xVectors
    y = problem.yLabels
    eta = problem.eta
    total = problem.iterations
    indices = schemeIndices(problem, scheme, seed)
    normIters = _normSchedule(total, normStride)
    wanted = set(normIters)

    Q = problem.projectorBasis()
    # Q^T A_1 ... A_t is the transpose of P_t Q; the steps commute with V
    # so its norm is ||V P_t||
    QP = Q.T.copy()
    projected = [QP.copy()]
    if scheme == GD:
        gdStep = (eta / problem.n) * (X.T @ X)

    losses = numpy.empty(total + 1)
    losses[0] = problem.loss(z)
    for t in range(1, total + 1):
        if indices is None:
            z -= (eta / problem.n) * (X.T @ (X @ z - y))
            QP -= QP @ gdStep
        else:
            i = indices[t - 1]
            x = X[i]
            z -= eta * x * (x @ z - y[i])
            QP -= eta * numpy.outer(QP @ x, x)
        losses[t] = problem.loss(z)
        if t in wanted:
            projected.append(QP.copy())

    if Q.shape[1] == 0:
        projNorms = numpy.zeros(len(normIters))
    else:
        projNorms = numpy.atleast_1d(matcore.spectralNorm(numpy.stack(projected)))
    logger.debug('%s: final loss %g, final proj norm %g', scheme, losses[-1], projNorms[-1])
    return Trajectory(scheme, seed, losses, projNorms, normIters, z)


def _runOne(n, d, eta, K, seed, zeroLabels, normStride, run):
    keys = (seed, run)
    problem = gaussianProblem(n, d, eta, K, keys, zeroLabels)
    z0 = initialIterate(d, keys)
    return [runScheme(problem, scheme, keys, z0, normStride) for scheme in SCHEMES]


class OrderingSummary(object):
    """
    Final losses and projected norms per scheme over the runs of an
    ordering experiment (arrays indexed by run), and the pairwise win
    fractions derived from them. trajectories holds the full runs when
    they were kept.
    """
    def __init__(self, finalLosses, finalProjNorms, trajectories=None):
        self.finalLosses = finalLosses
        self.finalProjNorms = finalProjNorms
        self.trajectories = trajectories

    @property
    def runs(self):
        return len(self.finalLosses[GD])

    def _wins(self, values):
        return {label: float(numpy.mean(values[left] <= values[right]))
            for label, left, right in PAIRS}

    def winFractions(self):
        "Fraction of runs with final loss of left <= right, per pair"
        return self._wins(self.finalLosses)

    def projWinFractions(self):
        "The same on the final projected norms"
        return self._wins(self.finalProjNorms)

    def medians(self):
        return {scheme: float(numpy.median(self.finalLosses[scheme])) for scheme in SCHEMES}

    def meetsThreshold(self, threshold=WIN_THRESHOLD):
        wins = self.winFractions()
        return wins['ss<=rs'] >= threshold and wins['rs<=sgd'] >= threshold

    def records(self):
        "One row per (run, scheme)"
        for run in range(self.runs):
            for scheme in SCHEMES:
                yield {'run': run, 'scheme': scheme,
                    'final_loss': float(self.finalLosses[scheme][run]),
                    'final_proj_norm': float(self.finalProjNorms[scheme][run])}

    def toDict(self):
        return {'runs': self.runs, 'win_fractions': self.winFractions(),
            'proj_win_fractions': self.projWinFractions(),
            'median_final_loss': self.medians()}


def orderingExperiment(n, d, eta, K, runs, seed, workers=None, zeroLabels=False,
        normStride=None, keepTrajectories=False, progress=None):
    """
    For each run: a fresh Gaussian problem and one shared z0, then all four
    schemes. Run r draws from the streams (seed, r, ...) so results do not
    depend on workers.

    progress, if given, is called with 1 after every finished run.
    """
    if runs < 1:
        raise OutOfRangeError('need at least one run')
    job = functools.partial(_runOne, n, d, eta, K, seed, zeroLabels, normStride)

    def collect(results):
        for trajectories in results:
            if progress is not None:
                progress(1)
            yield trajectories

    if workers is not None and workers > 1 and runs > 1:
        with futures.ProcessPoolExecutor(max_workers=workers) as pool:
            allRuns = list(collect(pool.map(job, range(runs))))
    else:
        allRuns = list(collect(map(job, range(runs))))

    finalLosses = {}
    finalProjNorms = {}
    for k, scheme in enumerate(SCHEMES):
        finalLosses[scheme] = numpy.array([traj[k].finalLoss for traj in allRuns])
        finalProjNorms[scheme] = numpy.array([traj[k].finalProjNorm for traj in allRuns])

    summary = OrderingSummary(finalLosses, finalProjNorms,
        allRuns if keepTrajectories else None)
    logger.info('ordering n=%d d=%d eta=%g K=%d over %d runs: %s', n, d, eta, K, runs,
        summary.winFractions())
    return summary
