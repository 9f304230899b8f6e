"""
Dense linear algebra for small real matrices.

Symmetric eigendecomposition by cyclic Jacobi rotations, spectral norm,
minimum eigenvalue, PSD tests, commutators and the numerical radius.

Every routine takes a single matrix or a stack of matrices with shape
(..., d, d). Stacks are processed together, one rotation at a time across
the whole stack, which is how the experiments get away with millions of
tiny eigenproblems.
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

from matrix_amgm.errors import NonSquareError, NotSymmetricError
from matrix_amgm.errors import NonFiniteError, DimensionMismatchError
from matrix_amgm.errors import EigenNotConvergedError, OutOfRangeError

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
"Relative asymmetry allowed for input to symEigen"
JACOBI_TOL = 1e-14
"Stop when off-diagonal Frobenius mass <= JACOBI_TOL * ||m||_F"
MAX_SWEEPS = 100
"Hard cap on Jacobi sweeps"
PSD_TOL = 1e-10
"Default relative tolerance for isPSD"
NUMRAD_GRID = 2048
"Default number of theta samples for numericalRadius"
NUMRAD_MIN_GRID = 64
"Smallest grid accepted by numericalRadius"
GOLDEN_WIDTH = 1e-10
"Width at which the golden-section refinement stops"
COMMUTATOR_TOL = 1e-10
"Relative tolerance used when judging commutator sums"

INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

EigenResult = collections.namedtuple('EigenResult', ['eigenvalues', 'eigenvectors'])
EigenResult.__doc__ = """
Eigenvalues in ascending order, eigenvectors as the matching columns
"""


def asMatrix(m, square=True):
    """
    Convert m to a float64 array with at least 2 dimensions,
    checking finiteness and (optionally) squareness of the last two axes.
    """
    a = numpy.asarray(m, dtype=float)
    if a.ndim < 2:
        raise DimensionMismatchError('expected a matrix, got shape %s' % (a.shape,))
    if square and a.shape[-1] != a.shape[-2]:
        raise NonSquareError('expected square matrices, got shape %s' % (a.shape,))
    if not numpy.isfinite(a).all():
        raise NonFiniteError('matrix has NaN or Inf entries')
    return a


def isSymmetric(m, tol=SYMMETRY_TOL):
    """
    True when |m - m^T| <= tol * max(1, |m|) entrywise, the scale
    being the largest absolute entry of each matrix.
    """
    a = asMatrix(m)
    scale = numpy.maximum(1.0, numpy.abs(a).max(axis=(-2, -1)))
    asym = numpy.abs(a - numpy.swapaxes(a, -1, -2)).max(axis=(-2, -1))
    return bool(numpy.all(asym <= tol * scale))


def symEigen(m):
    """
    Full eigendecomposition of a real symmetric matrix (or stack of them)
    by cyclic Jacobi rotations.

    Returns EigenResult with eigenvalues ascending along the last axis and
    orthonormal eigenvectors as columns.
    """
    a = asMatrix(m)
    if not isSymmetric(a):
        raise NotSymmetricError('symEigen needs a symmetric matrix')

    batchShape = a.shape[:-2]
    d = a.shape[-1]
    a = a.reshape((-1, d, d))
    # take the exactly symmetric part; the tolerance was checked above
    a = 0.5 * (a + numpy.swapaxes(a, -1, -2))
    nbatch = a.shape[0]
    v = numpy.broadcast_to(numpy.eye(d), a.shape).copy()

    thresh = JACOBI_TOL * numpy.sqrt((a * a).sum(axis=(1, 2)))
    offMask = ~numpy.eye(d, dtype=bool)

    for sweep in range(MAX_SWEEPS + 1):
        off = numpy.sqrt((a[:, offMask] ** 2).sum(axis=1))
        active = off > thresh
        if not active.any():
            break
        if sweep == MAX_SWEEPS:
            raise EigenNotConvergedError('Jacobi did not converge in %d sweeps' % MAX_SWEEPS)

        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[:, p, q]
                # converged members get the identity rotation (c=1, s=0)
                rotate = active & (apq != 0.0)
                if not rotate.any():
                    continue
                safe = numpy.where(rotate, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                sign = numpy.where(theta >= 0.0, 1.0, -1.0)
                t = sign / (numpy.abs(theta) + numpy.hypot(theta, 1.0))
                c = 1.0 / numpy.sqrt(t * t + 1.0)
                s = t * c
                c = numpy.where(rotate, c, 1.0)[:, None]
                s = numpy.where(rotate, s, 0.0)[:, None]

                colp = a[:, :, p].copy()
                colq = a[:, :, q]
                a[:, :, p] = c * colp - s * colq
                a[:, :, q] = s * colp + c * colq

                rowp = a[:, p, :].copy()
                rowq = a[:, q, :]
                a[:, p, :] = c * rowp - s * rowq
                a[:, q, :] = s * rowp + c * rowq

                # the rotation annihilates this pair
                a[rotate, p, q] = 0.0
                a[rotate, q, p] = 0.0

                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = c * vp - s * vq
                v[:, :, q] = s * vp + c * vq

    logger.debug('Jacobi on %d matrices of order %d took %d sweeps', nbatch, d, sweep)

    evals = numpy.diagonal(a, axis1=1, axis2=2).copy()
    order = numpy.argsort(evals, axis=1, kind='stable')
    evals = numpy.take_along_axis(evals, order, axis=1)
    v = numpy.take_along_axis(v, order[:, None, :], axis=2)

    return EigenResult(evals.reshape(batchShape + (d,)),
        v.reshape(batchShape + (d, d)))


def symEigenvalues(m):
    "Eigenvalues only, ascending"
    return symEigen(m).eigenvalues


def gramMatrix(m):
    """
    The smaller of m^T m and m m^T (for square input, m^T m).
    """
    a = asMatrix(m, square=False)
    at = numpy.swapaxes(a, -1, -2)
    if a.shape[-2] < a.shape[-1]:
        return numpy.matmul(a, at)
    return numpy.matmul(at, a)


def spectralNorm(m):
    """
    Largest singular value, computed as the square root of the largest
    eigenvalue of a Gram matrix.

    For square input both m^T m and m m^T are used and the larger
    eigenvalue kept, which makes ||m|| == ||m^T|| hold exactly.
    """
    a = asMatrix(m, square=False)
    at = numpy.swapaxes(a, -1, -2)
    if a.shape[-2] == a.shape[-1]:
        both = numpy.stack([numpy.matmul(at, a), numpy.matmul(a, at)], axis=0)
        top = symEigenvalues(both)[..., -1]
        top = numpy.maximum(top[0], top[1])
    else:
        top = symEigenvalues(gramMatrix(a))[..., -1]
    result = numpy.sqrt(numpy.maximum(top, 0.0))
    if result.ndim == 0:
        return float(result)
    return result


def minEigenvalue(m):
    "Smallest eigenvalue of a symmetric matrix"
    lowest = symEigenvalues(m)[..., 0]
    if numpy.ndim(lowest) == 0:
        return float(lowest)
    return lowest


def isPSD(m, tol=PSD_TOL):
    """
    True iff min eigenvalue >= -tol * max(1, ||m||). For a stack,
    every member must pass.
    """
    if tol < 0:
        raise OutOfRangeError('tolerance must be non-negative')
    evals = symEigenvalues(m)
    norm = numpy.maximum(numpy.abs(evals[..., 0]), numpy.abs(evals[..., -1]))
    return bool(numpy.all(evals[..., 0] >= -tol * numpy.maximum(1.0, norm)))


def commutator(a, b):
    "ab - ba"
    a = asMatrix(a)
    b = asMatrix(b)
    return a @ b - b @ a


def commutatorSquareSum(members):
    """
    Sum over ordered pairs i != j of (M_i M_j - M_j M_i)^2.

    members is a MatrixFamily or a sequence of symmetric matrices of one
    dimension. The result is symmetric negative semidefinite.
    """
    stack = asMatrix(numpy.array([numpy.asarray(mm, dtype=float) for mm in members]))
    if stack.ndim != 3:
        raise DimensionMismatchError('members must all be d x d')
    if not isSymmetric(stack):
        raise NotSymmetricError('commutator sums need symmetric members')
    n, d, _ = stack.shape
    total = numpy.zeros((d, d))
    for i in range(n):
        for j in range(i + 1, n):
            c = stack[i] @ stack[j] - stack[j] @ stack[i]
            # (i, j) and (j, i) give the same square
            total += 2.0 * (c @ c)
    return total


def hermitianNorm(re, im):
    """
    Spectral norm of the Hermitian matrix re + i*im (re symmetric,
    im skew-symmetric) through the real symmetric embedding
    [[re, -im], [im, re]], whose spectrum is that of re + i*im doubled.
    """
    re = asMatrix(re)
    im = asMatrix(im)
    if re.shape != im.shape:
        raise DimensionMismatchError('real and imaginary parts differ in shape')
    top = numpy.concatenate([re, -im], axis=-1)
    bottom = numpy.concatenate([im, re], axis=-1)
    embed = numpy.concatenate([top, bottom], axis=-2)
    evals = symEigenvalues(embed)
    result = numpy.maximum(numpy.abs(evals[..., 0]), numpy.abs(evals[..., -1]))
    if result.ndim == 0:
        return float(result)
    return result


def _radiusProfile(herm, skew, thetas):
    """
    ||cos(t) herm + i sin(t) skew|| for each t in thetas
    """
    thetas = numpy.atleast_1d(numpy.asarray(thetas, dtype=float))
    re = numpy.cos(thetas)[:, None, None] * herm
    im = numpy.sin(thetas)[:, None, None] * skew
    return numpy.atleast_1d(hermitianNorm(re, im))


def numericalRadius(m, grid=NUMRAD_GRID):
    """
    Numerical radius w(m) = sup |v^H m v| over unit complex v, evaluated as
    sup over theta of ||cos(theta) H + i sin(theta) S|| where H and S are the
    symmetric and skew parts of m.

    For real m the profile is even and pi-periodic, so theta is searched on
    [0, pi/2]: first on a uniform grid, then by golden section around the
    best grid point down to GOLDEN_WIDTH.
    """
    a = asMatrix(m)
    if a.ndim != 2:
        raise DimensionMismatchError('numericalRadius takes a single matrix')
    if grid < NUMRAD_MIN_GRID:
        raise OutOfRangeError('grid must be at least %d' % NUMRAD_MIN_GRID)

    herm = 0.5 * (a + a.T)
    skew = 0.5 * (a - a.T)

    thetas = numpy.linspace(0.0, 0.5 * math.pi, grid)
    profile = _radiusProfile(herm, skew, thetas)
    best = int(numpy.argmax(profile))
    bestValue = float(profile[best])

    lo = thetas[max(best - 1, 0)]
    hi = thetas[min(best + 1, grid - 1)]

    def f(t):
        return float(_radiusProfile(herm, skew, t)[0])

    # golden-section search for the maximum on [lo, hi]
    x1 = hi - INV_GOLDEN * (hi - lo)
    x2 = lo + INV_GOLDEN * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    while hi - lo > GOLDEN_WIDTH:
        if f1 < f2:
            lo = x1
            x1, f1 = x2, f2
            x2 = lo + INV_GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi = x2
            x2, f2 = x1, f1
            x1 = hi - INV_GOLDEN * (hi - lo)
            f1 = f(x1)

    return max(bestValue, f1, f2)


def matrixPower(m, k):
    """
    m**k by binary exponentiation (numpy.linalg.matrix_power), for a
    single matrix or a stack
    """
    return numpy.linalg.matrix_power(asMatrix(m), int(k))
