"""
Verdicts for the single/random-shuffle and random-shuffle/GD spectral norm
inequalities and their symmetrized, per-m and expectation-of-norm variants.
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

from matrix_amgm import matcore
from matrix_amgm import permprod
from matrix_amgm.errors import NonFiniteError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
"Absolute tolerance on a verdict margin"

MAIN_SS_RS = 'main_ss_rs'
MAIN_RS_GD = 'main_rs_gd'
RECHT_RE_M = 'recht_re_m'
SYMMETRIZED_M = 'symmetrized_m'
EWO_NORM_M = 'ewo_norm_m'
EWO_SYM_NORM_M = 'ewo_sym_norm_m'
SYM_SS_RS = 'sym_ss_rs'
NORM_SS_RS = 'norm_ss_rs'
NORM_SYM_SS_RS = 'norm_sym_ss_rs'
THEOREM2 = 'theorem2'
THEOREM3 = 'theorem3'
THEOREM4 = 'theorem4'

VARIANTS = (MAIN_SS_RS, MAIN_RS_GD, RECHT_RE_M, SYMMETRIZED_M, EWO_NORM_M,
    EWO_SYM_NORM_M, SYM_SS_RS, NORM_SS_RS, NORM_SYM_SS_RS, THEOREM2,
    THEOREM3, THEOREM4)
"Stable variant identifiers written to reports"


class InequalityReport(object):
    """
    Verdict for one inequality lhs <= rhs. margin is rhs - lhs; the
    inequality holds when margin >= -tolerance and is a tie when
    |margin| <= tolerance.
    """
    def __init__(self, variant, lhs, rhs, tolerance=DEFAULT_TOL, n=None, K=None,
            m=None, d=None, etaWindow=None, estimated=False, stderr=None):
        if variant not in VARIANTS:
            raise ValueError('unknown variant %r' % variant)
        lhs = float(lhs)
        rhs = float(rhs)
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            raise NonFiniteError('%s: sides must be finite, got %r and %r' %
                (variant, lhs, rhs))
        if tolerance < 0:
            raise ValueError('tolerance must be non-negative')
        self.variant = variant
        self.lhs = lhs
        self.rhs = rhs
        self.margin = rhs - lhs
        self.tolerance = float(tolerance)
        self.holds = self.margin >= -self.tolerance
        self.tie = abs(self.margin) <= self.tolerance
        self.n = n
        self.K = K
        self.m = m
        self.d = d
        self.etaWindow = etaWindow
        self.estimated = estimated
        self.stderr = stderr

    def __repr__(self):
        return 'InequalityReport(%s, lhs=%.17g, rhs=%.17g, holds=%s)' % (
            self.variant, self.lhs, self.rhs, self.holds)

    def swapped(self):
        "The same report with the two sides exchanged"
        return InequalityReport(self.variant, self.rhs, self.lhs, self.tolerance,
            self.n, self.K, self.m, self.d, self.etaWindow, self.estimated, self.stderr)

    def toDict(self):
        return {'variant': self.variant, 'lhs': self.lhs, 'rhs': self.rhs,
            'margin': self.margin, 'holds': self.holds, 'tie': self.tie,
            'tolerance': self.tolerance, 'n': self.n, 'K': self.K, 'm': self.m,
            'd': self.d, 'eta_window': self.etaWindow, 'estimated': self.estimated,
            'stderr': self.stderr}

    @classmethod
    def fromDict(cls, record):
        return cls(record['variant'], record['lhs'], record['rhs'],
            record['tolerance'], record.get('n'), record.get('K'), record.get('m'),
            record.get('d'), record.get('eta_window'), record.get('estimated', False),
            record.get('stderr'))


def relativeTolerance(tol, rhs):
    "tol scaled by max(1, |rhs|)"
    return tol * max(1.0, abs(rhs))


def _familyMeta(family):
    return {'n': family.n, 'd': family.d, 'etaWindow': family.etaWindow}


def checkMain(family, K, tol=DEFAULT_TOL, workers=None):
    """
    Returns (ss, rs): ||W_SS|| <= ||W_RS|| and ||W_RS|| <= ||W_GD||
    from one meansTriple evaluation.
    """
    family = permprod.asFamily(family)
    triple = permprod.meansTriple(family, K, workers)
    meta = _familyMeta(family)
    ss = InequalityReport(MAIN_SS_RS, triple.normSS, triple.normRS, tol, K=K, m=family.n, **meta)
    rs = InequalityReport(MAIN_RS_GD, triple.normRS, triple.normGD, tol, K=K, m=family.n, **meta)
    return ss, rs


def checkRechtRe(family, m, tol=DEFAULT_TOL):
    """
    ||E_wo[A_i1 ... A_im]|| <= ||E_wr[A_i1 ... A_im]||
    """
    family = permprod.asFamily(family)
    lhs = matcore.spectralNorm(permprod.ewoMean(family, m))
    rhs = matcore.spectralNorm(permprod.ewrMean(family, m, method='power'))
    return InequalityReport(RECHT_RE_M, lhs, rhs, tol, K=1, m=m, **_familyMeta(family))


def checkRechtReVariants(family, m, tol=DEFAULT_TOL, workers=None):
    """
    The per-m variants: plain and symmetrized norm-of-expectation and the
    two expectation-of-norm forms.
    """
    family = permprod.asFamily(family)
    wo = permprod.ewoStatistics(family, m, workers)
    wr = permprod.ewrStatistics(family, m)
    meta = dict(K=1, m=m, **_familyMeta(family))
    return [
        InequalityReport(RECHT_RE_M, matcore.spectralNorm(wo.mean),
            matcore.spectralNorm(wr.mean), tol, **meta),
        InequalityReport(SYMMETRIZED_M, matcore.spectralNorm(wo.symmetrized),
            matcore.spectralNorm(wr.symmetrized), tol, **meta),
        InequalityReport(EWO_NORM_M, wo.normMean, wr.normMean, tol, **meta),
        InequalityReport(EWO_SYM_NORM_M, wo.symNormMean, wr.symNormMean, tol, **meta)]


def checkAllVariants(family, K, budget=permprod.NORM_BUDGET, seed=0, tol=DEFAULT_TOL,
        samples=permprod.NORM_SAMPLES, workers=None):
    """
    Both main comparisons followed by the four K-epoch forms of the
    single/random-shuffle comparison: norm of expectation (plain and
    symmetrized) and expectation of norm (plain and symmetrized). Monte
    Carlo estimated sides are flagged.
    """
    family = permprod.asFamily(family)
    meta = dict(K=K, m=family.n, **_familyMeta(family))

    reports = list(checkMain(family, K, tol, workers))

    left, right = permprod.symmetrizedMeans(family, K, workers)
    reports.append(InequalityReport(SYM_SS_RS, matcore.spectralNorm(left),
        matcore.spectralNorm(right), tol, **meta))

    for variant, symmetrized in ((NORM_SS_RS, False), (NORM_SYM_SS_RS, True)):
        expect = permprod.normExpectationMeans(family, K, symmetrized, budget,
            seed, samples, workers)
        reports.append(InequalityReport(variant, expect.left, expect.right, tol,
            estimated=not expect.exact, stderr=expect.stderr, **meta))

    for report in reports:
        logger.debug('%r', report)
    return reports
