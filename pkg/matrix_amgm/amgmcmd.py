"""
Command line front end: check, search, sweep, simulate, lemma and bounds.

Exit status is 0 when every requested inequality holds, 1 when any is
violated and 2 on bad input or any other error.
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

import os
import sys
import argparse
import logging

import numpy
from tqdm import tqdm

from matrix_amgm import __version__
from matrix_amgm import permprod
from matrix_amgm import inequality
from matrix_amgm import counterex
from matrix_amgm import theory
from matrix_amgm import sgdlab
from matrix_amgm import reportio
from matrix_amgm.errors import AMGMError

logger = logging.getLogger(__name__)

EXIT_HOLDS = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

WORKERS_ENV = 'AMGM_WORKERS'
"Environment variable giving the default number of worker processes"
SEED_ENV = 'AMGM_SEED'
"Environment variable giving the default seed"

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'

FAMILY_HELP = ("appendix_a, lifted:ETA, desa:N, random:SEED (uses --n, --d, --eta) " +
    "or the name of a family JSON file")


class RunConfig(object):
    """
    The parsed command line with environment fallbacks applied.
    """
    def __init__(self, cmdargs):
        self.__dict__.update(vars(cmdargs))
        self.__dict__.pop('func', None)
        if self.seed is None:
            self.seed = int(os.getenv(SEED_ENV, default='0'))
        if self.sequential:
            self.workers = None
        elif self.workers is None and os.getenv(WORKERS_ENV):
            self.workers = int(os.getenv(WORKERS_ENV))
        if self.workers is not None and self.workers < 1:
            raise ValueError('--workers must be at least 1')

    def asDict(self):
        return dict(self.__dict__)


def parseIntList(text):
    "'1,5,10' -> [1, 5, 10]"
    try:
        values = [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers, got %r' % text)
    if not values:
        raise argparse.ArgumentTypeError('empty list')
    return values


def parseEtaGrid(text):
    """
    'a:b:step' -> a, a + step, ..., b (the endpoint included)
    """
    try:
        start, stop, step = (float(v) for v in text.split(':'))
    except ValueError:
        raise argparse.ArgumentTypeError('expected start:stop:step, got %r' % text)
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError('need step > 0 and stop >= start in %r' % text)
    count = int(round((stop - start) / step)) + 1
    return numpy.linspace(start, stop, count)


def parseEta(text, n, K):
    """
    A float, or 'nk^-P' for the decaying step (nK)^-P
    """
    text = str(text).strip()
    if text.lower().startswith('nk^'):
        power = -float(text[3:])
        return counterex.decayingEta(n, K, power)
    return float(text)


def resolveFamily(config):
    """
    The MatrixFamily named by --family
    """
    source = config.family
    name, sep, param = source.partition(':')
    if name == counterex.APPENDIX_A and not sep:
        return counterex.appendixAFamily()
    elif name == 'lifted' and sep:
        return counterex.liftedFamily(float(param))
    elif name == counterex.DESA and sep:
        return counterex.desaFamily(int(param))
    elif name == 'random' and sep:
        eta = parseEta(config.eta, config.n, config.K)
        return counterex.randomWindowFamily(config.n, config.d, eta, int(param))
    elif os.path.exists(source):
        return reportio.loadFamily(source)
    raise ValueError('unknown family %r; expected %s' % (source, FAMILY_HELP))


def getCmdargs(argv=None):
    """
    Get commandline arguments
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int,
        help="Seed for every random stream. Default from $%s, else 0" % SEED_ENV)
    common.add_argument('--out', help="Output file. Default is stdout")
    common.add_argument('--format', choices=reportio.FORMATS,
        help="Output format. Default from the --out extension, else csv")
    common.add_argument('--tol', type=float, default=inequality.DEFAULT_TOL,
        help="Tolerance on verdict margins (default %(default)s)")
    common.add_argument('--sequential', default=False, action="store_true",
        help="Run in-process in canonical order (bitwise reproducible)")
    common.add_argument('--workers', type=int,
        help="Worker processes. Default from $%s, else in-process" % WORKERS_ENV)
    common.add_argument('-v', '--verbose', default=False, action="store_true",
        help="Log debug messages")
    common.add_argument('-q', '--quiet', default=False, action="store_true",
        help="Only log warnings and errors, no progress bars")

    p = argparse.ArgumentParser(prog='matrixamgm',
        description="Numerical laboratory for matrix AM-GM inequalities")
    p.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = p.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', parents=[common],
        help="Check the main inequalities for one family")
    check.add_argument('--family', default=counterex.APPENDIX_A, help=FAMILY_HELP)
    check.add_argument('--K', type=int, default=2, help="Epochs (default %(default)s)")
    check.add_argument('--m', type=int,
        help="Also check the per-m Recht-Re variants for products of length m")
    check.add_argument('--n', type=int, default=3, help="Members of a random family")
    check.add_argument('--d', type=int, default=2, help="Dimension of a random family")
    check.add_argument('--eta', default='1.0', help="Window of a random family")
    check.add_argument('--all-variants', default=False, action="store_true",
        help="Add the symmetrized and expectation-of-norm variants")
    check.add_argument('--budget', type=float, default=permprod.NORM_BUDGET,
        help="Largest (n!)^K enumerated for expectation-of-norm variants")
    check.add_argument('--samples', type=int, default=int(permprod.NORM_SAMPLES),
        help="Monte Carlo samples above the budget")
    check.add_argument('--save-family', help="Write the resolved family to this JSON file")
    check.set_defaults(func=cmdCheck)

    search = sub.add_parser('search', parents=[common],
        help="Random search for violations")
    search.add_argument('--n', type=int, default=3)
    search.add_argument('--K', type=int, default=2)
    search.add_argument('--d', type=int, default=2)
    search.add_argument('--eta', default='1.0',
        help="Window parameter, a number or nk^-P for (nK)^-P")
    search.add_argument('--trials', type=int, default=1000)
    search.add_argument('--main-only', default=False, action="store_true",
        help="Check only the two main inequalities, screening trials in batches")
    search.add_argument('--budget', type=float, default=permprod.NORM_BUDGET)
    search.add_argument('--samples', type=int, default=int(permprod.NORM_SAMPLES))
    search.set_defaults(func=cmdSearch)

    sweep = sub.add_parser('sweep', parents=[common],
        help="Norm ratio of the lifted family over K and eta")
    sweep.add_argument('--K', type=parseIntList, default=[1, 5, 10, 100],
        help="Comma separated epoch counts")
    sweep.add_argument('--eta-grid', type=parseEtaGrid, default=parseEtaGrid('0:1:0.01'),
        help="start:stop:step (default 0:1:0.01)")
    sweep.set_defaults(func=cmdSweep)

    simulate = sub.add_parser('simulate', parents=[common],
        help="GD/SGD/RandomShuffle/SingleShuffle on Gaussian regression")
    simulate.add_argument('--n', type=int, default=20)
    simulate.add_argument('--d', type=int, default=30)
    simulate.add_argument('--eta', type=float, default=0.5)
    simulate.add_argument('--K', type=int, default=50)
    simulate.add_argument('--runs', type=int, default=100)
    simulate.add_argument('--norm-stride', type=int, default=1,
        help="Record projected norms every this many iterations")
    simulate.add_argument('--zero-labels', default=False, action="store_true",
        help="Use y_i = 0")
    simulate.set_defaults(func=cmdSimulate)

    lemma = sub.add_parser('lemma', parents=[common],
        help="Randomized property suites for the theory checks")
    lemma.add_argument('--which', choices=sorted(theory.SUITES), default='lemma3')
    lemma.add_argument('--trials', type=int, default=1000)
    lemma.set_defaults(func=cmdLemma)

    bounds = sub.add_parser('bounds', parents=[common],
        help="Canonical one-epoch regression bounds over a range of n")
    bounds.add_argument('--n', type=int, default=4, help="Smallest n")
    bounds.add_argument('--n-max', type=int, default=64, help="Largest n")
    bounds.add_argument('--eta', type=float, help="Step size. Default 1/(6n)")
    bounds.set_defaults(func=cmdBounds)

    return p.parse_args(argv)


def writeOutput(config, records, fields=None):
    """
    Write records with the run metadata to --out or stdout
    """
    metadata = reportio.runMetadata(config.command, config.asDict(), config.seed)
    if config.out is None:
        reportio.writeRecords(records, sys.stdout, config.format or reportio.CSV_FORMAT,
            metadata, fields)
    else:
        reportio.saveRecords(records, config.out, config.format, metadata, fields)


def _exitStatus(allHold):
    return EXIT_HOLDS if allHold else EXIT_VIOLATION


def cmdCheck(config):
    family = resolveFamily(config)
    if config.save_family is not None:
        reportio.saveFamily(family, config.save_family)

    if config.all_variants:
        reports = inequality.checkAllVariants(family, config.K, config.budget,
            config.seed, config.tol, config.samples, config.workers)
    else:
        reports = list(inequality.checkMain(family, config.K, config.tol, config.workers))
    if config.m is not None:
        reports.extend(inequality.checkRechtReVariants(family, config.m, config.tol,
            config.workers))

    for report in reports:
        if not report.holds:
            logger.warning('%s violated: lhs=%.17g rhs=%.17g', report.variant,
                report.lhs, report.rhs)
    writeOutput(config, [r.toDict() for r in reports])
    return _exitStatus(all(r.holds for r in reports))


def cmdSearch(config):
    eta = parseEta(config.eta, config.n, config.K)
    with tqdm(total=config.trials, desc='search', disable=config.quiet,
            file=sys.stderr) as bar:
        found = counterex.randomSearch(config.n, config.K, config.d, eta, config.trials,
            config.seed, not config.main_only, config.tol, config.budget, config.samples,
            config.workers, progress=bar.update)
    for variant, stats in counterex.summarizeSearch(found, config.trials).items():
        logger.info('%s: %d hits, rate %g', variant, stats['hits'], stats['rate'])
    writeOutput(config, [r.toDict() for r in found],
        fields=['source', 'n', 'K', 'd', 'eta', 'violated_variant', 'margin',
            'trial_index', 'seed', 'family'])
    return _exitStatus(not found)


def cmdSweep(config):
    rows = counterex.ratioSweep(config.K, config.eta_grid)
    writeOutput(config, [row.toDict() for row in rows],
        fields=['K', 'eta', 'norm_ss', 'norm_rs', 'ratio', 'infinite_flag'])
    return EXIT_HOLDS


def cmdSimulate(config):
    with tqdm(total=config.runs, desc='simulate', disable=config.quiet,
            file=sys.stderr) as bar:
        summary = sgdlab.orderingExperiment(config.n, config.d, config.eta, config.K,
            config.runs, config.seed, config.workers, config.zero_labels,
            config.norm_stride, keepTrajectories=True, progress=bar.update)

    records = []
    for run, trajectories in enumerate(summary.trajectories):
        for trajectory in trajectories:
            records.extend(trajectory.records(run))
    logger.info('win fractions %s', summary.winFractions())
    logger.info('median final losses %s', summary.medians())
    if not summary.meetsThreshold():
        logger.info('ordering threshold %g not met', sgdlab.WIN_THRESHOLD)
    writeOutput(config, records, fields=['scheme', 'run', 'iter', 'loss', 'proj_norm'])
    return EXIT_HOLDS


def cmdLemma(config):
    suite = theory.SUITES[config.which](config.trials, config.seed)
    records = []
    for record in tqdm(suite, desc=config.which, disable=config.quiet, file=sys.stderr):
        records.append(record._asdict())
    failed = [r for r in records if not r['holds']]
    logger.info('%s: %d of %d records fail', config.which, len(failed), len(records))
    writeOutput(config, records)
    return _exitStatus(not failed)


def cmdBounds(config):
    if config.n < 2 or config.n_max < config.n:
        raise ValueError('need 2 <= --n <= --n-max')
    rows = [theory.canonicalLemma4Bounds(n, 1, config.eta)
        for n in range(config.n, config.n_max + 1)]
    writeOutput(config, [row.toDict() for row in rows])
    return _exitStatus(all(row.nonnegative() for row in rows))


def main(argv=None):
    """
    Parse argv, run the subcommand and return the exit status
    """
    cmdargs = getCmdargs(argv)
    level = logging.INFO
    if cmdargs.verbose:
        level = logging.DEBUG
    elif cmdargs.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    func = cmdargs.func
    try:
        config = RunConfig(cmdargs)
        return func(config)
    except (AMGMError, ValueError, OSError) as e:
        logger.error('%s', e)
        return EXIT_ERROR


def run():
    """
    Main routine. To be called from the entry point
    """
    return main()


if __name__ == '__main__':
    sys.exit(run())
