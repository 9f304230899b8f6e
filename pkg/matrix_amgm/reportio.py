"""
Reading and writing of run outputs and matrix family files.

Reports are lists of flat dicts. In CSV each file starts with '#'-prefixed
metadata lines ("# key: <json>") followed by a header row; in JSON the
file is {"metadata": {...}, "records": [...]}. Floats are written in
their shortest round-trip decimal form in both.

Family files hold {"d": int, "matrices": [[[row], ...], ...]}.
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

import io
import os
import csv
import json
import logging

import numpy

from matrix_amgm import __version__
from matrix_amgm import permprod
from matrix_amgm.seeding import generatorInfo
from matrix_amgm.errors import MalformedFileError

logger = logging.getLogger(__name__)

CSV_FORMAT = 'csv'
JSON_FORMAT = 'json'
FORMATS = (CSV_FORMAT, JSON_FORMAT)
"Output formats understood by writeRecords and readRecords"

META_PREFIX = '# '
"Start of a CSV metadata line"


def runMetadata(command, config, seed=None):
    """
    Everything needed to repeat a run: package version, subcommand, the
    full configuration and the random generator names.
    """
    return {'version': __version__, 'command': command, 'config': config,
        'seed': seed, 'numpy': numpy.__version__, 'generator': generatorInfo()}


def plainValue(value):
    """
    Convert numpy scalars and arrays (also inside lists, tuples and
    dicts) to plain Python values
    """
    if isinstance(value, numpy.ndarray):
        return value.tolist()
    if isinstance(value, numpy.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): plainValue(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plainValue(v) for v in value]
    return value


def _encodeCell(value):
    value = plainValue(value)
    if value is None:
        return ''
    if isinstance(value, str):
        return value
    # json gives 'true', '1e-05', 'Infinity', '[...]' that json reads back
    return json.dumps(value)


def _decodeCell(text):
    if text == '':
        return None
    try:
        return json.loads(text)
    except ValueError:
        return text


def _fieldNames(records):
    fields = []
    for record in records:
        for key in record:
            if key not in fields:
                fields.append(key)
    return fields


def writeRecords(records, fileobj, fmt=CSV_FORMAT, metadata=None, fields=None):
    """
    Write records to an open text file in fmt. fields fixes the CSV
    column order (default: keys in order of first appearance).
    """
    records = [plainValue(r) for r in records]
    metadata = plainValue(metadata or {})
    if fmt == JSON_FORMAT:
        json.dump({'metadata': metadata, 'records': records}, fileobj, indent=1)
        fileobj.write('\n')
    elif fmt == CSV_FORMAT:
        for key, value in metadata.items():
            fileobj.write('%s%s: %s\n' % (META_PREFIX, key, json.dumps(value)))
        if fields is None:
            fields = _fieldNames(records)
        writer = csv.writer(fileobj, lineterminator='\n')
        writer.writerow(fields)
        for record in records:
            writer.writerow([_encodeCell(record.get(key)) for key in fields])
    else:
        raise ValueError('unknown format %r, expected one of %s' % (fmt, FORMATS))


def saveRecords(records, path, fmt=None, metadata=None, fields=None):
    "writeRecords to a file name; fmt defaults from the extension"
    if fmt is None:
        fmt = formatFromName(path)
    with open(path, 'w', newline='') as fileobj:
        writeRecords(records, fileobj, fmt, metadata, fields)
    logger.info('wrote %d records to %s', len(records), path)


def formatFromName(path, default=CSV_FORMAT):
    ext = os.path.splitext(path)[1].lower().lstrip('.')
    return ext if ext in FORMATS else default


def readRecords(source, fmt=None):
    """
    Read (metadata, records) back from a path or an open text file.
    """
    if isinstance(source, (str, os.PathLike)):
        if fmt is None:
            fmt = formatFromName(os.fspath(source))
        with open(source, newline='') as fileobj:
            text = fileobj.read()
    else:
        text = source.read()
        if fmt is None:
            fmt = JSON_FORMAT if text.lstrip().startswith('{') else CSV_FORMAT

    if fmt == JSON_FORMAT:
        try:
            data = json.loads(text)
            return data['metadata'], data['records']
        except (ValueError, KeyError, TypeError) as e:
            raise MalformedFileError('not a report file: %s' % e)

    metadata = {}
    lines = text.splitlines()
    start = 0
    while start < len(lines) and lines[start].startswith('#'):
        key, sep, value = lines[start][len(META_PREFIX):].partition(': ')
        if not sep:
            raise MalformedFileError('bad metadata line %r' % lines[start])
        metadata[key] = json.loads(value)
        start += 1
    reader = csv.reader(io.StringIO('\n'.join(lines[start:])))
    rows = list(reader)
    if not rows:
        return metadata, []
    fields = rows[0]
    records = []
    for row in rows[1:]:
        if len(row) != len(fields):
            raise MalformedFileError('row has %d cells, header has %d' % (len(row), len(fields)))
        records.append({key: _decodeCell(cell) for key, cell in zip(fields, row)})
    return metadata, records


def familyToDict(family):
    family = permprod.asFamily(family)
    return {'d': family.d, 'matrices': family.stacked.tolist()}


def familyFromDict(data, etaWindow=None, name=None):
    """
    Build a MatrixFamily from the family schema, checking d against the
    matrices
    """
    try:
        d = data['d']
        matrices = data['matrices']
    except (KeyError, TypeError):
        raise MalformedFileError('family file needs "d" and "matrices"')
    if not isinstance(d, int) or d < 1:
        raise MalformedFileError('"d" must be a positive integer')
    try:
        stack = numpy.array(matrices, dtype=float)
    except (ValueError, TypeError) as e:
        raise MalformedFileError('"matrices" is not a list of matrices: %s' % e)
    if stack.ndim != 3 or stack.shape[1:] != (d, d):
        raise MalformedFileError('matrices have shape %s, expected (n, %d, %d)' %
            (stack.shape, d, d))
    return permprod.MatrixFamily(stack, etaWindow, name)


def saveFamily(family, path):
    with open(path, 'w') as fileobj:
        json.dump(familyToDict(family), fileobj)
        fileobj.write('\n')


def loadFamily(path, etaWindow=None):
    with open(path) as fileobj:
        try:
            data = json.load(fileobj)
        except ValueError as e:
            raise MalformedFileError('%s is not valid JSON: %s' % (path, e))
    return familyFromDict(data, etaWindow, name=os.path.basename(path))
