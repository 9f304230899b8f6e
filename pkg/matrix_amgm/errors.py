"""
Exceptions raised by matrix-amgm.

Everything derives from AMGMError. Errors that describe a bad argument
also derive from ValueError so callers can catch either.
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


class AMGMError(Exception):
    "Base class for all errors raised by this package"


class NonSquareError(AMGMError, ValueError):
    "A square matrix was required"


class NotSymmetricError(AMGMError, ValueError):
    "Asymmetry above the symmetry tolerance"


class NonFiniteError(AMGMError, ValueError):
    "NaN or Inf found in a matrix"


class DimensionMismatchError(AMGMError, ValueError):
    "Matrices (or vectors) of incompatible shapes were combined"


class EigenNotConvergedError(AMGMError, ArithmeticError):
    "Jacobi iteration hit the sweep cap"


class TooManyMatricesError(AMGMError, ValueError):
    "Family too large for exact permutation enumeration"


class TooManyTuplesError(AMGMError, ValueError):
    "With-replacement enumeration larger than the tuple cap"


class IndexOutOfRangeError(AMGMError, ValueError):
    "Degree or index argument outside its valid range"


class OutOfRangeError(AMGMError, ValueError):
    "Scalar parameter outside its valid range"


class WindowViolationError(AMGMError, ValueError):
    "A matrix is not inside the required conditioning window"


class NotPsdError(AMGMError, ValueError):
    "A positive semidefinite matrix was required"


class SingularMatrixError(AMGMError, ValueError):
    "Matrix is (numerically) singular"


class NotUnitVectorError(AMGMError, ValueError):
    "A vector is not of unit length"


class MalformedFileError(AMGMError, ValueError):
    "A family or report file does not follow its schema"
