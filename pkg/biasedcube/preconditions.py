"""
Precondition checks shared by every biasedcube module.

Each raw check returns 0 for success or the CODE of a status class from
biasedcube.status. The checks are wrapped once into the module-level
'checks' object, so callers write e.g. checks.Alpha(alpha) and get an
AlphaOutOfRangeError carrying the offending value.
"""
import math

import numpy as np

from .statuscheckedfunctions import FunctionInfo, StatusCheckedFunctions
from .status import (AlphaOutOfRangeError,
                     CoordinateCountOutOfRangeError,
                     TableLengthMismatchError,
                     NormOrderOutOfRangeError,
                     BiasMismatchError,
                     LevelOutOfRangeError,
                     HyperOrderOutOfRangeError,
                     NotBooleanError,
                     NonPositiveConstantError,
                     NonPositiveRadiusError,
                     NotSymmetricError,
                     ValuesOutOfRangeError,
                     ZeroRademacherSumError,
                     MomentOrderOutOfRangeError,
                     LeadingCoefficientTooLargeError,
                     NonPositiveScaleError,
                     InternalInconsistencyError,
                     SymmetricCounterexampleWarning,
                     ClosedFormDiscrepancyWarning)

MAX_COORDINATES = 26
MAX_EXHAUSTIVE_COORDINATES = 4
DEFAULT_TOLERANCE = 1e-10


def _is_real(value):
    try:
        return math.isfinite(value)
    except TypeError:
        return False


def _bias_alpha(alpha):
    if not _is_real(alpha) or not 0 < alpha <= 0.5:
        return AlphaOutOfRangeError.CODE
    return 0


def _coordinate_count(n, limit):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        return CoordinateCountOutOfRangeError.CODE
    if not 1 <= n <= limit:
        return CoordinateCountOutOfRangeError.CODE
    return 0


def _table_length(n, length):
    if length != 1 << n:
        return TableLengthMismatchError.CODE
    return 0


def _norm_order(p):
    if not _is_real(p) or p < 1:
        return NormOrderOutOfRangeError.CODE
    return 0


def _same_cube(f, g):
    if f.n != g.n or f.bias != g.bias:
        return BiasMismatchError.CODE
    return 0


def _level(k, n):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k <= n:
        return LevelOutOfRangeError.CODE
    return 0


def _hyper_order(q):
    if not _is_real(q) or not 1 <= q <= 2:
        return HyperOrderOutOfRangeError.CODE
    return 0


def _boolean_values(values):
    if not np.all(np.abs(values) == 1.0):
        return NotBooleanError.CODE
    return 0


def _positive_constant(c0):
    if not _is_real(c0) or c0 <= 0:
        return NonPositiveConstantError.CODE
    return 0


def _positive_radius(radius):
    if not _is_real(radius) or radius <= 0:
        return NonPositiveRadiusError.CODE
    return 0


def _symmetric_bias(alpha):
    if alpha != 0.5:
        return NotSymmetricError.CODE
    return 0


def _bounded_values(values):
    if not np.all(np.abs(values) <= 1.0):
        return ValuesOutOfRangeError.CODE
    return 0


def _nonzero_sum(coefficients):
    if not np.any(coefficients != 0):
        return ZeroRademacherSumError.CODE
    return 0


def _moment_order(t):
    if not _is_real(t) or t < 1:
        return MomentOrderOutOfRangeError.CODE
    return 0


def _khinchine_order(t):
    if not _is_real(t) or t <= 1:
        return MomentOrderOutOfRangeError.CODE
    return 0


def _leading_coefficient(a1):
    if a1 > 1:
        return LeadingCoefficientTooLargeError.CODE
    return 0


def _positive_scale(s):
    if not _is_real(s) or s <= 0:
        return NonPositiveScaleError.CODE
    return 0


def _consistent(spectral, direct, tolerance):
    if not abs(spectral - direct) <= tolerance:
        return InternalInconsistencyError.CODE
    return 0


def _asymmetric_counterexample(alpha):
    if alpha == 0.5:
        return SymmetricCounterexampleWarning.CODE
    return 0


def _closed_form_agrees(displayed, computed):
    if abs(displayed - computed) > 1e-12:
        return ClosedFormDiscrepancyWarning.CODE
    return 0


class _Preconditions(StatusCheckedFunctions):
    """
    _Preconditions, every argument check of the package behind one object.

    Checks can be called by name, e.g. checks.NormOrder(p) or
    checks["NormOrder"](p). If a check returns a non-zero status, the
    appropriate exception derived from either WarningStatus or
    ErrorStatus is raised (or warned).
    """

    def __init__(self):
        function_infos = [
            FunctionInfo(_bias_alpha, "Alpha", ["alpha"]),
            FunctionInfo(_coordinate_count, "CoordinateCount", ["n", "limit"]),
            FunctionInfo(_table_length, "TableLength", ["n", "length"]),
            FunctionInfo(_norm_order, "NormOrder", ["p"]),
            FunctionInfo(_same_cube, "SameCube", ["f", "g"]),
            FunctionInfo(_level, "Level", ["k", "n"]),
            FunctionInfo(_hyper_order, "HyperOrder", ["q"]),
            FunctionInfo(_boolean_values, "Boolean", ["values"]),
            FunctionInfo(_positive_constant, "PositiveConstant", ["c0"]),
            FunctionInfo(_positive_radius, "PositiveRadius", ["radius"]),
            FunctionInfo(_symmetric_bias, "Symmetric", ["alpha"]),
            FunctionInfo(_bounded_values, "Bounded", ["values"]),
            FunctionInfo(_nonzero_sum, "NonZeroSum", ["coefficients"]),
            FunctionInfo(_moment_order, "MomentOrder", ["t"]),
            FunctionInfo(_khinchine_order, "KhinchineOrder", ["t"]),
            FunctionInfo(_leading_coefficient, "LeadingCoefficient", ["a1"]),
            FunctionInfo(_positive_scale, "PositiveScale", ["s"]),
            FunctionInfo(_consistent, "Consistent", ["spectral", "direct", "tolerance"]),
            FunctionInfo(_asymmetric_counterexample, "AsymmetricCounterexample", ["alpha"]),
            FunctionInfo(_closed_form_agrees, "ClosedFormAgrees", ["displayed", "computed"]),
        ]
        super(_Preconditions, self).__init__(function_infos)


checks = _Preconditions()
