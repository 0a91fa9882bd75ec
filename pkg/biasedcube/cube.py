"""
The biased discrete cube {-gamma, 1/gamma}^n, its product measure and the
exact expectation and L_p machinery every other module consumes.

Points are encoded as bitmasks: bit i of an index m selects the value of
coordinate i + 1, with bit 0 meaning the low point -gamma (probability
beta) and bit 1 meaning the high point 1/gamma (probability alpha).
"""
import functools
import math

import numpy as np

from .preconditions import checks, MAX_COORDINATES


def _frozen(array):
    array = np.array(array, dtype=np.float64)
    array.flags.writeable = False
    return array


class Bias(object):
    """ The measure parameters of one coordinate of the cube.

    A Bias is immutable. Two biases compare equal when their alpha is
    equal, since every other field is derived from it.
    """

    __slots__ = ("_alpha", "_beta", "_gamma")

    def __init__(self, alpha):
        checks.Alpha(alpha)
        self._alpha = float(alpha)
        self._beta = 1.0 - self._alpha
        self._gamma = math.sqrt(self._alpha / self._beta)

    @property
    def alpha(self):
        """ Probability of the high point 1/gamma. """
        return self._alpha

    @property
    def beta(self):
        """ Probability of the low point -gamma, always 1 - alpha. """
        return self._beta

    @property
    def gamma(self):
        return self._gamma

    @property
    def low_value(self):
        """ The point -gamma, taken with probability beta. """
        return -self._gamma

    @property
    def high_value(self):
        """ The point 1/gamma, taken with probability alpha. """
        return 1.0 / self._gamma

    @property
    def is_symmetric(self):
        """ True for the uniform cube {-1, 1}^n, i.e. alpha = 1/2. """
        return self._alpha == 0.5

    @property
    def sqrt_alpha_beta(self):
        """ sqrt(alpha * beta), equal to beta * gamma and to alpha / gamma. """
        return math.sqrt(self._alpha * self._beta)

    def __eq__(self, other):
        return isinstance(other, Bias) and self._alpha == other._alpha

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("Bias", self._alpha))

    def __repr__(self):
        return "Bias(alpha=%r)" % self._alpha


def make_bias(alpha):
    """ Returns the Bias for the measure beta * delta(-gamma) + alpha * delta(1/gamma).

    Args:
        alpha (float): probability of the high point, in (0, 1/2].
            alpha = 1/2 gives the symmetric cube.

    Raises:
        AlphaOutOfRangeError: alpha is not finite, not positive or
            larger than 1/2.
    """
    return Bias(alpha)


def subset_sizes(n):
    """ Returns an int array holding popcount(m) for every bitmask m < 2^n. """
    index = np.arange(1 << n, dtype=np.int64)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes += (index >> i) & 1
    return sizes


@functools.lru_cache(maxsize=64)
def _weights(alpha, n):
    sizes = subset_sizes(n)
    return _frozen(np.power(alpha, sizes) * np.power(1.0 - alpha, n - sizes))


def point_weights(bias, n):
    """ Returns the probability alpha^|m| * beta^(n - |m|) of every point m.

    The array is read only and shared between callers.
    """
    checks.CoordinateCount(n, MAX_COORDINATES)
    return _weights(bias.alpha, int(n))


class PointWeight(object):
    """ The probability mass of a single point of the cube. """

    __slots__ = ("_index", "_weight")

    def __init__(self, index, weight):
        self._index = index
        self._weight = weight

    @property
    def index(self):
        return self._index

    @property
    def weight(self):
        return self._weight

    def __repr__(self):
        return "PointWeight(index=%d, weight=%r)" % (self._index, self._weight)


def iter_point_weights(bias, n):
    """ Yields a PointWeight for every point of the cube in ascending index order. """
    for index, weight in enumerate(point_weights(bias, n)):
        yield PointWeight(index, float(weight))


class TableFunction(object):
    """ A real function on {-gamma, 1/gamma}^n stored as its 2^n values.

    The values array is copied on construction and is read only
    afterwards, so a TableFunction can be shared freely.

    Args:
        bias (Bias): the measure of the cube.
        n (int): number of coordinates, 1 <= n <= 26.
        values (array_like): the 2^n values in bitmask order.
    """

    def __init__(self, bias, n, values):
        checks.CoordinateCount(n, MAX_COORDINATES)
        values = _frozen(values).reshape(-1)
        checks.TableLength(n, values.shape[0])
        self._bias = bias
        self._n = int(n)
        self._values = values

    @classmethod
    def from_truth_table(cls, bias, n, truth_table):
        """ Builds the Boolean function whose value at m is +1 iff bit m of truth_table is set. """
        checks.CoordinateCount(n, MAX_COORDINATES)
        bits = [(truth_table >> m) & 1 for m in range(1 << n)]
        return cls(bias, n, np.where(np.array(bits, dtype=bool), 1.0, -1.0))

    @property
    def bias(self):
        return self._bias

    @property
    def n(self):
        return self._n

    @property
    def values(self):
        return self._values

    @property
    def weights(self):
        """ The PointWeight probabilities of the function's cube. """
        return point_weights(self._bias, self._n)

    @property
    def is_boolean(self):
        """ True when every value is exactly -1 or +1. """
        return bool(np.all(np.abs(self._values) == 1.0))

    @property
    def is_bounded(self):
        """ True when every value lies in [-1, 1]. """
        return bool(np.all(np.abs(self._values) <= 1.0))

    def truth_table(self):
        """ Returns the integer whose bit m is set iff f(m) = +1. Boolean functions only. """
        checks.Boolean(self._values)
        table = 0
        for m in np.flatnonzero(self._values > 0):
            table |= 1 << int(m)
        return table

    def with_values(self, values):
        """ Returns a TableFunction on the same cube with new values. """
        return TableFunction(self._bias, self._n, values)

    def __add__(self, other):
        if isinstance(other, TableFunction):
            checks.SameCube(self, other)
            return self.with_values(self._values + other._values)
        return self.with_values(self._values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TableFunction):
            checks.SameCube(self, other)
            return self.with_values(self._values - other._values)
        return self.with_values(self._values - other)

    def __mul__(self, scalar):
        return self.with_values(self._values * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self._values)

    def __repr__(self):
        return "TableFunction(n=%d, bias=%r)" % (self._n, self._bias)


def coordinate(bias, n, i):
    """ Returns the table of the coordinate function x_{i+1} (0-based i). """
    checks.CoordinateCount(n, MAX_COORDINATES)
    checks.Level(i, n - 1)
    bit = (np.arange(1 << n, dtype=np.int64) >> i) & 1
    return TableFunction(bias, n, np.where(bit == 1, bias.high_value, bias.low_value))


def basis_function(bias, n, subset):
    """ Returns the table of w_T = prod_{i in T} x_i, T given as a bitmask. """
    checks.CoordinateCount(n, MAX_COORDINATES)
    values = np.ones(1 << n)
    for i in range(n):
        if (subset >> i) & 1:
            values = values * coordinate(bias, n, i).values
    return TableFunction(bias, n, values)


def _weighted_sum(weights, terms, compensated):
    # pairwise numpy summation in ascending index order; fsum when asked
    if compensated:
        return math.fsum((weights * terms).tolist())
    return float(np.sum(weights * terms))


def expectation(f, compensated=False):
    """ Returns E f = sum_m weight(m) * f(m).

    Args:
        f (TableFunction): the function.
        compensated (bool): use exactly rounded summation (math.fsum)
            instead of numpy's pairwise summation. Meant for stress tests.
    """
    return _weighted_sum(f.weights, f.values, compensated)


def lp_norm(f, p, compensated=False):
    """ Returns ||f||_p = (E |f|^p)^(1/p) for a finite p >= 1.

    Raises:
        NormOrderOutOfRangeError: p is below 1 or not finite.
    """
    checks.NormOrder(p)
    moment = _weighted_sum(f.weights, np.abs(f.values) ** p, compensated)
    return moment ** (1.0 / p)


def scalar_product(f, g, compensated=False):
    """ Returns <f, g> = E f g.

    Raises:
        BiasMismatchError: f and g live on different cubes.
    """
    checks.SameCube(f, g)
    return _weighted_sum(f.weights, f.values * g.values, compensated)
