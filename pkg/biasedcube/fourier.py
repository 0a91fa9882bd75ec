"""
Walsh-Fourier analysis on the biased cube.

Every f admits the unique expansion f = sum_T a_T w_T with
w_T = prod_{i in T} x_i. transform() computes the a_T with an n-stage
butterfly; inverse_transform() evaluates the expansion back.
"""
import math

import numpy as np

from .cube import TableFunction, basis_function, scalar_product, subset_sizes, _frozen
from .preconditions import checks, MAX_COORDINATES


class Spectrum(object):
    """ The 2^n Walsh-Fourier coefficients of a function, indexed by subset bitmask.

    Args:
        bias (Bias): the measure the basis is orthonormal for.
        n (int): number of coordinates.
        coeffs (array_like): a_T for T = 0 .. 2^n - 1.
    """

    def __init__(self, bias, n, coeffs):
        checks.CoordinateCount(n, MAX_COORDINATES)
        coeffs = _frozen(coeffs).reshape(-1)
        checks.TableLength(n, coeffs.shape[0])
        self._bias = bias
        self._n = int(n)
        self._coeffs = coeffs

    @classmethod
    def from_affine(cls, bias, n, a0, a):
        """ Builds the spectrum of a0 + sum_i a[i] x_{i+1}. """
        coeffs = np.zeros(1 << n)
        coeffs[0] = a0
        for i, value in enumerate(a):
            coeffs[1 << i] = value
        return cls(bias, n, coeffs)

    @property
    def bias(self):
        return self._bias

    @property
    def n(self):
        return self._n

    @property
    def coeffs(self):
        return self._coeffs

    def coefficient(self, subset):
        """ Returns a_T for T given as an iterable of 1-based coordinates. """
        mask = 0
        for i in subset:
            mask |= 1 << (i - 1)
        return float(self._coeffs[mask])

    def affine_coefficients(self):
        """ Returns (a_empty, a_{1}, ..., a_{n}) as a new array. """
        singletons = [1 << i for i in range(self._n)]
        return np.concatenate(([self._coeffs[0]], self._coeffs[singletons]))

    def total_weight(self):
        """ Returns sum_T a_T^2. """
        return float(np.sum(self._coeffs ** 2))

    def __repr__(self):
        return "Spectrum(n=%d, bias=%r)" % (self._n, self._bias)


def _butterfly(values, bias, inverse=False):
    """ Runs the per-coordinate butterfly over the last axis of values.

    Forward stage: (f_low, f_high) -> (beta f_low + alpha f_high,
    sqrt(alpha beta) (f_high - f_low)). Inverse stage: (a0, a1) ->
    (a0 - gamma a1, a0 + a1 / gamma).
    """
    result = np.array(values, dtype=np.float64)
    size = result.shape[-1]
    n = size.bit_length() - 1
    leading = result.shape[:-1]
    alpha, beta, root = bias.alpha, bias.beta, bias.sqrt_alpha_beta
    for i in range(n):
        stride = 1 << i
        view = result.reshape(leading + (size // (2 * stride), 2, stride))
        first = view[..., 0, :].copy()
        second = view[..., 1, :].copy()
        if inverse:
            view[..., 0, :] = first - bias.gamma * second
            view[..., 1, :] = first + second / bias.gamma
        else:
            view[..., 0, :] = beta * first + alpha * second
            view[..., 1, :] = root * (second - first)
    return result


def transform(f):
    """ Returns the Spectrum of f, coeffs[T] = <f, w_T>.

    Costs O(n 2^n); f is not modified.
    """
    return Spectrum(f.bias, f.n, _butterfly(f.values, f.bias))


def transform_batch(values, bias):
    """ Transforms every row of a (rows, 2^n) array of tables at once.

    Used by exhaustive sweeps, where building one TableFunction per
    truth table would dominate the cost.
    """
    values = np.atleast_2d(values)
    checks.TableLength(values.shape[-1].bit_length() - 1, values.shape[-1])
    return _butterfly(values, bias)


def inverse_transform(s):
    """ Returns the TableFunction f = sum_T a_T w_T of a Spectrum. """
    return TableFunction(s.bias, s.n, _butterfly(s.coeffs, s.bias, inverse=True))


def naive_transform(f):
    """ Returns the Spectrum of f from the definition <f, w_T>, O(4^n).

    Reference implementation for checking transform().
    """
    coeffs = [scalar_product(f, basis_function(f.bias, f.n, subset))
              for subset in range(1 << f.n)]
    return Spectrum(f.bias, f.n, coeffs)


def level_weights(s):
    """ Returns the array of level weights sum_{|T| = k} a_T^2 for k = 0 .. n. """
    return np.bincount(subset_sizes(s.n), weights=s.coeffs ** 2, minlength=s.n + 1)


def level_weight(s, k):
    """ Returns sum_{|T| = k} a_T^2.

    Raises:
        LevelOutOfRangeError: k is not in 0 .. n.
    """
    checks.Level(k, s.n)
    return float(level_weights(s)[k])


def rho(s):
    """ Returns the spectral tail (sum_{|T| > 1} a_T^2)^(1/2). """
    return math.sqrt(float(np.sum(level_weights(s)[2:])))
