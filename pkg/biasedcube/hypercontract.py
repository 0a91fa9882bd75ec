"""
Biased hypercontractivity.

For q in [1, 2] the damped expansion satisfies

    || sum_T c_q^|T| a_T w_T ||_2 <= || sum_T a_T w_T ||_q

with c_q(alpha, beta) given by cq() below; on the symmetric cube c_q
reduces to sqrt(q - 1).
"""
import math
from collections import namedtuple

import numpy as np

from .cube import lp_norm, subset_sizes
from .fourier import transform
from .preconditions import checks, DEFAULT_TOLERANCE

HyperCheck = namedtuple("HyperCheck", ["lhs", "rhs", "holds"])


def cq(bias, q):
    """ Returns the hypercontractivity constant c_q(alpha, beta).

    The closed formula is 0/0 at alpha = beta, so the symmetric cube
    returns its limit sqrt(q - 1) directly. q = 1 and q = 2 return 0 and 1
    exactly.

    Raises:
        HyperOrderOutOfRangeError: q is outside [1, 2].
    """
    checks.HyperOrder(q)
    if q == 2:
        return 1.0
    if q == 1:
        return 0.0
    if bias.is_symmetric:
        return math.sqrt(q - 1.0)
    # with L = ln(beta/alpha) the formula becomes
    # e^-L (e^{(2 - 2/q) L} - 1) / (1 - e^{-2L/q}), finite for every alpha > 0
    log_ratio = math.log(bias.beta) - math.log(bias.alpha)
    numerator = math.exp(-log_ratio) * math.expm1((2.0 - 2.0 / q) * log_ratio)
    denominator = -math.expm1(-2.0 * log_ratio / q)
    return math.sqrt(numerator / denominator)


class HyperParams(object):
    """ The pair (q, bias) together with its constant c_q(alpha, beta). """

    __slots__ = ("_q", "_bias", "_cq")

    def __init__(self, bias, q):
        self._cq = cq(bias, q)
        self._q = float(q)
        self._bias = bias

    @property
    def q(self):
        return self._q

    @property
    def bias(self):
        return self._bias

    @property
    def cq(self):
        return self._cq

    def damping(self, n):
        """ Returns c_q^|T| for every bitmask T < 2^n. """
        return np.power(self._cq, subset_sizes(n))

    def __repr__(self):
        return "HyperParams(q=%r, bias=%r, cq=%r)" % (self._q, self._bias, self._cq)


def verify_hyper(f, q, tolerance=DEFAULT_TOLERANCE):
    """ Checks the biased hypercontractive inequality on f.

    Returns:
        HyperCheck: lhs = ||sum_T c_q^|T| a_T w_T||_2 computed from the
        spectrum, rhs = ||f||_q, holds = lhs <= rhs + tolerance.
    """
    params = HyperParams(f.bias, q)
    coeffs = transform(f).coeffs
    lhs = math.sqrt(float(np.sum(params.damping(f.n) ** 2 * coeffs ** 2)))
    rhs = lp_norm(f, q)
    return HyperCheck(lhs, rhs, lhs <= rhs + tolerance)


def walsh_coefficients(values):
    """ Returns the +-1 Walsh coefficients mean(f(m) prod_{i in T} x_i) of a table.

    Runs the unnormalised Hadamard recursion, one
    coordinate per pass, so the cost is O(n 2^n) and nothing is shared with
    the biased butterfly of fourier.transform.
    """
    coeffs = np.array(values, dtype=np.float64)
    size = coeffs.shape[-1]
    half = 1
    while half < size:
        view = coeffs.reshape(-1, 2, half)
        low = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] -= low
        half *= 2
    return coeffs / float(size)


def verify_hyper_symmetric(f, q, tolerance=DEFAULT_TOLERANCE, coefficients=None):
    """ Checks the symmetric inequality with damping (q - 1)^(|T|/2).

    Independent of the butterfly and of cq(): coefficients come from
    walsh_coefficients() and the norm from a plain mean. Campaigns checking
    several q on one table pass the coefficients once.

    Raises:
        NotSymmetricError: f does not live on the uniform cube.
    """
    checks.Symmetric(f.bias.alpha)
    checks.HyperOrder(q)
    values = np.asarray(f.values)
    if coefficients is None:
        coefficients = walsh_coefficients(values)
    damping = (q - 1.0) ** subset_sizes(f.n)
    lhs = math.sqrt(float(np.sum(damping * coefficients ** 2)))
    rhs = float(np.mean(np.abs(values) ** q)) ** (1.0 / q)
    return HyperCheck(lhs, rhs, lhs <= rhs + tolerance)


def proof_exponent(d):
    """ Returns the q used by the biased FKN argument for a distance d.

    The argument takes x = p^(2 - 1/ln(1/d)) with p = beta/alpha and
    q = 2 ln p / ln x, which simplifies to q = 2 / (2 - 1/ln(1/d)). For
    d >= 1/e the exponent is clamped so that x = p, i.e. q = 2; d = 0 gives
    q = 1.
    """
    if d <= 0:
        return 1.0
    log_inverse = max(math.log(1.0 / d), 1.0)
    return 2.0 / (2.0 - 1.0 / log_inverse)


def htilde_level_bound(bias, d, q):
    """ Returns 4 d^(4/q) / c_q^2, the bound on the level <= 1 mass of h~. """
    constant = cq(bias, q)
    if constant == 0:
        return math.inf
    return 4.0 * d ** (4.0 / q) / constant ** 2
