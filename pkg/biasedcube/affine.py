"""
Distances from [-1, 1]-valued functions on the symmetric cube {-1, 1}^n
to the affine functions A and to the bounded affine functions A[-1,1].

By orthonormality of the Walsh basis, dist(f, A) is the spectral tail rho
and dist(f, A[-1,1])^2 = rho^2 + ||c - P(c)||^2, where c collects the
level <= 1 coefficients and P is the Euclidean projection onto the unit
l1 ball. The rest of the module checks the Rademacher-sum inequalities
that bound dist(f, A[-1,1]) in terms of rho, and builds the explicit
bounded approximants of that argument.
"""
import math
from collections import namedtuple
from enum import Enum

import numpy as np

from .cube import TableFunction, make_bias, subset_sizes, _frozen
from .fourier import Spectrum, transform, inverse_transform, rho as spectral_rho
from .preconditions import checks, DEFAULT_TOLERANCE, MAX_COORDINATES

# prefix sums and l1 norms may overshoot 1 by rounding
PREFIX_TOLERANCE = 1e-12
# relative slack when comparing |S| against a norm it can equal exactly
TIE_TOLERANCE = 1e-12
BRANCH_TOLERANCE = 1e-8
CONSISTENCY_TOLERANCE = 1e-9

AffineDistance = namedtuple("AffineDistance", ["dist", "minimizer"])
TruncationCheck = namedtuple("TruncationCheck", ["lhs", "rho", "holds"])
SmallBallCheck = namedtuple("SmallBallCheck", ["prob", "holds"])
NormCheck = namedtuple("NormCheck", ["lhs", "rhs", "holds"])
NormTBound = namedtuple("NormTBound", ["applicable", "lower", "middle", "upper", "holds"])
ChebyshevCheck = namedtuple("ChebyshevCheck", ["probability", "excess_bound", "rho_bound", "holds"])
Theorem3Witness = namedtuple("Theorem3Witness", ["rho",
                                                 "dist",
                                                 "bound",
                                                 "construction",
                                                 "construction_dist",
                                                 "branch",
                                                 "tau",
                                                 "threshold",
                                                 "branch_distance",
                                                 "branch_bound",
                                                 "branch_holds",
                                                 "vacuous",
                                                 "holds"])


class ConstantPair(Enum):
    """ The (branch threshold base, final constant) pairs of the
    dist(f, A[-1,1]) <= C / sqrt(ln(1/rho)) bound.

    The branch threshold is (2 / ln base) ln(1/rho).
    """
    LN3 = (3.0, 18.0)
    LN203 = (2.03, 14.5)

    @property
    def base(self):
        return self.value[0]

    @property
    def final_constant(self):
        return self.value[1]

    @classmethod
    def from_base(cls, base):
        """ Returns the pair whose base equals base, e.g. 3 or 2.03. """
        for pair in cls:
            if pair.base == float(base):
                return pair
        raise ValueError("No constant pair with base %r" % (base,))

    def __str__(self):
        return "%g/%g" % self.value


class Theorem3Branch(Enum):
    """ Which construction theorem3_witness used. """
    TRIVIAL = 0
    """ rho = 0: f is affine and already bounded. """
    FEASIBLE = 1
    """ The level <= 1 part already lies in A[-1,1]. """
    ZERO = 2
    """ rho >= 1/3: the zero function is close enough. """
    TRUNCATE = 3
    """ tau >= threshold: keep the leading coefficients up to the threshold. """
    BOUNDARY = 4
    """ tau < threshold: keep tau coefficients and fill the l1 budget on the next one. """

    def __str__(self):
        return self.name.lower()


def phi(x):
    """ Clamps x to [-1, 1]; arrays are clamped elementwise. """
    if np.ndim(x):
        return np.clip(x, -1.0, 1.0)
    return max(-1.0, min(1.0, float(x)))


class AffineFunction(object):
    """ f(x) = a0 + sum_i a_i x_i on the symmetric cube.

    Args:
        a0 (float): the constant term.
        a (array_like): the coefficients of x_1 .. x_n.
    """

    def __init__(self, a0, a):
        self._a0 = float(a0)
        self._a = _frozen(a).reshape(-1)

    @classmethod
    def from_coefficients(cls, coefficients):
        """ Builds the function from the vector (a0, a_1, ..., a_n). """
        coefficients = np.asarray(coefficients, dtype=np.float64)
        return cls(coefficients[0], coefficients[1:])

    @property
    def a0(self):
        return self._a0

    @property
    def a(self):
        return self._a

    @property
    def n(self):
        return self._a.shape[0]

    def coefficients(self):
        """ Returns (a0, a_1, ..., a_n) as a new array. """
        return np.concatenate(([self._a0], self._a))

    def l1_norm(self):
        """ Returns |a0| + sum_i |a_i|, the sup norm of the function. """
        return float(np.sum(np.abs(self.coefficients())))

    @property
    def is_bounded(self):
        """ True when the function is [-1, 1]-valued, i.e. l1_norm() <= 1. """
        return self.l1_norm() <= 1.0 + PREFIX_TOLERANCE

    def spectrum(self):
        return Spectrum.from_affine(make_bias(0.5), self.n, self._a0, self._a)

    def to_table(self):
        """ Returns the values of the function on {-1, 1}^n. """
        return inverse_transform(self.spectrum())

    def __repr__(self):
        return "AffineFunction(a0=%r, a=%r)" % (self._a0, self._a.tolist())


def lift(affine):
    """ Moves the constant term onto a new leading coordinate x_0.

    a0 + sum a_i x_i becomes a0 x_0 + sum a_i x_i on n + 1 coordinates,
    which has the same distribution of |S|.
    """
    return AffineFunction(0.0, affine.coefficients())


def unlift(lifted):
    """ Inverse of lift(): the x_0 coefficient becomes the constant term. """
    return AffineFunction(lifted.a[0], lifted.a[1:])


def _signed_sum_values(magnitudes):
    # bit i of the index is the sign of r_{i+1}, bit 1 meaning +1
    values = np.zeros(1)
    for a in magnitudes:
        values = np.concatenate((values - a, values + a))
    return values


class RademacherSum(object):
    """ S = constant + sum_i a_i r_i with a_1 >= ... >= a_n >= 0.

    The input coefficients may be unsorted and signed. They are replaced
    by their magnitudes sorted in descending order, ties keeping the
    original order, which leaves every norm and tail probability of |S|
    unchanged. order and signs remember the normalisation.

    Raises:
        CoordinateCountOutOfRangeError: coefficients is empty.

    Args:
        coefficients (array_like): a_1 .. a_n, at least one; values() needs
            at most 26 of them.
        constant (float): constant term, 0 for the homogeneous sums of the
            Hitczenko-Kwapien lemma.
    """

    def __init__(self, coefficients, constant=0.0):
        coefficients = np.asarray(coefficients, dtype=np.float64).reshape(-1)
        # at least one coefficient; the 26 limit only binds values()
        checks.CoordinateCount(coefficients.shape[0], max(coefficients.shape[0], 1))
        magnitudes = np.abs(coefficients)
        order = np.argsort(-magnitudes, kind="stable")
        self._a = _frozen(magnitudes[order])
        self._order = order
        self._signs = np.where(coefficients < 0, -1.0, 1.0)
        self._constant = float(constant)
        self._values = None

    @property
    def a(self):
        return self._a

    @property
    def n(self):
        return self._a.shape[0]

    @property
    def constant(self):
        return self._constant

    @property
    def order(self):
        """ Original index of each sorted coefficient. """
        return self._order

    @property
    def signs(self):
        """ Sign of each original coefficient, +1 for zero. """
        return self._signs

    def values(self):
        """ Returns S at all 2^n sign patterns, computed once.

        Raises:
            CoordinateCountOutOfRangeError: more than 26 coefficients.
        """
        if self._values is None:
            checks.CoordinateCount(self.n, MAX_COORDINATES)
            self._values = _frozen(_signed_sum_values(self._a) + self._constant)
        return self._values

    def l2_norm(self):
        return math.sqrt(float(np.sum(self._a ** 2)) + self._constant ** 2)

    def unsort(self, sorted_coefficients):
        """ Maps coefficients given in sorted order back to the original positions and signs. """
        original = np.zeros(self.n)
        original[self._order] = np.asarray(sorted_coefficients) * self._signs[self._order]
        return original

    def __repr__(self):
        return "RademacherSum(a=%r, constant=%r)" % (self._a.tolist(), self._constant)


def lp_norm_rademacher(S, t):
    """ Returns (E |S|^t)^(1/t) exactly over the 2^n sign patterns.

    Raises:
        MomentOrderOutOfRangeError: t < 1.
    """
    checks.MomentOrder(t)
    return float(np.mean(np.abs(S.values()) ** t)) ** (1.0 / t)


def excess_mass(S):
    """ Returns E (|S| - 1)_+^2. """
    return float(np.mean(np.maximum(np.abs(S.values()) - 1.0, 0.0) ** 2))


def check_hk_small_ball(S):
    """ Checks P(|S| >= ||S||_2) > 1/10 by enumeration.

    Raises:
        ZeroRademacherSumError: every coefficient is zero.
    """
    checks.NonZeroSum(S.a)
    threshold = S.l2_norm() * (1.0 - TIE_TOLERANCE)
    prob = float(np.mean(np.abs(S.values()) >= threshold))
    return SmallBallCheck(prob, prob > 0.1)


def check_hk_tail_norm(S, t, tolerance=DEFAULT_TOLERANCE):
    """ Checks ||S||_t >= (1/4) sqrt(t) (sum_{i > t} a_i^2)^(1/2).

    For fractional t the tail runs over the integer indices i >= floor(t) + 1.
    """
    lhs = lp_norm_rademacher(S, t)
    tail = S.a[int(math.floor(t)):]
    rhs = 0.25 * math.sqrt(t) * math.sqrt(float(np.sum(tail ** 2)))
    return NormCheck(lhs, rhs, lhs >= rhs - tolerance)


def khinchine_ratio(S, t, tolerance=DEFAULT_TOLERANCE):
    """ Checks (E|S|^2t)^(1/2t) <= sqrt((2t - 1)/(t - 1)) (E|S|^t)^(1/t).

    Raises:
        MomentOrderOutOfRangeError: t <= 1, where the factor is singular.
    """
    checks.KhinchineOrder(t)
    magnitudes = np.abs(S.values())
    lhs = float(np.mean(magnitudes ** (2.0 * t))) ** (1.0 / (2.0 * t))
    rhs = math.sqrt((2.0 * t - 1.0) / (t - 1.0)) * float(np.mean(magnitudes ** t)) ** (1.0 / t)
    return NormCheck(lhs, rhs, lhs <= rhs + tolerance)


def check_small_ball_moment(S, t, tolerance=DEFAULT_TOLERANCE):
    """ Checks P(|S| >= ||S||_t / 2) >= (1/4) ((t - 1)/(2t - 1))^t. """
    half_norm = 0.5 * lp_norm_rademacher(S, t)
    prob = float(np.mean(np.abs(S.values()) >= half_norm * (1.0 - TIE_TOLERANCE)))
    bound = 0.25 * ((t - 1.0) / (2.0 * t - 1.0)) ** t
    return NormCheck(prob, bound, prob >= bound - tolerance)


def check_chebyshev_tail(S, rho, eps, tolerance=DEFAULT_TOLERANCE):
    """ Checks P(|S| >= 1 + eps) <= E(|S| - 1)_+^2 / eps^2 <= rho^2 / eps^2.

    The second inequality is only required when E(|S| - 1)_+^2 <= rho^2.
    """
    checks.PositiveScale(eps)
    probability = float(np.mean(np.abs(S.values()) >= 1.0 + eps))
    excess = excess_mass(S)
    excess_bound = excess / eps ** 2
    rho_bound = rho ** 2 / eps ** 2
    holds = probability <= excess_bound + tolerance
    if excess <= rho ** 2 + tolerance:
        holds = holds and probability <= rho_bound + tolerance
    return ChebyshevCheck(probability, excess_bound, rho_bound, holds)


def tau(S):
    """ Returns max{t >= 1 : a_1 + ... + a_t <= 1}.

    Raises:
        LeadingCoefficientTooLargeError: a_1 > 1.
    """
    checks.LeadingCoefficient(float(S.a[0]))
    prefix = np.cumsum(S.a)
    return max(1, int(np.count_nonzero(prefix <= 1.0 + PREFIX_TOLERANCE)))


def _norm_t_upper(rho, t):
    return 2.0 + 4.0 * rho * ((2.0 * t - 1.0) / (t - 1.0)) ** (t / 2.0)


def norm_t_bound(S, rho, t, tolerance=DEFAULT_TOLERANCE):
    """ Checks (1/4) sqrt(t) (sum_{i > t} a_i^2)^(1/2) <= ||S||_t <= 2 + 4 rho ((2t-1)/(t-1))^(t/2).

    The upper bound needs E(|S| - 1)_+^2 <= rho^2; when that fails the
    result is marked not applicable and holds is True.
    """
    checks.KhinchineOrder(t)
    applicable = excess_mass(S) <= rho ** 2 + tolerance
    tail = check_hk_tail_norm(S, t, tolerance)
    upper = _norm_t_upper(rho, t)
    holds = not applicable or (tail.holds and tail.lhs <= upper + tolerance)
    return NormTBound(applicable, tail.rhs, tail.lhs, upper, holds)


def _check_symmetric_bounded(f):
    checks.Symmetric(f.bias.alpha)
    checks.Bounded(f.values)


def dist_to_affine(f):
    """ Returns dist_L2(f, A) and the orthogonal projection of f onto A.

    Raises:
        NotSymmetricError: f is not on the uniform cube.
    """
    checks.Symmetric(f.bias.alpha)
    spectrum = transform(f)
    minimizer = AffineFunction.from_coefficients(spectrum.affine_coefficients())
    return AffineDistance(spectral_rho(spectrum), minimizer)


def project_l1(v, radius=1.0):
    """ Returns the Euclidean projection of v onto {u : sum |u_i| <= radius}.

    Feasible vectors come back unchanged; otherwise every entry is soft
    thresholded by the theta that puts the result on the sphere, found by
    sorting the magnitudes.

    Raises:
        NonPositiveRadiusError: radius <= 0.
    """
    checks.PositiveRadius(radius)
    v = np.array(v, dtype=np.float64).reshape(-1)
    magnitudes = np.abs(v)
    if np.sum(magnitudes) <= radius:
        return v
    ordered = np.sort(magnitudes)[::-1]
    cumulative = np.cumsum(ordered)
    counts = np.arange(1, ordered.shape[0] + 1)
    last = np.flatnonzero(ordered - (cumulative - radius) / counts > 0)[-1]
    theta = (cumulative[last] - radius) / (last + 1.0)
    return np.sign(v) * np.maximum(magnitudes - theta, 0.0)


def _bounded_distance(coefficients, rho):
    projected = project_l1(coefficients, 1.0)
    gap = float(np.sum((coefficients - projected) ** 2))
    return math.sqrt(rho ** 2 + gap), projected


def dist_to_bounded_affine(f):
    """ Returns dist_L2(f, A[-1,1]) and its minimiser, exactly.

    Raises:
        NotSymmetricError: f is not on the uniform cube.
    """
    checks.Symmetric(f.bias.alpha)
    spectrum = transform(f)
    dist, projected = _bounded_distance(spectrum.affine_coefficients(), spectral_rho(spectrum))
    return AffineDistance(dist, AffineFunction.from_coefficients(projected))


def _excess_of_projection(coefficients):
    projection = AffineFunction.from_coefficients(coefficients).to_table().values
    return float(np.mean(np.maximum(np.abs(projection) - 1.0, 0.0) ** 2))


def check_truncation_bound(f, tolerance=DEFAULT_TOLERANCE):
    """ Checks E(|S| - 1)_+^2 <= rho^2 for S the projection of f onto A.

    Raises:
        NotSymmetricError: f is not on the uniform cube.
        ValuesOutOfRangeError: f leaves [-1, 1].
    """
    _check_symmetric_bounded(f)
    spectrum = transform(f)
    lhs = _excess_of_projection(spectrum.affine_coefficients())
    rho = spectral_rho(spectrum)
    return TruncationCheck(lhs, rho, lhs <= rho ** 2 + tolerance)


def theorem3_bound(rho, constants=ConstantPair.LN3):
    """ Returns C / sqrt(ln(1/rho)), 0 at rho = 0 and infinity for rho >= 1. """
    if rho <= 0:
        return 0.0
    if rho >= 1:
        return math.inf
    return constants.final_constant / math.sqrt(math.log(1.0 / rho))


def theorem3_witness(f, constants=ConstantPair.LN3, tolerance=DEFAULT_TOLERANCE):
    """ Builds the explicit bounded affine approximant of a [-1, 1]-valued f.

    The level <= 1 part S of f is lifted to a homogeneous Rademacher sum
    (constant term on a new coordinate x_0), its coefficients sorted by
    magnitude, and one of two constructions S_1 applied depending on
    whether tau reaches the threshold (2 / ln base) ln(1/rho):

    * TRUNCATE keeps the coefficients with index <= threshold,
    * BOUNDARY keeps a_1 .. a_tau and gives r_{tau+1} the remaining
      l1 budget 1 - (a_1 + ... + a_tau).

    S_1 is mapped back to the original coordinates and unlifted. The
    result compares the construction against the exact distance, the
    headline bound C / sqrt(ln(1/rho)) and the branch's own bound on
    ||S - S_1||.

    Args:
        f (TableFunction): a [-1, 1]-valued function on the uniform cube.
        constants (ConstantPair): threshold base and final constant.
        tolerance (float): slack of the final comparisons.

    Returns:
        Theorem3Witness: holds requires dist <= bound, construction_dist
        >= dist and the branch bound.
    """
    _check_symmetric_bounded(f)
    spectrum = transform(f)
    rho = spectral_rho(spectrum)
    coefficients = spectrum.affine_coefficients()
    dist, projected = _bounded_distance(coefficients, rho)
    bound = theorem3_bound(rho, constants)

    tau_value = None
    threshold = None
    branch_distance = 0.0
    branch_bound = 0.0
    branch_holds = True
    if rho == 0:
        branch = Theorem3Branch.TRIVIAL
        checks.Consistent(dist, 0.0, CONSISTENCY_TOLERANCE)
        construction = projected
    elif np.sum(np.abs(coefficients)) <= 1.0 + PREFIX_TOLERANCE:
        branch = Theorem3Branch.FEASIBLE
        construction = coefficients
    elif rho >= 1.0 / 3.0:
        branch = Theorem3Branch.ZERO
        construction = np.zeros_like(coefficients)
    else:
        # |a_T| <= 1 for [-1, 1]-valued f; clip the rounding
        lifted = RademacherSum(np.clip(coefficients, -1.0, 1.0))
        a = lifted.a
        tau_value = tau(lifted)
        threshold = 2.0 / math.log(constants.base) * math.log(1.0 / rho)
        kept = np.zeros_like(a)
        if tau_value >= threshold or tau_value >= lifted.n:
            branch = Theorem3Branch.TRUNCATE
            cut = min(int(math.floor(threshold)), lifted.n)
            kept[:cut] = a[:cut]
            branch_bound = 4.0 * _norm_t_upper(rho, threshold) / math.sqrt(threshold)
        else:
            branch = Theorem3Branch.BOUNDARY
            kept[:tau_value] = a[:tau_value]
            kept[tau_value] = 1.0 - float(np.sum(a[:tau_value]))
            branch_bound = math.sqrt(20.0) * rho ** (1.0 - math.log(2.0) / math.log(constants.base))
        branch_distance = math.sqrt(float(np.sum((a - kept) ** 2)))
        if _excess_of_projection(coefficients) <= rho ** 2 + tolerance:
            branch_holds = branch_distance <= branch_bound + BRANCH_TOLERANCE
        construction = lifted.unsort(kept)

    construction = unlift(AffineFunction(0.0, construction))
    construction_dist = math.sqrt(rho ** 2 + float(np.sum((coefficients - construction.coefficients()) ** 2)))
    holds = (dist <= bound + tolerance
             and construction_dist >= dist - tolerance
             and construction.is_bounded
             and branch_holds)
    return Theorem3Witness(rho=rho,
                           dist=dist,
                           bound=bound,
                           construction=construction,
                           construction_dist=construction_dist,
                           branch=branch,
                           tau=tau_value,
                           threshold=threshold,
                           branch_distance=branch_distance,
                           branch_bound=branch_bound,
                           branch_holds=branch_holds,
                           vacuous=bound >= 1.0,
                           holds=holds)


def jow_example(n, s):
    """ Returns phi(g) for g(x) = s^-1 n^-1/2 sum_i x_i on the uniform cube.

    Raises:
        NonPositiveScaleError: s <= 0.
    """
    checks.CoordinateCount(n, MAX_COORDINATES)
    checks.PositiveScale(s)
    total = 2.0 * subset_sizes(n) - n
    return TableFunction(make_bias(0.5), n, phi(total / (s * math.sqrt(n))))
