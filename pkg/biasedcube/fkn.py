"""
FKN analysis of Boolean functions on the biased cube.

For a Boolean f with spectral tail rho, the witness coordinate k gives the
single-coordinate approximant a_empty + a_{k} x_k, at L_2 distance d from
f. The checks here compare d with 8 sqrt(rho) (valid for every bias) and
with 2 rho (valid once rho ln(e/rho) < c0 alpha).
"""
import math
from collections import namedtuple

import numpy as np

from .cube import TableFunction, coordinate, lp_norm
from .fourier import transform, rho as spectral_rho
from .hypercontract import proof_exponent, htilde_level_bound
from .preconditions import checks, DEFAULT_TOLERANCE

DEFAULT_C0 = 0.01
CONSISTENCY_TOLERANCE = 1e-9
# magnitudes this close to the largest one count as a tie
TIE_TOLERANCE = 1e-12

FknReport = namedtuple("FknReport", ["k",
                                     "a_empty",
                                     "a_k",
                                     "d",
                                     "rho",
                                     "condition_lhs",
                                     "theorem1_holds",
                                     "theorem2_bound_holds"])

HTilde = namedtuple("HTilde", ["function",
                               "norm",
                               "h_norm",
                               "nonzero_probability",
                               "pointwise_holds",
                               "norm_holds",
                               "probability_holds"])

HTildeLevels = namedtuple("HTildeLevels", ["q", "mass", "bound", "holds"])

Theorem1Check = namedtuple("Theorem1Check", ["bound", "holds"])

Theorem2Check = namedtuple("Theorem2Check", ["applicable", "holds", "ratio", "report"])

Concentration = namedtuple("Concentration", ["subset", "leading_weight", "residual", "ratio"])

CounterexampleForms = namedtuple("CounterexampleForms", ["rho",
                                                         "d",
                                                         "displayed_d",
                                                         "lower_bound",
                                                         "lower_bound_holds"])


def sgn(x):
    """ Returns -1 for x < 0 and +1 for x >= 0, so sgn(0) = +1. """
    return -1 if x < 0 else 1


def _sgn_array(values):
    return np.where(values < 0, -1.0, 1.0)


def condition_lhs(rho):
    """ Returns rho ln(e / rho), extended by continuity to 0 at rho = 0. """
    if rho <= 0:
        return 0.0
    return rho * (1.0 - math.log(rho))


def _witness_coordinate(coeffs, n):
    singles = np.abs(coeffs[[1 << i for i in range(n)]])
    largest = singles.max()
    return int(np.flatnonzero(singles >= largest - TIE_TOLERANCE)[0])


def _approximant(f, a_empty, a_k, k):
    return coordinate(f.bias, f.n, k - 1) * a_k + a_empty


def fkn_witness(f, tolerance=DEFAULT_TOLERANCE):
    """ Finds the FKN witness of a Boolean function.

    k is the coordinate maximising |a_{i}|, ties going to the smallest
    index; it minimises d over all single-coordinate choices. d is
    measured in the value domain and the spectral identity
    d^2 = 1 - a_empty^2 - a_{k}^2 is re-checked against it.

    Args:
        f (TableFunction): a {-1, 1}-valued function.
        tolerance (float): slack of the two bound flags.

    Returns:
        FknReport: k is 1-based.

    Raises:
        NotBooleanError: f takes a value other than -1 or +1.
        InternalInconsistencyError: the spectral and direct d^2 disagree
            by more than 1e-9.
    """
    checks.Boolean(f.values)
    spectrum = transform(f)
    coeffs = spectrum.coeffs
    index = _witness_coordinate(coeffs, f.n)
    k = index + 1
    a_empty = float(coeffs[0])
    a_k = float(coeffs[1 << index])
    d = lp_norm(f - _approximant(f, a_empty, a_k, k), 2)
    checks.Consistent(1.0 - a_empty ** 2 - a_k ** 2, d ** 2, CONSISTENCY_TOLERANCE)
    rho = spectral_rho(spectrum)
    return FknReport(k=k,
                     a_empty=a_empty,
                     a_k=a_k,
                     d=d,
                     rho=rho,
                     condition_lhs=condition_lhs(rho),
                     theorem1_holds=d <= 8.0 * math.sqrt(rho) + tolerance,
                     theorem2_bound_holds=d <= 2.0 * rho + tolerance)


def check_theorem1(report, tolerance=DEFAULT_TOLERANCE):
    """ Returns the bound 8 sqrt(rho) and whether d stays below it. """
    bound = 8.0 * math.sqrt(report.rho)
    return Theorem1Check(bound, report.d <= bound + tolerance)


def h_tilde(f, report, tolerance=DEFAULT_TOLERANCE):
    """ Returns h~ = f - sgn(a_empty + a_{k} x_k) with the facts it satisfies.

    h~ is {-2, 0, 2}-valued. Alongside the table the result carries
    ||h~||, ||h|| for h = f - (a_empty + a_{k} x_k) and P(h~ != 0), and
    flags for |h~| <= 2|h| pointwise, ||h~|| <= 2||h|| and
    P(h~ != 0) = ||h~||^2 / 4 <= d^2.
    """
    checks.Boolean(f.values)
    approximant = _approximant(f, report.a_empty, report.a_k, report.k)
    h = f - approximant
    tilde = f.with_values(f.values - _sgn_array(approximant.values))
    tilde_norm = lp_norm(tilde, 2)
    h_norm = lp_norm(h, 2)
    probability = float(np.sum(f.weights[tilde.values != 0]))
    return HTilde(function=tilde,
                  norm=tilde_norm,
                  h_norm=h_norm,
                  nonzero_probability=probability,
                  pointwise_holds=bool(np.all(np.abs(tilde.values)
                                              <= 2.0 * np.abs(h.values) + tolerance)),
                  norm_holds=tilde_norm <= 2.0 * h_norm + tolerance,
                  probability_holds=(abs(probability - tilde_norm ** 2 / 4.0) <= tolerance
                                     and probability <= report.d ** 2 + tolerance))


def check_htilde_levels(f, report, q=None, tolerance=DEFAULT_TOLERANCE):
    """ Checks the hypercontractive bound on the low levels of h~.

    sum_{|T| <= 1} a~_T^2 <= 4 d^(4/q) / c_q^2, where q defaults to the
    exponent the biased FKN argument picks for this d.
    """
    if q is None:
        q = proof_exponent(report.d)
    coeffs = transform(h_tilde(f, report).function).coeffs
    mass = float(coeffs[0] ** 2 + sum(coeffs[1 << i] ** 2 for i in range(f.n)))
    bound = htilde_level_bound(f.bias, report.d, q)
    return HTildeLevels(q, mass, bound, mass <= bound + tolerance)


def check_theorem2(f, c0=DEFAULT_C0, tolerance=DEFAULT_TOLERANCE):
    """ Checks d <= 2 rho on a Boolean function when rho ln(e/rho) < c0 alpha.

    Returns:
        Theorem2Check: applicable tells whether the hypothesis holds;
        holds is d <= 2 rho + tolerance for applicable functions and True
        otherwise; ratio is d / rho, reported as 0 when rho and d are
        both below tolerance and as infinity when only rho is.

    Raises:
        NonPositiveConstantError: c0 <= 0.
    """
    checks.PositiveConstant(c0)
    report = fkn_witness(f, tolerance)
    applicable = report.condition_lhs < c0 * f.bias.alpha
    if report.rho <= tolerance:
        ratio = 0.0 if report.d <= tolerance else math.inf
    else:
        ratio = report.d / report.rho
    holds = report.theorem2_bound_holds or not applicable
    return Theorem2Check(applicable, holds, ratio, report)


def critical_c0(report, bias, tolerance=DEFAULT_TOLERANCE):
    """ Returns the largest c0 under which this function cannot violate d <= 2 rho.

    That is rho ln(e/rho) / alpha when d > 2 rho and infinity otherwise.
    The minimum over a sweep is the empirical maximal feasible c0.
    """
    if report.theorem2_bound_holds:
        return math.inf
    return report.condition_lhs / bias.alpha


def concentration(spectrum, tolerance=DEFAULT_TOLERANCE):
    """ Measures how much level <= 1 weight sits outside the heaviest coefficient.

    B is the subset with |B| <= 1 maximising |a_B| (ties to the empty set,
    then the smallest coordinate). Returns sum_{|T| <= 1, T != B} a_T^2,
    a_B^2 and their ratio to rho^4 ln(2/rho). The ratio is informational.
    """
    candidates = [0] + [1 << i for i in range(spectrum.n)]
    weights = spectrum.coeffs[candidates] ** 2
    leader = int(np.flatnonzero(weights >= weights.max() - TIE_TOLERANCE)[0])
    residual = float(np.sum(weights) - weights[leader])
    rho = spectral_rho(spectrum)
    if rho <= tolerance:
        ratio = 0.0 if residual <= tolerance else math.inf
    else:
        ratio = residual / (rho ** 4 * math.log(2.0 / rho))
    return Concentration(candidates[leader], float(weights[leader]), residual, ratio)


def counterexample(bias):
    """ Returns f(x1, x2) = 2 (beta - sqrt(beta alpha) x1)(beta - sqrt(beta alpha) x2) - 1.

    Each factor is 1 at the low point and 0 at the high point, so f is +1
    when both coordinates are low and -1 elsewhere. The evaluated values are
    snapped to exactly +-1. On the symmetric cube a
    SymmetricCounterexampleWarning is issued.
    """
    checks.AsymmetricCounterexample(bias.alpha)
    root = bias.sqrt_alpha_beta
    x1 = coordinate(bias, 2, 0).values
    x2 = coordinate(bias, 2, 1).values
    values = 2.0 * (bias.beta - root * x1) * (bias.beta - root * x2) - 1.0
    snapped = _sgn_array(values)
    checks.Consistent(float(np.max(np.abs(values - snapped))), 0.0, CONSISTENCY_TOLERANCE)
    return TableFunction(bias, 2, snapped)


def counterexample_closed_forms(bias, tolerance=DEFAULT_TOLERANCE):
    """ Returns the counterexample's closed forms and warns on the displayed d.

    rho = 2 alpha beta and the directly computed d = 2 beta sqrt(alpha),
    from d^2 = a_{2}^2 + a_{12}^2 = 4 alpha beta^2. The commonly displayed
    d = 2 beta^(3/2) alpha^(1/2) omits a_{12}^2; a ClosedFormDiscrepancyWarning
    reports the difference. d >= sqrt(rho / 2) holds under both readings.
    """
    alpha, beta = bias.alpha, bias.beta
    rho = 2.0 * alpha * beta
    d = 2.0 * beta * math.sqrt(alpha)
    displayed = 2.0 * beta ** 1.5 * math.sqrt(alpha)
    checks.ClosedFormAgrees(displayed, d)
    lower_bound = math.sqrt(rho / 2.0)
    return CounterexampleForms(rho=rho,
                               d=d,
                               displayed_d=displayed,
                               lower_bound=lower_bound,
                               lower_bound_holds=min(d, displayed) >= lower_bound - tolerance)
