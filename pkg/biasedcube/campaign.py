"""
Verification campaigns: sweeps of the package's checks over exhaustive,
random or fixed example families, collected into CSV reports.

Instances are evaluated on a thread pool and their rows are emitted in
instance order, so a report depends only on its CampaignConfig. Random
instances draw from a Philox generator keyed by (seed, instance index).
"""
import csv
import io
import math
import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from enum import Enum

import numpy as np

from . import affine
from .affine import ConstantPair, RademacherSum
from .cube import TableFunction, coordinate, make_bias, subset_sizes
from .fkn import (DEFAULT_C0, TIE_TOLERANCE, check_htilde_levels, check_theorem2,
                  condition_lhs, counterexample, counterexample_closed_forms,
                  critical_c0, h_tilde)
from .fourier import transform_batch
from .hypercontract import HyperParams, verify_hyper, verify_hyper_symmetric, walsh_coefficients
from .preconditions import DEFAULT_TOLERANCE, MAX_COORDINATES, MAX_EXHAUSTIVE_COORDINATES
from .status import InvalidCampaignError

THREADS_ENVIRONMENT_VARIABLE = "BIASED_CUBE_THREADS"
DEFAULT_Q_GRID = (1.0, 1.2, 1.5, 1.8, 2.0)
DEFAULT_T_GRID = (1.5, 2.0, 3.0)
DEFAULT_SCAN_ALPHAS = (0.05, 0.1, 0.25, 0.5)
DEFAULT_SCALES = (1.0, 2.0, 4.0)
HK_EXAMPLES = ((1.0, 1.0),
               (1.0,) * 10,
               (0.5, 0.5, 0.5, 0.5),
               (1.0, 0.5, 0.25, 0.125))
_SEED_MASK = (1 << 64) - 1


class CampaignMode(Enum):
    Exhaustive = "exhaustive"
    Random = "random"
    Example = "example"

    def __str__(self):
        return self.value


class Suite(Enum):
    """ A family of checks a campaign runs. """
    Hyper = "hyper"
    Fkn = "fkn"
    Thm3 = "thm3"
    Hk = "hk"
    Scan = "scan"
    Example = "example"

    def __str__(self):
        return self.value


_ALLOWED_MODES = {
    Suite.Hyper: (CampaignMode.Exhaustive, CampaignMode.Random),
    Suite.Fkn: (CampaignMode.Exhaustive, CampaignMode.Random),
    Suite.Thm3: (CampaignMode.Exhaustive, CampaignMode.Random),
    Suite.Hk: (CampaignMode.Example, CampaignMode.Random),
    Suite.Scan: (CampaignMode.Exhaustive, CampaignMode.Random),
    Suite.Example: (CampaignMode.Example,),
}

_SYMMETRIC_SUITES = (Suite.Thm3, Suite.Hk)

HEADERS = {
    Suite.Hyper: ["instance", "alpha", "n", "q", "cq", "lhs", "rhs", "symmetric_holds", "holds"],
    Suite.Fkn: ["instance", "alpha", "n", "k", "a_empty", "a_k", "rho", "d",
                "theorem1_bound", "theorem1_holds", "condition_lhs", "applicable",
                "theorem2_holds", "ratio", "htilde_holds", "critical_c0"],
    Suite.Thm3: ["instance", "n", "rho", "dist_affine", "dist_bounded", "bound", "vacuous",
                 "branch", "tau", "threshold", "branch_distance", "branch_bound",
                 "truncation_lhs", "truncation_holds", "holds"],
    Suite.Hk: ["instance", "n", "t", "small_ball_prob", "small_ball_holds",
               "tail_lhs", "tail_rhs", "tail_holds", "khinchine_lhs", "khinchine_rhs",
               "khinchine_holds", "moment_prob", "moment_bound", "moment_holds"],
    Suite.Scan: ["alpha", "n", "functions", "applicable", "theorem1_violations",
                 "theorem2_violations", "max_feasible_c0", "worst_theorem1_ratio"],
    Suite.Example: ["example", "alpha", "n", "s", "rho", "d", "displayed_d", "lower_bound",
                    "dist_affine", "dist_bounded", "ratio", "holds"],
}


def _invalid(field, value):
    raise InvalidCampaignError("CampaignConfig", [field], (value,))


def worker_count(environ=None):
    """ Returns the thread count from BIASED_CUBE_THREADS, 0 or unset meaning all CPUs.

    Raises:
        InvalidCampaignError: the variable is not a non-negative integer.
    """
    environ = os.environ if environ is None else environ
    value = environ.get(THREADS_ENVIRONMENT_VARIABLE, "").strip()
    if not value:
        count = 0
    else:
        try:
            count = int(value)
        except ValueError:
            _invalid(THREADS_ENVIRONMENT_VARIABLE, value)
        if count < 0:
            _invalid(THREADS_ENVIRONMENT_VARIABLE, value)
    return count or os.cpu_count() or 1


class CampaignConfig(object):
    """ Everything that determines a campaign's report.

    Args:
        suite (Suite): which checks to run.
        mode (CampaignMode): exhaustive enumeration of the Boolean
            functions on n <= 4 coordinates, random draws or fixed examples.
        n (int): coordinate count.
        alpha (float): bias, defaults to 1/2 for the symmetric-cube suites
            and to 1/4 otherwise.
        q (float): hypercontractivity order, None for the default grid.
        c0 (float): constant c0 of the small-rho FKN hypothesis.
        seed (int): random mode only, 64-bit.
        samples (int): random mode only, number of instances.
        tol (float): slack of every inequality.
        constants (ConstantPair): threshold base and final constant of the
            bounded affine bound.
        example (str): 'counterexample' or 'jow' for the example suite.
        scales (sequence): the s values of the 'jow' example.
        alphas (sequence): the biases swept by the scan suite.
        threads (int): worker count, None to read BIASED_CUBE_THREADS.

    Raises:
        InvalidCampaignError: a field is out of range or does not fit the
            suite and mode.
    """

    def __init__(self, suite, mode, n=2, alpha=None, q=None, c0=DEFAULT_C0, seed=None,
                 samples=0, tol=DEFAULT_TOLERANCE, constants=ConstantPair.LN3,
                 example="counterexample", scales=DEFAULT_SCALES,
                 alphas=DEFAULT_SCAN_ALPHAS, threads=None):
        if not isinstance(suite, Suite):
            _invalid("suite", suite)
        if not isinstance(mode, CampaignMode) or mode not in _ALLOWED_MODES[suite]:
            _invalid("mode", mode)
        if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_COORDINATES:
            _invalid("n", n)
        if mode is CampaignMode.Exhaustive and n > MAX_EXHAUSTIVE_COORDINATES:
            _invalid("n", n)
        if alpha is None:
            alpha = 0.5 if suite in _SYMMETRIC_SUITES or example == "jow" else 0.25
        if not isinstance(alpha, (int, float)) or not 0 < alpha <= 0.5:
            _invalid("alpha", alpha)
        if suite in _SYMMETRIC_SUITES and alpha != 0.5:
            _invalid("alpha", alpha)
        if q is not None and not (isinstance(q, (int, float)) and 1 <= q <= 2):
            _invalid("q", q)
        if not isinstance(c0, (int, float)) or not c0 > 0:
            _invalid("c0", c0)
        if not isinstance(tol, (int, float)) or not tol > 0:
            _invalid("tol", tol)
        if not isinstance(constants, ConstantPair):
            _invalid("constants", constants)
        if mode is CampaignMode.Random:
            if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= _SEED_MASK:
                _invalid("seed", seed)
            if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
                _invalid("samples", samples)
        if suite is Suite.Example and example not in ("counterexample", "jow"):
            _invalid("example", example)
        scales = tuple(float(s) for s in scales)
        if not scales or any(not s > 0 for s in scales):
            _invalid("scales", scales)
        alphas = tuple(float(a) for a in alphas)
        if not alphas or any(not 0 < a <= 0.5 for a in alphas):
            _invalid("alphas", alphas)
        if threads is None:
            threads = worker_count()
        if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
            _invalid("threads", threads)

        self.suite = suite
        self.mode = mode
        self.n = n
        self.alpha = float(alpha)
        self.q = None if q is None else float(q)
        self.c0 = float(c0)
        self.seed = seed
        self.samples = samples
        self.tol = float(tol)
        self.constants = constants
        self.example = example
        self.scales = tuple(sorted(scales))
        self.alphas = alphas
        self.threads = threads

    @property
    def bias(self):
        return make_bias(self.alpha)

    @property
    def q_grid(self):
        return DEFAULT_Q_GRID if self.q is None else (self.q,)

    def __repr__(self):
        return "CampaignConfig(suite=%s, mode=%s, n=%d, alpha=%r)" % (self.suite, self.mode,
                                                                      self.n, self.alpha)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


class Report(object):
    """ The rows and summary of one campaign.

    Rows are OrderedDicts keyed by the suite's fixed header. The summary
    and the notes are written after the rows as '#' lines.
    """

    def __init__(self, suite, header=None):
        self._suite = suite
        self._header = list(HEADERS[suite] if header is None else header)
        self._rows = []
        self.summary = OrderedDict()
        self.notes = []
        self.violations = 0

    @property
    def suite(self):
        return self._suite

    @property
    def header(self):
        return self._header

    @property
    def rows(self):
        return self._rows

    def add_row(self, row):
        if list(row) != self._header:
            raise ValueError("Row columns %s do not match the %s header" % (list(row), self._suite))
        self._rows.append(row)

    def add_note(self, note):
        if note not in self.notes:
            self.notes.append(note)

    @property
    def passed(self):
        return self.violations == 0

    def write_csv(self, stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self._header)
        for row in self._rows:
            writer.writerow([_format_cell(value) for value in row.values()])
        stream.write("# violations=%d\n" % self.violations)
        for key, value in self.summary.items():
            stream.write("# %s=%s\n" % (key, _format_cell(value)))
        for note in self.notes:
            stream.write("# note: %s\n" % note)

    def to_csv(self):
        stream = io.StringIO()
        self.write_csv(stream)
        return stream.getvalue()

    def summary_lines(self):
        """ Returns the human readable summary printed by the CLI. """
        lines = ["%s: %d rows, %d violations" % (self._suite, len(self._rows), self.violations)]
        lines += ["  %s: %s" % (key, _format_cell(value)) for key, value in self.summary.items()]
        lines += ["  note: %s" % note for note in self.notes]
        return lines


def instance_rng(seed, index):
    """ Returns the generator of random instance index, independent of every other index. """
    key = np.array([seed & _SEED_MASK, index & _SEED_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _boolean_table(bias, n, truth_table):
    return TableFunction.from_truth_table(bias, n, truth_table)


def _instances(config, draw):
    """ Yields (instance id, TableFunction) pairs for exhaustive and random modes. """
    bias = config.bias
    size = 1 << config.n
    if config.mode is CampaignMode.Exhaustive:
        for truth_table in range(1 << size):
            yield truth_table, _boolean_table(bias, config.n, truth_table)
    else:
        for index in range(config.samples):
            rng = instance_rng(config.seed, index)
            yield index, TableFunction(bias, config.n, draw(rng, size))


def _boolean_draw(rng, size):
    return np.where(rng.integers(0, 2, size=size) == 1, 1.0, -1.0)


def _bounded_draw(rng, size):
    return rng.uniform(-1.0, 1.0, size=size)


def _evaluate(config, instances, evaluate):
    with ThreadPoolExecutor(max_workers=config.threads) as executor:
        return list(executor.map(evaluate, instances))


def _run_hyper(config, report):
    params = [HyperParams(config.bias, q) for q in config.q_grid]

    def evaluate(instance):
        identifier, f = instance
        rows = []
        walsh = walsh_coefficients(f.values) if f.bias.is_symmetric else None
        for param in params:
            check = verify_hyper(f, param.q, config.tol)
            symmetric = None
            if f.bias.is_symmetric:
                symmetric = verify_hyper_symmetric(f, param.q, config.tol, walsh).holds
            rows.append(OrderedDict([("instance", identifier),
                                     ("alpha", config.alpha),
                                     ("n", config.n),
                                     ("q", param.q),
                                     ("cq", param.cq),
                                     ("lhs", check.lhs),
                                     ("rhs", check.rhs),
                                     ("symmetric_holds", symmetric),
                                     ("holds", check.holds and symmetric is not False)]))
        return rows

    for rows in _evaluate(config, _instances(config, _bounded_draw), evaluate):
        for row in rows:
            report.add_row(row)
            if not row["holds"]:
                report.violations += 1
    report.summary["functions"] = len(report.rows) // len(params)
    report.summary["q_grid"] = " ".join("%g" % q for q in config.q_grid)


def _run_fkn(config, report):
    bias = config.bias

    def evaluate(instance):
        identifier, f = instance
        check = check_theorem2(f, config.c0, config.tol)
        witness = check.report
        tilde = h_tilde(f, witness, config.tol)
        levels = check_htilde_levels(f, witness, tolerance=config.tol)
        htilde_holds = (tilde.pointwise_holds and tilde.norm_holds
                        and tilde.probability_holds and levels.holds)
        return OrderedDict([("instance", identifier),
                            ("alpha", config.alpha),
                            ("n", config.n),
                            ("k", witness.k),
                            ("a_empty", witness.a_empty),
                            ("a_k", witness.a_k),
                            ("rho", witness.rho),
                            ("d", witness.d),
                            ("theorem1_bound", 8.0 * math.sqrt(witness.rho)),
                            ("theorem1_holds", witness.theorem1_holds),
                            ("condition_lhs", witness.condition_lhs),
                            ("applicable", check.applicable),
                            ("theorem2_holds", check.holds),
                            ("ratio", check.ratio),
                            ("htilde_holds", htilde_holds),
                            ("critical_c0", critical_c0(witness, bias, config.tol))])

    applicable = 0
    worst = 0.0
    feasible_c0 = math.inf
    for row in _evaluate(config, _instances(config, _boolean_draw), evaluate):
        report.add_row(row)
        if not (row["theorem1_holds"] and row["theorem2_holds"] and row["htilde_holds"]):
            report.violations += 1
        if row["applicable"]:
            applicable += 1
            worst = max(worst, row["ratio"])
        feasible_c0 = min(feasible_c0, row["critical_c0"])
    report.summary["functions"] = len(report.rows)
    report.summary["applicable"] = applicable
    report.summary["worst_applicable_ratio"] = worst
    report.summary["max_feasible_c0"] = feasible_c0


def _run_thm3(config, report):
    def evaluate(instance):
        identifier, f = instance
        witness = affine.theorem3_witness(f, config.constants, config.tol)
        truncation = affine.check_truncation_bound(f, config.tol)
        return OrderedDict([("instance", identifier),
                            ("n", config.n),
                            ("rho", witness.rho),
                            ("dist_affine", affine.dist_to_affine(f).dist),
                            ("dist_bounded", witness.dist),
                            ("bound", witness.bound),
                            ("vacuous", witness.vacuous),
                            ("branch", str(witness.branch)),
                            ("tau", witness.tau),
                            ("threshold", witness.threshold),
                            ("branch_distance", witness.branch_distance),
                            ("branch_bound", witness.branch_bound),
                            ("truncation_lhs", truncation.lhs),
                            ("truncation_holds", truncation.holds),
                            ("holds", witness.holds and truncation.holds)])

    vacuous = 0
    for row in _evaluate(config, _instances(config, _bounded_draw), evaluate):
        report.add_row(row)
        if not row["holds"]:
            report.violations += 1
        vacuous += row["vacuous"]
    report.summary["functions"] = len(report.rows)
    report.summary["vacuous"] = vacuous
    report.summary["constants"] = str(config.constants)
    if vacuous:
        report.add_note("headline bound %g/sqrt(ln(1/rho)) is vacuous (>= 1) on %d of %d functions"
                        % (config.constants.final_constant, vacuous, len(report.rows)))


def _hk_sums(config):
    if config.mode is CampaignMode.Example:
        for index, coefficients in enumerate(HK_EXAMPLES):
            yield index, RademacherSum(coefficients)
    else:
        for index in range(config.samples):
            rng = instance_rng(config.seed, index)
            yield index, RademacherSum(rng.uniform(0.0, 1.0, size=config.n))


def _run_hk(config, report):
    def evaluate(instance):
        identifier, S = instance
        small_ball = affine.check_hk_small_ball(S)
        rows = []
        for t in DEFAULT_T_GRID:
            tail = affine.check_hk_tail_norm(S, t, config.tol)
            khinchine = affine.khinchine_ratio(S, t, config.tol)
            moment = affine.check_small_ball_moment(S, t, config.tol)
            rows.append(OrderedDict([("instance", identifier),
                                     ("n", S.n),
                                     ("t", t),
                                     ("small_ball_prob", small_ball.prob),
                                     ("small_ball_holds", small_ball.holds),
                                     ("tail_lhs", tail.lhs),
                                     ("tail_rhs", tail.rhs),
                                     ("tail_holds", tail.holds),
                                     ("khinchine_lhs", khinchine.lhs),
                                     ("khinchine_rhs", khinchine.rhs),
                                     ("khinchine_holds", khinchine.holds),
                                     ("moment_prob", moment.lhs),
                                     ("moment_bound", moment.rhs),
                                     ("moment_holds", moment.holds)]))
        return rows

    sums = 0
    for rows in _evaluate(config, _hk_sums(config), evaluate):
        sums += 1
        for row in rows:
            report.add_row(row)
            if not all(row[key] for key in ("small_ball_holds", "tail_holds",
                                             "khinchine_holds", "moment_holds")):
                report.violations += 1
    report.summary["sums"] = sums
    report.summary["t_grid"] = " ".join("%g" % t for t in DEFAULT_T_GRID)


def _scan_tables(config, alpha_index):
    size = 1 << config.n
    if config.mode is CampaignMode.Exhaustive:
        truth_tables = np.arange(1 << size, dtype=np.int64)
        bits = (truth_tables[:, None] >> np.arange(size)) & 1
        return np.where(bits == 1, 1.0, -1.0)
    # each alpha gets its own block of instance indices
    start = alpha_index * config.samples
    return np.array([_boolean_draw(instance_rng(config.seed, start + index), size)
                     for index in range(config.samples)])


def scan_alpha(values, bias, c0, tol=DEFAULT_TOLERANCE):
    """ Runs both FKN checks on every row of a (rows, 2^n) array of Boolean tables.

    The spectra come from one batched butterfly and d is measured in the
    value domain, as in fkn_witness.

    Returns:
        OrderedDict: counts, the minimal critical c0 and the largest d / (8 sqrt(rho)).
    """
    n = values.shape[-1].bit_length() - 1
    coeffs = transform_batch(values, bias)
    sizes = subset_sizes(n)
    rho = np.sqrt(np.sum(coeffs[:, sizes > 1] ** 2, axis=1))
    singles = np.abs(coeffs[:, [1 << i for i in range(n)]])
    k = np.argmax(singles >= singles.max(axis=1, keepdims=True) - TIE_TOLERANCE, axis=1)
    coordinates = np.array([coordinate(bias, n, i).values for i in range(n)])
    a_empty = coeffs[:, 0]
    a_k = coeffs[np.arange(values.shape[0]), 1 << k]
    approximant = a_empty[:, None] + a_k[:, None] * coordinates[k]
    weights = TableFunction(bias, n, values[0]).weights
    d = np.sqrt(np.sum(weights * (values - approximant) ** 2, axis=1))
    lhs = np.array([condition_lhs(r) for r in rho])
    applicable = lhs < c0 * bias.alpha
    theorem1_violations = d > 8.0 * np.sqrt(rho) + tol
    exceeds = d > 2.0 * rho + tol
    critical = np.where(exceeds, lhs / bias.alpha, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        theorem1_ratio = np.where(rho > 0, d / (8.0 * np.sqrt(rho)), 0.0)
    return OrderedDict([("functions", int(values.shape[0])),
                        ("applicable", int(np.sum(applicable))),
                        ("theorem1_violations", int(np.sum(theorem1_violations))),
                        ("theorem2_violations", int(np.sum(applicable & exceeds))),
                        ("max_feasible_c0", float(np.min(critical))),
                        ("worst_theorem1_ratio", float(np.max(theorem1_ratio)))])


def _run_scan(config, report):
    def evaluate(indexed_alpha):
        alpha_index, alpha = indexed_alpha
        counts = scan_alpha(_scan_tables(config, alpha_index), make_bias(alpha), config.c0, config.tol)
        row = OrderedDict([("alpha", alpha), ("n", config.n)])
        row.update(counts)
        return row

    for row in _evaluate(config, enumerate(config.alphas), evaluate):
        report.add_row(row)
        report.violations += row["theorem1_violations"] + row["theorem2_violations"]
    report.summary["alphas"] = len(report.rows)
    report.summary["c0"] = config.c0


def _run_counterexample(config, report):
    bias = config.bias
    f = counterexample(bias)
    witness = check_theorem2(f, config.c0, config.tol).report
    forms = counterexample_closed_forms(bias, config.tol)
    holds = (f.is_boolean
             and abs(witness.rho - forms.rho) <= 1e-12
             and witness.d >= forms.lower_bound - config.tol)
    report.add_row(OrderedDict([("example", "counterexample"),
                                ("alpha", config.alpha),
                                ("n", f.n),
                                ("s", None),
                                ("rho", witness.rho),
                                ("d", witness.d),
                                ("displayed_d", forms.displayed_d),
                                ("lower_bound", forms.lower_bound),
                                ("dist_affine", None),
                                ("dist_bounded", None),
                                ("ratio", witness.d / math.sqrt(witness.rho)),
                                ("holds", holds)]))
    report.violations += not holds
    if forms.displayed_d != forms.d:
        report.add_note("displayed closed form d = 2 beta^(3/2) alpha^(1/2) = %.17g differs from "
                        "the computed d = 2 beta alpha^(1/2) = %.17g" % (forms.displayed_d, forms.d))


def _run_jow(config, report):
    def evaluate(s):
        f = affine.jow_example(config.n, s)
        dist_affine = affine.dist_to_affine(f).dist
        dist_bounded = affine.dist_to_bounded_affine(f).dist
        ratio = dist_affine / dist_bounded if dist_bounded > config.tol else 0.0
        return OrderedDict([("example", "jow"),
                            ("alpha", 0.5),
                            ("n", config.n),
                            ("s", s),
                            ("rho", dist_affine),
                            ("d", None),
                            ("displayed_d", None),
                            ("lower_bound", None),
                            ("dist_affine", dist_affine),
                            ("dist_bounded", dist_bounded),
                            ("ratio", ratio),
                            ("holds", True)])

    rows = _evaluate(config, config.scales, evaluate)
    trend = True
    for previous, row in zip([None] + rows[:-1], rows):
        if previous is not None:
            trend = (trend
                     and row["dist_affine"] <= previous["dist_affine"] + config.tol
                     and row["dist_bounded"] <= previous["dist_bounded"] + config.tol)
        row["holds"] = trend
        report.add_row(row)
    report.violations += not trend
    report.summary["trend_holds"] = trend
    if rows[-1]["dist_bounded"] <= config.tol:
        report.add_note("at s = %g no value of g leaves [-1, 1], so both distances vanish"
                        % rows[-1]["s"])


_SUITES = {
    Suite.Hyper: _run_hyper,
    Suite.Fkn: _run_fkn,
    Suite.Thm3: _run_thm3,
    Suite.Hk: _run_hk,
    Suite.Scan: _run_scan,
}


def run_campaign(config):
    """ Runs every check of config.suite and returns the Report.

    Identical configs give identical reports regardless of the thread count.
    """
    report = Report(config.suite)
    if config.suite is Suite.Example:
        if config.example == "jow":
            _run_jow(config, report)
        else:
            _run_counterexample(config, report)
    else:
        _SUITES[config.suite](config, report)
    return report
