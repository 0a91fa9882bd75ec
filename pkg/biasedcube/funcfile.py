"""
Text files holding a single function on the biased cube.

The first non-comment line is the header ``n=<int> alpha=<decimal>``. The
body is one of

* ``bool:<hex>``, the truth table as a hexadecimal integer whose bit m is
  set iff f(m) = +1 (most significant digit = highest index),
* ``real:`` followed by the 2^n values in ascending index order,
* ``spec:`` followed by the 2^n Walsh-Fourier coefficients,
* ``rademacher:`` followed by the coefficients a_1 .. a_n of a Rademacher
  sum and optionally ``constant=<decimal>`` (symmetric cube only).

A file without a header is a bare Rademacher sum: its coefficients
separated by whitespace, unsorted, optionally followed by
``constant=<decimal>``. n is the number of coefficients.

Values may continue over several lines. Lines starting with '#' and blank
lines are ignored.
"""
import os
from enum import Enum

import numpy as np

from .affine import AffineFunction, RademacherSum
from .cube import TableFunction, make_bias
from .fourier import Spectrum, transform, inverse_transform
from .preconditions import MAX_COORDINATES
from .status import MalformedFunctionFileError


class ValueKind(Enum):
    """ The body format of a function file. """
    Bool = "bool"
    Real = "real"
    Spec = "spec"
    Rademacher = "rademacher"

    def __str__(self):
        return self.value


def _malformed(reason, text):
    raise MalformedFunctionFileError("read_function_file", ["reason", "text"], (reason, text))


def _parse_header(line):
    fields = {}
    for token in line.split():
        key, separator, value = token.partition("=")
        if not separator or key not in ("n", "alpha") or key in fields:
            _malformed("bad header field", token)
        fields[key] = value
    if set(fields) != {"n", "alpha"}:
        _malformed("header needs n= and alpha=", line)
    try:
        n = int(fields["n"])
        alpha = float(fields["alpha"])
    except ValueError:
        _malformed("header values are not numbers", line)
    if not 1 <= n <= MAX_COORDINATES:
        _malformed("n out of range", line)
    return n, alpha


def _parse_numbers(tokens, text):
    try:
        return np.array([float(token) for token in tokens], dtype=np.float64)
    except ValueError:
        _malformed("not a number", text)


class FunctionFile(object):
    """ The parsed contents of a function file.

    Args:
        filepath (str): path of the file, or its contents when
            parse_contents is True.
        parse_contents (bool): treat filepath as the file contents.

    Raises:
        MalformedFunctionFileError: the header or body cannot be parsed.
        AlphaOutOfRangeError: the header's alpha is not in (0, 1/2].
        OSError: the file cannot be read.
    """

    def __init__(self, filepath, parse_contents=False):
        if parse_contents:
            self._filepath = None
            contents = filepath
        else:
            self._filepath = os.path.abspath(filepath)
            with open(self._filepath) as f:
                contents = f.read()

        lines = [line.strip() for line in contents.splitlines()]
        lines = [line for line in lines if line and not line.startswith("#")]
        self._rademacher = None
        self._spectrum = None
        if lines and not lines[0].startswith(("n=", "alpha=")):
            # bare coefficient list: a Rademacher sum on the symmetric cube
            self._kind = ValueKind.Rademacher
            self._bias = make_bias(0.5)
            tokens = " ".join(lines).split()
            self._n = len(tokens) - (1 if tokens[-1].startswith("constant=") else 0)
            if not 1 <= self._n <= MAX_COORDINATES:
                _malformed("expected 1 to %d coefficients" % MAX_COORDINATES, contents)
            self._function = self._parse_rademacher(tokens)
            return
        if len(lines) < 2:
            _malformed("expected a header and a body", contents)
        self._n, alpha = _parse_header(lines[0])
        self._bias = make_bias(alpha)

        kind, separator, rest = lines[1].partition(":")
        if not separator:
            _malformed("body has no kind prefix", lines[1])
        try:
            self._kind = ValueKind(kind.strip())
        except ValueError:
            _malformed("unknown body kind", kind)
        tokens = " ".join([rest] + lines[2:]).split()

        if self._kind is ValueKind.Bool:
            self._function = self._parse_bool(tokens)
        elif self._kind is ValueKind.Rademacher:
            self._function = self._parse_rademacher(tokens)
        else:
            numbers = _parse_numbers(tokens, lines[1])
            if numbers.shape[0] != 1 << self._n:
                _malformed("expected %d values, got %d" % (1 << self._n, numbers.shape[0]), lines[1])
            if self._kind is ValueKind.Spec:
                self._spectrum = Spectrum(self._bias, self._n, numbers)
                self._function = inverse_transform(self._spectrum)
            else:
                self._function = TableFunction(self._bias, self._n, numbers)

    def _parse_bool(self, tokens):
        if len(tokens) != 1:
            _malformed("expected one hexadecimal truth table", " ".join(tokens))
        try:
            truth_table = int(tokens[0], 16)
        except ValueError:
            _malformed("not a hexadecimal number", tokens[0])
        if truth_table < 0 or truth_table >> (1 << self._n):
            _malformed("truth table has more than 2^n bits", tokens[0])
        return TableFunction.from_truth_table(self._bias, self._n, truth_table)

    def _parse_rademacher(self, tokens):
        if not self._bias.is_symmetric:
            _malformed("Rademacher sums live on the symmetric cube", repr(self._bias))
        constant = 0.0
        if tokens and tokens[-1].startswith("constant="):
            constant = _parse_numbers([tokens.pop()[len("constant="):]], "constant")[0]
        coefficients = _parse_numbers(tokens, " ".join(tokens))
        if coefficients.shape[0] != self._n:
            _malformed("expected %d coefficients, got %d" % (self._n, coefficients.shape[0]),
                       " ".join(tokens))
        self._rademacher = RademacherSum(coefficients, constant)
        return AffineFunction(constant, coefficients).to_table()

    @property
    def filepath(self):
        """ Returns the path the file was read from, None for parsed contents. """
        return self._filepath

    @property
    def n(self):
        return self._n

    @property
    def bias(self):
        return self._bias

    @property
    def kind(self):
        return self._kind

    @property
    def function(self):
        """ Returns the TableFunction the file describes.

        For a Rademacher body this is the table of S, which need not be
        [-1, 1]-valued.
        """
        return self._function

    @property
    def spectrum(self):
        """ Returns the Spectrum, transforming the table on first use. """
        if self._spectrum is None:
            self._spectrum = transform(self._function)
        return self._spectrum

    @property
    def rademacher(self):
        """ Returns the RademacherSum of a 'rademacher:' body, otherwise None. """
        return self._rademacher


def read_function_file(filepath, parse_contents=False):
    """ Parses a function file, see FunctionFile. """
    return FunctionFile(filepath, parse_contents)


def read_rademacher_sum(filepath, parse_contents=False):
    """ Parses a Rademacher sum file and returns its RademacherSum.

    Accepts the bare form, one or more lines of whitespace-separated
    coefficients in any order with an optional trailing ``constant=``, as
    well as a headered file with a 'rademacher:' body.

    Raises:
        MalformedFunctionFileError: the file holds no Rademacher sum.
    """
    function_file = FunctionFile(filepath, parse_contents)
    if function_file.rademacher is None:
        _malformed("expected a Rademacher sum", str(function_file.kind))
    return function_file.rademacher


def _header(n, bias):
    return "n=%d alpha=%r" % (n, bias.alpha)


def _numbers(values):
    return " ".join("%.17g" % value for value in values)


def format_table(f):
    """ Returns the file contents for f, as 'bool:' when f is Boolean. """
    if f.is_boolean:
        digits = max(1, (1 << f.n) // 4)
        body = "bool:%0*x" % (digits, f.truth_table())
    else:
        body = "real: " + _numbers(f.values)
    return "%s\n%s\n" % (_header(f.n, f.bias), body)


def format_spectrum(s):
    return "%s\nspec: %s\n" % (_header(s.n, s.bias), _numbers(s.coeffs))


def format_rademacher(S):
    """ Returns the file contents for S with its coefficients in sorted order. """
    body = "rademacher: " + _numbers(S.a)
    if S.constant != 0:
        body += " constant=%.17g" % S.constant
    return "%s\n%s\n" % (_header(S.n, make_bias(0.5)), body)
