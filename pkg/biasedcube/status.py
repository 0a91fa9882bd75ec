"""
Status exceptions raised when a biasedcube precondition check fails.

Every check returns an integer status: 0 for success, a negative code for
an error and a positive code for a warning. check_status() turns that
status into an exception or a warning. The classes are generated from
the 'error_codes' table at the bottom of this module, one
``<Name>Error`` and one ``<Name>Warning`` per entry.

    >>> @check_status('frob', ['alpha'])
    ... def frob(alpha):
    ...     return -1001
    ...
    >>> try:
    ...     frob(0.75)
    ... except AlphaOutOfRangeError as e:
    ...     print(e)  # doctest: +NORMALIZE_WHITESPACE
    Error: AlphaOutOfRange (-1001) when calling 'frob' with arguments:
        alpha: 0.75

A positive status is reported through the warnings module instead:

    >>> @check_status('frob', ['alpha'])
    ... def frob(alpha):
    ...     return 1020
    ...
    >>> with warnings.catch_warnings(record=True) as w:
    ...     frob(0.5)
    ...     print(w[0].message)  # doctest: +NORMALIZE_WHITESPACE
    Warning: SymmetricCounterexample (1020) when calling 'frob' with arguments:
        alpha: 0.5
"""
import functools
import warnings
from collections import OrderedDict


def _report(status, function_name, argument_names, args):
    """ Raises or warns the Status subclass registered for a non-zero status. """
    if status == 0:
        return
    status_class = codes_to_exception_classes.get(status)
    if status_class is None:
        fallback = UnknownError if status < 0 else UnknownWarning
        exception = fallback(status, function_name, argument_names, args)
    else:
        exception = status_class(function_name, argument_names, args)
    if status < 0:
        raise exception
    # caller of the checked function, past internal() and this helper
    warnings.warn(exception, stacklevel=4)


def check_status(function_name, argument_names):
    """
    Decorator factory for precondition checks.

    The wrapped function must return a status code. A non-zero status is
    turned into the matching ErrorStatus (raised) or WarningStatus (warned),
    carrying function_name and the checked arguments under argument_names
    so that handlers can use ``e.get_args()["alpha"]``.
    """
    def decorator(function):
        @functools.wraps(function)
        def internal(*args):
            if len(args) != len(argument_names):
                raise TypeError("%s takes exactly %u arguments (%u given)"
                                % (function_name, len(argument_names), len(args)))
            _report(function(*args), function_name, argument_names, args)
        return internal
    return decorator


class Status(Exception):
    def __init__(self, code, code_string, function_name, argument_names,
                 function_args):
        """ Base exception class for a failed precondition check.

        Args:
            code (int): e.g. -1001
            code_string (str): e.g. 'AlphaOutOfRange'
            function_name (str): the operation that ran the check,
                e.g. 'make_bias'
            argument_names (list): names of the checked values, in the
                order of function_args, e.g. ["alpha"]
            function_args (tuple): the checked values, e.g. (0.75,)
        """
        self._code = code
        self._code_string = code_string
        self._function_name = function_name
        self._args = OrderedDict(zip(argument_names, function_args))
        super(Status, self).__init__(code, code_string, function_name,
                                     list(self._args.items()))

    def get_code(self):
        return self._code

    def get_code_string(self):
        return self._code_string

    def get_function_name(self):
        return self._function_name

    def get_args(self):
        """ Returns a dictionary of the checked argument names to their values. """
        return dict(self._args)

    @staticmethod
    def _describe(value):
        if isinstance(value, str):
            return "'%s'" % value
        shape = getattr(value, "shape", ())
        if shape:
            return "array of shape %s" % (tuple(shape),)
        return repr(value)

    def __str__(self):
        """
        e.g.

        .. code-block:: python

            Error: NormOrderOutOfRange (-1004) when calling 'lp_norm' with arguments:
                p: 0.5
        """
        lines = ["%s: %s (%d) when calling '%s' with arguments:"
                 % ("Error" if self._code < 0 else "Warning",
                    self._code_string, self._code, self._function_name)]
        lines.extend("\t%s: %s" % (name, self._describe(value))
                     for name, value in self._args.items())
        return "\n".join(lines)


class WarningStatus(Status, RuntimeWarning):
    """ Base class of every warning status (code > 0). """


class ErrorStatus(Status, ValueError):
    """ Base class of every error status (code < 0).

    Every domain, shape and usage error of the package derives from it.
    """


class UnknownWarning(WarningStatus):
    def __init__(self, code, function_name, argument_names, function_args):
        super(UnknownWarning, self).__init__(code, "Unknown code", function_name,
                                             argument_names, function_args)


class UnknownError(ErrorStatus):
    def __init__(self, code, function_name, argument_names, function_args):
        super(UnknownError, self).__init__(code, "Unknown code", function_name,
                                           argument_names, function_args)


def _status_class(base, code, code_string):
    suffix = "Error" if base is ErrorStatus else "Warning"

    def __init__(self, function_name, argument_names, function_args):
        base.__init__(self, code, code_string, function_name, argument_names, function_args)

    return type(code_string + suffix, (base,), {"__init__": __init__, "CODE": code})


# Each entry becomes <Name>Error with the negative code and <Name>Warning
# with the positive one.
error_codes = [
    (-1001, "AlphaOutOfRange"),
    (-1002, "CoordinateCountOutOfRange"),
    (-1003, "TableLengthMismatch"),
    (-1004, "NormOrderOutOfRange"),
    (-1005, "BiasMismatch"),
    (-1006, "LevelOutOfRange"),
    (-1007, "HyperOrderOutOfRange"),
    (-1008, "NotBoolean"),
    (-1009, "NonPositiveConstant"),
    (-1010, "NonPositiveRadius"),
    (-1011, "NotSymmetric"),
    (-1012, "ValuesOutOfRange"),
    (-1013, "ZeroRademacherSum"),
    (-1014, "MomentOrderOutOfRange"),
    (-1015, "LeadingCoefficientTooLarge"),
    (-1016, "NonPositiveScale"),
    (-1017, "InternalInconsistency"),
    (-1018, "MalformedFunctionFile"),
    (-1019, "InvalidCampaign"),
    (-1020, "SymmetricCounterexample"),
    (-1021, "ClosedFormDiscrepancy"),
]

codes_to_exception_classes = {}
for _code, _code_string in error_codes:
    for _base, _signed in ((ErrorStatus, _code), (WarningStatus, -_code)):
        _cls = _status_class(_base, _signed, _code_string)
        codes_to_exception_classes[_signed] = _cls
        globals()[_cls.__name__] = _cls
del _code, _code_string, _base, _signed, _cls
