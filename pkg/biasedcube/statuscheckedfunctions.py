from .status import check_status


class FunctionInfo(object):
    def __init__(self, function, name, argument_names):
        """
        Describes one raw check for StatusCheckedFunctions.

        Args:
            function (callable): returns 0 when its arguments are valid, a
                negative status code for an error and a positive one for a
                warning.
            name (str): attribute under which the checked version is
                exposed, e.g. "Alpha".
            argument_names (list): names of the arguments of 'function',
                e.g. ["alpha"]. They appear in the exception message and in
                ``e.get_args()``.
        """
        self.function = function
        self.name = name
        self.argument_names = argument_names

    def __repr__(self):
        return "FunctionInfo(%s, %r, %r)" % (self.function.__name__, self.name,
                                              self.argument_names)


class StatusCheckedFunctions(object):
    """
    Exposes raw status-returning checks as functions that raise.

    Each FunctionInfo is wrapped with check_status and published both as
    an attribute and through the bracket operator::

        def _norm_order(p):
            return 0 if p >= 1 else NormOrderOutOfRangeError.CODE

        checks = StatusCheckedFunctions([FunctionInfo(_norm_order, "NormOrder", ["p"])])
        checks.NormOrder(2.0)       # returns None
        checks["NormOrder"](0.5)    # raises NormOrderOutOfRangeError

    The operation named in the exception message is the raw function's
    name without its leading underscore.
    """
    def __init__(self, function_infos):
        self._wrapped_functions = {}
        for info in function_infos:
            checked = check_status(info.function.__name__.lstrip("_"),
                                   info.argument_names)(info.function)
            self._wrapped_functions[info.name] = checked
            setattr(self, info.name, checked)

    def __getitem__(self, name):
        return self._wrapped_functions[name]

    def __contains__(self, name):
        return name in self._wrapped_functions

    def names(self):
        """ Returns the sorted names of every wrapped check. """
        return sorted(self._wrapped_functions)
