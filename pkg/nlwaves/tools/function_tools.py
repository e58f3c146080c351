# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import inspect


def count_required_arguments(func):
    i = 0
    sig = inspect.signature(func)
    for param in sig.parameters.values():
        if (param.kind == inspect.Parameter.POSITIONAL_ONLY \
        or param.kind == inspect.Parameter.POSITIONAL_OR_KEYWORD) \
        and param.default == inspect.Parameter.empty:
            i += 1
    return i

def has_variable_length_positional_arguments(func):
    sig = inspect.signature(func)
    for param in sig.parameters.values():
        if param.kind == inspect.Parameter.VAR_POSITIONAL:
            return True
    return False

def assert_callback(func, n_args, name):
    """Check that 'func' is callable with exactly 'n_args' positional
    arguments, as the grid callbacks (A(ξ), K(ξ), N(u), ...) are.
    Raises:
        TypeError: if it is not.
    """
    if not callable(func):
        raise TypeError(f"{name} must be callable, got {type(func).__name__}.")
    try:
        required = count_required_arguments(func)
    except (TypeError, ValueError):
        # Builtins and ufuncs without a signature: trust the caller
        return
    if required > n_args or (required < n_args
                             and not has_variable_length_positional_arguments(func)
                             and _count_positional(func) < n_args):
        raise TypeError(f"{name} must accept {n_args} positional argument(s), "
                      + f"but its signature requires {required}.")

def _count_positional(func):
    sig = inspect.signature(func)
    return sum(1 for param in sig.parameters.values()
               if param.kind in (inspect.Parameter.POSITIONAL_ONLY,
                                 inspect.Parameter.POSITIONAL_OR_KEYWORD))
