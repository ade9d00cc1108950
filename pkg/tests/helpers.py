"""Shared oracles for the tests."""

from functools import lru_cache

import sympy

from lsalgebroid.corpus import random_valid_instance


def to_sympy(s):
    """Independent oracle view of a Scalar through its printed form."""
    names = s.base.names
    syms = sympy.symbols(names) if names else ()
    local = dict(zip(names, syms if isinstance(syms, (tuple, list)) else (syms,)))
    return sympy.sympify(str(s).replace("^", "**"), locals=local)


def same(s, expr):
    return sympy.simplify(to_sympy(s) - expr) == 0


@lru_cache(maxsize=None)
def instance(seed):
    return random_valid_instance(seed)
