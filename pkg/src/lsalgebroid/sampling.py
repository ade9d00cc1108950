"""Seeded random Scalars, sections and tensors, plus generic affine functions.

All randomness flows through an explicit ``random.Random`` so that a given
seed always reproduces the same samples.
"""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

GENERIC_PREFIX = "_a"


def rng_for(seed, *salt):
    """Independent deterministic stream for (seed, salt...)."""
    return random.Random(repr((seed,) + tuple(salt)))


def random_scalar(base, rng, degree=2, terms=3, coeff_range=3, variables=None):
    """Random polynomial with small integer coefficients in the base variables."""
    names = list(variables if variables is not None else base.variables)
    monomials = [()]
    for d in range(1, degree + 1):
        monomials.extend(combinations_with_replacement(names, d))
    total = base.zero
    for _ in range(terms):
        mono = rng.choice(monomials)
        c = rng.randint(-coeff_range, coeff_range)
        if c == 0:
            continue
        term = base.const(c)
        for name in mono:
            term = term * base.var(name)
        total = total + term
    return total


def random_nonzero_scalar(base, rng, **kw):
    while True:
        s = random_scalar(base, rng, **kw)
        if not s.is_zero:
            return s


def random_vector(cls, base, rank, rng, degree=2, density=0.7):
    coeffs = []
    for _ in range(rank):
        if rng.random() < density:
            coeffs.append(random_scalar(base, rng, degree=degree, terms=2))
        else:
            coeffs.append(base.zero)
    return cls(coeffs)


def random_tensor(cls, base, rank, degree, rng, poly_degree=2, terms=3):
    """Sparse random element of the given wedge-tensor class."""
    keys = cls.basis_keys(rank, degree)
    chosen = {}
    for _ in range(terms):
        key = rng.choice(keys)
        chosen[key] = random_scalar(base, rng, degree=poly_degree, terms=2)
    return cls(base, rank, degree, chosen)


def generic_affine(base, tag=""):
    """Extend ``base`` by fresh parameters and return (base', f) with
    f = a0 + sum_mu a_mu x_mu, the generic affine function."""
    names = [f"{GENERIC_PREFIX}{tag}0"] + [f"{GENERIC_PREFIX}{tag}{mu + 1}" for mu in range(base.nvars)]
    ext = base.with_parameters(names)
    f = ext.var(names[0])
    for mu, x in enumerate(base.variables):
        f = f + ext.var(names[mu + 1]) * ext.var(x)
    return ext, f
