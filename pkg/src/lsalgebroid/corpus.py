"""Named example structures and seeded generators of valid instances."""

from __future__ import annotations

from . import linalg
from .algebroid import LEFT_SYMMETRIC, AlgebroidStructure, anchor_of, check_left_symmetric, multiply
from .bialgebroid import SymTensor, s_bracket
from .errors import InvalidStructure
from .sampling import rng_for
from .scalar import Base
from .tensors import Section


def tangent(variables=("x",), christoffel=None):
    """T_nabla R^n: frame d/dx_i, products Gamma_ij^k (zero by default), identity anchor."""
    base = Base(tuple(variables))
    n = base.nvars
    anchor = {i: {v: 1} for i, v in enumerate(base.variables)}
    return AlgebroidStructure.from_table(LEFT_SYMMETRIC, base, n, christoffel or {}, anchor)


def point_algebra(rank, products, variables=()):
    """Constant structure with zero anchor over the given base variables."""
    return AlgebroidStructure.from_table(LEFT_SYMMETRIC, Base(tuple(variables)), rank, products)


def abelian(rank=2, variables=()):
    return AlgebroidStructure.abelian(Base(tuple(variables)), rank)


def idempotent_point(variables=()):
    """Rank 2 over a point, e1 . e1 = e1 and nothing else."""
    return point_algebra(2, {(0, 0): {0: 1}}, variables)


def direct_sum(a, b):
    """Product of two structures over the same base."""
    if a.base.names != b.base.names:
        base = a.base.union(b.base)
        a, b = a.over(base), b.over(base)
    r, s = a.rank, b.rank
    n = r + s
    zero = a.base.zero
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, j, k, v in a.entries:
        c[i][j][k] = v
    for i, j, k, v in b.entries:
        c[r + i][r + j][r + k] = v
    return AlgebroidStructure(LEFT_SYMMETRIC, a.base, c, list(a.anchor) + list(b.anchor))


def change_frame(alg, P):
    """Rewrite ``alg`` in the frame e'_i = sum_a P[i][a] e_a (P invertible)."""
    r = alg.rank
    rows = [[alg.base.scalar(v) for v in row] for row in P]
    Pinv = linalg.inverse(rows)
    new = [Section(row) for row in rows]

    def to_new(v):
        # v = sum_a v_a e_a = sum_k w_k e'_k with w = v P^{-1}
        return [
            sum((v.coeffs[a] * Pinv[a][k] for a in range(r)), alg.base.zero) for k in range(r)
        ]

    c = [[to_new(multiply(alg, new[i], new[j])) for j in range(r)] for i in range(r)]
    anchor = [anchor_of(alg, new[i]) for i in range(r)]
    return AlgebroidStructure(alg.kind, alg.base, c, anchor, alg.dual, alg.labels)


def _random_constant_table(rng, rank, density, values=(-1, 1, 2)):
    table = {}
    for i in range(rank):
        for j in range(rank):
            for k in range(rank):
                if rng.random() < density:
                    table.setdefault((i, j), {})[k] = rng.choice(values)
    return table


def search_point_algebras(dim, density=0.3, count=5, seed=0, variables=(), max_tries=20000):
    """Random sparse constant tables that pass the left-symmetry check.

    Deterministic under ``seed``; duplicates are skipped.
    """
    rng = rng_for(seed, "point-search", dim, density)
    found, seen = [], set()
    for _ in range(max_tries):
        if len(found) >= count:
            break
        table = _random_constant_table(rng, dim, density)
        key = tuple(sorted((ij, tuple(sorted(row.items()))) for ij, row in table.items()))
        if key in seen:
            continue
        seen.add(key)
        alg = point_algebra(dim, table, variables)
        if check_left_symmetric(alg):
            found.append(alg)
    return found


def random_symmetric(base, r, rng, values=(-1, 0, 1, 2), linear=False):
    """Random symmetric matrix; with ``linear`` entries may pick up a base variable."""
    m = [[base.zero] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            v = base.const(rng.choice(values))
            if linear and base.variables and rng.random() < 0.3:
                v = v + base.var(rng.choice(base.variables))
            m[i][j] = m[j][i] = v
    return SymTensor(m)


def random_solution_H(alg, rng, values=(-1, 0, 1, 2), tries=200):
    """A random constant symmetric H with [[H, H]] = 0, or None."""
    for _ in range(tries):
        H = random_symmetric(alg.base, alg.rank, rng, values)
        if s_bracket(alg, H).is_zero:
            return H
    return None


def _templates(base):
    x = base.variables
    flat = AlgebroidStructure.from_table(
        LEFT_SYMMETRIC, base, 2, {(0, 0): {0: 1}}, {i: {v: 1} for i, v in enumerate(x)}
    )
    t2 = tangent(x)
    one = point_algebra(1, {(0, 0): {0: 1}}, x)
    out = [t2, flat, direct_sum(t2, one)]
    out.extend(search_point_algebras(2, 0.3, 3, seed=11, variables=x))
    out.extend(search_point_algebras(3, 0.15, 3, seed=13, variables=x))
    return out


def random_valid_instance(seed, variables=("x1", "x2"), max_degree=2, tries=200):
    """A valid structure in a random polynomial frame; coefficients of degree <= max_degree.

    Starts from a known valid template (flat tangent structures, their sums
    with point algebras, searched point algebras) and applies a unipotent
    frame change with affine entries.  The result is re-verified.
    """
    base = Base(tuple(variables))
    templates = _templates(base)
    rng = rng_for(seed, "random-instance")
    for _ in range(tries):
        alg = rng.choice(templates)
        r = alg.rank
        P = [[base.one if i == j else base.zero for j in range(r)] for i in range(r)]
        for _ in range(rng.randint(1, 2)):
            i, j = rng.sample(range(r), 2)
            lo, hi = min(i, j), max(i, j)
            entry = base.const(rng.choice((-1, 1, 2)))
            entry = entry * base.var(rng.choice(base.variables)) + base.const(rng.randint(-1, 1))
            P[lo][hi] = P[lo][hi] + entry
        new = change_frame(alg, P)
        degree = max(
            [c.total_degree for _, _, _, c in new.entries]
            + [c.total_degree for v in new.anchor for c in v.coeffs]
            + [0]
        )
        if degree > max_degree or not all(c.is_polynomial for _, _, _, c in new.entries):
            continue
        if not check_left_symmetric(new):
            raise InvalidStructure("frame change broke left-symmetry; this is a bug")
        return new
    raise InvalidStructure(f"no instance within degree {max_degree} after {tries} tries")


def standard_corpus():
    """Named instances used by the identity and acceptance suites."""
    return {
        "tangent-R1": tangent(("x",)),
        "tangent-R2": tangent(("x1", "x2")),
        "abelian-point": abelian(2),
        "idempotent-point": idempotent_point(),
    }
