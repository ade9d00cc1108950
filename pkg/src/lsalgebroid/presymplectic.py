"""Pre-symplectic algebroids on E = A + A* and their Dirac structures.

Sections of E are :class:`BigSection` objects of length 2r in the frame
(e_1..e_r, eps^1..eps^r).  The skew form is stored as a 2r x 2r matrix
``omega[a][b] = (b_a, b_b)_-`` and the product is evaluated by a closed
formula that depends on where the structure came from:

* ``"bialgebroid"``: the double of a pair (A, A*),
* ``"symplectic"``: a symplectic Lie algebroid (L, omega),
* ``"explicit"``: a table of frame products, extended to function
  coefficients by

      (f u) * v = f (u * v) - 1/2 (u, v)_- D f
      u * (g v) = g (u * v) + rho(u)(g) v + 1/2 (u, v)_- D g

  which is what the symplectic formula gives for any frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .algebroid import (
    LEFT_SYMMETRIC,
    LIE,
    AlgebroidStructure,
    bracket,
    check_left_symmetric,
    check_lie_algebroid,
    differential,
    dual_apply,
    dual_lie_derivative,
    dual_right,
    multiply,
)
from .bialgebroid import (
    BialgebroidCandidate,
    anchor_compat_defect,
    check_bialgebroid,
    cond1_defect,
    cond2_defect,
    first_nonzero,
    s_bracket,
)
from .calculus import coboundary_lsa, is_2cocycle, is_alternating
from .errors import Degenerate, InvalidStructure, NotAlternating, NotCocycle, RankDeficient, ShapeMismatch
from .report import Report
from .sampling import generic_affine, random_vector, rng_for
from .scalar import VectorField
from .tensors import Covector, FormTensor, Section, pair

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)

BIALGEBROID = "bialgebroid"
SYMPLECTIC = "symplectic"
EXPLICIT = "explicit"
SOURCES = (BIALGEBROID, SYMPLECTIC, EXPLICIT)


class BigSection(Section):
    """Section of A + A*: first r coefficients on e_i, last r on eps^i."""

    __slots__ = ()

    def __init__(self, coeffs):
        super().__init__(coeffs)
        if len(self.coeffs) % 2:
            raise ShapeMismatch("sections of A + A* have even length")

    @classmethod
    def from_parts(cls, x, xi):
        if len(x.coeffs) != len(xi.coeffs):
            raise ShapeMismatch("A and A* parts must have the same rank")
        return cls(tuple(x.coeffs) + tuple(xi.coeffs))

    @property
    def half(self):
        return len(self.coeffs) // 2

    def parts(self):
        r = self.half
        return Section(self.coeffs[:r]), Covector(self.coeffs[r:])

    def label(self, i):
        r = self.half
        return f"e{i + 1}" if i < r else f"ε{i - r + 1}"


def _labels(r):
    return tuple(f"e{i + 1}" for i in range(r)) + tuple(f"ε{i + 1}" for i in range(r))


def standard_omega(base, r):
    """(x + xi, y + eta)_- = <xi, y> - <eta, x> as a matrix."""
    n = 2 * r
    m = [[base.zero] * n for _ in range(n)]
    for i in range(r):
        m[i][r + i] = -base.one
        m[r + i][i] = base.one
    return tuple(tuple(row) for row in m)


def _form_matrix(omega):
    n = omega.rank
    return tuple(tuple(omega.component((a,), b) for b in range(n)) for a in range(n))


def _matrix_form(base, matrix):
    n = len(matrix)
    terms = {((a,), b): matrix[a][b] for a in range(n) for b in range(n) if not matrix[a][b].is_zero}
    return FormTensor(base, n, 1, terms)


@dataclass(frozen=True, eq=False)
class PreSymplecticStructure:
    """(E, star, rho, (.,.)_-) with E of rank 2r.

    ``data`` is a :class:`BialgebroidCandidate`, a pair ``(L, omega)``, or a
    table ``products[a][b]`` of BigSections.  ``d_weight`` is the coefficient
    of the symmetric-pairing correction in the double; it is 1/2 in every
    genuine structure and only changes for corruption experiments.
    """

    source: str
    base: object
    data: object
    omega: tuple
    anchor: tuple
    labels: tuple = ()
    d_weight: Fraction = field(default=HALF)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        m = tuple(tuple(row) for row in self.omega)
        object.__setattr__(self, "omega", m)
        object.__setattr__(self, "anchor", tuple(self.anchor))
        n = len(m)
        if n == 0 or n % 2 or any(len(row) != n for row in m):
            raise ShapeMismatch("the skew form must be a nonempty 2r x 2r matrix")
        if len(self.anchor) != n:
            raise ShapeMismatch(f"need {n} anchor vector fields")
        for a in range(n):
            for b in range(a, n):
                if m[a][b] != -m[b][a]:
                    raise NotAlternating(f"(.,.)_- is not skew at ({a + 1}, {b + 1})")
        if linalg.det([list(row) for row in m]).is_zero:
            raise Degenerate("(.,.)_- is degenerate")
        if not self.labels:
            object.__setattr__(self, "labels", _labels(n // 2))

    # -- constructors -----------------------------------------------------------
    @classmethod
    def from_bialgebroid(cls, cand, d_weight=HALF):
        r, base = cand.rank, cand.base
        return cls(BIALGEBROID, base, cand, standard_omega(base, r),
                   tuple(cand.A.anchor) + tuple(cand.Astar.anchor), d_weight=Fraction(d_weight))

    @classmethod
    def from_lie(cls, lie, omega):
        return cls(SYMPLECTIC, lie.base, (lie, omega), _form_matrix(omega), lie.anchor,
                   tuple(lie.label(i) for i in range(lie.rank)))

    @classmethod
    def explicit(cls, base, products, anchor, omega, labels=()):
        """``products[a][b]`` are coefficient lists of b_a * b_b."""
        n = len(omega)
        table = tuple(tuple(BigSection([base.scalar(c) for c in products[a][b]]) for b in range(n))
                      for a in range(n))
        m = [[base.scalar(v) for v in row] for row in omega]
        return cls(EXPLICIT, base, table, m, anchor, labels)

    def over(self, base):
        if base.names == self.base.names:
            return self
        lift_m = [[v.lift(base) for v in row] for row in self.omega]
        anchor = [VectorField(base, tuple(c.lift(base) for c in v.coeffs)) for v in self.anchor]
        if self.source == BIALGEBROID:
            data = self.data.over(base)
        elif self.source == SYMPLECTIC:
            lie, omega = self.data
            data = (lie.over(base), _matrix_form(base, lift_m))
        else:
            data = tuple(tuple(BigSection([c.lift(base) for c in v.coeffs]) for v in row) for row in self.data)
        return PreSymplecticStructure(self.source, base, data, lift_m, anchor, self.labels, self.d_weight)

    # -- bookkeeping --------------------------------------------------------------
    @property
    def size(self):
        return len(self.omega)

    @property
    def rank(self):
        """r, the rank of each half."""
        return len(self.omega) // 2

    def label(self, a):
        return self.labels[a]

    def basis(self, a):
        return BigSection.basis(self.base, self.size, a)

    def zero(self):
        return BigSection.zero(self.base, self.size)

    def section(self, coeffs):
        return BigSection([self.base.scalar(c) for c in coeffs])

    @cached_property
    def _omega_t_inverse(self):
        return linalg.inverse(linalg.transpose([list(r) for r in self.omega]))

    def __eq__(self, other):
        if not isinstance(other, PreSymplecticStructure):
            return NotImplemented
        n = self.size
        if n != other.size or self.base.variables != other.base.variables:
            return False
        if any(a != b for r, s in zip(self.omega, other.omega) for a, b in zip(r, s)):
            return False
        if any(a != b for a, b in zip(self.anchor, other.anchor)):
            return False
        return all(star(self, self.basis(a), self.basis(b)) == star(other, other.basis(a), other.basis(b))
                   for a in range(n) for b in range(n))

    __hash__ = object.__hash__


def _check(E, *sections):
    for u in sections:
        if len(u.coeffs) != E.size:
            raise ShapeMismatch(f"section of length {len(u.coeffs)} for E of rank {E.size}")


def _big(u):
    return u if isinstance(u, BigSection) else BigSection(u.coeffs)


def skew_pairing(E, u, v):
    """(u, v)_-."""
    _check(E, u, v)
    total = E.base.zero
    for a, ua in enumerate(u.coeffs):
        if ua.is_zero:
            continue
        row = E.omega[a]
        for b, vb in enumerate(v.coeffs):
            if vb.is_zero or row[b].is_zero:
                continue
            total = total + ua * row[b] * vb
    return total


def sym_pairing(u, v):
    """(x + xi, y + eta)_+ = <xi, y> + <eta, x>."""
    x, xi = _big(u).parts()
    y, eta = _big(v).parts()
    return pair(xi, y) + pair(eta, x)


def anchor_act(E, u, f):
    """rho(u)(f)."""
    _check(E, u)
    total = f.base.zero
    for ua, v in zip(u.coeffs, E.anchor):
        if not ua.is_zero and not v.is_zero:
            total = total + ua * v(f)
    return total


def rho(E, u):
    """rho(u) as a vector field."""
    total = VectorField.zero(E.base)
    for ua, v in zip(u.coeffs, E.anchor):
        if not ua.is_zero and not v.is_zero:
            total = total + v.scale(ua)
    return total


def d_operator(E, f):
    """D f, defined by (D f, e)_- = rho(e)(f)."""
    f = E.base.scalar(f)
    if E.source == BIALGEBROID:
        cand = E.data
        return BigSection.from_parts(-differential(cand.Astar, f), differential(cand.A, f))
    rhs = [v(f) for v in E.anchor]
    inv = E._omega_t_inverse
    out = []
    for a in range(E.size):
        acc = E.base.zero
        for b, c in enumerate(rhs):
            if not c.is_zero and not inv[a][b].is_zero:
                acc = acc + inv[a][b] * c
        out.append(acc)
    return BigSection(out)


def omega_sharp(E, u):
    """omega#(u) = omega(u, .) as a covector of length 2r."""
    _check(E, u)
    out = []
    for b in range(E.size):
        acc = E.base.zero
        for a, ua in enumerate(u.coeffs):
            if not ua.is_zero and not E.omega[a][b].is_zero:
                acc = acc + ua * E.omega[a][b]
        out.append(acc)
    return Covector(out)


def omega_sharp_inverse(E, xi):
    inv = E._omega_t_inverse
    out = []
    for a in range(E.size):
        acc = E.base.zero
        for b, c in enumerate(xi.coeffs):
            if not c.is_zero and not inv[a][b].is_zero:
                acc = acc + inv[a][b] * c
        out.append(acc)
    return BigSection(out)


# -- the products ---------------------------------------------------------------------


def double_star(cand, u, v, d_weight=HALF):
    """The product on A + A* built from a pair of left-symmetric structures."""
    A, As = cand.A, cand.Astar
    x1, xi1 = _big(u).parts()
    x2, xi2 = _big(v).parts()
    plus = pair(xi1, x2) + pair(xi2, x1)
    w = cand.base.scalar(d_weight)
    x = multiply(A, x1, x2) + dual_lie_derivative(As, xi1, x2) - dual_right(As, xi2, x1)
    xi = multiply(As, xi1, xi2) + dual_lie_derivative(A, x1, xi2) - dual_right(A, x2, xi1)
    if not plus.is_zero:
        x = x - differential(As, plus).scale(w)
        xi = xi - differential(A, plus).scale(w)
    return BigSection.from_parts(x, xi)


def semidirect_star(A, u, v):
    """(x + xi) * (y + eta) = x.y + L_x eta - R_y xi - 1/2 d_M (u, v)_+."""
    x, xi = _big(u).parts()
    y, eta = _big(v).parts()
    plus = pair(xi, y) + pair(eta, x)
    out = dual_lie_derivative(A, x, eta) - dual_right(A, y, xi)
    if not plus.is_zero:
        out = out - differential(A, plus).scale(A.base.scalar(HALF))
    return BigSection.from_parts(multiply(A, x, y), out)


def _symplectic_star(E, u, v):
    lie, _ = E.data
    inner = dual_lie_derivative(lie, Section(u.coeffs), omega_sharp(E, v))
    w = skew_pairing(E, u, v)
    if not w.is_zero:
        inner = inner + differential(lie, w).scale(E.base.scalar(HALF))
    return omega_sharp_inverse(E, inner)


def _explicit_star(E, u, v):
    n = E.size
    base = E.base
    half = base.scalar(HALF)
    out = [base.zero] * n
    Dv, Du = [], []
    for a, ua in enumerate(u.coeffs):
        if ua.is_zero:
            continue
        for b, vb in enumerate(v.coeffs):
            if vb.is_zero:
                continue
            prod = E.data[a][b]
            if not prod.is_zero:
                c = ua * vb
                out = [o + c * p for o, p in zip(out, prod.coeffs)]
        for b, vb in enumerate(v.coeffs):
            if not vb.is_constant:
                out[b] = out[b] + ua * E.anchor[a](vb)
    for a, ua in enumerate(u.coeffs):
        for b, vb in enumerate(v.coeffs):
            w = E.omega[a][b]
            if w.is_zero:
                continue
            if not vb.is_constant and not ua.is_zero:
                Dv.append(d_operator(E, vb).scale(half * w * ua))
            if not ua.is_constant and not vb.is_zero:
                Du.append(d_operator(E, ua).scale(half * w * vb))
    result = BigSection(out)
    for t in Dv:
        result = result + t
    for t in Du:
        result = result - t
    return result


def star(E, u, v):
    """u * v."""
    _check(E, u, v)
    if E.source == BIALGEBROID:
        return double_star(E.data, u, v, E.d_weight)
    if E.source == SYMPLECTIC:
        return _symplectic_star(E, u, v)
    return _explicit_star(E, u, v)


def commutator(E, u, v):
    """[u, v]_E = u * v - v * u."""
    return star(E, u, v) - star(E, v, u)


class _Cached:
    """Memoised star for repeated frame evaluations."""

    def __init__(self, E):
        self.E = E
        self.memo = {}

    def __call__(self, u, v):
        key = (u.coeffs, v.coeffs)
        hit = self.memo.get(key)
        if hit is None:
            hit = star(self.E, u, v)
            self.memo[key] = hit
        return hit


def t_tensor(E, e1, e2, e3, mul=None):
    """T(e1,e2,e3) = (e1*e2, e3)_- + (e1, e2*e3)_- - (e2*e1, e3)_- - (e2, e1*e3)_-."""
    mul = mul or (lambda u, v: star(E, u, v))
    return (
        skew_pairing(E, mul(e1, e2), e3)
        + skew_pairing(E, e1, mul(e2, e3))
        - skew_pairing(E, mul(e2, e1), e3)
        - skew_pairing(E, e2, mul(e1, e3))
    )


def associator(E, e1, e2, e3, mul=None):
    mul = mul or (lambda u, v: star(E, u, v))
    return mul(e1, mul(e2, e3)) - mul(mul(e1, e2), e3)


def condition_i(E, e1, e2, e3, mul=None):
    """(e1,e2,e3) - (e2,e1,e3) - 1/6 D T(e1,e2,e3), a section of E."""
    lhs = associator(E, e1, e2, e3, mul) - associator(E, e2, e1, e3, mul)
    T = t_tensor(E, e1, e2, e3, mul)
    if T.is_zero:
        return lhs
    return lhs - d_operator(E, T).scale(E.base.scalar(SIXTH))


def condition_ii(E, e1, e2, e3, mul=None):
    """rho(e1)(e2,e3)_- - (e1*e2 - 1/2 D(e1,e2)_-, e3)_- - (e2, [e1,e3]_E)_-."""
    mul = mul or (lambda u, v: star(E, u, v))
    w = skew_pairing(E, e1, e2)
    first = mul(e1, e2)
    if not w.is_zero:
        first = first - d_operator(E, w).scale(E.base.scalar(HALF))
    return (
        anchor_act(E, e1, skew_pairing(E, e2, e3))
        - skew_pairing(E, first, e3)
        - skew_pairing(E, e2, mul(e1, e3) - mul(e3, e1))
    )


def _generic_triples(E):
    ext, f = generic_affine(E.base, "f")
    ext, g = generic_affine(ext, "g")
    ext, h = generic_affine(ext, "h")
    lifted = E.over(ext)
    n = E.size
    frame = [lifted.basis(a) for a in range(n)]
    triples = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                triples.append((
                    (f"f*{E.label(a)}", f"g*{E.label(b)}", f"h*{E.label(c)}"),
                    (frame[a].scale(f), frame[b].scale(g), frame[c].scale(h)),
                ))
    return lifted, triples


def check_presymplectic(E, trials=25, seed=0, generic=True):
    """Conditions (i) and (ii) on frame triples, generic affine triples and samples."""
    n = E.size
    frame = [E.basis(a) for a in range(n)]
    cases = [(tuple(E.label(i) for i in (a, b, c)), (frame[a], frame[b], frame[c]), E)
             for a in range(n) for b in range(n) for c in range(n)]
    if generic:
        lifted, triples = _generic_triples(E)
        cases.extend((labels, sections, lifted) for labels, sections in triples)
    rng = rng_for(seed, "presymplectic")
    for _ in range(trials):
        us = tuple(random_vector(BigSection, E.base, n, rng) for _ in range(3))
        cases.append((tuple(str(u) for u in us), us, E))

    results = {"condition (i)": None, "condition (ii)": None}
    memos = {}
    for labels, (e1, e2, e3), S in cases:
        mul = memos.setdefault(id(S), _Cached(S))
        for name, fn in (("condition (i)", condition_i), ("condition (ii)", condition_ii)):
            if results[name] is not None:
                continue
            res = fn(S, e1, e2, e3, mul)
            if not res.is_zero:
                results[name] = Report.fail(name, labels, res)
        if all(r is not None for r in results.values()):
            break
    reports = [Report.ok(k, cases=len(cases)) if r is None else r for k, r in results.items()]
    return Report.combine("pre-symplectic algebroid", reports, trials=trials, seed=seed, source=E.source)


# -- doubles and the symplectic correspondence ---------------------------------------


def double(cand, verify=True, trials=25, seed=0):
    """(A + A*, *, a + a_*, (.,.)_-) for a left-symmetric bialgebroid."""
    if verify:
        report = check_bialgebroid(cand, trials=trials, seed=seed)
        if not report:
            raise InvalidStructure(f"not a left-symmetric bialgebroid: {report.witness}", report)
    return PreSymplecticStructure.from_bialgebroid(cand)


def to_symplectic(E, verify=False, trials=25, seed=0):
    """The commutator Lie algebroid of E and its skew form."""
    if verify:
        report = check_presymplectic(E, trials=trials, seed=seed)
        if not report:
            raise InvalidStructure(f"not a pre-symplectic algebroid: {report.witness}", report)
    n = E.size
    frame = [E.basis(a) for a in range(n)]
    c = [[commutator(E, frame[a], frame[b]).coeffs for b in range(n)] for a in range(n)]
    lie = AlgebroidStructure(LIE, E.base, c, E.anchor, False, E.labels)
    return lie, _matrix_form(E.base, E.omega)


def from_symplectic(lie, omega):
    """The pre-symplectic structure e1 * e2 = omega#^-1(L_e1 omega# e2 + 1/2 d omega(e1, e2))."""
    if lie.kind != LIE:
        raise InvalidStructure("expected a Lie algebroid")
    report = check_lie_algebroid(lie)
    if not report:
        raise InvalidStructure(f"not a Lie algebroid: {report.witness}", report)
    if omega.degree != 1 or omega.rank != lie.rank:
        raise ShapeMismatch("omega must be a 2-form on the same bundle")
    if not is_alternating(omega):
        raise NotAlternating("omega is not skew")
    if linalg.det([list(r) for r in _form_matrix(omega)]).is_zero:
        raise Degenerate("omega is degenerate")
    cocycle = is_2cocycle(lie, omega)
    if not cocycle:
        raise NotCocycle(f"d omega != 0 at {cocycle.witness}")
    return PreSymplecticStructure.from_lie(lie, omega)


def explicit_from(E):
    """Tabulate E on its frame as an explicit structure."""
    n = E.size
    table = [[star(E, E.basis(a), E.basis(b)).coeffs for b in range(n)] for a in range(n)]
    return PreSymplecticStructure.explicit(E.base, table, E.anchor, E.omega, E.labels)


# -- Dirac structures -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subbundle:
    """Span of k sections of E."""

    sections: tuple

    def __post_init__(self):
        secs = tuple(_big(s) for s in self.sections)
        if not secs:
            raise ShapeMismatch("a subbundle needs at least one spanning section")
        if len({len(s.coeffs) for s in secs}) != 1:
            raise ShapeMismatch("spanning sections have different lengths")
        object.__setattr__(self, "sections", secs)

    @classmethod
    def from_rows(cls, base, rows):
        return cls([BigSection([base.scalar(c) for c in row]) for row in rows])

    @classmethod
    def A(cls, E):
        return cls([E.basis(i) for i in range(E.rank)])

    @classmethod
    def Astar(cls, E):
        return cls([E.basis(E.rank + i) for i in range(E.rank)])

    @classmethod
    def graph(cls, E, H):
        """G_H = span{H# eps^i + eps^i}."""
        r = E.rank
        if H.size != r:
            raise ShapeMismatch("H has the wrong size")
        H = H.over(E.base) if H.base.names != E.base.names else H
        rows = []
        for i in range(r):
            x = [H[i, j] for j in range(r)]
            xi = [E.base.one if j == i else E.base.zero for j in range(r)]
            rows.append(BigSection(x + xi))
        return cls(rows)

    @property
    def k(self):
        return len(self.sections)

    def matrix(self):
        return [list(s.coeffs) for s in self.sections]

    def over(self, base):
        return Subbundle([BigSection([c.lift(base) for c in s.coeffs]) for s in self.sections])


def _lift_sub(E, F):
    if len(F.sections[0].coeffs) != E.size:
        raise ShapeMismatch(f"subbundle sections have length {len(F.sections[0].coeffs)}, E has rank {E.size}")
    if F.sections[0].base.names != E.base.names:
        return F.over(E.base)
    return F


def _coordinates(E, F, v):
    """Coefficients of v in the spanning sections of F, or None."""
    columns = linalg.transpose(F.matrix())
    return linalg.solve(columns, list(v.coeffs))


def induced_algebroid(E, F, dual=False):
    """The left-symmetric structure that * and rho induce on a closed isotropic F."""
    k = F.k
    c = []
    for i in range(k):
        row = []
        for j in range(k):
            coords = _coordinates(E, F, star(E, F.sections[i], F.sections[j]))
            if coords is None:
                raise InvalidStructure(f"s{i + 1} * s{j + 1} leaves the subbundle")
            row.append(coords)
        c.append(row)
    anchor = [rho(E, s) for s in F.sections]
    return AlgebroidStructure(LEFT_SYMMETRIC, E.base, c, anchor, dual)


def check_dirac(E, F, induced=True):
    """Maximal isotropic and closed under *; optionally the induced structure too."""
    F = _lift_sub(E, F)
    k = F.k
    rk = linalg.rank(F.matrix())
    if rk < k:
        raise RankDeficient(f"{k} spanning sections have rank {rk}")
    labels = [f"s{i + 1}" for i in range(k)]
    reports = []
    if k != E.rank:
        reports.append(Report.fail("maximal", [f"rank {k}"], f"expected rank {E.rank}"))
    else:
        reports.append(Report.ok("maximal"))
    iso = Report.ok("isotropic")
    for i in range(k):
        for j in range(i + 1, k):
            w = skew_pairing(E, F.sections[i], F.sections[j])
            if not w.is_zero:
                iso = Report.fail("isotropic", [labels[i], labels[j]], w)
                break
        if not iso:
            break
    reports.append(iso)
    closed = Report.ok("closed under *")
    for i in range(k):
        for j in range(k):
            v = star(E, F.sections[i], F.sections[j])
            if _coordinates(E, F, v) is None:
                closed = Report.fail("closed under *", [labels[i], labels[j]], v)
                break
        if not closed:
            break
    reports.append(closed)
    if induced and all(reports):
        reports.append(check_left_symmetric(induced_algebroid(E, F)))
    return Report.combine("Dirac structure", reports, rank=k)


def check_manin(E, L1, L2):
    """Two Dirac structures whose spanning sections together frame E."""
    L1, L2 = _lift_sub(E, L1), _lift_sub(E, L2)
    first = check_dirac(E, L1)
    second = check_dirac(E, L2)
    first = Report(f"L1: {first.name}", first.passed, first.witness, first.details, first.children)
    second = Report(f"L2: {second.name}", second.passed, second.witness, second.details, second.children)
    stacked = L1.matrix() + L2.matrix()
    if len(stacked) == E.size and not linalg.det(stacked).is_zero:
        trans = Report.ok("transversal")
    else:
        trans = Report.fail("transversal", ["L1", "L2"], "stacked frame is singular")
    return Report.combine("Manin triple", [first, second, trans])


def split_to_bialgebroid(E, L1, L2, verify=True):
    """(L1, L2) as a bialgebroid, L2 identified with L1* through <xi, y> = (xi, y)_-."""
    L1, L2 = _lift_sub(E, L1), _lift_sub(E, L2)
    if verify:
        report = check_manin(E, L1, L2)
        if not report:
            raise InvalidStructure(f"not a Manin triple: {report.witness}", report)
    r = E.rank
    P = [[skew_pairing(E, t, s) for s in L1.sections] for t in L2.sections]
    Q = linalg.inverse(P)
    dual_frame = []
    for i in range(r):
        acc = E.zero()
        for k, t in enumerate(L2.sections):
            if not Q[i][k].is_zero:
                acc = acc + t.scale(Q[i][k])
        dual_frame.append(acc)
    A = induced_algebroid(E, L1)
    Astar = induced_algebroid(E, Subbundle(dual_frame), dual=True)
    return BialgebroidCandidate(A, Astar)


# -- matched pairs ----------------------------------------------------------------------

CORRECTED = "corrected"
AS_PRINTED = "as_printed"


def _matched_pair_table(cand, reading):
    A, As = cand.A, cand.Astar
    r = cand.rank
    n = 2 * r
    base = cand.base
    c = [[[base.zero] * n for _ in range(n)] for _ in range(n)]
    for i, j, k, b in A.bracket_entries:
        c[i][j][k] = b
    for i, j, k, b in As.bracket_entries:
        c[r + i][r + j][r + k] = b
    for i in range(r):
        for j in range(r):
            x, xi = A.basis(i), As.basis(j)
            cross = -dual_apply(As, xi, x)
            cross_dual = dual_apply(A, x, xi) if reading == CORRECTED else Covector.zero(base, r)
            v = list(cross.coeffs) + list(cross_dual.coeffs)
            c[i][r + j] = v
            c[r + j][i] = [-a for a in v]
    return c


def matched_pair_bracket(cand, reading=CORRECTED, verify=True):
    """The Lie algebroid A^c + A*^c with
    [x + xi, y + eta] = [x, y] + L*_x eta - L*_y xi + L*_xi y - L*_eta x + [xi, eta]_*.

    ``reading="as_printed"`` drops the L*_x eta - L*_y xi pair on mixed frame
    elements, which is what the formula gives if its first two operator terms
    are read literally.  With ``verify`` the frame brackets must agree with the
    commutator of the double.
    """
    if reading not in (CORRECTED, AS_PRINTED):
        raise ValueError(f"unknown reading {reading!r}")
    r = cand.rank
    c = _matched_pair_table(cand, reading)
    anchor = tuple(cand.A.anchor) + tuple(cand.Astar.anchor)
    lie = AlgebroidStructure(LIE, cand.base, c, anchor, False, _labels(r))
    omega = _matrix_form(cand.base, standard_omega(cand.base, r))
    if verify:
        report = check_matched_pair(cand, reading, lie=lie)
        if not report:
            raise InvalidStructure(f"matched-pair bracket disagrees with the double: {report.witness}", report)
    return lie, omega


def check_matched_pair(cand, reading=CORRECTED, samples=10, seed=0, lie=None):
    """Frame and random-section comparison of the matched-pair bracket with the
    commutator of the double, plus the Lie algebroid and cocycle checks."""
    if lie is None:
        lie, _ = matched_pair_bracket(cand, reading, verify=False)
    E = PreSymplecticStructure.from_bialgebroid(cand)
    n = E.size
    cases = [((E.label(a), E.label(b)), E.basis(a), E.basis(b)) for a in range(n) for b in range(n)]
    rng = rng_for(seed, "matched-pair")
    for _ in range(samples):
        u, v = (random_vector(BigSection, E.base, n, rng) for _ in range(2))
        cases.append(((str(u), str(v)), u, v))
    agree = Report.ok("commutator of *", cases=len(cases))
    for labels, u, v in cases:
        res = BigSection(bracket(lie, u, v).coeffs) - commutator(E, u, v)
        if not res.is_zero:
            agree = Report.fail("commutator of *", labels, res)
            break
    lie_report = check_lie_algebroid(lie)
    cocycle = is_2cocycle(lie, _matrix_form(E.base, E.omega))
    return Report.combine("matched pair", [agree, lie_report, cocycle], reading=reading)


# -- Maurer-Cartan ------------------------------------------------------------------------


def delta_star_H(cand, H):
    """delta_* H for H in Sym^2(A), read as a 2-cochain of A*."""
    return coboundary_lsa(cand.Astar, H.as_tensor(cand.Astar.form_cls))


def mc_residual(cand, H):
    """[[H, H]] - delta_* H."""
    if H.base.names != cand.base.names:
        base = cand.base.union(H.base)
        cand, H = cand.over(base), H.over(base)
    return s_bracket(cand.A, H) - delta_star_H(cand, H)


def mc_check(cand, H):
    """Formula verdict delta_* H = [[H, H]] against the direct Dirac check of G_H."""
    if H.size != cand.rank:
        raise ShapeMismatch("H has the wrong size")
    if H.base.names != cand.base.names:
        base = cand.base.union(H.base)
        cand, H = cand.over(base), H.over(base)
    res = mc_residual(cand, H)
    labels = [cand.Astar.label(i) for i in range(cand.rank)]
    if res.is_zero:
        formula = Report.ok("Maurer-Cartan")
    else:
        inputs, value = first_nonzero(res, labels)
        formula = Report.fail("Maurer-Cartan", inputs, value)
    E = PreSymplecticStructure.from_bialgebroid(cand)
    dirac = check_dirac(E, Subbundle.graph(E, H))
    dirac = Report("G_H Dirac", dirac.passed, dirac.witness, dirac.details, dirac.children)
    if formula.passed == dirac.passed:
        agreement = Report.ok("verdicts agree")
    else:
        agreement = Report.fail("verdicts agree", ["formula", "Dirac"], f"{formula.passed} vs {dirac.passed}")
    return Report.combine("Maurer-Cartan criterion", [formula, dirac, agreement])


# -- the associator lemmas ------------------------------------------------------------


def _vf_apply(v, f):
    return v(f) if not f.is_constant else f.base.zero


def lemma_x_x_xi(cand, x1, x2, xi3, e4):
    """Both sides of the (x1, x2, xi3) associator identity and its I-terms."""
    E = PreSymplecticStructure.from_bialgebroid(cand)
    r = cand.rank
    zx, zxi = Section.zero(cand.base, r), Covector.zero(cand.base, r)
    X1, X2, XI3 = (BigSection.from_parts(x1, zxi), BigSection.from_parts(x2, zxi),
                   BigSection.from_parts(zx, xi3))
    _, xi4 = _big(e4).parts()
    mul = _Cached(E)
    lhs = skew_pairing(E, associator(E, X1, X2, XI3, mul) - associator(E, X2, X1, XI3, mul), e4)
    T = t_tensor(E, X1, X2, XI3, mul)
    DT = skew_pairing(E, d_operator(E, T), e4) * cand.base.scalar(SIXTH)
    I1 = cond2_defect(cand, x1, x2).evaluate([xi4, xi3])
    I2 = _vf_apply(anchor_compat_defect(cand, x1, xi4), pair(xi3, x2))
    I3 = _vf_apply(anchor_compat_defect(cand, x2, xi4), pair(xi3, x1))
    return lhs, DT - I1 - I2 + I3, {"I1": I1, "I2": I2, "I3": I3}


def lemma_x_xi_x(cand, x1, xi2, x3, e4):
    """Both sides of the (x1, xi2, x3) associator identity and its J-terms."""
    E = PreSymplecticStructure.from_bialgebroid(cand)
    r = cand.rank
    zx, zxi = Section.zero(cand.base, r), Covector.zero(cand.base, r)
    X1, XI2, X3 = (BigSection.from_parts(x1, zxi), BigSection.from_parts(zx, xi2),
                   BigSection.from_parts(x3, zxi))
    _, xi4 = _big(e4).parts()
    mul = _Cached(E)
    lhs = skew_pairing(E, associator(E, X1, XI2, X3, mul) - associator(E, XI2, X1, X3, mul), e4)
    T = t_tensor(E, X1, XI2, X3, mul)
    DT = skew_pairing(E, d_operator(E, T), e4) * cand.base.scalar(SIXTH)
    J1 = cond1_defect(cand, xi2, xi4).evaluate([x1, x3])
    J2 = -_vf_apply(anchor_compat_defect(cand, x1, xi2), pair(xi4, x3))
    J3 = -_vf_apply(anchor_compat_defect(cand, x1, xi4), pair(xi2, x3)) * cand.base.scalar(HALF)
    return lhs, DT + J1 - J2 - J3, {"J1": J1, "J2": J2, "J3": J3}


def lemma_xi_x_x(cand, xi1, x2, x3, e4):
    """Both sides of the (xi1, x2, x3) associator identity and its J-terms."""
    E = PreSymplecticStructure.from_bialgebroid(cand)
    r = cand.rank
    zx, zxi = Section.zero(cand.base, r), Covector.zero(cand.base, r)
    XI1, X2, X3 = (BigSection.from_parts(zx, xi1), BigSection.from_parts(x2, zxi),
                   BigSection.from_parts(x3, zxi))
    _, xi4 = _big(e4).parts()
    mul = _Cached(E)
    lhs = skew_pairing(E, associator(E, XI1, X2, X3, mul) - associator(E, X2, XI1, X3, mul), e4)
    T = t_tensor(E, XI1, X2, X3, mul)
    DT = skew_pairing(E, d_operator(E, T), e4) * cand.base.scalar(SIXTH)
    J1 = cond1_defect(cand, xi1, xi4).evaluate([x2, x3])
    J2 = -_vf_apply(anchor_compat_defect(cand, x2, xi1), pair(xi4, x3))
    J3 = -_vf_apply(anchor_compat_defect(cand, x2, xi4), pair(xi1, x3)) * cand.base.scalar(HALF)
    return lhs, DT - J1 + J2 + J3, {"J1": J1, "J2": J2, "J3": J3}


LEMMAS = (
    ("(x, x, xi)", lemma_x_x_xi, ("A", "A", "A*")),
    ("(x, xi, x)", lemma_x_xi_x, ("A", "A*", "A")),
    ("(xi, x, x)", lemma_xi_x_x, ("A*", "A", "A")),
)


def _lemma_inputs(cand, kinds, scale=None):
    r = cand.rank
    frames = {"A": [(cand.A.label(i), cand.A.basis(i)) for i in range(r)],
              "A*": [(cand.Astar.label(i), cand.Astar.basis(i)) for i in range(r)]}
    scale = scale or (None, None, None)
    for l1, u1 in frames[kinds[0]]:
        for l2, u2 in frames[kinds[1]]:
            for l3, u3 in frames[kinds[2]]:
                us, ls = [u1, u2, u3], [l1, l2, l3]
                for p, s in enumerate(scale):
                    if s is not None:
                        name, f = s
                        us[p] = us[p].scale(f)
                        ls[p] = f"{name}*{ls[p]}"
                yield ls, us


def check_associator_lemmas(cand, generic=False):
    """Compare both sides of the three associator identities on frame tuples.

    Works for any pair of left-symmetric structures.  ``details`` records
    whether every I- and J-term vanished.  With ``generic`` the first three
    arguments also get generic affine coefficients.
    """
    runs = [(cand, None)]
    if generic:
        ext, f = generic_affine(cand.base, "f")
        ext, g = generic_affine(ext, "g")
        ext, h = generic_affine(ext, "h")
        runs.append((cand.over(ext), (("f", f), ("g", g), ("h", h))))
    reports = []
    for name, fn, kinds in LEMMAS:
        rep = Report.ok(name)
        vanish = True
        cases = 0
        for c, scale in runs:
            E = PreSymplecticStructure.from_bialgebroid(c)
            frame4 = [(E.label(a), E.basis(a)) for a in range(E.size)]
            for labels, us in _lemma_inputs(c, kinds, scale):
                for l4, e4 in frame4:
                    cases += 1
                    lhs, rhs, terms = fn(c, *us, e4)
                    if any(not t.is_zero for t in terms.values()):
                        vanish = False
                    if lhs != rhs:
                        rep = Report.fail(name, labels + [l4], lhs - rhs)
                        break
                if not rep:
                    break
            if not rep:
                break
        reports.append(Report(rep.name, rep.passed, rep.witness, {"cases": cases, "terms_vanish": vanish}))
    return Report.combine("associator identities", reports)

