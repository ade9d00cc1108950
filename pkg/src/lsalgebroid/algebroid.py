"""Left-symmetric and Lie algebroid structures on a trivialised bundle.

Products are stored on the constant frame e_1..e_r only.  Function
coefficients enter through the two Leibniz rules

    (f e_i) . (g e_j) = f g (e_i . e_j) + f a(e_i)(g) e_j

(and the skew version for Lie brackets), so every axiom reduces to finitely
many basis identities plus the anchor-morphism condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import InvalidStructure, ShapeMismatch
from .report import Report
from .scalar import Base, VectorField
from .tensors import Covector, FormTensor, PolyTensor, Section, pair

LEFT_SYMMETRIC = "left-symmetric"
LIE = "lie"
KINDS = (LEFT_SYMMETRIC, LIE)


def _lift_field(v, base):
    coeffs = dict(zip(v.base.variables, v.coeffs))
    return VectorField(base, tuple(coeffs[n].lift(base) if n in coeffs else base.zero for n in base.variables))


@dataclass(frozen=True, eq=False)
class AlgebroidStructure:
    """Structure functions ``products[i][j][k]`` and anchors ``anchor[i] = a(e_i)``.

    ``dual`` marks a structure living on A*: its sections are then
    :class:`Covector` objects and its poly-tensors are :class:`FormTensor`
    objects (and vice versa), so both sides of a bialgebroid share one set of
    coefficient containers.
    """

    kind: str
    base: Base
    products: tuple
    anchor: tuple
    dual: bool = False
    labels: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebroid kind {self.kind!r}")
        products = tuple(tuple(tuple(row) for row in plane) for plane in self.products)
        object.__setattr__(self, "products", products)
        object.__setattr__(self, "anchor", tuple(self.anchor))
        object.__setattr__(self, "labels", tuple(self.labels))
        r = len(products)
        if r == 0:
            raise ShapeMismatch("rank must be positive")
        for plane in products:
            if len(plane) != r or any(len(row) != r for row in plane):
                raise ShapeMismatch(f"products must be {r}x{r}x{r}")
        if len(self.anchor) != r:
            raise ShapeMismatch(f"need {r} anchor vector fields, got {len(self.anchor)}")
        for v in self.anchor:
            if v.base.variables != self.base.variables:
                raise ShapeMismatch("anchor vector fields must use the structure's base variables")
        if self.labels and len(self.labels) != r:
            raise ShapeMismatch("one label per basis element")
        if self.kind == LIE:
            for i in range(r):
                for j in range(i, r):
                    for k in range(r):
                        if products[i][j][k] != -products[j][i][k]:
                            raise InvalidStructure(
                                f"Lie structure functions must be skew: c[{i + 1},{j + 1}]^{k + 1}"
                            )

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_table(cls, kind, base, rank, products=None, anchor=None, dual=False, labels=()):
        """Build from sparse maps ``{(i, j): {k: value}}`` and ``{i: {var: value}}`` (0-based)."""
        c = [[[base.zero] * rank for _ in range(rank)] for _ in range(rank)]
        for (i, j), row in (products or {}).items():
            for k, value in row.items():
                c[i][j][k] = base.scalar(value)
        vfs = []
        for i in range(rank):
            comps = (anchor or {}).get(i, {})
            unknown = set(comps) - set(base.variables)
            if unknown:
                raise ShapeMismatch(f"anchor uses undeclared variables {sorted(unknown)}")
            vfs.append(VectorField(base, tuple(base.scalar(comps.get(v, 0)) for v in base.variables)))
        return cls(kind, base, c, vfs, dual, labels)

    @classmethod
    def abelian(cls, base, rank, kind=LEFT_SYMMETRIC, dual=False):
        return cls.from_table(kind, base, rank, dual=dual)

    def over(self, base):
        """The same structure with coefficients lifted to a larger base."""
        if base.names == self.base.names:
            return self
        c = [[[x.lift(base) for x in row] for row in plane] for plane in self.products]
        return AlgebroidStructure(
            self.kind, base, c, [_lift_field(v, base) for v in self.anchor], self.dual, self.labels
        )

    def replace(self, **changes):
        data = dict(kind=self.kind, base=self.base, products=self.products, anchor=self.anchor,
                    dual=self.dual, labels=self.labels)
        data.update(changes)
        return AlgebroidStructure(**data)

    # -- bookkeeping ----------------------------------------------------------
    @property
    def rank(self):
        return len(self.products)

    def label(self, i):
        if self.labels:
            return self.labels[i]
        return f"{'ε' if self.dual else 'e'}{i + 1}"

    @property
    def section_cls(self):
        return Covector if self.dual else Section

    @property
    def cosection_cls(self):
        return Section if self.dual else Covector

    @property
    def poly_cls(self):
        return FormTensor if self.dual else PolyTensor

    @property
    def form_cls(self):
        return PolyTensor if self.dual else FormTensor

    def basis(self, i):
        return self.section_cls.basis(self.base, self.rank, i)

    def cobasis(self, i):
        return self.cosection_cls.basis(self.base, self.rank, i)

    def zero_section(self):
        return self.section_cls.zero(self.base, self.rank)

    @cached_property
    def entries(self):
        """Nonzero structure functions as ``(i, j, k, c)``."""
        r = self.rank
        return tuple(
            (i, j, k, self.products[i][j][k])
            for i in range(r) for j in range(r) for k in range(r)
            if not self.products[i][j][k].is_zero
        )

    @cached_property
    def bracket_entries(self):
        """Nonzero bracket functions c_ij^k - c_ji^k (or c_ij^k for Lie kind)."""
        if self.kind == LIE:
            return self.entries
        r = self.rank
        out = []
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    b = self.products[i][j][k] - self.products[j][i][k]
                    if not b.is_zero:
                        out.append((i, j, k, b))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, AlgebroidStructure):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.base.variables == other.base.variables
            and self.rank == other.rank
            and all(a == b for p, q in zip(self.products, other.products)
                    for ra, rb in zip(p, q) for a, b in zip(ra, rb))
            and all(a == b for a, b in zip(self.anchor, other.anchor))
        )

    __hash__ = object.__hash__

    def __str__(self):
        lines = [f"{self.kind} algebroid of rank {self.rank} over ({', '.join(self.base.variables)})"]
        for i, j, k, c in self.entries:
            lines.append(f"  {self.label(i)}*{self.label(j)} -> ({c}) {self.label(k)}")
        for i, v in enumerate(self.anchor):
            if not v.is_zero:
                lines.append(f"  a({self.label(i)}) = {v}")
        return "\n".join(lines)


def _check_vec(alg, *vectors):
    for v in vectors:
        if len(v.coeffs) != alg.rank:
            raise ShapeMismatch(f"section of rank {len(v.coeffs)} for a rank-{alg.rank} structure")


def _accumulate(out, k, term):
    out[k] = term if out[k] is None else out[k] + term


def _finish(cls, base, out):
    zero = base.zero
    return cls(zero if c is None else c for c in out)


def anchor_of(alg, X):
    """a(X) as a vector field."""
    _check_vec(alg, X)
    total = VectorField.zero(alg.base)
    for xi, v in zip(X.coeffs, alg.anchor):
        if not xi.is_zero and not v.is_zero:
            total = total + v.scale(xi)
    return total


def act(alg, X, f):
    """a(X)(f)."""
    _check_vec(alg, X)
    total = None
    for xi, v in zip(X.coeffs, alg.anchor):
        if xi.is_zero or v.is_zero:
            continue
        term = xi * v(f)
        total = term if total is None else total + term
    return f.base.zero if total is None else total


def multiply(alg, X, Y):
    """X . Y extended from the basis by the two Leibniz rules."""
    _check_vec(alg, X, Y)
    r = alg.rank
    out = [None] * r
    for i, j, k, c in alg.entries:
        xi, yj = X.coeffs[i], Y.coeffs[j]
        if xi.is_zero or yj.is_zero:
            continue
        _accumulate(out, k, xi * yj * c)
    for i, xi in enumerate(X.coeffs):
        if xi.is_zero or alg.anchor[i].is_zero:
            continue
        v = alg.anchor[i]
        for k, yk in enumerate(Y.coeffs):
            if yk.is_constant:
                continue
            d = v(yk)
            if not d.is_zero:
                _accumulate(out, k, xi * d)
    return _finish(type(X), alg.base, out)


def bracket(alg, X, Y):
    """Lie bracket; for a left-symmetric structure, the sub-adjacent commutator."""
    _check_vec(alg, X, Y)
    r = alg.rank
    out = [None] * r
    for i, j, k, c in alg.bracket_entries:
        xi, yj = X.coeffs[i], Y.coeffs[j]
        if xi.is_zero or yj.is_zero:
            continue
        _accumulate(out, k, xi * yj * c)
    for P, Q, sign in ((X, Y, 1), (Y, X, -1)):
        for i, pi in enumerate(P.coeffs):
            if pi.is_zero or alg.anchor[i].is_zero:
                continue
            v = alg.anchor[i]
            for k, qk in enumerate(Q.coeffs):
                if qk.is_constant:
                    continue
                d = v(qk)
                if not d.is_zero:
                    _accumulate(out, k, pi * d if sign > 0 else -(pi * d))
    return _finish(type(X), alg.base, out)


def associator(alg, X, Y, Z):
    return multiply(alg, X, multiply(alg, Y, Z)) - multiply(alg, multiply(alg, X, Y), Z)


def dual_lie_derivative(alg, X, xi):
    """Lie derivative of the sub-adjacent Lie algebroid on A*:
    <L_X xi, y> = a(X)<xi, y> - <xi, [X, y]>."""
    _check_vec(alg, X, xi)
    out = [act(alg, X, xi.coeffs[j]) - pair(xi, bracket(alg, X, alg.basis(j))) for j in range(alg.rank)]
    return alg.cosection_cls(out)


def dual_right(alg, X, xi):
    """R_X on A*: <R_X xi, y> = -<xi, y . X>."""
    _check_vec(alg, X, xi)
    out = [-pair(xi, multiply(alg, alg.basis(j), X)) for j in range(alg.rank)]
    return alg.cosection_cls(out)


def differential(alg, f):
    """d_M f of the sub-adjacent Lie algebroid: <d f, e_j> = a(e_j)(f)."""
    return alg.cosection_cls(v(f) for v in alg.anchor)


def dual_apply(alg, X, xi):
    """L*_X xi, defined by <L*_X xi, y> = a(X)<xi, y> - <xi, X . y>."""
    _check_vec(alg, X, xi)
    out = [act(alg, X, xi.coeffs[j]) - pair(xi, multiply(alg, X, alg.basis(j))) for j in range(alg.rank)]
    return alg.cosection_cls(out)


# -- operator matrices ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square Scalar matrix acting on frame coordinates (column j = image of basis j)."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        if n == 0 or any(len(row) != n for row in entries):
            raise ShapeMismatch("operator matrices must be square and nonempty")

    @classmethod
    def zero(cls, base, n):
        return cls([[base.zero] * n for _ in range(n)])

    @classmethod
    def identity(cls, base, n):
        return cls([[base.one if i == j else base.zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns):
        n = len(columns)
        return cls([[columns[j][i] for j in range(n)] for i in range(n)])

    @property
    def size(self):
        return len(self.entries)

    @property
    def base(self):
        return self.entries[0][0].base

    def column(self, j):
        return [row[j] for row in self.entries]

    def apply(self, v):
        if len(v.coeffs) != self.size:
            raise ShapeMismatch(f"{self.size}x{self.size} operator on a rank-{len(v.coeffs)} vector")
        out = []
        for row in self.entries:
            acc = None
            for a, b in zip(row, v.coeffs):
                if a.is_zero or b.is_zero:
                    continue
                acc = a * b if acc is None else acc + a * b
            out.append(self.base.zero if acc is None else acc)
        return type(v)(out)

    def transpose(self):
        return OperatorMatrix(list(zip(*self.entries)))

    def __add__(self, other):
        return OperatorMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return OperatorMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return OperatorMatrix([[-a for a in r] for r in self.entries])

    def scale(self, f):
        return OperatorMatrix([[f * a for a in r] for r in self.entries])

    def __matmul__(self, other):
        n = self.size
        zero = self.base.zero
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.is_zero or b.is_zero:
                        continue
                    acc = a * b if acc is None else acc + a * b
                row.append(zero if acc is None else acc)
            out.append(row)
        return OperatorMatrix(out)

    def derive_by(self, v):
        """Entrywise application of a vector field."""
        return OperatorMatrix([[a.base.zero if a.is_constant else v(a) for a in r] for r in self.entries])

    @property
    def is_zero(self):
        return all(a.is_zero for r in self.entries for a in r)

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.size == other.size and (self - other).is_zero

    __hash__ = object.__hash__

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.entries) + "]"


def left_op(alg, X):
    """Matrix of the tensorial part of Y -> X . Y (column j = X . e_j)."""
    return OperatorMatrix.from_columns([multiply(alg, X, alg.basis(j)).coeffs for j in range(alg.rank)])


def right_op(alg, X):
    """Matrix of Y -> Y . X, which is C-infinity-linear in Y (column j = e_j . X)."""
    return OperatorMatrix.from_columns([multiply(alg, alg.basis(j), X).coeffs for j in range(alg.rank)])


def dual_left_op(alg, X):
    """Matrix part of xi -> L*_X xi, namely -(left_op X)^T; dual_apply adds the anchor term."""
    return -left_op(alg, X).transpose()


# -- axiom checks ----------------------------------------------------------------


def check_left_symmetric(alg):
    """Symmetry of the associator in its first two slots on basis triples, then the anchor morphism."""
    if alg.kind != LEFT_SYMMETRIC:
        raise InvalidStructure("check_left_symmetric needs a left-symmetric structure")
    r = alg.rank
    e = [alg.basis(i) for i in range(r)]
    prod = [[multiply(alg, e[i], e[j]) for j in range(r)] for i in range(r)]
    sym = None
    for i in range(r):
        for j in range(r):
            for k in range(r):
                if i == j:
                    continue
                lhs = multiply(alg, e[i], prod[j][k]) - multiply(alg, prod[i][j], e[k])
                rhs = multiply(alg, e[j], prod[i][k]) - multiply(alg, prod[j][i], e[k])
                diff = lhs - rhs
                if not diff.is_zero:
                    sym = Report.fail("associator symmetry", [alg.label(i), alg.label(j), alg.label(k)], diff)
                    break
            if sym is not None:
                break
        if sym is not None:
            break
    if sym is None:
        sym = Report.ok("associator symmetry")
    return Report.combine("left-symmetric", [sym, _anchor_morphism(alg)])


def _anchor_morphism(alg):
    r = alg.rank
    for i in range(r):
        for j in range(i + 1, r):
            lhs = alg.anchor[i].commutator(alg.anchor[j])
            rhs = anchor_of(alg, bracket(alg, alg.basis(i), alg.basis(j)))
            diff = lhs - rhs
            if not diff.is_zero:
                return Report.fail("anchor morphism", [alg.label(i), alg.label(j)], diff)
    return Report.ok("anchor morphism")


def check_lie_algebroid(lie):
    if lie.kind != LIE:
        raise InvalidStructure("check_lie_algebroid needs a Lie structure")
    r = lie.rank
    e = [lie.basis(i) for i in range(r)]
    br = [[bracket(lie, e[i], e[j]) for j in range(r)] for i in range(r)]
    skew = Report.ok("skew-symmetry")
    for i in range(r):
        for j in range(i, r):
            s = br[i][j] + br[j][i]
            if not s.is_zero:
                skew = Report.fail("skew-symmetry", [lie.label(i), lie.label(j)], s)
                break
        if not skew:
            break
    jac = Report.ok("Jacobi")
    for i in range(r):
        for j in range(i + 1, r):
            for k in range(j + 1, r):
                s = (
                    bracket(lie, e[i], br[j][k])
                    + bracket(lie, e[j], br[k][i])
                    + bracket(lie, e[k], br[i][j])
                )
                if not s.is_zero:
                    jac = Report.fail("Jacobi", [lie.label(i), lie.label(j), lie.label(k)], s)
                    break
            if not jac:
                break
        if not jac:
            break
    return Report.combine("Lie algebroid", [skew, jac, _anchor_morphism(lie)])


def sub_adjacent(alg, check=True):
    """The Lie algebroid with bracket x.y - y.x and the same anchor."""
    if check:
        report = check_left_symmetric(alg)
        if not report:
            raise InvalidStructure(f"not a left-symmetric algebroid: {report.witness}", report)
    r = alg.rank
    c = [[[alg.products[i][j][k] - alg.products[j][i][k] for k in range(r)] for j in range(r)] for i in range(r)]
    return AlgebroidStructure(LIE, alg.base, c, alg.anchor, alg.dual, alg.labels)


# -- representations ---------------------------------------------------------------


def regular_representation(alg):
    """(L, R) on the frame: connection matrices of e_i . - and the matrices of - . e_i.

    R is only C-infinity-linear in its subscript when the structure functions are
    annihilated by the anchor (for instance constant ones or zero anchor), so the
    pair is a representation exactly in that case.
    """
    r = alg.rank
    return [left_op(alg, alg.basis(i)) for i in range(r)], [right_op(alg, alg.basis(i)) for i in range(r)]


def check_representation(alg, rho, mu):
    """Check rho(x)mu(y) - mu(y)rho(x) = mu(x.y) - mu(y)mu(x) on basis pairs.

    ``rho[i]`` is the connection matrix of rho(e_i) (the anchor derivative is
    added implicitly); ``mu[i]`` is the matrix of mu(e_i), extended tensorially.
    """
    r = alg.rank
    if len(rho) != r or len(mu) != r:
        raise ShapeMismatch(f"need {r} matrices for rho and for mu")
    sizes = {m.size for m in list(rho) + list(mu)}
    if len(sizes) != 1:
        raise ShapeMismatch("all representation matrices must have the same size")

    def combo(mats, coeffs):
        total = OperatorMatrix.zero(alg.base, rho[0].size)
        for k, c in enumerate(coeffs):
            if not c.is_zero:
                total = total + mats[k].scale(c)
        return total

    for i in range(r):
        for j in range(i + 1, r):
            b = bracket(alg, alg.basis(i), alg.basis(j))
            curv = (
                rho[j].derive_by(alg.anchor[i]) - rho[i].derive_by(alg.anchor[j])
                + rho[i] @ rho[j] - rho[j] @ rho[i] - combo(rho, b.coeffs)
            )
            if not curv.is_zero:
                flat = Report.fail("rho flatness", [alg.label(i), alg.label(j)], curv)
                raise InvalidStructure(f"rho is not a representation: {flat.witness}", flat)
    for i in range(r):
        for j in range(r):
            p = multiply(alg, alg.basis(i), alg.basis(j))
            res = (
                mu[j].derive_by(alg.anchor[i]) + rho[i] @ mu[j] - mu[j] @ rho[i]
                - combo(mu, p.coeffs) + mu[j] @ mu[i]
            )
            if not res.is_zero:
                for a in range(res.size):
                    col = res.column(a)
                    if any(not c.is_zero for c in col):
                        return Report.fail(
                            "representation", [alg.label(i), alg.label(j), f"u{a + 1}"],
                            "[" + ", ".join(str(c) for c in col) + "]",
                        )
    return Report.ok("representation")


# -- semidirect product ------------------------------------------------------------


def semidirect_symplectic(alg):
    """The Lie algebroid A^c x_{L*} A* with the skew form <xi, y> - <eta, x>.

    Basis order is (e_1..e_r, eps^1..eps^r).  Returns ``(lie, omega)``.
    """
    report = check_left_symmetric(alg)
    if not report:
        raise InvalidStructure(f"not a left-symmetric algebroid: {report.witness}", report)
    r = alg.rank
    n = 2 * r
    base = alg.base
    c = [[[base.zero] * n for _ in range(n)] for _ in range(n)]
    for i, j, k, b in alg.bracket_entries:
        c[i][j][k] = b
    for i, k, j, val in alg.entries:
        # [e_i, eps^j] = L*_{e_i} eps^j = -sum_k c_ik^j eps^k
        c[i][r + j][r + k] = c[i][r + j][r + k] - val
        c[r + j][i][r + k] = c[r + j][i][r + k] + val
    anchor = list(alg.anchor) + [VectorField.zero(base)] * r
    labels = tuple(f"e{i + 1}" for i in range(r)) + tuple(f"ε{i + 1}" for i in range(r))
    lie = AlgebroidStructure(LIE, base, c, anchor, False, labels)
    return lie, standard_form(base, r)


def standard_form(base, r):
    """omega(x + xi, y + eta) = <xi, y> - <eta, x> on the frame (e, eps)."""
    terms = {}
    for i in range(r):
        terms[((i,), r + i)] = -base.one
        terms[((r + i,), i)] = base.one
    return FormTensor(base, 2 * r, 1, terms)
