"""Left-symmetric bialgebroids, the S-bracket of a symmetric 2-tensor, and
the dual multiplication it induces.

Conventions: ``A`` acts on Section objects, ``Astar`` (``dual=True``) on
Covector objects.  For a symmetric H with matrix H_ij = H(eps^i, eps^j),
H#(xi) = sum_ij xi_i H_ij e_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .algebroid import (
    LEFT_SYMMETRIC,
    AlgebroidStructure,
    act,
    anchor_of,
    bracket,
    check_left_symmetric,
    differential,
    dual_apply,
    dual_lie_derivative,
    dual_right,
    multiply,
)
from .calculus import coboundary_lsa, lie_der_poly
from .errors import Degenerate, InvalidStructure, SEquationFailed, ShapeMismatch
from .report import Report
from .sampling import generic_affine, random_vector, rng_for
from .tensors import Covector, FormTensor, PolyTensor, Section, pair


@dataclass(frozen=True, eq=False)
class BialgebroidCandidate:
    """A pair of left-symmetric structures on A and on A*."""

    A: AlgebroidStructure
    Astar: AlgebroidStructure

    def __post_init__(self):
        if self.A.rank != self.Astar.rank:
            raise ShapeMismatch(f"ranks differ: {self.A.rank} vs {self.Astar.rank}")
        if self.A.base.variables != self.Astar.base.variables:
            raise ShapeMismatch("A and A* must share base variables")
        if self.A.dual:
            raise ShapeMismatch("the first structure must live on A")
        if not self.Astar.dual:
            object.__setattr__(self, "Astar", self.Astar.replace(dual=True))
        if self.A.base.names != self.Astar.base.names:
            base = self.A.base.union(self.Astar.base)
            object.__setattr__(self, "A", self.A.over(base))
            object.__setattr__(self, "Astar", self.Astar.over(base))

    @property
    def rank(self):
        return self.A.rank

    @property
    def base(self):
        return self.A.base

    def over(self, base):
        return BialgebroidCandidate(self.A.over(base), self.Astar.over(base))

    @classmethod
    def trivial_dual(cls, A):
        return cls(A, AlgebroidStructure.abelian(A.base, A.rank, dual=True))

    def __eq__(self, other):
        if not isinstance(other, BialgebroidCandidate):
            return NotImplemented
        return self.A == other.A and self.Astar == other.Astar

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class SymTensor:
    """Symmetric r x r matrix of Scalars."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        if n == 0 or any(len(row) != n for row in m):
            raise ShapeMismatch("symmetric tensors need a square nonempty matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise ShapeMismatch(f"matrix is not symmetric at ({i + 1}, {j + 1})")

    @classmethod
    def from_rows(cls, base, rows):
        return cls([[base.scalar(v) for v in row] for row in rows])

    @classmethod
    def zero(cls, base, n):
        return cls([[base.zero] * n for _ in range(n)])

    @classmethod
    def identity(cls, base, n):
        return cls([[base.one if i == j else base.zero for j in range(n)] for i in range(n)])

    @property
    def size(self):
        return len(self.matrix)

    @property
    def base(self):
        return self.matrix[0][0].base

    def over(self, base):
        return SymTensor([[a.lift(base) for a in row] for row in self.matrix])

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def sharp(self, xi):
        """H#(xi), a vector of the partner class."""
        if len(xi.coeffs) != self.size:
            raise ShapeMismatch("rank mismatch in H#")
        out = []
        for j in range(self.size):
            acc = None
            for i, c in enumerate(xi.coeffs):
                h = self.matrix[i][j]
                if c.is_zero or h.is_zero:
                    continue
                acc = c * h if acc is None else acc + c * h
            out.append(self.base.zero if acc is None else acc)
        return (Section if isinstance(xi, Covector) else Covector)(out)

    def __call__(self, xi, eta):
        return pair(self.sharp(xi), eta)

    def det(self):
        return linalg.det([list(r) for r in self.matrix])

    def inverse(self):
        if self.det().is_zero:
            raise Degenerate("symmetric tensor is degenerate")
        return SymTensor(linalg.inverse([list(r) for r in self.matrix]))

    def as_tensor(self, cls):
        """Degree-1 tensor of class ``cls`` with components H_ij at ((i,), j)."""
        terms = {((i,), j): self.matrix[i][j] for i in range(self.size) for j in range(self.size)}
        return cls(self.base, self.size, 1, terms)

    @property
    def is_zero(self):
        return all(a.is_zero for r in self.matrix for a in r)

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return self.size == other.size and all(
            a == b for r, s in zip(self.matrix, other.matrix) for a, b in zip(r, s)
        )

    __hash__ = object.__hash__

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.matrix) + "]"


def _require_valid(*structures):
    for s in structures:
        report = check_left_symmetric(s)
        if not report:
            raise InvalidStructure(f"not a left-symmetric algebroid: {report.witness}", report)


def d_star(cand, f):
    """d_{M*} f, a Section."""
    return differential(cand.Astar, f)


# -- compatibility conditions -------------------------------------------------------


def cond1_defect(cand, xi, eta):
    """delta[xi, eta]_* - L_xi delta eta + L_eta delta xi, an element of A* (x) A*."""
    A, As = cand.A, cand.Astar
    d_eta = coboundary_lsa(A, FormTensor.from_vector(eta))
    d_xi = coboundary_lsa(A, FormTensor.from_vector(xi))
    lhs = coboundary_lsa(A, FormTensor.from_vector(bracket(As, xi, eta)))
    return lhs - lie_der_poly(As, xi, d_eta) + lie_der_poly(As, eta, d_xi)


def cond2_defect(cand, x, y):
    """delta_*[x, y] - L_x delta_* y + L_y delta_* x, an element of A (x) A."""
    A, As = cand.A, cand.Astar
    d_y = coboundary_lsa(As, PolyTensor.from_vector(y))
    d_x = coboundary_lsa(As, PolyTensor.from_vector(x))
    lhs = coboundary_lsa(As, PolyTensor.from_vector(bracket(A, x, y)))
    return lhs - lie_der_poly(A, x, d_y) + lie_der_poly(A, y, d_x)


def _pair_check(name, defect, frame, labels, generic, samples):
    """Run a bilinear defect on frame pairs, generic affine pairs and samples."""
    cases = 0
    for i, u in enumerate(frame):
        for j, v in enumerate(frame):
            cases += 1
            res = defect(u, v)
            if not res.is_zero:
                return Report.fail(name, [labels[i], labels[j]], res, cases=cases)
    for (lu, u), (lv, v) in generic:
        cases += 1
        res = defect(u, v)
        if not res.is_zero:
            return Report.fail(name, [lu, lv], res, cases=cases)
    for u, v in samples:
        cases += 1
        res = defect(u, v)
        if not res.is_zero:
            return Report.fail(name, [str(u), str(v)], res, cases=cases)
    return Report.ok(name, cases=cases)


def _generic_pairs(cand, cls, labels):
    """(f b_i, g b_j) for generic affine f, g over every frame pair."""
    ext, f = generic_affine(cand.base, "f")
    ext, g = generic_affine(ext, "g")
    lifted = cand.over(ext)
    r = cand.rank
    frame = [cls.basis(ext, r, i) for i in range(r)]
    pairs = []
    for i in range(r):
        for j in range(r):
            pairs.append(((f"f*{labels[i]}", frame[i].scale(f)), (f"g*{labels[j]}", frame[j].scale(g))))
    return lifted, pairs


def check_bialgebroid(cand, trials=25, seed=0):
    """Both compatibility conditions on frame pairs, generic affine pairs and samples."""
    _require_valid(cand.A, cand.Astar)
    r = cand.rank
    base = cand.base
    e_labels = [cand.A.label(i) for i in range(r)]
    eps_labels = [cand.Astar.label(i) for i in range(r)]

    reports = []
    for name, cls, labels, defect in (
        ("cond1", Covector, eps_labels, cond1_defect),
        ("cond2", Section, e_labels, cond2_defect),
    ):
        lifted, generic = _generic_pairs(cand, cls, labels)
        frame = [cls.basis(base, r, i) for i in range(r)]
        rng = rng_for(seed, "bialgebroid", name)
        samples = [(random_vector(cls, base, r, rng), random_vector(cls, base, r, rng)) for _ in range(trials)]

        def run(u, v, _defect=defect, _lifted=lifted):
            return _defect(_lifted if u.base.names != base.names else cand, u, v)

        reports.append(_pair_check(name, run, frame, labels, generic, samples))
    diagnostics = lemma_identities(cand)
    return Report.combine(
        "left-symmetric bialgebroid", reports, trials=trials, seed=seed,
        diagnostics={c.name: c.passed for c in diagnostics.children},
    )


def lemma_identities(cand):
    """x . d_* f = -R_{d f} x and xi ._* d f = -R_{d_* f} xi for generic affine f.

    These follow from the compatibility conditions; they are reported as
    diagnostics rather than gates.
    """
    ext, f = generic_affine(cand.base)
    c = cand.over(ext)
    A, As = c.A, c.Astar
    r = c.rank
    df, dsf = differential(A, f), differential(As, f)
    out = []
    for name, alg, other, d_self, d_other, labels in (
        ("x.d*f = -R_df x", A, As, dsf, df, [A.label(i) for i in range(r)]),
        ("xi.*df = -R_d*f xi", As, A, df, dsf, [As.label(i) for i in range(r)]),
    ):
        rep = Report.ok(name)
        for i in range(r):
            x = alg.basis(i)
            res = multiply(alg, x, d_self) + dual_right(other, d_other, x)
            if not res.is_zero:
                rep = Report.fail(name, [labels[i], "f=generic affine"], res)
                break
        out.append(rep)
    return Report.combine("bialgebroid lemmas", out)


def anchor_compat_defect(cand, x, xi):
    """[a(x), a_*(xi)] - a_*(L*_x xi) + a(L*_xi x) as a vector field."""
    A, As = cand.A, cand.Astar
    lhs = anchor_of(A, x).commutator(anchor_of(As, xi))
    return lhs - anchor_of(As, dual_apply(A, x, xi)) + anchor_of(A, dual_apply(As, xi, x))


def check_anchor_compat(cand):
    r = cand.rank
    for i in range(r):
        for j in range(r):
            res = anchor_compat_defect(cand, cand.A.basis(i), cand.Astar.basis(j))
            if not res.is_zero:
                return Report.fail("anchor compatibility", [cand.A.label(i), cand.Astar.label(j)], res)
    return Report.ok("anchor compatibility")


# -- the S-bracket ----------------------------------------------------------------------


def _check_H(A, H):
    if H.size != A.rank:
        raise ShapeMismatch(f"H has size {H.size}, structure has rank {A.rank}")
    if H.base.names != A.base.names:
        base = A.base.union(H.base)
        return A.over(base), H.over(base)
    return A, H


def s_bracket_value(A, H, xi1, xi2, xi3):
    """[[H, H]](xi1, xi2, xi3) from the defining five-term formula."""
    h1, h2, h3 = H.sharp(xi1), H.sharp(xi2), H.sharp(xi3)
    return (
        act(A, h1, pair(h2, xi3))
        - act(A, h2, pair(h1, xi3))
        + pair(xi1, multiply(A, h2, h3))
        - pair(xi2, multiply(A, h1, h3))
        - pair(xi3, bracket(A, h1, h2))
    )


def s_bracket(A, H):
    """[[H, H]] as a degree-2 poly-tensor (components at (i<j, k))."""
    A, H = _check_H(A, H)
    r = A.rank
    co = [A.cobasis(i) for i in range(r)]
    terms = {}
    for J in combinations(range(r), 2):
        for k in range(r):
            v = s_bracket_value(A, H, co[J[0]], co[J[1]], co[k])
            if not v.is_zero:
                terms[(J, k)] = v
    return A.poly_cls(A.base, r, 2, terms)


def first_nonzero(T, labels):
    """Lexicographically first nonzero component of a tensor, as a witness pair."""
    for key in sorted(T.terms):
        J, l = key
        return [labels[j] for j in J] + [labels[l]], T.terms[key]
    return None


def h_product(A, H, xi, eta):
    """xi ._H eta = L_{H# xi} eta - R_{H# eta} xi - d_M H(xi, eta)."""
    hx, he = H.sharp(xi), H.sharp(eta)
    return dual_lie_derivative(A, hx, eta) - dual_right(A, he, xi) - differential(A, pair(hx, eta))


def mult_from_H(A, H):
    """Left-symmetric candidate on A* with products ._H and anchor a o H#."""
    A, H = _check_H(A, H)
    r = A.rank
    co = [A.cobasis(i) for i in range(r)]
    c = [[h_product(A, H, co[i], co[j]).coeffs for j in range(r)] for i in range(r)]
    anchor = [anchor_of(A, H.sharp(co[i])) for i in range(r)]
    return AlgebroidStructure(LEFT_SYMMETRIC, A.base, c, anchor, dual=True)


def homo_defect(A, H, xi, eta):
    """H#(xi ._H eta) - H# xi . H# eta - [[H, H]](xi, ., eta)."""
    A, H = _check_H(A, H)
    S = s_bracket(A, H)
    lhs = H.sharp(h_product(A, H, xi, eta)) - multiply(A, H.sharp(xi), H.sharp(eta))
    r = A.rank
    middle = A.section_cls([S.evaluate([xi, A.cobasis(k), eta]) for k in range(r)])
    return lhs - middle


def homo1_defect(A, H, xi, eta):
    """H#[xi, eta]_H - [H# xi, H# eta] - [[H, H]](xi, eta, .)."""
    A, H = _check_H(A, H)
    S = s_bracket(A, H)
    br = h_product(A, H, xi, eta) - h_product(A, H, eta, xi)
    lhs = H.sharp(br) - bracket(A, H.sharp(xi), H.sharp(eta))
    return lhs - S.contract_left(xi).contract_left(eta).to_vector()


def s_equation_equiv(A, H):
    """Compare [[H, H]] = 0 with delta(H^{-1}) = 0."""
    A, H = _check_H(A, H)
    if H.det().is_zero:
        raise Degenerate("H is degenerate")
    s_zero = s_bracket(A, H).is_zero
    d = coboundary_lsa(A, H.inverse().as_tensor(A.form_cls))
    d_zero = d.is_zero
    details = {"s_bracket_zero": s_zero, "delta_inverse_zero": d_zero}
    if s_zero == d_zero:
        return Report.ok("S-equation equivalence", **details)
    return Report.fail("S-equation equivalence", ["H"], f"[[H,H]]=0 is {s_zero}, delta(H^-1)=0 is {d_zero}",
                       **details)


def homo2_defect(cand, H, xi, x):
    """a[H# xi, x] - a(L*_xi x - H#(L*_x xi)) as a vector field."""
    A, As = cand.A, cand.Astar
    lhs = anchor_of(A, bracket(A, H.sharp(xi), x))
    rhs = anchor_of(A, dual_apply(As, xi, x) - H.sharp(dual_apply(A, x, xi)))
    return lhs - rhs


def build_report(A, H, cand, trials=25, seed=0):
    """Homomorphism, anchor and bialgebroid checks for the H construction."""
    r = A.rank
    co = [A.cobasis(i) for i in range(r)]
    hom = Report.ok("H# multiplicative")
    for i in range(r):
        for j in range(r):
            res = H.sharp(multiply(cand.Astar, co[i], co[j])) - multiply(A, H.sharp(co[i]), H.sharp(co[j]))
            if not res.is_zero:
                hom = Report.fail("H# multiplicative", [cand.Astar.label(i), cand.Astar.label(j)], res)
                break
        if not hom:
            break
    anchors = Report.ok("a_* = a o H#")
    for i in range(r):
        res = cand.Astar.anchor[i] - anchor_of(A, H.sharp(co[i]))
        if not res.is_zero:
            anchors = Report.fail("a_* = a o H#", [cand.Astar.label(i)], res)
            break
    h2 = Report.ok("homo2")
    for i in range(r):
        for j in range(r):
            res = homo2_defect(cand, H, co[i], A.basis(j))
            if not res.is_zero:
                h2 = Report.fail("homo2", [cand.Astar.label(i), A.label(j)], res)
                break
        if not h2:
            break
    lsa = check_left_symmetric(cand.Astar)
    bi = check_bialgebroid(cand, trials=trials, seed=seed) if lsa else Report.fail(
        "left-symmetric bialgebroid", ["A*"], "dual structure is not left-symmetric")
    return Report.combine("H construction", [lsa, hom, anchors, h2, bi])


def build_bialgebroid_from_H(A, H, verify=True, trials=25, seed=0):
    """(A, A*_H) for a solution of [[H, H]] = 0."""
    A, H = _check_H(A, H)
    S = s_bracket(A, H)
    if not S.is_zero:
        labels = [A.cobasis(i).label(i) for i in range(A.rank)]
        inputs, value = first_nonzero(S, labels)
        raise SEquationFailed(f"[[H,H]] != 0 at ({', '.join(inputs)}): {value}", tuple(inputs), value)
    cand = BialgebroidCandidate(A, mult_from_H(A, H))
    if verify:
        report = build_report(A, H, cand, trials=trials, seed=seed)
        if not report:
            raise InvalidStructure(f"H construction failed: {report.witness}", report)
    return cand
