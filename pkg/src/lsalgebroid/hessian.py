"""Flat torsion-free connections, pseudo-Hessian metrics and the Hessian bialgebroid."""

from __future__ import annotations

from dataclasses import dataclass

from .algebroid import LEFT_SYMMETRIC, AlgebroidStructure
from .bialgebroid import SymTensor, build_bialgebroid_from_H, first_nonzero, s_equation_equiv
from .calculus import coboundary_lsa
from .errors import Degenerate, InvalidStructure, NotFlat, NotHessian, NotTorsionFree, ShapeMismatch
from .presymplectic import check_presymplectic, double
from .report import Report
from .scalar import Base, VectorField, parse_scalar
from .tensors import FormTensor


@dataclass(frozen=True, eq=False)
class FlatConnection:
    """Christoffel symbols ``gamma[i][j][k]``: nabla_{d_i} d_j = sum_k gamma_ij^k d_k."""

    base: Base
    gamma: tuple

    def __post_init__(self):
        g = tuple(tuple(tuple(row) for row in plane) for plane in self.gamma)
        n = self.base.nvars
        if len(g) != n or any(len(p) != n or any(len(row) != n for row in p) for p in g):
            raise ShapeMismatch(f"Christoffel symbols must be {n}x{n}x{n}")
        object.__setattr__(self, "gamma", g)

    @classmethod
    def coordinate(cls, base):
        n = base.nvars
        return cls(base, [[[base.zero] * n for _ in range(n)] for _ in range(n)])

    @classmethod
    def from_table(cls, base, table):
        """``table`` maps (i, j) to {k: value}, 0-based."""
        n = base.nvars
        g = [[[base.zero] * n for _ in range(n)] for _ in range(n)]
        for (i, j), row in table.items():
            for k, v in row.items():
                g[i][j][k] = base.scalar(v)
        return cls(base, g)

    @property
    def n(self):
        return self.base.nvars

    def label(self, i):
        return f"∂{i + 1}"


def torsion_witness(conn):
    n = conn.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                t = conn.gamma[i][j][k] - conn.gamma[j][i][k]
                if not t.is_zero:
                    return (i, j, k), t
    return None


def curvature(conn, i, j, l, m):
    """R_ijl^m = d_i G_jl^m - d_j G_il^m + G_jl^p G_ip^m - G_il^p G_jp^m."""
    G, x = conn.gamma, conn.base.variables
    total = G[j][l][m].derive(x[i]) - G[i][l][m].derive(x[j])
    for p in range(conn.n):
        total = total + G[j][l][p] * G[i][p][m] - G[i][l][p] * G[j][p][m]
    return total


def curvature_witness(conn):
    n = conn.n
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(n):
                for m in range(n):
                    R = curvature(conn, i, j, l, m)
                    if not R.is_zero:
                        return (i, j, l, m), R
    return None


def connection_algebroid(conn):
    """(TM, nabla, id) with products gamma_ij^k and anchor d_i."""
    tw = torsion_witness(conn)
    if tw is not None:
        (i, j, k), t = tw
        report = Report.fail("torsion-free", [conn.label(i), conn.label(j), f"component {k + 1}"], t)
        raise NotTorsionFree(f"torsion at ({conn.label(i)}, {conn.label(j)}): {t}", report)
    cw = curvature_witness(conn)
    if cw is not None:
        idx, R = cw
        report = Report.fail("flat", [conn.label(idx[0]), conn.label(idx[1]), conn.label(idx[2])], R)
        raise NotFlat(f"curvature R at {tuple(a + 1 for a in idx)}: {R}", report)
    base = conn.base
    anchor = [VectorField.coordinate(base, mu) for mu in range(conn.n)]
    labels = tuple(conn.label(i) for i in range(conn.n))
    return AlgebroidStructure(LEFT_SYMMETRIC, base, conn.gamma, anchor, False, labels)


def parse_potential(text, variables):
    base = Base(tuple(variables))
    phi = parse_scalar(text, base)
    return base, phi


def hessian_metric(phi, conn=None):
    """g_ij = d_i d_j phi - gamma_ij^k d_k phi (plain second partials for affine coordinates)."""
    base = phi.base
    if not phi.is_polynomial:
        raise InvalidStructure("potentials must be polynomial")
    conn = conn or FlatConnection.coordinate(base)
    x = base.variables
    first = [phi.derive(v) for v in x]
    n = len(x)
    g = [[first[j].derive(x[i]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not conn.gamma[i][j][k].is_zero:
                    g[i][j] = g[i][j] - conn.gamma[i][j][k] * first[k]
    metric = SymTensor(g)
    if metric.det().is_zero:
        raise Degenerate("the Hessian of the potential is degenerate")
    return metric


def covariant_derivative(conn, g, i, j, k):
    """(nabla_i g)(d_j, d_k)."""
    G, x = conn.gamma, conn.base.variables
    total = g[j, k].derive(x[i])
    for p in range(conn.n):
        total = total - G[i][j][p] * g[p, k] - G[i][k][p] * g[j, p]
    return total


def codazzi_witness(conn, g):
    n = conn.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                d = covariant_derivative(conn, g, i, j, k) - covariant_derivative(conn, g, j, i, k)
                if not d.is_zero:
                    return (i, j, k), d
    return None


def delta_g(conn, g):
    return coboundary_lsa(connection_algebroid(conn), g.as_tensor(FormTensor))


def check_pseudo_hessian(conn, g):
    """delta g = 0 and the Codazzi condition, with their agreement."""
    if g.size != conn.n:
        raise ShapeMismatch("metric size does not match the number of variables")
    if g.base.names != conn.base.names:
        g = g.over(conn.base)
    labels = [conn.label(i) for i in range(conn.n)]
    d = delta_g(conn, g)
    if d.is_zero:
        dg = Report.ok("δg = 0")
    else:
        inputs, value = first_nonzero(d, labels)
        dg = Report.fail("δg = 0", inputs, value)
    cw = codazzi_witness(conn, g)
    if cw is None:
        codazzi = Report.ok("Codazzi")
    else:
        (i, j, k), value = cw
        codazzi = Report.fail("Codazzi", [labels[i], labels[j], labels[k]], value)
    if dg.passed == codazzi.passed:
        agree = Report.ok("criteria agree")
    else:
        agree = Report.fail("criteria agree", ["δg", "Codazzi"], f"{dg.passed} vs {codazzi.passed}")
    return Report.combine("pseudo-Hessian", [dg, codazzi, agree])


def hessian_bialgebroid(conn, g, trials=25, seed=0):
    """(T_nabla M, T*_H M) with H = g^{-1}."""
    report = check_pseudo_hessian(conn, g)
    if not report:
        raise NotHessian(f"metric is not pseudo-Hessian: {report.witness}", report)
    if g.det().is_zero:
        raise Degenerate("metric is degenerate")
    alg = connection_algebroid(conn)
    H = g.over(alg.base).inverse()
    return build_bialgebroid_from_H(alg, H, verify=True, trials=trials, seed=seed)


def hessian_double(conn, g, trials=25, seed=0):
    cand = hessian_bialgebroid(conn, g, trials=trials, seed=seed)
    return double(cand, verify=False)


def hessian_pipeline(conn, g, trials=25, seed=0):
    """Every stage as one report: pseudo-Hessian, H equivalence, bialgebroid, double."""
    stages = [check_pseudo_hessian(conn, g)]
    if not stages[0]:
        return Report.combine("Hessian pipeline", stages)
    alg = connection_algebroid(conn)
    H = g.over(alg.base).inverse()
    stages.append(s_equation_equiv(alg, H))
    try:
        cand = build_bialgebroid_from_H(alg, H, verify=True, trials=trials, seed=seed)
    except InvalidStructure as exc:
        stages.append(exc.report or Report.fail("Hessian bialgebroid", ["H"], str(exc)))
        return Report.combine("Hessian pipeline", stages)
    stages.append(Report.ok("Hessian bialgebroid"))
    stages.append(check_presymplectic(double(cand, verify=False), trials=trials, seed=seed))
    return Report.combine("Hessian pipeline", stages)
