"""Lie derivatives, right multiplications, contractions and coboundaries.

On a poly-tensor e_J (x) e_l the Lie derivative replaces each wedge slot by
x . e_j and the last slot by the bracket [x, e_l]; the right multiplication
uses e_j . x with a minus sign on the wedge slots.  Their dual versions on
forms are computed by pairing against the frame tensors.
"""

from __future__ import annotations

from itertools import combinations

from .algebroid import act, bracket, differential, multiply
from .errors import DegreeError, NotAlternating, ShapeMismatch
from .report import Report
from .sampling import generic_affine, random_scalar, random_tensor, random_vector, rng_for
from .scalar import Scalar
from .tensors import Covector, Section, outer, pair, sort_indices, tensor_cls_for


def _check_tensor(alg, T):
    if T.rank != alg.rank:
        raise ShapeMismatch(f"rank-{T.rank} tensor for a rank-{alg.rank} structure")


def _add(terms, key, value):
    if value.is_zero:
        return
    terms[key] = terms[key] + value if key in terms else value


def _slot_terms(terms, J, l, a, image, factor):
    """Add factor * (e_J with slot a replaced by ``image``) (x) e_l."""
    for m, pm in enumerate(image.coeffs):
        if pm.is_zero:
            continue
        s = sort_indices(J[:a] + (m,) + J[a + 1:])
        if s is None:
            continue
        sign, K = s
        term = factor * pm
        _add(terms, (K, l), term if sign > 0 else -term)


def lie_der_poly(alg, X, T):
    """Lie derivative of a poly-tensor along the section X."""
    _check_tensor(alg, T)
    terms = {}
    cache = {}
    for (J, l), coeff in T.terms.items():
        for a, j in enumerate(J):
            if j not in cache:
                cache[j] = multiply(alg, X, alg.basis(j))
            _slot_terms(terms, J, l, a, cache[j], coeff)
        last = bracket(alg, X, alg.basis(l).scale(coeff))
        for m, v in enumerate(last.coeffs):
            _add(terms, (J, m), v)
    return type(T)(T.base, T.rank, T.degree, terms)


def right_mult_poly(alg, X, T):
    """R_X on poly-tensors; C-infinity-linear in T."""
    _check_tensor(alg, T)
    terms = {}
    cache = {}
    for (J, l), coeff in T.terms.items():
        for a, j in enumerate(J):
            if j not in cache:
                cache[j] = multiply(alg, alg.basis(j), X)
            _slot_terms(terms, J, l, a, cache[j], -coeff)
        if l not in cache:
            cache[l] = multiply(alg, alg.basis(l), X)
        for m, v in enumerate(cache[l].coeffs):
            if not v.is_zero:
                _add(terms, (J, m), coeff * v)
    return type(T)(T.base, T.rank, T.degree, terms)


def contract_left(T, v):
    return T.contract_left(v)


def contract_right(T, v):
    return T.contract_right(v)


def _frame_tensor(T_cls, base, rank, J, l):
    return T_cls.basis_element(base, rank, J, l)


def lie_der_form(alg, X, phi):
    """<L_X phi, T> = a(X)<phi, T> - <phi, L_X T> against every frame tensor T."""
    _check_tensor(alg, phi)
    frame_cls = phi.partner
    terms = {}
    for J, l in phi.basis_keys(phi.rank, phi.degree):
        val = act(alg, X, phi.component(J, l))
        image = lie_der_poly(alg, X, _frame_tensor(frame_cls, phi.base, phi.rank, J, l))
        val = val - phi.pairing(image.dual_view())
        _add(terms, (J, l), val)
    return type(phi)(phi.base, phi.rank, phi.degree, terms)


def right_mult_form(alg, X, phi):
    """<R_X phi, T> = -<phi, R_X T>."""
    _check_tensor(alg, phi)
    frame_cls = phi.partner
    terms = {}
    for J, l in phi.basis_keys(phi.rank, phi.degree):
        image = right_mult_poly(alg, X, _frame_tensor(frame_cls, phi.base, phi.rank, J, l))
        _add(terms, (J, l), -phi.pairing(image.dual_view()))
    return type(phi)(phi.base, phi.rank, phi.degree, terms)


# -- coboundaries ------------------------------------------------------------------


def coboundary_value(alg, phi, xs):
    """Value of delta(phi) on n+1 sections, straight from the defining alternating sum.

    ``phi`` is an n-cochain (a form tensor of degree n-1); the last argument is
    the distinguished slot.
    """
    n = len(xs) - 1
    if phi.degree != n - 1:
        raise DegreeError(f"a degree-{phi.degree} cochain takes {phi.degree + 1} arguments")
    base = phi.base
    total = base.zero
    last = xs[n]
    for i in range(n):
        rest = xs[:i] + xs[i + 1:]
        term = act(alg, xs[i], phi.evaluate(rest))
        term = term - phi.evaluate(xs[:i] + xs[i + 1:n] + [multiply(alg, xs[i], last)])
        total = total + term if i % 2 == 0 else total - term
    for i in range(n):
        for j in range(i + 1, n):
            others = [x for k, x in enumerate(xs) if k not in (i, j)]
            term = phi.evaluate([bracket(alg, xs[i], xs[j])] + others)
            total = total + term if (i + j) % 2 == 0 else total - term
    return total


def coboundary_lsa(alg, phi):
    """delta: C^n -> C^{n+1} with trivial coefficients; degree n-1 -> degree n."""
    _check_tensor(alg, phi)
    n = phi.degree + 1
    frame = [alg.basis(i) for i in range(alg.rank)]
    terms = {}
    for J in combinations(range(alg.rank), n):
        for l in range(alg.rank):
            xs = [frame[j] for j in J] + [frame[l]]
            _add(terms, (J, l), coboundary_value(alg, phi, xs))
    return type(phi)(phi.base, phi.rank, n, terms)


def is_alternating(phi):
    """Whether a degree-m form tensor is an alternating (m+1)-form."""
    for (J, l), c in phi.terms.items():
        if l in J:
            return False
    for (J, l), c in phi.terms.items():
        sign, K = sort_indices(J + (l,))
        canon = phi.component(K[:-1], K[-1])
        if c != (canon if sign > 0 else -canon):
            return False
    for K in combinations(range(phi.rank), phi.degree + 1):
        canon = phi.component(K[:-1], K[-1])
        for p in range(len(K) - 1):
            sign = 1 if (len(K) - 1 - p) % 2 == 0 else -1
            other = phi.component(K[:p] + K[p + 1:], K[p])
            if other != (canon if sign > 0 else -canon):
                return False
    return True


def alternating_form(cls, base, rank, degree, values):
    """Fill every slot ordering of an alternating form from canonical values.

    ``values`` maps strictly increasing (degree+1)-tuples to Scalars.
    """
    terms = {}
    for K, v in values.items():
        K = tuple(K)
        if any(a >= b for a, b in zip(K, K[1:])) or len(K) != degree + 1:
            raise ShapeMismatch(f"canonical keys must be increasing {degree + 1}-tuples, got {K}")
        v = base.scalar(v)
        for p in range(len(K)):
            sign = 1 if (len(K) - 1 - p) % 2 == 0 else -1
            _add(terms, (K[:p] + K[p + 1:], K[p]), v if sign > 0 else -v)
    return cls(base, rank, degree, terms)


def coboundary_lie(lie, form):
    """Chevalley-Eilenberg differential with the anchor.

    A Scalar gives d f as a cosection; a form tensor of degree m, read as an
    alternating (m+1)-form, gives a degree m+1 form tensor.
    """
    if isinstance(form, Scalar):
        return differential(lie, form)
    if isinstance(form, (Section, Covector)):
        form = tensor_cls_for(type(form)).from_vector(form)
    _check_tensor(lie, form)
    if not is_alternating(form):
        raise NotAlternating("form is not alternating in all of its slots")
    k = form.degree + 2
    frame = [lie.basis(i) for i in range(lie.rank)]
    values = {}
    for K in combinations(range(lie.rank), k):
        xs = [frame[i] for i in K]
        total = form.base.zero
        for i in range(k):
            term = act(lie, xs[i], form.evaluate(xs[:i] + xs[i + 1:]))
            total = total + term if i % 2 == 0 else total - term
        for i in range(k):
            for j in range(i + 1, k):
                others = [x for p, x in enumerate(xs) if p not in (i, j)]
                term = form.evaluate([bracket(lie, xs[i], xs[j])] + others)
                total = total + term if (i + j) % 2 == 0 else total - term
        if not total.is_zero:
            values[K] = total
    return alternating_form(type(form), form.base, form.rank, form.degree + 1, values)


def is_2cocycle(lie, form):
    """Pass iff d form = 0; the witness is the first nonzero canonical value."""
    if form.degree != 1:
        raise DegreeError("a 2-form is a degree-1 form tensor")
    d = coboundary_lie(lie, form)
    for K in combinations(range(lie.rank), 3):
        v = d.component(K[:-1], K[-1])
        if not v.is_zero:
            return Report.fail("2-cocycle", [lie.label(i) for i in K], v)
    return Report.ok("2-cocycle")


def coboundary_square(alg, phi):
    """delta(delta(phi)); measured, not assumed to vanish."""
    return coboundary_lsa(alg, coboundary_lsa(alg, phi))


# -- identity suite -----------------------------------------------------------------

IDENTITY_NAMES = (
    "lie-derivative-bracket (poly)",
    "lie-derivative-bracket (form)",
    "lie-derivative-function-leibniz (poly)",
    "lie-derivative-function-section (poly)",
    "coboundary-leibniz",
    "contraction-product",
    "cartan-formula",
    "lie-derivative-function-leibniz (form)",
    "lie-derivative-function-section (form)",
    "right-multiplication-tensorial",
    "right-multiplication-function-section",
)


class _Recorder:
    def __init__(self):
        self.failures = {name: None for name in IDENTITY_NAMES}
        self.cases = {name: 0 for name in IDENTITY_NAMES}

    def record(self, name, residual, inputs):
        self.cases[name] += 1
        if self.failures[name] is None and not residual.is_zero:
            self.failures[name] = (inputs, str(residual))

    def report(self, **details):
        children = []
        for name in IDENTITY_NAMES:
            fail = self.failures[name]
            if fail is None:
                children.append(Report.ok(name, cases=self.cases[name]))
            else:
                children.append(Report.fail(name, fail[0], fail[1], cases=self.cases[name]))
        return Report.combine("identity suite", children, **details)


def _identities(alg, rec, X, Y, T, phi, xi, f, labels):
    """Evaluate all eleven identities for one sample and record residuals."""
    lx, ly, lT, lphi, lxi, lf = labels
    df = differential(alg, f)
    ax_f = act(alg, X, f)
    fX = X.scale(f)

    br = bracket(alg, X, Y)
    res = lie_der_poly(alg, br, T) - (
        lie_der_poly(alg, X, lie_der_poly(alg, Y, T)) - lie_der_poly(alg, Y, lie_der_poly(alg, X, T))
    )
    rec.record("lie-derivative-bracket (poly)", res, [lx, ly, lT])
    res = lie_der_form(alg, br, phi) - (
        lie_der_form(alg, X, lie_der_form(alg, Y, phi)) - lie_der_form(alg, Y, lie_der_form(alg, X, phi))
    )
    rec.record("lie-derivative-bracket (form)", res, [lx, ly, lphi])

    LxT = lie_der_poly(alg, X, T)
    res = lie_der_poly(alg, X, T.scale(f)) - (LxT.scale(f) + T.scale(ax_f))
    rec.record("lie-derivative-function-leibniz (poly)", res, [lx, lT, lf])
    hook = T.contract_right(df).otimes(X)
    res = lie_der_poly(alg, fX, T) - (LxT.scale(f) - hook)
    rec.record("lie-derivative-function-section (poly)", res, [lx, lT, lf])

    xi_form = phi.from_vector(xi)
    res = coboundary_lsa(alg, xi_form.scale(f)) - (coboundary_lsa(alg, xi_form).scale(f) + outer(df, xi))
    rec.record("coboundary-leibniz", res, [lxi, lf])

    Lxphi = lie_der_form(alg, X, phi)
    if phi.degree >= 1:
        res = phi.contract_left(multiply(alg, X, Y)) - (
            lie_der_form(alg, X, phi.contract_left(Y)) - lie_der_form(alg, X, phi).contract_left(Y)
        )
        rec.record("contraction-product", res, [lx, ly, lphi])
        res = Lxphi - (
            coboundary_lsa(alg, phi.contract_left(X))
            + coboundary_lsa(alg, phi).contract_left(X)
            - right_mult_form(alg, X, phi)
        )
        rec.record("cartan-formula", res, [lx, lphi])

    res = lie_der_form(alg, X, phi.scale(f)) - (Lxphi.scale(f) + phi.scale(ax_f))
    rec.record("lie-derivative-function-leibniz (form)", res, [lx, lphi, lf])
    res = lie_der_form(alg, fX, phi) - (Lxphi.scale(f) + phi.contract_right(X).otimes(df))
    rec.record("lie-derivative-function-section (form)", res, [lx, lphi, lf])

    Rxi = right_mult_form(alg, X, xi_form)
    res = right_mult_form(alg, X, xi_form.scale(f)) - Rxi.scale(f)
    rec.record("right-multiplication-tensorial", res, [lx, lxi, lf])
    res = right_mult_form(alg, fX, xi_form) - (Rxi.scale(f) - xi_form.from_vector(df).scale(pair(X, xi)))
    rec.record("right-multiplication-function-section", res, [lx, lxi, lf])


def _frame_label(alg, T):
    prefix = T.vector_cls.prefix
    ((J, l), _), = T.terms.items()
    wedge = "^".join(f"{prefix}{j + 1}" for j in J)
    return f"{wedge}⊗{prefix}{l + 1}" if wedge else f"{prefix}{l + 1}"


def identity_suite(alg, trials=25, seed=0, max_tensor_degree=2):
    """Check all eleven calculus identities.

    Basis layer: every frame section x, y, every frame tensor and frame
    covector, with the generic affine function f.  Random layer: ``trials``
    samples of polynomial sections, tensors and f of degree <= 2.
    """
    ext, f = generic_affine(alg.base)
    A = alg.over(ext)
    rec = _Recorder()
    r = A.rank
    top = min(max_tensor_degree, r)
    frame = [A.basis(i) for i in range(r)]
    coframe = [A.cobasis(i) for i in range(r)]
    poly_cls, form_cls = A.poly_cls, A.form_cls
    for degree in range(top + 1):
        for J, l in poly_cls.basis_keys(r, degree):
            T = poly_cls.basis_element(ext, r, J, l)
            phi = form_cls.basis_element(ext, r, J, l)
            lT, lphi = _frame_label(A, T), _frame_label(A, phi)
            for i in range(r):
                j = (i + 1 + l) % r
                xi = coframe[(i + l) % r]
                _identities(
                    A, rec, frame[i], frame[j], T, phi, xi, f,
                    (A.label(i), A.label(j), lT, lphi, str(xi), "f=generic affine"),
                )
    base = alg.base
    for t in range(trials):
        rng = rng_for(seed, "identity-suite", t)
        X = random_vector(alg.section_cls, base, r, rng)
        Y = random_vector(alg.section_cls, base, r, rng)
        degree = rng.randint(0, top)
        T = random_tensor(poly_cls, base, r, degree, rng)
        phi = random_tensor(form_cls, base, r, degree, rng)
        xi = random_vector(alg.cosection_cls, base, r, rng)
        g = random_scalar(base, rng, degree=2, terms=3)
        _identities(alg, rec, X, Y, T, phi, xi, g, (str(X), str(Y), str(T), str(phi), str(xi), f"f={g}"))
    return rec.report(trials=trials, seed=seed)
