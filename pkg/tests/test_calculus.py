from itertools import combinations

import sympy
import pytest
from hypothesis import given, strategies as st

from helpers import instance, same
from lsalgebroid.algebroid import AlgebroidStructure, anchor_of, bracket, check_left_symmetric, multiply, sub_adjacent
from lsalgebroid.calculus import (
    alternating_form,
    coboundary_lie,
    coboundary_lsa,
    coboundary_square,
    contract_left,
    contract_right,
    identity_suite,
    is_2cocycle,
    lie_der_form,
    lie_der_poly,
    right_mult_form,
    right_mult_poly,
)
from lsalgebroid.corpus import tangent
from lsalgebroid.errors import DegreeError, NotAlternating
from lsalgebroid.sampling import random_tensor, random_vector, rng_for
from lsalgebroid.tensors import Covector, FormTensor, PolyTensor, Section

X = sympy.Symbol("x")


def poly(alg, J, l, degree=None):
    return PolyTensor.basis_element(alg.base, alg.rank, J, l)


def test_lie_der_poly_degree_zero_is_bracket(idem):
    T = PolyTensor.from_vector(idem.basis(1) + idem.basis(0))
    out = lie_der_poly(idem, idem.basis(0), T)
    assert out.to_vector() == bracket(sub_adjacent(idem), idem.basis(0), T.to_vector())


def test_lie_der_poly_examples(ab, idem):
    T = poly(idem, (0, 1), 0)
    assert lie_der_poly(idem, idem.basis(0), T) == T
    assert lie_der_poly(ab, ab.basis(0), poly(ab, (0, 1), 1)).is_zero


def test_right_mult_poly_examples(ab, idem):
    Y = idem.basis(0) + idem.basis(1)
    out = right_mult_poly(idem, idem.basis(0), PolyTensor.from_vector(Y))
    assert out.to_vector() == multiply(idem, Y, idem.basis(0))
    assert right_mult_poly(idem, idem.basis(0), poly(idem, (0, 1), 0)).is_zero
    assert right_mult_poly(ab, ab.basis(1), poly(ab, (0, 1), 1)).is_zero


def test_contractions(idem):
    b = idem.base
    T = poly(idem, (0, 1), 0)
    eps1 = Covector.basis(b, 2, 0)
    assert contract_left(T, eps1) == PolyTensor.basis_element(b, 2, (1,), 0)
    right = contract_right(T, eps1)
    assert right.degree == 2 and right.terms == {(0, 1): b.one}
    T3 = PolyTensor.basis_element(b, 3, (0, 1), 0)
    assert contract_left(T3, Covector.basis(b, 3, 2)).is_zero
    with pytest.raises(DegreeError):
        contract_left(PolyTensor.from_vector(idem.basis(0)), eps1)


def test_lie_der_form_examples(ab, idem, t1):
    phi = FormTensor.basis_element(ab.base, 2, (0,), 1)
    assert lie_der_form(ab, ab.basis(0), phi).is_zero
    f = t1.base.scalar("x^3 + x")
    phi = FormTensor.from_vector(Covector([f]))
    out = lie_der_form(t1, t1.basis(0), phi).to_vector()
    assert same(out[0], 3 * X**2 + 1)
    eps1 = FormTensor.from_vector(idem.cobasis(0))
    assert right_mult_form(idem, idem.basis(0), eps1).to_vector() == -idem.cobasis(0)


def test_coboundary_lsa_examples(ab, t1, t2):
    eps = FormTensor.from_vector(t1.cobasis(0))
    assert coboundary_lsa(t1, eps).is_zero
    assert coboundary_lsa(ab, FormTensor.basis_element(ab.base, 2, (0,), 1)).is_zero
    b = t2.base
    g = FormTensor(b, 2, 1, {((0,), 0): b.one, ((1,), 1): b.var("x1")})
    assert coboundary_lsa(t2, g).value_at((0, 1), 1) == b.one


def test_coboundary_lie_examples(ab, t1):
    w = alternating_form(FormTensor, ab.base, 2, 1, {(0, 1): ab.base.const(3)})
    assert coboundary_lie(ab, w).is_zero
    lie = sub_adjacent(t1)
    d = coboundary_lie(lie, t1.base.scalar("x^2"))
    assert d == Covector([t1.base.scalar("2*x")])
    assert is_2cocycle(lie, FormTensor.zero(t1.base, 1, 1))


def test_cocycle_failure_in_three_dimensions():
    t3 = tangent(("x1", "x2", "x3"))
    b = t3.base
    w = alternating_form(FormTensor, b, 3, 1, {(0, 1): b.var("x3")})
    rep = is_2cocycle(sub_adjacent(t3), w)
    assert not rep
    # d(x3 dx1^dx2) = dx3^dx1^dx2 = dx1^dx2^dx3
    assert rep.witness.inputs == ("e1", "e2", "e3")
    assert rep.witness.residual == "1"


def test_not_alternating_rejected(ab):
    w = FormTensor(ab.base, 2, 1, {((0,), 1): ab.base.one})
    with pytest.raises(NotAlternating):
        coboundary_lie(ab, w)


def test_identity_suite_passes(ab, t1, t2):
    for alg in (ab, t1, t2):
        rep = identity_suite(alg, trials=5)
        assert rep, rep
        assert len(rep.children) == 11


def test_identity_suite_detects_corruption():
    alg = instance(3)
    c = [[list(row) for row in plane] for plane in alg.products]
    c[0][0][0] = -c[0][0][0]
    bad = AlgebroidStructure(alg.kind, alg.base, c, alg.anchor)
    assert not check_left_symmetric(bad)
    rep = identity_suite(bad, trials=3)
    assert not rep
    names = {f.name for f in rep.failures()}
    assert "lie-derivative-bracket (poly)" in names
    assert all(f.witness.residual != "0" for f in rep.failures())


seeds = st.integers(0, 3)
samples = st.integers(0, 10**6)


@given(seeds, samples, st.integers(0, 2))
def test_lie_coboundary_squares_to_zero(seed, s, degree):
    alg = sub_adjacent(instance(seed))
    rng = rng_for(s, "dd")
    r = alg.rank
    if degree + 1 > r:
        return
    values = {J: random_tensor(FormTensor, alg.base, r, 0, rng).component((), 0)
              for J in combinations(range(r), degree + 1)}
    w = alternating_form(FormTensor, alg.base, r, degree, values)
    dd = coboundary_lie(alg, coboundary_lie(alg, w))
    assert dd.is_zero
    f = random_tensor(FormTensor, alg.base, r, 0, rng).component((), 1)
    assert coboundary_lie(alg, coboundary_lie(alg, f)).is_zero


@given(seeds, samples, st.integers(0, 2))
def test_duality_consistency(seed, s, degree):
    alg = instance(seed)
    r = alg.rank
    degree = min(degree, r)
    rng = rng_for(s, "duality")
    x = random_vector(Section, alg.base, r, rng)
    phi = random_tensor(FormTensor, alg.base, r, degree, rng)
    T = random_tensor(PolyTensor, alg.base, r, degree, rng)
    lhs = lie_der_form(alg, x, phi).pairing(T) + phi.pairing(lie_der_poly(alg, x, T))
    assert lhs == anchor_of(alg, x)(phi.pairing(T))


@given(seeds, samples)
def test_contraction_compatibility(seed, s):
    alg = instance(seed)
    r = alg.rank
    rng = rng_for(s, "contract")
    x = random_vector(Section, alg.base, r, rng)
    y = random_vector(Section, alg.base, r, rng)
    phi = random_tensor(FormTensor, alg.base, r, 1, rng)
    lhs = phi.contract_left(multiply(alg, x, y))
    rhs = lie_der_form(alg, x, phi.contract_left(y)) - lie_der_form(alg, x, phi).contract_left(y)
    assert lhs == rhs


def test_coboundary_square_measured(t2):
    phi = FormTensor.basis_element(t2.base, 2, (0,), 1)
    assert coboundary_square(t2, phi).degree == 3
