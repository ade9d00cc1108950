import pytest
from hypothesis import given, strategies as st

from helpers import instance
from lsalgebroid.algebroid import AlgebroidStructure, check_left_symmetric
from lsalgebroid.bialgebroid import (
    BialgebroidCandidate,
    SymTensor,
    build_bialgebroid_from_H,
    check_anchor_compat,
    check_bialgebroid,
    homo1_defect,
    homo_defect,
    mult_from_H,
    s_bracket,
    s_bracket_value,
    s_equation_equiv,
)
from lsalgebroid.corpus import random_symmetric
from lsalgebroid.errors import Degenerate, InvalidStructure, SEquationFailed, ShapeMismatch
from lsalgebroid.sampling import random_vector, rng_for
from lsalgebroid.scalar import VectorField
from lsalgebroid.tensors import Covector


def offdiag(alg):
    return SymTensor.from_rows(alg.base, [[0, 1], [1, 0]])


def test_trivial_and_abelian_pairs(ab, idem, t1):
    assert check_bialgebroid(BialgebroidCandidate(ab, ab), trials=3)
    for A in (idem, t1):
        cand = BialgebroidCandidate.trivial_dual(A)
        assert check_bialgebroid(cand, trials=5)
        assert check_anchor_compat(cand)


def test_candidate_shapes(idem, t1):
    with pytest.raises(ShapeMismatch):
        BialgebroidCandidate(idem, AlgebroidStructure.abelian(idem.base, 3, dual=True))


def test_invalid_factor_rejected(swap):
    with pytest.raises(InvalidStructure):
        check_bialgebroid(BialgebroidCandidate.trivial_dual(swap))


def test_s_bracket_examples(idem, ab):
    b = idem.base
    assert s_bracket(idem, SymTensor.from_rows(b, [[1, 0], [0, 0]])).is_zero
    S = s_bracket(idem, offdiag(idem))
    assert not S.is_zero
    e1, e2 = idem.cobasis(0), idem.cobasis(1)
    assert S.evaluate([e1, e2, e2]) == b.one
    assert s_bracket_value(idem, offdiag(idem), e1, e2, e2) == b.one
    assert s_bracket(ab, SymTensor.zero(ab.base, 2)).is_zero


def test_mult_from_H_examples(t1, idem):
    b = t1.base
    Astar = mult_from_H(t1, SymTensor.from_rows(b, [["x"]]))
    assert Astar.products[0][0][0] == b.one
    assert Astar.anchor[0] == VectorField(b, (b.var("x"),))
    zero = mult_from_H(idem, SymTensor.zero(idem.base, 2))
    assert all(c.is_zero for _, _, _, c in zero.entries)
    assert all(v.is_zero for v in zero.anchor)
    e11 = mult_from_H(idem, SymTensor.from_rows(idem.base, [[1, 0], [0, 0]]))
    assert e11.products[0][0] == (idem.base.one, idem.base.zero)


def test_homo_defect_examples(idem):
    b = idem.base
    for H in (SymTensor.zero(b, 2), offdiag(idem), SymTensor.from_rows(b, [[2, -1], [-1, 3]])):
        for i in range(2):
            for j in range(2):
                assert homo_defect(idem, H, idem.cobasis(i), idem.cobasis(j)).is_zero


def test_s_equation_examples(idem, ab):
    rep = s_equation_equiv(idem, SymTensor.identity(idem.base, 2))
    assert rep and rep.details == {"s_bracket_zero": True, "delta_inverse_zero": True}
    rep = s_equation_equiv(idem, offdiag(idem))
    assert rep and rep.details == {"s_bracket_zero": False, "delta_inverse_zero": False}
    rep = s_equation_equiv(ab, SymTensor.from_rows(ab.base, [[1, 2], [2, -3]]))
    assert rep.details["s_bracket_zero"] and rep.details["delta_inverse_zero"]
    with pytest.raises(Degenerate):
        s_equation_equiv(idem, SymTensor.from_rows(idem.base, [[1, 1], [1, 1]]))


def test_build_from_H(t1, ab, idem):
    cand = build_bialgebroid_from_H(t1, SymTensor.from_rows(t1.base, [["x"]]), trials=5)
    assert check_bialgebroid(cand, trials=5)
    assert check_anchor_compat(cand)
    assert check_left_symmetric(cand.Astar)
    build_bialgebroid_from_H(ab, SymTensor.from_rows(ab.base, [[1, 2], [2, 0]]), trials=3)
    with pytest.raises(SEquationFailed) as exc:
        build_bialgebroid_from_H(idem, offdiag(idem))
    assert exc.value.witness == ("ε1", "ε2", "ε2")
    assert exc.value.value == idem.base.one


def test_corrupted_dual_anchor(t1):
    cand = build_bialgebroid_from_H(t1, SymTensor.from_rows(t1.base, [["x"]]), verify=False)
    b = t1.base
    bad = cand.Astar.replace(anchor=(VectorField(b, (b.var("x") * b.var("x"),)),))
    rep = check_anchor_compat(BialgebroidCandidate(t1, bad))
    assert not rep and rep.witness.inputs == ("e1", "ε1")


seeds = st.integers(0, 5)
samples = st.integers(0, 10**6)


def _sample(seed, s):
    alg = instance(seed)
    rng = rng_for(s, "bialgebroid-test")
    H = random_symmetric(alg.base, alg.rank, rng, linear=True)
    xi = random_vector(Covector, alg.base, alg.rank, rng, degree=1)
    eta = random_vector(Covector, alg.base, alg.rank, rng, degree=1)
    return alg, H, xi, eta


@given(seeds, samples)
def test_s_bracket_skew(seed, s):
    alg, H, xi, eta = _sample(seed, s)
    assert s_bracket(alg, H).evaluate([xi, xi, eta]).is_zero
    assert s_bracket_value(alg, H, xi, xi, eta).is_zero


@given(seeds, samples)
def test_homo_identities(seed, s):
    alg, H, xi, eta = _sample(seed, s)
    assert homo_defect(alg, H, xi, eta).is_zero
    assert homo1_defect(alg, H, xi, eta).is_zero


@given(seeds, samples)
def test_s_equation_never_disagrees(seed, s):
    alg, H, _, _ = _sample(seed, s)
    if H.det().is_zero:
        return
    assert s_equation_equiv(alg, H)


@pytest.mark.parametrize("seed", range(3))
def test_trivial_dual_of_instances(seed):
    cand = BialgebroidCandidate.trivial_dual(instance(seed))
    rep = check_bialgebroid(cand, trials=3)
    assert rep
    assert all(rep.details["diagnostics"].values())
