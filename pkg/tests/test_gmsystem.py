from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brieskorn.errors import InsufficientPrecision, StructuralError
from brieskorn.gmsystem import (
    GMSystem,
    apply_dsi,
    apply_dt,
    apply_dti,
    apply_dti_dsi,
    apply_nilpotent,
    apply_t,
    exp_nilpotent_apply,
    mat_pow,
    nilpotent_term,
    shift_matrix,
    weight_component,
)
from brieskorn.lattice import special_deformation
from brieskorn.series import MultiSeries, all_exponents

FLAT = GMSystem.constant(2, 6, 4)
SHIFT = GMSystem.shifted(2, 6, 4)


def e(sys, j, w=0, c=None):
    return sys.basis_element(j, weight=w, coeff=c)


@st.composite
def elements(draw, sys, max_weight=3):
    """Random elements supported in weights 0..max_weight, known through K."""
    exps = all_exponents(sys.nvars, sys.degree)
    x = sys.zero()
    for _ in range(draw(st.integers(1, 4))):
        w = draw(st.integers(0, max_weight))
        j = draw(st.integers(0, sys.r))
        terms = {draw(st.sampled_from(exps)): Fraction(draw(st.integers(-4, 4))) for _ in range(2)}
        x = x + e(sys, j, w, sys.series(terms))
    return x


# -- t action ---------------------------------------------------------------

def test_t_flat_examples():
    assert apply_t(FLAT, e(FLAT, 0)) == e(FLAT, 0, 1)
    assert apply_t(FLAT, e(FLAT, 2, 1)) == e(FLAT, 2, 2, FLAT.scalar(2))


def test_t_shift_example():
    assert apply_t(SHIFT, e(SHIFT, 0)) == e(SHIFT, 0, 1) + e(SHIFT, 1, 1)


def test_t_rejects_foreign_element():
    with pytest.raises(StructuralError):
        apply_t(SHIFT, e(FLAT, 0))


@settings(max_examples=30, deadline=None)
@given(elements(SHIFT), st.integers(0, 3))
def test_t_is_graded_and_nilpotent_shifted(x, w):
    """(dt t - (w+1)) is nilpotent of order r + 1 on weight w."""
    comp = x.terms.get(w)
    if comp is None:
        return
    y = SHIFT.element({w: comp})
    assert set(apply_t(SHIFT, y).terms) <= {w + 1}
    for _ in range(SHIFT.r + 1):
        y = apply_dt(apply_t(SHIFT, y)) - y.scale(Fraction(w + 1))
    assert y.is_zero()


# -- shifts -------------------------------------------------------------------

def test_shift_examples():
    assert apply_dti(e(FLAT, 0)) == e(FLAT, 0, 1)
    assert apply_dti(e(FLAT, 2, 2)) == e(FLAT, 2, 3)
    assert apply_dt(e(FLAT, 0, 1)) == e(FLAT, 0)
    assert apply_dt(e(FLAT, 2, 3)) == e(FLAT, 2, 2)


@settings(max_examples=30, deadline=None)
@given(elements(FLAT))
def test_dt_inverts_dti(x):
    x = x.truncated(FLAT.weight_bound - 1)
    y = apply_dt(apply_dti(x))
    assert y.equal_through(x, x.valid_through)
    for k in range(x.valid_through):
        assert weight_component(apply_dti(x), k + 1) == weight_component(x, k)


def test_precision_is_tracked():
    x = e(FLAT, 0)
    assert apply_dt(x).valid_through == FLAT.weight_bound - 1
    with pytest.raises(InsufficientPrecision):
        apply_dt(x).component(FLAT.weight_bound)
    assert weight_component(x, 5) == FLAT.zero_hvector()


# -- derivatives --------------------------------------------------------------

def test_dsi_examples():
    s1 = FLAT.s(1)
    assert apply_dsi(e(FLAT, 1, 0, s1), 1) == e(FLAT, 1)
    assert apply_dsi(e(FLAT, 1, 0, s1), 2).is_zero()
    h = MultiSeries.univariate([0, 0, 1, 3], 4).embed(2)
    assert apply_dsi(e(FLAT, 2, 0, h), 1) == e(FLAT, 2, 0, h.derivative(1))


def test_dti_dsi_on_special_generators():
    sys = GMSystem.constant(2, 6, 6)
    h = MultiSeries.univariate([0, 0, 1, 2, -1], 6)
    lat = special_deformation(sys, h)
    v0, v1, v2 = lat.generators
    hpp = h.embed(2).derivative(1).derivative(1)
    assert apply_dti_dsi(v0, 1) == v1
    assert apply_dti_dsi(v1, 1) == v2.scale(hpp)
    assert apply_dti_dsi(v1, 2).is_zero()
    assert weight_component(v0, 0) == sys.hvector([1, sys.s(1), h.embed(2)])
    assert weight_component(v0, 1) == sys.hvector([0, 0, sys.s(2)])


# -- commutators ----------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(elements(SHIFT), st.integers(1, 3), st.integers(1, 2))
def test_commutators(x, j, i):
    B = SHIFT.weight_bound - j - 2
    # [t, dt^-j] = j dt^{-j-1}
    lhs = apply_t(SHIFT, x.shift(j)) - apply_t(SHIFT, x).shift(j)
    assert lhs.equal_through(x.shift(j + 1).scale(Fraction(j)), B)
    # d_si commutes with t and with dt^-1
    assert apply_dsi(apply_t(SHIFT, x), i).equal_through(apply_t(SHIFT, apply_dsi(x, i)), B)
    assert apply_dsi(apply_dti(x), i).equal_through(apply_dti(apply_dsi(x, i)), B)


@settings(max_examples=30, deadline=None)
@given(elements(GMSystem.shifted(3, 8, 5), max_weight=2), st.integers(1, 3))
def test_bracket_lemma(x, i):
    """With A = t, B = s_i dt^{1-i} N^i and C = [A, B] = (i-1) s_i dt^{-i} N^i:
    [B, C] = 0 and [A, exp B] = C exp B."""
    sys = x.system
    bound = sys.weight_bound - sys.r - 1

    def A(y):
        return apply_t(sys, y)

    def Bop(y):
        return nilpotent_term(sys, y, i)

    def C(y):
        return apply_nilpotent(y, i).shift(i).scale(sys.s(i).scale(i - 1))

    def expB(y):
        return exp_nilpotent_apply(sys, y, [i])

    assert A(Bop(x)).equal_through(Bop(A(x)) + C(x), bound)
    assert Bop(C(x)).equal_through(C(Bop(x)), bound)
    assert (A(expB(x)) - expB(A(x))).equal_through(C(expB(x)), bound)
    # and the power form [A, B^k] = k B^{k-1} C
    for k in range(1, 4):
        bk = x
        for _ in range(k):
            bk = Bop(bk)
        lhs = A(bk)
        y = A(x)
        for _ in range(k):
            y = Bop(y)
        rhs = C(x)
        for _ in range(k - 1):
            rhs = Bop(rhs)
        assert (lhs - y).equal_through(rhs.scale(Fraction(k)), bound)


# -- nilpotent exponentials ------------------------------------------------------

def test_exp_is_identity_without_nilpotent():
    x = e(FLAT, 0) + e(FLAT, 1, 2, FLAT.s(2))
    assert exp_nilpotent_apply(FLAT, x) == x


def test_exp_examples_r2():
    sys = GMSystem.shifted(2, 6, 4)
    assert exp_nilpotent_apply(sys, e(sys, 2, 2)) == e(sys, 2, 2)
    s1, s2 = sys.s(1), sys.s(2)
    expected = e(sys, 0) + e(sys, 1, 0, s1) + e(sys, 2, 0, (s1 * s1).scale(Fraction(1, 2))) + e(sys, 2, 1, s2)
    assert exp_nilpotent_apply(sys, e(sys, 0)) == expected


def test_system_validation():
    with pytest.raises(StructuralError):
        GMSystem(2, 3, 2, 4)  # K < r + 2
    with pytest.raises(StructuralError):
        GMSystem(2, 6, 2, 4, nilpotent=((1, 0, 0), (0, 0, 0), (0, 0, 0)))
    assert mat_pow(shift_matrix(3), 4) == tuple((Fraction(0),) * 4 for _ in range(4))


def test_text_form():
    x = e(FLAT, 0) + e(FLAT, 2, 1, FLAT.s(1))
    assert x.to_text() == "dt^0 : [1, 0, 0]\ndt^-1 : [0, 0, 1 * s1]"
