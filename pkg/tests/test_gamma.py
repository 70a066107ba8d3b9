from fractions import Fraction

import pytest
import sympy
from sympy.polys.ring_series import rs_mul, rs_pow, rs_series_inversion
from hypothesis import given, settings
from hypothesis import strategies as st

from brieskorn.errors import DomainError
from brieskorn.gamma import (
    GammaParams,
    OrbitPoint,
    act_on_h,
    act_on_orbit,
    compose_params,
    full_pipeline_action,
    inverse_params,
    normal_form,
    orbit_jacobian,
    orbit_rank,
    orbit_ring,
    project_orbit,
    symbolic_orbit,
)
from brieskorn.gmsystem import mat_mul
from brieskorn.opposite import Frame
from brieskorn.series import MultiSeries
from strategies import h_series, rationals

params = st.builds(GammaParams, rationals, rationals, rationals)


def uni(c, n=8):
    return MultiSeries.univariate(c, n)


# -- sympy oracle ---------------------------------------------------------------

A, B, G = sympy.symbols("alpha beta gamma")


def sympy_orbit(h_coeffs, n):
    """c^A_2..c^A_n by undetermined coefficients: g~(x) = h^A(g1(x)),
    solved degree by degree with sympy's ring series."""
    free = sorted(set().union(*(sympy.sympify(c).free_symbols for c in h_coeffs)) | {A, B, G}, key=str)
    dom = sympy.QQ[tuple(free)]
    R, x = sympy.ring("x", dom)
    h = sum((dom.from_sympy(sympy.sympify(c)) * x ** k for k, c in enumerate(h_coeffs)), R(0))
    inv = rs_series_inversion(1 + dom.from_sympy(A) * x + dom.from_sympy(B) * h, x, n + 1)
    g1 = rs_mul(x + dom.from_sympy(G) * h, inv, x, n + 1)
    gt = rs_mul(h, inv, x, n + 1)
    d = [0, 0]
    for k in range(2, n + 1):
        acc = sum((d[m] * rs_pow(g1, m, x, n + 1).coeff(x ** k) for m in range(2, k)), dom.zero)
        d.append(gt.coeff(x ** k) - acc)
    return [dom.to_sympy(c) for c in d[2:]]


def to_sympy(p):
    syms = {name: sympy.Symbol(name) for name in p.ring.names}
    return sum(sympy.Rational(c.numerator, c.denominator) *
               sympy.Mul(*[syms[n] ** a for n, a in zip(p.ring.names, e)]) for e, c in p.terms.items())


# -- examples ---------------------------------------------------------------------

def test_identity_params():
    h = uni([0, 0, 1, -2, 3])
    assert act_on_h(GammaParams(), h) == h


def test_alpha_example():
    assert act_on_h(GammaParams(1, 0, 0), uni([0, 0, 1])) == uni([0, 0] + [1] * 7)


def test_gamma_example():
    # signed Catalan numbers
    assert act_on_h(GammaParams(0, 0, 1), uni([0, 0, 1])) == uni([0, 0, 1, -2, 5, -14, 42, -132, 429])


def test_compose_examples():
    p = GammaParams(1, 2, 3)
    assert compose_params(p, GammaParams()) == p
    assert compose_params(p, GammaParams(4, 5, 6)) == GammaParams(5, 19, 9)


def test_symbolic_composition():
    R = orbit_ring(2)
    a, b, g = R.gens()[:3]
    p, q = GammaParams(a, b, g), GammaParams(b, g, a)
    pq = compose_params(p, q)
    assert (pq.alpha, pq.beta, pq.gamma) == (a + b, b + g + g * b, g + a)


def test_bad_h():
    with pytest.raises(DomainError):
        act_on_h(GammaParams(), uni([0, 1, 1]))


# -- group structure --------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(params, params, params)
def test_group_axioms(p, q, t):
    e = GammaParams()
    assert compose_params(compose_params(p, q), t) == compose_params(p, compose_params(q, t))
    assert compose_params(p, e) == p == compose_params(e, p)
    assert compose_params(p, inverse_params(p)) == e == compose_params(inverse_params(p), p)
    assert compose_params(p, q).matrix() == mat_mul(p.matrix(), q.matrix())


@settings(max_examples=40, deadline=None)
@given(params, params, h_series())
def test_composition_law(p, q, h):
    assert act_on_h(q, act_on_h(p, h)) == act_on_h(compose_params(p, q), h)


@settings(max_examples=40, deadline=None)
@given(params, h_series())
def test_c2_invariant(p, h):
    assert act_on_h(p, h).coefficient((2,)) == h.coefficient((2,))


@settings(max_examples=20, deadline=None)
@given(params, h_series())
def test_inverse_undoes(p, h):
    assert act_on_h(inverse_params(p), act_on_h(p, h)) == h


# -- symbolic orbit -----------------------------------------------------------------

def test_symbolic_low_orders():
    R = orbit_ring(3)
    (c2A, c3A), log = symbolic_orbit(3, R, with_log=True)
    a, g = R.gen("alpha"), R.gen("gamma")
    c2, c3 = R.gen("c2"), R.gen("c3")
    assert c2A == c2
    assert c3A == c3 + a * c2 - 2 * g * c2 ** 2
    assert set(log) == {1}


def test_symbolic_matches_sympy():
    out = symbolic_orbit(5)
    cs = sympy.symbols("c2:6")
    oracle = sympy_orbit([0, 0, *cs], 5)
    for mine, theirs in zip(out, oracle):
        assert sympy.expand(to_sympy(mine) - theirs) == 0


def test_polynomiality_up_to_six():
    out, log = symbolic_orbit(6, with_log=True)
    assert set(log) <= {1}
    assert len(out) == 5


@settings(max_examples=20, deadline=None)
@given(params, st.lists(rationals, min_size=5, max_size=5))
def test_symbolic_evaluation_consistency(p, cs):
    out = symbolic_orbit(6)
    h = uni([0, 0, *cs], 6)
    numeric = act_on_h(p, h).univariate_coefficients()[2:]
    values = {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma}
    values.update({f"c{k}": c for k, c in enumerate(cs, start=2)})
    assert [poly.evaluate(values) for poly in out] == numeric


# -- affine projections ----------------------------------------------------------------

def test_project_example():
    pt = project_orbit(uni([0, 0, 1, 0, 0, 7]), 2)
    assert pt == OrbitPoint(2, Fraction(1), ())


@settings(max_examples=30, deadline=None)
@given(params, h_series(), st.integers(2, 7))
def test_equivariance(p, h, k):
    assert project_orbit(act_on_h(p, h), k) == act_on_orbit(p, project_orbit(h, k))


@settings(max_examples=30, deadline=None)
@given(h_series(), st.integers(2, 6))
def test_tower(h, k):
    deep = project_orbit(h, k + 1)
    assert project_orbit(deep.to_series(), k) == project_orbit(h, k)


# -- pipeline -------------------------------------------------------------------------

def test_pipeline_identity():
    h = uni([0, 0, 1, 1, -1])
    assert full_pipeline_action(Frame.identity(4), h) == h


def test_pipeline_alpha():
    h = uni([0, 0, 1])
    assert full_pipeline_action(Frame.from_params(4, 1, 0, 0), h) == act_on_h(GammaParams(1, 0, 0), h)


def test_pipeline_ignores_other_entries():
    h = uni([0, 0, 2, -1, 3])
    base = Frame.from_params(4, 1, 2, -1)
    assert full_pipeline_action(base, h) == full_pipeline_action(base.with_entries({(3, 1): 7}), h)


def test_normal_form_shapes():
    h = uni([0, 0, 1, 1])
    g1, gt = normal_form(GammaParams(2, 3, 5), h)
    assert g1.coefficient((1,)) == 1 and g1.coefficient((0,)) == 0
    assert gt.order() == 2


# -- orbit Jacobian -----------------------------------------------------------------------

def sympy_jacobian(h_coeffs, levels):
    d = sympy_orbit(h_coeffs, max(levels))
    rows = [[sympy.diff(d[m - 2], v).subs({A: 0, B: 0, G: 0}) for v in (A, B, G)] for m in levels]
    return sympy.Matrix(rows)


def test_jacobian_matches_sympy():
    h = [0, 0, 1, 1]
    mine = orbit_jacobian(uni(h), [3, 4, 5, 6])
    assert sympy.Matrix(mine) == sympy_jacobian(h, [3, 4, 5, 6])


def test_jacobian_rank_low_levels():
    """The three lowest non-invariant coefficients only see a rank-2 image."""
    h = uni([0, 0, 1, 1])
    assert orbit_rank(h, [3, 4, 5]) == 2
    assert sympy_jacobian([0, 0, 1, 1], [3, 4, 5]).rank() == 2
    assert orbit_rank(h, [3, 4, 5, 6]) == 3
