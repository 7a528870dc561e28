import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagres import expr as ex
from flagres.forms import DifferentialForm, FormError, check_closed, d, exact_log_form, gv_combination, psi_form

from strategies import poly_exprs

V3 = ("x", "y", "w")


def P(text, variables=V3):
    return ex.parse(text, variables)


def dz(*names, variables=V3):
    return DifferentialForm.basis(variables, *names)


def bare(a):
    # coefficient part, without the (2 pi i) prefactor tag
    return DifferentialForm(a.variables, a.degree, a.coefficients)


def same(a, b):
    return (bare(a) - bare(b)).is_identically_zero()


@st.composite
def forms(draw, variables=V3, degrees=(0, 1, 2, 3)):
    deg = draw(st.sampled_from(degrees))
    idx = list(itertools.combinations(range(len(variables)), deg))
    chosen = draw(st.lists(st.sampled_from(idx), unique=True, max_size=len(idx)))
    return DifferentialForm(variables, deg, {i: draw(poly_exprs(variables, 5)) for i in chosen})


# -- wedge ------------------------------------------------------------------

def test_wedge_antisymmetry():
    assert same(dz("x").wedge(dz("y")), -dz("y").wedge(dz("x")))


def test_wedge_square_of_one_form_vanishes():
    assert dz("x").wedge(dz("x")).is_zero()


def test_wedge_with_coefficients():
    a = dz("x").scale(P("x"))
    b = dz("y").scale(P("y"))
    assert same(a.wedge(b), dz("x", "y").scale(P("x*y")))


def test_wedge_ambient_mismatch():
    with pytest.raises(FormError):
        dz("x").wedge(DifferentialForm.basis(("x", "y"), "y"))


@given(forms(), forms())
def test_graded_commutativity(a, b):
    sign = (-1) ** (a.degree * b.degree)
    assert same(a.wedge(b), b.wedge(a).scale(ex.Const(sign)))


def test_forms_above_ambient_dimension_vanish():
    a = dz("x", "y").scale(P("x"))
    assert a.wedge(dz("w")).degree == 3
    assert a.wedge(dz("w")).wedge(dz("x").scale(P("y"))).is_zero()


# -- exterior derivative ----------------------------------------------------

def test_d_of_x_dy():
    a = DifferentialForm(("x", "y"), 1, {(1,): ex.var("x")})
    assert same(d(a), DifferentialForm.basis(("x", "y"), "x", "y"))


def test_dd_of_function():
    f = DifferentialForm.function(("x", "y"), ex.parse("x^2*y", ["x", "y"]))
    assert d(d(f)).is_identically_zero()


def test_leibniz_example():
    v = ("z1", "z2")
    f = DifferentialForm.function(v, ex.parse("z1*z2", v))
    want = DifferentialForm.one_form(v, [ex.var("z2"), ex.var("z1")])
    assert same(d(f), want)


@settings(max_examples=100)
@given(forms())
def test_d_squared_is_zero(a):
    assert d(d(a)).is_identically_zero()


@given(forms(degrees=(0, 1, 2)), forms(degrees=(0, 1)))
def test_leibniz_rule(a, b):
    lhs = d(a.wedge(b))
    rhs = d(a).wedge(b) + a.wedge(d(b)).scale(ex.Const((-1) ** a.degree))
    assert same(lhs, rhs)


# -- closedness -------------------------------------------------------------

def _samples(variables, count=20, seed=5):
    rng = np.random.default_rng(seed)
    pts = 0.4 * (rng.uniform(-1, 1, (count, len(variables))) + 1j * rng.uniform(-1, 1, (count, len(variables))))
    return [dict(zip(variables, p)) for p in pts]


def test_exact_forms_are_closed():
    f = DifferentialForm.function(V3, P("x^3*y - w^2"))
    assert check_closed(d(f), _samples(V3))


def test_x_dy_is_not_closed():
    a = DifferentialForm(V3, 1, {(1,): ex.var("x")})
    assert not check_closed(a, _samples(V3))


def test_log_form_is_closed():
    theta = exact_log_form(V3, P("1 + x^2 + y*w"))
    assert check_closed(theta, _samples(V3))
    assert d(theta).is_identically_zero() or check_closed(theta, _samples(V3, seed=9))


# -- psi forms and the binomial combination ---------------------------------

def test_psi_vanishes_for_exact_theta2():
    theta2 = exact_log_form(V3, P("1 + x*y"))
    theta12 = DifferentialForm.one_form(V3, [P("w"), P("x"), ex.ZERO])
    for j in (1, 2):
        psi = psi_form(theta12, theta2, j, 2)
        assert all(abs(v) < 1e-12 for p in _samples(V3, 5) for v in psi.evaluate(p).values())


def test_psi_degree_exceeds_ambient():
    v = ("x", "y")
    theta12 = DifferentialForm(v, 1, {(1,): ex.var("x")})
    assert psi_form(theta12, DifferentialForm.zero(v, 1), 0, 1).is_zero()


def test_psi_three_variables_by_hand():
    theta12 = DifferentialForm.one_form(V3, [P("w"), P("x"), ex.ZERO])
    assert same(d(theta12), dz("w", "x") + dz("x", "y"))
    psi = psi_form(theta12, DifferentialForm.zero(V3, 1), 0, 1)
    # w dx^dw^dx + x dy^dw^dx + x dy^dx^dy = x dx^dy^dw
    assert same(psi, dz("x", "y", "w").scale(P("x")))
    assert psi.prefactor_power == -2


def test_psi_index_range():
    t = DifferentialForm.one_form(V3, [P("w"), P("x"), ex.ZERO])
    with pytest.raises(FormError):
        psi_form(t, t, 3, 2)
    with pytest.raises(FormError):
        psi_form(t, t, -1, 2)


def test_gv_with_exact_theta2():
    theta2 = exact_log_form(V3, P("1 + x*y"))
    theta12 = DifferentialForm.one_form(V3, [P("w"), P("x"), P("y^2")])
    lhs, rhs = gv_combination(theta2, theta12, 1, 1)
    want = -theta2.wedge(d(theta12))
    diff = (bare(lhs) - bare(rhs)) - want
    assert all(abs(v) < 1e-10 for p in _samples(V3, 10) for v in diff.evaluate(p).values())


def test_gv_k1_zero():
    theta2 = DifferentialForm.one_form(V3, [P("y"), ex.ZERO, ex.ZERO])
    theta12 = DifferentialForm.one_form(V3, [ex.ZERO, P("w"), ex.ZERO])
    lhs, rhs = gv_combination(theta2, theta12, 0, 0)
    assert same(lhs, theta12)
    assert same(rhs, theta2 + theta12)


@given(forms(degrees=(1,)), forms(degrees=(1,)), st.integers(0, 1))
def test_gv_lhs_is_binomial_sum_of_psi(t2, t12, k2):
    lhs, _ = gv_combination(t2, t12, 1, k2)
    want = psi_form(t12, t2, 0, 1)
    if k2 == 1:
        want = want + psi_form(t12, t2, 1, 1).scale(ex.Const(comb(2, 1)))
    assert same(lhs, want)
