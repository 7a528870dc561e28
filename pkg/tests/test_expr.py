from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flagres import expr as ex
from flagres.poly import Polynomial

from strategies import XY, analytic_exprs, poly_exprs

X = ex.var("x")
Y = ex.var("y")


# -- parse ------------------------------------------------------------------

def test_parse_sum_of_power_and_constant():
    e = ex.parse("x^2 + 1", ["x"])
    assert isinstance(e, ex.Add)
    assert set(e.terms) == {ex.power(X, 2), ex.ONE}


def test_parse_rational_power():
    e = ex.parse("(1 + x^3)^(-1/2)", ["x"])
    assert isinstance(e, ex.Pow)
    assert e.exp == Fraction(-1, 2)
    assert e.base == ex.add(ex.ONE, ex.power(X, 3))


def test_parse_error_reports_offset():
    with pytest.raises(ex.ParseError) as info:
        ex.parse("x + ", ["x"])
    assert info.value.offset == 4


def test_parse_rejects_undeclared_variable():
    with pytest.raises(ex.ParseError):
        ex.parse("x + z", ["x", "y"])


@given(poly_exprs(XY))
def test_parse_print_roundtrip(e):
    assert ex.parse(ex.to_string(e), XY) == e


@given(analytic_exprs())
def test_parse_print_roundtrip_fractional(e):
    assert ex.parse(ex.to_string(e), XY) == e


# -- evaluation -------------------------------------------------------------

def test_eval_polynomial():
    assert ex.evaluate(ex.parse("x^2+1", ["x"]), {"x": 2}) == 5


def test_eval_principal_branch_at_one():
    assert ex.evaluate(ex.parse("(1+x)^(-1/2)", ["x"]), {"x": 0}) == 1


def test_eval_pole():
    with pytest.raises(ex.PoleError):
        ex.evaluate(ex.parse("1/x", ["x"]), {"x": 0})


def test_eval_branch_cut_guard():
    e = ex.parse("x^(1/2)", ["x"])
    with pytest.raises(ex.BranchCutError):
        ex.evaluate(e, {"x": -1})
    assert abs(ex.evaluate(e, {"x": 1j}) - np.exp(1j * np.pi / 4)) < 1e-14


def test_eval_missing_variable():
    with pytest.raises(ex.EvaluationError):
        ex.evaluate(X + Y, {"x": 1})


def test_evaluator_vectorised_matches_scalar():
    e = ex.parse("x*(2 + y/4)^(-3/2) + y^3", ["x", "y"])
    rng = np.random.default_rng(7)
    xs = rng.normal(size=20) + 1j * rng.normal(size=20)
    ys = rng.normal(size=20) + 1j * rng.normal(size=20)
    (vec,) = ex.Evaluator([e], ["x", "y"])({"x": xs, "y": ys})
    for i in range(20):
        assert vec[i] == pytest.approx(ex.evaluate(e, {"x": xs[i], "y": ys[i]}), rel=1e-13)


# -- differentiation --------------------------------------------------------

def test_diff_power_rule():
    assert ex.diff(ex.power(X, 3), "x") == ex.mul(3, ex.power(X, 2))


def test_diff_chain_rule():
    e = ex.parse("(1+x^2)^(1/2)", ["x"])
    assert ex.diff(e, "x") == ex.parse("x*(1+x^2)^(-1/2)", ["x"])


def test_diff_independent_variable():
    assert ex.diff(X, "y") == ex.ZERO


def _points(rng, n, count):
    # points in the unit polydisc, radius at most 0.9
    r = 0.9 * np.sqrt(rng.uniform(size=(count, n)))
    return r * np.exp(2j * np.pi * rng.uniform(size=(count, n)))


@given(analytic_exprs(), st.sampled_from(XY))
def test_diff_matches_central_differences(e, v):
    rng = np.random.default_rng(11)
    pts = _points(rng, 2, 100)
    d = ex.diff(e, v)
    h = 1e-5
    for p in pts:
        a = dict(zip(XY, p))
        plus, minus = dict(a), dict(a)
        plus[v] += h
        minus[v] -= h
        fd = (ex.evaluate(e, plus) - ex.evaluate(e, minus)) / (2 * h)
        exact = ex.evaluate(d, a)
        scale = max(abs(exact), 1.0)
        assert abs(fd - exact) / scale < 1e-6


# -- polynomial fragment ----------------------------------------------------

def test_to_polynomial_expands():
    p = ex.to_polynomial(ex.parse("(x+1)^2", ["x"]), ["x"])
    assert p == Polynomial(["x"], {(2,): 1, (1,): 2, (0,): 1})


def test_to_polynomial_rejects_fractional_power():
    with pytest.raises(ex.NotPolynomialError):
        ex.to_polynomial(ex.parse("x^(1/2)", ["x"]), ["x"])


def test_to_polynomial_rational_coefficient():
    p = ex.to_polynomial(ex.parse("3/4*x*y", ["x", "y"]), ["x", "y"])
    assert p == Polynomial(["x", "y"], {(1, 1): Fraction(3, 4)})


@given(poly_exprs(XY))
def test_polynomial_roundtrip(e):
    p = ex.to_polynomial(e, XY)
    assert ex.to_polynomial(ex.from_polynomial(p), XY) == p


@given(poly_exprs(XY), poly_exprs(XY))
def test_eval_is_ring_homomorphism(a, b):
    rng = np.random.default_rng(3)
    for p in _points(rng, 2, 5):
        pt = dict(zip(XY, p))
        va, vb = ex.evaluate(a, pt), ex.evaluate(b, pt)
        for got, want in ((ex.evaluate(a * b, pt), va * vb), (ex.evaluate(a + b, pt), va + vb)):
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want), abs(va) * abs(vb))


def test_identically_zero_detects_cancellation():
    e = ex.parse("(x+y)^2 - x^2 - 2*x*y - y^2", ["x", "y"])
    assert ex.is_identically_zero(e)
    assert not ex.is_identically_zero(X)
