import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flagres import expr as ex
from flagres import flag as fl
from flagres import ideal as idl
from flagres.cli import load_problem
from flagres.poly import Polynomial

from strategies import small_fractions

XY = ("x", "y")
XYZ = ("x", "y", "z")


def chart(variables, X, omega, **kw):
    return fl.FlagChart.from_strings(variables, X, omega, **kw)


def log_flag():
    return load_problem("log_flag").chart


# -- data model -------------------------------------------------------------

def test_component_count_is_checked():
    with pytest.raises(fl.FlagError):
        chart(XY, ["x"], ["y", "-x"])


def test_undeclared_variable_is_rejected():
    with pytest.raises(fl.FlagError):
        fl.FlagChart(XY, (ex.var("x"), ex.var("z")), (ex.ONE, ex.ZERO))


def test_integrating_factor_is_validated():
    c = chart(XY, ["-x", "y"], ["y*(1+x)", "x*(1+x)"], integrating_factor=("1+x", "x*y"))
    assert c.k1 == 1 and c.k2 == 1
    with pytest.raises(fl.FlagError):
        chart(XY, ["-x", "y"], ["y", "2*x"], integrating_factor=("1", "x*y"))


# -- flag condition and singular loci ---------------------------------------

def test_logarithmic_flag_condition():
    assert fl.check_flag(log_flag())


def test_transcendental_flag_condition():
    c = load_problem("final_example").chart
    assert not all(ex.is_polynomial(e) for e in c.X)
    assert fl.check_flag(c)


def test_flag_condition_fails():
    assert not fl.check_flag(chart(XY, ["1", "0"], ["1", "0"]))


@st.composite
def projective_rescalings(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small_fractions, max_size=3))
    terms[(0, 0)] = draw(small_fractions.filter(bool))
    scale = draw(small_fractions.filter(bool))
    return ex.from_polynomial(Polynomial(XY, terms)), ex.const(scale)


@given(projective_rescalings(), st.booleans())
def test_flag_condition_is_projective(rescale, flag):
    u, s = rescale
    base = chart(XY, ["x^2", "y^3"], ["-y^3", "x^2"] if flag else ["y", "x"])
    moved = fl.FlagChart(XY, tuple(ex.mul(s, e) for e in base.X), tuple(ex.mul(u, e) for e in base.omega))
    assert fl.check_flag(moved) == fl.check_flag(base) == flag


def test_singular_locus_of_form():
    c = chart(("z0", "z1"), ["z0", "z1"], ["-z1", "z0"])
    assert fl.singular_locus_form(c).basis == tuple(idl.groebner(list(fl.singular_locus_form(c).generators)))
    z0, z1 = (Polynomial.variable(("z0", "z1"), v) for v in ("z0", "z1"))
    assert idl.ideals_equal(list(fl.singular_locus_form(c).basis), [z0, z1])


def test_singular_locus_of_vector_field():
    c = chart(XY, ["x^2", "y^3"], ["-y^3", "x^2"])
    I = fl.singular_locus_vf(c)
    assert I.quotient_dimension() == 6


def test_singular_locus_with_unit_component():
    c = chart(XY, ["1", "x"], ["-x", "1"])
    assert fl.singular_locus_vf(c).is_unit()


def test_singular_locus_needs_polynomials():
    c = load_problem("final_example").chart
    with pytest.raises(ex.NotPolynomialError):
        fl.singular_locus_vf(c)


def test_singular_inclusion_for_logarithmic_flag():
    assert fl.check_singular_inclusion(log_flag())


# -- residues of the two foliations -----------------------------------------

def test_res_cn_vf_nondegenerate():
    r = fl.res_cn_vf(chart(XY, ["x", "y"], ["y", "-x"]))
    assert r.algebraic == 1 and r.numeric.snapped_integer == 1 and r.passed


def test_res_cn_vf_monomial():
    r = fl.res_cn_vf(chart(XY, ["x^2", "y^3"], ["-y^3", "x^2"]))
    assert r.value == 6 and r.check("oracle_agreement").passed


def test_res_cn_form_rotation():
    r = fl.res_cn_form(chart(XY, ["x", "y"], ["y", "-x"]))
    assert r.algebraic == 1 and r.numeric.snapped_integer == 1


def test_res_cn_form_three_variables():
    r = fl.res_cn_form(chart(XYZ, ["y", "-x", "0"], ["x", "y", "z"]))
    assert r.algebraic == -2
    assert r.numeric.snapped_integer == -2
    assert r.passed


def test_comparison_factor():
    assert [fl.comparison_factor(n) for n in (2, 3, 4, 5)] == [1, -2, 6, -24]


def test_res_cn_vf_logarithmic_flag():
    r = fl.res_cn_vf(log_flag())
    assert r.value == 1 and r.passed


def test_res_cn_vf_non_isolated():
    r = fl.verify_comparison(chart(XY, ["x*y", "0"], ["0", "x*y"]))
    assert not r.passed


def test_oracle_disagreement_is_hard_failure():
    report = fl.ResidueReport("c_n(F1)", (0, 0), Fraction(2))
    from flagres import quad
    report.numeric = quad.ResidueEstimate(1 + 0j, [(8, 1 + 0j), (16, 1 + 0j)], True)
    with pytest.raises(fl.OracleDisagreement):
        fl._agreement(report)


# -- comparison ---------------------------------------------------------------

def test_comparison_constructed_flag():
    r = fl.verify_comparison(chart(XY, ["x^2", "y^3"], ["-y^3", "x^2"]))
    for name in ("flag_condition", "ideal_equality", "milnor_equality", "ratio"):
        assert r.check(name).passed, name
    assert r.children["vf"].value == 6
    assert r.algebraic == 1


def test_comparison_degenerate_control():
    r = fl.verify_comparison(chart(XY, ["x^2", "y^3"], ["x^2", "x^2"]))
    assert not r.check("ideal_equality").passed
    assert not r.passed


def test_comparison_unit_factor_is_local():
    # (x^2 (1+y), y^3 (2-x)) equals (x^2, y^3) only in the local ring
    r = fl.verify_comparison(chart(XY, ["x^2*(1+y)", "y^3*(2-x)"], ["-y^3*(2-x)", "x^2*(1+y)"]))
    assert r.passed


@st.composite
def dominant_pairs(draw):
    p, q = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    top = max(p, q)
    higher = [m for m in itertools.product(range(top + 2), repeat=2) if top < sum(m) <= top + 1]
    parts = []
    for lead in ((p, 0), (q, 1)):
        deg, axis = lead
        coeff = draw(st.sampled_from([1, 2, -1, Fraction(1, 2)]))
        terms = {(deg, 0) if axis == 0 else (0, deg): coeff}
        for m in draw(st.lists(st.sampled_from(higher), unique=True, max_size=2)):
            terms[m] = draw(st.sampled_from([1, -1, 3]))
        parts.append(ex.to_string(ex.from_polynomial(Polynomial(XY, terms))))
    return parts, p * q


@settings(max_examples=8)
@given(dominant_pairs())
def test_comparison_on_random_constructed_family(case):
    (f1, f2), mu = case
    c = chart(XY, [f1, f2], [f"-({f2})", f1])
    r = fl.verify_comparison(c)
    assert r.passed, [ch.to_dict() for ch in r.checks]
    assert r.children["vf"].algebraic == mu


# -- c1^n residues and the binomial identity --------------------------------

def test_res_c1n_identity_field():
    c = chart(XY, ["x", "y"], ["y", "x"], integrating_factor=("1", "x*y"))
    r = fl.res_c1n_flag(c)
    assert r.algebraic == 4
    assert abs(r.numeric.value - 4) < 1e-10
    assert r.passed


def test_res_c1n_needs_integrating_factor():
    with pytest.raises(fl.UnsupportedConfiguration):
        fl.res_c1n_flag(chart(XY, ["x", "y"], ["y", "-x"]))


def test_binomial_needs_integrating_factor():
    with pytest.raises(fl.UnsupportedConfiguration):
        fl.verify_binomial_identity(chart(XY, ["x", "y"], ["y", "-x"]))


def test_binomial_identity_exact_form():
    c = chart(XY, ["x", "-y"], ["y", "x"], integrating_factor=("1", "x*y"), theta12=["y", "0"])
    r = fl.verify_binomial_identity(c)
    assert r.check("binomial_identity").passed
    assert r.check("psi1_zero").passed
    assert r.algebraic == 0


def test_trace_of_jacobian_final_example_vanishes():
    c = load_problem("final_example").chart
    assert ex.is_identically_zero(fl.trace_of_jacobian(c))


# -- regular F2 in normal form ----------------------------------------------

def test_no_isolated_singularities_three_variables():
    assert fl.check_no_isolated_singularities(chart(XYZ, ["0", "y", "z"], ["1", "0", "0"]))


def test_no_isolated_singularities_plane():
    assert fl.check_no_isolated_singularities(chart(XY, ["0", "y"], ["1", "0"]))


def test_no_isolated_singularities_control():
    with pytest.raises(fl.FlagConditionFails):
        fl.check_no_isolated_singularities(chart(XY, ["x", "y"], ["1", "0"]))


def test_no_isolated_singularities_requires_normal_form():
    with pytest.raises(fl.NotInNormalForm):
        fl.check_no_isolated_singularities(chart(XY, ["0", "y"], ["x", "0"]))


# -- closedness ---------------------------------------------------------------

def test_closedness_logarithmic_flag():
    assert fl.check_closedness(log_flag()) == {0: True, 1: True}


def test_closedness_needs_theta_data():
    with pytest.raises(fl.UnsupportedConfiguration):
        fl.check_closedness(chart(XY, ["x", "y"], ["y", "-x"]))


def test_report_serialisation_is_stable():
    c = chart(XY, ["x^2", "y^3"], ["-y^3", "x^2"])
    a = fl.verify_comparison(c).to_dict()
    b = fl.verify_comparison(c).to_dict()
    assert a == b
    assert a["children"]["vf"]["algebraic"] == 6
