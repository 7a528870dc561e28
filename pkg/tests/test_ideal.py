import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flagres import ideal as idl
from flagres.poly import MonomialOrder, Polynomial

from strategies import XY, XYZ, small_fractions

GREVLEX, LEX, LOCAL = MonomialOrder.GREVLEX, MonomialOrder.LEX, MonomialOrder.LOCAL
x, y = (Polynomial.variable(XY, v) for v in XY)
X3, Y3, Z3 = (Polynomial.variable(XYZ, v) for v in XYZ)


# -- Groebner bases ---------------------------------------------------------

def test_groebner_one_step():
    assert idl.groebner([x**2 + y, y]) == [y, x**2]


def test_groebner_already_reduced():
    assert idl.groebner([x, y]) == [y, x] or idl.groebner([x, y]) == [x, y]


def test_groebner_removes_redundant_generator():
    assert idl.groebner([x**2 - 1, x - 1]) == [x - 1]


def test_groebner_empty_input():
    assert idl.groebner([]) == []


def test_groebner_is_reduced_and_monic():
    G = idl.groebner([x**3 - 2 * x * y, x**2 * y - 2 * y**2 + x])
    assert idl.is_groebner_basis(G)
    for g in G:
        assert g.leading_coefficient(GREVLEX) == 1
        others = [h.leading_monomial(GREVLEX) for h in G if h is not g]
        for m in g.terms:
            assert not any(all(a <= b for a, b in zip(lm, m)) for lm in others)


@st.composite
def generator_lists(draw, variables=XY):
    n = len(variables)
    count = draw(st.integers(1, 3))
    gens = []
    for _ in range(count):
        terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 3)] * n), small_fractions, min_size=1, max_size=3))
        gens.append(Polynomial(variables, terms))
    return gens


@given(generator_lists(), st.sampled_from([GREVLEX, LEX]))
def test_buchberger_criterion_post_hoc(gens, order):
    G = idl.groebner(gens, order)
    for f, g in itertools.combinations(G, 2):
        assert idl.normal_form(idl.s_polynomial(f, g, order), G, order).is_zero()
    for f in gens:
        assert idl.normal_form(f, G, order).is_zero()


@given(generator_lists())
def test_reduced_basis_is_unique(gens):
    G = idl.groebner(gens)
    assert idl.groebner(list(reversed(gens)) + G) == G


# -- zero-dimensionality and quotient dimension -----------------------------

def test_zero_dimensional_examples():
    assert idl.is_zero_dimensional([y, x**2])
    assert not idl.is_zero_dimensional([x * y])
    assert not idl.is_zero_dimensional([], nvars=2)


def test_quotient_dimension_examples():
    assert idl.quotient_dimension([x**2, y**3]) == 6
    assert idl.quotient_dimension([x, y]) == 1
    assert idl.quotient_dimension([x**2, x * y, y**2]) == 3


def test_quotient_dimension_requires_zero_dimensional():
    with pytest.raises(idl.NotZeroDimensional):
        idl.quotient_dimension([x * y])


@st.composite
def zero_dimensional_pairs(draw):
    """(x^a + lower, y^b + lower): grevlex leading terms are the pure powers."""
    a, b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    gens = []
    for lead, d in (((a, 0), a), ((0, b), b)):
        lower = [m for m in itertools.product(range(d), repeat=2) if sum(m) < d]
        terms = draw(st.dictionaries(st.sampled_from(lower), small_fractions, max_size=3))
        terms[lead] = 1
        gens.append(Polynomial(XY, terms))
    return gens, a * b


@given(zero_dimensional_pairs())
def test_quotient_dimension_independent_of_order(case):
    gens, bezout = case
    dims = {o: idl.quotient_dimension(idl.groebner(gens, o), o) for o in (GREVLEX, LEX)}
    assert dims[GREVLEX] == dims[LEX] == bezout


@given(zero_dimensional_pairs())
def test_local_multiplicity_bounded_by_global(case):
    gens, bezout = case
    assert idl.local_multiplicity(gens) <= bezout
    assert idl.local_multiplicity(gens) == idl.local_multiplicity_mora(gens)


@given(st.lists(st.integers(1, 4), min_size=2, max_size=3))
def test_local_multiplicity_of_monomial_ideal(exps):
    names = XYZ[: len(exps)]
    gens = [Polynomial.variable(names, v) ** a for v, a in zip(names, exps)]
    want = 1
    for a in exps:
        want *= a
    assert idl.local_multiplicity(gens) == want
    assert idl.local_multiplicity_mora(gens) == want


def test_ideal_presentation():
    I = idl.IdealPresentation.from_generators([x**2 + y, y])
    assert I.is_zero_dimensional()
    assert I.quotient_dimension() == 2
    assert not I.is_unit()
    assert idl.IdealPresentation.from_generators([x, x + 1]).is_unit()


# -- local multiplicities ---------------------------------------------------

def test_local_multiplicity_monomial():
    assert idl.local_multiplicity([x**2, y**3]) == 6


def test_local_multiplicity_sees_local_unit():
    assert idl.local_multiplicity([x + x**2, y]) == 1
    # globally the quotient also sees the point x = -1
    assert idl.quotient_dimension(idl.groebner([x + x**2, y])) == 2


def test_local_multiplicity_four_variables():
    names = ("x", "y", "w", "t")
    gens = [Polynomial.variable(names, v) ** 2 for v in names]
    assert idl.local_multiplicity(gens) == 16


def test_local_multiplicity_away_from_zero_set():
    assert idl.local_multiplicity([x - 1, y]) == 0


def test_local_multiplicity_at_shifted_point():
    gens = [(x - 1) ** 3, (y + 1) ** 2]
    assert idl.local_multiplicity(gens, (1, -1)) == 6
    assert idl.local_multiplicity(gens, (Fraction(1), "-1")) == 6


def test_local_multiplicity_needs_the_mora_path():
    # the global ideal has further zeros, so the fast path cannot be used
    gens = [x**2 + y**3, x * y]
    assert idl.local_multiplicity(gens) == 5
    assert idl.local_multiplicity_mora(gens) == 5


def test_local_multiplicity_rejects_float_point():
    with pytest.raises(idl.NonRationalPoint):
        idl.local_multiplicity([x, y], (0.5, 0))


def test_local_multiplicity_not_finite():
    with pytest.raises(idl.NotFiniteAtPoint):
        idl.local_multiplicity([x * y])


# -- ideal equality and membership -----------------------------------------

def test_ideals_equal_examples():
    assert idl.ideals_equal([x, y], [y, x])
    assert not idl.ideals_equal([x**2], [x])
    f1, f2 = x**2, y**3
    assert idl.ideals_equal([f1, f2], [-f2, f1])


def test_local_equality_ignores_unit_factors():
    a = [x * (1 + y), y]
    b = [x, y * (2 - x)]
    assert idl.local_ideals_equal(a, b)
    assert not idl.local_ideals_equal([x**2, y], [x, y])


def test_radical_membership():
    assert idl.radical_contains([x**2, y**3], x)
    assert not idl.radical_contains([x**2], y)


def test_ideal_contains():
    assert idl.ideal_contains([x**2, y], x**2 * y + y)
    assert not idl.ideal_contains([x**2, y], x)
