from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ariththeta import series
from ariththeta.cmfield import form_representation_count, llogderiv_tag
from ariththeta.hlattice import HermitianLattice
from ariththeta.series import (FALTINGS, AmbiguousPlace, GlobalSpaceData, QExpansion, UnknownSuite, a_frak_partial,
                               averaged_theta, c_frak, e_frak, eisenstein_deriv_finite,
                               eisenstein_deriv_place_terms, eisenstein_incoherent_value, eisenstein_qexp,
                               gross_multiplicity, local_arith_sw_check, mixed_series_direct,
                               mixed_series_product, nearby_scaling, proportionality, verify_suite)
from ariththeta.symnum import SymNumber

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)
symnums = st.builds(lambda r, g, l2: SymNumber(r, gamma=g, logs={2: l2}), rationals, rationals, rationals)
qexps = st.builds(lambda cs, prec: QExpansion({Fraction(i): c for i, c in enumerate(cs)}, prec),
                  st.lists(symnums, max_size=6), st.integers(0, 6))


@settings(max_examples=40, deadline=None)
@given(qexps, qexps)
def test_qexp_add_commutes(a, b):
    assert (a + b).same_coefficients(b + a)


@settings(max_examples=40, deadline=None)
@given(qexps, qexps, qexps)
def test_qexp_rational_product_associative(a, b, c):
    # restrict to rational coefficients, where products stay in the field
    r = lambda q: QExpansion({t: SymNumber(x.rat) for t, x in q.coeffs.items()}, q.prec)
    a, b, c = r(a), r(b), r(c)
    assert ((a * b) * c).same_coefficients(a * (b * c))


@settings(max_examples=40, deadline=None)
@given(qexps)
def test_qexp_json_round_trip(a):
    assert QExpansion.from_json(a.dumps()) == a
    assert QExpansion.from_json(a.to_json()) == a


def test_qexp_truncates_and_drops_zeros():
    q = QExpansion({0: 1, 1: 0, 3: 2, 9: 5}, 4)
    assert q.indices() == [0, 3]
    assert q[1] == SymNumber()
    assert q.scale(3)[3] == SymNumber(6)


@pytest.mark.parametrize("v", range(10))
def test_gross_multiplicity(v):
    assert gross_multiplicity("inert", v) == Fraction(v + 1, 2)
    assert gross_multiplicity("ramified", v) == 2 * (v + 1)
    assert gross_multiplicity("inert", v, in_lattice=False) == 0
    assert gross_multiplicity("inert", v, integral=False) == 0
    assert gross_multiplicity("ramified", -1) == 0
    with pytest.raises(ValueError):
        gross_multiplicity("split", v)


def test_constants_symbolic():
    tag = llogderiv_tag(-4)
    assert a_frak_partial(-4, 1) == SymNumber(opaques={FALTINGS: 1, tag: 2}, logs={2: 4})
    assert c_frak(-4) == SymNumber(opaques={tag: 4}, logs={2: 4})


def _rank1(d):
    return GlobalSpaceData(d, 0, HermitianLattice.diagonal(d, [1]))


@pytest.mark.parametrize("d", [-3, -4, -7, -8])
def test_rank1_eisenstein_is_theta_of_norm_form(d):
    # class number one: E(0) is the theta series of the norm form
    prec = 25
    E = eisenstein_qexp(_rank1(d), prec)
    th = averaged_theta(d, Fraction(1), prec)
    for t in range(prec + 1):
        assert E[t] == SymNumber(th.get(Fraction(t), 0))


def test_rank1_eisenstein_genus_average():
    # d = -20 has two genera; the principal genus is x^2 + 5 y^2 alone
    prec = 30
    E = eisenstein_qexp(_rank1(-20), prec)
    th = averaged_theta(-20, Fraction(1), prec)
    for t in range(prec + 1):
        assert E[t] == SymNumber(th.get(Fraction(t), 0))
    assert th[Fraction(1)] == form_representation_count((1, 0, 5), 1)


@pytest.mark.parametrize("d", [-4, -3])
def test_mixed_series_product_equals_direct(d):
    D = GlobalSpaceData(d, 1)
    assert proportionality(mixed_series_product(D, None, 8), mixed_series_direct(D, 8)) == 1


def test_incoherent_value_vanishes():
    D = GlobalSpaceData(-4, 1, incoherent=True)
    q = eisenstein_incoherent_value(D, 12)
    assert q.indices() == [0]


def test_incoherent_needs_flag():
    D = GlobalSpaceData(-4, 1)
    with pytest.raises(ValueError):
        eisenstein_incoherent_value(D, 5)
    with pytest.raises(ValueError):
        eisenstein_deriv_finite(D, 5)
    with pytest.raises(ValueError):
        e_frak(D, 1)


def test_flip_at_split_prime_rejected():
    with pytest.raises(ValueError):
        GlobalSpaceData(-4, 1, incoherent=True, flip_place=5)


def test_derivative_single_place_support():
    D = GlobalSpaceData(-4, 1, incoherent=True)
    for t in range(1, 16):
        terms = eisenstein_deriv_place_terms(D, t)
        assert len(terms) <= 1
        for p, c in terms.items():
            assert set(c.logs) == {p}
            assert c.rat == 0 and not c.opaques
    q = eisenstein_deriv_finite(D, 9)
    assert q[1] == SymNumber(logs={2: 8})
    assert q[3] == SymNumber(logs={3: 8})
    assert q[7] == SymNumber(logs={7: 8})


def test_inert_derivative_grows_with_valuation():
    # at an inert place of odd valuation the term is proportional to v + 1
    D = GlobalSpaceData(-4, 1, incoherent=True)
    a = eisenstein_deriv_place_terms(D, 3)[3].logs[3]
    b = eisenstein_deriv_place_terms(D, 27)[3].logs[3]
    assert b == 2 * a


def test_e_frak_matches_derivative_for_incoherent():
    D = GlobalSpaceData(-4, 1, incoherent=True)
    for t in (1, 3, 5):
        assert e_frak(D, t) == eisenstein_deriv_finite(D, 6)[t]
    with pytest.raises(ValueError):
        e_frak(D, 0)


def test_ambiguous_place(monkeypatch):
    D = GlobalSpaceData(-4, 1, incoherent=True)
    fake = {2: SymNumber(logs={2: 1}), 3: SymNumber(logs={3: 1})}
    monkeypatch.setattr(series, "eisenstein_deriv_place_terms", lambda D, t: fake)
    with pytest.raises(AmbiguousPlace):
        e_frak(D, 6)
    with pytest.raises(AmbiguousPlace):
        eisenstein_deriv_finite(D, 3)


@pytest.mark.parametrize("d,p", [(-4, 3), (-3, 3)])
def test_local_arith_sw_ratio_constant(d, p):
    D = GlobalSpaceData(d, 1, incoherent=True)
    rep = local_arith_sw_check(D, p, 15)
    assert rep.constant
    assert rep.ratio == {(-4, 3): 1, (-3, 3): Fraction(1, 4)}[(d, p)]


def test_nearby_scaling_positive():
    D = GlobalSpaceData(-4, 1, incoherent=True)
    u = nearby_scaling(D, 3)
    assert u > 0 and u == 3


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        verify_suite("nosuch")


@pytest.mark.parametrize("name", ["b-constant", "weil-rep", "whittaker-laws"])
def test_selected_suites_pass(name):
    rep = verify_suite(name)
    assert rep["status"] == "pass", rep
    assert all(set(i) == {"id", "status", "residual", "notes"} for i in rep["items"])
