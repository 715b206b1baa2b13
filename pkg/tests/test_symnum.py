from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ariththeta.symnum import (MixedProduct, NonPositive, OpaqueRegistry, RegistryConflict, SymNumber,
                               digamma_int, harmonic, log_of_rational, mul, reduce_mod_logs)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)
primes = st.sampled_from([2, 3, 5, 7, 11])


@st.composite
def syms(draw):
    logs = draw(st.dictionaries(primes, rats, max_size=3))
    return SymNumber(draw(rats), draw(rats), draw(rats), logs)


@given(syms(), syms(), syms())
def test_addition_is_a_group(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a - a == SymNumber()
    assert a + SymNumber() == a


@given(syms(), rats, rats)
def test_scaling_distributes(a, p, q):
    assert a.scale(p + q) == a.scale(p) + a.scale(q)
    assert a.scale(p).scale(q) == a.scale(p * q)


@given(syms(), syms())
def test_shadow_is_additive(a, b):
    with mpmath.workdps(50):
        assert abs((a + b).shadow() - a.shadow() - b.shadow()) < mpmath.mpf(10) ** -40


@given(syms())
def test_json_round_trip(a):
    assert SymNumber.from_json(a.to_json()) == a


# factoring large random numerators can be slow
@settings(deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000), st.fractions(min_value=Fraction(1, 1000), max_value=1000))
def test_log_is_a_homomorphism(x, y):
    assert log_of_rational(x * y) == log_of_rational(x) + log_of_rational(y)


def test_log_of_rational_factorizes():
    assert log_of_rational(Fraction(12, 5)) == SymNumber(logs={2: 2, 3: 1, 5: -1})
    assert log_of_rational(1).is_zero()
    with pytest.raises(NonPositive):
        log_of_rational(0)
    with pytest.raises(NonPositive):
        log_of_rational(-3)


def test_mixed_product_is_refused():
    a = SymNumber(logs={2: 1})
    with pytest.raises(MixedProduct):
        mul(a, SymNumber(gamma=1))
    assert mul(a, SymNumber(3)) == SymNumber(logs={2: 3})


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        SymNumber(0.5)


def test_str_format():
    assert str(SymNumber(-1, logs={2: -2})) == "-1 - 2 log 2"
    assert str(SymNumber()) == "0"
    assert str(SymNumber(Fraction(3, 2), gamma=1, logpi=1)) == "3/2 + gamma + log pi"


def test_digamma_and_harmonic():
    assert harmonic(4) == Fraction(25, 12)
    with mpmath.workdps(30):
        for m in range(1, 8):
            assert abs(digamma_int(m).shadow() - mpmath.digamma(m)) < mpmath.mpf(10) ** -25


def test_reduce_mod_logs():
    a = SymNumber(1, logs={2: 1, 3: 5})
    assert reduce_mod_logs(a, [3]) == SymNumber(1, logs={2: 1})


def test_registry_is_write_once():
    reg = OpaqueRegistry()
    reg.register("X", 1)
    reg.register("X", 1)
    with pytest.raises(RegistryConflict):
        reg.register("X", 2)
    assert SymNumber.opaque("X", 2).shadow(reg) == 2
    assert SymNumber.opaque("Y").shadow(reg) is None
