"""Archimedean kernels and the Gamma-Laurent constant-term engine.

Numeric functions take an explicit ``digits`` argument and run inside a local
mpmath precision context, so nothing here touches global state.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath

from .symnum import SymNumber, digamma_int, harmonic, log_of_rational


class DomainError(ValueError):
    pass


class HigherOrderPole(ArithmeticError):
    pass


@dataclass(frozen=True)
class KernelParams:
    n: int
    s: float = 0.0
    precision: int = 30

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n >= 1 required")


# ---------------------------------------------------------------- Q_s and P_s

def hyp2f1_series(a, b, c, z, digits: int = 30):
    """Direct summation of 2F1(a, b; c; z) for |z| < 1."""
    with mpmath.workdps(digits + 10):
        a, b, c, z = (mpmath.mpf(x) for x in (a, b, c, z))
        if abs(z) >= 1:
            raise DomainError("series needs |z| < 1")
        term = mpmath.mpf(1)
        total = term
        eps = mpmath.mpf(10) ** (-(digits + 5))
        k = 0
        while True:
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            total += term
            k += 1
            # tail after term k is bounded by |term| * r/(1-r) with r -> |z|
            if abs(term) <= eps * abs(total) * (1 - abs(z)) and k > 2:
                break
            if k > 10 ** 7:
                raise DomainError("hypergeometric series did not converge")
        return +total


def Q_s(t, s, n: int, digits: int = 30):
    if t <= 1:
        raise DomainError("Q_s needs t > 1")
    if s <= -1:
        raise DomainError("Q_s needs s > -1")
    with mpmath.workdps(digits + 10):
        t, s = mpmath.mpf(t), mpmath.mpf(s)
        pref = mpmath.gamma(s + n) * mpmath.gamma(s + 1) / mpmath.gamma(2 * s + n + 1)
        val = pref * t ** (-s - n) * hyp2f1_series(s + n, s + 1, 2 * s + n + 1, 1 / t, digits + 5)
        return +val


def Q_s_mpmath(t, s, n: int, digits: int = 30):
    """Same function through mpmath's hyp2f1, used only as a cross-check."""
    with mpmath.workdps(digits + 10):
        t, s = mpmath.mpf(t), mpmath.mpf(s)
        pref = mpmath.gamma(s + n) * mpmath.gamma(s + 1) / mpmath.gamma(2 * s + n + 1)
        return +(pref * t ** (-s - n) * mpmath.hyp2f1(s + n, s + 1, 2 * s + n + 1, 1 / t))


def P_s(u, s, n: int, digits: int = 30):
    """int_1^oo dt / (t (1 + t u)^(s+n))."""
    if u <= 0:
        raise DomainError("P_s needs u > 0")
    if s <= -n:
        raise DomainError("P_s needs s > -n")
    with mpmath.workdps(digits + 10):
        u, s = mpmath.mpf(u), mpmath.mpf(s)
        f = lambda x: 1 / (x * (1 + x * u) ** (s + n))
        return +mpmath.quad(f, [1, 2, 10, 100, mpmath.inf])


def Q0_closed(u, n: int, digits: int = 30):
    """Q_0(1+u) = log(1+u) - log u - sum_{i<n} 1/(i (1+u)^i)."""
    with mpmath.workdps(digits + 10):
        u = mpmath.mpf(u)
        val = mpmath.log(1 + u) - mpmath.log(u)
        for i in range(1, n):
            val -= 1 / (i * (1 + u) ** i)
        return +val


def q_ode_residual(t, s, n: int, digits: int = 40, closed_form: bool = False):
    """|(t - t^2) Q'' + (n - (n+1) t) Q' + s (s+n) Q| by central differences."""
    if t <= 1:
        raise DomainError("t > 1 required")
    with mpmath.workdps(digits + 10):
        t, s = mpmath.mpf(t), mpmath.mpf(s)
        if closed_form:
            if s != 0:
                raise DomainError("closed form only at s = 0")
            f = lambda x: Q0_closed(x - 1, n, digits + 10)
        else:
            f = lambda x: Q_s(x, s, n, digits + 10)
        h = min(mpmath.mpf(10) ** (-(digits // 4)), (t - 1) / 4)
        f0, fp, fm = f(t), f(t + h), f(t - h)
        d1 = (fp - fm) / (2 * h)
        d2 = (fp - 2 * f0 + fm) / h ** 2
        res = (t - t * t) * d2 + (n - (n + 1) * t) * d1 + s * (s + n) * f0
        return float(abs(res))


def green_value_cm(q_x1, s, n: int, digits: int = 30):
    """Green value at the CM point: Q_s(1 - q(x1)), q(x1) < 0."""
    if q_x1 >= 0:
        raise DomainError("first component must have negative norm")
    return Q_s(1 - mpmath.mpf(q_x1), s, n, digits)


# ---------------------------------------------------------------- Kudla kernel

def e1_series(x, digits: int = 30):
    with mpmath.workdps(digits + 20):
        x = mpmath.mpf(x)
        total = -mpmath.euler - mpmath.log(x)
        term = mpmath.mpf(1)
        k = 1
        eps = mpmath.mpf(10) ** (-(digits + 10))
        while True:
            term *= -x / k
            add = -term / k
            total += add
            if abs(add) < eps and k > x:
                break
            k += 1
        return +total


def e1_contfrac(x, digits: int = 30):
    """Modified Lentz evaluation of E1(x) = e^-x / (x + 1/(1 + 1/(x + 2/(1 + ...))))."""
    with mpmath.workdps(digits + 10):
        x = mpmath.mpf(x)
        tiny = mpmath.mpf(10) ** (-(digits + 30))
        eps = mpmath.mpf(10) ** (-(digits + 5))
        # E1(x) = e^-x * 1/(x+1- 1/(x+3- 4/(x+5- ...)))
        b = x + 1
        c = 1 / tiny
        d = 1 / b
        h = d
        i = 1
        while True:
            a = -mpmath.mpf(i) * i
            b += 2
            d = 1 / (a * d + b)
            c = b + a / c
            delta = c * d
            h *= delta
            if abs(delta - 1) < eps:
                break
            i += 1
            if i > 10 ** 6:
                raise DomainError("continued fraction did not converge")
        return +(h * mpmath.exp(-x))


def kudla_kernel(R, delta=1, digits: int = 30, method: str = "auto"):
    """-Ei(-2 pi delta R) = E1(2 pi delta R)."""
    if R <= 0 or delta <= 0:
        raise DomainError("R > 0 and delta > 0 required")
    with mpmath.workdps(digits + 10):
        x = 2 * mpmath.pi * mpmath.mpf(delta) * mpmath.mpf(R)
        if method == "series" or (method == "auto" and x < 2):
            return e1_series(x, digits)
        return e1_contfrac(x, digits)


# ---------------------------------------------------------------- archimedean Whittaker

def arch_whittaker_value(n: int, t) -> tuple[Fraction, int]:
    """(2 pi)^(n+1) t^n / n! as (rational coefficient, power of pi); zero for t <= 0."""
    t = Fraction(t)
    if t <= 0:
        return Fraction(0), 0
    return Fraction(2 ** (n + 1), factorial(n)) * t ** n, n + 1


# ---------------------------------------------------------------- Gamma-Laurent engine

@dataclass(frozen=True)
class GammaLaurentExpr:
    """sum_k c_k Gamma(s + a_k) * (beta * pi^pi_power)^(-s), c_k in the SymNumber field."""
    terms: tuple = ()          # tuples (coef: SymNumber or rational, a: int >= 0)
    beta: Fraction = Fraction(1)
    pi_power: int = 0

    def __post_init__(self):
        if Fraction(self.beta) <= 0:
            raise ValueError("beta must be positive")
        for _, a in self.terms:
            if a < 0:
                raise ValueError("shifts must be nonnegative")

    def shadow_at(self, s, digits: int = 30):
        with mpmath.workdps(digits + 10):
            s = mpmath.mpf(s)
            base = mpmath.mpf(self.beta.numerator) / self.beta.denominator * mpmath.pi ** self.pi_power
            total = 0
            for c, a in self.terms:
                c = SymNumber(c) if not isinstance(c, SymNumber) else c
                total += c.shadow(digits=digits + 10) * mpmath.gamma(s + a)
            return +(total * base ** (-s))


def constant_term_at_zero(expr: GammaLaurentExpr) -> SymNumber:
    """Exact constant term at s = 0.

    Gamma(s + a) = Gamma(a) (1 + s psi(a)) + O(s^2) for a >= 1 and
    Gamma(s) = 1/s - gamma + O(s).  The base factor is 1 - s log(beta pi^k) + O(s^2).
    Pole coefficients are rational multiples of the c_k; only a simple pole is allowed,
    and its residue multiplies -log(base), which must stay in the linear field.
    """
    residue = SymNumber()
    const = SymNumber()
    for c, a in expr.terms:
        c = c if isinstance(c, SymNumber) else SymNumber(c)
        if a == 0:
            residue = residue + c
            const = const + _mul_checked(c, SymNumber(gamma=-1))
        else:
            g = factorial(a - 1)
            const = const + c.scale(g)
    log_base = log_of_rational(expr.beta) + SymNumber(logpi=expr.pi_power)
    if not residue.is_zero():
        if not residue.is_rational():
            raise HigherOrderPole("residue times log(base) leaves the linear field")
        const = const - log_base.scale(residue.rat)
    return const


def _mul_checked(a: SymNumber, b: SymNumber) -> SymNumber:
    if a.is_rational():
        return b.scale(a.rat)
    if b.is_rational():
        return a.scale(b.rat)
    raise HigherOrderPole("transcendental coefficient on a pole term")


def pole_residue(expr: GammaLaurentExpr) -> SymNumber:
    res = SymNumber()
    for c, a in expr.terms:
        if a == 0:
            res = res + (c if isinstance(c, SymNumber) else SymNumber(c))
    return res


def b_expression(n: int) -> GammaLaurentExpr:
    """(1/Gamma(n)) (4 pi)^(-s) [sum_j C(n,j) Gamma(j) Gamma(s+n-j) + (log pi - psi(n+1)) Gamma(s+n)]."""
    if n < 1:
        raise ValueError("n >= 1")
    inv = Fraction(1, factorial(n - 1))
    terms = []
    for j in range(1, n + 1):
        terms.append((SymNumber(inv * comb(n, j) * factorial(j - 1)), n - j))
    mult = SymNumber(logpi=1) - digamma_int(n + 1)
    terms.append((mult.scale(inv), n))
    return GammaLaurentExpr(tuple(terms), Fraction(4), 1)


def b_constant(n: int) -> SymNumber:
    return constant_term_at_zero(b_expression(n))


def b_paper_closed_form(n: int) -> SymNumber:
    """1 + 2 sum_{j<n} 1/j + log pi - psi(n+1): the displayed closed form, kept for comparison."""
    return SymNumber(1 + 2 * harmonic(n - 1)) + SymNumber(logpi=1) - digamma_int(n + 1)


def b_numeric(n: int, s_values=(Fraction(1, 10 ** 5), Fraction(1, 2 * 10 ** 5)), digits: int = 40):
    """Constant term from the defining integral evaluated by quadrature at small s.

    For each s the integrand sum is integrated numerically, the 1/s residue is removed
    and a Richardson step eliminates the O(s) error.
    """
    with mpmath.workdps(digits + 10):
        lp = mpmath.log(mpmath.pi)
        psi = mpmath.digamma(n + 1)

        def F(s):
            s = mpmath.mpf(s)

            def integrand(y, head):
                tot = 0
                for j in range(1, n + 1):
                    tot += comb(n, j) * mpmath.gamma(j) * y ** (s + n - j - 1)
                tot += (lp - psi) * y ** (s + n - 1)
                tot *= mpmath.exp(-y)
                if head:
                    # the j = n term has a y^(s-1) singularity; its integral over [0, 1] is 1/s
                    tot -= comb(n, n) * mpmath.gamma(n) * y ** (s - 1)
                return tot
            val = (mpmath.quad(lambda y: integrand(y, True), [0, 1])
                   + comb(n, n) * mpmath.gamma(n) / s
                   + mpmath.quad(lambda y: integrand(y, False), [1, 10, mpmath.inf]))
            val = val * (4 * mpmath.pi) ** (-s) / mpmath.gamma(n)
            res = 1 / mpmath.gamma(n) * (comb(n, n) * mpmath.gamma(n))
            return val - res / s

        s1, s2 = (mpmath.mpf(x.numerator) / x.denominator for x in s_values)
        f1, f2 = F(s1), F(s2)
        return float((f2 * s1 - f1 * s2) / (s1 - s2))


def kudla_const(n: int, t) -> SymNumber:
    """log pi - psi(n+1) + log t."""
    return SymNumber(logpi=1) - digamma_int(n + 1) + log_of_rational(t)


def Q_asymptotic_constant(s, n: int, digits: int = 30):
    with mpmath.workdps(digits + 10):
        s = mpmath.mpf(s)
        return +(mpmath.gamma(s + n) * mpmath.gamma(s + 1) / mpmath.gamma(2 * s + n + 1))


def P_asymptotic_constant(s, n: int):
    return 1 / (mpmath.mpf(s) + n)
