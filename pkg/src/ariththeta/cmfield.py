"""Imaginary quadratic fields: forms, class groups, Kronecker symbols, L-values, p-adic helpers."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, isqrt

import mpmath
from sympy import factorint, isprime


class NotFundamental(ValueError):
    pass


class PrecisionUnreachable(ArithmeticError):
    pass


# ---------------------------------------------------------------- basic arithmetic

def vp(x, p: int) -> float | int:
    """p-adic valuation of a rational; inf for 0."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(x, p: int) -> Fraction:
    x = Fraction(x)
    return x / Fraction(p) ** vp(x, p)


def is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d|n) for integers, n >= 0 or negative."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    res = 1
    if n < 0:
        n = -n
        if d < 0:
            res = -res
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            res = -res
    # Jacobi symbol (d|n) for odd n
    a = d % n if n > 1 else 0
    if n == 1:
        return res
    m = n
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                res = -res
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            res = -res
        a %= m
    return res if m == 1 else 0


def hilbert_symbol(a, b, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals."""
    a, b = Fraction(a), Fraction(b)
    alpha, beta = vp(a, p), vp(b, p)
    u = unit_part(a, p)
    v = unit_part(b, p)
    # reduce units to integers mod p^3
    mod = p ** 3
    ui = u.numerator * pow(u.denominator, -1, mod) % mod
    vi = v.numerator * pow(v.denominator, -1, mod) % mod
    if p != 2:
        s = (-1) ** (alpha * beta * ((p - 1) // 2) % 2)
        s *= _legendre(ui, p) ** beta * _legendre(vi, p) ** alpha
        return s
    eps = lambda x: ((x - 1) // 2) % 2
    om = lambda x: ((x * x - 1) // 8) % 2
    e = eps(ui) * eps(vi) + alpha * om(vi) + beta * om(ui)
    return -1 if e % 2 else 1


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def eta_local(d: int, x, p: int) -> int:
    """Local quadratic character of Q_p(sqrt d)/Q_p at a nonzero rational x."""
    return hilbert_symbol(d, x, p)


def eta_infinity(d: int, x) -> int:
    return -1 if (d < 0 and Fraction(x) < 0) else 1


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int | None:
    """A root of z^2 = a mod p^k with p odd and a a unit, by Hensel lifting; None if a is a non-residue."""
    mod = p ** k
    a %= mod
    if p == 2:
        for z in range(mod):
            if z * z % mod == a:
                return z
        return None
    if _legendre(a, p) != 1:
        return None
    z = next(z for z in range(1, p) if z * z % p == a % p)
    m = p
    while m < mod:
        m *= p
        z = (z - (z * z - a) * pow(2 * z, -1, m)) % m
    return z % mod


def prime_factors(n) -> list[int]:
    n = Fraction(n)
    ps = set(factorint(abs(n.numerator))) | set(factorint(n.denominator))
    return sorted(p for p in ps if p > 1)


# ---------------------------------------------------------------- forms

def reduce_form(f):
    a, b, c = f
    while True:
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
            continue
        if a == c and b < 0:
            b = -b
            continue
        return (a, b, c)


def compose(f, g):
    """Dirichlet composition of primitive forms of equal discriminant."""
    a1, b1, c1 = f
    a2, b2, _ = g
    D = b1 * b1 - 4 * a1 * c1
    beta = (b1 + b2) // 2
    g1, x, y = _egcd(a1, a2)
    e, s, w = _egcd(g1, beta)
    u, v = s * x, s * y
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return reduce_form((A, B, C))


def _egcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def reduced_forms(d: int) -> list[tuple[int, int, int]]:
    out = []
    amax = isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
    return out


def units_count(d: int) -> int:
    return {-3: 6, -4: 4}.get(d, 2)


@dataclass(frozen=True)
class PlaceType:
    p: int
    kind: str

    def __post_init__(self):
        if self.kind not in ("split", "inert", "ramified"):
            raise ValueError(self.kind)


@dataclass(frozen=True)
class CMField:
    d: int
    w: int
    class_reps: tuple

    @property
    def h(self) -> int:
        return len(self.class_reps)

    @property
    def omega_trace(self) -> int:
        return self.d

    @property
    def omega_norm(self) -> int:
        return (self.d * self.d - self.d) // 4

    def principal_form(self):
        return self.class_reps[0]

    def square_classes(self) -> tuple:
        """Classes in the principal genus (squares of the class group)."""
        sq = {compose(f, f) for f in self.class_reps}
        return tuple(f for f in self.class_reps if f in sq)

    def ramified_primes(self) -> list[int]:
        return prime_factors(self.d)


@lru_cache(maxsize=None)
def class_group(d: int) -> CMField:
    if not is_fundamental(d):
        raise NotFundamental(d)
    if -d > 10 ** 6:
        raise ValueError("|d| above the supported range")
    return CMField(d, units_count(d), tuple(reduced_forms(d)))


def splitting_type(E: CMField | int, p: int) -> PlaceType:
    d = E.d if isinstance(E, CMField) else E
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker(d, p)
    return PlaceType(p, {1: "split", -1: "inert", 0: "ramified"}[k])


def form_representation_count(form, t: int) -> int:
    a, b, c = form
    D = b * b - 4 * a * c
    if D >= 0 or a <= 0:
        raise ValueError("form must be positive definite")
    if t < 0:
        return 0
    if t == 0:
        return 1
    # a x^2 + b x y + c y^2 = t; (2 a x + b y)^2 + |D| y^2 = 4 a t
    cnt = 0
    ymax = isqrt(4 * a * t // (-D))
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * t + D * y * y
        if rest < 0:
            continue
        r = isqrt(rest)
        if r * r != rest:
            continue
        for s in {r, -r}:
            num = s - b * y
            if num % (2 * a) == 0:
                cnt += 1
    return cnt


def divisor_sum_chi(d: int, t: int) -> int:
    return sum(kronecker(d, m) for m in range(1, t + 1) if t % m == 0)


# ---------------------------------------------------------------- L-values

def l_value0_exact(d: int) -> Fraction:
    """L(0, eta) = -(1/|d|) sum_{a=1}^{|d|} a eta(a)."""
    N = -d
    return Fraction(-sum(a * kronecker(d, a) for a in range(1, N + 1)), N)


def dirichlet_L(d: int, order: str = "value0", digits: int = 40):
    """L(0, eta) or L'(0, eta) via Hurwitz zeta; accuracy confirmed at two working precisions."""
    if not is_fundamental(d):
        raise NotFundamental(d)

    def compute(dps):
        with mpmath.workdps(dps):
            N = -d
            tot = mpmath.mpf(0)
            for a in range(1, N + 1):
                chi = kronecker(d, a)
                if chi == 0:
                    continue
                x = mpmath.mpf(a) / N
                if order == "value0":
                    tot += chi * mpmath.zeta(0, x)
                elif order == "deriv0":
                    # d/ds [N^-s zeta(s, x)] at 0
                    tot += chi * (mpmath.zeta(0, x, 1) - mpmath.log(N) * mpmath.zeta(0, x))
                else:
                    raise ValueError(order)
            return tot

    v1 = compute(digits + 10)
    v2 = compute(digits + 25)
    with mpmath.workdps(digits + 25):
        if abs(v1 - v2) > mpmath.mpf(10) ** (-digits) * max(1, abs(v2)):
            raise PrecisionUnreachable(f"L-value for d={d} unstable")
    with mpmath.workdps(digits):
        return +v2


def llogderiv_tag(d: int) -> str:
    return f"LLOGDERIV({d})"


def register_llogderiv(d: int, registry=None, digits: int = 64):
    from .symnum import REGISTRY
    registry = REGISTRY if registry is None else registry
    tag = llogderiv_tag(d)
    if tag not in registry:
        with mpmath.workdps(digits + 10):
            val = dirichlet_L(d, "deriv0", digits) / dirichlet_L(d, "value0", digits)
        registry.register(tag, val)
    return tag


# ---------------------------------------------------------------- dataset

def load_discriminant_table() -> dict[int, dict]:
    out = {}
    with resources.files("ariththeta").joinpath("data/discriminants.csv").open() as fh:
        for row in csv.DictReader(fh):
            d = int(row["d"])
            forms = []
            for part in row["forms"].split(";"):
                if part:
                    forms.append(tuple(int(x) for x in part.split(",")))
            out[d] = {"h": int(row["h"]), "w": int(row["w"]), "forms": forms}
    return out


def write_discriminant_table(path, dmax: int = 500) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["d", "h", "w", "forms"])
        for d in range(-3, -dmax - 1, -1):
            if is_fundamental(d):
                E = class_group(d)
                wr.writerow([d, E.h, E.w, ";".join(",".join(map(str, f)) for f in E.class_reps)])
