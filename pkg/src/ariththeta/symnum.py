"""Exact arithmetic in the graded field Q + Q*gamma + Q*log(pi) + sum_p Q*log(p) + opaque tags.

Every value carries rational coefficients only; the floating value is a shadow
computed on demand and never used for equality.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath
from sympy import factorint

DEFAULT_DIGITS = 64


class MixedProduct(ArithmeticError):
    """Both factors of a product carry transcendental parts."""


class NonPositive(ValueError):
    """log of a non-positive rational."""


class RegistryConflict(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass int, Fraction or a 'p/q' string")
    return Fraction(x)


def _clean(m: Mapping) -> dict:
    return {k: _frac(v) for k, v in m.items() if _frac(v) != 0}


class OpaqueRegistry:
    """Numeric values for opaque tags. Write once per tag, then read only."""

    def __init__(self):
        self._values: dict[str, mpmath.mpf] = {}
        self._lock = threading.Lock()

    def register(self, tag: str, value, tol=None) -> None:
        value = mpmath.mpf(value)
        with self._lock:
            old = self._values.get(tag)
            if old is None:
                self._values[tag] = value
                return
            if tol is None:
                tol = mpmath.mpf(10) ** (-20)
            if abs(old - value) > tol * max(1, abs(old)):
                raise RegistryConflict(f"tag {tag} already registered with a different value")

    def get(self, tag: str):
        return self._values.get(tag)

    def __contains__(self, tag):
        return tag in self._values

    def tags(self):
        return sorted(self._values)


REGISTRY = OpaqueRegistry()


class SymNumber:
    """Immutable element of the graded coefficient field."""

    __slots__ = ("rat", "gamma", "logpi", "logs", "opaques", "_hash")

    def __init__(self, rat=0, gamma=0, logpi=0, logs: Mapping | None = None,
                 opaques: Mapping | None = None):
        object.__setattr__(self, "rat", _frac(rat))
        object.__setattr__(self, "gamma", _frac(gamma))
        object.__setattr__(self, "logpi", _frac(logpi))
        object.__setattr__(self, "logs", _clean({int(p): c for p, c in (logs or {}).items()}))
        object.__setattr__(self, "opaques", _clean(dict(opaques or {})))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, k, v):
        raise AttributeError("SymNumber is immutable")

    # constructors
    @classmethod
    def from_rational(cls, q) -> "SymNumber":
        return cls(rat=q)

    @classmethod
    def opaque(cls, tag: str, coef=1) -> "SymNumber":
        return cls(opaques={tag: coef})

    @classmethod
    def log_prime(cls, p: int, coef=1) -> "SymNumber":
        return cls(logs={p: coef})

    EULER_GAMMA: "SymNumber"
    LOG_PI: "SymNumber"

    # structure
    def is_rational(self) -> bool:
        return self.gamma == 0 and self.logpi == 0 and not self.logs and not self.opaques

    def is_zero(self) -> bool:
        return self.is_rational() and self.rat == 0

    def _key(self):
        return (self.rat, self.gamma, self.logpi, tuple(sorted(self.logs.items())),
                tuple(sorted(self.opaques.items())))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymNumber(other)
        if not isinstance(other, SymNumber):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    # arithmetic
    def __add__(self, other):
        other = as_sym(other)
        logs = dict(self.logs)
        for p, c in other.logs.items():
            logs[p] = logs.get(p, 0) + c
        ops = dict(self.opaques)
        for k, c in other.opaques.items():
            ops[k] = ops.get(k, 0) + c
        return SymNumber(self.rat + other.rat, self.gamma + other.gamma,
                         self.logpi + other.logpi, logs, ops)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-as_sym(other))

    def __rsub__(self, other):
        return as_sym(other) - self

    def scale(self, q) -> "SymNumber":
        q = _frac(q)
        return SymNumber(q * self.rat, q * self.gamma, q * self.logpi,
                         {p: q * c for p, c in self.logs.items()},
                         {k: q * c for k, c in self.opaques.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SymNumber):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self.scale(Fraction(1) / _frac(q))

    # numerics
    def shadow(self, registry: OpaqueRegistry | None = None, digits: int = DEFAULT_DIGITS):
        """Float approximation; None if some opaque tag has no registered value."""
        registry = REGISTRY if registry is None else registry
        with mpmath.workdps(digits + 10):
            total = mpmath.mpf(self.rat.numerator) / self.rat.denominator
            if self.gamma:
                total += _mpq(self.gamma) * mpmath.euler
            if self.logpi:
                total += _mpq(self.logpi) * mpmath.log(mpmath.pi)
            for p, c in self.logs.items():
                total += _mpq(c) * mpmath.log(p)
            for k, c in self.opaques.items():
                val = registry.get(k)
                if val is None:
                    return None
                total += _mpq(c) * val
            return +total

    def __float__(self):
        v = self.shadow()
        if v is None:
            raise ValueError("unregistered opaque tag")
        return float(v)

    # serialization
    def to_json(self, registry: OpaqueRegistry | None = None, digits: int = DEFAULT_DIGITS) -> dict:
        approx = self.shadow(registry, digits)
        return {
            "rat": str(self.rat),
            "gamma": str(self.gamma),
            "logpi": str(self.logpi),
            "logs": {str(p): str(c) for p, c in sorted(self.logs.items())},
            "opaque": {k: str(c) for k, c in sorted(self.opaques.items())},
            "approx": None if approx is None else mpmath.nstr(approx, digits, strip_zeros=False),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SymNumber":
        return cls(Fraction(obj.get("rat", "0")), Fraction(obj.get("gamma", "0")),
                   Fraction(obj.get("logpi", "0")),
                   {int(p): Fraction(c) for p, c in obj.get("logs", {}).items()},
                   {k: Fraction(c) for k, c in obj.get("opaque", {}).items()})

    def __str__(self):
        parts = []

        def term(c, name):
            if c == 0:
                return
            mag = abs(c)
            s = name if mag == 1 and name else (f"{mag} {name}".strip() if name else str(mag))
            parts.append(("-" if c < 0 else "+", s))

        term(self.rat, "")
        term(self.gamma, "gamma")
        term(self.logpi, "log pi")
        for p, c in sorted(self.logs.items()):
            term(c, f"log {p}")
        for k, c in sorted(self.opaques.items()):
            term(c, k)
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sgn, s in parts[1:]:
            out += f" {sgn} {s}"
        return out

    def __repr__(self):
        return f"SymNumber({self})"


def _mpq(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


SymNumber.EULER_GAMMA = SymNumber(gamma=1)
SymNumber.LOG_PI = SymNumber(logpi=1)
ZERO = SymNumber()
ONE = SymNumber(1)


def as_sym(x) -> SymNumber:
    if isinstance(x, SymNumber):
        return x
    return SymNumber(_frac(x))


def add(a, b) -> SymNumber:
    return as_sym(a) + as_sym(b)


def scale(q, a) -> SymNumber:
    return as_sym(a).scale(q)


def mul(a, b) -> SymNumber:
    a, b = as_sym(a), as_sym(b)
    if a.is_rational():
        return b.scale(a.rat)
    if b.is_rational():
        return a.scale(b.rat)
    raise MixedProduct(f"({a}) * ({b})")


def log_of_rational(r) -> SymNumber:
    r = _frac(r)
    if r <= 0:
        raise NonPositive(f"log of {r}")
    logs: dict[int, int] = {}
    for p, e in factorint(r.numerator).items():
        logs[p] = logs.get(p, 0) + e
    for p, e in factorint(r.denominator).items():
        logs[p] = logs.get(p, 0) - e
    return SymNumber(logs=logs)


def reduce_mod_logs(a: SymNumber, primes: Iterable[int]) -> SymNumber:
    S = set(int(p) for p in primes)
    return SymNumber(a.rat, a.gamma, a.logpi,
                     {p: c for p, c in a.logs.items() if p not in S}, a.opaques)


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def digamma_int(m: int) -> SymNumber:
    """psi(m) = -gamma + H_{m-1} for integers m >= 1."""
    if m < 1:
        raise ValueError("digamma only at positive integers")
    return SymNumber(rat=harmonic(m - 1), gamma=-1)
