"""Hermitian lattices over imaginary quadratic rings.

Conventions: <x, y> = sum_ij x_i G_ij conj(y_j), q(x) = <x, x>.  O_E has Z-basis
{1, omega} with omega = (d + sqrt d)/2, and a lattice vector sum c_i e_i with
c_i = a_i + b_i omega is stored as the integer vector (a_1, b_1, ..., a_r, b_r).
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from pathlib import Path

import numpy as np

from .cmfield import CMField, class_group, sqrt_mod_prime_power, splitting_type, vp
from .symnum import SymNumber

CACHE_VERSION = "enum-v1"
DEFAULT_BOUND = 200


class SingularGram(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    pass


class UnsupportedPlace(ValueError):
    pass


class IsotropicVector(ValueError):
    pass


class NonFreeComplement(ValueError):
    pass


class PrecisionExceeded(ValueError):
    pass


class SupportOverflow(ValueError):
    pass


# ---------------------------------------------------------------- field elements

@dataclass(frozen=True)
class EElem:
    """x + y sqrt(d)."""
    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def from_basis(cls, a, b, d: int) -> "EElem":
        """a + b omega."""
        a, b = Fraction(a), Fraction(b)
        return cls(a + b * Fraction(d, 2), b / 2, d)

    def basis_coords(self) -> tuple[Fraction, Fraction]:
        """(a, b) with self = a + b omega."""
        b = 2 * self.y
        return self.x - self.y * self.d, b

    def is_integral(self) -> bool:
        a, b = self.basis_coords()
        return a.denominator == 1 and b.denominator == 1

    def conj(self) -> "EElem":
        return EElem(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def _lift(self, o) -> "EElem":
        if isinstance(o, EElem):
            return o
        return EElem(Fraction(o), 0, self.d)

    def __add__(self, o):
        o = self._lift(o)
        return EElem(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return EElem(-self.x, -self.y, self.d)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return EElem(self.x * o.x + self.d * self.y * o.y, self.x * o.y + self.y * o.x, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "EElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        c = self.conj()
        return EElem(c.x / n, c.y / n, self.d)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.y == 0 and self.x == o
        if not isinstance(o, EElem):
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))

    def to_json(self):
        return [str(self.x), str(self.y)]

    def __repr__(self):
        return f"({self.x} + {self.y}*sqrt({self.d}))"


def E(x, y=0, d: int = -4) -> EElem:
    return EElem(Fraction(x), Fraction(y), d)


def valuation_E(z: EElem, p: int) -> float | int:
    """v_p(Nm z): the normalized valuation of |z|_E."""
    return vp(z.norm(), p)


def split_embeddings(z: EElem, p: int, K: int = 0) -> tuple:
    """Valuations of the two images of z in Q_p x Q_p at a split prime."""
    if z.is_zero():
        return (float("inf"), float("inf"))
    vn = vp(z.norm(), p)
    den = lcm(z.x.denominator, z.y.denominator)
    X, Y = int(z.x * den), int(z.y * den)
    vd = vp(den, p)
    prec = max(K, vn + 2 * vd + 2)
    s = sqrt_mod_prime_power(z.d % p ** prec, p, prec)
    mod = p ** prec
    val = (X + Y * s) % mod
    v1 = vp(val, p) if val else prec
    v1 -= vd
    return (v1, vn - v1)


# ---------------------------------------------------------------- cyclotomic numbers

class Cyclo:
    """Element of Q(zeta_M), M = p^L, stored in the canonical power basis."""

    __slots__ = ("p", "L", "c")

    def __init__(self, coeffs=None, p: int = 1, L: int = 0):
        self.p = p
        self.L = L if p > 1 else 0
        c = {}
        for e, v in (coeffs or {}).items():
            v = Fraction(v)
            if v:
                c[e] = c.get(e, 0) + v
        self.c = c
        self._canon()

    @property
    def M(self) -> int:
        return self.p ** self.L if self.p > 1 else 1

    @classmethod
    def rational(cls, q) -> "Cyclo":
        return cls({0: Fraction(q)})

    @classmethod
    def root(cls, num: int, p: int, L: int) -> "Cyclo":
        """zeta_{p^L}^num."""
        M = p ** L
        return cls({num % M: 1}, p, L)

    def _canon(self):
        if self.L == 0:
            tot = sum(self.c.values(), Fraction(0))
            self.c = {0: tot} if tot else {}
            self.p = 1
            return
        p, L = self.p, self.L
        M = p ** L
        q = p ** (L - 1)
        phi = (p - 1) * q
        c = {}
        for e, v in self.c.items():
            e %= M
            c[e] = c.get(e, 0) + v
        for e in sorted([e for e in c if e >= phi], reverse=True):
            v = c.pop(e)
            r = e - phi
            for j in range(p - 1):
                k = r + j * q
                c[k] = c.get(k, 0) - v
        c = {e: v for e, v in c.items() if v}
        while self.L > 0 and all(e % p == 0 for e in c):
            c = {e // p: v for e, v in c.items()}
            self.L -= 1
        self.c = c
        if self.L == 0:
            self.p = 1
            tot = c.get(0, Fraction(0))
            self.c = {0: tot} if tot else {}

    def _lift_to(self, p: int, L: int) -> dict:
        if self.L == 0:
            return dict(self.c)
        shift = p ** (L - self.L)
        return {e * shift: v for e, v in self.c.items()}

    def _common(self, o):
        o = as_cyclo(o)
        if self.L and o.L and self.p != o.p:
            raise ValueError("mixing cyclotomic fields of different primes")
        p = self.p if self.L else o.p
        L = max(self.L, o.L)
        return o, p, L

    def __add__(self, o):
        o, p, L = self._common(o)
        a = self._lift_to(p, L)
        for e, v in o._lift_to(p, L).items():
            a[e] = a.get(e, 0) + v
        return Cyclo(a, p, L)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo({e: -v for e, v in self.c.items()}, self.p, self.L)

    def __sub__(self, o):
        return self + (-as_cyclo(o))

    def __rsub__(self, o):
        return as_cyclo(o) - self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return Cyclo({e: v * o for e, v in self.c.items()}, self.p, self.L)
        o, p, L = self._common(o)
        a, b = self._lift_to(p, L), o._lift_to(p, L)
        out = {}
        M = p ** L if L else 1
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                k = (e1 + e2) % M
                out[k] = out.get(k, 0) + v1 * v2
        return Cyclo(out, p, L)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.c

    def is_rational(self) -> bool:
        return self.L == 0

    def to_rational(self) -> Fraction:
        if self.L:
            raise ValueError("not rational")
        return self.c.get(0, Fraction(0))

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = Cyclo.rational(o)
        if not isinstance(o, Cyclo):
            return NotImplemented
        return self.L == o.L and (self.L == 0 or self.p == o.p) and self.c == o.c

    def __hash__(self):
        return hash((self.p, self.L, tuple(sorted(self.c.items()))))

    def __repr__(self):
        if self.L == 0:
            return str(self.to_rational())
        terms = " + ".join(f"{v}*z^{e}" for e, v in sorted(self.c.items()))
        return f"[{terms}]_(zeta_{self.M})"


def as_cyclo(x) -> Cyclo:
    if isinstance(x, Cyclo):
        return x
    return Cyclo.rational(x)


def psi_p(x, p: int) -> Cyclo:
    """Local additive character psi_p(x) = e(-{x}_p) for rational x."""
    x = Fraction(x)
    v = vp(x, p)
    if v >= 0:
        return Cyclo.rational(1)
    L = -v
    M = p ** L
    # {x}_p = a / p^L with a = x * p^L mod p^L computed p-adically
    num = x * M
    a = num.numerator * pow(num.denominator, -1, M) % M
    return Cyclo.root(-a, p, L)


def reduce_cyclo_array(arr: np.ndarray, p: int, L: int) -> np.ndarray:
    """Canonical reduction of coefficient vectors over Q(zeta_{p^L}) along the last axis."""
    arr = arr.copy()
    if L == 0:
        return arr
    q = p ** (L - 1)
    phi = (p - 1) * q
    for r in range(q - 1, -1, -1):
        e = r + phi
        v = arr[..., e].copy()
        arr[..., e] = 0
        for j in range(p - 1):
            arr[..., r + j * q] -= v
    return arr


# ---------------------------------------------------------------- lattices

def _mat_inverse(G):
    n = len(G)
    d = G[0][0].d
    A = [[G[i][j] for j in range(n)] + [EElem(1 if i == j else 0, 0, d) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            raise SingularGram("gram is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _det(M):
    n = len(M)
    if n == 0:
        return None
    d = M[0][0].d
    A = [list(r) for r in M]
    det = EElem(1, 0, d)
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            return EElem(0, 0, d)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        inv = A[col][col].inverse()
        for r in range(col + 1, n):
            if not A[r][col].is_zero():
                f = A[r][col] * inv
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det


@dataclass(frozen=True)
class LatticeLocalType:
    p: int
    vtype: str
    r: int
    divisors: tuple


@dataclass(frozen=True)
class HermitianLattice:
    field: CMField
    gram: tuple
    basis_denominators: tuple | None = None

    def __post_init__(self):
        d = self.field.d
        g = tuple(tuple(v if isinstance(v, EElem) else EElem(Fraction(v), 0, d) for v in row)
                  for row in self.gram)
        object.__setattr__(self, "gram", g)
        r = len(g)
        for i in range(r):
            if len(g[i]) != r:
                raise ValueError("gram must be square")
            for j in range(r):
                if g[j][i] != g[i][j].conj():
                    raise ValueError("gram is not conjugate-symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def d(self) -> int:
        return self.field.d

    @classmethod
    def from_entries(cls, d: int, entries) -> "HermitianLattice":
        """entries: nested lists of rationals or [x, y] pairs meaning x + y sqrt d."""
        def conv(v):
            if isinstance(v, (list, tuple)):
                return EElem(Fraction(v[0]), Fraction(v[1]), d)
            return EElem(Fraction(v), 0, d)
        return cls(class_group(d), tuple(tuple(conv(v) for v in row) for row in entries))

    @classmethod
    def diagonal(cls, d: int, diag) -> "HermitianLattice":
        r = len(diag)
        return cls.from_entries(d, [[diag[i] if i == j else 0 for j in range(r)] for i in range(r)])

    def to_json(self) -> dict:
        return {"d": self.d, "rank": self.rank,
                "gram": [[v.to_json() for v in row] for row in self.gram]}

    @classmethod
    def from_json(cls, obj) -> "HermitianLattice":
        L = cls.from_entries(int(obj["d"]), obj["gram"])
        if "rank" in obj and int(obj["rank"]) != L.rank:
            raise ValueError("rank does not match gram")
        return L

    def pairing(self, x, y) -> EElem:
        d = self.d
        tot = EElem(0, 0, d)
        for i in range(self.rank):
            for j in range(self.rank):
                tot = tot + x[i] * self.gram[i][j] * y[j].conj()
        return tot

    def q(self, x) -> Fraction:
        return self.pairing(x, x).x

    def direct_sum(self, other: "HermitianLattice") -> "HermitianLattice":
        r1, r2 = self.rank, other.rank
        z = EElem(0, 0, self.d)
        rows = [list(row) + [z] * r2 for row in self.gram]
        rows += [[z] * r1 + list(row) for row in other.gram]
        return HermitianLattice(self.field, tuple(tuple(r) for r in rows))

    def scaled(self, c) -> "HermitianLattice":
        c = Fraction(c)
        return HermitianLattice(self.field, tuple(tuple(v * c for v in row) for row in self.gram))

    def change_basis(self, T) -> "HermitianLattice":
        """New basis f_i = sum_k T[i][k] e_k; gram T G T^*."""
        r = self.rank
        d = self.d
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                tot = EElem(0, 0, d)
                for k in range(r):
                    for l in range(r):
                        tot = tot + T[i][k] * self.gram[k][l] * T[j][l].conj()
                row.append(tot)
            out.append(tuple(row))
        return HermitianLattice(self.field, tuple(out))

    # trace form
    def trace_form(self) -> list[list[Fraction]]:
        """Symmetric rational S with q(v) = v^T S v on integer coordinate vectors."""
        d = self.d
        r = self.rank
        basis = []
        for i in range(r):
            for c in (EElem(1, 0, d), EElem.from_basis(0, 1, d)):
                vec = [EElem(0, 0, d)] * r
                vec[i] = c
                basis.append(vec)
        n = 2 * r
        S = [[Fraction(0)] * n for _ in range(n)]
        for k in range(n):
            S[k][k] = self.q(basis[k])
        for k in range(n):
            for l in range(k + 1, n):
                val = self.pairing(basis[k], basis[l]).trace() / 2
                S[k][l] = S[l][k] = val
        return S

    def is_positive_definite(self) -> bool:
        S = self.trace_form()
        n = len(S)
        A = [row[:] for row in S]
        for k in range(n):
            if A[k][k] <= 0:
                return False
            for i in range(k + 1, n):
                f = A[i][k] / A[k][k]
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
        return True

    def require_definite(self):
        if not self.is_positive_definite():
            raise NotPositiveDefinite("trace form is not positive definite")

    def determinant(self) -> Fraction:
        return _det([list(r) for r in self.gram]).x


def dual_gram(L: HermitianLattice) -> HermitianLattice:
    inv = _mat_inverse([list(r) for r in L.gram])
    # G^-1 is hermitian; the dual basis has gram G^-1
    return HermitianLattice(L.field, tuple(tuple(v for v in row) for row in inv))


# ---------------------------------------------------------------- local structure

def _local_val(z: EElem, p: int, kind: str):
    """Valuation data of z in O_{E_p}: a single value, or a pair at split p."""
    if kind == "split":
        return split_embeddings(z, p)
    v = valuation_E(z, p)
    if v == float("inf"):
        return v
    return v // 2 if kind == "inert" else v


def _minor_vals(M, k, p, kind):
    n = len(M)
    vals = []
    for rows in combinations(range(n), k):
        for cols in combinations(range(n), k):
            sub = [[M[i][j] for j in cols] for i in rows]
            vals.append(_local_val(_det(sub), p, kind))
    return vals


def elementary_divisors(L: HermitianLattice, p: int) -> tuple:
    """Valuations of the elementary divisors of the gram over O_{E_p}
    (in units of the local uniformizer; pairs of component valuations at split p)."""
    kind = splitting_type(L.field, p).kind
    G = [list(r) for r in L.gram]
    n = len(G)
    prev = (0, 0) if kind == "split" else 0
    out = []
    for k in range(1, n + 1):
        vals = _minor_vals(G, k, p, kind)
        if kind == "split":
            cur = (min(v[0] for v in vals), min(v[1] for v in vals))
            out.append((cur[0] - prev[0], cur[1] - prev[1]))
        else:
            cur = min(vals)
            out.append(cur - prev)
        prev = cur
    return tuple(out)


def local_type(L: HermitianLattice, p: int) -> LatticeLocalType:
    kind = splitting_type(L.field, p).kind
    divs = elementary_divisors(L, p)
    vals = [max(v) for v in divs] if kind == "split" else list(divs)
    if kind == "split":
        vals = [v[0] if v[0] == v[1] else -1 for v in divs]
    n = len(vals)
    if any(v not in (0, 1) for v in vals):
        return LatticeLocalType(p, "other(non-vertex)", -1, divs)
    r = sum(vals)
    if r == 0:
        t = "self-dual"
    elif r == n:
        t = "pi-modular"
    elif r == 1:
        t = "almost-self-dual"
    elif r == n - 1:
        t = "almost-pi-modular"
    else:
        t = f"other({r})"
    return LatticeLocalType(p, t, r, divs)


def jacobowitz_split(L: HermitianLattice, p: int):
    """Orthogonal splitting at p into rank-1 blocks and rank-2 blocks.

    Returns (blocks, T): T lists the new basis vectors in old coordinates (entries are
    p-integral elements of E), and blocks is a list of (kind, gram) with kind in
    {'unit', 'scaled', 'M'} describing consecutive rows of T.
    """
    kind = splitting_type(L.field, p).kind
    if kind == "ramified" and p == 2:
        raise UnsupportedPlace("ramified p = 2 is not supported")
    d = L.d
    r = L.rank
    zero, one = EElem(0, 0, d), EElem(1, 0, d)
    T = [[one if i == j else zero for j in range(r)] for i in range(r)]
    cur = L
    blocks = []
    start = 0
    candidates = [EElem.from_basis(a, b, d) for a in range(p) for b in range(p) if (a, b) != (0, 0)]

    def val(z):
        v = _local_val(z, p, kind)
        return min(v) if kind == "split" else v

    while start < r:
        G = cur.gram
        idx = range(start, r)
        vmin = min(val(G[i][j]) for i in idx for j in idx)
        diag = [i for i in idx if val(G[i][i]) == vmin]
        if not diag:
            i, j = next((i, j) for i in idx for j in idx if i != j and val(G[i][j]) == vmin)
            if kind != "ramified":
                for c in candidates:
                    # e_i <- e_i + c e_j
                    Tn = [row[:] for row in T]
                    Tn[i] = [a + c * b for a, b in zip(T[i], T[j])]
                    test = L.change_basis(Tn)
                    if val(test.gram[i][i]) == vmin:
                        T = Tn
                        cur = test
                        break
                else:
                    raise UnsupportedPlace("no diagonalizing combination found")
                continue
            # ramified: split off a rank-2 block on (e_i, e_j)
            if i != start:
                T[start], T[i] = T[i], T[start]
            j2 = j if j != start else i
            if j2 != start + 1:
                T[start + 1], T[j2] = T[j2], T[start + 1]
            cur = L.change_basis(T)
            G = cur.gram
            B = [[G[start][start], G[start][start + 1]], [G[start + 1][start], G[start + 1][start + 1]]]
            Binv = _mat_inverse(B)
            for k in range(start + 2, r):
                # remove components: e_k <- e_k - sum_ab <e_k, e_a> (B^-1)_{ab} e_b  (projection)
                coef = []
                for b in range(2):
                    tot = zero
                    for a in range(2):
                        tot = tot + G[k][start + a] * Binv[a][b]
                    coef.append(tot)
                T[k] = [t - coef[0] * u0 - coef[1] * u1
                        for t, u0, u1 in zip(T[k], T[start], T[start + 1])]
            cur = L.change_basis(T)
            blocks.append(("M", (cur.gram[start][start:start + 2], cur.gram[start + 1][start:start + 2])))
            start += 2
            continue
        i = diag[0]
        if i != start:
            T[start], T[i] = T[i], T[start]
            cur = L.change_basis(T)
            G = cur.gram
        a = G[start][start]
        for k in range(start + 1, r):
            f = G[k][start] / a
            T[k] = [t - f * u for t, u in zip(T[k], T[start])]
        cur = L.change_basis(T)
        blocks.append(("unit" if vmin == 0 else "scaled", cur.gram[start][start]))
        start += 1
    return blocks, T


def orth_complement(L: HermitianLattice, e0) -> HermitianLattice:
    d = L.d
    e0 = [v if isinstance(v, EElem) else EElem(Fraction(v), 0, d) for v in e0]
    if L.q(e0) == 0:
        raise IsotropicVector("q(e0) = 0")
    r = L.rank
    basis = [[EElem(1 if i == j else 0, 0, d) for j in range(r)] for i in range(r)]
    a = [L.pairing(basis[j], e0) for j in range(r)]
    for k in range(r):
        if a[k].is_zero():
            continue
        ratios = [a[j] / a[k] for j in range(r)]
        if all(z.is_integral() for z in ratios):
            break
    else:
        raise NonFreeComplement("complement is not visibly free on this basis")
    T = [[b - ratios[j] * c for b, c in zip(basis[j], basis[k])] for j in range(r) if j != k]
    out = []
    for x in T:
        out.append(tuple(L.pairing(x, y) for y in T))
    return HermitianLattice(L.field, tuple(out))


# ---------------------------------------------------------------- Schwartz weights

@dataclass(frozen=True)
class SchwartzWeight:
    """sum of coef * 1_{rep + M Lambda}; rep is a tuple of EElem, M a positive integer."""
    terms: tuple = ()

    def __post_init__(self):
        clean = []
        for rep, M, coef in self.terms:
            coef = Fraction(coef)
            if coef == 0:
                continue
            rep = tuple(rep)
            # reduce rep coordinates mod M
            red = []
            for z in rep:
                a, b = z.basis_coords()
                if a.denominator == 1:
                    a = Fraction(int(a) % M)
                if b.denominator == 1:
                    b = Fraction(int(b) % M)
                red.append(EElem.from_basis(a, b, z.d))
            clean.append((tuple(red), int(M), coef))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def indicator(cls, rank: int, d: int, M: int = 1) -> "SchwartzWeight":
        return cls((((EElem(0, 0, d),) * rank, M, 1),))

    @classmethod
    def zero(cls) -> "SchwartzWeight":
        return cls(())

    def value_at_zero(self) -> Fraction:
        tot = Fraction(0)
        for rep, M, coef in self.terms:
            if all(_in_coset_coords(z, M) for z in rep):
                tot += coef
        return tot

    def denominator(self) -> int:
        D = 1
        for rep, M, _ in self.terms:
            for z in rep:
                a, b = z.basis_coords()
                D = lcm(D, a.denominator, b.denominator)
        return D

    def evaluate(self, vecs: np.ndarray, D: int) -> list[Fraction]:
        """Weight values at x = v / D for integer coordinate rows v."""
        out = np.zeros(len(vecs), dtype=object)
        out[:] = Fraction(0)
        for rep, M, coef in self.terms:
            shift = []
            for z in rep:
                a, b = z.basis_coords()
                shift += [int(a * D), int(b * D)]
            shift = np.array(shift, dtype=np.int64)
            mod = D * M
            mask = np.all((vecs - shift) % mod == 0, axis=1)
            out[mask] = out[mask] + coef
        return list(out)


def _in_coset_coords(z: EElem, M: int) -> bool:
    a, b = z.basis_coords()
    return (a / M).denominator == 1 and (b / M).denominator == 1


# ---------------------------------------------------------------- enumeration

def _cache_dir() -> Path | None:
    root = os.environ.get("ARITHTHETA_CACHE")
    if root == "":
        return None
    return Path(root) if root else None


def _cache_key(S, bound) -> str:
    payload = json.dumps({"v": CACHE_VERSION, "S": [[str(x) for x in r] for r in S],
                          "bound": str(bound)}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def short_vectors(S, bound) -> tuple[np.ndarray, np.ndarray]:
    """All integer v with v^T S v <= bound; returns (vectors, exact norms * den) and den."""
    den = lcm(*[x.denominator for row in S for x in row])
    bound = Fraction(bound)
    key = _cache_key(S, bound)
    cdir = _cache_dir()
    if cdir is not None:
        path = cdir / f"{key}.npz"
        if path.exists():
            with np.load(path) as z:
                return z["vecs"], z["norms"], int(z["den"])
    vecs = _fincke_pohst(S, float(bound) * (1 + 1e-9) + 1e-9)
    Sint = np.array([[int(x * den) for x in row] for row in S], dtype=np.int64)
    if len(vecs):
        norms = np.einsum("ij,jk,ik->i", vecs, Sint, vecs)
    else:
        norms = np.zeros(0, dtype=np.int64)
    keep = norms * bound.denominator <= bound.numerator * den
    vecs, norms = vecs[keep], norms[keep]
    order = np.lexsort(vecs.T[::-1])
    order = order[np.argsort(norms[order], kind="stable")]
    vecs, norms = vecs[order], norms[order]
    if cdir is not None:
        cdir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=cdir, suffix=".tmp")
        os.close(fd)
        with open(tmp, "wb") as fh:
            np.savez(fh, vecs=vecs, norms=norms, den=np.array(den))
        os.replace(tmp, cdir / f"{key}.npz")
    return vecs, norms, den


def _fincke_pohst(S, bound: float) -> np.ndarray:
    n = len(S)
    A = np.array([[float(x) for x in row] for row in S])
    # q(v) = sum_i Q_ii (v_i + sum_{j>i} Q_ij v_j)^2
    Q = A.copy()
    for i in range(n):
        for j in range(i + 1, n):
            Q[j, i] = Q[i, j]
            Q[i, j] = Q[i, j] / Q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k, l] -= Q[k, i] * Q[i, l]
    out = []
    v = [0] * n

    def rec(i, remaining):
        c = -sum(Q[i, j] * v[j] for j in range(i + 1, n))
        r = (max(remaining, 0) / Q[i, i]) ** 0.5
        lo, hi = int(np.ceil(c - r - 1e-9)), int(np.floor(c + r + 1e-9))
        if i == 0:
            for x in range(lo, hi + 1):
                v[0] = x
                out.append(tuple(v))
            return
        for x in range(lo, hi + 1):
            v[i] = x
            rem = remaining - Q[i, i] * (x - c) ** 2
            if rem < -1e-9:
                continue
            rec(i - 1, rem)
        v[i] = 0

    rec(n - 1, bound)
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def _enumeration_data(L: HermitianLattice, weight: SchwartzWeight, tmax, bound=None):
    L.require_definite()
    bound = DEFAULT_BOUND if bound is None else bound
    tmax = Fraction(tmax)
    if tmax > bound:
        raise PrecisionExceeded(f"t = {tmax} above enumeration bound {bound}")
    D = weight.denominator()
    vecs, norms, den = short_vectors(L.trace_form(), tmax * D * D)
    return vecs, norms, den, D


def enumerate_norm(L: HermitianLattice, t, weight: SchwartzWeight | None = None,
                   bound=None) -> SymNumber:
    weight = SchwartzWeight.indicator(L.rank, L.d) if weight is None else weight
    t = Fraction(t)
    if t < 0:
        return SymNumber(0)
    vecs, norms, den, D = _enumeration_data(L, weight, t, bound)
    target = t * D * D * den
    if target.denominator != 1:
        return SymNumber(0)
    sel = vecs[norms == int(target)]
    return SymNumber(sum(weight.evaluate(sel, D), Fraction(0)))


def theta_coefficients(L: HermitianLattice, weight: SchwartzWeight | None, prec: int,
                       bound=None) -> dict[Fraction, Fraction]:
    weight = SchwartzWeight.indicator(L.rank, L.d) if weight is None else weight
    vecs, norms, den, D = _enumeration_data(L, weight, prec, bound)
    vals = weight.evaluate(vecs, D)
    out: dict[Fraction, Fraction] = {}
    for nrm, val in zip(norms.tolist(), vals):
        if val == 0:
            continue
        t = Fraction(nrm, den * D * D)
        out[t] = out.get(t, Fraction(0)) + val
    return {t: v for t, v in out.items() if v != 0}


def theta_qexp(L: HermitianLattice, weight: SchwartzWeight | None, prec: int, bound=None):
    from .series import QExpansion
    coeffs = theta_coefficients(L, weight, prec, bound)
    return QExpansion({t: SymNumber(v) for t, v in coeffs.items()}, prec,
                      {"weight": L.rank, "disc": L.d, "normalization": "theta",
                       "incoherent": False})


# ---------------------------------------------------------------- finite Weil model

class FiniteWeight:
    """Function on p^-N Lambda / p^N Lambda with values in Q(zeta_{p^{2N}}).

    ``vals`` is an integer array of shape (p^(4 r N), p^(2N)); the value at grid point z
    (y = p^-N z) is scale * sum_j vals[z, j] zeta^j with zeta = e(1/p^{2N}).
    ``gamma`` is the formal power of the Weil index.
    """

    def __init__(self, p: int, N: int, form2: np.ndarray, vals: np.ndarray, scale=Fraction(1),
                 gamma: int = 0):
        self.p, self.N = p, N
        self.form2 = np.asarray(form2, dtype=np.int64)
        self.vals = vals
        self.scale = Fraction(scale)
        self.gamma = gamma

    @property
    def n(self) -> int:
        return self.form2.shape[0]

    @property
    def P(self) -> int:
        return self.p ** (2 * self.N)

    def grid(self) -> np.ndarray:
        P, n = self.P, self.n
        idx = np.arange(P ** n)
        return np.stack([(idx // P ** (n - 1 - k)) % P for k in range(n)], axis=1)

    def index_of(self, z: np.ndarray) -> np.ndarray:
        P, n = self.P, self.n
        z = np.asarray(z) % P
        out = np.zeros(z.shape[0], dtype=np.int64)
        for k in range(n):
            out = out * P + z[:, k]
        return out

    def qvals(self) -> np.ndarray:
        """Q(z) mod p^{2N} where q(y) = p^{-2N} Q(z)."""
        z = self.grid()
        return (np.einsum("ij,jk,ik->i", z, self.form2, z) // 2) % self.P

    def copy_with(self, vals=None, scale=None, gamma=None) -> "FiniteWeight":
        return FiniteWeight(self.p, self.N, self.form2, self.vals if vals is None else vals,
                            self.scale if scale is None else scale,
                            self.gamma if gamma is None else gamma)

    def canonical(self):
        L = 2 * self.N
        red = reduce_cyclo_array(self.vals, self.p, L)
        return red

    def equals(self, other: "FiniteWeight", sign_flip: bool = False, gamma_shift: int = 0) -> bool:
        a = self.canonical()
        b = other.canonical()
        if sign_flip:
            b = b[other.index_of(-other.grid())]
        if self.gamma != other.gamma + gamma_shift:
            return bool(not a.any() and not b.any())
        # compare a * scale_a with b * scale_b exactly
        sa, sb = self.scale, other.scale
        lhs = a.astype(object) * sa.numerator * sb.denominator
        rhs = b.astype(object) * sb.numerator * sa.denominator
        return bool(np.all(lhs == rhs))

    def value(self, z) -> Cyclo:
        i = int(self.index_of(np.array([z]))[0])
        coeffs = {j: Fraction(int(v)) * self.scale for j, v in enumerate(self.vals[i]) if v}
        return Cyclo(coeffs, self.p, 2 * self.N)

    def cosets(self):
        """Yield (y0 coordinates as Fractions, Cyclo value) over the support; cosets y0 + p^N O."""
        nz = np.nonzero(np.any(self.vals != 0, axis=1))[0]
        g = self.grid()
        pN = Fraction(self.p) ** self.N
        for i in nz:
            z = g[i]
            y0 = tuple(Fraction(int(c)) / pN for c in z)
            coeffs = {j: Fraction(int(v)) * self.scale for j, v in enumerate(self.vals[i]) if v}
            yield y0, Cyclo(coeffs, self.p, 2 * self.N)


def finite_model(p: int, N: int, form2, weight: SchwartzWeight | None = None,
                 coset_terms=None) -> FiniteWeight:
    """Finite model of a weight.  ``form2`` is the integer Gram matrix of Tr<x, y> on the
    Z-coordinates; ``coset_terms`` optionally gives (coordinate rep, level k, coef) meaning
    coef * 1_{rep + p^k O^n} directly in coordinates."""
    form2 = np.asarray(form2, dtype=np.int64)
    n = form2.shape[0]
    if round(np.linalg.det(form2.astype(float))) % p == 0:
        raise UnsupportedPlace("finite model needs a lattice self-dual at p")
    P = p ** (2 * N)
    fw = FiniteWeight(p, N, form2, np.zeros((P ** n, P), dtype=np.int64))
    terms = []
    if weight is not None:
        for rep, M, coef in weight.terms:
            coords = []
            for z in rep:
                coords += list(z.basis_coords())
            terms.append((coords, vp(M, p), coef))
    if coset_terms is not None:
        terms += [(list(map(Fraction, c)), k, Fraction(coef)) for c, k, coef in coset_terms]
    den = lcm(1, *[Fraction(c).denominator for _, _, c in terms])
    g = fw.grid()
    pN = Fraction(p) ** N
    vals = np.zeros(P ** n, dtype=np.int64)
    for coords, k, coef in terms:
        if k > N or any(vp(c, p) < -N for c in coords if c != 0):
            raise SupportOverflow("weight not supported on the finite model")
        if k < -N:
            raise SupportOverflow("weight not supported on the finite model")
        # y = p^-N z in rep + p^k O  <=>  z - p^N rep in p^{N+k}
        shift = []
        for c in coords:
            s = c * pN
            s = s.numerator * pow(s.denominator, -1, P) % P
            shift.append(s)
        mod = p ** (N + k)
        mask = np.all((g - np.array(shift)) % mod == 0, axis=1)
        vals[mask] += int(coef * den)
    fw.vals[:, 0] = vals
    fw.scale = Fraction(1, den)
    return fw


def _fourier(fw: FiniteWeight, sign: int) -> FiniteWeight:
    P, n, p, N = fw.P, fw.n, fw.p, fw.N
    g = fw.grid()
    out = np.zeros_like(fw.vals)
    support = np.nonzero(np.any(fw.vals != 0, axis=1))[0]
    k = np.arange(P)[None, :]
    for i in support:
        e = (g @ (fw.form2 @ g[i])) % P
        # psi(sign * p^-2N e) = zeta^(-sign e)
        block = fw.vals[i]
        out += block[(k + sign * e[:, None]) % P]
    # self-dual measure: vol(p^N Lambda) = p^(-N n)
    return fw.copy_with(vals=out, scale=fw.scale / Fraction(p) ** (N * n))


def weil_action_finite(p: int, N: int, op, weight) -> FiniteWeight:
    """Apply one Weil-representation operator on the finite model.

    op: 'w', 'winv', ('m', a) with a a p-adic unit of O_E given as EElem, ('n', b) with b rational.
    ``weight`` must already be a FiniteWeight (see finite_model).
    """
    fw = weight
    if fw.p != p or fw.N != N:
        raise ValueError("weight lives on a different finite model")
    if op == "w":
        out = _fourier(fw, +1)
        out.gamma = fw.gamma + 1
        return out
    if op == "winv":
        out = _fourier(fw, -1)
        out.gamma = fw.gamma - 1
        return out
    kind, arg = op
    P = fw.P
    if kind == "n":
        b = Fraction(arg)
        if b == 0:
            return fw.copy_with()
        if vp(b, p) < 0:
            raise SupportOverflow("n(b) with v(b) < 0 leaves the finite model")
        bi = b.numerator * pow(b.denominator, -1, P) % P
        e = (bi * fw.qvals()) % P
        k = np.arange(P)[None, :]
        new = fw.vals[np.arange(len(e))[:, None], (k + e[:, None]) % P]
        return fw.copy_with(vals=new)
    if kind == "m":
        a = arg
        if vp(a.norm(), p) != 0:
            raise SupportOverflow("only unit m(a) acts on the finite model")
        if fw.n % 2:
            raise ValueError("form dimension must be even")
        d = a.d
        # multiplication by a on (a_i, b_i) coordinates of each O_E factor
        A = []
        for basis_el in (EElem(1, 0, d), EElem.from_basis(0, 1, d)):
            A.append(list((basis_el * a).basis_coords()))
        A = np.array([[x.numerator * pow(x.denominator, -1, P) % P for x in row] for row in A],
                     dtype=np.int64)
        g = fw.grid()
        r = fw.n // 2
        img = np.zeros_like(g)
        for i in range(r):
            blk = g[:, 2 * i:2 * i + 2]
            img[:, 2 * i:2 * i + 2] = (blk @ A) % P
        # (omega(m(a)) phi)(y) = chi(a) |a|^(r/2) phi(y a) with chi(a) = |a| = 1 for units
        return fw.copy_with(vals=fw.vals[fw.index_of(img)])
    raise ValueError(f"unknown operator {op!r}")


def trace_form2_int(L: HermitianLattice) -> np.ndarray:
    S = L.trace_form()
    return np.array([[int(2 * x) for x in row] for row in S], dtype=np.int64)
