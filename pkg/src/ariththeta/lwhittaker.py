"""Local Whittaker functions of rank-1 hermitian spaces over Q_p.

The local space is O_E (x) Z_p with coordinates y = y1 + y2 omega and
q(y) = u Nm(y) = u (y1^2 + d y1 y2 + k y2^2), k = (d^2 - d)/4.  Measures are
counting measures with vol(O_E) = 1 and vol(Z_p) = 1.  Whittaker functions are
exact rational functions of X = p^-s whose coefficients lie in a cyclotomic field
(they are rational unless g involves n(b) with non-integral b or a K-part).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cmfield import eta_local, hilbert_symbol, kronecker, splitting_type, vp, _legendre
from .hlattice import (Cyclo, EElem, UnsupportedPlace, as_cyclo,
                       finite_model, psi_p, split_embeddings, weil_action_finite)
from .symnum import SymNumber

INF = float("inf")


class NonconvergentTail(ArithmeticError):
    pass


class ZeroFirstComponent(ValueError):
    pass


class UnsupportedTwist(ValueError):
    pass


# ---------------------------------------------------------------- local space

@dataclass(frozen=True)
class LocalSpace1:
    """(E_p, u Nm) with Schwartz function sum coef * 1_{y0 + p^k O}.

    ``terms`` holds ((a, b), k, coef): the coset (a + b omega) + p^k O_E.
    """
    p: int
    d: int
    u: Fraction = Fraction(1)
    terms: tuple = (((Fraction(0), Fraction(0)), 0, Fraction(1)),)

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        clean = []
        for (a, b), k, c in self.terms:
            clean.append(((Fraction(a), Fraction(b)), int(k), c if isinstance(c, Cyclo) else Fraction(c)))
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def kind(self) -> str:
        return splitting_type(self.d, self.p).kind

    @property
    def eta_p(self) -> int:
        return kronecker(self.d, self.p)

    @property
    def knorm(self) -> int:
        return (self.d * self.d - self.d) // 4

    def with_terms(self, terms) -> "LocalSpace1":
        return LocalSpace1(self.p, self.d, self.u, tuple(terms))

    def standard(self) -> "LocalSpace1":
        return self.with_terms((((0, 0), 0, 1),))

    def Q(self, y) -> Fraction:
        y1, y2 = y
        return y1 * y1 + self.d * y1 * y2 + self.knorm * y2 * y2

    def q(self, y) -> Fraction:
        return self.u * self.Q(y)

    def form2(self, P: int) -> np.ndarray:
        """Integer matrix of the trace pairing u Tr(x conj y), reduced mod P."""
        ui = self.u.numerator * pow(self.u.denominator, -1, P) % P
        return np.array([[2 * ui, self.d * ui], [self.d * ui, 2 * self.knorm * ui]], dtype=np.int64)

    def hasse(self, t) -> int:
        """+1 if t is represented by u Nm over Q_p, -1 otherwise (t != 0)."""
        return eta_local(self.d, Fraction(t) / self.u, self.p)


def nonsquare_unit(p: int) -> int:
    return next(a for a in range(2, p) if _legendre(a, p) == -1)


# ---------------------------------------------------------------- counting

def _count(S: LocalSpace1, y0, N: int, t: Fraction, j: int):
    """vol{y in y0 + p^N O : v(q(y) - t) >= j} and a flag saying the value is stable in j."""
    p = S.p
    vu = vp(S.u, p)
    d, k = S.d, S.knorm
    total = Fraction(0)
    stable = True
    stack = [(y0[0], y0[1], N)]
    while stack:
        y1, y2, n = stack.pop()
        vol = Fraction(1, p ** (2 * n)) if n >= 0 else Fraction(p ** (-2 * n))
        f0 = S.u * (y1 * y1 + d * y1 * y2 + k * y2 * y2) - t
        delta0 = vp(f0, p)
        g1 = 2 * y1 + d * y2
        g2 = d * y1 + 2 * k * y2
        lam = min(vp(g1, p), vp(g2, p))
        eL = vu + n + lam
        eQ = vu + 2 * n
        e = min(eL, eQ)
        if delta0 < e:
            if delta0 >= j:
                total += vol
                stable = False
            continue
        if e >= j:
            total += vol
            stable = False
            continue
        if eL < eQ:
            total += vol / Fraction(p) ** (j - eL)
            continue
        step = Fraction(p) ** n
        for a in range(p):
            for b in range(p):
                stack.append((y1 + a * step, y2 + b * step, n + 1))
    return total, stable


def _contains_zero(y0, k: int, p: int) -> bool:
    return all(vp(c, p) >= k for c in y0)


class _DTable:
    """D_j = p^j * integral of phi(y) 1[v(q(y) - t) >= j] dy for a coset combination."""

    def __init__(self, S: LocalSpace1, t: Fraction, cosets):
        self.S, self.t = S, Fraction(t)
        self.cosets = list(cosets)      # (y0, k, Cyclo coef)
        self.p = S.p
        self._Z = {}
        self._P = {}

    def _prim(self, i: int):
        if i not in self._P:
            tot, st = Fraction(0), True
            p = self.p
            for a in range(p):
                for b in range(p):
                    if a == 0 and b == 0:
                        continue
                    v, s = _count(self.S, (Fraction(a), Fraction(b)), 1, Fraction(0), i)
                    tot += v
                    st = st and s
            self._P[i] = (tot * Fraction(p) ** i, st)
        return self._P[i]

    def Z(self, i: int) -> Fraction:
        """D_i(1_O) at t = 0."""
        if i in self._Z:
            return self._Z[i]
        p = self.p
        vu = vp(self.S.u, p)
        if i <= vu:
            val = Fraction(p) ** i
        else:
            lo = i
            while lo > vu:
                lo -= 2
            val = Fraction(p) ** lo
            for m in range(lo + 2, i + 1, 2):
                val = val + self._prim(m)[0]
        self._Z[i] = val
        return val

    def D(self, j: int):
        """(D_j as Cyclo, stable flag)."""
        p = self.p
        tot = Cyclo.rational(0)
        stable = True
        for y0, k, c in self.cosets:
            if self.t == 0 and _contains_zero(y0, k, p):
                tot = tot + c * self.Z(j - 2 * k)
                stable = stable and self._prim_stable_from(j - 2 * k)
                continue
            v, s = _count(self.S, y0, k, self.t, j)
            tot = tot + c * (v * Fraction(p) ** j)
            stable = stable and s
        return tot, stable

    def _prim_stable_from(self, i: int) -> bool:
        vu = vp(self.S.u, self.p)
        if i <= vu + 1:
            return False
        return self._prim(i)[1]


# ---------------------------------------------------------------- rational functions in X

def _padd(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for e, v in b.items():
        out[e] = out.get(e, Cyclo.rational(0)) + (v * sign if sign != 1 else v)
    return {e: as_cyclo(v) for e, v in out.items() if not as_cyclo(v).is_zero()}


def _pmul(a: dict, b: dict) -> dict:
    out = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, Cyclo.rational(0)) + as_cyclo(v1) * as_cyclo(v2)
    return {e: v for e, v in out.items() if not v.is_zero()}


def _pscale(a: dict, c) -> dict:
    return {e: as_cyclo(v) * c for e, v in a.items() if not (as_cyclo(v) * c).is_zero()}


def _pshift(a: dict, s: int) -> dict:
    return {e + s: v for e, v in a.items()}


def _to_list(a: dict):
    if not a:
        return 0, []
    lo, hi = min(a), max(a)
    return lo, [a.get(e, Cyclo.rational(0)) for e in range(lo, hi + 1)]


def _div_x_minus_1(coeffs: list) -> list:
    """Exact division of sum c_i X^i by (X - 1); the remainder must vanish."""
    n = len(coeffs) - 1
    out = [Cyclo.rational(0)] * n
    acc = Cyclo.rational(0)
    for i in range(n, 0, -1):
        acc = acc + coeffs[i]
        out[i - 1] = acc
    if not (acc + coeffs[0]).is_zero():
        raise ArithmeticError("nonzero remainder")
    return out


def _eval(coeffs: list, X=1):
    tot = Cyclo.rational(0)
    for i, c in enumerate(coeffs):
        tot = tot + c * (Fraction(X) ** i)
    return tot


def _deriv1(coeffs: list):
    tot = Cyclo.rational(0)
    for i, c in enumerate(coeffs):
        if i:
            tot = tot + c * i
    return tot


@dataclass(frozen=True)
class WhittakerPoly:
    """gamma^gamma_power * X^0 * num(X) / den(X) with Laurent polynomials num, den."""
    p: int
    num: dict
    den: dict = field(default_factory=lambda: {0: Cyclo.rational(1)})
    gamma_power: int = 0
    normalization: str = "raw"

    @property
    def coeffs(self) -> list:
        """Coefficient list (from the lowest exponent) when the function is a Laurent polynomial."""
        lo, lst = _to_list(self.num)
        if set(self.den) != {0}:
            return lst
        c0 = self.den[0]
        return [v * (Fraction(1) / c0.to_rational()) for v in lst]

    @property
    def offset(self) -> int:
        return min(self.num) if self.num else 0

    @property
    def tail(self):
        """None for a Laurent polynomial; otherwise the denominator coefficients."""
        if set(self.den) == {0}:
            return None
        return {e: v for e, v in sorted(self.den.items())}

    def _reduced(self):
        nlo, n = _to_list(self.num)
        dlo, d = _to_list(self.den)
        shift = nlo - dlo
        if not n:
            return 0, [], [Cyclo.rational(1)]
        while _eval(d).is_zero():
            if not _eval(n).is_zero():
                raise NonconvergentTail("pole at s = 0")
            n = _div_x_minus_1(n)
            d = _div_x_minus_1(d)
        return shift, n, d

    def value_at_s0(self) -> Cyclo:
        s, n, d = self._reduced()
        if not n:
            return Cyclo.rational(0)
        dv = _eval(d)
        return _eval(n) * (Fraction(1) / dv.to_rational()) if dv.is_rational() else _cdiv(_eval(n), dv)

    def xderiv_at_1(self) -> Cyclo:
        s, n, d = self._reduced()
        if not n:
            return Cyclo.rational(0)
        N1, D1, dN, dD = _eval(n), _eval(d), _deriv1(n), _deriv1(d)
        if not D1.is_rational():
            raise ArithmeticError("irrational denominator")
        inv = Fraction(1) / D1.to_rational()
        f1 = N1 * inv
        fp = (dN * D1 - N1 * dD) * (inv * inv)
        return fp + f1 * s

    def deriv_at_s0(self) -> "LogMultiple":
        """d/ds at s = 0: (-log p) * f'(1)."""
        return LogMultiple(self.p, -self.xderiv_at_1())

    def gamma_free(self) -> bool:
        return self.gamma_power == 0

    def times(self, c, xpow: int = 0) -> "WhittakerPoly":
        return WhittakerPoly(self.p, _pshift(_pscale(self.num, c), xpow), self.den, self.gamma_power,
                             self.normalization)

    def equals(self, other: "WhittakerPoly") -> bool:
        if self.gamma_power != other.gamma_power and (self.num or other.num):
            return False
        lhs = _pmul(self.num, other.den)
        rhs = _pmul(other.num, self.den)
        return not _padd(lhs, rhs, -1)

    def evaluate(self, X) -> Cyclo:
        X = Fraction(X)
        nv = sum((v * X ** e for e, v in self.num.items()), Cyclo.rational(0))
        dv = sum((v * X ** e for e, v in self.den.items()), Cyclo.rational(0))
        return _cdiv(nv, dv)

    def __repr__(self):
        return f"WhittakerPoly(p={self.p}, num={self.num}, den={self.den}, gamma^{self.gamma_power}, {self.normalization})"


def _cdiv(a: Cyclo, b: Cyclo) -> Cyclo:
    if b.is_rational():
        return a * (Fraction(1) / b.to_rational())
    raise ArithmeticError("division by an irrational cyclotomic number")


@dataclass(frozen=True)
class LogMultiple:
    """c * log p with c cyclotomic (rational in all normalized outputs)."""
    p: int
    coef: Cyclo

    def to_sym(self) -> SymNumber:
        if not self.coef.is_rational():
            raise ValueError("coefficient is not rational")
        return SymNumber(logs={self.p: self.coef.to_rational()})

    def rational(self) -> Fraction:
        return self.coef.to_rational()


# ---------------------------------------------------------------- group elements

def _mat(a, b, c, d_, dE):
    conv = lambda z: z if isinstance(z, EElem) else EElem(Fraction(z), 0, dE)
    return (conv(a), conv(b), conv(c), conv(d_))


def m_elem(a: EElem):
    return _mat(a, 0, 0, a.conj().inverse(), a.d)


def n_elem(b, dE: int):
    return _mat(1, Fraction(b), 0, 1, dE)


def w_elem(dE: int):
    return _mat(0, 1, -1, 0, dE)


def matmul(g, h):
    a, b, c, d = g
    e, f, x, y = h
    return (a * e + b * x, a * f + b * y, c * e + d * x, c * f + d * y)


def word_to_matrix(word, dE: int):
    """word: list of ('m', a) | ('n', b) | 'w' | 'winv', multiplied left to right."""
    g = _mat(1, 0, 0, 1, dE)
    for op in word:
        if op == "w":
            h = w_elem(dE)
        elif op == "winv":
            h = _mat(0, -1, 1, 0, dE)
        elif op[0] == "m":
            h = m_elem(op[1])
        elif op[0] == "n":
            h = n_elem(op[1], dE)
        else:
            raise ValueError(op)
        g = matmul(g, h)
    return g


def iwasawa(g, p: int):
    """g = n(beta) m(alpha) k with k given as a word in K (applied right to left to phi)."""
    A, B, C, D = g
    dE = A.d
    kword = []
    if not C.is_zero():
        if D.is_zero() or vp((C / D).x, p) < 0:
            # g = (g w^-1) w
            A, B, C, D = matmul(g, _mat(0, -1, 1, 0, dE))
            kword = ["w"]
        y = (C / D)
        if not y.is_rational():
            raise ValueError("element is not in U(1,1)")
        y = y.x
        if y != 0:
            kword = ["winv", ("n", -y), "w"] + kword
    beta = B / D
    alpha = D.conj().inverse()
    if not beta.is_rational():
        raise ValueError("element is not in U(1,1)")
    return beta.x, alpha, kword


# ---------------------------------------------------------------- chi and twisting

def chi_value(S: LocalSpace1, a: EElem) -> Fraction:
    p = S.p
    al = vp(a.norm(), p)
    if al % 2:
        raise UnsupportedTwist("m(a) with odd v_p(Nm a) is not supported")
    e = al // 2
    kind = S.kind
    if kind == "split":
        return Fraction(1)
    if kind == "inert":
        return Fraction((-1) ** (e % 2))
    eps = a / Fraction(p) ** e
    x = eps.x
    leg = _legendre(x.numerator * pow(x.denominator, -1, p) % p, p)
    return Fraction(hilbert_symbol(S.d, p, p) ** (e % 2) * leg)


def _twist_cosets(S: LocalSpace1, cosets, a: EElem):
    """omega(m(a)) on coset data: chi(a) |a|^(1/2) phi(y a)."""
    p = S.p
    al = vp(a.norm(), p)
    if al % 2:
        raise UnsupportedTwist("m(a) with odd v_p(Nm a) is not supported")
    e = al // 2
    if S.kind == "split":
        v1, v2 = split_embeddings(a, p)
        if v1 != v2:
            raise UnsupportedTwist("split m(a) must be p^e times a unit")
    chi = chi_value(S, a)
    factor = chi * Fraction(1, p ** e) if e >= 0 else chi * Fraction(p ** (-e))
    ainv = a.inverse()
    out = []
    for (y1, y2), k, c in cosets:
        y = EElem.from_basis(y1, y2, S.d) * ainv
        out.append((y.basis_coords(), k - e, as_cyclo(c) * factor))
    return out


def _apply_kword(S: LocalSpace1, cosets, kword):
    if not kword:
        return cosets, 0
    if S.kind == "ramified" or vp(S.u, S.p) != 0:
        raise UnsupportedPlace("K-action is modeled only on self-dual unramified spaces")
    p = S.p
    N = 1
    for (y1, y2), k, _ in cosets:
        N = max(N, k, -min(vp(y1, p), vp(y2, p), 0), -k)
    for op in kword:
        if op not in ("w", "winv") and op[0] == "n":
            N = max(N, -vp(Fraction(op[1]), p) if op[1] != 0 else N)
    P = p ** (2 * N)
    rational_terms = []
    fw = None
    cyclo_terms = []
    for (y1, y2), k, c in cosets:
        c = as_cyclo(c)
        if c.is_rational():
            rational_terms.append(((y1, y2), k, c.to_rational()))
        else:
            cyclo_terms.append(((y1, y2), k, c))
    if cyclo_terms:
        raise UnsupportedPlace("K-action on cyclotomic-valued weights is not modeled")
    fw = finite_model(p, N, S.form2(P), coset_terms=rational_terms)
    for op in reversed(kword):
        fw = weil_action_finite(p, N, op, fw)
    out = [(y0, N, c) for y0, c in fw.cosets()]
    return out, fw.gamma


# ---------------------------------------------------------------- the evaluator

def _core(S: LocalSpace1, t: Fraction, cosets, alpha_val: int) -> WhittakerPoly:
    """gamma^-1 times int_beta delta(w n(beta) m(alpha))^s int phi_alpha(y) psi(beta(q(y)-t)) dy dbeta."""
    p = S.p
    j0 = -alpha_val
    tab = _DTable(S, t, cosets)
    num = {}
    Dj0, _ = tab.D(j0)
    if not Dj0.is_zero():
        num[-alpha_val] = Dj0
    prev = Dj0
    j = j0
    if t != 0:
        while True:
            j += 1
            Dj, st = tab.D(j)
            A = Dj - prev
            if not A.is_zero():
                num[alpha_val + 2 * j] = num.get(alpha_val + 2 * j, Cyclo.rational(0)) + A
            prev = Dj
            if st:
                break
            if j > j0 + 400:
                raise NonconvergentTail("densities did not stabilize")
        return WhittakerPoly(p, {e: v for e, v in num.items() if not v.is_zero()})
    # t = 0: A_j becomes 2-periodic; close with a geometric tail in X^4
    A = {}
    Dvals = {j0: Dj0}
    while True:
        j += 1
        Dj, st = tab.D(j)
        Dvals[j] = Dj
        A[j] = Dj - Dvals[j - 1]
        if st and (j - 1) in A and tab.D(j - 1)[1]:
            J = j
            break
        if j > j0 + 400:
            raise NonconvergentTail("no periodic regime")
    for jj in (J + 1, J + 2, J + 3):
        Dn, _ = tab.D(jj)
        Dvals[jj] = Dn
        A[jj] = Dn - Dvals[jj - 1]
    if not (A[J + 2] == A[J] and A[J + 3] == A[J + 1]):
        raise NonconvergentTail("shell coefficients are not 2-periodic")
    # head: j0 < j <= J - 1, tail starts at J
    for jj in range(j0 + 1, J):
        if not A[jj].is_zero():
            num[alpha_val + 2 * jj] = num.get(alpha_val + 2 * jj, Cyclo.rational(0)) + A[jj]
    head = {e: v for e, v in num.items() if not v.is_zero()}
    tailnum = {alpha_val + 2 * J: A[J], alpha_val + 2 * J + 2: A[J + 1]}
    den = {0: Cyclo.rational(1), 4: Cyclo.rational(-1)}
    tot = _padd(_pmul(head, den), {e: v for e, v in tailnum.items() if not v.is_zero()})
    return WhittakerPoly(p, tot, den)


def whittaker_raw(S: LocalSpace1, t, g=None) -> WhittakerPoly:
    """W_t(s, g, phi) with the Weil index kept as a formal power."""
    t = Fraction(t)
    p = S.p
    dE = S.d
    if g is None:
        g = _mat(1, 0, 0, 1, dE)
    elif isinstance(g, list):
        g = word_to_matrix(g, dE)
    beta, alpha, kword = iwasawa(g, p)
    cosets = list(S.terms)
    cosets, gk = _apply_kword(S, cosets, kword)
    cosets = _twist_cosets(S, cosets, alpha)
    alpha_val = vp(alpha.norm(), p)
    W = _core(S, t, cosets, alpha_val)
    phase = psi_p(beta * t, p)
    W = W.times(phase)
    return WhittakerPoly(p, W.num, W.den, 1 + gk, "raw")


def normalize(S: LocalSpace1, W: WhittakerPoly, t) -> WhittakerPoly:
    """Divide out the Weil index; at t = 0 also multiply by L(2s+1, eta)/L(2s, eta).

    The discriminant factor |D d|^(-1/2) is omitted (counting measure on O_E)."""
    t = Fraction(t)
    gp = W.gamma_power - 1
    if t != 0:
        return WhittakerPoly(W.p, W.num, W.den, gp, "normalized")
    eta = S.eta_p
    if eta == 0:
        return WhittakerPoly(W.p, W.num, W.den, gp, "normalized-t0")
    num = _pmul(W.num, {0: Cyclo.rational(1), 2: Cyclo.rational(-eta)})
    den = _pmul(W.den, {0: Cyclo.rational(1), 2: Cyclo.rational(Fraction(-eta, W.p))})
    return WhittakerPoly(W.p, num, den, gp, "normalized-t0")


def whittaker_shell_series(S: LocalSpace1, t, g=None) -> WhittakerPoly:
    return normalize(S, whittaker_raw(S, t, g), t)


def whittaker_value0(S: LocalSpace1, t, g=None):
    W = whittaker_shell_series(S, t, g)
    v = W.value_at_s0()
    if W.gamma_power == 0 and v.is_rational():
        return SymNumber(v.to_rational())
    return v


def whittaker_deriv0(S: LocalSpace1, t, g=None):
    W = whittaker_shell_series(S, t, g)
    dv = W.deriv_at_s0()
    if W.gamma_power == 0 and dv.coef.is_rational():
        return dv.to_sym()
    return dv


# ---------------------------------------------------------------- density oracle

def density_count(S: LocalSpace1, t, N: int) -> Fraction:
    """p^N vol{y : q(y) = t mod p^N} weighted by phi, by exhaustive counting mod p^N."""
    p = S.p
    t = Fraction(t)
    if N < 1:
        raise ValueError("N >= 1")
    if vp(S.u, p) < 0 or (t != 0 and vp(t, p) < 0):
        raise ValueError("oracle needs integral u and t")
    mod = p ** N
    ti = t.numerator * pow(t.denominator, -1, mod) % mod
    ui = S.u.numerator * pow(S.u.denominator, -1, mod) % mod
    total = Fraction(0)
    for (a, b), k, c in S.terms:
        c = as_cyclo(c).to_rational()
        if k < 0 or a.denominator % p == 0 or b.denominator % p == 0:
            raise ValueError("oracle needs integral cosets")
        a0 = a.numerator * pow(a.denominator, -1, mod) % mod
        b0 = b.numerator * pow(b.denominator, -1, mod) % mod
        if k >= N:
            hit = (ui * int(S.Q((Fraction(a0), Fraction(b0)))) - ti) % mod == 0
            total += c * Fraction(p ** N, p ** (2 * k)) if hit else 0
            continue
        m = p ** (N - k)
        z = np.arange(m, dtype=np.int64)
        y2 = (b0 + p ** k * z) % mod
        cnt = 0
        for y1 in ((a0 + p ** k * z) % mod).tolist():
            Q = (y1 * y1 + (S.d * y1 % mod) * y2 + (S.knorm % mod) * (y2 * y2 % mod)) % mod
            cnt += int(np.count_nonzero((ui * Q - ti) % mod == 0))
        total += c * Fraction(cnt, p ** N)
    return total


def stabilized_density(S: LocalSpace1, t, start: int | None = None, max_N: int = 12) -> Fraction:
    t = Fraction(t)
    N = (vp(t, S.p) + 2 if t != 0 else 4) if start is None else start
    prev = density_count(S, t, N)
    while N < max_N:
        N += 1
        cur = density_count(S, t, N)
        if cur == prev:
            return cur
        prev = cur
    raise ArithmeticError("density did not stabilize")


# ---------------------------------------------------------------- volumes, error functions

def local_volume(S: LocalSpace1) -> Fraction:
    """Orbital normalization: W_u(0, 1, 1_O) at the norm u of the unit vector."""
    v = whittaker_value0(S.standard(), S.u)
    return v.rat


def error_function_phi_prime(S: LocalSpace1, t1, phi2_at_x2=1, in_mult_lattice=True) -> SymNumber:
    """phi'(x) = W theta'_x - (v(q(x1)) + 1) 1_O(q(x1)) 1(x2) log p.

    S is the local component of the incoherent space; t1 = q(x1) for x1 in the nearby space.
    W theta'_x is the normalized derivative divided by the orbital volume of S.
    """
    t1 = Fraction(t1)
    if t1 == 0:
        raise ZeroFirstComponent("x1 must be nonzero")
    if S.kind == "split":
        raise ValueError("error functions are defined at nonsplit places")
    p = S.p
    der = whittaker_deriv0(S, t1)
    vol = local_volume(S)
    wt = der.scale(Fraction(phi2_at_x2) / vol)
    v = vp(t1, p)
    mult = SymNumber()
    if v >= 0 and in_mult_lattice:
        mult = SymNumber(logs={p: v + 1})
    return wt - mult


def c_local(S: LocalSpace1, phi2_at_0=1) -> SymNumber:
    """c(1, phi) = W_0^o'(0, 1, phi1) * phi2(0)."""
    return whittaker_deriv0(S, 0).scale(Fraction(phi2_at_0))


def nearby_unit(S: LocalSpace1) -> Fraction:
    """A scaling u' with u' Nm not isometric to S locally (the local flip)."""
    p = S.p
    if S.kind == "split":
        raise ValueError("no flip at split places")
    for cand in [p, nonsquare_unit(p) if p > 2 else 3, p * (nonsquare_unit(p) if p > 2 else 3), 5, 7, 2, 3]:
        cand = Fraction(cand)
        if eta_local(S.d, cand / S.u, p) == -1:
            return cand
    raise ValueError("no flip found")
