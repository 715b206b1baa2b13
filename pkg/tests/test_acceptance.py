"""The twelve acceptance criteria, one test each."""
import io
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

import mpmath

from ariththeta import archkernel as ak
from ariththeta.cli import main
from ariththeta.cmfield import class_group
from ariththeta.hlattice import EElem, HermitianLattice, finite_model, psi_p, trace_form2_int, weil_action_finite
from ariththeta.lwhittaker import (LocalSpace1, c_local, chi_value, error_function_phi_prime, stabilized_density,
                                   whittaker_deriv0, whittaker_raw, whittaker_value0)
from ariththeta.series import (GlobalSpaceData, QExpansion, averaged_theta, eisenstein_incoherent_value,
                               eisenstein_qexp, mixed_series_direct, mixed_series_product, proportionality,
                               verify_suite)
from ariththeta.symnum import SymNumber


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def test_criterion_01_b_constant():
    t0 = time.perf_counter()
    code, out = run_cli(["bconst", "--n", "1"])
    assert time.perf_counter() - t0 < 1.0
    assert code == 0 and out.strip() == "-1 - 2 log 2"
    assert ak.b_constant(1) == SymNumber(-1, logs={2: -2})
    for n in (2, 3):
        eng, disp = ak.b_constant(n), ak.b_paper_closed_form(n)
        flag = "agree" if eng == disp else "DISCREPANCY"
        print(f"b({n}): engine {eng} | displayed closed form {disp} | {flag}")
        # the engine value is confirmed by direct quadrature of the defining integral
        assert abs(float(eng) - ak.b_numeric(n)) < 1e-8


def test_criterion_02_siegel_weil_cross_ratio():
    t0 = time.perf_counter()
    for d in (-3, -4, -7, -8, -20, -23):
        th = averaged_theta(d, Fraction(1), 50)
        E = eisenstein_qexp(GlobalSpaceData(d, 0, HermitianLattice.diagonal(d, [1])), 50)
        ts = [Fraction(t) for t in range(1, 51)]
        assert any(E[t].rat for t in ts)
        for t in ts:
            for s in ts:
                assert th.get(t, 0) * E[s].rat == th.get(s, 0) * E[t].rat, (d, t, s)
    assert time.perf_counter() - t0 < 30


def test_criterion_03_mixed_decomposition():
    t0 = time.perf_counter()
    for d in (-3, -4, -7, -8, -20):
        D = GlobalSpaceData(d, 1)
        direct = mixed_series_direct(D, 30)
        prod = mixed_series_product(D, None, 30)
        c = proportionality(direct, prod)
        assert c is not None, d
        if class_group(d).h == 1:
            assert c == 1 and direct.same_coefficients(prod)
    assert time.perf_counter() - t0 < 60


def test_criterion_04_incoherent_vanishing():
    D = GlobalSpaceData(-4, 0, HermitianLattice.diagonal(-4, [1]), incoherent=True, flip_place=3)
    inc = eisenstein_incoherent_value(D, 30)
    assert all(inc[t].is_zero() for t in range(1, 31))
    assert inc[0] == 1
    coh = eisenstein_qexp(GlobalSpaceData(-4, 0, HermitianLattice.diagonal(-4, [1])), 30)
    assert sum(1 for t in range(1, 31) if not coh[t].is_zero()) >= 10


def test_criterion_05_derivative_pattern():
    for p in (3, 7):
        S = LocalSpace1(p, -4)
        ders = [whittaker_deriv0(S, p ** v) for v in (1, 3, 5)]
        assert all(set(x.logs) == {p} and x.rat == 0 for x in ders)
        c = [x.logs[p] for x in ders]
        assert c[1] == 2 * c[0] and c[2] == 3 * c[0]
        assert all(whittaker_value0(S, p ** v) == 0 for v in (1, 3, 5))
    # ramified p = 3, d = -3: the space off the norm class, pattern 2(v + 1)
    S = LocalSpace1(3, -3, 2)
    c = [whittaker_deriv0(S, 3 ** v).logs[3] for v in range(5)]
    assert all(c[v] == c[0] * (v + 1) for v in range(5))


def test_criterion_06_phi_prime_unramified():
    for p in (3, 7, 11):
        S = LocalSpace1(p, -4)
        for v in (-3, -1, 1, 3, 5):
            for unit in (1, 2, -1):
                if unit % p == 0:
                    continue
                t1 = Fraction(unit) * Fraction(p) ** v
                # x2 inside / outside the complement lattice
                for phi2, inside in ((1, True), (0, False)):
                    val = error_function_phi_prime(S, t1, phi2, inside)
                    assert val.is_zero(), (p, v, unit, phi2)


def test_criterion_07_c_versus_phi_prime():
    for d, p in ((-3, 3), (-7, 7)):
        D = GlobalSpaceData(d, 0, HermitianLattice.diagonal(d, [1]), incoherent=True)
        S = LocalSpace1(p, d, D.local_u(p))
        vals = [error_function_phi_prime(S, Fraction(p) ** v) for v in range(6)]
        # phi' is constant near x1 = 0, so it extends; phi'(0) is that constant
        assert all(v == vals[0] for v in vals)
        assert c_local(S) - vals[0].scale(2) == SymNumber()
    for d, p in ((-4, 5), (-4, 13), (-3, 7), (-7, 2)):
        assert c_local(LocalSpace1(p, d)).is_zero()


def test_criterion_08_kernels():
    t0 = time.perf_counter()
    with mpmath.workdps(40):
        for u in ("0.1", "0.5", "1", "2", "10"):
            u = mpmath.mpf(u)
            assert abs(ak.Q_s(1 + u, 0, 1, 40) - ak.P_s(u, 0, 1, 40)) < mpmath.mpf(10) ** -10
    grid = [(n, s, t) for n in (1, 2, 3) for s in ("0.5", "1.5") for t in ("1.25", "3")]
    assert len(grid) == 12
    for n, s, t in grid:
        assert abs(ak.q_ode_residual(mpmath.mpf(t), mpmath.mpf(s), n)) < 1e-8
    rep = verify_suite("kernels")
    assert rep["status"] == "pass", rep
    assert time.perf_counter() - t0 < 10


def _unit(d, p, rng):
    while True:
        z = EElem.from_basis(rng.randint(-4, 4), rng.randint(-4, 4), d)
        if not z.is_zero() and z.norm() % p != 0:
            return z


def test_criterion_09_whittaker_laws():
    rng = random.Random(20240601)
    for p, d in ((3, -4), (5, -4), (3, -3)):
        S = LocalSpace1(p, d)
        for _ in range(20):
            t = Fraction(rng.choice([1, 2, -1, 5])) * Fraction(p) ** rng.randint(0, 3)
            e = rng.randint(-1, 1)
            a = _unit(d, p, rng) * Fraction(p) ** e
            b = Fraction(rng.randint(-p * p, p * p), p * p)
            lhs = whittaker_raw(S, t, [("m", a)])
            rhs = whittaker_raw(S, t * a.norm()).times(chi_value(S, a) * Fraction(p) ** (-e), -2 * e)
            assert lhs.equals(rhs)
            lhs = whittaker_raw(S, t, [("n", b), ("m", a)])
            assert lhs.equals(rhs.times(psi_p(b * t, p)))
    # K-invariance: g k acting versus omega(k) phi computed on the finite model
    for p, d in ((3, -4), (5, -4)):
        S0 = LocalSpace1(p, d, 1, (((1, 0), 1, 1), ((0, 1), 1, 2)))
        form2 = trace_form2_int(HermitianLattice.diagonal(d, [1]))
        fw = finite_model(p, 1, form2, coset_terms=[((1, 0), 1, 1), ((0, 1), 1, 2)])
        for _ in range(5):
            eps = _unit(d, p, rng)
            t = Fraction(rng.choice([1, 2])) * p ** rng.randint(0, 2)
            b = Fraction(rng.randint(0, p - 1), p)
            img = weil_action_finite(p, 1, ("m", eps), fw)
            S1 = S0.with_terms([(y0, 1, c) for y0, c in img.cosets()])
            lhs = whittaker_raw(S0, t, [("n", b), ("m", eps)])
            rhs = whittaker_raw(S1, t, [("n", b)])
            assert lhs.equals(rhs)
            img = weil_action_finite(p, 1, "w", fw)
            S2 = S0.with_terms([(y0, 1, c) for y0, c in img.cosets()])
            lhs = whittaker_raw(S0, t, [("n", b), "w"])
            rhs = whittaker_raw(S2, t, [("n", b)])
            assert lhs.num == rhs.num and lhs.den == rhs.den and lhs.gamma_power == rhs.gamma_power + 1
    # phi(0) = 0 forces W_t = W_0 once v(t) is large
    for p, d in ((3, -4), (3, -3), (7, -4)):
        S = LocalSpace1(p, d, 1, (((0, 0), 0, 1), ((0, 0), 1, -1)))
        W0 = whittaker_raw(S, 0)
        for v in (4, 6):
            assert whittaker_raw(S, Fraction(p) ** v).equals(W0)


def test_criterion_10_weil_double_fourier():
    for p in (3, 5):
        form2 = trace_form2_int(HermitianLattice.diagonal(-4, [1]))
        for a in range(p):
            for b in range(p):
                fw = finite_model(p, 1, form2, coset_terms=[((Fraction(a), Fraction(b)), 1, 1)])
                ww = weil_action_finite(p, 1, "w", weil_action_finite(p, 1, "w", fw))
                assert ww.equals(fw, sign_flip=True, gamma_shift=2)
                assert ww.gamma == 2


DENSITY_CASES = (
    [(3, -4, t) for t in (1, 2, 5, 9, 18, 81)]
    + [(5, -4, t) for t in (1, 2, 5, 10, 25, 50)]
    + [(2, -4, t) for t in (1, 2, 4, 5, 8, 10)]
    + [(3, -3, t) for t in (1, 3, 4, 9, 12, 27)]
    + [(7, -7, t) for t in (1, 2, 7, 14, 49, 3)]
)


def test_criterion_11_density_oracle():
    assert len(DENSITY_CASES) == 30
    ratios = set()
    for p, d, t in DENSITY_CASES:
        S = LocalSpace1(p, d)
        dens = stabilized_density(S, t, max_N=14)
        val = whittaker_value0(S, t).rat
        if dens == 0:
            assert val == 0
        else:
            ratios.add(val / dens)
    assert ratios == {1}


def test_criterion_12_cli_round_trip(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"theta{k}.json"
        code, _ = run_cli(["theta", "--d", "-4", "--gram", "[[1, 0], [0, 1]]", "--prec", "12", "-o", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    q = QExpansion.from_json(outs[0].decode())
    assert QExpansion.from_json(q.dumps()) == q
    assert q.dumps() + "\n" == outs[0].decode()
    code, out1 = run_cli(["eisenstein", "--d", "-7", "--prec", "20", "--derivative"])
    code2, out2 = run_cli(["eisenstein", "--d", "-7", "--prec", "20", "--derivative"])
    assert code == code2 == 0 and out1 == out2
    e = QExpansion.from_json(out1)
    assert QExpansion.from_json(e.dumps()) == e
    assert json.loads(out1)["prec"] == 20
