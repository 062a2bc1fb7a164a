"""One test per acceptance criterion; each prints a PASS/FAIL line with its runtime."""
import math
import time
from fractions import Fraction as F

import numpy as np

from quartic_k3 import family, lattice, maps, periods, quartic, regulator
from quartic_k3.numkit import SingularWeight, integrate_1d
from quartic_k3.poly import Polynomial, PowerProduct, hypergeometric_operator, op_substitute, picard_fuchs_operator

T_SWEEP = (0.25, 0.5, 1.0, 2.0)


def target(t):
    return 1 / (2 * math.sqrt(t) * (t + 1))


def run_criterion(report, n, limit, body):
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    passed = bool(ok) and elapsed < limit
    report(n, passed, detail, elapsed, limit)
    assert passed, detail


def test_criterion_01_factorization(report_criterion):
    def body():
        z, t = Polynomial.var("z"), Polynomial.var("t")
        f = (2 * z + t) * (2 * z * z - 2 * z - t)
        ok = f == z ** 4 - (z * z - 2 * z - t) ** 2 and f == family.f_polynomial()
        return ok, "f_t = (2z+t)(2z^2-2z-t) = z^4-(z^2-2z-t)^2 exactly"

    run_criterion(report_criterion, 1, 1.0, body)


def test_criterion_02_operator_substitution(report_criterion):
    def body():
        hg = op_substitute(hypergeometric_operator(F(1, 2), F(1, 2), 1, "lam"), "t", -2)
        t = Polynomial.var("t")
        D = picard_fuchs_operator()
        expected = [F(-1, 4) + 0 * t, -F(1, 2) * (1 + 4 * t), -F(1, 2) * t * (1 + 2 * t)]
        ok = hg == D and list(D.coefficients) == expected
        return ok, "HG(1/2,1/2,1) at lambda=-2t equals D_t exactly"

    run_criterion(report_criterion, 2, 1.0, body)


def test_criterion_03_potential_identity(report_criterion):
    def body():
        x, t = Polynomial.var("x"), Polynomial.var("t")
        D = picard_fuchs_operator()
        lhs = D(PowerProduct.term(1, [(x, F(-1, 2)), (x - 1, F(-1, 2)), (x + 2 * t, F(-1, 2))]))
        rhs = PowerProduct.term(F(1, 2), [(x, F(1, 2)), (x - 1, F(1, 2)), (x + 2 * t, F(-3, 2))]).derivative("x")
        return lhs == rhs, "D_t(x^-1/2 (x-1)^-1/2 (x+2t)^-1/2) = d/dx(potential) exactly"

    run_criterion(report_criterion, 3, 1.0, body)


def test_criterion_04_bitangents(report_criterion):
    def body():
        lines = quartic.find_bitangents(family.quartic_form(F(1)))
        worst = max(c.residual for c in lines)
        distinct = all(a.line.distance(b.line) > quartic.DEDUP_TOL
                       for i, a in enumerate(lines) for b in lines[i + 1:])
        l0, l1 = quartic.ProjectiveLine((0, -1, 1)), quartic.ProjectiveLine((0, 1, 1))
        has = all(any(c.line.distance(l) <= quartic.DEDUP_TOL for c in lines) for l in (l0, l1))
        cert = quartic.is_bitangent(family.quartic_form(F(-1)), l0)
        quad = np.array([complex(c) for c in cert.quadratic]) / complex(cert.quadratic[2])
        infl = cert.accepted and cert.is_inflection and np.allclose(quad, [1, -2, 1], atol=1e-8)
        ok = len(lines) == 28 and all(c.accepted for c in lines) and distinct and worst <= 1e-8 and has and infl
        return ok, f"{len(lines)} certified lines, max residual {worst:.1e}, l0/l1 present, inflection at t=-1"

    run_criterion(report_criterion, 4, 60.0, body)


def test_criterion_05_map_residuals(report_criterion):
    def body():
        worst = 0.0
        for t in (1, 2):
            res = maps.map_residuals(family.make_member(t), 100, seed=0)
            worst = max(worst, res["psi"], res["phi"])
        m = family.make_member(1)
        eq = maps.verify_equivariance(m, 20, seed=0)
        tp = maps.verify_tau_phi(m, 100, seed=0)
        ok = worst <= 1e-10 and eq <= 1e-12 and tp <= 1e-10
        return ok, f"curve residual {worst:.1e}, mu4 {eq:.1e}, tau/phi {tp:.1e}"

    run_criterion(report_criterion, 5, 10.0, body)


def test_criterion_06_pullbacks(report_criterion):
    def body():
        sym = maps.psi_pullback_symbolic() and maps.form_relation_symbolic()
        worst = 0.0
        for t in (1, 2):
            m = family.make_member(t)
            worst = max(worst, maps.verify_pullback_psi(m, 50, seed=0), maps.verify_form_relation(m, 50, seed=0))
        return sym and worst <= 1e-6, f"symbolic reductions vanish, numeric residual {worst:.1e}"

    run_criterion(report_criterion, 6, 10.0, body)


def test_criterion_07_period_annihilation(report_criterion):
    def body():
        worst = 0.0
        for t in (0.25, 1.0):
            rep = periods.pf_annihilation_report(t)
            worst = max(worst, rep.residual_P1, rep.residual_P2)
        agm = abs(periods.period_values(-2.0).P1 - periods.p1_agm(-2.0))
        return worst <= 1e-6 and agm <= 1e-8, f"relative residual {worst:.1e}, AGM gap at lambda=-2 {agm:.1e}"

    run_criterion(report_criterion, 7, 30.0, body)


def test_criterion_08_regulator_cross_method(report_criterion):
    def body():
        errs = []
        for t in T_SWEEP:
            gt = regulator.g_triangles(t).value
            errs.append(abs(regulator.g_direct(t).value - gt) / gt)
        return max(errs) <= 1e-3, f"max relative gap {max(errs):.1e} over t in {T_SWEEP}"

    run_criterion(report_criterion, 8, 120.0, body)


def test_criterion_09_inhomogeneous_equation(report_criterion):
    def body():
        ui, fd = [], []
        for t in T_SWEEP:
            ui.append(abs(regulator.dt_g_under_integral(t) - target(t)) / target(t))
            fd.append(abs(regulator.dt_g_fd(t) - target(t)) / target(t))
        exact = regulator.closed_form_rhs(1) == 0.25
        ok = max(ui) <= 1e-3 and max(fd) <= 1e-2 and exact
        return ok, f"under-integral {max(ui):.1e}, finite-difference {max(fd):.1e}, target(1) = 0.25"

    run_criterion(report_criterion, 9, 120.0, body)


def test_criterion_10_stokes_chain(report_criterion):
    def body():
        line, closed = 0.0, 0.0
        for t in T_SWEEP:
            lhs, rhs, _ = regulator.stokes_boundary_check(t)
            line = max(line, abs(lhs - rhs))
            closed = max(closed, abs(rhs - target(t)))
        u = regulator.u_substitution_check(1)
        u_ok = all(v for k, v in u.items() if k != "value")
        ok = line <= 1e-6 and closed <= 1e-10 and u_ok
        return ok, f"line integral gap {line:.1e}, closed-form gap {closed:.1e}, u endpoints exact"

    run_criterion(report_criterion, 10, 10.0, body)


def test_criterion_11_lattices(report_criterion):
    def body():
        H, K3 = lattice.builtin("H"), lattice.builtin("K3")
        ok = (lattice.signature(H), H.rank, lattice.signature(K3), K3.rank) == ((2, 12), 14, (3, 19), 22)
        return ok, f"H {lattice.signature(H)} rank {H.rank}, K3 {lattice.signature(K3)} rank {K3.rank}"

    run_criterion(report_criterion, 11, 1.0, body)


def test_criterion_12_quadrature_controls(report_criterion):
    def body():
        h = F(-1, 2)
        pi = integrate_1d(lambda x: 1 / np.sqrt(x * (1 - x)), (0, 1), SingularWeight(h, h)).value
        four = integrate_1d(lambda p: p ** -0.75, (0, 1), SingularWeight(F(-3, 4), 0)).value
        e1, e2 = abs(pi - math.pi), abs(four - 4)
        return e1 <= 1e-10 and e2 <= 1e-10, f"pi error {e1:.1e}, 4 error {e2:.1e}"

    run_criterion(report_criterion, 12, 1.0, body)


def test_criterion_13_mutation(report_criterion):
    def body():
        D = picard_fuchs_operator(constant=F(-1, 2))
        pf = []
        for t in (0.25, 1.0):
            rep = periods.pf_annihilation_report(t, operator=D)
            pf.append(min(rep.residual_P1, rep.residual_P2))
        reg = [regulator.inhomogeneous_pf_check(t, constant=F(-1, 2), direct=False) for t in T_SWEEP]
        ui = min(r.rel_err_under_integral for r in reg)
        fd = min(r.rel_err_fd for r in reg)
        ok = min(pf) > 1e-6 and ui > 1e-3 and fd > 1e-2
        return ok, f"mutated residuals: periods {min(pf):.1e}, under-integral {ui:.1e}, finite-difference {fd:.1e}"

    run_criterion(report_criterion, 13, 60.0, body)
