"""Command-line entry point: individual computations and the full verification suite."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import family, lattice, maps, periods, quartic, regulator
from .numkit import SingularWeight, integrate_1d
from .poly import Polynomial, PowerProduct, hypergeometric_operator, op_substitute, picard_fuchs_operator

DEFAULT_T = (0.25, 0.5, 1.0, 2.0)
F = Fraction


@dataclass
class CheckRecord:
    name: str
    status: str
    value: object
    expected: object
    abs_err: float
    tol: float
    runtime_ms: int = 0

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SuiteConfig:
    t_values: tuple = DEFAULT_T
    seed: int = 0
    threads: int = 1
    # the constant term of D_t; anything but -1/4 is a deliberate mutation
    pf_constant: Fraction = F(-1, 4)
    tolerances: dict = field(default_factory=dict)

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))


def _num(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    z = complex(x)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _exact(name: str, ok: bool) -> tuple:
    return name, bool(ok), True, 0.0 if ok else 1.0, 0.0


def _close(name: str, value, expected, tol: float, relative: bool = False) -> tuple:
    err = abs(complex(value) - complex(expected))
    if relative:
        err /= abs(complex(expected))
    return name, value, expected, err, tol


def _bound(name: str, value: float, tol: float) -> tuple:
    # residual-style checks: the value itself is the error
    return name, value, 0.0, abs(value), tol


# -- individual checks; each returns a list of (name, value, expected, abs_err, tol) --------


def check_identities(cfg: SuiteConfig) -> list:
    z, t = Polynomial.var("z"), Polynomial.var("t")
    f = family.f_polynomial()
    ok1 = f == z ** 4 - (z * z - 2 * z - t) ** 2
    hg = op_substitute(hypergeometric_operator(F(1, 2), F(1, 2), 1, "lam"), "t", -2)
    ok2 = hg == picard_fuchs_operator()
    x = Polynomial.var("x")
    D = picard_fuchs_operator()
    lhs = D(PowerProduct.term(1, [(x, F(-1, 2)), (x - 1, F(-1, 2)), (x + 2 * t, F(-1, 2))]))
    rhs = PowerProduct.term(F(1, 2), [(x, F(1, 2)), (x - 1, F(1, 2)), (x + 2 * t, F(-3, 2))]).derivative("x")
    ok3 = lhs == rhs
    tri = regulator.potential_identities()
    return [
        _exact("c01_f_factorization_identity", ok1),
        _exact("c02_hypergeometric_to_Dt_substitution", ok2),
        _exact("c03_potential_identity", ok3),
        _exact("c03_potential_identity_triangles", all(tri)),
    ]


def check_bitangents(cfg: SuiteConfig) -> list:
    q = family.quartic_form(F(1))
    lines = quartic.find_bitangents(q, strict=False)
    worst = max((c.residual for c in lines), default=float("inf"))
    l0, l1 = quartic.ProjectiveLine((0, -1, 1)), quartic.ProjectiveLine((0, 1, 1))
    has = all(any(c.line.distance(l) <= quartic.DEDUP_TOL for c in lines) for l in (l0, l1))
    cert = quartic.is_bitangent(family.quartic_form(F(-1)), l0)
    quad = [complex(c) / complex(cert.quadratic[2]) for c in cert.quadratic]
    # (z - 1)^2 = 1 - 2z + z^2 in ascending order, up to scale
    infl_err = max(abs(a - b) for a, b in zip(quad, (1, -2, 1)))
    return [
        _close("c04_bitangent_count_g1", len(lines), 28, 0.0),
        _bound("c04_bitangent_max_residual_g1", worst, 1e-8),
        _exact("c04_bitangents_contain_l0_l1", has),
        _exact("c04_inflection_flag_t_minus_1", cert.accepted and cert.is_inflection),
        _bound("c04_inflection_quadratic_t_minus_1", infl_err, 1e-8),
    ]


def check_maps(cfg: SuiteConfig) -> list:
    out = []
    for t in (1, 2):
        m = family.make_member(t)
        res = maps.map_residuals(m, 100, cfg.seed)
        out.append(_bound(f"c05_psi_residual_t{t}", res["psi"], 1e-10))
        out.append(_bound(f"c05_phi_residual_t{t}", res["phi"], 1e-10))
    m = family.make_member(1)
    out.append(_bound("c05_mu4_equivariance", maps.verify_equivariance(m, 20, cfg.seed), 1e-12))
    out.append(_bound("c05_tau_phi_compatibility", maps.verify_tau_phi(m, 50, cfg.seed), 1e-10))
    out.append(_exact("c06_pullback_psi_symbolic", maps.psi_pullback_symbolic()))
    out.append(_exact("c06_form_relation_symbolic", maps.form_relation_symbolic()))
    out.append(_bound("c06_pullback_psi_numeric", maps.verify_pullback_psi(m, 50, cfg.seed), 1e-6))
    out.append(_bound("c06_form_relation_numeric", maps.verify_form_relation(m, 50, cfg.seed), 1e-6))
    return out


def _pf_records(constant, prefix: str) -> list:
    D = picard_fuchs_operator(constant=constant)
    out = []
    for t in (0.25, 1.0):
        rep = periods.pf_annihilation_report(t, operator=D)
        out.append(_bound(f"{prefix}_P1_t{t:g}", rep.residual_P1, 1e-6))
        out.append(_bound(f"{prefix}_P2_t{t:g}", rep.residual_P2, 1e-6))
    return out


def check_periods(cfg: SuiteConfig) -> list:
    out = _pf_records(cfg.pf_constant, "c07_pf_annihilation")
    q = periods.period_values(-2.0).P1
    a = periods.p1_agm(-2.0)
    out.append(_close("c07_P1_agm_lambda_minus_2", q, a, 1e-8))
    return out


def _regulator_t(cfg: SuiteConfig, t: float) -> list:
    rep = regulator.inhomogeneous_pf_check(t, constant=cfg.pf_constant)
    return [
        _close(f"c08_cross_method_t{t:g}", rep.G_direct.value, rep.G_triangles.value, 1e-3, relative=True),
        _close(f"c09_under_integral_t{t:g}", rep.Dt_G_under_integral, rep.rhs, 1e-3, relative=True),
        _close(f"c09_finite_difference_t{t:g}", rep.Dt_G_fd, rep.rhs, 1e-2, relative=True),
    ]


def check_stokes(cfg: SuiteConfig) -> list:
    out = []
    lhs, rhs, diff = regulator.stokes_boundary_check(1.0)
    out.append(_close("c10_stokes_line_integral_t1", lhs, rhs, 1e-6))
    val, exact, _ = regulator.verify_rhs_integral(1.0)
    out.append(_close("c10_rhs_integral_closed_form_t1", val, exact, 1e-10))
    u = regulator.u_substitution_check(1)
    out.append(_exact("c10_u_substitution_exact", all(v for k, v in u.items() if k != "value")))
    eps = [sum(regulator.edge_terms(1.0, e).values()) for e in (1e-2, 1e-3, 1e-4)]
    out.append(_exact("c10_edge_terms_decrease", eps[0] > eps[1] > eps[2]))
    return out


def check_lattice(cfg: SuiteConfig) -> list:
    H, K3 = lattice.builtin("H"), lattice.builtin("K3")
    return [
        _exact("c11_signature_H", lattice.signature(H) == (2, 12) and H.rank == 14),
        _exact("c11_signature_K3", lattice.signature(K3) == (3, 19) and K3.rank == 22),
    ]


def check_quadrature(cfg: SuiteConfig) -> list:
    half = F(-1, 2)
    pi = integrate_1d(lambda x: 1 / np.sqrt(x * (1 - x)), (0, 1), SingularWeight(half, half), 1e-12).value
    four = integrate_1d(lambda p: p ** -0.75, (0, 1), SingularWeight(F(-3, 4), 0), 1e-12).value
    return [
        _close("c12_quadrature_arcsine_pi", pi, math.pi, 1e-10),
        _close("c12_quadrature_p_minus_3_4", four, 4.0, 1e-10),
    ]


def check_mutation(cfg: SuiteConfig) -> list:
    """With the constant -1/2 both the period and the regulator checks must fail."""
    mutated = F(-1, 2)
    pf = _pf_records(mutated, "m")
    pf_fails = all(err > tol for _, _, _, err, tol in pf)
    rep = regulator.inhomogeneous_pf_check(1.0, constant=mutated, direct=False)
    reg_fails = rep.rel_err_under_integral > 1e-3 and rep.rel_err_fd > 1e-2
    return [
        _exact("c13_mutation_breaks_period_annihilation", pf_fails),
        _exact("c13_mutation_breaks_inhomogeneous_equation", reg_fails),
    ]


def _check_jobs(cfg: SuiteConfig) -> list:
    jobs = [(fn.__name__, fn) for fn in (check_identities, check_bitangents, check_maps, check_periods,
                                         check_stokes, check_lattice, check_quadrature, check_mutation)]
    jobs += [(f"check_regulator_t{t:g}", lambda c, t=t: _regulator_t(c, t)) for t in cfg.t_values]
    return jobs


def _run_job(job, cfg: SuiteConfig) -> list:
    name, fn = job
    start = time.perf_counter()
    try:
        rows = fn(cfg)
    except Exception as exc:  # a failing check must not take down the suite
        ms = int(1000 * (time.perf_counter() - start))
        return [CheckRecord(name, "error", f"{type(exc).__name__}: {exc}", None, float("inf"), 0.0, ms)]
    ms = int(1000 * (time.perf_counter() - start))
    out = []
    for name, value, expected, err, tol in rows:
        status = "pass" if err <= tol else "fail"
        out.append(CheckRecord(name, status, _num(value), _num(expected), float(err), float(tol),
                               ms // max(len(rows), 1)))
    return out


def run_suite(cfg: SuiteConfig | None = None) -> list:
    """All acceptance checks as CheckRecords sorted by name."""
    cfg = cfg or SuiteConfig()
    jobs = _check_jobs(cfg)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda j: _run_job(j, cfg), jobs))
    else:
        results = [_run_job(j, cfg) for j in jobs]
    records = [r for rows in results for r in rows]
    return sorted(records, key=lambda r: r.name)


# -- output -----------------------------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_num)


def _write_csv(rows: list, path: str) -> None:
    if not rows:
        return
    fh = sys.stdout if path == "-" else open(path, "w", newline="")
    try:
        w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    finally:
        if fh is not sys.stdout:
            fh.close()


def _emit(args, payload, rows=None) -> None:
    if args.csv and rows is not None:
        _write_csv(rows, args.csv)
    if args.json or not (args.csv and rows is not None):
        text = _dump(payload)
        if getattr(args, "out", None):
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)


def _parse_t(text: str):
    return Fraction(text) if "/" in text else (int(text) if text.lstrip("-").isdigit() else float(text))


# -- subcommands --------------------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = SuiteConfig(
        t_values=tuple(args.t_values) if args.t_values else DEFAULT_T,
        seed=args.seed,
        threads=args.threads,
        pf_constant=Fraction(args.pf_constant),
    )
    records = run_suite(cfg)
    rows = [r.to_json() for r in records]
    if args.json or args.csv:
        _emit(args, rows, rows)
    else:
        for r in records:
            print(f"{r.status.upper():5s} {r.name:48s} err={r.abs_err:.3g} tol={r.tol:.3g}")
    return 0 if all(r.status == "pass" for r in records) else 1


def cmd_bitangents(args) -> int:
    q = quartic.fermat_quartic() if args.fermat else family.quartic_form(_parse_t(args.t))
    if not q.exact:
        raise SystemExit("bitangents needs a rational t (e.g. 1 or 1/2)")
    lines = quartic.find_bitangents(q, strict=False, tol=args.tol or quartic.CERT_TOL)
    rows = [c.to_json() for c in lines]
    _emit(args, {"count": len(lines), "bitangents": rows},
          [{"line": r["line"], "residual": r["residual"], "is_inflection": r["is_inflection"]} for r in rows])
    return 0 if len(lines) == 28 else 1


def cmd_family(args) -> int:
    m = family.make_member(_parse_t(args.t))
    fns = family.cycle_functions(m)
    payload = {
        "member": m.to_json(),
        "conics": [c.to_json() for i in (0, 1) for c in family.split_line(m, i)],
        "cycle_functions": [f.to_json() for f in fns],
        "total_divisor": family.total_divisor(fns),
        "smooth": quartic.is_smooth(m.quartic()) if m.quartic().exact else None,
    }
    _emit(args, payload)
    return 0


def cmd_maps(args) -> int:
    m = family.make_member(_parse_t(args.t))
    res = maps.map_residuals(m, args.samples, args.seed)
    payload = {
        "t": _num(m.t),
        "psi_residual": res["psi"],
        "phi_residual": res["phi"],
        "equivariance": maps.verify_equivariance(m, 20, args.seed),
        "tau_phi": maps.verify_tau_phi(m, 50, args.seed),
        "pullback_psi": maps.verify_pullback_psi(m, 50, args.seed),
        "form_relation": maps.verify_form_relation(m, 50, args.seed),
        "fibers": maps.verify_phi_fibers(m, 20, args.seed),
    }
    _emit(args, payload, [{k: v for k, v in payload.items() if k != "fibers"}])
    return 0


def cmd_periods(args) -> int:
    lam = complex(args.lam) if args.lam is not None else -2 * float(args.t)
    tol = args.tol or 1e-12
    pv = periods.period_values(lam, tol)
    payload = {"periods": pv.to_json()}
    if lam.imag == 0 and lam.real < 0:
        payload["P1_agm"] = _num(periods.p1_agm(lam))
        payload["annihilation"] = periods.pf_annihilation_report(-lam.real / 2).to_json()
    if abs(lam) < 1:
        payload["hypergeometric_2F1"] = _num(periods.hypergeometric_series(F(1, 2), F(1, 2), 1, lam))
    _emit(args, payload, [payload["periods"]])
    return 0


def cmd_regulator(args) -> int:
    t = float(args.t)
    tol = args.tol or 1e-9
    payload = {"t": t, "rhs": regulator.closed_form_rhs(t)}
    if args.method in ("direct", "both"):
        g = regulator.g_direct(t, tol)
        payload["G_direct"] = {"value": _num(g.value), "error_estimate": g.error_estimate}
    if args.method in ("triangles", "both"):
        g = regulator.g_triangles(t, tol)
        payload["G_triangles"] = {"value": _num(g.value), "error_estimate": g.error_estimate}
    if args.check:
        payload["report"] = regulator.inhomogeneous_pf_check(t, tol, direct=args.method != "triangles").to_json()
    _emit(args, payload, [{k: (v["value"] if isinstance(v, dict) and "value" in v else v)
                           for k, v in payload.items() if k != "report"}])
    return 0


def cmd_region(args) -> int:
    text = regulator.emit_region_data(float(args.t), args.resolution)
    if args.csv and args.csv != "-":
        with open(args.csv, "w") as fh:
            fh.write(text)
        print(f"wrote {text.count(chr(10)) - 1} rows to {args.csv}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_lattice(args) -> int:
    L = lattice.builtin(args.name)
    payload = {"name": args.name, **L.to_json()}
    _emit(args, payload, [payload])
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--csv", metavar="PATH", help="write CSV to PATH ('-' for stdout)")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=int(os.environ.get("THREADS", "1")))

    p = argparse.ArgumentParser(prog="quartic-k3", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="run the full verification suite")
    s.add_argument("--t-values", type=float, nargs="+")
    s.add_argument("--out", help="write the JSON report to a file")
    s.add_argument("--pf-constant", default="-1/4", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bitangents", parents=[common], help="the 28 bitangents of g_t")
    s.add_argument("--t", default="1")
    s.add_argument("--fermat", action="store_true", help="use the Fermat quartic instead")
    s.set_defaults(func=cmd_bitangents)

    s = sub.add_parser("family", parents=[common], help="member data, split conics, cycle functions")
    s.add_argument("--t", default="1")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("maps", parents=[common], help="residuals of psi, phi, tau")
    s.add_argument("--t", default="1")
    s.add_argument("--samples", type=int, default=100)
    s.set_defaults(func=cmd_maps)

    s = sub.add_parser("periods", parents=[common], help="elliptic periods P1, P2")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--lam", type=complex)
    g.add_argument("--t", default="1")
    s.set_defaults(func=cmd_periods)

    s = sub.add_parser("regulator", parents=[common], help="G(t) and the inhomogeneous equation")
    s.add_argument("--t", default="1.0")
    s.add_argument("--method", choices=("direct", "triangles", "both"), default="both")
    s.add_argument("--check", action="store_true", help="also evaluate D_t G both ways")
    s.set_defaults(func=cmd_regulator)

    s = sub.add_parser("region", parents=[common], help="region membership and boundary samples (CSV)")
    s.add_argument("--t", default="1.0")
    s.add_argument("--resolution", type=int, default=200)
    s.set_defaults(func=cmd_region)

    s = sub.add_parser("lattice", parents=[common], help="rank, signature, discriminant")
    s.add_argument("--name", default="H")
    s.set_defaults(func=cmd_lattice)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
