"""Command line front end: ``python -m hae <subcommand> ...``.

All rationals are emitted as "p/q" strings; the only floats in any report
are in the quasimod numeric anomaly section.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .amplitudes import (AmbiguityAnsatz, AmplitudeError, build_pipeline, constant_map_value,
                         fit_ambiguity, genus1_amplitude, genus2_amplitude, genus2_core,
                         gv_invert, propagator_limits)
from .cache import NullCache, SeriesCache
from .config import ConfigError, config_hash, expected_vanishing, load_geometry
from .picard_fuchs import FrobeniusBasis, apply_operator, frobenius_mum
from .quasimodular import (AlmostHolomorphicForm, ahmf_derivation, ahmf_ops, eisenstein,
                           elliptic_genus_one, numeric_anomaly_check, ramanujan_theta)
from .ratfunc import format_rational
from .series import LaurentLogSeries, SeriesError, compose, monomial
from .amplitudes import MARGIN

SCHEMA = 1


def fr(x):
    return format_rational(Fraction(x))


def coeffs(s, upto=None):
    top = s.prec if upto is None else upto
    return [fr(s.coeff(n)) for n in range(top + 1)]


def _table(t):
    return {"genus": t.genus, "constant_term": fr(t.constant_term),
            "gw": {str(d): fr(v) for d, v in sorted(t.gw.items())},
            "gv": {str(d): fr(v) for d, v in sorted(t.gv.items())}}


class Run:
    """Shared state for one geometry at one order."""

    def __init__(self, geom, raw, order, cache, threads=1):
        self.geom, self.raw, self.order = geom, raw, order
        self.hash = config_hash(raw)
        self.cache = cache
        self.threads = max(1, threads)
        self.timings = {}
        self.checks = {"residuals": {}, "integrality": {}, "vanishing": {}}
        self.failures = []

    def timed(self, name, fn):
        t = time.perf_counter()
        out = fn()
        self.timings[name] = round(time.perf_counter() - t, 6)
        return out

    def check(self, group, name, ok, **extra):
        self.checks[group][name] = dict({"pass": bool(ok)}, **extra)
        if not ok:
            self.failures.append(f"{group}.{name}")

    def basis(self):
        if not hasattr(self, "_basis"):
            prec = self.order + MARGIN
            r = self.geom.operator.order

            def build():
                b = frobenius_mum(self.geom.operator, prec)
                for k, a in enumerate(b.holomorphic):
                    self.cache_put(f"frobenius-A{k}", prec, a)
                return b

            parts = [self.cache_get(f"frobenius-A{k}", prec) for k in range(r)]
            if all(p is not None for p in parts):
                self._basis = FrobeniusBasis(self.geom.operator, prec, tuple(parts))
            else:
                self._basis = self.timed("frobenius", build)
        return self._basis

    def cache_get(self, stage, n):
        return self.cache.get(self.hash, stage, n) if isinstance(self.cache, SeriesCache) else None

    def cache_put(self, stage, n, s):
        if isinstance(self.cache, SeriesCache):
            self.cache.put(self.hash, stage, n, s)

    def cached(self, stage, fn):
        return self.cache.fetch(self.hash, stage, self.order, lambda: self.timed(stage, fn))[0]

    def pipeline(self):
        if not hasattr(self, "_pipe"):
            self._pipe = self.timed("pipeline", lambda: build_pipeline(self.geom, self.order, self.basis()))
        return self._pipe

    def operator_residuals(self):
        b = self.basis()
        sols = b.solutions
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            images = list(pool.map(lambda s: apply_operator(self.geom.operator, s), sols))
        ok = all(not any(c for p in img.parts for c in p) for img in images)
        self.check("residuals", "operator", ok, solutions=len(sols), truncation=b.prec)

    def mirror_roundtrip(self):
        mm = self.pipeline().mm
        ident = compose(mm.q_of_z, mm.z_of_q)
        self.check("residuals", "mirror_roundtrip", ident.equals(monomial(1, "q")))


def compute(run, genera):
    geom, N = run.geom, run.order
    report = {}
    run.operator_residuals()
    p = run.pipeline()
    run.mirror_roundtrip()
    K = run.cached("K_ttt", lambda: p.yuk.K_ttt)
    run.check("residuals", "kappa_normalization", K.coeff(0) == geom.kappa, K_ttt_0=fr(K.coeff(0)))
    report["yukawa"] = {"c": fr(p.yuk.c), "z_exponent": 3,
                        "disc_exponents": list(geom.yukawa_exponents), "K_ttt": coeffs(K, N)}
    t0 = gv_invert(0, K, geom.kappa, q_sign=geom.q_sign, degree=N)
    amps, tables = [], []
    if 0 in genera:
        tables.append(t0)
    t1 = a1 = None
    if 1 in genera or 2 in genera:
        a1 = genus1_amplitude(geom, p.basis, p.mm, p.conn)
        s1 = run.cached("genus1", lambda: a1.series)
        t1 = gv_invert(1, s1, genus0=t0, q_sign=geom.q_sign, degree=N)
        expect = -Fraction(geom.c2H, 24)
        run.check("residuals", "genus1_constant", s1.coeff(0) == expect,
                  value=fr(s1.coeff(0)), expected=fr(expect))
        if 1 in genera:
            amps.append({"genus": 1, "representation": "theta_q F_1",
                         "b": fr(a1.data["b"]), "phi0_exponent": fr(a1.data["phi0_exponent"]),
                         "conifold_a": [fr(a) for a in geom.conifold_a],
                         "q_coefficients": coeffs(s1, N)})
            tables.append(t1)
    fit_echo = None
    if 2 in genera:
        props = propagator_limits(geom, p.conn, p.yuk)
        rel = props.S_zz * p.yuk.C_zzz - (p.conn.K_hol * 2 - p.conn.Gamma_hol
                                          + geom.gauge.s.to_series(p.conn.K_hol.prec))
        run.check("residuals", "propagator_relation", not any(c for c in rel.parts[0]))
        run.checks["residuals"]["propagator_closure_defect"] = {
            "reported": True, "z_coefficients": coeffs(props.consistency_residual, 5)}

        def do_fit():
            return fit_ambiguity(geom, p, core=genus2_core(geom, props, a1, p.yuk, p.conn),
                                 genus0=t0)

        n_basis = len(geom.ansatz_basis)
        cf = run.cache_get("fit-coefficients", N)
        sr = run.cache_get("fit-surplus", N)
        if cf is not None and sr is not None:
            labels = [c if isinstance(c, str) else f"{c[0]}({c[1]})" for c in geom.constraints]
            f2 = AmbiguityAnsatz(geom.ansatz_basis, tuple(cf.coeff(i) for i in range(n_basis)),
                                 dict(zip(labels[n_basis:], (sr.coeff(i) for i in range(len(labels) - n_basis)))))
        else:
            f2 = run.timed("fit", do_fit)
            run.cache_put("fit-coefficients", N, LaurentLogSeries([list(f2.coefficients)], 0, None, "z"))
            run.cache_put("fit-surplus", N, LaurentLogSeries([list(f2.surplus_residuals.values())], 0, None, "z"))
        s2 = run.cached("genus2", lambda: genus2_amplitude(geom, props, a1, p.yuk, p.conn, f2, p.mm).series)
        t2 = gv_invert(2, s2, genus0=t0, q_sign=geom.q_sign, degree=N)
        cm = constant_map_value(2, geom.chi)
        run.check("residuals", "constant_map", s2.coeff(0) == cm, value=fr(s2.coeff(0)), expected=fr(cm))
        for label, val in f2.surplus_residuals.items():
            run.check("residuals", f"surplus_{label}", val == 0, value=fr(val))
        fit_echo = {"basis": [f.to_config() for f in geom.ansatz_basis],
                    "constraints": [c if isinstance(c, str) else f"{c[0]}({c[1]})" for c in geom.constraints],
                    "coefficients": [fr(c) for c in f2.coefficients],
                    "surplus_residuals": {k: fr(v) for k, v in f2.surplus_residuals.items()}}
        amps.append({"genus": 2, "representation": "F_2", "q_coefficients": coeffs(s2, N)})
        tables.append(t2)
    for t in tables:
        bad = [str(d) for d, v in sorted(t.gv.items()) if v.denominator != 1]
        run.check("integrality", str(t.genus), not bad, non_integral_degrees=bad)
    by_genus = {t.genus: t for t in tables}
    for g, degrees in sorted(expected_vanishing(run.raw).items()):
        if g in by_genus:
            vals = {str(d): fr(by_genus[g].gv.get(d, 0)) for d in degrees if d <= N}
            run.check("vanishing", str(g), all(v == "0" for v in vals.values()), values=vals)
    report["amplitudes"] = amps
    report["invariants"] = [_table(t) for t in tables]
    return report, fit_echo


def _manifest(run, command, genera, fit_echo=None):
    return {"tool": "hae", "version": __version__, "command": command,
            "geometry": run.geom.name, "geometry_hash": run.hash,
            "genus": sorted(genera), "truncation_order": run.order,
            "gauge": run.geom.gauge.to_config(), "q_sign": run.geom.q_sign,
            "fitted_ambiguity": fit_echo, "timings": run.timings}


def _finish(run, body, command, genera=(), fit_echo=None):
    out = {"schema": SCHEMA, "manifest": _manifest(run, command, genera, fit_echo)}
    out.update(body)
    out["checks"] = run.checks
    out["status"] = "fail" if run.failures else "pass"
    out["failures"] = run.failures
    return out


def cmd_compute(args, run):
    genera = sorted({int(g) for chunk in args.genus for g in str(chunk).split(",") if g != ""})
    if any(g not in (0, 1, 2) for g in genera):
        raise AmplitudeError("genus must be 0, 1 or 2")
    body, fit_echo = compute(run, genera)
    return _finish(run, body, "compute", genera, fit_echo)


def cmd_periods(args, run):
    run.operator_residuals()
    b = run.basis()
    body = {"periods": {"truncation": b.prec, "normalization": "phi^k = sum_i log(z)^i/i! A_{k-i}",
                        "A": [coeffs(a) for a in b.holomorphic]}}
    return _finish(run, body, "periods")


def cmd_mirror_map(args, run):
    mm = run.pipeline().mm
    run.mirror_roundtrip()
    body = {"mirror_map": {"q_of_z": coeffs(mm.q_of_z, run.order), "z_of_q": coeffs(mm.z_of_q, run.order),
                           "dlog": coeffs(mm.dlog, run.order)}}
    return _finish(run, body, "mirror-map")


def cmd_yukawa(args, run):
    body, _ = compute(run, [0])
    return _finish(run, body, "yukawa", [0])


def cmd_quasimod(args):
    N = args.order
    t0 = time.perf_counter()
    checks = {"residuals": {}}
    failures = []
    body = {"eisenstein": {f"E{k}": coeffs(eisenstein(k, N)) for k in (2, 4, 6)}}
    try:
        e = elliptic_genus_one(N)
        ok = True
    except ValueError:
        ok = False
    checks["residuals"]["eta_identity"] = {"pass": ok}
    if ok:
        body["elliptic_genus_one"] = {"log_q_coefficient": fr(e.log_coeff), "tail": coeffs(e.tail)}
    bad = [str(sorted(m.poly.items())) for m in _monomials(12)
           if ahmf_ops(ahmf_derivation(m), None, "phi").poly != ramanujan_theta(ahmf_ops(m, None, "phi")).poly]
    checks["residuals"]["phi_D_compatibility"] = {"pass": not bad, "failing": bad}
    numeric = []
    for t, h, tol in ((1j, 1e-4, 1e-6), (0.5 + 2j, 1e-3, 1e-8)):
        r = numeric_anomaly_check(t, h)
        numeric.append({"t": [t.real, t.imag], "h": h, "residual": r, "tolerance": tol, "pass": r < tol})
    checks["residuals"]["numeric_anomaly"] = {"pass": all(x["pass"] for x in numeric), "points": numeric}
    failures = [k for k, v in checks["residuals"].items() if not v["pass"]]
    manifest = {"tool": "hae", "version": __version__, "command": "quasimod", "truncation_order": N,
                "timings": {"total": round(time.perf_counter() - t0, 6)}}
    out = {"schema": SCHEMA, "manifest": manifest}
    out.update(body)
    out.update({"checks": checks, "status": "fail" if failures else "pass",
                "failures": ["residuals." + f for f in failures]})
    return out


def _monomials(max_weight):
    """All monomials in E2*, E4, E6 of weight <= max_weight."""
    gens = [AlmostHolomorphicForm.generator(n) for n in ("E2*", "E4", "E6")]
    out = []
    for a in range(max_weight // 2 + 1):
        for b in range(max_weight // 4 + 1):
            for c in range(max_weight // 6 + 1):
                if 0 < 2 * a + 4 * b + 6 * c <= max_weight:
                    out.append(gens[0] ** a * gens[1] ** b * gens[2] ** c)
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="hae", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def geometry_args(p, default_order):
        p.add_argument("--geometry", required=True, help="config path or bundled name (quintic, local-p2)")
        p.add_argument("--order", type=int, default=default_order, help="truncation order in q")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--cache-dir", default=os.environ.get("HAE_CACHE_DIR"),
                       help="series cache directory (default $HAE_CACHE_DIR)")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("compute", help="amplitudes and invariants")
    geometry_args(p, 10)
    p.add_argument("--genus", nargs="+", default=["0"], help="e.g. 0,1,2")
    for name in ("periods", "mirror-map", "yukawa"):
        geometry_args(sub.add_parser(name), 10)
    q = sub.add_parser("quasimod", help="Eisenstein series and the elliptic toy model")
    q.add_argument("--order", type=int, default=20)
    q.add_argument("--out")
    return ap


def _emit(report, path):
    text = json.dumps(report, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "quasimod":
            report = cmd_quasimod(args)
        else:
            geom, raw = load_geometry(args.geometry)
            cache = SeriesCache(args.cache_dir) if args.cache_dir else NullCache()
            run = Run(geom, raw, args.order, cache, args.threads)
            handler = {"compute": cmd_compute, "periods": cmd_periods,
                       "mirror-map": cmd_mirror_map, "yukawa": cmd_yukawa}[args.command]
            report = handler(args, run)
    except (ConfigError, AmplitudeError, SeriesError, OSError) as exc:
        _emit({"schema": SCHEMA, "status": "error", "error": str(exc),
               "key": getattr(exc, "key", None)}, getattr(args, "out", None))
        return 2
    _emit(report, args.out)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
