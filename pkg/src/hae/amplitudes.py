"""Holomorphic-limit amplitudes at genus 0, 1, 2 and invariant extraction.

One-modulus conventions: ``D f = df/dz + m K f - k Gamma f`` for a section
of weight ``m`` with ``k`` lower z-indices (upper indices count as -1).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .picard_fuchs import frobenius_mum
from .ratfunc import RationalFunction
from .series import LaurentLogSeries, SeriesError, bernoulli, derivative, theta
from .special_geometry import (Gauge, connection_limits, mirror_map, yukawa)


class AmplitudeError(ValueError):
    pass


class FitError(AmplitudeError):
    def __init__(self, message, rank=None, null_directions=()):
        super().__init__(message)
        self.rank = rank
        self.null_directions = list(null_directions)


MARGIN = 4


@dataclass(frozen=True)
class Pipeline:
    """Genus-0 data of one geometry at one truncation order."""

    geom: object
    order: int
    basis: object
    mm: object
    yuk: object
    conn: object


def build_pipeline(geom, order, basis=None):
    """Periods, mirror map, Yukawa coupling and connection at ``order``.

    The Frobenius basis is computed a few orders deeper so every q-series
    handed out is still valid to ``q**order``.
    """
    if order < 2:
        raise AmplitudeError("truncation order must be at least 2")
    if basis is None:
        basis = frobenius_mum(geom.operator, order + MARGIN)
    mm = mirror_map(basis)
    return Pipeline(geom, order, basis, mm, yukawa(geom, mm), connection_limits(basis, mm))


@dataclass(frozen=True)
class AmplitudeSeries:
    genus: int
    series: LaurentLogSeries          # in q
    z_series: LaurentLogSeries = field(default=None, repr=False)
    data: dict = field(default_factory=dict)

    normalization = "(phi0)^(2g-2) F_g at the LCSL"


def covariant_derivative(f, weight, rank, conn):
    out = derivative(f)
    if weight:
        out = out + conn.K_hol * f * weight
    if rank:
        out = out - conn.Gamma_hol * f * rank
    return out


def genus1_amplitude(geom, basis, mm, conn=None):
    """``theta_q`` of the normalized genus-1 amplitude.

    In z the derivative reads
    ``-1/2 theta(dlog)/dlog + 1/2 + b/2 - A theta(phi0)/phi0 + sum a_j/2 theta(D_j)/D_j``
    with ``A = (4 - chi/12)/2`` and ``b = -1 - c2H/12``.
    """
    if geom.c2H is None:
        raise AmplitudeError("genus 1 needs c2H")
    b = -1 - Fraction(geom.c2H, 12)
    A = (4 - Fraction(geom.chi, 12)) / 2
    phi0, dlog = basis.holomorphic[0], mm.dlog
    th = theta(dlog) / dlog * Fraction(-1, 2) + (Fraction(1, 2) + b / 2)
    th = th - theta(phi0) / phi0 * A
    for d, a in zip(geom.disc_series(mm.prec), geom.conifold_a):
        th = th + theta(d) / d * (Fraction(a) / 2)
    q_series = mm.to_q(th / dlog)
    return AmplitudeSeries(1, q_series, th, {"b": b, "phi0_exponent": 4 - Fraction(geom.chi, 12),
                                            "conifold_a": list(geom.conifold_a)})


@dataclass(frozen=True)
class PropagatorLimits:
    S_zz: LaurentLogSeries
    S_z: LaurentLogSeries
    S: LaurentLogSeries
    gauge: Gauge
    consistency_residual: LaurentLogSeries


def propagator_limits(geom, conn, yuk, gauge=None):
    """Holomorphic limits of the propagators.

    ``S_zz`` has weight -2 and two upper indices, ``S_z`` weight -2 and one,
    ``S`` weight -2 and none.  The residual is the defect of the closure
    ``D S = -1/2 C S_z^2 + 1/2 h_z K^2 + h K + (holomorphic)``.
    """
    gauge = gauge or geom.gauge
    prec = conn.K_hol.prec
    C = yuk.C_zzz
    K, G = conn.K_hol, conn.Gamma_hol
    s = gauge.s.to_series(prec)
    hz = gauge.h_z.to_series(prec)
    h = gauge.h.to_series(prec)
    inv_c = (C.shift(3)).inverse().shift(3)
    S_zz = (K * 2 - G + s) * inv_c
    S_z = (covariant_derivative(S_zz, -2, -2, conn) + C * S_zz * S_zz - hz) * Fraction(1, 2)
    S = (covariant_derivative(S_z, -2, -1, conn) + C * S_zz * S_z - hz * K - h) * Fraction(1, 2)
    res = (covariant_derivative(S, -2, 0, conn) + C * S_z * S_z * Fraction(1, 2)
           - hz * K * K * Fraction(1, 2) - h * K)
    return PropagatorLimits(S_zz, S_z, S, gauge, res)


def genus2_core(geom, props, amp1, yuk, conn):
    """The genus-2 formula without its holomorphic ambiguity (z-series, unnormalized)."""
    C = yuk.C_zzz
    Szz, Sz, S = props.S_zz, props.S_z, props.S
    f1 = amp1.z_series.shift(-1)               # d F_1 / dz
    f11 = covariant_derivative(f1, 0, 1, conn)
    dC = covariant_derivative(C, 2, 3, conn)
    # local geometries: S_z and S decouple, chi only enters the constant map
    x = Fraction(geom.chi) if geom.compact else Fraction(0)
    half = Fraction(1, 2)
    out = Szz * f11 * half + Szz * f1 * f1 * half
    out = out - Szz * Szz * dC * Fraction(1, 8) - Szz * Szz * C * f1 * half
    out = out + Sz * f1 * (x / 24) + Szz ** 3 * C * C * (Fraction(1, 8) + Fraction(1, 12))
    out = out - Sz * Szz * C * (x / 48) + S * (x / 24 * (x / 24 - 1))
    return out


@dataclass(frozen=True)
class AmbiguityAnsatz:
    basis: tuple
    coefficients: tuple = None
    surplus_residuals: dict = field(default_factory=dict)

    @property
    def fitted(self):
        return self.coefficients is not None

    def function(self):
        if not self.fitted:
            raise AmplitudeError("ambiguity ansatz is not fitted")
        out = RationalFunction([])
        for c, f in zip(self.coefficients, self.basis):
            out = out + f * c
        return out

    def __call__(self, z):
        return self.function()(z)

    def to_series(self, prec):
        out = LaurentLogSeries([[]], 0, prec, "z")
        for c, f in zip(self.coefficients, self.basis):
            out = out + f.to_series(prec) * c
        return out


def genus2_amplitude(geom, props, amp1, yuk, conn, f2, mm):
    if not f2.fitted:
        raise AmplitudeError("ambiguity ansatz is not fitted")
    core = genus2_core(geom, props, amp1, yuk, conn)
    total = core + f2.to_series(core.prec)
    return AmplitudeSeries(2, mm.to_q(mm.phi0 * mm.phi0 * total), total,
                           {"f2": [str(c) for c in f2.coefficients]})


def constant_map_value(g, chi):
    if g < 2:
        raise AmplitudeError("constant maps contribute from genus 2 on")
    num = abs(bernoulli(2 * g) * bernoulli(2 * g - 2))
    return Fraction(chi, 2) * (-1) ** g * num / (2 * g * (2 * g - 2) * factorial(2 * g - 2))


# -- invariants ---------------------------------------------------------------

@dataclass(frozen=True)
class InvariantTable:
    genus: int
    gw: dict
    gv: dict
    constant_term: Fraction

    def integral(self):
        return all(v.denominator == 1 for v in self.gv.values())


def _divisors(d):
    return [k for k in range(1, d + 1) if d % k == 0]


def gv_invert(g, amplitude, kappa=None, genus0=None, q_sign=1, degree=None):
    """Gopakumar-Vafa invariants from a q-series.

    ``g=0`` takes ``K_ttt``; ``g=1`` takes ``theta_q F_1``; ``g=2`` takes
    ``F_2`` and needs the genus-0 table.  With ``q_sign=-1`` the multicover
    formulas are applied in ``Q = -q``.
    """
    top = amplitude.prec if degree is None else degree
    if top is None:
        raise AmplitudeError("exact input needs an explicit degree")
    if amplitude.prec is not None and top > amplitude.prec:
        raise AmplitudeError(f"truncation {amplitude.prec} too small for degree {top}")
    if g == 2 and genus0 is None:
        raise AmplitudeError("genus 2 extraction needs the genus-0 invariants")
    c = {d: amplitude.coeff(d) * q_sign ** d for d in range(top + 1)}
    gw, gv = {}, {}
    for d in range(1, top + 1):
        if g == 0:
            gw[d] = c[d] / d ** 3
            gv[d] = (c[d] - sum(gv[k] * k ** 3 for k in _divisors(d)[:-1])) / d ** 3
        elif g == 1:
            n0 = genus0.gv if genus0 else {}
            gw[d] = c[d] / d
            rest = sum(Fraction(1, k) * (gv[d // k] + n0.get(d // k, 0) / Fraction(12))
                       for k in _divisors(d)[1:])
            gv[d] = gw[d] - n0.get(d, 0) / Fraction(12) - rest
        elif g == 2:
            gw[d] = c[d]
            rest = sum(Fraction(k, 240) * genus0.gv[d // k] for k in _divisors(d))
            rest += sum(k * gv[d // k] for k in _divisors(d)[1:])
            gv[d] = c[d] - rest
        else:
            raise AmplitudeError("only genus 0, 1, 2 are supported")
    const = c[0] if g != 0 else (kappa if kappa is not None else c[0])
    return InvariantTable(g, gw, gv, const)


def _observable_rows(geom, series_list, genus0, degree):
    """Per ansatz function: its q^0 coefficient and its n_2(d) contributions."""
    rows = []
    for s in series_list:
        tab = gv_invert(2, s, genus0=_zero_table(genus0), q_sign=geom.q_sign, degree=degree)
        rows.append((s.coeff(0), tab.gv))
    return rows


def _zero_table(t):
    return InvariantTable(0, {}, {d: Fraction(0) for d in t.gv}, Fraction(0))


def fit_ambiguity(geom, pipeline, ansatz=None, constraints=None, core=None, genus0=None,
                  props=None, amp1=None):
    """Fix ``f_2`` by linear conditions on the genus-2 q-series.

    Constraints are ``"constant"`` (the constant-map value) or ``("n2", d)``
    (vanishing of ``n_2(d)``).  The first independent rows determine the
    coefficients; any further rows are reported as surplus residuals.
    """
    p = pipeline
    basis = tuple(ansatz.basis if isinstance(ansatz, AmbiguityAnsatz) else (ansatz or geom.ansatz_basis))
    constraints = list(constraints or geom.constraints)
    if len(constraints) < len(basis):
        raise FitError(f"{len(constraints)} constraints cannot fix {len(basis)} coefficients")
    if genus0 is None:
        genus0 = gv_invert(0, p.yuk.K_ttt, p.geom.kappa, q_sign=geom.q_sign, degree=p.order)
    if core is None:
        props = props or propagator_limits(geom, p.conn, p.yuk)
        amp1 = amp1 or genus1_amplitude(geom, p.basis, p.mm, p.conn)
        core = genus2_core(geom, props, amp1, p.yuk, p.conn)
    degree = max([c[1] for c in constraints if c != "constant"] + [1])
    phi2 = p.mm.phi0 * p.mm.phi0
    base = gv_invert(2, p.mm.to_q(phi2 * core), genus0=genus0, q_sign=geom.q_sign, degree=degree)
    fs = [p.mm.to_q(phi2 * f.to_series(core.prec)) for f in basis]
    obs = _observable_rows(geom, fs, genus0, degree)
    rows = []
    for con in constraints:
        if con == "constant":
            target = constant_map_value(2, geom.chi)
            rows.append(([o[0] for o in obs], target - base.constant_term))
        elif isinstance(con, (tuple, list)) and con[0] == "n2":
            d = int(con[1])
            rows.append(([o[1][d] for o in obs], -base.gv[d]))
        else:
            raise FitError(f"unknown constraint {con!r}")
    coeffs, used, rank, null = _solve(rows, len(basis))
    if coeffs is None:
        raise FitError(f"ambiguity system is singular: rank {rank} < {len(basis)}", rank, null)
    surplus = {}
    for i, (row, rhs) in enumerate(rows):
        if i not in used:
            surplus[_label(constraints[i])] = sum(a * x for a, x in zip(row, coeffs)) - rhs
    return AmbiguityAnsatz(basis, tuple(coeffs), surplus)


def _label(con):
    return con if isinstance(con, str) else f"{con[0]}({con[1]})"


def _solve(rows, n):
    """Exact elimination; returns (solution, rows used, rank, null directions)."""
    used, pivots, reduced = [], [], []
    for i, (row, rhs) in enumerate(rows):
        r = [Fraction(x) for x in row] + [Fraction(rhs)]
        for (pc, pr) in zip(pivots, reduced):
            if r[pc]:
                f = r[pc]
                r = [a - f * b for a, b in zip(r, pr)]
        lead = next((j for j in range(n) if r[j]), None)
        if lead is None:
            continue
        r = [a / r[lead] for a in r]
        for k, pr in enumerate(reduced):
            if pr[lead]:
                f = pr[lead]
                reduced[k] = [a - f * b for a, b in zip(pr, r)]
        pivots.append(lead)
        reduced.append(r)
        used.append(i)
        if len(pivots) == n:
            break
    rank = len(pivots)
    if rank < n:
        free = [j for j in range(n) if j not in pivots]
        null = []
        for fj in free:
            v = [Fraction(0)] * n
            v[fj] = Fraction(1)
            for pc, pr in zip(pivots, reduced):
                v[pc] = -pr[fj]
            null.append(v)
        return None, used, rank, null
    sol = [Fraction(0)] * n
    for pc, pr in zip(pivots, reduced):
        sol[pc] = pr[n]
    return sol, used, rank, []


__all__ = ["AmplitudeError", "FitError", "Pipeline", "build_pipeline", "AmplitudeSeries",
           "covariant_derivative", "genus1_amplitude", "PropagatorLimits", "propagator_limits",
           "genus2_core", "AmbiguityAnsatz", "genus2_amplitude", "constant_map_value",
           "InvariantTable", "gv_invert", "fit_ambiguity", "SeriesError"]
