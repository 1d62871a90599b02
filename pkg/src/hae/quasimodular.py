"""Quasimodular forms, the almost-holomorphic ring and the elliptic toy model.

Polynomials in the generators are dicts from exponent tuples
``(e2, e4, e6, y)`` to Fractions, with ``Y = 3/(pi Im t)`` so that
``E2* = E2 - Y``.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .series import LaurentLogSeries, series, series_log

WEIGHTS = (2, 4, 6, 2)
GENERATORS = ("E2", "E4", "E6", "Y")
_SIGNS = {2: -24, 4: 240, 6: -504}


class ModularError(ValueError):
    pass


def sigma(n, k=1):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein(k, N):
    if k not in _SIGNS:
        raise ModularError("only E2, E4, E6 are provided")
    return series([1] + [_SIGNS[k] * sigma(n, k - 1) for n in range(1, N + 1)], "q", N)


@dataclass(frozen=True)
class EllipticAmplitude:
    """``log_coeff * log q + tail`` with ``tail`` a q-series."""

    log_coeff: Fraction
    tail: LaurentLogSeries


def elliptic_genus_one(N):
    tail = series([0] + [Fraction(sigma(d), d) for d in range(1, N + 1)], "q", N)
    # -log prod(1 - q^n), built independently from the eta product
    prod = series([1], "q", N)
    for n in range(1, N + 1):
        prod = prod * series([1] + [0] * (n - 1) + [-1], "q", N)
    other = -series_log(prod)
    if not tail.equals(other):
        raise ModularError("divisor-sum and eta-product forms disagree")
    return EllipticAmplitude(Fraction(-1, 24), tail)


# -- polynomial rings ----------------------------------------------------------

def _clean(poly):
    return {m: Fraction(c) for m, c in poly.items() if c}


def _weight(mono):
    return sum(w * e for w, e in zip(WEIGHTS, mono))


def _padd(a, b):
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + c
    return _clean(out)


def _pmul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return _clean(out)


def _pscale(a, c):
    return _clean({m: v * c for m, v in a.items()})


def _homogeneous_weight(poly):
    ws = {_weight(m) for m in poly}
    if len(ws) > 1:
        raise ModularError(f"inhomogeneous polynomial with weights {sorted(ws)}")
    return ws.pop() if ws else None


def _gen(i):
    m = [0, 0, 0, 0]
    m[i] = 1
    return {tuple(m): Fraction(1)}


@dataclass(frozen=True)
class QuasiModularForm:
    weight: int
    poly: dict
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        poly = _clean(self.poly)
        object.__setattr__(self, "poly", poly)
        if any(m[3] for m in poly):
            raise ModularError("quasimodular forms do not involve Y")
        w = _homogeneous_weight(poly)
        if w is not None and w != self.weight:
            raise ModularError(f"declared weight {self.weight} but polynomial has weight {w}")

    def q_expansion(self, N):
        if N not in self._cache:
            gens = [eisenstein(k, N) for k in (2, 4, 6)]
            out = series([], "q", N)
            for (a, b, c, _), coeff in self.poly.items():
                out = out + gens[0] ** a * gens[1] ** b * gens[2] ** c * coeff
            self._cache[N] = out
        return self._cache[N]

    def __add__(self, other):
        if self.weight != other.weight:
            raise ModularError("cannot add forms of different weight")
        return QuasiModularForm(self.weight, _padd(self.poly, other.poly))

    def __mul__(self, other):
        if isinstance(other, QuasiModularForm):
            return QuasiModularForm(self.weight + other.weight, _pmul(self.poly, other.poly))
        return QuasiModularForm(self.weight, _pscale(self.poly, Fraction(other)))

    def __sub__(self, other):
        return self + other * -1


@dataclass(frozen=True)
class AlmostHolomorphicForm:
    weight: int
    poly: dict

    def __post_init__(self):
        poly = _clean(self.poly)
        object.__setattr__(self, "poly", poly)
        w = _homogeneous_weight(poly)
        if w is not None and w != self.weight:
            raise ModularError(f"declared weight {self.weight} but polynomial has weight {w}")

    @classmethod
    def generator(cls, name):
        if name == "E2*":
            return cls(2, _padd(_gen(0), _pscale(_gen(3), -1)))
        i = GENERATORS.index(name)
        return cls(WEIGHTS[i], _gen(i))

    def e2star_view(self):
        """Coefficients in the basis ``E2*, E4, E6, Y`` (substitute E2 = E2* + Y)."""
        out = {}
        for (a, b, c, y), coeff in self.poly.items():
            # (E2* + Y)^a
            for j in range(a + 1):
                m = (a - j, b, c, y + j)
                out[m] = out.get(m, 0) + coeff * math.comb(a, j)
        return _clean(out)

    def __add__(self, other):
        return ahmf_ops(self, other, "add")

    def __mul__(self, other):
        if isinstance(other, AlmostHolomorphicForm):
            return ahmf_ops(self, other, "mul")
        return AlmostHolomorphicForm(self.weight, _pscale(self.poly, Fraction(other)))

    def __sub__(self, other):
        return self + other * -1

    def __pow__(self, n):
        out = AlmostHolomorphicForm(0, {(0, 0, 0, 0): Fraction(1)})
        for _ in range(n):
            out = out * self
        return out


def ahmf_ops(a, b, op):
    if op == "add":
        if a.weight != b.weight:
            raise ModularError(f"weight mismatch: {a.weight} vs {b.weight}")
        return AlmostHolomorphicForm(a.weight, _padd(a.poly, b.poly))
    if op == "mul":
        return AlmostHolomorphicForm(a.weight + b.weight, _pmul(a.poly, b.poly))
    if op == "phi":
        return QuasiModularForm(a.weight, {m: c for m, c in a.poly.items() if not m[3]})
    raise ModularError(f"unknown operation {op!r}")


# theta of E2, E4, E6 (Ramanujan) and the Y-corrected derivation on generators
_RAMANUJAN = {
    0: {(2, 0, 0, 0): Fraction(1, 12), (0, 1, 0, 0): Fraction(-1, 12)},
    1: {(1, 1, 0, 0): Fraction(1, 3), (0, 0, 1, 0): Fraction(-1, 3)},
    2: {(1, 0, 1, 0): Fraction(1, 2), (0, 2, 0, 0): Fraction(-1, 2)},
}


def _d_generator(i):
    if i == 3:
        return {(0, 0, 0, 2): Fraction(-1, 12)}
    m = [0, 0, 0, 1]
    m[i] = 1
    return _padd(_RAMANUJAN[i], {tuple(m): Fraction(-WEIGHTS[i], 12)})


def _derive(poly, dgen):
    out = {}
    for mono, c in poly.items():
        for i, e in enumerate(mono):
            if e:
                rest = list(mono)
                rest[i] -= 1
                out = _padd(out, _pmul({tuple(rest): c * e}, dgen(i)))
    return out


def ahmf_derivation(f):
    """Weight-raising derivation; on generators ``D g = theta(g) - (w/12) Y g``, ``D Y = -Y^2/12``."""
    w = _homogeneous_weight(f.poly)
    if w is not None and w != f.weight:
        raise ModularError("inhomogeneous input")
    return AlmostHolomorphicForm(f.weight + 2, _derive(f.poly, _d_generator))


def ramanujan_theta(f):
    """``q d/dq`` on C[E2, E4, E6] through the Ramanujan system."""
    return QuasiModularForm(f.weight + 2, _derive(f.poly, lambda i: _RAMANUJAN[i]))


# -- numeric check of the elliptic anomaly equation ------------------------------

def _log_eta(t, tol=1e-18):
    q = cmath.exp(2j * cmath.pi * t)
    acc = 2j * cmath.pi * t / 24
    qn = q
    while abs(qn) > tol:
        acc += cmath.log(1 - qn)
        qn *= q
    return acc


def _f1(t, s):
    # F_1 with t and tbar = s treated as independent variables
    im = (t - s) / 2j
    log_eta_bar = _log_eta(s.conjugate()).conjugate()
    return -0.5 * cmath.log(im) - _log_eta(t) - log_eta_bar


def numeric_anomaly_check(t0, h):
    """``|d_t d_tbar F_1 - (-1/(2 (t-tbar)^2))|`` by a mixed central difference."""
    t0 = complex(t0)
    if t0.imag < 0.25:
        raise ModularError("Im t below 1/4: eta truncation is not trusted there")
    s0 = t0.conjugate()
    mixed = (_f1(t0 + h, s0 + h) - _f1(t0 + h, s0 - h)
             - _f1(t0 - h, s0 + h) + _f1(t0 - h, s0 - h)) / (4 * h * h)
    exact = -1 / (2 * (t0 - s0) ** 2)
    return abs(mixed - exact)
