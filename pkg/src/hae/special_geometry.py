"""Mirror map, Yukawa coupling and holomorphic limits at the LCSL.

Everything flat is written in ``that = log q``; ``q = z exp(A_1/A_0)``
is a rational series, so no factors of ``2 pi i`` ever appear.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .picard_fuchs import PFOperator
from .ratfunc import RationalFunction, poly_mul, parse_rational
from .series import LaurentLogSeries, compose, series, series_exp, series_revert, theta


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Gauge:
    """Holomorphic propagator ambiguities ``s, h_z, h`` (all zero by default)."""

    s: RationalFunction = field(default_factory=lambda: RationalFunction([]))
    h_z: RationalFunction = field(default_factory=lambda: RationalFunction([]))
    h: RationalFunction = field(default_factory=lambda: RationalFunction([]))

    def to_config(self):
        return {"s": self.s.to_config(), "h_z": self.h_z.to_config(), "h": self.h.to_config()}


@dataclass(frozen=True)
class GeometryData:
    name: str
    operator: PFOperator
    kappa: Fraction
    chi: int
    c2H: int = None
    disc_factors: tuple = ()          # polynomials in z, increasing degree
    yukawa_z_exponent: int = 3
    yukawa_exponents: tuple = ()      # one per discriminant factor
    conifold_a: tuple = ()            # one per discriminant factor
    compact: bool = True
    q_sign: int = 1                   # A-model variable is Q = q_sign * q
    gauge: Gauge = field(default_factory=Gauge)
    ansatz_basis: tuple = ()          # RationalFunctions for f_2
    constraints: tuple = ("constant", ("n2", 1), ("n2", 2))

    def __post_init__(self):
        object.__setattr__(self, "kappa", parse_rational(self.kappa))
        k = len(self.disc_factors)
        if not self.yukawa_exponents:
            object.__setattr__(self, "yukawa_exponents", (1,) * k)
        if not self.conifold_a:
            object.__setattr__(self, "conifold_a", (Fraction(-1, 6),) * k)
        if len(self.yukawa_exponents) != k or len(self.conifold_a) != k:
            raise GeometryError("yukawa exponents and conifold_a need one entry per discriminant factor")
        if self.q_sign not in (1, -1):
            raise GeometryError("q_sign must be 1 or -1")
        if not self.ansatz_basis:
            object.__setattr__(self, "ansatz_basis", default_ansatz(self.discriminant))

    @property
    def discriminant(self):
        out = [Fraction(1)]
        for f in self.disc_factors:
            out = poly_mul(out, list(f))
        return out

    def disc_series(self, prec):
        """Each factor as an exact z-polynomial, truncated to ``prec``."""
        return [series(list(f), "z").truncate(prec) for f in self.disc_factors]


def default_ansatz(disc):
    return (RationalFunction([1]), RationalFunction([1], disc),
            RationalFunction([1], poly_mul(disc, disc)))


@dataclass(frozen=True)
class MirrorMap:
    q_of_z: LaurentLogSeries
    z_of_q: LaurentLogSeries
    dlog: LaurentLogSeries     # theta_z log q
    phi0: LaurentLogSeries
    ratio: LaurentLogSeries    # A_1 / A_0

    @property
    def prec(self):
        return self.q_of_z.prec

    def to_q(self, f):
        """Substitute ``z = z(q)`` into a z-series."""
        return compose(f, self.z_of_q)

    def theta_q(self, f):
        """``theta_q`` of a z-series, still expressed in z."""
        return theta(f) / self.dlog


def mirror_map(basis):
    if len(basis.holomorphic) < 2:
        raise GeometryError("mirror map needs phi^0 and phi^1")
    if basis.prec < 2:
        raise GeometryError("truncation order must be at least 2 for a mirror map")
    phi0, a1 = basis.holomorphic[0], basis.holomorphic[1]
    ratio = a1 / phi0
    q_of_z = series_exp(ratio).shift(1)
    z_of_q = series_revert(q_of_z)
    return MirrorMap(q_of_z, z_of_q, 1 + theta(ratio), phi0, ratio)


@dataclass(frozen=True)
class YukawaCoupling:
    c: Fraction
    z_exponent: int
    disc_exponents: tuple
    K_ttt: LaurentLogSeries      # in q
    C_zzz: LaurentLogSeries      # c / (z^3 prod Delta_j^e_j), in z

    @property
    def kappa(self):
        return self.K_ttt.coeff(0)


def yukawa(geom, mm):
    if not geom.kappa:
        raise GeometryError("yukawa normalization impossible: kappa = 0")
    if geom.yukawa_z_exponent != 3:
        raise GeometryError("yukawa z_exponent must be 3 for a finite nonzero K_ttt(0)")
    prec = mm.prec
    disc = LaurentLogSeries([[1]], 0, None, "z")
    for d, e in zip(geom.disc_series(prec), geom.yukawa_exponents):
        disc = disc * d ** e
    # z^3 C_zzz / c as a power series
    zc3 = disc.truncate(prec).inverse()
    bare = zc3 / (mm.phi0 * mm.phi0 * mm.dlog ** 3)
    c = geom.kappa / bare.coeff(0)
    K = mm.to_q(bare * c)
    return YukawaCoupling(c, 3, tuple(geom.yukawa_exponents), K, (zc3 * c).shift(-3))


@dataclass(frozen=True)
class ConnectionLimits:
    K_hol: LaurentLogSeries
    Gamma_hol: LaurentLogSeries


def connection_limits(basis, mm):
    """``K = -d log phi0``, ``Gamma = d log(dlog / z)`` at the LCSL."""
    phi0 = basis.holomorphic[0]
    K = -(theta(phi0) / phi0).shift(-1)
    G = (theta(mm.dlog) / mm.dlog - 1).shift(-1)
    return ConnectionLimits(K, G)


class GaussRat:
    """Exact ``x + i y`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    @staticmethod
    def of(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            raise TypeError("use GaussRat for exact complex input")
        return GaussRat(x, 0)

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def norm(self):
        return self.re ** 2 + self.im ** 2

    def __add__(self, o):
        o = GaussRat.of(o)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussRat.of(o))

    def __rsub__(self, o):
        return GaussRat.of(o) - self

    def __mul__(self, o):
        o = GaussRat.of(o)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussRat.of(o)
        n = o.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * o.conjugate() * GaussRat(1 / n)

    def __rtruediv__(self, o):
        return GaussRat.of(o) / self

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = GaussRat(o)
        if not isinstance(o, GaussRat):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


@dataclass(frozen=True)
class CanonicalCoordinate:
    """Closed-form canonical coordinate centred at a base point ``a``.

    The conjugate base point enters as the independent symbol ``abar``.
    """

    model: str
    a: GaussRat
    abar: GaussRat

    def __call__(self, x):
        a, ab = self.a, self.abar
        if self.model == "fubini_study":
            return (1 + a * ab) * (1 + a * ab) * (x / (1 + x * ab) - a / (1 + a * ab))
        return -(a - ab) * (a - ab) * (1 / (x - ab) - 1 / (a - ab))

    def derivative(self, x):
        a, ab = self.a, self.abar
        if self.model == "fubini_study":
            w = 1 + x * ab
            return (1 + a * ab) * (1 + a * ab) / (w * w)
        w = x - ab
        return (a - ab) * (a - ab) / (w * w)


def canonical_coordinate(model, basepoint):
    a = GaussRat.of(basepoint)
    if model == "fubini_study":
        if 1 + a * a.conjugate() == 0:
            raise GeometryError("degenerate Fubini-Study base point")
    elif model == "poincare":
        if a.im <= 0:
            raise GeometryError("Poincare base point must lie in the upper half plane (a != abar)")
    else:
        raise GeometryError(f"unknown model {model!r}; use fubini_study or poincare")
    return CanonicalCoordinate(model, a, a.conjugate())


__all__ = ["GeometryError", "Gauge", "GeometryData", "default_ansatz", "MirrorMap", "mirror_map",
           "YukawaCoupling", "yukawa", "ConnectionLimits", "connection_limits", "GaussRat",
           "CanonicalCoordinate", "canonical_coordinate"]
