"""One-parameter Picard-Fuchs operators and Frobenius bases at a MUM point."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .ratfunc import parse_rational, poly_divmod, poly_pow, poly_trim, poly_str
from .series import EpsJet, LaurentLogSeries, SeriesError, log_var, theta


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class PFOperator:
    """``sum_j z**j * Q_j(theta)`` with ``theta = z d/dz``.

    ``terms`` maps each z-power to the coefficient list of ``Q_j`` in
    increasing powers of theta.
    """

    terms: tuple
    discriminant: tuple = (Fraction(1),)

    def __post_init__(self):
        merged = {}
        for power, coeffs in self.terms:
            if power < 0:
                raise OperatorError("z powers must be non-negative")
            acc = merged.setdefault(power, [])
            coeffs = [parse_rational(c) for c in coeffs]
            for k, c in enumerate(coeffs):
                if k < len(acc):
                    acc[k] += c
                else:
                    acc.append(c)
        terms = tuple(sorted((p, tuple(poly_trim(c))) for p, c in merged.items() if poly_trim(c)))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "discriminant", tuple(parse_rational(c) for c in self.discriminant))
        if not terms or terms[0][0] != 0:
            raise OperatorError("operator has no z^0 term")

    @classmethod
    def from_records(cls, records, discriminant=(1,)):
        """Build from config records ``{"z_power": j, "theta_coeffs": [...]}``."""
        return cls(tuple((int(r["z_power"]), tuple(r["theta_coeffs"])) for r in records),
                   tuple(discriminant))

    @property
    def order(self):
        return max(len(c) for _, c in self.terms) - 1

    def q(self, power):
        for p, c in self.terms:
            if p == power:
                return c
        return ()

    def leading_symbol(self):
        """Coefficient of ``theta**order`` as a polynomial in z."""
        r = self.order
        top = max(p for p, _ in self.terms)
        out = [Fraction(0)] * (top + 1)
        for p, c in self.terms:
            if len(c) > r:
                out[p] = c[r]
        return poly_trim(out)

    def validate(self):
        """Check that the leading symbol vanishes only on the discriminant locus."""
        lead = self.leading_symbol()
        disc = poly_trim(self.discriminant)
        if not disc:
            raise OperatorError("discriminant is zero")
        if not lead or not lead[0]:
            raise OperatorError("leading symbol vanishes at z=0")
        if len(lead) > 1:
            _, rem = poly_divmod(poly_pow(disc, len(lead) - 1), lead)
            if rem:
                raise OperatorError(
                    f"leading symbol {poly_str(lead)} has zeros off the discriminant {poly_str(disc)}")
        return self

    def __str__(self):
        pieces = []
        for p, c in self.terms:
            pieces.append(f"z^{p}*({poly_str(list(c), 'theta')})")
        return " + ".join(pieces)


def indicial_polynomial(op):
    """Coefficients (in eps) of the theta-polynomial of the z^0 term."""
    return list(op.q(0))


def _mum_order(op):
    ind = indicial_polynomial(op)
    r = op.order
    if len(ind) != r + 1 or any(ind[:r]):
        raise OperatorError(f"z=0 is not a point of maximal unipotent monodromy: "
                            f"indicial roots {_roots_hint(ind)}")
    return r


def _roots_hint(poly):
    # report the multiplicity of eps=0 and any rational roots found by search
    mult = 0
    while mult < len(poly) and not poly[mult]:
        mult += 1
    roots = ["0"] * mult
    rest = list(poly[mult:])
    if len(rest) > 1:
        lead, const = rest[-1], rest[0]
        cands = set()
        for p in _divisors(abs(const.numerator) * lead.denominator):
            for d in _divisors(abs(lead.numerator) * const.denominator):
                cands.update({Fraction(p, d), Fraction(-p, d)})
        for c in sorted(cands):
            while len(rest) > 1 and sum(a * c**k for k, a in enumerate(rest)) == 0:
                roots.append(str(c))
                rest, _ = poly_divmod(rest, [-c, 1])
        if len(rest) > 1:
            roots.append(f"roots of {poly_str(rest, 'eps')}")
    return roots


def _divisors(n):
    n = max(n, 1)
    return [d for d in range(1, n + 1) if n % d == 0] if n < 10**6 else [1, n]


def apply_operator(op, f):
    """Image of ``f`` (tagged z) under the operator, at ``f``'s truncation."""
    if f.var != "z":
        raise SeriesError("Picard-Fuchs operators act on z-series")
    out = None
    for power, coeffs in op.terms:
        acc = None
        for c in reversed(coeffs):
            acc = f * c if acc is None else theta(acc) + f * c
        term = acc.shift(power)
        out = term if out is None else out + term
    return out


@dataclass(frozen=True)
class FrobeniusBasis:
    """Period solutions ``phi^k`` at the MUM point, ``phi^k = sum_i log(z)^i/i! * A_{k-i}``."""

    operator: PFOperator
    prec: int
    holomorphic: tuple = field(repr=False)  # A_0, A_1, ... (log-free z-series)

    @property
    def solutions(self):
        logz = log_var("z")
        sols = []
        for k in range(len(self.holomorphic)):
            acc = None
            power = LaurentLogSeries([[1]], 0, None, "z")
            for i in range(k + 1):
                term = self.holomorphic[k - i] * power * Fraction(1, factorial(i))
                acc = term if acc is None else acc + term
                power = power * logz
            sols.append(acc)
        return sols

    @property
    def phi0(self):
        return self.holomorphic[0]


def frobenius_mum(op, N):
    """Frobenius basis to order ``z**N`` at the MUM point ``z = 0``.

    The coefficients ``a_n(eps)`` of ``sum a_n(eps) z**(n+eps)`` solve the
    recurrence ``Q_0(n+eps) a_n = -sum_j Q_j(n-j+eps) a_{n-j}`` in jets of
    order r; expanding ``z**eps`` gives the log solutions.
    """
    if N < 1:
        raise OperatorError("truncation order must be at least 1")
    r = _mum_order(op)
    q0 = op.q(0)
    higher = [(p, c) for p, c in op.terms if p > 0]
    a = [EpsJet.constant(1, r)]
    for n in range(1, N + 1):
        acc = EpsJet.constant(0, r)
        for p, coeffs in higher:
            if p <= n:
                acc = acc + EpsJet.eval_poly(coeffs, n - p, r) * a[n - p]
        denom = EpsJet.eval_poly(q0, n, r)
        if not denom.coeffs[0]:
            raise OperatorError(f"resonance at n={n}: Q_0(n) = 0")
        a.append(-acc / denom)
    holo = tuple(
        LaurentLogSeries([[a[n].coeffs[k] for n in range(N + 1)]], 0, N, "z") for k in range(r))
    return FrobeniusBasis(op, N, holo)
