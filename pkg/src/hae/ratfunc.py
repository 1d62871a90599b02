"""Dense univariate polynomials and rational functions over Q.

Polynomials are lists of :class:`~fractions.Fraction` coefficients in
increasing degree.  Only what the geometry configs need is provided.
"""

from fractions import Fraction

from .series import LaurentLogSeries


def parse_rational(text):
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"cannot read {text!r} as a rational; use a 'p/q' string")


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def poly_trim(p):
    p = [Fraction(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_pow(a, n):
    out = [Fraction(1)]
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def poly_divmod(a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] / b[-1]
        quot[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] -= c * y
        rem = poly_trim(rem)
    return poly_trim(quot), rem


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_str(p, var="z"):
    terms = []
    for k, c in enumerate(p):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        terms.append(f"{format_rational(c)}*{mono}" if mono else format_rational(c))
    return " + ".join(terms) if terms else "0"


class RationalFunction:
    """``num(z) / den(z)`` with exact coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num, den = poly_trim(num), poly_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        # monic-ish normalization: make the lowest nonzero denominator coefficient 1
        lead = next(c for c in den if c)
        self.num = [c / lead for c in num]
        self.den = [c / lead for c in den]

    @classmethod
    def constant(cls, c):
        return cls([parse_rational(c)])

    @classmethod
    def from_config(cls, spec):
        """Read ``{"num": [...], "den": [...]}`` or a bare rational string."""
        if isinstance(spec, dict):
            num = [parse_rational(c) for c in spec.get("num", [])]
            den = [parse_rational(c) for c in spec.get("den", ["1"])]
            return cls(num, den)
        return cls.constant(spec)

    def to_config(self):
        return {"num": [format_rational(c) for c in self.num],
                "den": [format_rational(c) for c in self.den]}

    @property
    def is_zero(self):
        return not self.num

    def __call__(self, x):
        return poly_eval(self.num, x) / poly_eval(self.den, x)

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other)
        return RationalFunction(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den))

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            return RationalFunction([c * Fraction(other) for c in self.num], self.den)
        return RationalFunction(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def to_series(self, prec, var="z"):
        """Laurent expansion at the origin, known up to ``var**prec``."""
        if not self.num:
            return LaurentLogSeries([[]], 0, prec, var)
        den = list(self.den)
        shift = 0
        while not den[0]:
            den.pop(0)
            shift += 1
        num = LaurentLogSeries([self.num], 0, None, var)
        d = LaurentLogSeries([den], 0, prec + shift, var)
        out = (num.truncate(prec + shift) * d.inverse()).shift(-shift)
        return out.truncate(prec) if out.prec is not None and out.prec > prec else out

    def __repr__(self):
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return poly_mul(self.num, other.den) == poly_mul(other.num, self.den)
