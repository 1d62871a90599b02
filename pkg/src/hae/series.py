"""
Truncated formal series over the rationals.

A :class:`LaurentLogSeries` is a finite sum ``sum_j (log v)^j * f_j(v)`` where
each ``f_j`` is a Laurent series in the tagged variable ``v`` (``"z"`` or
``"q"``) with a bounded pole order.  Every series carries the highest exponent
it knows (``prec``); ``prec is None`` marks an exact Laurent polynomial.
Operations never report coefficients past the precision they can justify.

Ordinary power series (no poles, no logs) are the same class; use
:func:`series` to build them.
"""

import hashlib
from fractions import Fraction
from math import comb

__all__ = [
    "LaurentLogSeries",
    "EpsJet",
    "SeriesError",
    "series",
    "monomial",
    "log_var",
    "series_exp",
    "series_log",
    "series_revert",
    "compose",
    "theta",
    "derivative",
    "bernoulli",
    "to_record",
    "from_record",
]

VARIABLES = ("z", "q")


class SeriesError(ValueError):
    """Raised for ill-posed series operations."""


def _rat(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _min_prec(*values):
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


class LaurentLogSeries:
    """Immutable truncated Laurent series with formal log terms.

    ``parts[j][i]`` is the coefficient of ``v**(start + i) * (log v)**j``.
    """

    __slots__ = ("var", "start", "prec", "parts")

    def __init__(self, parts, start=0, prec=None, var="z"):
        if var not in VARIABLES:
            raise SeriesError(f"unknown variable tag {var!r}")
        parts = [[_rat(c) for c in p] for p in parts] or [[]]
        if prec is not None:
            width = prec - start + 1
            if width < 0:
                # nothing known at or below `start`
                start, width = prec + 1, 0
            parts = [(p + [Fraction(0)] * width)[:width] for p in parts]
        else:
            width = max(len(p) for p in parts)
            parts = [p + [Fraction(0)] * (width - len(p)) for p in parts]
        # minimal log degree
        while len(parts) > 1 and not any(parts[-1]):
            parts.pop()
        # minimal pole order
        while start < 0 and parts[0] and not any(p[0] for p in parts):
            parts = [p[1:] for p in parts]
            start += 1
        if prec is None:
            while parts[0] and not any(p[-1] for p in parts):
                parts = [p[:-1] for p in parts]
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "parts", tuple(tuple(p) for p in parts))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentLogSeries is immutable")

    # -- shape ---------------------------------------------------------------

    @property
    def pole_order(self):
        return max(0, -self.start)

    @property
    def log_degree(self):
        return len(self.parts) - 1

    @property
    def is_exact(self):
        return self.prec is None

    @property
    def is_power_series(self):
        return self.log_degree == 0 and self.start >= 0

    @property
    def valuation(self):
        """Lowest exponent carrying a nonzero coefficient.

        A truncated zero series has valuation ``prec + 1``; the exact zero has
        valuation ``None``.
        """
        width = len(self.parts[0])
        for i in range(width):
            if any(p[i] for p in self.parts):
                return self.start + i
        return None if self.prec is None else self.prec + 1

    def coeff(self, n, log_power=0):
        """Coefficient of ``v**n (log v)**log_power``."""
        if self.prec is not None and n > self.prec:
            raise SeriesError(f"coefficient {n} exceeds truncation {self.prec}")
        if log_power > self.log_degree or log_power < 0:
            return Fraction(0)
        i = n - self.start
        part = self.parts[log_power]
        if i < 0 or i >= len(part):
            return Fraction(0)
        return part[i]

    def coefficients(self, upto=None, log_power=0):
        """Dense list of coefficients for exponents ``0..upto`` (power series view)."""
        if upto is None:
            if self.prec is None:
                upto = self.start + len(self.parts[0]) - 1
            else:
                upto = self.prec
        return [self.coeff(n, log_power) for n in range(0, upto + 1)]

    def part(self, j):
        """The log-free series multiplying ``(log v)**j``."""
        if j > self.log_degree:
            return LaurentLogSeries([[]], 0, self.prec, self.var)
        return LaurentLogSeries([list(self.parts[j])], self.start, self.prec, self.var)

    def truncate(self, prec):
        """Forget everything above exponent ``prec``."""
        if self.prec is not None and prec > self.prec:
            raise SeriesError(f"cannot extend truncation {self.prec} to {prec}")
        return LaurentLogSeries([list(p) for p in self.parts], self.start, prec, self.var)

    def shift(self, k):
        """Multiply by ``v**k`` (explicit Laurent shift)."""
        prec = None if self.prec is None else self.prec + k
        return LaurentLogSeries([list(p) for p in self.parts], self.start + k, prec, self.var)

    def with_var(self, var):
        return LaurentLogSeries([list(p) for p in self.parts], self.start, self.prec, var)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentLogSeries):
            if other.var != self.var:
                raise SeriesError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentLogSeries([[other]], 0, None, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = _min_prec(self.prec, other.prec)
        start = min(self.start, other.start)
        if prec is None:
            stop = max(self.start + len(self.parts[0]), other.start + len(other.parts[0]))
        else:
            stop = prec + 1
        if stop < start:
            return LaurentLogSeries([[]], 0, prec, self.var)
        degree = max(self.log_degree, other.log_degree)
        parts = []
        for j in range(degree + 1):
            row = []
            for n in range(start, stop):
                row.append(self._get(n, j) + other._get(n, j))
            parts.append(row)
        return LaurentLogSeries(parts, start, prec, self.var)

    __radd__ = __add__

    def _get(self, n, j):
        if j > self.log_degree:
            return Fraction(0)
        i = n - self.start
        part = self.parts[j]
        if 0 <= i < len(part):
            return part[i]
        return Fraction(0)

    def __neg__(self):
        return LaurentLogSeries([[-c for c in p] for p in self.parts], self.start, self.prec, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _rat(c)
        return LaurentLogSeries([[c * x for x in p] for p in self.parts], self.start, self.prec, self.var)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        va, vb = self.valuation, other.valuation
        if va is None or vb is None:
            # an exact zero factor
            return LaurentLogSeries([[]], 0, None, self.var)
        prec = _min_prec(
            None if self.prec is None else self.prec + vb,
            None if other.prec is None else other.prec + va,
        )
        start = self.start + other.start
        if prec is None:
            stop = start + len(self.parts[0]) + len(other.parts[0]) - 1
        else:
            stop = prec + 1
        width = max(0, stop - start)
        parts = [[Fraction(0)] * width for _ in range(self.log_degree + other.log_degree + 1)]
        for ja, pa in enumerate(self.parts):
            for jb, pb in enumerate(other.parts):
                out = parts[ja + jb]
                for ia, ca in enumerate(pa):
                    if not ca:
                        continue
                    limit = min(len(pb), width - ia)
                    for ib in range(limit):
                        cb = pb[ib]
                        if cb:
                            out[ia + ib] += ca * cb
        return LaurentLogSeries(parts, start, prec, self.var)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse of a log-free series with nonzero constant term."""
        if self.log_degree > 0 or self.start < 0 or not self.coeff(0):
            raise SeriesError("non-invertible leading coefficient")
        a = self.parts[0]
        prec = self.prec
        if prec is None:
            if len(a) == 1:
                return LaurentLogSeries([[1 / a[0]]], 0, None, self.var)
            raise SeriesError("inverse of a non-monomial polynomial needs a truncation; call truncate() first")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, prec + 1):
            acc = Fraction(0)
            for k in range(1, min(n, len(a) - 1) + 1):
                if a[k]:
                    acc += a[k] * out[n - k]
            out.append(-acc * inv0)
        return LaurentLogSeries([out], 0, prec, self.var)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / _rat(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.log_degree > 0 or other.start < 0 or not other.coeff(0):
            raise SeriesError("non-invertible leading coefficient")
        if other.prec is None and len(other.parts[0]) > 1:
            # exact divisor: the quotient is known as far as the dividend is
            va = self.valuation
            if va is None:
                return self
            if self.prec is None:
                raise SeriesError("exact division by a polynomial needs a truncation")
            other = other.truncate(max(self.prec - va, 0))
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentLogSeries([[1]], 0, None, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------------

    def equals(self, other, upto=None):
        """Coefficient-wise equality up to the common truncation."""
        other = self._coerce(other)
        prec = _min_prec(self.prec, other.prec, upto)
        diff = self - other
        if prec is not None and diff.prec != prec:
            diff = diff.truncate(prec)
        return all(not c for p in diff.parts for c in p)

    def __eq__(self, other):
        if not isinstance(other, LaurentLogSeries):
            return NotImplemented
        return (self.var, self.start, self.prec, self.parts) == (
            other.var, other.start, other.prec, other.parts)

    def __hash__(self):
        return hash((self.var, self.start, self.prec, self.parts))

    def __repr__(self):
        terms = []
        for j, p in enumerate(self.parts):
            for i, c in enumerate(p):
                if not c:
                    continue
                n = self.start + i
                mono = "" if n == 0 else (self.var if n == 1 else f"{self.var}^{n}")
                if j:
                    logt = f"log({self.var})" + (f"^{j}" if j > 1 else "")
                    mono = f"{mono}*{logt}" if mono else logt
                terms.append(f"{c}*{mono}" if mono else str(c))
        body = " + ".join(terms) if terms else "0"
        tail = "" if self.prec is None else f" + O({self.var}^{self.prec + 1})"
        return body + tail

    # -- evaluation helpers --------------------------------------------------

    def to_power_series(self):
        """Return self if it has no pole or log part; raise otherwise."""
        if not self.is_power_series:
            raise SeriesError("series has a pole or log part")
        return self


# -- constructors -------------------------------------------------------------

def series(coeffs, var="z", prec=None):
    """Power series ``sum coeffs[n] v**n``.

    ``prec=None`` treats ``coeffs`` as an exact polynomial; otherwise the
    series is known up to ``v**prec``.
    """
    return LaurentLogSeries([list(coeffs)], 0, prec, var)


def monomial(n, var="z", c=1):
    """Exact ``c * v**n``."""
    return LaurentLogSeries([[c]], n, None, var)


def log_var(var="z"):
    """Exact formal symbol ``log v``."""
    return LaurentLogSeries([[], [1]], 0, None, var)


# -- functional calculus ------------------------------------------------------

def _power_coeffs(f, what):
    if not isinstance(f, LaurentLogSeries) or not f.is_power_series:
        raise SeriesError(f"{what} needs a power series")
    if f.prec is None:
        raise SeriesError(f"{what} needs a truncated series")
    return f.coefficients()


def series_exp(f):
    """Formal ``exp(f)`` for ``f(0) = 0``."""
    a = _power_coeffs(f, "exp")
    if a[0]:
        raise SeriesError("exp requires zero constant term")
    N = f.prec
    g = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if a[k]:
                acc += k * a[k] * g[n - k]
        g[n] = acc / n
    return series(g, f.var, N)


def series_log(f):
    """Formal ``log(f)`` for ``f(0) = 1``."""
    a = _power_coeffs(f, "log")
    if a[0] != 1:
        raise SeriesError("log requires constant term 1")
    N = f.prec
    g = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        acc = n * a[n]
        for k in range(1, n):
            if g[k] and a[n - k]:
                acc -= k * g[k] * a[n - k]
        g[n] = acc / n
    return series(g, f.var, N)


def series_revert(f, var=None):
    """Compositional inverse ``g`` with ``f(g(w)) = w``.

    Uses Lagrange inversion: ``[w^n] g = (1/n) [u^{n-1}] (u/f(u))^n``.  The
    result is tagged ``var`` (defaults to the other variable of the pair z/q).
    """
    a = _power_coeffs(f, "reversion")
    if a[0]:
        raise SeriesError("reversion requires f(0) = 0")
    if len(a) < 2 or not a[1]:
        raise SeriesError("reversion requires an invertible linear coefficient")
    if var is None:
        var = "q" if f.var == "z" else "z"
    N = f.prec
    # h = u / f(u), known to order N - 1
    h = series(a[1:], f.var, N - 1).inverse()
    g = [Fraction(0)] * (N + 1)
    power = series([1], f.var, N - 1)
    for n in range(1, N + 1):
        power = power * h
        g[n] = power.coeff(n - 1) / n
    return series(g, var, N)


def compose(f, g, prec=None):
    """Substitute ``g`` (valuation >= 1, log free) for the variable of ``f``.

    ``f`` may carry a pole but no log part.  The result is tagged ``g.var``
    and is known up to the highest order both truncations support (capped at
    ``prec`` if given).
    """
    if f.log_degree > 0:
        raise SeriesError("composition of log series is not supported")
    if g.log_degree > 0 or g.start < 0 or g.coeff(0):
        raise SeriesError("inner series must vanish at the origin")
    vg = g.valuation
    if vg is None or (g.prec is not None and vg > g.prec):
        raise SeriesError("inner series has no known leading term")
    terms = [(f.start + i, c) for i, c in enumerate(f.parts[0]) if c]
    target = prec
    if f.prec is not None:
        target = _min_prec(target, (f.prec + 1) * vg - 1)
    nonconst = [n for n, _ in terms if n]
    if g.prec is not None and nonconst:
        target = _min_prec(target, vg * (min(nonconst) - 1) + g.prec)
    lowest = min((n for n, _ in terms), default=0)
    if target is None and lowest < 0 and len(g.parts[0]) - (vg - g.start) > 1:
        raise SeriesError("composing a pole with an exact polynomial needs prec")

    def cut(s):
        if target is not None and (s.prec is None or s.prec > target):
            return s.truncate(target)
        return s

    acc = LaurentLogSeries([[]], 0, target, g.var)
    if not terms:
        return acc
    inner = cut(g)
    power = LaurentLogSeries([[1]], 0, None, g.var)
    coeffs = dict(terms)
    for n in range(0, max(coeffs) + 1):
        if n in coeffs:
            acc = acc + power * coeffs[n]
        power = cut(power * inner)
    if lowest < 0:
        u = g.shift(-vg)
        if target is not None:
            need = target + vg * (-lowest)
            if u.prec is None or u.prec > need:
                u = u.truncate(need)
        ginv = u.inverse().shift(-vg)
        power = ginv
        for n in range(-1, lowest - 1, -1):
            if n in coeffs:
                acc = acc + power * coeffs[n]
            power = power * ginv
    return cut(acc)


def theta(f):
    """Euler operator ``v d/dv``; ``theta(log v) = 1``."""
    degree = f.log_degree
    parts = []
    for j in range(degree + 1):
        row = []
        for i, c in enumerate(f.parts[j]):
            n = f.start + i
            val = n * c
            if j + 1 <= degree:
                val += (j + 1) * f.parts[j + 1][i]
            row.append(val)
        parts.append(row)
    return LaurentLogSeries(parts, f.start, f.prec, f.var)


def derivative(f):
    """Plain ``d/dv`` (``theta`` followed by a shift)."""
    return theta(f).shift(-1)


# -- nilpotent jets ----------------------------------------------------------

class EpsJet:
    """Truncated polynomial in a nilpotent ``eps`` with ``eps**order = 0``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order):
        coeffs = [_rat(c) for c in coeffs][:order]
        coeffs += [Fraction(0)] * (order - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, c, order):
        return cls([c], order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = EpsJet.constant(other, self.order)
        return EpsJet([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return EpsJet([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return EpsJet([a * other for a in self.coeffs], self.order)
        k = self.order
        out = [Fraction(0)] * k
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(k - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return EpsJet(out, k)

    __rmul__ = __mul__

    def inverse(self):
        a = self.coeffs
        if not a[0]:
            raise SeriesError("non-invertible leading coefficient")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.order):
            acc = sum((a[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out.append(-acc * inv0)
        return EpsJet(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / _rat(other))
        return self * other.inverse()

    def __eq__(self, other):
        return isinstance(other, EpsJet) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"EpsJet({[str(c) for c in self.coeffs]})"

    @classmethod
    def eval_poly(cls, poly, shift, order):
        """Jet of ``poly(shift + eps)`` (Taylor expansion of a polynomial)."""
        out = [Fraction(0)] * order
        shift = _rat(shift)
        for i in range(order):
            # i-th Taylor coefficient: sum_k poly[k] C(k, i) shift^(k-i)
            acc = Fraction(0)
            for k in range(i, len(poly)):
                if poly[k]:
                    acc += poly[k] * comb(k, i) * shift ** (k - i)
            out[i] = acc
        return cls(out, order)


# -- Bernoulli numbers --------------------------------------------------------

_BERNOULLI = [Fraction(1)]


def bernoulli(n):
    """Exact Bernoulli number ``B_n`` with ``B_1 = -1/2``."""
    if n < 0:
        raise SeriesError("Bernoulli index must be non-negative")
    if n > 1 and n % 2:
        return Fraction(0)
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        acc = sum((comb(m + 1, j) * _BERNOULLI[j] for j in range(m)), Fraction(0))
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]



# -- cache records ------------------------------------------------------------

RECORD_VERSION = 1


def to_record(f):
    """Text record: header lines, one line of p/q tokens per log part, checksum."""
    lines = [f"hae-series {RECORD_VERSION}", f"var {f.var}", f"start {f.start}",
             f"pole_order {f.pole_order}", f"log_degree {f.log_degree}",
             f"prec {'exact' if f.prec is None else f.prec}"]
    for j, p in enumerate(f.parts):
        lines.append(f"part {j} " + " ".join(f"{c.numerator}/{c.denominator}" for c in p))
    body = "\n".join(lines) + "\n"
    return body + f"sha256 {hashlib.sha256(body.encode()).hexdigest()}\n"


def from_record(text):
    """Inverse of :func:`to_record`; raises SeriesError on any corruption."""
    body, sep, tail = text.rpartition("sha256 ")
    if not sep or hashlib.sha256(body.encode()).hexdigest() != tail.strip():
        raise SeriesError("series record checksum mismatch")
    lines = body.splitlines()
    try:
        magic, version = lines[0].split()
        if magic != "hae-series" or int(version) != RECORD_VERSION:
            raise SeriesError(f"unsupported series record version {version}")
        head = dict(line.split(" ", 1) for line in lines[1:6])
        parts = []
        for j, line in enumerate(lines[6:]):
            tag, idx, *coeffs = line.split()
            if tag != "part" or int(idx) != j:
                raise SeriesError("malformed series record")
            parts.append([Fraction(c) for c in coeffs])
        prec = None if head["prec"] == "exact" else int(head["prec"])
        out = LaurentLogSeries(parts, int(head["start"]), prec, head["var"])
    except (KeyError, ValueError, IndexError) as exc:
        raise SeriesError(f"malformed series record: {exc}") from exc
    if out.log_degree != int(head["log_degree"]) or out.pole_order != int(head["pole_order"]):
        raise SeriesError("series record header disagrees with its body")
    return out
