"""Independent recomputations by schoolbook arithmetic on coefficient lists.

Nothing here imports the package: periods come from closed-form sums, and
exp, inversion and multicover sums are written out naively.
"""

from fractions import Fraction as F
from math import factorial


def mul(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)]


def inv(a, n):
    out = [F(1) / a[0]]
    for k in range(1, n + 1):
        out.append(-sum(a[i] * out[k - i] for i in range(1, k + 1)) / a[0])
    return out


def exp0(a, n):
    # exp of a series with a[0] = 0 as sum a^k / k!
    out, power = [F(1)] + [F(0)] * n, [F(1)] + [F(0)] * n
    for k in range(1, n + 1):
        power = mul(power, a, n)
        out = [x + y / factorial(k) for x, y in zip(out, power)]
    return out


def compose(f, g, n):
    out, power = [F(0)] * (n + 1), [F(1)] + [F(0)] * n
    for k in range(n + 1):
        out = [x + f[k] * y for x, y in zip(out, power)]
        power = mul(power, g, n)
    return out


def theta(a):
    return [k * c for k, c in enumerate(a)]


def harmonic(n):
    return sum((F(1, k) for k in range(1, n + 1)), F(0))


def periods(which, n):
    if which == "quintic":
        phi0 = [F(factorial(5 * k), factorial(k) ** 5) for k in range(n + 1)]
        a1 = [F(factorial(5 * k), factorial(k) ** 5) * 5 * (harmonic(5 * k) - harmonic(k))
              for k in range(n + 1)]
    else:
        phi0 = [F(1)] + [F(0)] * n
        a1 = [F(0)] + [F(3 * factorial(3 * k - 1), factorial(k) ** 3) for k in range(1, n + 1)]
    return phi0, a1


def genus0_and_1(which, n):
    """(n0, n1, constant term of theta_q F1) for quintic or local P2."""
    if which == "quintic":
        kappa, root, chi, c2, sign = F(5), 3125, -200, 50, 1
    else:
        kappa, root, chi, c2, sign = F(-1, 3), 27, 3, 2, -1
    phi0, a1 = periods(which, n)
    ratio = mul(a1, inv(phi0, n), n)
    dlog = [F(1)] + theta(ratio)[1:]
    # z(q) from z = q exp(-ratio(z)) by fixed-point iteration
    zq = [F(0), F(1)] + [F(0)] * (n - 1)
    for _ in range(n):
        e = exp0(compose([-x for x in ratio], zq, n), n)
        zq = [F(0)] + e[:n]
    disc = [F(1), F(-root)] + [F(0)] * (n - 1)
    d3 = mul(mul(dlog, dlog, n), dlog, n)
    bare = inv(mul(mul(mul(phi0, phi0, n), d3, n), disc, n), n)
    K = compose([kappa / bare[0] * x for x in bare], zq, n)
    n0 = {}
    for d in range(1, n + 1):
        n0[d] = (K[d] * sign ** d - sum(n0[k] * k ** 3 for k in range(1, d) if d % k == 0)) / d ** 3
    b = -1 - F(c2, 12)
    A = (4 - F(chi, 12)) / 2
    idl, iphi, idisc = inv(dlog, n), inv(phi0, n), inv(disc, n)
    th = [-F(1, 2) * x for x in mul(theta(dlog), idl, n)]
    th[0] += F(1, 2) + b / 2
    th = [x - A * y for x, y in zip(th, mul(theta(phi0), iphi, n))]
    th = [x - F(1, 12) * y for x, y in zip(th, mul(theta(disc), idisc, n))]
    F1 = compose(mul(th, idl, n), zq, n)
    n1 = {}
    for d in range(1, n + 1):
        rest = sum(F(1, k) * (n1[d // k] + n0[d // k] / 12) for k in range(2, d + 1) if d % k == 0)
        n1[d] = F1[d] * sign ** d / d - n0[d] / 12 - rest
    return n0, n1, F1[0]
