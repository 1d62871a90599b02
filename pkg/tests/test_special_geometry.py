from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from hae.picard_fuchs import frobenius_mum
from hae.series import compose, monomial, series, theta
from hae.special_geometry import (GaussRat, GeometryError, canonical_coordinate,
                                  connection_limits, mirror_map, yukawa)


def test_quintic_mirror_map_low_order(quintic):
    assert quintic.p.mm.q_of_z.coefficients()[:3] == [0, 1, 770]


def test_trivial_mirror_map():
    from hae.picard_fuchs import FrobeniusBasis
    b = FrobeniusBasis(None, 6, (series([1], prec=6), series([0], prec=6)))
    assert mirror_map(b).q_of_z.equals(monomial(1))


@pytest.mark.parametrize("fixture", ["quintic", "local_p2"])
def test_mirror_roundtrip_order_30(fixture, request):
    geom = request.getfixturevalue(fixture).geom
    mm = mirror_map(frobenius_mum(geom.operator, 30))
    assert compose(mm.q_of_z, mm.z_of_q).equals(monomial(1, "q"))
    assert compose(mm.z_of_q, mm.q_of_z).equals(monomial(1, "z"))
    assert mm.z_of_q.prec >= 30


def test_mirror_map_needs_truncation_two(quintic):
    with pytest.raises(GeometryError):
        mirror_map(frobenius_mum(quintic.geom.operator, 1))


def test_quintic_yukawa(quintic):
    y = quintic.p.yuk
    assert y.c == 5
    assert y.K_ttt.coefficients()[:2] == [5, 2875]


def test_local_p2_yukawa(local_p2):
    assert local_p2.p.yuk.K_ttt.coeff(0) == F(-1, 3)


def test_yukawa_rejects_zero_kappa(quintic):
    from dataclasses import replace
    with pytest.raises(GeometryError, match="yukawa normalization impossible"):
        yukawa(replace(quintic.geom, kappa=0), quintic.p.mm)


def test_connection_limits(quintic, local_p2):
    assert quintic.p.conn.K_hol.coeff(0) == -120
    assert not any(local_p2.p.conn.K_hol.parts[0])
    for s in (quintic, local_p2):
        G = s.p.conn.Gamma_hol
        assert G.coeff(-1) == -1
        assert (G + monomial(-1)).start >= 0


def test_connection_limits_is_recomputable(quintic):
    c = connection_limits(quintic.p.basis, quintic.p.mm)
    assert c.K_hol == quintic.p.conn.K_hol


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=21, max_size=21))
def test_theta_q_chain_rule(coeffs):
    """theta_q f(z(q)) = (theta_z f)(z(q)) * theta_q log z."""
    from hae.picard_fuchs import PFOperator
    op = PFOperator(((0, (0, 0, 0, 0, 1)), (1, (-120, -1250, -4375, -6250, -3125))), (1, -3125))
    mm = _quintic_mm(op)
    f = series(coeffs, prec=20)
    lhs = theta(compose(f, mm.z_of_q))
    # theta_q log z = 1/dlog evaluated at z(q)
    rhs = compose(theta(f), mm.z_of_q) * compose(1 / mm.dlog, mm.z_of_q)
    assert lhs.equals(rhs)


_MM = {}


def _quintic_mm(op):
    if "q" not in _MM:
        _MM["q"] = mirror_map(frobenius_mum(op, 20))
    return _MM["q"]


def test_fubini_study_at_origin():
    t = canonical_coordinate("fubini_study", 0)
    for x in (GaussRat(1, 2), GaussRat(F(-3, 7), 5)):
        assert t(x) == x


def test_fubini_study_formula():
    a = GaussRat(F(1, 2), F(-1, 3))
    t = canonical_coordinate("fubini_study", a)
    x = GaussRat(2, 1)
    abar = a.conjugate()
    n = 1 + a.norm()
    assert t(x) == n * n * (x / (1 + x * abar) - a / (1 + a * abar))


@pytest.mark.parametrize("model,a", [("fubini_study", GaussRat(F(2, 3), 1)),
                                     ("poincare", GaussRat(F(1, 5), F(3, 2)))])
def test_canonical_normalization(model, a):
    t = canonical_coordinate(model, a)
    assert t(a) == 0
    assert t.derivative(a) == 1


def test_poincare_limit():
    # with a = x + iY, (t + 2iY)/4 + x -> tau as Y grows; the error is O(1/Y)
    tau = GaussRat(F(1, 3), 2)
    errs = []
    for Y in (10, 100, 1000):
        a = GaussRat(F(1, 7), Y)
        t = canonical_coordinate("poincare", a)
        approx = (t(tau) + GaussRat(0, 2 * Y)) / 4 + a.re
        d = approx - tau
        errs.append(d.norm())
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < F(1, 10 ** 4)


def test_poincare_rejects_real_basepoint():
    with pytest.raises(GeometryError):
        canonical_coordinate("poincare", GaussRat(1, 0))
