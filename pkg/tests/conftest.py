import pytest

from hae.amplitudes import build_pipeline, genus1_amplitude, gv_invert, propagator_limits
from hae.config import load_geometry


class Setup:
    def __init__(self, name, order):
        self.geom, self.raw = load_geometry(name)
        self.p = build_pipeline(self.geom, order)
        g = self.geom
        self.t0 = gv_invert(0, self.p.yuk.K_ttt, g.kappa, q_sign=g.q_sign, degree=order)
        self.a1 = genus1_amplitude(g, self.p.basis, self.p.mm, self.p.conn)
        self.t1 = gv_invert(1, self.a1.series, genus0=self.t0, q_sign=g.q_sign, degree=order)
        self.props = propagator_limits(g, self.p.conn, self.p.yuk)


@pytest.fixture(scope="session")
def quintic():
    return Setup("quintic", 12)


@pytest.fixture(scope="session")
def local_p2():
    return Setup("local-p2", 12)
