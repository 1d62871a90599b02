"""Local P2: a non-compact geometry with constant holomorphic period.

The B-field shift shows up as q -> -q, which is why the genus-0 numbers
alternate in sign.
"""

from hae.amplitudes import (build_pipeline, fit_ambiguity, genus1_amplitude, genus2_amplitude,
                            gv_invert, propagator_limits)
from hae.config import load_geometry

N = 10
geom, _ = load_geometry("local-p2")
p = build_pipeline(geom, N)
print("phi0 =", [str(c) for c in p.basis.phi0.coefficients()[:4]], "(constant)")

t0 = gv_invert(0, p.yuk.K_ttt, geom.kappa, q_sign=geom.q_sign, degree=N)
a1 = genus1_amplitude(geom, p.basis, p.mm, p.conn)
t1 = gv_invert(1, a1.series, genus0=t0, q_sign=geom.q_sign, degree=N)
props = propagator_limits(geom, p.conn, p.yuk)
f2 = fit_ambiguity(geom, p, props=props, amp1=a1)
amp = genus2_amplitude(geom, props, a1, p.yuk, p.conn, f2, p.mm)
t2 = gv_invert(2, amp.series, genus0=t0, q_sign=geom.q_sign, degree=N)

print(f"b = {a1.data['b']}, phi0 exponent {a1.data['phi0_exponent']}")
for t in (t0, t1, t2):
    print(f"n{t.genus}:", [int(t.gv[d]) for d in range(1, 8)])
