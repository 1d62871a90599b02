"""Curve counts on the quintic threefold, genus 0 to 2.

Walks the pipeline step by step: periods, mirror map, Yukawa coupling,
then the genus-1 and genus-2 amplitudes and their integer invariants.

    python demos/quintic_invariants.py [order]
"""

import sys

from hae.amplitudes import (build_pipeline, fit_ambiguity, genus1_amplitude, genus2_amplitude,
                            gv_invert, propagator_limits)
from hae.config import load_geometry

order = int(sys.argv[1]) if len(sys.argv) > 1 else 10
geom, _ = load_geometry("quintic")
p = build_pipeline(geom, order)

print("holomorphic period  ", [str(c) for c in p.basis.phi0.coefficients()[:5]])
print("mirror map q(z)     ", [str(c) for c in p.mm.q_of_z.coefficients()[:4]])
print("Yukawa K_ttt        ", [str(c) for c in p.yuk.K_ttt.coefficients()[:3]])

t0 = gv_invert(0, p.yuk.K_ttt, geom.kappa, degree=order)
print("\ngenus 0:", [int(t0.gv[d]) for d in range(1, 6)])

a1 = genus1_amplitude(geom, p.basis, p.mm, p.conn)
t1 = gv_invert(1, a1.series, genus0=t0, degree=order)
print(f"genus 1: b = {a1.data['b']}, constant term {a1.series.coeff(0)}")
print("        ", [int(t1.gv[d]) for d in range(1, 6)])

# the propagator gauge lives in the config; the ambiguity is fitted to
# the constant map term and the vanishing of n2(1), n2(2)
props = propagator_limits(geom, p.conn, p.yuk)
f2 = fit_ambiguity(geom, p, props=props, amp1=a1)
print("\nfitted ambiguity    ", [str(c) for c in f2.coefficients])
print("surplus residuals   ", {k: str(v) for k, v in f2.surplus_residuals.items()})
amp = genus2_amplitude(geom, props, a1, p.yuk, p.conn, f2, p.mm)
t2 = gv_invert(2, amp.series, genus0=t0, degree=order)
print(f"genus 2: constant term {amp.series.coeff(0)}")
print("        ", [int(t2.gv[d]) for d in range(1, 7)])
