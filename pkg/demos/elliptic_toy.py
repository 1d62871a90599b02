"""The elliptic curve as a toy model for holomorphic limits.

E2* = E2 - 3/(pi Im t) is modular but not holomorphic; dropping the Y part
(the constant-term map phi) recovers E2 and turns the modular derivation
into q d/dq.
"""

from hae.quasimodular import (AlmostHolomorphicForm, ahmf_derivation, ahmf_ops, eisenstein,
                              elliptic_genus_one, numeric_anomaly_check, ramanujan_theta)

print("E2 =", [str(c) for c in eisenstein(2, 5).coefficients()])
e = elliptic_genus_one(8)
print(f"genus-1 free energy: {e.log_coeff} log q +", [str(c) for c in e.tail.coefficients()])

E2s, E4 = AlmostHolomorphicForm.generator("E2*"), AlmostHolomorphicForm.generator("E4")
f = E2s * E2s * E4
d = ahmf_derivation(f)
print("\nD(E2*^2 E4) in E2*, E4, E6, Y:", {k: str(v) for k, v in d.e2star_view().items()})
lhs = ahmf_ops(d, None, "phi")
rhs = ramanujan_theta(ahmf_ops(f, None, "phi"))
print("phi(D f) == theta(phi f):", lhs.poly == rhs.poly)

for t in (1j, 0.5 + 2j):
    print(f"anomaly residual at t = {t}: {numeric_anomaly_check(t, 1e-3):.2e}")
