"""Channels, closed-form 2x2 SVD, and the U(2) angle parameterization.

Draws Rayleigh channel matrices from the counter-based generator, checks
the analytic SVD against its defining properties, and round-trips Haar
unitaries through their four angles.
"""

import numpy as np

from ris2x2 import (
    RngState,
    angles_from_unitary,
    channel_realizations,
    haar_unitaries,
    unitary_from_angles,
)

state = RngState(seed=2024, stream=0)

print("=== one channel pair ===")
ch = channel_realizations(state, 1)
print("G =\n", np.round(ch.g[0], 4))
print("squared singular values of G:", np.round(ch.svd_g.sigma[0] ** 2, 6))
print("squared singular values of H:", np.round(ch.svd_h.sigma[0] ** 2, 6))

print("\n=== SVD quality over 100k draws ===")
ch = channel_realizations(state, 100_000)
rec = np.einsum("nij,nj,nkj->nik", ch.svd_g.u, ch.svd_g.sigma, np.conjugate(ch.svd_g.v))
rel = np.linalg.norm(rec - ch.g, axis=(1, 2)) / np.linalg.norm(ch.g, axis=(1, 2))
print(f"worst reconstruction error : {rel.max():.3e}")
gram = np.einsum("nki,nkj->nij", np.conjugate(ch.svd_g.v), ch.svd_g.v) - np.eye(2)
print(f"worst V unitarity defect   : {np.abs(gram).max():.3e}")
frob = (ch.svd_g.sigma**2).sum(1) - (np.abs(ch.g) ** 2).sum((1, 2))
print(f"worst Frobenius defect     : {np.abs(frob).max():.3e}")

print("\n=== angle parameterization round trip ===")
s = haar_unitaries(state.child(1), 50_000)
angles = angles_from_unitary(s)
back = unitary_from_angles(angles)
print(f"worst matrix round-trip error: {np.abs(back - s).max():.3e}")
print(
    "theta12 range:",
    f"[{np.min(angles.theta12):.4f}, {np.max(angles.theta12):.4f}]",
    "(should sit inside [0, pi/2])",
)
