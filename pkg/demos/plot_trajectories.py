"""
Decoherence trajectories under flip noise
=========================================

Apply the same flip channel to every qubit and follow the entanglement,
the mixedness and the distances to the initial, final and maximally mixed
states as the flip probability grows.
"""

import numpy as np

from qtraj import qlinalg as ql
from qtraj.channels import FLIP_KINDS
from qtraj.geometry import coincidence_check, curves, p_grid, trajectory

grid = p_grid(0, 1, 0.05)
hs = ql.ket_to_dm(ql.hs_state())
ghz = ql.ket_to_dm(ql.ghz_state())

c = curves(trajectory(hs, "bf", grid))
for p, e, s in zip(c["p"][::4], c["entanglement"][::4], c["linear_entropy"][::4]):
    print(f"p={p:.2f}  E={e:.4f}  S_L={s:.4f}")

###############################################################################
# For the robust state the three channels trace out identical curves,
# while GHZ is immune to bit flips along one direction but not the others.

print(coincidence_check(hs, FLIP_KINDS, grid))
print(coincidence_check(ghz, ["bf", "pf"], grid))

# GHZ under phase flips has a closed form
e_ghz = curves(trajectory(ghz, "pf", grid))["entanglement"]
print(np.max(np.abs(e_ghz - (2 / 3) * (1 - grid) ** 4)))

###############################################################################
# Plot the curves if matplotlib is around.

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    for kind in FLIP_KINDS:
        cc = curves(trajectory(hs, kind, grid))
        plt.plot(cc["p"], cc["entanglement"], label=kind.value)
    plt.xlabel("p")
    plt.ylabel("E")
    plt.legend()
    plt.show()
