"""
Distances between the initial, final and maximally mixed states
================================================================

Each flip channel (bit, phase, bit-phase) drives the robust four-qubit
state to a different final state.  Here we check that these final states
all sit at the same distance from the initial state and from the
maximally mixed state.
"""

import numpy as np

from qtraj import qlinalg as ql
from qtraj.geometry import final_state_geometry

rho0 = ql.ket_to_dm(ql.hs_state())
summary = final_state_geometry(rho0)

# full pairwise matrices, quantum Jensen-Shannon divergence first
print(summary.labels)
print(np.round(summary.qjsd, 4))
print(np.round(summary.hs_norm, 4))

# the compact four-row table
print(summary.render())

# spread of each row across the three channels; zero means equidistant
for row, (js, hs) in summary.spreads().items():
    print(f"{row:15s} {js:.1e} {hs:.1e}")
