"""
Entanglement sudden death under depolarizing noise
==================================================

Depolarizing noise makes the state separable at a finite strength.
The threshold and the mixedness reached there are the same for every
state in the local-unitary orbit of the starting state.
"""

import numpy as np

from qtraj import qlinalg as ql
from qtraj.geometry import sudden_death
from qtraj.search import lu_orbit

for variant in ("dep-local", "dep-global"):
    records = [sudden_death(ql.ket_to_dm(psi), variant) for psi in lu_orbit(ql.hs_state(), 10, seed=1)]
    p_star = np.array([r.p_star for r in records])
    s_l = np.array([r.s_l_at_death for r in records])
    print(f"{variant}: p*={p_star.mean():.6f} (spread {np.ptp(p_star):.1e}), "
          f"S_L*={s_l.mean():.6f} (spread {np.ptp(s_l):.1e})")
