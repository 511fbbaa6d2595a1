"""
Many dimensions: the wedge product of frequencies and phases
============================================================

With N underdamped axes every phase advances as phi_k = -omega_k t + beta_k.
Any combination omega_i phi_j - omega_j phi_i cancels the time dependence,
so the antisymmetric table omega ^ phi holds N(N-1)/2 constants.
"""

import numpy as np

from oscinv import OscParams, sample_exact
from oscinv import invariantsnd as nd

params = OscParams([1.0, np.sqrt(2.0), np.sqrt(3.0)], gamma=0.05)
traj = sample_exact(params, [1.0, -0.5, 0.3], [0.2, 0.9, -1.1], dt=0.02, n_steps=1000)
modes = nd.track_modes(params, traj.u, traj.v, dt=traj.dt)
wc = nd.wedge_constants(modes)

np.set_printoptions(precision=6, suppress=True)
print("C at t = 0:\n", wc.table[0])
print("spread of each independent entry:", np.ptp(wc.independent(), axis=0))

###############################################################################
# The same table written as phi ^ phi_dot, with phi_dot taken from the
# equation of motion rather than from differencing the samples.

onshell = nd.wedge_onshell(modes)
print("phi_dot / omega at t = 0:", nd.phase_rate(modes)[0] / modes.omega)
print("phi ^ phi_dot at t = 0:\n", onshell[0])
