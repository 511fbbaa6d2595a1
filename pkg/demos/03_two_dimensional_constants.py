"""
Constants of the two-dimensional oscillator
===========================================

Two uncoupled oscillators share the damping gamma. Besides the per-axis
constants there are constants tying the axes together: a phase
combination, a log-ratio of pseudo-energies and, for commensurate
frequencies, polynomials in the state.
"""

import numpy as np

from oscinv import OscParams, sample_exact
from oscinv import invariantsnd as nd

###############################################################################
# Undamped with an irrational frequency ratio. The plain angular momentum
# L = u1 v2 - u2 v1 is not conserved, but its generalization C' is.

params = OscParams([1.0, np.sqrt(2.0)])
traj = sample_exact(params, [1.0, -0.7], [0.4, 0.9], dt=0.01, n_steps=2000)
modes = nd.track_modes(params, traj.u, traj.v, dt=traj.dt)
L = nd.angular_momentum(traj.u, traj.v)
c_prime = nd.generalized_angular_momentum(modes)
print(f"L  ranges over {np.ptp(L):.3f}")
print(f"C' ranges over {np.ptp(c_prime):.1e}")
print(f"C_R = {nd.c_r_undamped(modes)[0]:.6f}  C_I = {nd.c_i_undamped(modes)[0]:.6f}")

###############################################################################
# Damped and anisotropic: C_A and C_B.

params = OscParams([1.0, 1.3], gamma=0.1)
traj = sample_exact(params, [0.8, -0.4], [0.3, 1.1], dt=0.02, n_steps=1000)
modes = nd.track_modes(params, traj.u, traj.v, dt=traj.dt)
print(f"C_A spread {np.ptp(nd.c_a_damped(modes)):.1e}, "
      f"C_B spread {np.ptp(nd.c_b_damped(modes)):.1e}")

###############################################################################
# Frequencies 1:2. The damped frequencies must be in ratio, so omega_k0 is
# chosen as sqrt(omega_k^2 + gamma^2).

g = 0.05
params = OscParams([np.sqrt(1 + g * g), np.sqrt(4 + g * g)], gamma=g)
traj = sample_exact(params, [0.9, -0.5], [0.4, 0.7], dt=0.01, n_steps=1000)
modes = nd.track_modes(params, traj.u, traj.v, dt=traj.dt)
res = nd.commensurate_invariant(modes, 1, 2, omega_bar=1.0)
print(f"polynomial route {res.poly[0]:.9f}, phase route {res.phase[0]:.9f}, "
      f"max gap {np.max(np.abs(res.poly - res.phase)):.1e}")
