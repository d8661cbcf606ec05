"""The broken-phase zero mode: null vector P, partner Q, collective mass.

The condensate mode is not an oscillator: eta*M has a defective zero pair,
and the symplectic spectrum carries a free-particle-like term p^2/(2 mu) in
a collective coordinate instead. In the homogeneous box everything is
closed form:

    P = (1, -1),   Q = (-i/2)(1, 1),   1/mu = g N0 / V,

and the momentum coordinate is a0 + a0^dag. The same structure survives in
a trap, where P keeps the (delta, -delta) pattern in the expansion basis.
"""

import numpy as np

from bdgz import (
    Grid,
    PhysicalParams,
    TrapPotential,
    analytic_zero_mode,
    solve_ground_state,
)
from bdgz.pipeline import excitation_spectrum

length = 2 * np.pi
grid = Grid(points_per_axis=(128,), box_lengths=(length,), boundary="periodic")
params = PhysicalParams(g=1.0, n0=2.0 * length, trap=TrapPotential.zero())  # gn = 2
state = solve_ground_state(params, grid)
gn = params.gn / grid.volume

result = excitation_spectrum(state, f=15)
zm = result.zero_mode
p_ref, q_ref, mass_ref = analytic_zero_mode(gn)

print("homogeneous box, gn =", gn)
print(f"  |omega_0| residual        : {zm.omega0_residual:.3e}")
print(f"  P (first, f-th component) : {zm.p[0]:.6f}, {zm.p[15]:.6f}   (closed form {p_ref[0]:.0f}, {p_ref[1]:.0f})")
print(f"  pattern deviation         : {zm.pattern_deviation:.3e}")
print(f"  Q (same components)       : {zm.q[0]:.6f}, {zm.q[15]:.6f}   (closed form {q_ref[0]:.2f}, {q_ref[1]:.2f})")
print(f"  collective mass mu        : {zm.mass_mu:.12f}   (closed form {mass_ref:.12f})")
print(f"  P^dag eta P               : {zm.p_eta_norm:.3e}   (zero norm)")
print(f"  Q^dag eta P - i           : {zm.pairing_residual:.3e}")

coeff = zm.momentum_coefficients
print(f"  momentum coordinate       : {coeff[0]:.3f} * a0 + {coeff[15]:.3f} * a0^dag")

# trapped case: the (delta, -delta) pattern persists; the mass is not the
# bare B00 coupling because the zero sector mixes with the proper modes,
# but it converges rapidly with the truncation level
print("\nharmonic trap, gN0 = 100:")
tgrid = Grid(points_per_axis=(128,), box_lengths=(16.0,), boundary="periodic")
tparams = PhysicalParams(g=1.0, n0=100.0, trap=TrapPotential.harmonic(1.0))
tstate = solve_ground_state(tparams, tgrid)
for f in (12, 24, 48):
    tzm = excitation_spectrum(tstate, f=f).zero_mode
    print(f"  f = {f:2d}: mass mu = {tzm.mass_mu:.9f}, pattern deviation {tzm.pattern_deviation:.1e}")
