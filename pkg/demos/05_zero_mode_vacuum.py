"""The zero-mode vacuum: a quadrature eigenstate, not a Fock-like state.

The collective coordinate p = a0 + a0^dag annihilates the zero-mode factor
of the vacuum in the shifted sense ((A0 + A0^dag) - 2 sqrt(N0)) |vac> = 0,
i.e. the state is a position eigenstate of the condensate quadrature at
x = sqrt(2 N0). Its number-basis coefficients are oscillator eigenfunctions
evaluated at that point, and the state is delta normalized: the partial
norms grow without bound instead of converging.
"""

import numpy as np

from bdgz import hermite_function_values, zero_mode_vacuum

n0 = 2.0
n_max = 64
zmv = zero_mode_vacuum(n0, n_max)

print(f"N0 = {n0}, n_max = {n_max}")
print(f"phase convention selected : {zmv.phase_convention}")
print(f"quadrature residual       : {zmv.quadrature_residual:.3e}")
print(f"delta normalized          : {zmv.delta_normalized}")

psi = hermite_function_values(n_max, np.sqrt(2 * n0))
print("\n  n    c_n              psi_n(sqrt(2 N0))")
for n in range(8):
    print(f"  {n}   {zmv.coefficients[n].real:+.12f}   {psi[n]:+.12f}")

print("\npartial norms (no convergence, the state is an improper eigenstate):")
for m in (8, 16, 32, 48, 63):
    print(f"  sum_(n<={m:2d}) |c_n|^2 = {zmv.partial_norms[m]:.6f}")

# the recurrence the coefficients satisfy, row by row
print("\nrecurrence residual rows |sqrt(m+1) c_(m+1) + sqrt(m) c_(m-1) - 2 sqrt(N0) c_m|:")
c = zmv.coefficients.real
for m in (0, 5, 20, 50):
    row = np.sqrt(m + 1) * c[m + 1] - 2 * np.sqrt(n0) * c[m]
    if m > 0:
        row += np.sqrt(m) * c[m - 1]
    print(f"  m = {m:2d}: {abs(row):.3e}")

# at N0 = 0 the state is the even quadrature eigenstate at the origin
origin = zero_mode_vacuum(0.0, 16)
print(f"\nN0 = 0: odd coefficients vanish "
      f"(max |c_odd| = {np.max(np.abs(origin.coefficients[1::2])):.1e}), "
      f"residual = {origin.quadrature_residual:.1e}")
