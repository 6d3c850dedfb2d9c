"""Sharp constants of the linear and second-order problems.

The linear solution with data v_0 attains the sharp L^4 Strichartz bound,
and the second-order functional S(v_theta) has the closed form
pi^3 (24 cos^2 theta + 5) / 128. Both are recomputed here on the Penrose
square and compared with their closed forms.
"""

import numpy as np

from nlw_strichartz import CONSTANTS, evolve_pair, l4_norm4, square_grid, theta_pair
from nlw_strichartz.functional import (SPHERE_VOLUME, scal, scal_closed_form,
                                       scal_quadrature4)
from nlw_strichartz.penrose import theta_field

field = evolve_pair(theta_pair(0.0), square_grid(96))
norm4 = l4_norm4(field)
print(f"||S v_0||_4^4      = {norm4:.15f}")
print(f"3 pi^3 / 4         = {3 * np.pi**3 / 4:.15f}")
print(f"S0 from quadrature = {norm4 / SPHERE_VOLUME**2:.15f}  (table: {CONSTANTS.s0:.15f})")
print()

print(" theta    closed form      1D rule          Penrose pipeline")
for theta in np.linspace(0.0, np.pi / 2, 5):
    print(f" {theta:5.3f}  {scal_closed_form(theta):.12f}  {scal_quadrature4(theta):.12f}  "
          f"{scal(theta_field(theta, 200)):.12f}")
print()

for sigma in (1, -1):
    print(f"S1({sigma:+d}) = {CONSTANTS.s1(sigma):.10e}")
