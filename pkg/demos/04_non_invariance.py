"""The critical pair norm is not conserved by the cubic flow.

Along a solution the derivative of ||u||^2_{H^1/2} + ||u_t||^2_{H^-1/2}
equals 2 sigma <u_t, u^3> in H^{-1/2}. The formula is compared with a
Richardson-extrapolated centered difference of the norm itself.
"""

import numpy as np

from nlw_strichartz.noninv import dt_norm_fd, dt_norm_formula, snapshot
from nlw_strichartz.picard import SolverConfig, solve

t0 = 0.25
print(" sigma  theta   delta   formula          difference       rel err")
for sigma in (1, -1):
    for theta in (0.0, np.pi / 4, np.pi / 2):
        delta = 0.3
        field = solve(None, SolverConfig(sigma=sigma, delta=delta, theta=theta)).field
        formula = dt_norm_formula(snapshot(field, t0), sigma)
        fd = dt_norm_fd(theta, sigma, delta, t0, field=field)
        print(f"  {sigma:+d}   {theta:5.3f}   {delta:.1f}   {formula:+.8e}  {fd:+.8e}  "
              f"{abs(fd / formula - 1):.1e}")

linear = solve(None, SolverConfig(sigma=0, delta=0.3, theta=np.pi / 4)).field
print(f"\nlinear flow: finite difference {dt_norm_fd(np.pi / 4, 0, 0.3, t0, field=linear):.1e}")
