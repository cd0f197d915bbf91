"""Measured differencing errors against the rho-scanned certified bounds:
the bound tracks the error's exponential decay while staying above it.

Run:  python demos/05_bounds_vs_errors.py     (about half a minute)
"""

import math

from gegenspec import GAUSS
from gegenspec.experiments import (
    RHO_SUP_UNIT_POLES,
    TEST_FUNCTIONS,
    measure_diff_error,
)
from gegenspec.bounds import minimize_bound_on_grid, rho_scan_grid, scan_sups

fn = TEST_FUNCTIONS["runge1"]
lam = 0.5

# the sup of |u| on each candidate ellipse depends only on rho: scan once
rhos = rho_scan_grid(1.0, RHO_SUP_UNIT_POLES, 2000)
sups, skipped = scan_sups(fn.u, rhos, 2048)

print("Gauss differencing of 1/(1+x^2), lambda = 0.5")
print("  n    measured error   scanned bound    rho*     bound/error")
for n in range(8, 68, 8):
    err, backend = measure_diff_error(lam, n, GAUSS, fn)
    rho_star, bd = minimize_bound_on_grid(lam, n, "T42", rhos, sups, skipped)
    star = "*" if backend == "mpmath" else " "
    print(f"  {n:2d}{star}  {err:.6e}    {bd.total:.6e}   {rho_star:.4f}   {bd.total / err:9.1f}")

print("""
rows marked * were measured in extended precision: beyond n ~ 45 the true
error lives below the double-precision noise floor (~n^2 * 2e-16), while
the certified bound keeps shrinking like n^3.5 (1+sqrt(2))^-n.

the minimizing radius creeps toward 1+sqrt(2) ~ 2.414: larger ellipses decay
faster but inflate the boundary sup as the poles at +-i close in.""")
print(f"critical radius: 1 + sqrt(2) = {1 + math.sqrt(2):.6f}")
