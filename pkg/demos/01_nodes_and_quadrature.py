"""Tour of the node sets: Gauss and Gauss-Lobatto points, quadrature weights,
and the exactness degree of each rule.

Run:  python demos/01_nodes_and_quadrature.py
"""

import numpy as np

from gegenspec import gauss_lobatto_nodes, gauss_nodes, total_mass

lam = 0.5  # Legendre weight

print(f"weight family index lambda = {lam} (weight (1-x^2)^(lambda-1/2))")
print(f"total weight mass = {total_mass(lam):.15g}\n")

ns = gauss_nodes(lam, 4)
print("5-point Gauss rule (zeros of the degree-5 family polynomial):")
for j, (x, w) in enumerate(zip(ns.nodes, ns.quad_weights)):
    print(f"  x_{j} = {x:+.15f}   w_{j} = {w:.15f}")

nl = gauss_lobatto_nodes(lam, 4)
print("\n5-point Lobatto rule (endpoints pinned at -1, 1):")
for j, (x, w) in enumerate(zip(nl.nodes, nl.quad_weights)):
    print(f"  x_{j} = {x:+.15f}   w_{j} = {w:.15f}")

# A Gauss rule with n+1 points integrates weighted polynomials exactly
# through degree 2n+1; the Lobatto rule through 2n-1.  Watch both rules
# digest monomials until they stop being exact.
print("\nmonomial integrals, exact value vs both rules (n = 4):")
print("  m     exact           gauss error     lobatto error")
import math

for m in range(0, 12, 2):
    s = m // 2
    exact = math.exp(
        math.lgamma(s + 0.5) + math.lgamma(lam + 0.5) - math.lgamma(s + lam + 1.0)
    )
    eg = abs(np.dot(ns.quad_weights, ns.nodes ** m) - exact)
    el = abs(np.dot(nl.quad_weights, nl.nodes ** m) - exact)
    print(f"  {m:2d}   {exact:.12f}   {eg:.3e}      {el:.3e}")

print("\nGauss stays exact through m = 9 = 2n+1, Lobatto through m = 7 = 2n-1;")
print("the first inexact even degrees are m = 10 and m = 8 respectively.")
