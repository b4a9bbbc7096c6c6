"""Paley constants: closed form against the kernel quadrature, and how the
bound degrades when p is not the optimal exponent."""
import numpy as np

from growthlab import kernel

print(f"{'rho':>6} {'P(rho)':>12} {'p*':>5} {'quadrature':>12} {'rel err':>9}")
for rho in (0.1, 0.25, 0.4, 0.5, 0.75, 1.0, 2.0, 5.0):
    p = kernel.optimal_p(rho)
    P = kernel.paley_constant(rho)
    q = kernel.kernel_transform(kernel.power_profile(rho), p, 1.0)
    print(f"{rho:6.2f} {P:12.8f} {p:5.1f} {q:12.8f} {abs(q - P) / P:9.1e}")

# for rho = 1 the factor π/sin(π/p) is smallest at p = 2
rho = 1.0
print("\np      factor for rho = 1")
for p in (1.1, 1.5, 2.0, 3.0, 6.0):
    print(f"{p:4.1f}  {kernel.power_bound(kernel.PowerBudget(1.0, rho), p, 1.0):.6f}")
