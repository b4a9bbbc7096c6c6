"""Canonical products over lattice zero families: ln M against N_Z and the
counting-function bound, plus a fitted order."""
import numpy as np

from growthlab import kernel, products, radial
from growthlab.points import integral_count
from growthlab.profile import log_grid

for kind, cutoff, p in (("integers", 2000.0, 2.0), ("squares", 1e6, 1.0), ("gaussian", 40.0, 3.0)):
    f = products.build_from_family(kind, cutoff, p)
    Z = f.zero_set
    radii = np.array([0.5, 2.0, 8.0])
    lnM = np.array([radial.max_modulus(f, r) for r in radii])
    NZ = integral_count(Z, radii) + 0.0
    bound = kernel.theorem2_bound(Z, p, radii).values
    print(f"{kind}: {Z.total} zeros, genus {f.genus}")  # squares at p = 1: the bound is attained
    for r, a, b, c in zip(radii, NZ, lnM, bound):
        print(f"  r={r:5.1f}  N_Z={a:9.4f}  lnM={b:9.4f}  bound={c:9.4f}")

sq = products.build_from_family("squares", 1e8, 1.0)
est = radial.estimate_order_type(radial.max_modulus_profile(sq, log_grid(1.0, 1e4)))
print(f"zeros at k^2: fitted order {est.order:.3f} (exact 1/2)")
