"""Characteristic of a rational function and the kernel bound built on it."""
import math

import numpy as np

from growthlab import descriptors, kernel, radial
from growthlab.profile import RadialProfile

F = descriptors.parse("quot:poly:1,-1|poly:1,2")
G = descriptors.parse("quot:poly:1,2|poly:1,-1")
for r in (0.5, 1.5, 4.0):
    T, Ti = radial.nevanlinna_T(F, r), radial.nevanlinna_T(G, r)
    print(f"r={r:3.1f}  T(F)={T:.9f}  T(1/F)={Ti:.9f}  difference {T - Ti:+.9f} (ln|F(0)| = {math.log(0.5):+.9f})")

# exp: T(r) = r/pi, and the p = 2 transform of T gives back ln M(r) = r
grid = np.geomspace(0.01, 1e3, 161)
T = RadialProfile.sample(lambda r: radial.nevanlinna_T(descriptors.parse("exp"), r), grid, 0.0)
bound = kernel.theorem3_bound(T.with_power_tail(1.0), 2.0, [1.0, math.pi, 10.0])
print("exp bound from T:", np.round(bound.values, 5), "vs r =", [1.0, round(math.pi, 5), 10.0])
