"""Mass and energy drift over a very long horizon T0/eps^2.

The averaged field is Hamiltonian up to the stencil error, so a symplectic
macro integrator (implicit midpoint) keeps both invariants bounded, no
drift, at the stencil's own defect level, while RK2 and RK4 drift linearly,
RK2 thousands of times faster.  This is the shortened demo horizon; the
full experiment is `samnls invariants`.
"""

import numpy as np

from samnls import (
    MACRO_SCHEMES,
    SamConfig,
    SplittingScheme,
    energy_torus,
    mass,
    sam_integrate,
    stencil,
    torus_nls_1d,
)

eps = 2.0**-7
p = torus_nls_1d(eps, n_modes=32)
t_final = p.t0 / eps**2 / 4          # quarter horizon keeps the demo quick
macro = 256                           # eps*H = pi/2^5

for scheme_id in ("rk2", "rk4", "midpoint"):
    cfg = SamConfig(p, SplittingScheme(2, 512), stencil(2),
                    MACRO_SCHEMES[scheme_id](), macro_count=macro,
                    t_final=t_final, record_every=32)
    traj = sam_integrate(cfg)
    m0 = mass(p.basis, traj.states[0])
    e0 = energy_torus(p.basis, traj.states[0], eps)
    dm = max(abs(mass(p.basis, s) - m0) for s in traj.states)
    de = max(abs(energy_torus(p.basis, s, eps) - e0) for s in traj.states)
    print(f"{scheme_id:>9}: max |mass drift| {dm:9.2e}   max |energy drift| {de:9.2e}")

print(f"\nhorizon {t_final:.0f} = (T0/eps^2)/4, 256 macro steps, order-2 micro")
print("splitting with the delta=2 stencil; midpoint pays ~6x more field")
print("evaluations per step for its fixed-point solve and buys drift-free")
print("invariants three orders below rk4.")
