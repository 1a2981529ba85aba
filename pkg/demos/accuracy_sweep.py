"""Fourth-order convergence of the averaged integrator, torus model.

Two sweeps at eps = 2^-6: the macro step H at a fine micro step, then the
micro step h at a fine macro step.  Both error columns should drop by ~16x
per halving until the eps^4 averaging floor shows up.
"""

import numpy as np

from samnls import (
    MACRO_SCHEMES,
    SamConfig,
    SplittingScheme,
    l2_norm_and_error,
    propagate_time,
    sam_integrate,
    stencil,
    torus_nls_1d,
)

eps = 2.0**-6
p = torus_nls_1d(eps)

# reference: fine full-interval splitting over the whole slow horizon
ref, n_ref, _ = propagate_time(p, SplittingScheme(4, 2048), p.initial_state(), p.t_final)
print(f"reference: order-4 splitting, {n_ref} steps, horizon T0/eps = {p.t_final:.1f}")


def sam_error(macro, n, delta=4):
    cfg = SamConfig(p, SplittingScheme(4, n), stencil(delta),
                    MACRO_SCHEMES["rk4"](), macro_count=macro, record_every=macro)
    traj = sam_integrate(cfg)
    _, err = l2_norm_and_error(p.basis, ref, traj.states[-1])
    return err, traj.counters["micro_steps"]


print("\nmacro sweep at fine h = pi/2^8")
print(f"{'eps*H':>12} {'error':>12} {'ratio':>8}")
prev = None
for j in range(4, 9):
    macro = 2 ** (j - 2)          # eps*H = pi/2^j
    err, _ = sam_error(macro, 512)
    ratio = f"{prev / err:8.2f}" if prev else "       -"
    print(f"pi/2^{j:<7} {err:12.3e} {ratio}")
    prev = err

print("\nmicro sweep at fine eps*H = pi/2^10")
print(f"{'h':>12} {'error':>12} {'ratio':>8}")
prev = None
for k in range(4, 8):
    err, _ = sam_error(256, 2 ** (k + 1))   # h = pi/2^k
    ratio = f"{prev / err:8.2f}" if prev else "       -"
    print(f"pi/2^{k:<7} {err:12.3e} {ratio}")
    prev = err

print("\nthe averaging floor itself scales like eps^4:")
for e in (2.0**-5, 2.0**-6):
    pe = torus_nls_1d(e)
    refe, _, _ = propagate_time(pe, SplittingScheme(4, 2048), pe.initial_state(), pe.t_final)
    cfg = SamConfig(pe, SplittingScheme(4, 512), stencil(4),
                    MACRO_SCHEMES["rk4"](), macro_count=64, record_every=64)
    traj = sam_integrate(cfg)
    _, err = l2_norm_and_error(pe.basis, refe, traj.states[-1])
    print(f"  eps = 2^{int(np.log2(e)):d}: plateau error {err:.3e}")
