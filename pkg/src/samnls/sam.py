"""Stroboscopic averaging: macro Runge-Kutta over a finite-difference
approximation of the averaged vector field.

The averaged field at u is recovered from whole-period micro propagations of
the original equation,

    F_h(u) = (1/(period * eps_eff)) * sum_m w_m * sign^|m| * (S_{mh})(u),

where S_{mh} is the splitting propagation over m periods (negative m runs
backward), w are central difference weights of order delta in {2, 4, 8}, and
sign accounts for models whose free flow is anti-periodic over one period.
Legs are chained: the m-period state continues from the (m-1)-period one, and
forward/backward rows share each FFT through a two-row block.
"""

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .core import StateVector, Trajectory
from .splitting import MicroPropagator, SplittingScheme

_CENTRAL_WEIGHTS = {
    2: {1: Fraction(1, 2)},
    4: {1: Fraction(2, 3), 2: Fraction(-1, 12)},
    8: {1: Fraction(4, 5), 2: Fraction(-1, 5), 3: Fraction(4, 105), 4: Fraction(-1, 280)},
}


@dataclass(frozen=True)
class StencilSpec:
    """Central difference stencil for the averaged field, order delta."""

    delta: int
    offsets: tuple
    weights: tuple

    @property
    def max_offset(self):
        return max(abs(m) for m in self.offsets)


def stencil(delta):
    if delta not in _CENTRAL_WEIGHTS:
        raise ValueError("delta must be one of 2, 4, 8")
    w = _CENTRAL_WEIGHTS[delta]
    offsets = sorted(list(-m for m in w) + list(w))
    weights = tuple(float(np.sign(m) * w[abs(m)]) for m in offsets)
    return StencilSpec(delta=delta, offsets=tuple(offsets), weights=weights)


@dataclass(frozen=True)
class ButcherTableau:
    scheme_id: str
    a: tuple          # row-major coefficient matrix
    b: tuple
    explicit: bool

    @property
    def stages(self):
        return len(self.b)


def rk2():
    """Explicit midpoint rule (order 2)."""
    return ButcherTableau("rk2", ((0.0, 0.0), (0.5, 0.0)), (0.0, 1.0), True)


def rk4():
    """Classical order-4 Runge-Kutta."""
    a = (
        (0.0, 0.0, 0.0, 0.0),
        (0.5, 0.0, 0.0, 0.0),
        (0.0, 0.5, 0.0, 0.0),
        (0.0, 0.0, 1.0, 0.0),
    )
    return ButcherTableau("rk4", a, (1 / 6, 1 / 3, 1 / 3, 1 / 6), True)


def implicit_midpoint():
    return ButcherTableau("midpoint", ((0.5,),), (1.0,), False)


MACRO_SCHEMES = {"rk2": rk2, "rk4": rk4, "midpoint": implicit_midpoint}


class MidpointDivergenceError(RuntimeError):
    def __init__(self, residual, iterations):
        super().__init__(
            f"midpoint fixed-point iteration stalled at residual {residual:.3e} "
            f"after {iterations} iterations"
        )
        self.residual = residual
        self.iterations = iterations


@dataclass
class SamConfig:
    """One stroboscopic-averaging run.

    The macro grid is t_final / macro_count; t_final defaults to the model
    horizon t0 / epsilon_eff.  The micro step is period / micro.n_per_period.
    """

    problem: object
    micro: SplittingScheme
    stencil: StencilSpec
    tableau: ButcherTableau
    macro_count: int
    t_final: float | None = None
    fixed_point_tol: float = 1e-12
    max_iters: int = 50
    record_every: int = 1

    def __post_init__(self):
        if self.t_final is None:
            self.t_final = self.problem.t_final
        if self.macro_count < 1:
            raise ValueError("macro_count must be positive")

    @property
    def big_step(self):
        return self.t_final / self.macro_count


class AveragedFieldEvaluator:
    """Callable F_h on raw coefficient arrays, with work counters."""

    def __init__(self, p, micro, stencil_spec):
        self.p = p
        self.stencil = stencil_spec
        self.n = micro.n_per_period
        h = micro.step_size(p.period)
        self.prop = MicroPropagator(p, micro.order, [h, -h])
        scale = 1.0 / (p.period * p.epsilon_eff)
        self.coefs = [
            (m, w * p.strobo_sign ** abs(m) * scale)
            for m, w in zip(stencil_spec.offsets, stencil_spec.weights)
        ]
        self.max_offset = stencil_spec.max_offset
        self.evals = 0

    @property
    def micro_steps(self):
        return self.prop.steps_taken

    def __call__(self, c):
        legs = {}
        block = np.stack([c, c])
        for m in range(1, self.max_offset + 1):
            block = self.prop.run(block, self.n)
            legs[m] = block[0]
            legs[-m] = block[1]
        acc = np.zeros_like(c)
        for m, w in self.coefs:   # ascending offsets: fixed summation order
            acc += w * legs[m]
        self.evals += 1
        return acc


def averaged_field(cfg, u):
    """F_h at a single state (convenience wrapper around the evaluator)."""
    ev = AveragedFieldEvaluator(cfg.problem, cfg.micro, cfg.stencil)
    return StateVector(ev(u.coeffs), cfg.problem.basis)


def _norm(c):
    return float(np.sqrt(np.sum(np.abs(c) ** 2)))


def macro_step_explicit(tableau, field, dt, c):
    """One explicit Runge-Kutta step of u' = F(u) with step dt."""
    ks = []
    for i in range(tableau.stages):
        ui = c
        row = tableau.a[i]
        for j in range(i):
            if row[j] != 0.0:
                ui = ui + (dt * row[j]) * ks[j]
        ks.append(field(ui))
    out = c
    for j, bj in enumerate(tableau.b):
        if bj != 0.0:
            out = out + (dt * bj) * ks[j]
    return out


def macro_step_midpoint(field, dt, c, tol, max_iters):
    """One implicit midpoint step, stage solved by fixed-point iteration."""
    k = field(c)
    residual = np.inf
    best = np.inf
    for _ in range(max_iters):
        k_next = field(c + (0.5 * dt) * k)
        residual = _norm(k_next - k) / max(1.0, _norm(k_next))
        k = k_next
        if residual <= tol:
            return c + dt * k
        # successive field evaluations carry a roundoff floor near 1e-13; a
        # tiny residual that has stopped improving is converged, not stuck
        if residual < 1e-10 and residual > 0.5 * best:
            return c + dt * k
        best = min(best, residual)
    raise MidpointDivergenceError(residual, max_iters)


def sam_integrate(cfg, u0=None):
    """Run the macro integration; returns a Trajectory of stroboscopic states.

    Starts from the model's default state unless u0 is given.  A midpoint
    stage that fails to converge stops the run; the partial trajectory is
    returned with the failure message attached.
    """
    p = cfg.problem
    ev = AveragedFieldEvaluator(p, cfg.micro, cfg.stencil)
    dt = p.epsilon_eff * cfg.big_step
    c = p.psi0.copy() if u0 is None else u0.coeffs.copy()
    traj = Trajectory()
    traj.record(0.0, StateVector(c.copy(), p.basis))
    tic = time.perf_counter()
    for step in range(1, cfg.macro_count + 1):
        try:
            if cfg.tableau.explicit:
                c = macro_step_explicit(cfg.tableau, ev, dt, c)
            else:
                c = macro_step_midpoint(ev, dt, c, cfg.fixed_point_tol, cfg.max_iters)
        except MidpointDivergenceError as exc:
            traj.failure = str(exc)
            break
        if step % cfg.record_every == 0 or step == cfg.macro_count:
            traj.record(step * cfg.big_step, StateVector(c.copy(), p.basis))
    traj.wall_time = time.perf_counter() - tic
    traj.counters = {
        "micro_steps": ev.micro_steps,
        "field_evals": ev.evals,
        "macro_steps": cfg.macro_count if traj.failure is None else step - 1,
    }
    return traj


def post_process(cfg, u_end, t_target):
    """State of the original equation at a non-stroboscopic time t_target.

    u_end is the macro solution at cfg.t_final (>= t_target).  The averaged
    model is integrated backward to the last whole period below t_target,
    then the micro integrator bridges the remainder.
    """
    p = cfg.problem
    period = p.period
    rem = t_target % period
    t_low = t_target - rem
    back = cfg.t_final - t_low
    if back < -1e-12:
        raise ValueError("t_target lies beyond the integrated horizon")
    c = u_end.coeffs.copy()
    if back > 0:
        ev = AveragedFieldEvaluator(p, cfg.micro, cfg.stencil)
        n_back = max(1, int(np.ceil(back / cfg.big_step)))
        dt = -p.epsilon_eff * back / n_back
        for _ in range(n_back):
            if cfg.tableau.explicit:
                c = macro_step_explicit(cfg.tableau, ev, dt, c)
            else:
                c = macro_step_midpoint(ev, dt, c, cfg.fixed_point_tol, cfg.max_iters)
    # unfilter: psi(t_low) differs from u(t_low) by the periodic sign
    m = int(round(t_low / period))
    c = (p.strobo_sign ** m) * c
    if rem > 0:
        h = cfg.micro.step_size(period)
        n_whole = int(rem / h)
        prop = MicroPropagator(p, cfg.micro.order, [h])
        if n_whole:
            c = prop.run(c[None], n_whole)[0]
        h_last = rem - n_whole * h
        if h_last > 1e-14:
            tail = MicroPropagator(p, cfg.micro.order, [h_last])
            c = tail.run(c[None], 1)[0]
    return StateVector(c, p.basis)
