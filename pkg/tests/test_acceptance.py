"""End-to-end acceptance checks on the five shipped experiments.

Every test here runs the real harness configuration at desk scale and asserts
one advertised property at its stated tolerance.  The experiment runs are
shared per session; the whole file takes tens of minutes on one core (much
less with a warm reference cache).

Order-fit protocols: the order-4 micro integrator is pre-asymptotic at coarse
steps.  Its error ratio under step halving climbs through ~12, ~10, ~14
before settling at 16, and the frozen error table below shows the very same
signature (6.17e-2/5.50e-3 = 11.2, 5.50e-3/6.15e-4 = 8.9, then 14.3, 15.1).
Slopes in h are therefore measured on the finest clean pair with the
saturation floor removed; slopes in the macro step, where no such effect
exists, pool every pre-saturation point.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from samnls import (
    ExperimentConfig,
    l2_norm,
    make_model,
    run_accuracy_sweep,
    run_efficiency,
    run_invariants_longtime,
    run_mode_evolution,
    run_splitting_table,
)
from samnls.core import StateVector
from samnls.fam import FamFieldEvaluator
from samnls.sam import (
    AveragedFieldEvaluator,
    macro_step_explicit,
    macro_step_midpoint,
    rk2,
    rk4,
    stencil,
)
from samnls.splitting import MicroPropagator, SplittingScheme

PI = math.pi


def _run(runner, experiment):
    report = runner(ExperimentConfig(experiment), threads=1)
    assert not report.failures, report.failures
    return report


@pytest.fixture(scope="session")
def accuracy_rows():
    return _run(run_accuracy_sweep, "accuracy").rows


@pytest.fixture(scope="session")
def table_rows():
    return _run(run_splitting_table, "table").rows


@pytest.fixture(scope="session")
def efficiency_rows():
    return _run(run_efficiency, "efficiency").rows


@pytest.fixture(scope="session")
def invariants_rows():
    return _run(run_invariants_longtime, "invariants").rows


@pytest.fixture(scope="session")
def modes_rows():
    return _run(run_mode_evolution, "modes").rows


# ---------------------------------------------------------------------------
# frozen splitting error tables (two significant digits)

TABLE_TORUS = {
    # (eps, h-exponent j with h = pi/2^j) -> error of the order-4 splitting
    (0.125, 4): 6.17e-2, (0.125, 5): 5.50e-3, (0.125, 6): 6.15e-4, (0.125, 7): 4.31e-5,
    (0.0625, 4): 3.09e-2, (0.0625, 5): 2.63e-3, (0.0625, 6): 2.78e-4, (0.0625, 7): 1.97e-5,
    (0.03125, 4): 1.54e-2, (0.03125, 5): 1.30e-3, (0.03125, 6): 1.35e-4, (0.03125, 7): 9.61e-6,
    (0.015625, 4): 7.71e-3, (0.015625, 5): 6.47e-4, (0.015625, 6): 6.71e-5, (0.015625, 7): 4.78e-6,
}

TABLE_GP = {
    (0.125, 5): 1.16e-4, (0.125, 6): 8.06e-6,
    (0.0625, 5): 6.29e-5, (0.0625, 6): 4.37e-6,
    (0.03125, 5): 3.28e-5, (0.03125, 6): 2.28e-6,
    (0.015625, 5): 1.68e-5, (0.015625, 6): 1.17e-6,
    (0.0078125, 5): 8.47e-6, (0.0078125, 6): 5.89e-7,
}


def _table_lookup(rows, model):
    got = {}
    for m, eps, h, err in rows:
        if m != model:
            continue
        j = round(math.log2(PI / h))
        got[(eps, j)] = err
    return got


def test_splitting_error_table_torus(table_rows):
    """Order-4 Fourier splitting reproduces the frozen torus error table."""
    got = _table_lookup(table_rows, "torus_nls_1d")
    for key, expect in TABLE_TORUS.items():
        assert key in got, f"missing table cell {key}"
        rel = abs(got[key] - expect) / expect
        assert rel < 0.05, f"cell {key}: got {got[key]:.4e}, expected {expect:.2e}"


def test_splitting_error_table_gp(table_rows):
    """Order-4 Hermite splitting reproduces the frozen trap-model table."""
    got = _table_lookup(table_rows, "gross_pitaevskii_1d")
    for key, expect in TABLE_GP.items():
        assert key in got, f"missing table cell {key}"
        rel = abs(got[key] - expect) / expect
        assert rel < 0.05, f"cell {key}: got {got[key]:.4e}, expected {expect:.2e}"


# ---------------------------------------------------------------------------
# averaged-integrator accuracy orders

EPS_SET = [2.0**-5, 2.0**-6, 2.0**-7, 2.0**-8]
FINE_H = 2.0 * PI / 512


def _macro_sweep(rows, eps):
    """(epsH exponent j, error) for the torus macro sweep at one eps."""
    out = {}
    for m, e, H, h, scheme, stl, err in rows:
        if m == "torus_nls_1d" and e == eps and h == FINE_H:
            out[round(math.log2(PI / (H * eps)))] = err
    return out

def _micro_sweep(rows, eps):
    """(steps-per-period exponent b, error) for the torus micro sweep."""
    out = {}
    H_fixed = (PI / 2**10) / eps
    for m, e, H, h, scheme, stl, err in rows:
        if m == "torus_nls_1d" and e == eps and H == H_fixed and h != FINE_H:
            out[round(math.log2(2.0 * PI / h))] = err
    return out


def test_sam_accuracy_orders(accuracy_rows):
    """Fourth order in the macro step and the micro step, plateau ~ eps^4."""
    plateau = {eps: min(_macro_sweep(accuracy_rows, eps).values()) for eps in EPS_SET}

    # macro order: pool every pre-saturation point (error above 8x the
    # saturation floor); the macro term has the same constant for all eps
    xs, ys = [], []
    for eps in EPS_SET:
        for j, err in _macro_sweep(accuracy_rows, eps).items():
            if err > 8.0 * plateau[eps]:
                xs.append(-j)
                ys.append(math.log2(err))
    assert len(xs) >= 3, "not enough pre-saturation macro points"
    slope_H = np.polyfit(xs, ys, 1)[0]
    assert abs(slope_H - 4.0) < 0.3, f"macro slope {slope_H:.3f}, points {sorted(zip(xs, ys))}"

    # micro order: finest clean pair at the smallest sweep eps, with the
    # saturation floor subtracted (the coarse pairs are pre-asymptotic, see
    # the module docstring)
    eps = 2.0**-7
    sweep = _micro_sweep(accuracy_rows, eps)
    b1, b2 = sorted(sweep)[-2:]
    e1 = sweep[b1] - plateau[eps]
    e2 = sweep[b2] - plateau[eps]
    assert e1 > 0 and e2 > 0, (sweep, plateau[eps])
    slope_h = math.log2(e1 / e2) / (b2 - b1)
    assert abs(slope_h - 4.0) < 0.3, f"micro slope {slope_h:.3f} from {sweep}"

    # plateau ~ eps^4 between consecutive saturated eps (saturated = the two
    # smallest-step macro errors differ by < 35%)
    saturated = []
    for eps in EPS_SET:
        sweep = _macro_sweep(accuracy_rows, eps)
        j1, j2 = sorted(sweep)[-2:]
        if sweep[j1] / sweep[j2] < 1.35:
            saturated.append(eps)
    assert len(saturated) >= 2, f"fewer than two saturated eps: {saturated}"
    for e1, e2 in zip(saturated, saturated[1:]):
        ratio = plateau[e1] / plateau[e2]
        assert 16.0 / 1.5 < ratio < 16.0 * 1.5, (
            f"plateau ratio {ratio:.2f} for eps {e1}/{e2}")


def test_superconvergence_exponent(accuracy_rows):
    """At fixed micro step, halving eps halves the micro error within 20%."""
    sweeps = {eps: _micro_sweep(accuracy_rows, eps) for eps in EPS_SET[:3]}
    for b in (5, 6):   # coarse steps, micro error dominant
        for e1, e2 in ((EPS_SET[0], EPS_SET[1]), (EPS_SET[1], EPS_SET[2])):
            ratio = sweeps[e1][b] / sweeps[e2][b]
            assert 1.6 < ratio < 2.4, f"eps ratio {ratio:.3f} at n=2^{b}"


# ---------------------------------------------------------------------------
# work-versus-error efficiency

EPS_EFF = [2.0**-10, 2.0**-12]


def _curve(rows, eps, method):
    pts = sorted((n, err) for m, e, meth, n, err in rows
                 if m == "torus_nls_1d" and e == eps and meth == method)
    assert pts, (eps, method)
    return pts


def test_efficiency_law(efficiency_rows):
    """Envelope cost scales like N^-2 with sqrt(eps) gains; the uniform
    splitting scales like N^-4 and degrades like eps^-3."""
    for eps in EPS_EFF:
        env = _curve(efficiency_rows, eps, "sam")
        (n0, e0), (n1, e1) = env[0], env[-1]
        slope = math.log2(e0 / e1) / math.log2(n1 / n0)
        assert abs(slope - 2.0) < 0.3, f"envelope slope {slope:.3f} at eps={eps}"

        split = _curve(efficiency_rows, eps, "tsfp4")
        (na, ea), (nb, eb) = split[-2], split[-1]
        slope = math.log2(ea / eb) / math.log2(nb / na)
        assert abs(slope - 4.0) < 0.3, f"splitting tail slope {slope:.3f} at eps={eps}"

    # envelope level improves ~ sqrt(eps): the two curves share their N grid
    env_hi = dict(_curve(efficiency_rows, EPS_EFF[0], "sam"))
    env_lo = dict(_curve(efficiency_rows, EPS_EFF[1], "sam"))
    common = sorted(set(env_hi) & set(env_lo))
    assert len(common) >= 3
    level = math.exp(np.mean([math.log(env_hi[n] / env_lo[n]) for n in common]))
    assert 2.0 / 1.4 < level < 2.0 * 1.4, f"envelope level ratio {level:.3f}"

    # splitting level degrades ~ eps^-3: compare at equal N_step, i.e. the
    # same work, on the deepest pair both curves reach
    split_hi = dict(_curve(efficiency_rows, EPS_EFF[0], "tsfp4"))
    split_lo = dict(_curve(efficiency_rows, EPS_EFF[1], "tsfp4"))
    n_star = max(set(split_hi) & set(split_lo))
    ratio = split_lo[n_star] / split_hi[n_star]
    assert 64.0 / 1.6 < ratio < 64.0 * 1.6, (
        f"splitting level ratio {ratio:.2f} at N={n_star}")


# ---------------------------------------------------------------------------
# long-horizon invariant behaviour

def _traces(rows):
    out = {}
    for m, eps, scheme, t, dm, de in rows:
        out.setdefault(scheme, []).append((t, dm, de))
    for tr in out.values():
        tr.sort()
    return {k: np.array(v) for k, v in out.items()}


def test_longtime_invariants_drift(invariants_rows):
    """Midpoint traces are bounded; the explicit schemes drift, two orders
    apart by more than 10^3 at the end of the horizon."""
    tr = _traces(invariants_rows)
    t = tr["midpoint"][:, 0]
    T = t[-1]
    for col, name in ((1, "mass"), (2, "energy")):
        y = tr["midpoint"][:, col]
        slope = np.polyfit(t, y, 1)[0]
        assert abs(slope) * T < y.max(), f"midpoint {name} trace drifts"
    for scheme in ("rk2", "rk4"):
        slope = np.polyfit(tr[scheme][:, 0], tr[scheme][:, 1], 1)[0]
        assert slope > 0, f"{scheme} mass drift slope {slope:.3e} not positive"
    ratio = tr["rk2"][-1, 1] / tr["rk4"][-1, 1]
    assert ratio > 1e3, f"terminal rk2/rk4 mass error ratio {ratio:.1f}"


def test_longtime_invariants_midpoint_mass_level(invariants_rows):
    """Midpoint mass deviation stays below 1e-9 over the full horizon."""
    tr = _traces(invariants_rows)
    worst = tr["midpoint"][:, 1].max()
    assert worst < 1e-9, f"max midpoint mass deviation {worst:.4e}"


# ---------------------------------------------------------------------------
# closed-form and cross-scheme oracles

K_TRUNC = 5


def _resonant_sum(p, c):
    """Quadruple-loop resonant expansion of the period-averaged torus field."""
    cc = lambda k: c[p.basis.index_of(k)]
    out = np.zeros_like(c)
    for k in range(-K_TRUNC, K_TRUNC + 1):
        acc = 0.0 + 0.0j
        for l in range(-K_TRUNC, K_TRUNC + 1):
            for m in range(-K_TRUNC, K_TRUNC + 1):
                for n in range(-K_TRUNC, K_TRUNC + 1):
                    if k * k - l * l + m * m - n * n != 0:
                        continue
                    if abs((l - m + n) - k) == 2:
                        acc += cc(l) * np.conj(cc(m)) * cc(n)
        out[p.basis.index_of(k)] = -1j * acc
    return out


def test_oracle_equivalences():
    """Field evaluators against closed forms; scheme identities."""
    # (a) quadrature average equals the resonant sum on a low-mode state
    p = make_model("torus_nls_1d", 0.1)
    rng = np.random.default_rng(99)
    c = np.zeros(p.basis.shape, dtype=complex)
    for k in range(-K_TRUNC, K_TRUNC + 1):
        c[p.basis.index_of(k)] = rng.standard_normal() + 1j * rng.standard_normal()
    got = FamFieldEvaluator(p, 64)(c)
    expect = _resonant_sum(p, c)
    idx = [p.basis.index_of(k) for k in range(-K_TRUNC, K_TRUNC + 1)]
    assert np.max(np.abs(got[idx] - expect[idx])) < 1e-12

    # (b) stencil average minus period average is first order in eps
    eps_list = [2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6]
    diffs = []
    for eps in eps_list:
        q = make_model("torus_nls_1d", eps)
        fh = AveragedFieldEvaluator(q, SplittingScheme(4, 128), stencil(4))(q.psi0)
        f1 = FamFieldEvaluator(q, 64)(q.psi0)
        diffs.append(l2_norm(q.basis, StateVector(fh - f1, q.basis)))
    slope = np.polyfit(np.log(eps_list), np.log(diffs), 1)[0]
    assert abs(slope - 1.0) < 0.2, (slope, diffs)

    # (c) widening the stencil from 4 to 8 removes an O(eps^4) term
    diffs = []
    for eps in eps_list:
        q = make_model("torus_nls_1d", eps)
        sch = SplittingScheme(4, 256)
        d = AveragedFieldEvaluator(q, sch, stencil(4))(q.psi0) \
            - AveragedFieldEvaluator(q, sch, stencil(8))(q.psi0)
        diffs.append(l2_norm(q.basis, StateVector(d, q.basis)))
    slope = np.polyfit(np.log(eps_list), np.log(diffs), 1)[0]
    assert abs(slope - 4.0) < 0.4, (slope, diffs)

    # (d) difference weights: zero sum, unit first moment, exactly
    for delta in (2, 4, 8):
        spec = stencil(delta)
        w = [Fraction(x).limit_denominator(10**6) for x in spec.weights]
        assert sum(w) == 0
        assert sum(wi * m for wi, m in zip(w, spec.offsets)) == 1

    # (e) splitting symmetry and unitarity; macro stability functions
    q = make_model("torus_nls_1d", 0.1)
    prop = MicroPropagator(q, 2, [q.period / 64])
    back = MicroPropagator(q, 2, [-q.period / 64])
    c0 = q.psi0[None]
    there = prop.run(c0.copy(), 64)
    norm0 = np.linalg.norm(c0)
    assert abs(np.linalg.norm(there) - norm0) < 1e-12 * norm0
    again = back.run(there, 64)
    assert np.max(np.abs(again - c0)) < 1e-10

    lam = 0.31j
    field = lambda u: lam * u
    z = lam * 1.0
    one = np.ones(1, dtype=complex)
    got = macro_step_explicit(rk4(), field, 1.0, one)[0]
    assert abs(got - sum(z**k / math.factorial(k) for k in range(5))) < 1e-15
    got = macro_step_explicit(rk2(), field, 1.0, one)[0]
    assert abs(got - (1 + z + z**2 / 2)) < 1e-15
    got = macro_step_midpoint(field, 1.0, one, 1e-14, 100)[0]
    assert abs(got - (1 + z / 2) / (1 - z / 2)) < 1e-12


# ---------------------------------------------------------------------------
# mode dynamics

def _mode_trace(rows, model, eps, method, mode):
    tr = [(t, mag) for m, e, meth, t, mx, my, mag in rows
          if m == model and e == eps and meth == method and (mx, my) == mode]
    tr.sort()
    assert tr, (model, eps, method, mode)
    return tr


def test_mode_dynamics(modes_rows):
    """Cascade ordering, averaged-trace agreement, model-error separation,
    and the anisotropic pairing law."""
    # (1) trap-model cascade: initially empty modes activate in order
    acts = []
    for k in (2, 3, 4, 5):
        tr = _mode_trace(modes_rows, "gross_pitaevskii_1d", 0.01, "splitting", (k, None))
        peak = max(m for _, m in tr)
        acts.append(next(t for t, m in tr if m >= 0.5 * peak))
    assert all(a < b for a, b in zip(acts, acts[1:])), f"activation times {acts}"

    # (2) averaged trace matches the resolved run within its error model:
    # stencil eps^4 + micro eps h^4 + macro (eps H)^4, constants measured on
    # these models (106 and 10 from the frozen tables, 1.0 a generous macro
    # bound), evaluated for the shipped run parameters
    eps, h, epsH = 0.01, 2.0 * PI / 256, 0.01 * 2.0 * PI
    budget = 106.0 * eps**4 + 10.0 * eps * h**4 + 1.0 * epsH**4
    worst_sam = 0.0
    worst_fam = 0.0
    for k in range(6):
        full = _mode_trace(modes_rows, "gross_pitaevskii_1d", 0.01, "splitting", (k, None))
        samt = _mode_trace(modes_rows, "gross_pitaevskii_1d", 0.01, "sam", (k, None))
        famt = _mode_trace(modes_rows, "gross_pitaevskii_1d", 0.01, "fam", (k, None))
        assert [t for t, _ in samt] == [t for t, _ in full]
        assert [t for t, _ in famt] == [t for t, _ in full]
        worst_sam = max(worst_sam, max(abs(a[1] - b[1]) for a, b in zip(samt, full)))
        worst_fam = max(worst_fam, max(abs(a[1] - b[1]) for a, b in zip(famt, full)))
    assert worst_sam < budget, f"averaged-trace deviation {worst_sam:.3e} > {budget:.3e}"

    # (3) the first-order model departs from the averaged one, but below the
    # level of the smallest still-O(eps) mode
    terminal = [
        _mode_trace(modes_rows, "gross_pitaevskii_1d", 0.01, "splitting", (k, None))[-1][1]
        for k in range(6)
    ]
    level = min(v for v in terminal if v >= 0.01)
    assert worst_sam < worst_fam < level, (worst_sam, worst_fam, level)

    # (4) anisotropic pairing: mode pair (0, 2k), (0, 2k+1) sits at eps^{2k},
    # so its level grows 4^k when eps doubles (within a factor 3)
    for n, target in ((2, 4.0), (3, 4.0), (4, 16.0), (5, 16.0)):
        lo = max(m for _, m in _mode_trace(modes_rows, "aniso_torus_2d", 0.05,
                                           "splitting", (0, n)))
        hi = max(m for _, m in _mode_trace(modes_rows, "aniso_torus_2d", 0.1,
                                           "splitting", (0, n)))
        ratio = hi / lo
        assert target / 3.0 < ratio < target * 3.0, (
            f"mode (0,{n}) level ratio {ratio:.2f}, expected ~{target}")
