"""Experiment drivers: parameter sweeps, reference management, CSV output.

Five experiment families are provided, each with a "desk" grid that keeps
laptop runtimes and a "paper" grid with the full-size parameters:

  accuracy    macro-step and micro-step error sweeps for the averaged scheme
  table       error grids for the pure splitting integrators
  efficiency  error versus total micro-step work, splitting against averaging
  invariants  long-horizon mass/energy drift for three macro integrators
  modes       spectral-coefficient histories from splitting, averaging, and
              the first-order averaged model

Work accounting: for an averaging run N_step is the total number of micro
steps taken by the stencil legs, (macro steps) x (stages) x (legs) x (steps
per leg); for a splitting run it is (final time) / h.  Reference solutions
are cached on disk as raw little-endian complex-double dumps with a JSON
sidecar; the cache directory honors the STROBO_CACHE_DIR environment
variable.  CSV content is deterministic: fixed grid orders, fixed summation
orders, and no wall-clock values in data columns (timings go to the metadata
file next to each CSV).
"""

import csv
import dataclasses
import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import MODELS, StateVector, make_model
from .fam import FamConfig, fam_integrate
from .observables import energy_torus, mass
from .sam import (
    MACRO_SCHEMES,
    SamConfig,
    sam_integrate,
    stencil,
)
from .spectral import l2_norm_and_error
from .splitting import (
    MicroPropagator,
    SplittingScheme,
    check_micro_step,
    propagate_time,
)


class ConfigError(ValueError):
    """Invalid experiment configuration (maps to CLI exit code 2)."""


EXPERIMENTS = ("accuracy", "table", "efficiency", "invariants", "modes")
REFERENCE_POLICIES = ("auto", "splitting", "sam8")
PI = np.pi


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment run.

    Empty grid fields fall back to the per-experiment defaults of the chosen
    scale; `sizes` is forwarded to the model factory.  The JSON config file
    mirrors these fields one-to-one.
    """

    experiment: str
    scale: str = "desk"
    model: str | None = None
    eps: tuple = ()
    H: tuple = ()
    h: tuple = ()
    schemes: tuple = ()
    stencil: int = 0          # 0 means the experiment default
    seed: int = 0
    reference: str = "auto"
    sizes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.scale not in ("desk", "paper"):
            raise ConfigError(f"scale must be 'desk' or 'paper', got {self.scale!r}")
        if self.model is not None and self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.reference not in REFERENCE_POLICIES:
            raise ConfigError(f"reference policy must be one of {REFERENCE_POLICIES}")
        if self.stencil not in (0, 2, 4, 8):
            raise ConfigError("stencil order must be 2, 4 or 8")
        for name in ("eps", "H", "h"):
            vals = tuple(float(v) for v in getattr(self, name))
            if any(v <= 0 for v in vals):
                raise ConfigError(f"{name} values must be positive")
            object.__setattr__(self, name, vals)
        self.schemes = tuple(str(s) for s in self.schemes)
        if not isinstance(self.sizes, dict):
            raise ConfigError("sizes must be a mapping")


def load_config(path, experiment=None):
    """Read a JSON config file; unknown keys are rejected."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if experiment is not None:
        if "experiment" in raw and raw["experiment"] != experiment:
            raise ConfigError(
                f"config is for experiment {raw['experiment']!r}, "
                f"but {experiment!r} was requested"
            )
        raw["experiment"] = experiment
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# grids


def _pio2(j):
    return PI / 2.0**j


DESK_SIZES = {
    "torus_nls_1d": {"n_modes": 64},
    "gross_pitaevskii_1d": {"n_max": 40},
    "aniso_torus_2d": {"nx": 32, "ny": 32},
    "aniso_gp_2d": {"n_max_x": 16, "n_max_y": 16},
}
PAPER_SIZES = {
    "torus_nls_1d": {"n_modes": 256},
    "gross_pitaevskii_1d": {"n_max": 79},
    "aniso_torus_2d": {"nx": 128, "ny": 128},
    "aniso_gp_2d": {"n_max_x": 80, "n_max_y": 80},
}

# accuracy sweeps: eps grid, macro sweep eps*H = pi/2^j, fine micro steps per
# period, micro sweep h = period/n, eps subset for the micro sweep
ACCURACY_GRIDS = {
    ("torus_nls_1d", "desk"): {
        "eps": [2.0**-5, 2.0**-6, 2.0**-7, 2.0**-8],
        "epsH_exponents": [4, 5, 6, 7, 8],
        "fine_n": 512,
        "h_n": [32, 64, 128, 256],
        "h_epsH_exponent": 10,
        "h_eps": [2.0**-5, 2.0**-6, 2.0**-7],
    },
    ("gross_pitaevskii_1d", "desk"): {
        "eps": [2.0**-5, 2.0**-6],
        "epsH_exponents": [4, 5, 6],
        "fine_n": 256,
        "h_n": [32, 64],
        "h_epsH_exponent": 8,
        "h_eps": [2.0**-5],
    },
    ("torus_nls_1d", "paper"): {
        "eps": [2.0**-j for j in range(5, 11)],
        "epsH_exponents": [5, 6, 7, 8, 9, 10, 11],
        "fine_n": 8192,                        # h = pi/2^12
        "h_n": [2**k for k in range(6, 13)],   # h = pi/2^5 .. pi/2^11
        "h_epsH_exponent": 12,
        "h_eps": None,  # all
    },
    ("gross_pitaevskii_1d", "paper"): {
        "eps": [2.0**-j for j in range(5, 10)],
        "epsH_exponents": [3, 4, 5, 6, 7, 8, 9, 10, 11],
        "fine_n": 8192,
        "h_n": [2**k for k in range(6, 11)],   # h = pi/2^5 .. pi/2^9
        "h_epsH_exponent": 12,
        "h_eps": None,
    },
}

TABLE_GRIDS = {
    ("torus_nls_1d", "desk"): {
        "eps": [2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6],
        "n": [2**5, 2**6, 2**7, 2**8],      # h = pi/2^4 .. pi/2^7
        "ref_n": 2**12,                     # h_ref = smallest h / 16
    },
    ("gross_pitaevskii_1d", "desk"): {
        "eps": [2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6, 2.0**-7],
        "n": [2**6, 2**7],                  # h = pi/2^5, pi/2^6
        "ref_n": 2**11,
    },
    ("torus_nls_1d", "paper"): {
        "eps": [2.0**-j for j in range(3, 10)],
        "n": [2**k for k in range(5, 11)],     # h = pi/2^4 .. pi/2^9
        "ref_n": 2**14,
    },
    ("gross_pitaevskii_1d", "paper"): {
        "eps": [2.0**-j for j in range(3, 8)],
        "n": [2**6, 2**7, 2**8, 2**9],
        "ref_n": 2**13,
    },
}

EFFICIENCY_GRIDS = {
    "desk": {
        "eps": [2.0**-10, 2.0**-12],
        "split_n": [2**k for k in range(4, 10)],  # h = pi/2^3 .. pi/2^8
        "budgets": [9, 10, 11, 12, 13],           # epsH*h = pi^2/2^s families
        "epsH_min_exponent": 3,
        "h_min_n": 16,
    },
    "paper": {
        "eps": [2.0**-12, 2.0**-14, 2.0**-16, 2.0**-18],
        "split_n": [2**k for k in range(4, 12)],
        "budgets": list(range(9, 21)),
        "epsH_min_exponent": 3,
        "h_min_n": 16,
    },
}

INVARIANT_GRIDS = {
    "desk": {
        "eps": 2.0**-7,
        "sizes": {"n_modes": 32},
        "micro_n": 512,
        "epsH_exponent": 5,
        "record_every": 8,
    },
    "paper": {
        "eps": 2.0**-11,
        "sizes": {"n_modes": 32},
        "micro_n": 512,
        "epsH_exponent": 7,
        "record_every": 512,
    },
}

MODES_GRIDS = {
    ("gross_pitaevskii_1d", "desk"): {
        "eps": [1e-2],
        "methods": ["splitting", "sam", "fam"],
        "micro_n": 500,
        "sam": {"macro": 100, "n": 256, "stencil": 4},
        "fam": {"macro": 400, "n_quad": 64},
        "stride": 1,                  # record every this many fast periods
        "modes": [0, 1, 2, 3, 4, 5],
    },
    ("aniso_torus_2d", "desk"): {
        "eps": [0.05, 0.1],
        "methods": ["splitting", "fam"],
        "micro_n": 500,
        "sam": {"macro": 100, "n": 96, "stencil": 4},
        # the x-unconstrained resonant field has a large Lipschitz norm here;
        # one macro step per period puts RK4 outside its stability interval
        "fam": {"macro_per_period": 8, "n_quad": 64},
        "stride_rule": "hundredth",   # about 100 samples over the horizon
        "modes": [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5)],
    },
    ("aniso_gp_2d", "desk"): {
        "eps": [0.1],
        "methods": ["splitting", "sam", "fam"],
        "micro_n": 256,
        "sam": {"macro": 50, "n": 128, "stencil": 2},
        "fam": {"macro_per_period": 1, "n_quad": 64},
        "stride": 2,
        "modes": [(0, 0), (2, 0), (4, 0), (6, 0), (0, 2), (2, 2)],
    },
    ("gross_pitaevskii_1d", "paper"): {
        "eps": [1e-4],
        "methods": ["splitting", "sam", "fam"],
        "micro_n": 500,
        "sam": {"macro": 1000, "n": 1024, "stencil": 4},
        "fam": {"macro": 10000, "n_quad": 64},
        "stride": 100,
        "modes": [0, 1, 2, 3, 4, 5],
    },
    ("aniso_torus_2d", "paper"): {
        "eps": [0.01],
        "methods": ["splitting", "sam", "fam"],
        "micro_n": 500,
        "sam": {"macro": 10000, "n": 400, "stencil": 4},
        "fam": {"macro": 10000, "n_quad": 64},
        "stride_rule": "hundredth",
        "modes": [(0, n) for n in range(8)] + [(n, 0) for n in range(1, 8)],
    },
    ("aniso_gp_2d", "paper"): {
        "eps": [0.01],
        "methods": ["splitting", "sam", "fam"],
        "micro_n": 100,
        "sam": {"macro": 1000, "n": 100, "stencil": 4},
        "fam": {"macro": 1000, "n_quad": 64},
        "stride_rule": "hundredth",
        "modes": [(0, 0), (2, 0), (4, 0), (6, 0), (0, 2), (2, 2)],
    },
}

# fine parameters of the two reference branches
REFERENCE_PARAMS = {
    "desk": {
        "splitting_n": 2048,                       # h = pi/2^10
        # the reference micro step must sit strictly below every measured
        # splitting step: at a shared h the two runs' micro errors are
        # correlated and cancel in the comparison, faking tiny errors
        "sam8": {"epsH_exponent": 10, "n": 1024},  # (epsH, h) = (pi/2^10, pi/2^9)
    },
    "paper": {
        "splitting_n": None,                       # n = 2^15 / eps, see below
        "sam8": {"epsH_exponent": 12, "n": 8192},
    },
}


def _model_sizes(model, scale, overrides):
    sizes = dict(DESK_SIZES[model] if scale == "desk" else PAPER_SIZES[model])
    sizes.update(overrides)
    return sizes


def _int_or_config_error(value, what):
    n = int(round(value))
    if abs(value - n) > 1e-9 * max(1.0, abs(value)) or n < 1:
        raise ConfigError(f"{what} must be a positive integer, got {value}")
    return n


# ---------------------------------------------------------------------------
# reference solutions


def cache_directory():
    env = os.environ.get("STROBO_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "samnls" / "references"


def _resolve_policy(model, eps, policy):
    if policy != "auto":
        return policy
    if model in ("torus_nls_1d", "aniso_torus_2d"):
        return "splitting" if eps >= 2.0**-8 else "sam8"
    return "splitting" if eps >= 2.0**-7 else "sam8"


def _reference_compute(p, policy, params):
    if policy == "splitting":
        sch = SplittingScheme(4, params["n"])
        state, n_steps, wall = propagate_time(p, sch, p.initial_state(), p.t_final)
        return state, {"n_steps": n_steps, "wall_time_s": wall}
    # averaged run with the wide stencil, then the macro endpoint is already
    # at a stroboscopic time so no interpolation step is needed
    macro = _int_or_config_error(
        p.t_final * p.epsilon_eff / params["epsH"], "reference macro count"
    )
    cfg = SamConfig(
        p,
        SplittingScheme(4, params["n"]),
        stencil(8),
        MACRO_SCHEMES["rk4"](),
        macro_count=macro,
        record_every=macro,
    )
    traj = sam_integrate(cfg)
    if traj.failure is not None:
        raise RuntimeError(f"reference run failed: {traj.failure}")
    return traj.states[-1], {
        "n_steps": traj.counters["micro_steps"],
        "wall_time_s": traj.wall_time,
    }


def reference_solution(model, eps, *, scale="desk", policy="auto", sizes=None,
                       ref_n=None, cache_dir=None):
    """Cached fine solution at the model horizon.

    Large eps uses full-interval order-4 splitting, small eps the averaged
    integrator with the order-8 stencil; `ref_n` overrides the splitting
    steps per period (used by the error tables, whose reference step is tied
    to the table grid).  Returns (state, metadata).
    """
    p = make_model(model, eps, **_model_sizes(model, scale, sizes or {}))
    policy = _resolve_policy(model, eps, policy)
    fine = REFERENCE_PARAMS[scale]
    if policy == "splitting":
        n = ref_n if ref_n is not None else fine["splitting_n"]
        if n is None:
            n = _int_or_config_error(2**15 / eps, "reference steps per period")
        params = {"n": int(n)}
        tag = f"splitting-n{params['n']}"
    else:
        sam8 = fine["sam8"]
        params = {"epsH": _pio2(sam8["epsH_exponent"]), "n": int(sam8["n"])}
        tag = f"sam8-j{sam8['epsH_exponent']}-n{params['n']}"
    sizes_list = list(p.basis.shape)
    base = f"{model}-eps{eps!r}-{tag}"
    directory = Path(cache_dir) if cache_dir is not None else cache_directory()
    bin_path = directory / f"{base}.bin"
    meta_path = directory / f"{base}.json"

    cached = _cache_load(bin_path, meta_path, model, eps, policy, sizes_list)
    if cached is not None:
        return StateVector(cached, p.basis), {"policy": policy, "cache": "hit"}

    state, stats = _reference_compute(p, policy, params)
    payload = np.ascontiguousarray(state.coeffs.astype("<c16")).tobytes()
    directory.mkdir(parents=True, exist_ok=True)
    bin_path.write_bytes(payload)
    sidecar = {
        "model": model,
        "eps": eps,
        "sizes": sizes_list,
        "policy": policy,
        "params": {k: (v if isinstance(v, int) else float(v)) for k, v in params.items()},
        "sha256": hashlib.sha256(payload).hexdigest(),
    }
    meta_path.write_text(json.dumps(sidecar, sort_keys=True, indent=1) + "\n")
    return state, {"policy": policy, "cache": "miss", **stats}


def _cache_load(bin_path, meta_path, model, eps, policy, sizes_list):
    """Return cached coefficients, or None on miss/corruption."""
    try:
        sidecar = json.loads(meta_path.read_text())
        payload = bin_path.read_bytes()
        if (
            sidecar["model"] != model
            or sidecar["eps"] != eps
            or sidecar["policy"] != policy
            or sidecar["sizes"] != sizes_list
            or sidecar["sha256"] != hashlib.sha256(payload).hexdigest()
        ):
            return None
        flat = np.frombuffer(payload, dtype="<c16")
        return flat.reshape(sizes_list).astype(complex)
    except (OSError, KeyError, ValueError, json.JSONDecodeError):
        return None


# ---------------------------------------------------------------------------
# reporting


def format_value(v):
    # np.float64 subclasses float but reprs differently; strip the wrapper
    if isinstance(v, float):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


HEADERS = {
    "accuracy": ("model", "eps", "H", "h", "scheme", "stencil", "error"),
    "table": ("model", "eps", "h", "error"),
    "efficiency": ("model", "eps", "method", "N_step", "error"),
    "invariants": ("model", "eps", "macro", "t", "mass_err", "energy_err"),
    "modes": ("model", "eps", "method", "t", "mode_index_x", "mode_index_y", "magnitude"),
}


@dataclass
class RunReport:
    """Rows for the experiment CSV plus per-run metadata."""

    experiment: str
    rows: list = field(default_factory=list)
    records: list = field(default_factory=list)   # per-run keys, counters, timings
    failures: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def header(self):
        return HEADERS[self.experiment]

    def add_failure(self, key, message):
        self.failures.append({"key": key, "error": str(message)})

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{self.experiment}.csv"
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header)
            for row in self.rows:
                w.writerow([format_value(v) for v in row])
        meta = {
            "experiment": self.experiment,
            "config": self.config,
            "records": self.records,
            "failures": self.failures,
        }
        (out / f"{self.experiment}_meta.json").write_text(
            json.dumps(meta, sort_keys=True, indent=1, default=str) + "\n"
        )
        return csv_path


def _parallel(fn, items, threads):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _record(report, key, wall, counters=None):
    rec = {**key, "wall_time_s": wall}
    if counters:
        rec.update(counters)
    report.records.append(rec)


# ---------------------------------------------------------------------------
# accuracy


def _sam_error_run(model, eps, sizes, scale, macro, micro_n, stl, reference, cache_dir):
    p = make_model(model, eps, **sizes)
    ref, _ = reference_solution(
        model, eps, scale=scale, policy=reference, sizes=sizes, cache_dir=cache_dir
    )
    cfg = SamConfig(
        p,
        SplittingScheme(4, micro_n),
        stencil(stl),
        MACRO_SCHEMES["rk4"](),
        macro_count=macro,
        record_every=macro,
    )
    traj = sam_integrate(cfg)
    if traj.failure is not None:
        raise RuntimeError(traj.failure)
    _, err = l2_norm_and_error(p.basis, ref, traj.states[-1])
    return err, cfg.big_step, traj


def run_accuracy_sweep(cfg, threads=1, cache_dir=None):
    """Macro-step sweep at fine h and micro-step sweep at fine H, per eps."""
    models = [cfg.model] if cfg.model else ["torus_nls_1d", "gross_pitaevskii_1d"]
    stl = cfg.stencil or 4
    report = RunReport("accuracy", config=dataclasses.asdict(cfg))
    work = []
    for model in models:
        grid = ACCURACY_GRIDS.get((model, cfg.scale))
        if grid is None:
            raise ConfigError(f"accuracy sweep is not defined for model {model!r}")
        sizes = _model_sizes(model, cfg.scale, cfg.sizes)
        eps_list = cfg.eps or grid["eps"]
        p0 = make_model(model, eps_list[0], **sizes)
        t0, period = p0.t0, p0.period
        # an explicit H (or h) grid requests just that sweep
        do_macro_sweep = not cfg.h or bool(cfg.H)
        do_micro_sweep = not cfg.H or bool(cfg.h)
        for eps in eps_list:
            # (a) macro sweep at fixed fine micro step
            if do_macro_sweep:
                if cfg.H:
                    H_list = list(cfg.H)
                else:
                    H_list = [_pio2(j) / eps for j in grid["epsH_exponents"]]
                for H in H_list:
                    macro = _int_or_config_error((t0 / eps) / H, f"macro count for H={H}")
                    work.append((model, eps, sizes, macro, grid["fine_n"], H, grid["fine_n"]))
            # (b) micro sweep at fixed fine macro step
            h_eps = eps_list if cfg.eps else (grid["h_eps"] or eps_list)
            if do_micro_sweep and eps in h_eps:
                epsH = _pio2(grid["h_epsH_exponent"])
                macro = _int_or_config_error(t0 / epsH, "macro count for the micro sweep")
                if cfg.h:
                    n_list = [
                        _int_or_config_error(period / h, f"steps per period for h={h}")
                        for h in cfg.h
                    ]
                else:
                    n_list = grid["h_n"]
                for n in n_list:
                    work.append((model, eps, sizes, macro, n, epsH / eps, n))

    def one(item):
        model, eps, sizes, macro, micro_n, H, n = item
        key = {"model": model, "eps": eps, "H": H, "h": 2 * PI / n, "stencil": stl}
        try:
            err, big_step, traj = _sam_error_run(
                model, eps, sizes, cfg.scale, macro, micro_n, stl, cfg.reference, cache_dir
            )
        except Exception as exc:  # noqa: BLE001 - per-row capture, sweep continues
            return key, None, str(exc)
        return key, (err, traj.wall_time, traj.counters), None

    for key, result, failure in _parallel(one, work, threads):
        if failure is not None:
            report.add_failure(key, failure)
            continue
        err, wall, counters = result
        report.rows.append(
            (key["model"], key["eps"], key["H"], key["h"], "sam-rk4", key["stencil"], err)
        )
        _record(report, key, wall, counters)
    return report


# ---------------------------------------------------------------------------
# splitting tables


def run_splitting_table(cfg, threads=1, cache_dir=None):
    """Error grid of the order-4 splitting over the full horizon."""
    models = [cfg.model] if cfg.model else ["torus_nls_1d", "gross_pitaevskii_1d"]
    report = RunReport("table", config=dataclasses.asdict(cfg))
    work = []
    for model in models:
        grid = TABLE_GRIDS.get((model, cfg.scale))
        if grid is None:
            raise ConfigError(f"splitting table is not defined for model {model!r}")
        sizes = _model_sizes(model, cfg.scale, cfg.sizes)
        eps_list = cfg.eps or grid["eps"]
        if cfg.h:
            p0 = make_model(model, eps_list[0], **sizes)
            n_list = [
                _int_or_config_error(p0.period / h, f"steps per period for h={h}")
                for h in cfg.h
            ]
        else:
            n_list = grid["n"]
        for eps in eps_list:
            for n in n_list:
                work.append((model, eps, sizes, n, grid["ref_n"]))

    def one(item):
        model, eps, sizes, n, ref_n = item
        p = make_model(model, eps, **sizes)
        key = {"model": model, "eps": eps, "h": p.period / n}
        try:
            ref, _ = reference_solution(
                model, eps, scale=cfg.scale, policy="splitting", sizes=sizes,
                ref_n=ref_n, cache_dir=cache_dir,
            )
            state, n_steps, wall = propagate_time(
                p, SplittingScheme(4, n), p.initial_state(), p.t_final
            )
            _, err = l2_norm_and_error(p.basis, ref, state)
        except Exception as exc:  # noqa: BLE001
            return key, None, str(exc)
        return key, (err, wall, {"N_step": n_steps}), None

    for key, result, failure in _parallel(one, work, threads):
        if failure is not None:
            report.add_failure(key, failure)
            continue
        err, wall, counters = result
        report.rows.append((key["model"], key["eps"], key["h"], err))
        _record(report, key, wall, counters)
    return report


# ---------------------------------------------------------------------------
# efficiency


def run_efficiency(cfg, threads=1, cache_dir=None):
    """Work-precision curves: splitting versus the averaged scheme's envelope.

    The averaged-scheme points form budget families epsH * h = pi^2 / 2^s;
    within a family every (H, h) split costs the same number of micro steps,
    and the CSV keeps the smallest error of each family (the lower envelope).
    """
    model = cfg.model or "torus_nls_1d"
    if model != "torus_nls_1d":
        raise ConfigError("the efficiency experiment is defined for the torus model")
    grid = EFFICIENCY_GRIDS[cfg.scale]
    sizes = _model_sizes(model, cfg.scale, cfg.sizes)
    stl = cfg.stencil or 4
    report = RunReport("efficiency", config=dataclasses.asdict(cfg))
    eps_list = cfg.eps or grid["eps"]

    split_work = []
    for eps in eps_list:
        for n in grid["split_n"]:
            split_work.append((eps, n))

    def one_split(item):
        eps, n = item
        p = make_model(model, eps, **sizes)
        key = {"model": model, "eps": eps, "method": "tsfp4", "n": n}
        try:
            ref, _ = reference_solution(
                model, eps, scale=cfg.scale, policy=cfg.reference, sizes=sizes,
                cache_dir=cache_dir,
            )
            state, n_steps, wall = propagate_time(
                p, SplittingScheme(4, n), p.initial_state(), p.t_final
            )
            _, err = l2_norm_and_error(p.basis, ref, state)
        except Exception as exc:  # noqa: BLE001
            return key, None, str(exc)
        return key, (n_steps, err, wall), None

    sam_work = []
    for eps in eps_list:
        for s in grid["budgets"]:
            for a in range(grid["epsH_min_exponent"], s + 1):
                n = 2 ** (s - a + 1)       # h = pi/2^(s-a)
                if n < grid["h_min_n"]:
                    continue
                macro = 2 ** (a - 2)       # = t0 / (H eps) with epsH = pi/2^a
                if macro < 1:
                    continue
                sam_work.append((eps, s, a, macro, n))

    def one_sam(item):
        eps, s, a, macro, n = item
        key = {"model": model, "eps": eps, "method": "sam", "budget": s, "epsH_exponent": a}
        try:
            err, _, traj = _sam_error_run(
                model, eps, sizes, cfg.scale, macro, n, stl, cfg.reference, cache_dir
            )
        except Exception as exc:  # noqa: BLE001
            return key, None, str(exc)
        return key, (traj.counters["micro_steps"], err, traj.wall_time), None

    split_results = _parallel(one_split, split_work, threads)
    sam_results = _parallel(one_sam, sam_work, threads)

    for key, result, failure in split_results:
        if failure is not None:
            report.add_failure(key, failure)
            continue
        n_steps, err, wall = result
        report.rows.append((model, key["eps"], "tsfp4", n_steps, err))
        _record(report, key, wall, {"N_step": n_steps})

    # envelope: smallest error per (eps, budget) family
    best = {}
    for key, result, failure in sam_results:
        if failure is not None:
            report.add_failure(key, failure)
            continue
        n_steps, err, wall = result
        _record(report, key, wall, {"N_step": n_steps, "error": err})
        fam_key = (key["eps"], key["budget"])
        if fam_key not in best or err < best[fam_key][1]:
            best[fam_key] = (n_steps, err)
    for eps in eps_list:
        for s in grid["budgets"]:
            if (eps, s) in best:
                n_steps, err = best[(eps, s)]
                report.rows.append((model, eps, "sam", n_steps, err))
    return report


# ---------------------------------------------------------------------------
# long-time invariants


def run_invariants_longtime(cfg, threads=1, cache_dir=None):
    """Mass and energy drift over the extended horizon t0/eps^2.

    Three macro integrators over the same averaged field (order-2 micro
    splitting, order-2 stencil).  The micro step must resolve the fastest
    linear phase; a violating configuration is refused before any work.
    """
    model = cfg.model or "torus_nls_1d"
    if model != "torus_nls_1d":
        raise ConfigError("the invariants experiment is defined for the torus model")
    grid = INVARIANT_GRIDS[cfg.scale]
    sizes = _model_sizes(model, cfg.scale, {**grid["sizes"], **cfg.sizes})
    eps = cfg.eps[0] if cfg.eps else grid["eps"]
    p = make_model(model, eps, **sizes)

    if cfg.h:
        micro_n = _int_or_config_error(p.period / cfg.h[0], "steps per period")
    else:
        micro_n = grid["micro_n"]
    h = p.period / micro_n
    try:
        check_micro_step(p, h)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    t_final = p.t0 / p.eps**2
    if cfg.H:
        H = cfg.H[0]
    else:
        H = _pio2(grid["epsH_exponent"]) / eps
    macro = _int_or_config_error(t_final / H, "macro count")
    schemes = cfg.schemes or ("rk2", "rk4", "midpoint")
    for s in schemes:
        if s not in MACRO_SCHEMES:
            raise ConfigError(f"unknown macro scheme {s!r}")
    stl = cfg.stencil or 2
    report = RunReport("invariants", config=dataclasses.asdict(cfg))

    def one(scheme_id):
        key = {"model": model, "eps": eps, "macro": scheme_id, "H": H, "h": h}
        sam_cfg = SamConfig(
            p,
            SplittingScheme(2, micro_n),
            stencil(stl),
            MACRO_SCHEMES[scheme_id](),
            macro_count=macro,
            t_final=t_final,
            record_every=grid["record_every"],
            # conservation traces resolve 1e-9 drifts; the stage solve has to
            # sit at the iteration's roundoff floor or its leak dominates
            fixed_point_tol=2e-13,
        )
        try:
            traj = sam_integrate(sam_cfg)
        except Exception as exc:  # noqa: BLE001
            return key, None, str(exc)
        if traj.failure is not None:
            return key, None, traj.failure
        m0 = mass(p.basis, traj.states[0])
        e0 = energy_torus(p.basis, traj.states[0], eps)
        rows = []
        for t, state in zip(traj.times, traj.states):
            rows.append(
                (
                    model, eps, scheme_id, t,
                    abs(mass(p.basis, state) - m0),
                    abs(energy_torus(p.basis, state, eps) - e0),
                )
            )
        return key, (rows, traj.wall_time, traj.counters), None

    for key, result, failure in _parallel(one, list(schemes), threads):
        if failure is not None:
            report.add_failure(key, failure)
            continue
        rows, wall, counters = result
        report.rows.extend(rows)
        _record(report, key, wall, counters)
    return report


# ---------------------------------------------------------------------------
# mode evolution


def _splitting_trace(p, order, micro_n, n_periods, stride):
    """States at every `stride` fast periods, advanced with one propagator."""
    prop = MicroPropagator(p, order, [p.period / micro_n])
    c = p.psi0.copy()
    times = [0.0]
    states = [StateVector(c.copy(), p.basis)]
    done = 0
    tic = time.perf_counter()
    while done < n_periods:
        step = min(stride, n_periods - done)
        c = prop.run(c[None], step * micro_n)[0]
        done += step
        times.append(done * p.period)
        states.append(StateVector(c.copy(), p.basis))
    return times, states, prop.steps_taken, time.perf_counter() - tic


def _mode_rows(model, eps, method, times, states, mode_list):
    rows = []
    for t, state in zip(times, states):
        c = state.coeffs
        for m in mode_list:
            if isinstance(m, tuple):
                mx, my = m
                mag = abs(c[state.basis.index_of(m)])
                rows.append((model, eps, method, t, mx, my, mag))
            else:
                mag = abs(c[state.basis.index_of(m)])
                rows.append((model, eps, method, t, m, None, mag))
    return rows


def run_mode_evolution(cfg, threads=1, cache_dir=None):
    """Spectral-magnitude histories from the full solver, the averaged
    integrator, and the first-order model, on shared stroboscopic times."""
    models = [cfg.model] if cfg.model else [
        "gross_pitaevskii_1d", "aniso_torus_2d", "aniso_gp_2d"
    ]
    report = RunReport("modes", config=dataclasses.asdict(cfg))
    work = []
    for model in models:
        grid = MODES_GRIDS.get((model, cfg.scale))
        if grid is None:
            raise ConfigError(f"mode evolution is not defined for model {model!r}")
        sizes = _model_sizes(model, cfg.scale, cfg.sizes)
        methods = cfg.schemes or grid["methods"]
        for m in methods:
            if m not in ("splitting", "sam", "fam"):
                raise ConfigError(f"unknown trace method {m!r}")
        for eps in cfg.eps or grid["eps"]:
            for method in methods:
                work.append((model, eps, sizes, grid, method))

    def one(item):
        model, eps, sizes, grid, method = item
        p = make_model(model, eps, **sizes)
        key = {"model": model, "eps": eps, "method": method}
        n_periods = _int_or_config_error(p.t_final / p.period, "fast periods in horizon")
        if "stride" in grid:
            stride = grid["stride"]
        else:
            stride = max(1, n_periods // 100)
        try:
            if method == "splitting":
                check_micro_step(p, p.period / grid["micro_n"])
                _, states, n_steps, wall = _splitting_trace(
                    p, 4, grid["micro_n"], n_periods, stride
                )
                counters = {"N_step": n_steps}
            elif method == "sam":
                sam_grid = grid["sam"]
                rec = _int_or_config_error(
                    sam_grid["macro"] * stride / n_periods, "record stride"
                )
                sam_cfg = SamConfig(
                    p,
                    SplittingScheme(4, sam_grid["n"]),
                    stencil(sam_grid["stencil"]),
                    MACRO_SCHEMES["rk4"](),
                    macro_count=sam_grid["macro"],
                    record_every=rec,
                )
                traj = sam_integrate(sam_cfg)
                if traj.failure is not None:
                    raise RuntimeError(traj.failure)
                states, wall = traj.states, traj.wall_time
                counters = dict(traj.counters)
            else:
                fam_grid = grid["fam"]
                macro = fam_grid.get("macro")
                if macro is None:
                    macro = n_periods * fam_grid["macro_per_period"]
                rec = _int_or_config_error(macro * stride / n_periods, "record stride")
                fam_cfg = FamConfig(
                    p, macro_count=macro, n_quad=fam_grid["n_quad"], record_every=rec
                )
                traj = fam_integrate(fam_cfg)
                states, wall = traj.states, traj.wall_time
                counters = dict(traj.counters)
        except Exception as exc:  # noqa: BLE001
            return key, None, str(exc)
        # every recorded state sits at a whole number of fast periods; writing
        # the times as such keeps them bit-identical across the three methods
        times = [i * stride * p.period for i in range(len(states))]
        rows = _mode_rows(model, eps, method, times, states, grid["modes"])
        return key, (rows, wall, counters), None

    for key, result, failure in _parallel(one, work, threads):
        if failure is not None:
            report.add_failure(key, failure)
            continue
        rows, wall, counters = result
        report.rows.extend(rows)
        _record(report, key, wall, counters)
    return report


RUNNERS = {
    "accuracy": run_accuracy_sweep,
    "table": run_splitting_table,
    "efficiency": run_efficiency,
    "invariants": run_invariants_longtime,
    "modes": run_mode_evolution,
}


def run_experiment(cfg, out_dir=None, threads=1, cache_dir=None):
    """Dispatch one experiment; writes CSV and metadata when out_dir is set."""
    report = RUNNERS[cfg.experiment](cfg, threads=threads, cache_dir=cache_dir)
    if out_dir is not None:
        report.write(out_dir)
    return report
