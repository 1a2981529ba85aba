"""Conserved quantities and mode diagnostics."""

from dataclasses import dataclass

import numpy as np

from . import spectral
from .spectral import FourierBasis1D


@dataclass
class DriftStats:
    max_abs_error: float
    slope: float


@dataclass
class ObservableTrace:
    kind: str
    times: np.ndarray
    values: np.ndarray


def mass(basis, u):
    """Discrete L2 mass sum |psi_j|^2 w_j."""
    g = basis.to_grid(spectral._coeffs_of(u))
    return float(np.sum(np.abs(g) ** 2 * basis.quad_weights))


def energy_torus(basis, u, eps):
    """Energy of the torus model:
    1/2 int |psi_x|^2 + eps/4 int alpha(x) |psi|^4,  alpha(x) = 2 cos 2x."""
    if not isinstance(basis, FourierBasis1D):
        raise ValueError("energy_torus is defined for the 1D torus model only")
    c = spectral._coeffs_of(u)
    kinetic = 0.5 * 2.0 * np.pi * float(np.sum(basis.wavenumbers ** 2 * np.abs(c) ** 2))
    g = basis.to_grid(c)
    alpha = 2.0 * np.cos(2.0 * basis.x)
    quartic = 0.25 * eps * float(np.sum(alpha * np.abs(g) ** 4 * basis.quad_weights))
    return kinetic + quartic


def mode_magnitudes(u, indices):
    """|coefficients| at the given basis indices (ints in 1D, pairs in 2D)."""
    c = spectral._coeffs_of(u)
    basis = u.basis
    out = np.empty(len(indices))
    for i, k in enumerate(indices):
        out[i] = abs(c[basis.index_of(k)])
    return out


def drift_statistics(times, values):
    """Max deviation from the initial value and least-squares drift slope."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    err = v - v[0]
    slope = float(np.polyfit(t, err, 1)[0]) if t.size > 1 else 0.0
    return DriftStats(max_abs_error=float(np.max(np.abs(err))), slope=slope)


def trace_observable(traj, fn, kind):
    """Apply a state observable along a trajectory."""
    vals = np.array([fn(s) for s in traj.states])
    return ObservableTrace(kind=kind, times=np.asarray(traj.times), values=vals)
