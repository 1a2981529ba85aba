"""Mass, torus energy, mode extraction, drift statistics.

The energy check uses the closed form for psi0 = cos x + sin x: the kinetic
part is pi (|c_1| = |c_-1| = sqrt(2)/2 after splitting cos and sin), and the
quartic part vanishes because int cos(2x) |psi0|^4 dx = 0 for this profile
(|psi0|^2 = 1 + sin 2x and cos 2x integrates to zero against both terms and
against sin^2 2x).
"""

import numpy as np
import pytest

from samnls import gross_pitaevskii_1d, torus_nls_1d
from samnls.core import StateVector, Trajectory
from samnls.observables import (
    drift_statistics,
    energy_torus,
    mass,
    mode_magnitudes,
    trace_observable,
)


class TestMass:
    def test_torus_initial(self):
        p = torus_nls_1d(0.1)
        assert mass(p.basis, p.initial_state()) == pytest.approx(2 * np.pi, rel=1e-12)

    def test_hermite_initial(self):
        p = gross_pitaevskii_1d(0.1)
        assert mass(p.basis, p.initial_state()) == pytest.approx(2.0, rel=1e-12)


class TestEnergy:
    def test_initial_value(self):
        p = torus_nls_1d(0.3)
        e = energy_torus(p.basis, p.initial_state(), p.eps)
        assert e == pytest.approx(np.pi, rel=1e-12)

    def test_quartic_term_sign(self):
        # a pure e^{ix} profile has |psi|^4 = 1, so the quartic part vanishes
        # too; shifting content onto cos x makes it negative for eps > 0
        p = torus_nls_1d(0.5)
        c = np.zeros(64, dtype=complex)
        c[p.basis.index_of(1)] = 1.0
        e_plane = energy_torus(p.basis, StateVector(c, p.basis), p.eps)
        assert e_plane == pytest.approx(0.5 * 2 * np.pi, rel=1e-12)
        cosx = p.basis.to_coeffs(np.cos(p.basis.x) + 0j)
        e_cos = energy_torus(p.basis, StateVector(cosx, p.basis), p.eps)
        # kinetic pi/2, quartic eps/4 * int 2 cos 2x cos^4 x = eps pi/4
        assert e_cos == pytest.approx(np.pi / 2 + p.eps * np.pi / 4, rel=1e-12)

    def test_rejects_other_bases(self):
        p = gross_pitaevskii_1d(0.1)
        with pytest.raises(ValueError):
            energy_torus(p.basis, p.initial_state(), p.eps)


class TestModes:
    def test_fourier_indices(self):
        p = torus_nls_1d(0.1)
        mags = mode_magnitudes(p.initial_state(), [-1, 0, 1, 2])
        # cos x + sin x = (1-i)/2 e^{ix} + (1+i)/2 e^{-ix}
        assert mags == pytest.approx([np.sqrt(2) / 2, 0.0, np.sqrt(2) / 2, 0.0], abs=1e-13)

    def test_hermite_indices(self):
        p = gross_pitaevskii_1d(0.1)
        mags = mode_magnitudes(p.initial_state(), [0, 1, 2])
        assert mags == pytest.approx([1.0, 1.0, 0.0], abs=1e-13)


class TestDrift:
    def test_linear_drift_recovered(self):
        t = np.linspace(0.0, 10.0, 21)
        stats = drift_statistics(t, 5.0 + 0.25 * t)
        assert stats.slope == pytest.approx(0.25, rel=1e-12)
        assert stats.max_abs_error == pytest.approx(2.5, rel=1e-12)

    def test_constant_series(self):
        stats = drift_statistics([0.0, 1.0, 2.0], [3.0, 3.0, 3.0])
        assert stats.slope == 0.0
        assert stats.max_abs_error == 0.0

    def test_trace_over_trajectory(self):
        p = torus_nls_1d(0.1)
        traj = Trajectory()
        for t in (0.0, 1.0, 2.0):
            traj.record(t, p.initial_state())
        trace = trace_observable(traj, lambda s: mass(p.basis, s), "mass")
        assert trace.kind == "mass"
        assert trace.values == pytest.approx([2 * np.pi] * 3)
