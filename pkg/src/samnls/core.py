"""Problem definitions for the oscillatory cubic Schrodinger models.

All four models fit the filtered form

    i d/dt psi = A psi + eps_eff g(psi),      u(t) = e^{itA} psi(t),
    d/dt u = eps_eff f(t, u),   f(t, u) = -i e^{itA} g(e^{-itA} u),

where A has the integer (or half-integer) spectrum `lam` in the chosen basis
and g collects the cubic term plus, for the anisotropic 2D models, the
eps-free transversal linear block `g_lin_lam`.  f is then 2*pi periodic in t.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectral


@dataclass(frozen=True)
class StateVector:
    """Coefficient array tied to its basis."""

    coeffs: np.ndarray
    basis: object

    def copy(self):
        return StateVector(self.coeffs.copy(), self.basis)

    def require_same_basis(self, other):
        if self.basis is not other.basis:
            raise ValueError("states live in different bases")


@dataclass
class Trajectory:
    """Recorded macro-time series of one run."""

    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    wall_time: float = 0.0
    failure: str | None = None

    def record(self, t, state):
        self.times.append(float(t))
        self.states.append(state)


@dataclass(frozen=True)
class ProblemSpec:
    """Everything the integrators need to know about one model instance."""

    model: str
    basis: object
    eps: float            # model parameter as given by the user
    epsilon_eff: float    # prefactor of g: eps in 1D, eps^2 in 2D
    period: float
    t0: float             # macroscopic horizon; final time is t0 / epsilon_eff
    lam: np.ndarray       # spectrum of the filter operator A
    kin_lam: np.ndarray   # full linear part used by the splitting kinetic flow
    g_lin_lam: np.ndarray | None   # eps-free linear block inside g (2D models)
    cubic_weight: object  # pointwise factor of |psi|^2 psi on the grid
    strobo_sign: float    # e^{-i * period * A} = strobo_sign * Id
    psi0: np.ndarray      # default initial coefficients

    def initial_state(self):
        return StateVector(self.psi0.copy(), self.basis)

    @property
    def t_final(self):
        return self.t0 / self.epsilon_eff


def nonlinear_term(p, u):
    """g(u): cubic term (with its pointwise weight) plus the linear block."""
    c = spectral._coeffs_of(u)
    g = p.basis.to_grid(c)
    out = p.basis.to_coeffs(p.cubic_weight * np.abs(g) ** 2 * g)
    if p.g_lin_lam is not None:
        out = out + p.g_lin_lam * c
    return StateVector(out, p.basis)


def free_flow(p, t, u):
    """exp(-i t A) u, diagonal in the basis."""
    c = spectral._coeffs_of(u)
    return StateVector(np.exp(-1j * t * p.lam) * c, p.basis)


def filtered_rhs(p, t, u):
    """f(t, u) = -i e^{itA} g(e^{-itA} u).  The eps_eff factor is left to the caller."""
    c = spectral._coeffs_of(u)
    ph = np.exp(-1j * t * p.lam)
    w = ph * c
    gw = nonlinear_term(p, StateVector(w, p.basis)).coeffs
    return StateVector(-1j * np.conj(ph) * gw, p.basis)


def torus_nls_1d(eps, n_modes=64):
    """Cubic NLS on the torus with potential alpha(x) = 2 cos(2x).

    i psi_t = -psi_xx + eps alpha(x) |psi|^2 psi,  psi(0) = cos x + sin x.
    """
    b = spectral.FourierBasis1D(n_modes)
    lam = b.wavenumbers ** 2
    alpha = 2.0 * np.cos(2.0 * b.x)
    psi0 = b.to_coeffs(np.cos(b.x) + np.sin(b.x))
    return ProblemSpec(
        model="torus_nls_1d", basis=b, eps=eps, epsilon_eff=eps,
        period=2.0 * np.pi, t0=np.pi / 4.0,
        lam=lam, kin_lam=lam, g_lin_lam=None, cubic_weight=alpha,
        strobo_sign=1.0, psi0=psi0,
    )


def gross_pitaevskii_1d(eps, n_max=40):
    """1D Gross-Pitaevskii with unit harmonic trap, Hermite discretization.

    i psi_t = (-1/2 d_xx + x^2/2 - 1/2) psi + eps |psi|^2 psi; the shifted
    oscillator has eigenvalue k on h_k, so the flow of A is 2*pi periodic.
    psi(0) = h_0 + h_1.
    """
    b = spectral.HermiteBasis1D(n_max)
    lam = b.degrees.copy()
    psi0 = np.zeros(n_max + 1, dtype=complex)
    psi0[0] = 1.0
    psi0[1] = 1.0
    return ProblemSpec(
        model="gross_pitaevskii_1d", basis=b, eps=eps, epsilon_eff=eps,
        period=2.0 * np.pi, t0=2.0 * np.pi,
        lam=lam, kin_lam=lam, g_lin_lam=None, cubic_weight=1.0,
        strobo_sign=1.0, psi0=psi0,
    )


def aniso_torus_2d(eps, nx=32, ny=32):
    """Anisotropic cubic NLS on the 2D torus.

    i psi_t = -psi_yy - eps^2 psi_xx + eps^2 |psi|^2 psi with the weak
    direction folded into g: A = -d_yy, g(psi) = -psi_xx + |psi|^2 psi,
    effective prefactor eps^2.  psi(0) = 1 + 2 cos x + 2 cos y.
    """
    b = spectral.FourierBasis2D(nx, ny)
    lam = np.broadcast_to(b.ky ** 2, b.shape).copy()
    g_lin = np.broadcast_to(b.kx ** 2, b.shape).copy()
    X = b.x[:, None]
    Y = b.y[None, :]
    psi0 = b.to_coeffs(1.0 + 2.0 * np.cos(X) + 2.0 * np.cos(Y))
    return ProblemSpec(
        model="aniso_torus_2d", basis=b, eps=eps, epsilon_eff=eps ** 2,
        period=2.0 * np.pi, t0=2.0 * np.pi,
        lam=lam, kin_lam=lam + eps ** 2 * g_lin, g_lin_lam=g_lin,
        cubic_weight=1.0, strobo_sign=1.0, psi0=psi0,
    )


def aniso_gp_2d(eps, n_max_x=32, n_max_y=32, beta=5.0):
    """Anisotropic 2D Gross-Pitaevskii with harmonic traps in both directions.

    A = -1/2 d_yy + y^2/2 has half-integer spectrum k_y + 1/2, so
    e^{-i 2 pi A} = -Id; the transversal oscillator -1/2 d_xx + x^2/2 and the
    cubic term beta |psi|^2 psi enter through g with prefactor eps^2.  g is
    odd, which keeps the filtered field 2*pi periodic despite the sign.
    psi(0) = h_0(y) (h_0(x) + h_2(x)).
    """
    b = spectral.HermiteBasis2D(n_max_x, n_max_y)
    ky = b.by.degrees[None, :]
    kx = b.bx.degrees[:, None]
    lam = np.broadcast_to(ky + 0.5, b.shape).copy()
    g_lin = np.broadcast_to(kx + 0.5, b.shape).copy()
    psi0 = np.zeros(b.shape, dtype=complex)
    psi0[0, 0] = 1.0
    psi0[2, 0] = 1.0
    return ProblemSpec(
        model="aniso_gp_2d", basis=b, eps=eps, epsilon_eff=eps ** 2,
        period=2.0 * np.pi, t0=2.0 * np.pi,
        lam=lam, kin_lam=lam + eps ** 2 * g_lin, g_lin_lam=g_lin,
        cubic_weight=beta, strobo_sign=-1.0, psi0=psi0,
    )


MODELS = {
    "torus_nls_1d": torus_nls_1d,
    "gross_pitaevskii_1d": gross_pitaevskii_1d,
    "aniso_torus_2d": aniso_torus_2d,
    "aniso_gp_2d": aniso_gp_2d,
}


def make_model(model, eps, **sizes):
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    return MODELS[model](eps, **sizes)
