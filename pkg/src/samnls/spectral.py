"""Spectral bases on the torus (Fourier) and on the line (Hermite functions).

Each basis object owns its collocation grid, quadrature weights and the pair of
transforms between grid values and spectral coefficients.  Coefficient arrays
are complex128 throughout; the transforms accept leading batch dimensions.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal


def hermite_functions(n_max, nodes):
    """Evaluate the L2-normalized Hermite functions h_0..h_n_max at the nodes.

    Uses the weighted three-term recurrence
        h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x),
    which keeps every intermediate bounded (no Gaussian-weight rescaling step,
    hence no overflow for the degrees used here).

    Returns an array H with H[k, j] = h_k(nodes[j]).
    """
    x = np.asarray(nodes, dtype=float)
    H = np.zeros((n_max + 1, x.size))
    H[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        H[1] = np.sqrt(2.0) * x * H[0]
    for k in range(1, n_max):
        H[k + 1] = np.sqrt(2.0 / (k + 1)) * x * H[k] - np.sqrt(k / (k + 1.0)) * H[k - 1]
    return H


def gauss_hermite_nodes(n_points):
    """Nodes of the n_points Gauss-Hermite rule, from the symmetric
    tridiagonal Jacobi matrix (off-diagonal sqrt(k/2))."""
    off = np.sqrt(np.arange(1, n_points) / 2.0)
    return eigh_tridiagonal(np.zeros(n_points), off, eigvals_only=True)


class FourierBasis1D:
    """Trigonometric basis e^{ikx}, k = -n/2+1..n/2, on [0, 2pi)."""

    kind = "fourier1d"

    def __init__(self, n_modes):
        if n_modes % 2:
            raise ValueError("n_modes must be even")
        self.n = n_modes
        self.dx = 2.0 * np.pi / n_modes
        self.x = self.dx * np.arange(n_modes)
        k = np.fft.fftfreq(n_modes, d=1.0 / n_modes)
        # store the aliased partner +n/2 rather than -n/2
        k[n_modes // 2] = n_modes // 2
        self.wavenumbers = k
        self.quad_weights = np.full(n_modes, self.dx)

    @property
    def shape(self):
        return (self.n,)

    def index_of(self, k):
        return int(k) % self.n

    def to_grid(self, coeffs):
        return np.fft.ifft(coeffs, axis=-1, norm="forward")

    def to_coeffs(self, grid):
        return np.fft.fft(grid, axis=-1, norm="forward")


class FourierBasis2D:
    """Tensor Fourier basis on [0, 2pi)^2; coeffs indexed [kx, ky]."""

    kind = "fourier2d"

    def __init__(self, nx, ny):
        if nx % 2 or ny % 2:
            raise ValueError("mode counts must be even")
        self.nx, self.ny = nx, ny
        self.dx = 2.0 * np.pi / nx
        self.dy = 2.0 * np.pi / ny
        self.x = self.dx * np.arange(nx)
        self.y = self.dy * np.arange(ny)
        kx = np.fft.fftfreq(nx, d=1.0 / nx)
        kx[nx // 2] = nx // 2
        ky = np.fft.fftfreq(ny, d=1.0 / ny)
        ky[ny // 2] = ny // 2
        self.kx = kx[:, None]
        self.ky = ky[None, :]
        self.quad_weights = np.full((nx, ny), self.dx * self.dy)

    @property
    def shape(self):
        return (self.nx, self.ny)

    def index_of(self, k):
        kx, ky = k
        return (int(kx) % self.nx, int(ky) % self.ny)

    def to_grid(self, coeffs):
        return np.fft.ifft2(coeffs, axes=(-2, -1), norm="forward")

    def to_coeffs(self, grid):
        return np.fft.fft2(grid, axes=(-2, -1), norm="forward")


class HermiteBasis1D:
    """Hermite functions h_0..h_N collocated at the N+1 Gauss-Hermite nodes.

    The rescaled weights w_j = 1 / sum_k h_k(x_j)^2 make the discrete
    transform pair an exact inverse and turn sum |psi(x_j)|^2 w_j into the
    exact L2 norm of any function in the span.
    """

    kind = "hermite1d"

    def __init__(self, n_max):
        self.n_max = n_max
        self.x = gauss_hermite_nodes(n_max + 1)
        self.eval_matrix = hermite_functions(n_max, self.x)  # [k, j]
        self.quad_weights = 1.0 / np.sum(self.eval_matrix ** 2, axis=0)
        self.degrees = np.arange(n_max + 1, dtype=float)
        # analysis matrix: coeffs = grid @ analysis, synthesis: grid = coeffs @ eval
        self._analysis = (self.eval_matrix * self.quad_weights).T

    @property
    def shape(self):
        return (self.n_max + 1,)

    def index_of(self, k):
        if not 0 <= k <= self.n_max:
            raise ValueError("degree out of range")
        return int(k)

    def to_grid(self, coeffs):
        return coeffs @ self.eval_matrix

    def to_coeffs(self, grid):
        return grid @ self._analysis


class HermiteBasis2D:
    """Tensor Hermite basis; coeffs indexed [kx, ky] by degree."""

    kind = "hermite2d"

    def __init__(self, n_max_x, n_max_y):
        self.bx = HermiteBasis1D(n_max_x)
        self.by = HermiteBasis1D(n_max_y)
        self.x = self.bx.x
        self.y = self.by.x
        self.quad_weights = np.outer(self.bx.quad_weights, self.by.quad_weights)

    @property
    def shape(self):
        return (self.bx.n_max + 1, self.by.n_max + 1)

    def index_of(self, k):
        kx, ky = k
        return (self.bx.index_of(kx), self.by.index_of(ky))

    def to_grid(self, coeffs):
        g = coeffs @ self.by.eval_matrix          # (..., Kx, Jy)
        return np.matmul(self.bx.eval_matrix.T, g)

    def to_coeffs(self, grid):
        c = grid @ self.by._analysis              # (..., Jx, Ky)
        return np.matmul(self.bx._analysis.T, c)


def _coeffs_of(u):
    return getattr(u, "coeffs", u)


def to_grid(basis, u):
    """Grid values of a state (StateVector or raw coefficient array)."""
    return basis.to_grid(_coeffs_of(u))


def to_coeffs(basis, grid):
    """Spectral coefficients of grid values."""
    return basis.to_coeffs(np.asarray(grid, dtype=complex))


def l2_norm(basis, u):
    g = basis.to_grid(_coeffs_of(u))
    return float(np.sqrt(np.sum(np.abs(g) ** 2 * basis.quad_weights)))


def l2_norm_and_error(basis, u, v):
    """Discrete L2 norms: returns (||u||, ||u - v||) on the collocation grid."""
    gu = basis.to_grid(_coeffs_of(u))
    gv = basis.to_grid(_coeffs_of(v))
    w = basis.quad_weights
    nu = np.sqrt(np.sum(np.abs(gu) ** 2 * w))
    err = np.sqrt(np.sum(np.abs(gu - gv) ** 2 * w))
    return float(nu), float(err)
