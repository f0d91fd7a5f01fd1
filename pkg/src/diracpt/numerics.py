"""Grid infrastructure, differentiation/quadrature and eigenvalue oracles.

Everything here is potential-agnostic: the functions accept sampled fields
or samplers ``f(x_array) -> complex array`` and know nothing about the
potential catalog.  The eigenvalue oracles (two-sided shooting with a
Wronskian mismatch, Fourier/Hill matrices for periodic problems, a sine
discrete-variable Hamiltonian for bound-state problems) are the independent
checks the verification layer compares closed-form levels against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import (
    BoundaryConditionError,
    ConvergenceError,
    UndefinedResidualError,
)

ArrayC = np.ndarray
ArrayR = np.ndarray

#: Points dropped at each non-periodic boundary in residual norms;
#: one-sided stencils are formally 4th order but carry a larger constant.
RESIDUAL_BOUNDARY_TRIM = 3


@dataclass(frozen=True)
class Grid:
    """Uniform 1D grid.

    For periodic grids ``x1 - x0`` is one period and the right endpoint is
    excluded from storage (it is the wrapped image of ``x0``).
    """

    x0: float
    x1: float
    n: int
    periodic: bool = False

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid needs n >= 16, got {self.n}")
        if not self.x1 > self.x0:
            raise ValueError("grid needs x1 > x0")

    @property
    def h(self) -> float:
        if self.periodic:
            return (self.x1 - self.x0) / self.n
        return (self.x1 - self.x0) / (self.n - 1)

    @property
    def x(self) -> ArrayR:
        if self.periodic:
            return self.x0 + self.h * np.arange(self.n)
        return np.linspace(self.x0, self.x1, self.n)

    def interior(self, trim: int = RESIDUAL_BOUNDARY_TRIM) -> slice:
        """Slice selecting interior points (everything, when periodic)."""
        if self.periodic or trim == 0:
            return slice(None)
        return slice(trim, self.n - trim)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

# 4th-order one-sided stencils (top rows; bottom rows are mirrored).
_D1_EDGE = np.array([
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
]) / 12.0

_D2_EDGE = np.array([
    [45.0, -154.0, 214.0, -156.0, 61.0, -10.0],
    [10.0, -15.0, -4.0, 14.0, -6.0, 1.0],
]) / 12.0


def differentiate(f: ArrayC, grid: Grid, order: int = 1) -> ArrayC:
    """4th-order finite-difference derivative of a sampled field.

    Central stencils in the interior; wraparound stencils on periodic
    grids; one-sided 4th-order stencils at non-periodic boundaries.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    f = np.asarray(f, dtype=complex)
    if f.shape[-1] != grid.n:
        raise ValueError("field length does not match grid")
    h = grid.h

    if grid.periodic:
        def roll(k):
            return np.roll(f, -k, axis=-1)
        if order == 1:
            return (roll(-2) - 8 * roll(-1) + 8 * roll(1) - roll(2)) / (12 * h)
        return (-roll(-2) + 16 * roll(-1) - 30 * f + 16 * roll(1) - roll(2)) / (12 * h * h)

    out = np.empty_like(f)
    if order == 1:
        out[..., 2:-2] = (f[..., :-4] - 8 * f[..., 1:-3]
                          + 8 * f[..., 3:-1] - f[..., 4:]) / (12 * h)
        for i, row in enumerate(_D1_EDGE):
            out[..., i] = (f[..., :5] @ row) / h
            out[..., -1 - i] = -(f[..., -5:] @ row[::-1]) / h
    else:
        out[..., 2:-2] = (-f[..., :-4] + 16 * f[..., 1:-3] - 30 * f[..., 2:-2]
                          + 16 * f[..., 3:-1] - f[..., 4:]) / (12 * h * h)
        for i, row in enumerate(_D2_EDGE):
            out[..., i] = (f[..., :6] @ row) / (h * h)
            out[..., -1 - i] = (f[..., -6:] @ row[::-1]) / (h * h)
    return out


def cumulative_integral(f: ArrayC, grid: Grid, anchor_index: int = 0) -> ArrayC:
    """Antiderivative of a sampled field, zero at ``anchor_index``.

    Each interval is integrated with the cubic through its four nearest
    nodes (composite Simpson-grade rule, O(h^4) global, complex-safe).
    """
    f = np.asarray(f, dtype=complex)
    n = f.shape[-1]
    if n < 4:
        raise ValueError("need at least 4 samples")
    h = grid.h
    inc = np.empty(n - 1, dtype=complex)
    inc[1:-1] = (h / 24.0) * (-f[:-3] + 13 * f[1:-2] + 13 * f[2:-1] - f[3:])
    inc[0] = (h / 24.0) * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3])
    inc[-1] = (h / 24.0) * (f[-4] - 5 * f[-3] + 19 * f[-2] + 9 * f[-1])
    out = np.concatenate(([0.0 + 0.0j], np.cumsum(inc)))
    return out - out[anchor_index]


def schrodinger_residual(psi: ArrayC, u_eff: ArrayC | Callable[[ArrayR], ArrayC],
                         grid: Grid, trim: int = RESIDUAL_BOUNDARY_TRIM) -> float:
    """Relative interior L2 norm of ``-psi'' + U_eff psi``.

    ``u_eff`` may be sampled values or a sampler called on the grid.
    """
    psi = np.asarray(psi, dtype=complex)
    if not np.any(psi):
        raise UndefinedResidualError("residual of an identically-zero field")
    u = u_eff(grid.x) if callable(u_eff) else np.asarray(u_eff)
    lhs = -differentiate(psi, grid, order=2) + u * psi
    sl = grid.interior(trim)
    denom = np.linalg.norm(psi[sl])
    if denom == 0.0:
        raise UndefinedResidualError("field vanishes on the interior")
    return float(np.linalg.norm(lhs[sl]) / denom)


# ---------------------------------------------------------------------------
# two-sided shooting
# ---------------------------------------------------------------------------

_RENORM_EVERY = 50

try:  # optional compiled kernel; the numpy path below gives the same numbers
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is an optional extra
    _njit = None


def _rk4_sweep_numpy(u_half: ArrayC, h: float, psi0, dpsi0):
    nsteps = (u_half.shape[0] - 1) // 2
    psi = np.array(psi0, dtype=complex)
    dpsi = np.array(dpsi0, dtype=complex)
    for k in range(nsteps):
        ua, um, ub = u_half[2 * k], u_half[2 * k + 1], u_half[2 * k + 2]
        k1p = dpsi
        k1d = ua * psi
        k2p = dpsi + 0.5 * h * k1d
        k2d = um * (psi + 0.5 * h * k1p)
        k3p = dpsi + 0.5 * h * k2d
        k3d = um * (psi + 0.5 * h * k2p)
        k4p = dpsi + h * k3d
        k4d = ub * (psi + h * k3p)
        psi = psi + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        dpsi = dpsi + (h / 6.0) * (k1d + 2 * k2d + 2 * k3d + k4d)
        if (k + 1) % _RENORM_EVERY == 0:
            scale = np.maximum(np.abs(psi), np.abs(dpsi))
            scale = np.where(scale > 0, scale, 1.0)
            psi = psi / scale
            dpsi = dpsi / scale
    return psi, dpsi


if _njit is not None:
    @_njit(cache=True)
    def _rk4_sweep_compiled(u_half, h, psi0, dpsi0, renorm_every):  # pragma: no cover
        nsteps = (u_half.shape[0] - 1) // 2
        nbatch = u_half.shape[1]
        psi = psi0.copy()
        dpsi = dpsi0.copy()
        for k in range(nsteps):
            for j in range(nbatch):
                ua = u_half[2 * k, j]
                um = u_half[2 * k + 1, j]
                ub = u_half[2 * k + 2, j]
                p, d = psi[j], dpsi[j]
                k1p = d
                k1d = ua * p
                k2p = d + 0.5 * h * k1d
                k2d = um * (p + 0.5 * h * k1p)
                k3p = d + 0.5 * h * k2d
                k3d = um * (p + 0.5 * h * k2p)
                k4p = d + h * k3d
                k4d = ub * (p + h * k3p)
                psi[j] = p + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
                dpsi[j] = d + (h / 6.0) * (k1d + 2 * k2d + 2 * k3d + k4d)
            if (k + 1) % renorm_every == 0:
                for j in range(nbatch):
                    scale = max(abs(psi[j]), abs(dpsi[j]))
                    if scale > 0:
                        psi[j] = psi[j] / scale
                        dpsi[j] = dpsi[j] / scale
        return psi, dpsi


def _rk4_sweep(u_half: ArrayC, h: float, psi0, dpsi0):
    """Integrate ``psi'' = U psi`` with fixed-step RK4.

    ``u_half`` holds U at the start point, every half step and every full
    step (2*nsteps+1 rows), batched along a second axis.  The state is
    renormalized every ``_RENORM_EVERY`` steps; the scale drops out of the
    normalized mismatch.
    """
    if _njit is not None and u_half.ndim == 2:
        psi0 = np.ascontiguousarray(np.broadcast_to(psi0, u_half.shape[1:]),
                                    dtype=np.complex128)
        dpsi0 = np.ascontiguousarray(np.broadcast_to(dpsi0, u_half.shape[1:]),
                                     dtype=np.complex128)
        return _rk4_sweep_compiled(np.ascontiguousarray(u_half, dtype=np.complex128),
                                   float(h), psi0, dpsi0, _RENORM_EVERY)
    return _rk4_sweep_numpy(u_half, h, psi0, dpsi0)


def _shoot_batch(family: Callable[[ArrayR, ArrayR], ArrayC], eps: ArrayR,
                 grid: Grid, bc: str, max_step: float | None = None) -> ArrayC:
    """Normalized Wronskian mismatch M(eps) for a batch of real eps values."""
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    x0, x1 = grid.x0, grid.x1
    xm = 0.5 * (x0 + x1)

    u_probe = family(grid.x[:, None], eps[None, :])
    umax = float(np.max(np.abs(u_probe)))
    h = min(grid.h, 1.0 / (10.0 * np.sqrt(umax)) if umax > 0 else grid.h)
    if max_step is not None:
        h = min(h, max_step)
    nsteps = max(int(np.ceil((xm - x0) / h)), 8)
    h_half = (xm - x0) / nsteps  # equal half-domain lengths on both sides

    xL = x0 + 0.5 * h_half * np.arange(2 * nsteps + 1)
    xR = x1 - 0.5 * h_half * np.arange(2 * nsteps + 1)
    uL = family(xL[:, None], eps[None, :])
    uR = family(xR[:, None], eps[None, :])

    ones = np.ones(eps.shape, dtype=complex)
    zeros = np.zeros(eps.shape, dtype=complex)
    if bc == "dirichlet":
        psiL0, dpsiL0 = zeros, ones
        gR0, dgR0 = zeros, ones
    elif bc == "decaying":
        for u_end, side in ((uL[0], "left"), (uR[0], "right")):
            if np.any(np.real(u_end) <= 0):
                raise BoundaryConditionError(
                    f"decaying bc needs Re U_eff > 0 at the {side} end")
        kapL = np.sqrt(uL[0].astype(complex))
        kapR = np.sqrt(uR[0].astype(complex))
        psiL0, dpsiL0 = ones, kapL  # exp(+kap x): grows into the well
        gR0, dgR0 = ones, kapR      # in the reversed coordinate s = x1 - x
    else:
        raise ValueError(f"unknown bc {bc!r}")

    # The right sweep runs in s = x1 - x (so the same RK kernel applies);
    # there g'(s) = -psi'(x).
    psiL, dpsiL = _rk4_sweep(uL, h_half, psiL0, dpsiL0)
    gR, dgR = _rk4_sweep(uR, h_half, gR0, dgR0)
    psiR, dpsiR = gR, -dgR

    M = psiL * dpsiR - dpsiL * psiR
    ampL = np.sqrt(np.abs(psiL) ** 2 + np.abs(dpsiL) ** 2)
    ampR = np.sqrt(np.abs(psiR) ** 2 + np.abs(dpsiR) ** 2)
    denom = ampL * ampR
    if np.any(denom == 0):
        raise ConvergenceError("shooting amplitude vanished at the match point")
    return M / denom


def shoot(family: Callable[[ArrayR, ArrayR], ArrayC], eps: float, grid: Grid,
          bc: str = "dirichlet", max_step: float | None = None) -> complex:
    """Two-sided shooting mismatch for ``-psi'' + U_eff(x; eps) psi = 0``.

    ``family(x, eps)`` samples the effective potential; both arguments
    broadcast.  Returns the Wronskian of the left and right solutions at the
    midpoint, normalized by the local solution amplitudes, so eigenvalues of
    the boundary-value problem appear as zeros of ``|M(eps)|``.  The RK4
    step obeys ``h <= min(grid.h, 1/(10 max|U|^(1/2)))``.
    """
    return complex(_shoot_batch(family, np.array([eps]), grid, bc, max_step)[0])


@dataclass
class MismatchCurve:
    """Scan of the shooting mismatch over real eps, plus refined roots."""

    eps: ArrayR
    abs_m: ArrayR
    m: ArrayC
    roots: list = field(default_factory=list)  # (eps*, |M(eps*)|, M(eps*))


def find_real_eigenvalues(family: Callable[[ArrayR, ArrayR], ArrayC],
                          eps_lo: float, eps_hi: float, grid: Grid,
                          bc: str = "dirichlet", scan_step: float | None = None,
                          tol: float = 1e-6,
                          max_step: float | None = None) -> MismatchCurve:
    """Scan ``|M(eps)|`` on a real-eps grid and golden-refine its minima.

    Every interior local minimum of the scan is refined by golden-section
    search on ``|M|^2`` to bracket width 1e-10 and accepted when the final
    mismatch modulus is below ``tol``.  (Gating refinement on the sampled
    minimum value is fragile: with |M| slopes of order unity a genuine root
    can sit between scan points with both neighbors well above any fixed
    threshold.)  An empty root list is a valid outcome.
    """
    if not eps_hi > eps_lo:
        raise ValueError("need eps_lo < eps_hi")
    if scan_step is None:
        scan_step = (eps_hi - eps_lo) / 2000.0
    n_scan = int(np.floor((eps_hi - eps_lo) / scan_step)) + 1
    eps_grid = eps_lo + scan_step * np.arange(n_scan)

    def f2(e):
        return np.abs(_shoot_batch(family, e, grid, bc, max_step)) ** 2

    m_vals = _shoot_batch(family, eps_grid, grid, bc, max_step)
    abs_m = np.abs(m_vals)
    if not np.all(np.isfinite(abs_m)):
        raise ConvergenceError("mismatch scan produced non-finite values")

    interior = (abs_m[1:-1] <= abs_m[:-2]) & (abs_m[1:-1] <= abs_m[2:])
    cand = np.where(interior)[0] + 1

    curve = MismatchCurve(eps=eps_grid, abs_m=abs_m, m=m_vals)
    if len(cand) == 0:
        return curve

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a = eps_grid[cand - 1].astype(float)
    b = eps_grid[cand + 1].astype(float)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f2(c), f2(d)
    while np.max(b - a) > 1e-10:
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        fc_old, fd_old = fc, fd
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        # golden identity: the surviving interior point is reused exactly
        f_new = f2(np.where(left, c, d))
        fc = np.where(left, f_new, fd_old)
        fd = np.where(left, fc_old, f_new)

    eps_star = 0.5 * (a + b)
    m_star = _shoot_batch(family, eps_star, grid, bc, max_step)
    for e, m in zip(eps_star, m_star):
        if abs(m) < tol:
            curve.roots.append((float(e), float(abs(m)), complex(m)))
    curve.roots.sort(key=lambda r: r[0])
    return curve


# ---------------------------------------------------------------------------
# periodic problems: Fourier/Hill matrix
# ---------------------------------------------------------------------------


@dataclass
class HillResult:
    eigenvalues: ArrayC
    fourier_tail: float
    truncated: bool  # True when the Fourier tail exceeded 1e-12 at cutoff


def hill_band_eigenvalues(u_fn: Callable[[ArrayR], ArrayC], period: float,
                          modes: int, bloch_k: float = 0.0) -> HillResult:
    """All eigenvalues of the (2K+1)-mode Fourier truncation of
    ``-d^2/dx^2 + U`` at crystal momentum ``bloch_k``.

    Matrix entries are ``(bloch_k + 2 pi m / L)^2 delta_mm' + U_hat(m - m')``
    with Fourier coefficients taken from an 8K-point discrete transform.
    """
    if modes < 8:
        raise ValueError("need modes >= 8")
    K = int(modes)
    M = 8 * K
    x = period * np.arange(M) / M
    u = np.asarray(u_fn(x), dtype=complex)
    u_hat = np.fft.fft(u) / M  # coefficient of exp(+2 pi i m x / L) is u_hat[(-m) % M]

    m_idx = np.arange(-K, K + 1)
    diff = m_idx[:, None] - m_idx[None, :]
    H = u_hat[(-diff) % M]
    H[np.diag_indices(2 * K + 1)] += (bloch_k + 2.0 * np.pi * m_idx / period) ** 2

    tail_idx = np.concatenate([np.arange(K, 2 * K + 1), -np.arange(K, 2 * K + 1)])
    tail = float(np.max(np.abs(u_hat[(-tail_idx) % M])))
    lam = dense_complex_eigenvalues(H)
    order = np.argsort(lam.real)
    return HillResult(eigenvalues=lam[order], fourier_tail=tail,
                      truncated=tail > 1e-12)


# ---------------------------------------------------------------------------
# dense eigenvalues and the sine-basis bound-state Hamiltonian
# ---------------------------------------------------------------------------


def dense_complex_eigenvalues(a: ArrayC) -> ArrayC:
    """Eigenvalues of a dense complex matrix (desk scale, N <= 512).

    Backed by LAPACK's Hessenberg + shifted-QR path; the backward-error
    contract ``|A v - lambda v| <= 1e-10 |A|`` is exercised by the test
    suite against explicitly computed eigenvectors.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    if a.shape[0] > 512:
        raise ValueError("dense path is capped at N=512")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"dense eigensolver failed: {exc}") from exc


def sine_basis_hamiltonian(u_fn: Callable[[ArrayR], ArrayC], x0: float,
                           x1: float, n: int) -> tuple[ArrayC, ArrayR]:
    """Sine-basis (particle-in-box DVR) matrix of ``-d^2/dx^2 + U``.

    Returns the dense complex Hamiltonian on the ``n`` interior collocation
    points of (x0, x1) plus the points themselves.  The kinetic block is
    spectral (exact on the Dirichlet sine modes); the potential is diagonal.
    """
    L = x1 - x0
    j = np.arange(1, n + 1)
    x = x0 + L * j / (n + 1)
    S = np.sqrt(2.0 / (n + 1)) * np.sin(np.pi * np.outer(j, j) / (n + 1))
    k2 = (np.pi * j / L) ** 2
    T = (S * k2) @ S  # S diag(k^2) S, with S symmetric orthogonal
    H = T.astype(complex)
    H[np.diag_indices(n)] += np.asarray(u_fn(x), dtype=complex)
    return H, x


def sine_galerkin_hamiltonian(u_fn: Callable[[ArrayR], ArrayC], x0: float,
                              x1: float, n: int,
                              quad_points: int = 4096) -> tuple[ArrayC, ArrayR]:
    """Sine-basis Galerkin matrix of ``-d^2/dx^2 + U`` on (x0, x1).

    The potential block integrates U against basis products on a midpoint
    quadrature grid (which never touches the endpoints, so inverse-square
    endpoint singularities stay integrable against the vanishing basis).
    More accurate than the DVR diagonal approximation for singular
    potentials; identical in the smooth case.
    """
    L = x1 - x0
    t = (np.arange(quad_points) + 0.5) * (L / quad_points)
    u = np.asarray(u_fn(x0 + t), dtype=complex)
    m = np.arange(1, n + 1)
    basis = np.sin(np.pi * np.outer(m, t) / L)
    H = ((2.0 / L) * (basis * (u * (L / quad_points))) @ basis.T).astype(complex)
    H[np.diag_indices(n)] += (np.pi * m / L) ** 2
    return H, x0 + t
