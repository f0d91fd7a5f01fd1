"""Complex-parameter Jacobi polynomials and phase-continuous helpers.

The closed-form wavefunctions of the catalog need Jacobi polynomials with
complex parameters and complex argument, plus complex powers and arctangents
evaluated without principal-branch jumps along a grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import BranchAnchorError
from .numerics import Grid, cumulative_integral

#: Recurrence denominators smaller than this (relative to the parameter
#: scale) trigger the explicit-series fallback.
RECURRENCE_DEGENERACY_TOL = 1e-13


@dataclass(frozen=True)
class JacobiParams:
    """Degree and (possibly complex) parameters of a Jacobi polynomial."""

    n: int
    alpha: complex
    beta: complex

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("degree must be >= 0")


def binomial_complex(z: complex, k: int) -> complex:
    """C(z, k) for integer k >= 0 and complex upper argument, via products."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = 1.0 + 0.0j
    for j in range(k):
        out *= (z - j) / (j + 1)
    return out


def jacobi_series(n: int, alpha: complex, beta: complex, y) -> complex:
    """P_n^(alpha,beta)(y) from the explicit finite hypergeometric sum.

    Sum_k C(n+alpha, n-k) C(n+beta, k) ((y-1)/2)^k ((y+1)/2)^(n-k).
    Used both as the recurrence-degeneracy fallback and as an independent
    oracle in the tests.
    """
    y = np.asarray(y, dtype=complex)
    half_m = (y - 1.0) / 2.0
    half_p = (y + 1.0) / 2.0
    out = np.zeros_like(y)
    for k in range(n + 1):
        coef = binomial_complex(n + alpha, n - k) * binomial_complex(n + beta, k)
        out = out + coef * half_m ** k * half_p ** (n - k)
    return out


def _recurrence_degenerate(n: int, alpha: complex, beta: complex) -> bool:
    s = alpha + beta
    scale = 1.0 + abs(alpha) + abs(beta)
    for m in range(2, n + 1):
        lead = 2.0 * m * (m + s) * (2.0 * m + s - 2.0)
        if abs(lead) < RECURRENCE_DEGENERACY_TOL * scale * m ** 3:
            return True
        if abs(2.0 * m + s - 2.0) < RECURRENCE_DEGENERACY_TOL * scale:
            return True
    return False


def jacobi(n: int, alpha: complex, beta: complex, y) -> complex:
    """P_n^(alpha,beta)(y) by the three-term recurrence with complex
    coefficients, falling back to the explicit series when a recurrence
    denominator degenerates (complex alpha+beta near a negative integer).
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    y = np.asarray(y, dtype=complex)
    if n == 0:
        return np.ones_like(y)
    p_prev = np.ones_like(y)
    p = ((alpha + beta + 2.0) * y + (alpha - beta)) / 2.0
    if n == 1:
        return p
    if _recurrence_degenerate(n, alpha, beta):
        return jacobi_series(n, alpha, beta, y)
    s = alpha + beta
    for m in range(2, n + 1):
        c1 = 2.0 * m * (m + s) * (2.0 * m + s - 2.0)
        bracket = (2.0 * m + s) * (2.0 * m + s - 2.0) * y + (alpha * alpha - beta * beta)
        c2 = (2.0 * m + s - 1.0)
        c3 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * (2.0 * m + s)
        p, p_prev = (c2 * bracket * p - c3 * p_prev) / c1, p
    return p


def phase_continuous_log(base: np.ndarray, anchor_index: int = 0) -> np.ndarray:
    """Logarithm of a nowhere-zero sample sequence, made continuous by
    unwinding 2*pi phase jumps along the sequence and anchored at the
    principal value at ``anchor_index``.
    """
    base = np.asarray(base, dtype=complex)
    mag = np.abs(base)
    if np.any(mag == 0.0):
        raise BranchAnchorError("phase-continuous log hit a zero of its base")
    theta = np.unwrap(np.angle(base))
    theta = theta - theta[anchor_index] + np.angle(base[anchor_index])
    return np.log(mag) + 1j * theta


def phase_continuous_power(base: np.ndarray, exponent: complex,
                           anchor_index: int = 0) -> np.ndarray:
    """``base ** exponent`` with the phase-continuous logarithm.

    Principal-branch jumps along the sequence would create spurious
    discontinuities that the residual tests would flag; this keeps the
    power smooth for smooth nowhere-zero bases.
    """
    return np.exp(exponent * phase_continuous_log(base, anchor_index))


def arctan_by_integration(y: np.ndarray, y_prime: np.ndarray, grid: Grid,
                          anchor_index: int | None = None) -> np.ndarray:
    """arctan(y(x)) as the cumulative integral of y'/(1+y^2).

    Anchored at the principal arctangent at ``anchor_index`` (defaults to
    the mid-grid point); stays on one analytic branch where a library
    arctangent would jump across its cuts.
    """
    y = np.asarray(y, dtype=complex)
    y_prime = np.asarray(y_prime, dtype=complex)
    if anchor_index is None:
        anchor_index = grid.n // 2
    denom = 1.0 + y * y
    if np.any(np.abs(denom) < 1e-300):
        raise BranchAnchorError("arctan integrand pole on a grid node")
    integral = cumulative_integral(y_prime / denom, grid, anchor_index)
    return integral + _principal_arctan(complex(y[anchor_index]))


def _principal_arctan(z: complex) -> complex:
    # arctan(z) = (i/2) [log(1 - i z) - log(1 + i z)], principal logs
    return 0.5j * (np.log(1.0 - 1j * z) - np.log(1.0 + 1j * z))
