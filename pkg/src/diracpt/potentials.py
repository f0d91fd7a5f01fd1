"""The potential catalog: families, effective potentials, closed-form levels
and wavefunctions.

Scalar families enter the Dirac pair as U(x) (units with the Fermi velocity
absorbed, U = V/c and eps = E/c); decoupling the spinor components gives the
energy-dependent effective potentials

    U_-/+ (x; eps, ky) = -(U - eps)^2 -/+ i U' + ky^2,

so ``psi_-`` solves the minus branch.  Lorentz-scalar families are described
by a superpotential W(x) whose branches W^2 -/+ W' are energy-independent;
their spectral parameter is eps = E^2 - ky^2.

Derivatives are always analytic per family, never finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .exceptions import (
    DomainError,
    LevelRangeError,
    PoleError,
    SingularLevelError,
    UnsupportedCaseError,
)
from .numerics import Grid
from .specialfun import arctan_by_integration, jacobi, phase_continuous_power

_POLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# family specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RosenMorseCot:
    """U(x) = i v0 cot(x) on (0, pi), v0 > 0."""

    v0: float

    def __post_init__(self):
        if not self.v0 > 0:
            raise ValueError("v0 must be > 0")


@dataclass(frozen=True)
class ShiftedParabola:
    """U(x) = (x - i mu)^2 on the whole line."""

    mu: float


@dataclass(frozen=True)
class TanhSech:
    """U(x) = -i mu tanh(x) + lam sech(x) on the whole line."""

    mu: float
    lam: float


@dataclass(frozen=True)
class SinePeriodic:
    """U(x) = i b sin(2x), period pi."""

    b: float


@dataclass(frozen=True)
class ShiftedSech:
    """U(x) = -lam sech(x - i mu) on the whole line (complex shift)."""

    lam: float
    mu: float = 0.0


LORENTZ_CASES = ("scarf1", "scarf2", "morse", "poschl_teller")


@dataclass(frozen=True)
class LorentzScalar:
    """Superpotential family for the position-dependent-mass coupling.

    case 'scarf1':        W = A tan x - (B + iC) sec x   on (-pi/2, pi/2)
    case 'scarf2':        W = A tanh x + (B + iC) sech x on the whole line
    case 'morse':         W = A - (B + iC) exp(-x)       on the whole line
    case 'poschl_teller': W = A coth x - (B + iC) csch x on (0, pi)
    """

    case: str
    a: float
    b: float
    c: float = 0.0

    def __post_init__(self):
        if self.case not in LORENTZ_CASES:
            raise ValueError(f"case must be one of {LORENTZ_CASES}")

    @property
    def coupling(self) -> complex:
        return self.b + 1j * self.c


PotentialSpec = Union[RosenMorseCot, ShiftedParabola, TanhSech, SinePeriodic,
                      ShiftedSech, LorentzScalar]


def domain(spec: PotentialSpec) -> tuple[float, float] | None:
    """Open interval the family lives on, or None for the whole line."""
    if isinstance(spec, RosenMorseCot):
        return (0.0, np.pi)
    if isinstance(spec, LorentzScalar):
        if spec.case == "scarf1":
            return (-np.pi / 2, np.pi / 2)
        if spec.case == "poschl_teller":
            # half line: coth/csch are hyperbolic, singular only at x = 0
            return (0.0, np.inf)
    return None


def _check_domain(spec: PotentialSpec, x: np.ndarray) -> None:
    dom = domain(spec)
    if dom is None:
        return
    x0, x1 = dom
    xr = np.real(np.asarray(x))
    if np.any(xr < x0 - _POLE_TOL) or np.any(xr > x1 + _POLE_TOL):
        raise DomainError(f"{type(spec).__name__} domain is ({x0:.6g}, {x1:.6g})")
    # the domain endpoints host the family's poles
    if isinstance(spec, RosenMorseCot):
        singular = np.abs(np.sin(xr)) < _POLE_TOL
    elif spec.case == "scarf1":
        singular = np.abs(np.cos(xr)) < _POLE_TOL
    else:  # poschl_teller
        singular = np.abs(np.sinh(xr)) < _POLE_TOL
    if np.any(singular):
        raise PoleError("evaluation on a pole of the potential")


def eval_potential(spec: PotentialSpec, x) -> np.ndarray:
    """U(x) for scalar families, the superpotential W(x) for Lorentz ones."""
    x = np.asarray(x, dtype=float)
    _check_domain(spec, x)
    if isinstance(spec, RosenMorseCot):
        if np.any(np.abs(np.sin(x)) < _POLE_TOL):
            raise PoleError("cotangent pole at x = 0, pi")
        return 1j * spec.v0 * (np.cos(x) / np.sin(x)) + 0j
    if isinstance(spec, ShiftedParabola):
        return (x - 1j * spec.mu) ** 2
    if isinstance(spec, TanhSech):
        return -1j * spec.mu * np.tanh(x) + spec.lam / np.cosh(x) + 0j
    if isinstance(spec, SinePeriodic):
        return 1j * spec.b * np.sin(2 * x) + 0j
    if isinstance(spec, ShiftedSech):
        return -spec.lam / np.cosh(x - 1j * spec.mu)
    if isinstance(spec, LorentzScalar):
        bc = spec.coupling
        if spec.case == "scarf1":
            return spec.a * np.tan(x) - bc / np.cos(x)
        if spec.case == "scarf2":
            return spec.a * np.tanh(x) + bc / np.cosh(x)
        if spec.case == "morse":
            return spec.a - bc * np.exp(-x) + 0j
        return spec.a / np.tanh(x) - bc / np.sinh(x)  # poschl_teller
    raise UnsupportedCaseError(f"unknown spec {spec!r}")


def potential_derivative(spec: PotentialSpec, x) -> np.ndarray:
    """Analytic U'(x) (scalar families) or W'(x) (Lorentz families)."""
    x = np.asarray(x, dtype=float)
    _check_domain(spec, x)
    if isinstance(spec, RosenMorseCot):
        return -1j * spec.v0 / np.sin(x) ** 2 + 0j
    if isinstance(spec, ShiftedParabola):
        return 2.0 * (x - 1j * spec.mu)
    if isinstance(spec, TanhSech):
        sech = 1.0 / np.cosh(x)
        return -1j * spec.mu * sech ** 2 - spec.lam * sech * np.tanh(x) + 0j
    if isinstance(spec, SinePeriodic):
        return 2j * spec.b * np.cos(2 * x) + 0j
    if isinstance(spec, ShiftedSech):
        z = x - 1j * spec.mu
        return spec.lam * np.tanh(z) / np.cosh(z)
    if isinstance(spec, LorentzScalar):
        bc = spec.coupling
        if spec.case == "scarf1":
            sec = 1.0 / np.cos(x)
            return spec.a * sec ** 2 - bc * sec * np.tan(x)
        if spec.case == "scarf2":
            sech = 1.0 / np.cosh(x)
            return spec.a * sech ** 2 - bc * sech * np.tanh(x)
        if spec.case == "morse":
            return bc * np.exp(-x) + 0j
        csch = 1.0 / np.sinh(x)
        return -spec.a * csch ** 2 + bc * csch / np.tanh(x)  # poschl_teller
    raise UnsupportedCaseError(f"unknown spec {spec!r}")


def effective_potential(spec: PotentialSpec, eps: float, ky: float,
                        branch: str, x) -> np.ndarray:
    """Decoupled second-order potential for one spinor branch.

    Scalar families: ``-(U - eps)^2 -/+ i U' + ky^2`` (minus branch carries
    psi_-).  Lorentz families: ``W^2 -/+ W'`` -- no eps or ky dependence
    inside the potential (the spectral parameter eps = E^2 - ky^2 sits on
    the right-hand side instead).
    """
    if branch not in ("minus", "plus"):
        raise ValueError("branch must be 'minus' or 'plus'")
    sign = -1.0 if branch == "minus" else 1.0
    if isinstance(spec, LorentzScalar):
        w = eval_potential(spec, x)
        return w * w + sign * potential_derivative(spec, x)
    u = eval_potential(spec, x)
    return -(u - eps) ** 2 + sign * 1j * potential_derivative(spec, x) + ky ** 2


# ---------------------------------------------------------------------------
# closed-form levels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticLevel:
    """One closed-form eigenvalue record.

    ``eps`` is the family's spectral parameter: the Dirac energy E/c for
    scalar families (positive root; both signs are physical), and the
    second-order eigenvalue eps = E^2 - ky^2 for Lorentz families (the
    corresponding Dirac energies are +/- sqrt(eps + ky^2), stashed in aux).
    """

    n: int
    eps: float
    ky: float = 0.0
    degeneracy: int = 1
    aux: dict = field(default_factory=dict)


def rosen_morse_levels(v0: float, ky: float, n_values) -> list[AnalyticLevel]:
    """Energy-dependent cotangent-family levels.

    eps_n^2 = (n^2 + 2 v0 n + ky^2) / (1 - v0^2/(v0+n)^2); the n = 0
    denominator vanishes identically, so that index is rejected (the only
    n = 0-like state is the eps = ky = 0 zero mode).
    """
    if not v0 > 0:
        raise ValueError("v0 must be > 0")
    out = []
    for n in n_values:
        n = int(n)
        if n == 0:
            raise SingularLevelError(
                "n = 0 level is singular for the cotangent family "
                "(denominator 1 - v0^2/(v0+n)^2 vanishes)")
        if n < 0:
            raise LevelRangeError("n must be >= 1")
        denom = 1.0 - v0 ** 2 / (v0 + n) ** 2
        eps2 = (n * n + 2.0 * v0 * n + ky * ky) / denom
        eps = float(np.sqrt(eps2))
        s = v0
        delta = eps * v0 / (s + n)  # magnitude of the imaginary parameter a
        out.append(AnalyticLevel(
            n=n, eps=eps, ky=ky, degeneracy=2 if ky != 0 else 1,
            aux={"s": s, "a_magnitude": delta,
                 "alpha": -s - n + delta, "beta": -s - n - delta}))
    return out


def scarf2_levels(a_par: float, n_values) -> list[AnalyticLevel]:
    """Complexified-sech family levels E_n = A^2 - (A - n)^2, n < floor(A-1)."""
    out = []
    for n in n_values:
        n = int(n)
        if n < 0 or not n < np.floor(a_par - 1.0):
            raise LevelRangeError(
                f"scarf2 window is 0 <= n < floor(A-1) = {np.floor(a_par - 1.0):g}")
        out.append(AnalyticLevel(n=n, eps=float(a_par ** 2 - (a_par - n) ** 2),
                                 aux={"A": a_par}))
    return out


def lorentz_levels(case: str, a_par: float, n_values,
                   ky: float = 0.0) -> list[AnalyticLevel]:
    """Second-order eigenvalues for the four superpotential families.

    'scarf1': eps = (A+n)^2 - A^2 for any n >= 0; the other three:
    eps = A^2 - (A-n)^2 for 0 <= n <= floor(A).  Eigenvalues depend only on
    A, which is what makes complexifying B harmless to realness.
    """
    if case not in LORENTZ_CASES:
        raise UnsupportedCaseError(f"case must be one of {LORENTZ_CASES}")
    out = []
    for n in n_values:
        n = int(n)
        if n < 0:
            raise LevelRangeError("n must be >= 0")
        if case == "scarf1":
            eps = (a_par + n) ** 2 - a_par ** 2
        else:
            if n > np.floor(a_par):
                raise LevelRangeError(
                    f"{case} window is 0 <= n <= floor(A) = {np.floor(a_par):g}")
            eps = a_par ** 2 - (a_par - n) ** 2
        e_dirac = float(np.sqrt(eps + ky * ky))
        out.append(AnalyticLevel(n=n, eps=float(eps), ky=ky,
                                 aux={"case": case, "A": a_par,
                                      "dirac_energy": e_dirac}))
    return out


def example2_ky_admissible(mu: float, n_max: int = 16) -> set[tuple[int, float]]:
    """Transverse momenta compatible with a zero mode of the tanh+sech family.

    The quantization condition ky^2 = (mu - n)^2 - mu^2 is non-negative only
    at n = 0 inside the window n <= floor(mu - 1), so the admissible set is
    {(0, 0)} for every mu > 1.
    """
    if not mu > 1:
        raise ValueError("need mu > 1 for a nonempty window")
    out: set[tuple[int, float]] = set()
    for n in range(0, min(n_max, int(np.floor(mu - 1.0))) + 1):
        ky2 = (mu - n) ** 2 - mu ** 2
        if ky2 >= 0.0:
            ky = float(np.sqrt(ky2))
            out.add((n, ky))
            if ky > 0.0:
                out.add((n, -ky))
    return out


# ---------------------------------------------------------------------------
# closed-form wavefunctions
# ---------------------------------------------------------------------------


def rosen_morse_wavefunction(level: AnalyticLevel, grid: Grid,
                             normalize: bool = False) -> np.ndarray:
    """psi_- sample for a cotangent-family level.

    The bound state carries the half-weight of the Jacobi polynomial,

        psi_- = (y-1)^(alpha/2) (y+1)^(beta/2) P_n^(alpha,beta)(y)
              = (y^2-1)^(-(s+n)/2) e^(i delta x) P_n^(alpha,beta)(y),

    with y = i cot x, delta = eps_n s/(s+n), alpha/beta = -s-n +/- delta
    (the identity (y-1)/(y+1) = e^(2ix) turns the weight ratio into the
    pure phase e^(i delta x)).  Substituting this ansatz into the decoupled
    equation forces exactly the level formula of ``rosen_morse_levels``.
    The complex power uses the phase-continuous logarithm anchored at
    x = pi/2.  Emitted unnormalized unless ``normalize`` (max-modulus).
    """
    s = level.aux["s"]
    n = level.n
    x = grid.x
    if np.any(x <= 0.0) or np.any(x >= np.pi):
        raise DomainError("grid must lie strictly inside (0, pi)")
    y = 1j * (np.cos(x) / np.sin(x))
    anchor = int(np.argmin(np.abs(x - np.pi / 2)))
    pref = phase_continuous_power(y * y - 1.0, -(s + n) / 2.0, anchor)
    delta = level.aux["a_magnitude"]
    psi = pref * np.exp(1j * delta * x) * \
        jacobi(n, level.aux["alpha"], level.aux["beta"], y)
    if normalize:
        psi = psi / np.max(np.abs(psi))
    return psi


def scarf2_wavefunction(n: int, a_par: float, coupling: complex, grid: Grid,
                        shift: float = 0.0, normalize: bool = False) -> np.ndarray:
    """n-th eigenfunction of the sech-family branch potential
    ``W^2 - W'`` with W = A tanh z + b sech z, z = x - i*shift.

    phi_n = i^n (1 + u^2)^(-A/2) exp(-b arctan u) P_n^(-ib-A-1/2, ib-A-1/2)(iu)
    with u = sinh z.  (The parameter order is pinned by the factorization
    ladder: applying -d/dx + W to the (A-1)-family ground state must
    reproduce P_1, which fixes alpha = -ib-A-1/2.)  The arctangent is
    accumulated by integrating u'/(1 + u^2) from the grid anchor, keeping
    one analytic branch; the prefactor power uses the phase-continuous
    logarithm.  Callers encode the catalog's PT-symmetric coupling as
    ``coupling = i*lam`` and the complexified Lorentz coupling as
    ``coupling = B + iC``.
    """
    if n < 0:
        raise LevelRangeError("n must be >= 0")
    b = complex(coupling)
    z = grid.x - 1j * shift
    u = np.sinh(z)
    anchor = grid.n // 2
    one_plus_u2 = 1.0 + u * u
    pref = phase_continuous_power(one_plus_u2, -a_par / 2.0, anchor)
    gd = arctan_by_integration(u, np.cosh(z), grid, anchor)
    psi = (1j ** n) * pref * np.exp(-b * gd) * \
        jacobi(n, -1j * b - a_par - 0.5, 1j * b - a_par - 0.5, 1j * u)
    if normalize:
        psi = psi / np.max(np.abs(psi))
    return psi


# ---------------------------------------------------------------------------
# zero modes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroModeEntry:
    """One analytic eps = 0 solution: the branch field and its ky."""

    n: int
    ky: float
    branch: str  # which decoupled branch the field solves: 'minus' or 'plus'
    psi: np.ndarray
    label: str


@dataclass(frozen=True)
class ZeroModeReport:
    spec: PotentialSpec
    entries: tuple
    degeneracy: int
    degeneracy_informational: bool = False
    note: str = ""


def zero_mode(spec: PotentialSpec, grid: Grid, n_max: int | None = None) -> ZeroModeReport:
    """Analytic zero-energy (eps = 0) solutions of the four sample families."""
    x = grid.x
    if isinstance(spec, ShiftedParabola):
        mu = spec.mu
        psi = np.exp(-1j * (x ** 3 / 3.0 - mu ** 2 * x - 1j * mu * x ** 2))
        return ZeroModeReport(
            spec=spec, degeneracy=1,
            entries=(ZeroModeEntry(0, 0.0, "minus", psi, "normalizable branch"),),
            note="the plus-branch partner grows as exp(+mu x^2); the viable "
                 "solution keeps psi_+ = 0")
    if isinstance(spec, TanhSech):
        admissible = example2_ky_admissible(spec.mu)
        entries = []
        for (n, ky) in sorted(admissible):
            psi = scarf2_wavefunction(n, spec.mu, 1j * spec.lam, grid)
            entries.append(ZeroModeEntry(n, ky, "minus", psi,
                                         "sech-family ground state"))
        return ZeroModeReport(spec=spec, entries=tuple(entries),
                              degeneracy=len(entries),
                              note="quantization ky^2 = (mu-n)^2 - mu^2 admits "
                                   "only n = ky = 0")
    if isinstance(spec, SinePeriodic):
        minus = np.exp(-(spec.b / 2.0) * np.cos(2 * x))
        plus = np.exp(+(spec.b / 2.0) * np.cos(2 * x))
        return ZeroModeReport(
            spec=spec, degeneracy=1,
            entries=(ZeroModeEntry(0, 0.0, "minus", minus, "band edge, period pi"),
                     ZeroModeEntry(0, 0.0, "plus", plus, "band edge, period pi")),
            note="one exactly-known band edge per branch")
    if isinstance(spec, ShiftedSech):
        lam, mu = spec.lam, spec.mu
        a_par = lam - 0.5
        count = int(max(0.0, np.floor(lam - 1.5)))
        top = max(0, count - 1) if n_max is None else n_max
        entries = []
        for n in range(0, top + 1):
            ky_mag = abs(n - lam + 0.5)
            psi = scarf2_wavefunction(n, a_par, 0.5j, grid, shift=mu)
            for ky in ((ky_mag, -ky_mag) if ky_mag > 0 else (0.0,)):
                entries.append(ZeroModeEntry(n, float(ky), "plus", psi,
                                             "complex-shifted sech state"))
        return ZeroModeReport(
            spec=spec, entries=tuple(entries), degeneracy=count,
            degeneracy_informational=True,
            note="quantized ky = +/-(n - lam + 1/2); the stated degeneracy "
                 "floor(lam - 3/2) is reported without asserting consistency "
                 "with the emitted window")
    raise UnsupportedCaseError(
        f"{type(spec).__name__} has no catalogued zero mode")
