"""Per-case verification campaigns: closed forms vs independent oracles.

Each registered case runs its full pipeline (analytic levels, sampled
wavefunctions, second-order residuals, spinor reconstruction, first-order
residuals, oracle eigenvalue search, normalizability classification) and
returns a structured, deterministically-serializable report.
"""

from __future__ import annotations

import difflib
import json
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .exceptions import BoundaryConditionError, ConfigError
from .numerics import (
    Grid,
    cumulative_integral,
    dense_complex_eigenvalues,
    find_real_eigenvalues,
    hill_band_eigenvalues,
    schrodinger_residual,
    sine_galerkin_hamiltonian,
)
from .potentials import (
    LORENTZ_CASES,
    LorentzScalar,
    RosenMorseCot,
    ShiftedParabola,
    ShiftedSech,
    SinePeriodic,
    TanhSech,
    effective_potential,
    eval_potential,
    example2_ky_admissible,
    lorentz_levels,
    rosen_morse_levels,
    rosen_morse_wavefunction,
    scarf2_wavefunction,
    zero_mode,
)
from .spinor import (
    SpinorField,
    dirac_residual,
    from_pm_basis,
    lorentz_residual,
    reconstruct_minus,
    reconstruct_plus,
    spin_flip,
)

REPORT_SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# report containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ToleranceSchema:
    """One consistent tolerance contract across the heterogeneous cases."""

    residual: float = 1e-6
    eigenvalue_rel: float = 1e-5
    imag_part: float = 1e-8
    zero_mode_hill: float = 1e-8

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ToleranceSchema":
        unknown = set(d) - set(cls().to_dict())
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class LevelRecord:
    """Per-level comparison row."""

    n: int
    ky: float
    eps_analytic: float
    eps_oracle: float | None = None
    abs_delta: float | None = None
    residual1: float | None = None       # first coupled equation
    residual2: float | None = None       # second coupled equation
    schrodinger_residual: float | None = None
    oracle_imag: float | None = None
    normalizability: str | None = None
    passed: bool = True
    note: str = ""


@dataclass
class VerificationReport:
    """Structured outcome of one case pipeline.

    ``wall_time_s`` is informational only and excluded from the canonical
    serialization so that identical inputs produce bit-identical reports.
    """

    case: str
    params: dict
    tolerances: ToleranceSchema
    grid: dict
    levels: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    passed: bool = True
    wall_time_s: float = 0.0

    def to_canonical_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "case": self.case,
            "params": _plain(self.params),
            "tolerances": self.tolerances.to_dict(),
            "grid": _plain(self.grid),
            "levels": [_plain(asdict(rec)) for rec in self.levels],
            "extras": _plain(self.extras),
            "notes": list(self.notes),
            "passed": bool(self.passed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_canonical_dict(), sort_keys=True, indent=2)


def _plain(obj):
    """Recursively convert numpy scalars/arrays for JSON serialization."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


# ---------------------------------------------------------------------------
# normalizability classification
# ---------------------------------------------------------------------------


def classify_normalizability(psi: np.ndarray, grid: Grid,
                             domain_kind: str = "line") -> str:
    """Coarse boundary-behaviour label for a sampled field.

    Relative to the interior max (central half of the samples): decaying if
    boundary ratio < 1e-8, growing if > 1e+3, oscillatory if the modulus
    varies by less than 10% across both outer quarters, otherwise
    finite-domain.
    """
    mod = np.abs(np.asarray(psi))
    q = max(grid.n // 4, 2)
    peak = float(np.max(mod[q:-q]))
    if peak == 0.0:
        return "finite-domain" if not np.any(mod) else "growing"
    boundary = max(mod[0], mod[-1]) / peak
    if boundary < 1e-8:
        return "decaying"
    if boundary > 1e3:
        return "growing"
    variations = []
    for quarter in (mod[:q], mod[-q:]):
        top = float(np.max(quarter))
        if top == 0.0:
            return "decaying"
        variations.append((top - float(np.min(quarter))) / top)
    if max(variations) < 0.10:
        return "oscillatory"
    return "finite-domain"


# ---------------------------------------------------------------------------
# shared pipeline helpers
# ---------------------------------------------------------------------------


def _merge_params(defaults: dict, params: dict) -> dict:
    unknown = set(params) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown parameters: {sorted(unknown)} "
                          f"(accepted: {sorted(defaults)})")
    return {**defaults, **params}


def _rosen_morse_level_record(spec, lev, grid, tol) -> LevelRecord:
    """Wavefunction, second-order residual and spinor residuals for one
    closed-form level of the cotangent family."""
    psi_minus = rosen_morse_wavefunction(lev, grid)
    schr = schrodinger_residual(
        psi_minus,
        lambda x: effective_potential(spec, lev.eps, lev.ky, "minus", x), grid)
    if lev.ky != 0.0:
        psi_plus = reconstruct_plus(psi_minus, spec, lev.eps, lev.ky, grid)
        s = from_pm_basis(psi_plus, psi_minus, grid, lev.ky, lev.eps)
    else:
        s = from_pm_basis(np.zeros_like(psi_minus), psi_minus, grid, 0.0, lev.eps)
    r1, r2 = dirac_residual(s, spec)
    ok = max(schr, r1, r2) < tol.residual
    return LevelRecord(
        n=lev.n, ky=lev.ky, eps_analytic=lev.eps,
        residual1=r1, residual2=r2, schrodinger_residual=schr,
        normalizability=classify_normalizability(psi_minus, grid, "compact"),
        passed=ok)


def _spin_flip_consistency(s: SpinorField, spec) -> float:
    """Residual shift under (psi_A <-> psi_B, ky -> -ky); zero for solutions
    and, by the algebraic symmetry of the pair, machine-zero in general."""
    r = dirac_residual(s, spec)
    rf = dirac_residual(spin_flip(s), spec)
    return float(max(abs(rf[0] - r[1]), abs(rf[1] - r[0])))


def aitken_extrapolated_match(spectra: list, target: float) -> complex:
    """Nearest eigenvalue to ``target`` from each truncation size,
    accelerated by one Aitken step (kills the leading power-law tail)."""
    seq = [sp[np.argmin(np.abs(sp - target))] for sp in spectra]
    if len(seq) < 3:
        return complex(seq[-1])
    d1, d2 = seq[-2] - seq[-3], seq[-1] - seq[-2]
    if abs(d2 - d1) < 1e-300:
        return complex(seq[-1])
    return complex(seq[-1] - d2 * d2 / (d2 - d1))


def lorentz_dense_spectra(spec: LorentzScalar, branch: str, x0: float,
                          x1: float, sizes=(255, 361, 511),
                          quad_points: int = 4096) -> list:
    """Dense spectra of the branch operator at several truncation sizes."""
    out = []
    for n in sizes:
        h, _ = sine_galerkin_hamiltonian(
            lambda x: effective_potential(spec, 0.0, 0.0, branch, x),
            x0, x1, n, quad_points)
        out.append(dense_complex_eigenvalues(h))
    return out


# ---------------------------------------------------------------------------
# case pipelines
# ---------------------------------------------------------------------------

_RM_DEFAULTS = {"v0": 2.0, "ky": 1.0, "n_min": 1, "n_max": 4}


def _run_rosen_morse(params: dict, tol: ToleranceSchema,
                     grid: Grid | None) -> VerificationReport:
    p = _merge_params(_RM_DEFAULTS, params)
    v0, ky = float(p["v0"]), float(p["ky"])
    n_values = list(range(int(p["n_min"]), int(p["n_max"]) + 1))
    grid = grid or Grid(1e-3, np.pi - 1e-3, 4001)
    rep = VerificationReport(case="rosen-morse", params=p, tolerances=tol,
                             grid=_grid_dict(grid))

    levels = rosen_morse_levels(v0, ky, n_values)
    records = [_rosen_morse_level_record(RosenMorseCot(v0), lev, grid, tol)
               for lev in levels]

    # independent eigenvalue search on the energy-dependent family
    spec = RosenMorseCot(v0)
    family = lambda x, e: effective_potential(spec, e, ky, "minus", x)
    shoot_grid = Grid(1e-3, np.pi - 1e-3, 2001)
    lo = 0.5 * levels[0].eps
    hi = levels[-1].eps + 0.5
    curve = find_real_eigenvalues(family, lo, hi, shoot_grid, bc="dirichlet",
                                  tol=1e-6)
    for lev, rec in zip(levels, records):
        if curve.roots:
            root = min(curve.roots, key=lambda r: abs(r[0] - lev.eps))
            rec.eps_oracle = root[0]
            rec.abs_delta = abs(root[0] - lev.eps)
            rec.oracle_imag = abs(root[2].imag)
            rec.passed = rec.passed and \
                rec.abs_delta <= tol.eigenvalue_rel * abs(lev.eps)
        else:
            rec.passed = False
            rec.note = "no oracle root found"

    # spin-flip consistency on the first reconstructed spinor
    psi_minus = rosen_morse_wavefunction(levels[0], grid)
    psi_plus = reconstruct_plus(psi_minus, spec, levels[0].eps, ky, grid)
    s = from_pm_basis(psi_plus, psi_minus, grid, ky, levels[0].eps)
    rep.extras["spin_flip_residual_shift"] = _spin_flip_consistency(s, spec)
    rep.extras["mismatch_curve"] = {
        "eps": curve.eps[::4], "abs_m": curve.abs_m[::4]}
    rep.extras["oracle_roots"] = [
        {"eps": r[0], "abs_m": r[1], "m_re": r[2].real, "m_im": r[2].imag}
        for r in curve.roots]
    rep.levels = records
    rep.passed = all(r.passed for r in records)
    return rep


def _run_example1(params: dict, tol: ToleranceSchema,
                  grid: Grid | None) -> VerificationReport:
    p = _merge_params({"mu": 1.0}, params)
    mu = float(p["mu"])
    grid = grid or Grid(-8.0, 8.0, 8001)
    rep = VerificationReport(case="example1", params=p, tolerances=tol,
                             grid=_grid_dict(grid))
    zm = zero_mode(ShiftedParabola(mu), grid)
    entry = zm.entries[0]
    spec = ShiftedParabola(mu)
    schr = schrodinger_residual(
        entry.psi, lambda x: effective_potential(spec, 0.0, 0.0, "minus", x), grid)
    s = from_pm_basis(np.zeros_like(entry.psi), entry.psi, grid, 0.0, 0.0)
    r1, r2 = dirac_residual(s, spec)
    mid = grid.n // 2
    decay_ratio = float(np.abs(entry.psi[-1]) / np.abs(entry.psi[mid]))
    label = classify_normalizability(entry.psi, grid, "line")
    discarded = np.exp(+1j * (grid.x ** 3 / 3.0 - mu ** 2 * grid.x
                              - 1j * mu * grid.x ** 2))
    rec = LevelRecord(n=0, ky=0.0, eps_analytic=0.0, residual1=r1, residual2=r2,
                      schrodinger_residual=schr, normalizability=label,
                      passed=max(schr, r1, r2) < tol.residual and label == "decaying")
    rep.levels = [rec]
    rep.extras["degeneracy"] = zm.degeneracy
    rep.extras["boundary_to_peak_ratio"] = decay_ratio
    rep.extras["discarded_branch_classification"] = \
        classify_normalizability(discarded, grid, "line")
    rep.extras["spin_flip_residual_shift"] = _spin_flip_consistency(s, spec)
    rep.notes.append(zm.note)
    rep.passed = rec.passed
    return rep


def _run_example2(params: dict, tol: ToleranceSchema,
                  grid: Grid | None) -> VerificationReport:
    p = _merge_params({"mu": 3.0, "lam": 1.0}, params)
    mu, lam = float(p["mu"]), float(p["lam"])
    grid = grid or Grid(-12.0, 12.0, 4001)
    rep = VerificationReport(case="example2", params=p, tolerances=tol,
                             grid=_grid_dict(grid))
    spec = TanhSech(mu, lam)
    admissible = sorted(example2_ky_admissible(mu))
    zm = zero_mode(spec, grid)
    records = []
    for entry in zm.entries:
        schr = schrodinger_residual(
            entry.psi,
            lambda x: effective_potential(spec, 0.0, entry.ky, "minus", x), grid)
        s = from_pm_basis(np.zeros_like(entry.psi), entry.psi, grid,
                          entry.ky, 0.0)
        r1, r2 = dirac_residual(s, spec)
        label = classify_normalizability(entry.psi, grid, "line")
        records.append(LevelRecord(
            n=entry.n, ky=entry.ky, eps_analytic=0.0, residual1=r1,
            residual2=r2, schrodinger_residual=schr, normalizability=label,
            passed=max(schr, r1, r2) < tol.residual and label == "decaying"))
    rep.levels = records
    rep.extras["admissible"] = [{"n": n, "ky": k} for n, k in admissible]
    rep.extras["admissible_is_origin_only"] = admissible == [(0, 0.0)]
    rep.notes.append(zm.note)
    rep.passed = all(r.passed for r in records) and \
        bool(rep.extras["admissible_is_origin_only"])
    return rep


def _run_example3(params: dict, tol: ToleranceSchema,
                  grid: Grid | None) -> VerificationReport:
    p = _merge_params({"b": 1.0, "modes": 32, "bloch_k": 0.0}, params)
    b, modes, bloch_k = float(p["b"]), int(p["modes"]), float(p["bloch_k"])
    grid = grid or Grid(0.0, np.pi, 2048, periodic=True)
    rep = VerificationReport(case="example3", params=p, tolerances=tol,
                             grid=_grid_dict(grid))
    spec = SinePeriodic(b)
    zm = zero_mode(spec, grid)
    records = []
    for entry in zm.entries:
        schr = schrodinger_residual(
            entry.psi,
            lambda x: effective_potential(spec, 0.0, 0.0, entry.branch, x), grid)
        hill = hill_band_eigenvalues(
            lambda x: effective_potential(spec, 0.0, 0.0, entry.branch, x),
            np.pi, modes, bloch_k)
        nearest = hill.eigenvalues[np.argmin(np.abs(hill.eigenvalues))]
        # the minus-branch carrier has psi_B = +psi_A, the plus-branch -psi_A
        sgn = 1.0 if entry.branch == "minus" else -1.0
        spinor = SpinorField(grid, entry.psi, sgn * entry.psi, 0.0, 0.0)
        r1, r2 = dirac_residual(spinor, spec)
        ok = (schr < tol.residual and abs(nearest) < tol.zero_mode_hill
              and max(r1, r2) < tol.residual)
        records.append(LevelRecord(
            n=0, ky=0.0, eps_analytic=0.0, eps_oracle=float(nearest.real),
            abs_delta=float(abs(nearest)), residual1=r1, residual2=r2,
            schrodinger_residual=schr, oracle_imag=float(abs(nearest.imag)),
            normalizability="finite-domain", passed=ok,
            note=f"hill branch {entry.branch}, K={modes}"))
        rep.extras[f"hill_{entry.branch}"] = {
            "min_abs_eigenvalue": float(abs(nearest)),
            "fourier_tail": hill.fourier_tail,
            "truncated": hill.truncated,
            "lowest_real_parts": np.sort(hill.eigenvalues.real)[:8],
        }
    rep.levels = records
    rep.notes.append(zm.note)
    rep.passed = all(r.passed for r in records)
    return rep


def _run_example4(params: dict, tol: ToleranceSchema,
                  grid: Grid | None) -> VerificationReport:
    p = _merge_params({"lam": 2.0, "mu": 0.0}, params)
    lam, mu = float(p["lam"]), float(p["mu"])
    grid = grid or Grid(-12.0, 12.0, 4001)
    rep = VerificationReport(case="example4", params=p, tolerances=tol,
                             grid=_grid_dict(grid))
    spec = ShiftedSech(lam, mu)
    zm = zero_mode(spec, grid)
    records = []
    for entry in zm.entries:
        schr = schrodinger_residual(
            entry.psi,
            lambda x: effective_potential(spec, 0.0, entry.ky, "plus", x), grid)
        if entry.ky != 0.0:
            psi_minus = reconstruct_minus(entry.psi, spec, 0.0, entry.ky, grid)
            s = from_pm_basis(entry.psi, psi_minus, grid, entry.ky, 0.0)
        else:
            s = from_pm_basis(entry.psi, np.zeros_like(entry.psi), grid, 0.0, 0.0)
        r1, r2 = dirac_residual(s, spec)
        label = classify_normalizability(entry.psi, grid, "line")
        records.append(LevelRecord(
            n=entry.n, ky=entry.ky, eps_analytic=0.0, residual1=r1,
            residual2=r2, schrodinger_residual=schr, normalizability=label,
            passed=max(schr, r1, r2) < tol.residual))
    rep.levels = records
    rep.extras["quantized_ky"] = sorted({float(e.ky) for e in zm.entries})
    rep.extras["degeneracy_count"] = zm.degeneracy
    rep.extras["degeneracy_informational"] = zm.degeneracy_informational
    rep.notes.append(zm.note)
    rep.passed = all(r.passed for r in records)
    return rep


_LORENTZ_DOMAINS = {
    "scarf1": (-np.pi / 2, np.pi / 2),
    "scarf2": (-12.5, 12.5),
    "morse": (-5.0, 18.0),
    "poschl_teller": (0.0, 30.0),
}


def lorentz_in_range(case: str, a_par: float, b_par: float, n: int) -> bool:
    """Whether the closed-form level n is a normalizable eigenstate of the
    minus-branch operator (endpoint-exponent analysis; the imaginary part
    of the coupling only rotates phases and never affects moduli)."""
    if case == "scarf1":
        return a_par + n > abs(b_par)
    if case in ("scarf2", "morse"):
        return n < a_par
    # poschl_teller: x^(B-A) endpoint behaviour and exp(-(A-n)x) decay
    return b_par > a_par and n < a_par


def _run_lorentz(case: str, params: dict, tol: ToleranceSchema,
                 grid: Grid | None) -> VerificationReport:
    p = _merge_params({"A": 3.0, "B": 1.0, "C": 0.0, "ky": 0.0, "n_max": None}, params)
    a_par, b_par, c_par = float(p["A"]), float(p["B"]), float(p["C"])
    ky = float(p["ky"])
    spec = LorentzScalar(case, a_par, b_par, c_par)
    x0, x1 = _LORENTZ_DOMAINS[case]
    if grid is not None:
        x0, x1 = grid.x0, grid.x1
    rep = VerificationReport(case=f"lorentz-{_CASE_SLUGS[case]}", params=p,
                             tolerances=tol,
                             grid={"x0": x0, "x1": x1, "n": 511,
                                   "periodic": False})

    if case == "scarf1":
        window = range(0, 5 if p["n_max"] is None else int(p["n_max"]) + 1)
    else:
        window = range(0, int(np.floor(a_par)) + 1 if p["n_max"] is None
                       else int(p["n_max"]) + 1)
    levels = lorentz_levels(case, a_par, list(window), ky=ky)
    in_range = [lorentz_in_range(case, a_par, b_par, lev.n) for lev in levels]

    records = []
    spectra = None
    if any(in_range):
        spectra = lorentz_dense_spectra(spec, "minus", x0, x1)
    residual_grid = Grid(x0 + (0.0 if case in ("scarf2", "morse") else 1e-3),
                         x1 - (0.0 if case in ("scarf2", "morse") else 1e-3),
                         4001)
    for lev, ok_range in zip(levels, in_range):
        rec = LevelRecord(n=lev.n, ky=ky, eps_analytic=lev.eps)
        if not ok_range:
            rec.note = ("formula level outside the normalizable window "
                        "(endpoint analysis); reported without oracle")
            rec.passed = True
            records.append(rec)
            continue
        lam = aitken_extrapolated_match(spectra, lev.eps)
        rec.eps_oracle = float(lam.real)
        rec.abs_delta = float(abs(lam - lev.eps))
        rec.oracle_imag = float(abs(lam.imag))
        rec.passed = (rec.abs_delta <= tol.eigenvalue_rel * max(1.0, abs(lev.eps))
                      and rec.oracle_imag < tol.imag_part)
        if case == "scarf2":
            psi = scarf2_wavefunction(lev.n, a_par, spec.coupling, residual_grid)
            rec.schrodinger_residual = schrodinger_residual(
                psi, lambda x: effective_potential(spec, 0, 0, "minus", x)
                - lev.eps, residual_grid)
            rec.normalizability = classify_normalizability(
                psi, residual_grid, "line")
            rec.passed = rec.passed and rec.schrodinger_residual < tol.residual
        records.append(rec)

    # factorized ground state: (d/dx + W) psi_- = 0 at E = ky
    if lorentz_in_range(case, a_par, b_par, 0):
        w = eval_potential(spec, residual_grid.x)
        psi0 = np.exp(-cumulative_integral(w, residual_grid,
                                           residual_grid.n // 2))
        r1, r2 = lorentz_residual(psi0, np.zeros_like(psi0), spec,
                                  ky, ky, residual_grid)
        rep.extras["ground_state_factorization_residuals"] = [r1, r2]
        dirac_e = [float(np.sqrt(lev.eps + ky * ky)) for lev in levels]
        rep.extras["dirac_energies_positive_root"] = dirac_e

    rep.levels = records
    rep.extras["in_range"] = [bool(b) for b in in_range]
    if not any(in_range):
        rep.notes.append(
            "no closed-form level is normalizable at these parameters "
            "(the half-line family needs B > A); oracle comparison is vacuous")
    rep.passed = all(r.passed for r in records)
    return rep


_CASE_SLUGS = {"scarf1": "scarf1", "scarf2": "scarf2", "morse": "morse",
               "poschl_teller": "poschl-teller"}


def _grid_dict(grid: Grid) -> dict:
    return {"x0": grid.x0, "x1": grid.x1, "n": grid.n,
            "periodic": grid.periodic}


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

CASE_REGISTRY = {
    "rosen-morse": _run_rosen_morse,
    "example1": _run_example1,
    "example2": _run_example2,
    "example3": _run_example3,
    "example4": _run_example4,
    "lorentz-scarf1": lambda p, t, g: _run_lorentz("scarf1", p, t, g),
    "lorentz-scarf2": lambda p, t, g: _run_lorentz("scarf2", p, t, g),
    "lorentz-morse": lambda p, t, g: _run_lorentz("morse", p, t, g),
    "lorentz-poschl-teller": lambda p, t, g: _run_lorentz("poschl_teller", p, t, g),
}


def verify_case(case_id: str, params: dict | None = None,
                tolerances: ToleranceSchema | None = None,
                grid: Grid | None = None) -> VerificationReport:
    """Run the registered verification pipeline for one catalog case."""
    if case_id not in CASE_REGISTRY:
        hint = difflib.get_close_matches(case_id, CASE_REGISTRY, n=1)
        msg = f"unknown case {case_id!r}"
        if hint:
            msg += f" (did you mean {hint[0]!r}?)"
        raise ConfigError(msg)
    tol = tolerances or ToleranceSchema()
    t0 = time.perf_counter()
    rep = CASE_REGISTRY[case_id](dict(params or {}), tol, grid)
    rep.wall_time_s = time.perf_counter() - t0
    return rep
