"""Closed-form spectra and numerical verification for the planar massless
Dirac equation with complex scalar and position-dependent-mass potentials."""

from .numerics import (
    Grid,
    MismatchCurve,
    cumulative_integral,
    dense_complex_eigenvalues,
    differentiate,
    find_real_eigenvalues,
    hill_band_eigenvalues,
    schrodinger_residual,
    shoot,
    sine_basis_hamiltonian,
    sine_galerkin_hamiltonian,
)
from .potentials import (
    AnalyticLevel,
    LorentzScalar,
    PotentialSpec,
    RosenMorseCot,
    ShiftedParabola,
    ShiftedSech,
    SinePeriodic,
    TanhSech,
    effective_potential,
    eval_potential,
    example2_ky_admissible,
    lorentz_levels,
    potential_derivative,
    rosen_morse_levels,
    rosen_morse_wavefunction,
    scarf2_levels,
    scarf2_wavefunction,
    zero_mode,
)
from .specialfun import (
    JacobiParams,
    arctan_by_integration,
    jacobi,
    jacobi_series,
    phase_continuous_log,
    phase_continuous_power,
)
from .spinor import (
    SpinorField,
    dirac_residual,
    from_pm_basis,
    ky_zero_solution,
    lorentz_residual,
    lorentz_transform,
    reconstruct_minus,
    reconstruct_plus,
    spin_flip,
    to_pm_basis,
    transformed_components,
)
from .verify import (
    CASE_REGISTRY,
    LevelRecord,
    ToleranceSchema,
    VerificationReport,
    classify_normalizability,
    lorentz_in_range,
    verify_case,
)

__version__ = "0.1.0"
