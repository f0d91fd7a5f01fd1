"""Verification pipelines: registry completeness, determinism, reports."""

import numpy as np
import pytest

from diracpt.exceptions import ConfigError
from diracpt.numerics import Grid
from diracpt.verify import (
    CASE_REGISTRY,
    ToleranceSchema,
    classify_normalizability,
    lorentz_in_range,
    verify_case,
)

EXPECTED_CASES = {
    "rosen-morse", "example1", "example2", "example3", "example4",
    "lorentz-scarf1", "lorentz-scarf2", "lorentz-morse",
    "lorentz-poschl-teller",
}


def test_registry_is_complete_and_exact():
    assert set(CASE_REGISTRY) == EXPECTED_CASES


def test_unknown_case_suggestion():
    with pytest.raises(ConfigError, match="rosen-morse"):
        verify_case("rosen-mors")


def test_unknown_parameter_rejected():
    with pytest.raises(ConfigError, match="unknown parameters"):
        verify_case("example1", {"nu": 2.0})


def test_tolerance_schema_unknown_key_rejected():
    with pytest.raises(ConfigError):
        ToleranceSchema.from_dict({"residuals": 1e-6})
    tol = ToleranceSchema.from_dict({"residual": 1e-8})
    assert tol.residual == 1e-8 and tol.imag_part == 1e-8


def test_classify_normalizability_labels():
    g = Grid(-8.0, 8.0, 801)
    assert classify_normalizability(np.exp(-g.x ** 2), g, "line") == "decaying"
    assert classify_normalizability(np.exp(+g.x ** 2), g, "line") == "growing"
    assert classify_normalizability(np.exp(1j * g.x), g, "line") == "oscillatory"
    assert classify_normalizability(np.sin(g.x) + 1.5, g, "compact") == \
        "finite-domain"


def test_lorentz_in_range_windows():
    assert [lorentz_in_range("scarf2", 3.0, 1.0, n) for n in range(4)] == \
        [True, True, True, False]
    assert [lorentz_in_range("morse", 3.0, 1.0, n) for n in range(4)] == \
        [True, True, True, False]
    assert all(lorentz_in_range("scarf1", 3.0, 1.0, n) for n in range(5))
    assert not any(lorentz_in_range("poschl_teller", 3.0, 1.0, n)
                   for n in range(4))
    assert [lorentz_in_range("poschl_teller", 2.5, 5.5, n) for n in range(3)] == \
        [True, True, True]


def test_reports_are_deterministic():
    a = verify_case("example3", {"b": 0.5}).to_json()
    b = verify_case("example3", {"b": 0.5}).to_json()
    assert a == b
    c = verify_case("example4", {"lam": 2.0}).to_json()
    d = verify_case("example4", {"lam": 2.0}).to_json()
    assert c == d


def test_example2_report_contents():
    rep = verify_case("example2", {"mu": 3.0, "lam": 1.0})
    assert rep.passed
    assert rep.extras["admissible"] == [{"n": 0, "ky": 0.0}]
    assert rep.extras["admissible_is_origin_only"]
    rec = rep.levels[0]
    assert rec.schrodinger_residual < 1e-6
    assert rec.normalizability == "decaying"


def test_example1_report_contents():
    rep = verify_case("example1", {"mu": 1.0})
    assert rep.passed
    assert rep.extras["boundary_to_peak_ratio"] < 1e-20
    assert rep.extras["discarded_branch_classification"] == "growing"
    assert rep.extras["spin_flip_residual_shift"] <= 1e-12


def test_example4_report_quantization():
    rep = verify_case("example4", {"lam": 2.0})
    assert rep.passed
    assert rep.extras["quantized_ky"] == [-1.5, 1.5]
    assert rep.extras["degeneracy_count"] == 0
    assert rep.extras["degeneracy_informational"]
    assert all(max(r.residual1, r.residual2) < 1e-6 for r in rep.levels)


def test_lorentz_vacuous_case_is_flagged():
    rep = verify_case("lorentz-poschl-teller", {"A": 3.0, "B": 1.0})
    assert rep.passed
    assert not any(rep.extras["in_range"])
    assert any("vacuous" in note for note in rep.notes)
    assert all(rec.eps_oracle is None for rec in rep.levels)


def test_lorentz_scarf2_report():
    rep = verify_case("lorentz-scarf2", {"A": 3.0, "B": 1.0, "C": 0.5})
    assert rep.passed
    matched = [rec for rec in rep.levels if rec.eps_oracle is not None]
    assert [rec.n for rec in matched] == [0, 1, 2]
    assert all(rec.oracle_imag < 1e-8 for rec in matched)
    assert all(rec.abs_delta <= 1e-5 * max(1.0, abs(rec.eps_analytic))
               for rec in matched)
    r1, r2 = rep.extras["ground_state_factorization_residuals"]
    assert max(r1, r2) < 1e-6


def test_grid_override_flows_through():
    rep = verify_case("example1", {"mu": 1.0}, grid=Grid(-9.0, 9.0, 8001))
    assert rep.grid == {"x0": -9.0, "x1": 9.0, "n": 8001, "periodic": False}
    assert rep.passed
