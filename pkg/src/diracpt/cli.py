"""Command-line front end: spectra, zero modes, band edges, case registry.

Reports are written as JSON (canonical, schema-validated) or CSV (lossy
levels-only projection with a fixed header).  Unless disabled, a PNG figure
is rendered next to each report file.  Exit codes: 0 pass, 1 verification
failure, 2 configuration error, 3 numerical-infrastructure error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import ConfigError, DiracPTError, NumericsError
from .potentials import lorentz_levels, rosen_morse_levels
from .verify import (
    CASE_REGISTRY,
    REPORT_SCHEMA_VERSION,
    ToleranceSchema,
    VerificationReport,
    verify_case,
)
from .numerics import Grid

CSV_HEADER = ["case", "n", "ky", "eps_analytic", "eps_oracle", "abs_delta",
              "residual1", "residual2", "pass"]

_SPECTRUM_CASES = ("rosen-morse", "lorentz-scarf1", "lorentz-scarf2",
                   "lorentz-morse", "lorentz-poschl-teller")
_ZERO_MODE_CASES = ("example1", "example2", "example3", "example4")

_CASE_PARAMS = {
    "rosen-morse": ("v0", "ky"),
    "example1": ("mu",),
    "example2": ("mu", "lam"),
    "example3": ("b", "modes", "bloch_k"),
    "example4": ("lam", "mu"),
    "lorentz-scarf1": ("A", "B", "C", "ky"),
    "lorentz-scarf2": ("A", "B", "C", "ky"),
    "lorentz-morse": ("A", "B", "C", "ky"),
    "lorentz-poschl-teller": ("A", "B", "C", "ky"),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated CLI run description; echoes verbatim into every report."""

    command: str
    case: str | None = None
    params: dict = field(default_factory=dict)
    nmax: int | None = None
    verify: bool = False
    grid: dict | None = None
    tolerances: dict | None = None
    format: str = "json"
    out: str | None = None
    figures: bool = True

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown output format {self.format!r}")
        for key, val in self.params.items():
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ConfigError(f"parameter {key}={val!r} is not finite")
        if self.grid is not None:
            unknown = set(self.grid) - {"x0", "x1", "n"}
            if unknown:
                raise ConfigError(f"unknown grid keys: {sorted(unknown)}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def _analytic_level_rows(config: RunConfig) -> list[dict]:
    """Closed-form level table without oracle verification."""
    case = config.case
    p = config.params
    if case == "rosen-morse":
        nmax = config.nmax if config.nmax is not None else 4
        levels = rosen_morse_levels(p.get("v0", 2.0), p.get("ky", 0.0),
                                    range(1, nmax + 1))
        return [{"n": lev.n, "ky": lev.ky, "eps_analytic": lev.eps,
                 "degeneracy": lev.degeneracy, "passed": True}
                for lev in levels]
    if case.startswith("lorentz-"):
        slug = case.removeprefix("lorentz-").replace("-", "_")
        a_par = p.get("A", 3.0)
        if config.nmax is not None:
            nmax = config.nmax
        elif slug == "scarf1":
            nmax = 4
        else:
            nmax = int(np.floor(a_par))
        levels = lorentz_levels(slug, a_par, range(0, nmax + 1),
                                ky=p.get("ky", 0.0))
        return [{"n": lev.n, "ky": lev.ky, "eps_analytic": lev.eps,
                 "dirac_energy": lev.aux["dirac_energy"], "passed": True}
                for lev in levels]
    raise ConfigError(f"case {case!r} has no spectrum table")


def _record_rows(report: VerificationReport) -> list[dict]:
    return [dict(rec) for rec in report.to_canonical_dict()["levels"]]


def build_envelope(config: RunConfig) -> tuple[dict, VerificationReport | None]:
    """Run the requested computation and assemble the report envelope."""
    case = config.case
    report = None
    if config.command == "spectrum":
        if case not in _SPECTRUM_CASES:
            raise ConfigError(
                f"spectrum supports cases {_SPECTRUM_CASES}, got {case!r}")
        rows = _analytic_level_rows(config)
        if config.verify:
            report = _verify(config)
            rows = _record_rows(report)
    elif config.command == "zero-modes":
        if case not in _ZERO_MODE_CASES:
            raise ConfigError(
                f"zero-modes supports cases {_ZERO_MODE_CASES}, got {case!r}")
        report = _verify(config)
        rows = _record_rows(report)
    elif config.command == "bands":
        report = _verify(config)
        rows = _record_rows(report)
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown command {config.command!r}")

    envelope = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": config.command,
        "config": config.to_dict(),
        "case": case if case is not None else "example3",
        "levels": rows,
        "verification": report.to_canonical_dict() if report else None,
    }
    return envelope, report


def _verify(config: RunConfig) -> VerificationReport:
    case = config.case or "example3"
    params = dict(config.params)
    if config.nmax is not None:
        if case == "rosen-morse":
            params["n_max"] = config.nmax
        elif case.startswith("lorentz-"):
            params["n_max"] = config.nmax
    tol = ToleranceSchema.from_dict(config.tolerances) if config.tolerances \
        else ToleranceSchema()
    grid = None
    if config.grid:
        g = dict(config.grid)
        if not {"x0", "x1", "n"} <= set(g):
            raise ConfigError("grid override needs x0, x1 and n")
        grid = Grid(float(g["x0"]), float(g["x1"]), int(g["n"]))
    return verify_case(case, params, tol, grid)


def validate_envelope(envelope: dict) -> None:
    """Validate a report envelope against the shipped versioned schema."""
    import jsonschema

    schema = json.loads(resources.files("diracpt.schemas")
                        .joinpath("report-v1.json").read_text())
    jsonschema.validate(envelope, schema)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt_csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def write_csv(envelope: dict, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in envelope["levels"]:
            writer.writerow([_fmt_csv_value(v) for v in (
                envelope["case"], row.get("n"), row.get("ky"),
                row.get("eps_analytic"), row.get("eps_oracle"),
                row.get("abs_delta"), row.get("residual1"),
                row.get("residual2"), row.get("passed"))])


def _output_path(config: RunConfig) -> Path:
    if config.out:
        path = Path(config.out)
    else:
        stem = f"{config.case or 'bands'}-{config.command}"
        path = Path(f"{stem}.{config.format}")
    if not path.is_absolute():
        path = Path(os.environ.get("REPORT_DIR", ".")) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def emit(config: RunConfig, envelope: dict) -> list[Path]:
    """Write the report (and figure) files; returns the paths written."""
    validate_envelope(envelope)
    path = _output_path(config)
    written = [path]
    if config.format == "json":
        path.write_text(json.dumps(envelope, sort_keys=True, indent=2) + "\n")
    else:
        write_csv(envelope, path)
    if config.figures:
        from . import figures
        fig_path = path.with_suffix(".png")
        figures.render_report_figure(envelope, fig_path)
        written.append(fig_path)
    return written


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=["json", "csv"], default="json",
                    help="report format (default: json; csv is a lossy "
                         "levels-only projection)")
    sp.add_argument("--out", default=None,
                    help="output path (default: <case>-<command>.<format> "
                         "in $REPORT_DIR or the working directory)")
    sp.add_argument("--no-figures", action="store_true",
                    help="skip rendering the PNG figure next to the report")
    sp.add_argument("--x0", type=float, default=None, help="grid left edge")
    sp.add_argument("--x1", type=float, default=None, help="grid right edge")
    sp.add_argument("--grid-n", type=int, default=None, help="grid points")
    for name in ("residual", "eigenvalue-rel", "imag-part", "zero-mode-hill"):
        sp.add_argument(f"--tol-{name}", type=float, default=None,
                        help=f"override the {name.replace('-', ' ')} tolerance")


def _add_case_params(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--v0", type=float, default=None, help="cotangent strength (> 0)")
    sp.add_argument("--mu", type=float, default=None, help="family parameter mu")
    sp.add_argument("--lambda", dest="lam", type=float, default=None,
                    help="family parameter lambda")
    sp.add_argument("--b", type=float, default=None, help="periodic strength b")
    sp.add_argument("--A", type=float, default=None, help="superpotential A")
    sp.add_argument("--B", type=float, default=None, help="superpotential B")
    sp.add_argument("--C", type=float, default=None,
                    help="imaginary part added to B (B -> B + iC)")
    sp.add_argument("--ky", type=float, default=None, help="transverse momentum")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="diracpt",
        description="Closed-form spectra and numerical verification for the "
                    "planar Dirac equation with complex potentials")
    sub = ap.add_subparsers(dest="command")

    sp = sub.add_parser("spectrum", help="closed-form levels, optionally "
                                         "verified against the oracles")
    sp.add_argument("--case", required=True, choices=_SPECTRUM_CASES)
    sp.add_argument("--nmax", type=int, default=None,
                    help="highest level index (rosen-morse counts from 1, "
                         "the mass-coupling families from 0)")
    sp.add_argument("--verify", action="store_true",
                    help="run the full verification pipeline")
    _add_case_params(sp)
    _add_common(sp)

    zm = sub.add_parser("zero-modes", help="analytic zero-energy states with "
                                           "residuals and classification")
    zm.add_argument("--case", required=True, choices=_ZERO_MODE_CASES)
    _add_case_params(zm)
    _add_common(zm)

    bd = sub.add_parser("bands", help="Fourier-truncation band edges of the "
                                      "periodic family (both branches)")
    bd.add_argument("--b", type=float, default=1.0, help="periodic strength b")
    bd.add_argument("--modes", type=int, default=32, help="Fourier cutoff K")
    bd.add_argument("--bloch-k", type=float, default=0.0, help="crystal momentum")
    _add_common(bd)

    sub.add_parser("list-cases", help="print the case registry")
    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    case = getattr(args, "case", None)
    if command == "bands":
        params = {"b": args.b, "modes": args.modes, "bloch_k": args.bloch_k}
        case = "example3"
    else:
        allowed = _CASE_PARAMS[case]
        params = {}
        for name in ("v0", "mu", "lam", "b", "A", "B", "C", "ky"):
            val = getattr(args, name, None)
            if val is None:
                continue
            if name not in allowed:
                raise ConfigError(
                    f"parameter --{name} does not apply to case {case!r} "
                    f"(accepted: {allowed})")
            params[name] = val
    grid = None
    if getattr(args, "x0", None) is not None or getattr(args, "x1", None) is not None \
            or getattr(args, "grid_n", None) is not None:
        if None in (args.x0, args.x1, args.grid_n):
            raise ConfigError("grid override needs --x0, --x1 and --grid-n")
        grid = {"x0": args.x0, "x1": args.x1, "n": args.grid_n}
    tol = {}
    for key, attr in (("residual", "tol_residual"),
                      ("eigenvalue_rel", "tol_eigenvalue_rel"),
                      ("imag_part", "tol_imag_part"),
                      ("zero_mode_hill", "tol_zero_mode_hill")):
        val = getattr(args, attr, None)
        if val is not None:
            tol[key] = val
    return RunConfig(
        command=command, case=case, params=params,
        nmax=getattr(args, "nmax", None),
        verify=bool(getattr(args, "verify", False)) or command in ("zero-modes", "bands"),
        grid=grid, tolerances=tol or None,
        format=args.format, out=args.out, figures=not args.no_figures)


def _print_summary(envelope: dict, report, paths: list[Path]) -> None:
    case = envelope["case"]
    rows = envelope["levels"]
    print(f"case {case}: {len(rows)} level(s)")
    for row in rows:
        bits = [f"n={row['n']}", f"ky={row['ky']:+.4g}",
                f"eps={row['eps_analytic']:.8g}"]
        if row.get("eps_oracle") is not None:
            bits.append(f"oracle={row['eps_oracle']:.8g}")
        if row.get("abs_delta") is not None:
            bits.append(f"|d|={row['abs_delta']:.2e}")
        if row.get("schrodinger_residual") is not None:
            bits.append(f"res={row['schrodinger_residual']:.2e}")
        bits.append("ok" if row.get("passed") else "FAIL")
        print("  " + "  ".join(bits))
    if report is not None:
        verdict = "PASS" if report.passed else "FAIL"
        print(f"verification: {verdict} ({report.wall_time_s:.2f}s)")
        for note in report.notes:
            print(f"  note: {note}")
    for p in paths:
        print(f"wrote {p}")


def list_cases() -> None:
    print("registered cases:")
    for name in CASE_REGISTRY:
        params = ", ".join(_CASE_PARAMS[name])
        print(f"  {name:24s} params: {params}")


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_help()
        return 0
    if args.command == "list-cases":
        list_cases()
        return 0
    try:
        config = _config_from_args(args)
        envelope, report = build_envelope(config)
        paths = emit(config, envelope)
        _print_summary(envelope, report, paths)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical-infrastructure error: {exc}", file=sys.stderr)
        return 3
    except DiracPTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if report is not None and not report.passed:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
