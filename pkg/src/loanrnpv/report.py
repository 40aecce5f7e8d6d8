"""Scenario sweeps, table rendering, CSV emission, and cross-check reports.

Monetary values print as integers, coefficients of variation with two
decimals, correlations with five, limit CVs with three.  Sweep cells are
independent; output is assembled in (rate, size, state) order so the text
is identical however the cells were computed.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from pathlib import Path

from . import backward, forward, montecarlo
from .config import ScenarioConfig
from .portfolio import limit_cv, portfolio_moments
from .schedule import DiscountSpec, certain_npv
from .validation import ValidationError

CSV_HEADER = ["m", "mean_B", "sd_B", "cv_B", "mean_G", "sd_G", "cv_G"]
LIMIT_HEADER = ["rate", "limit_cv_B", "limit_cv_G"]
ANALYTIC_TOL = 1e-9
MC_Z_BOUND = 4.0


@dataclass(frozen=True)
class SizeRow:
    size: int
    mean_bad: float
    sd_bad: float
    cv_bad: float
    mean_good: float
    sd_good: float
    cv_good: float


@dataclass(frozen=True)
class RateTable:
    annual_rate: float
    contractual_npv: float
    covariance_bad: float
    covariance_good: float
    correlation_bad: float
    correlation_good: float
    limit_cv_bad: float
    limit_cv_good: float
    rows: tuple[SizeRow, ...]


@dataclass(frozen=True)
class SweepReport:
    tables: tuple[RateTable, ...]
    atom_count: int


def run_sweep(config: ScenarioConfig) -> SweepReport:
    """Portfolio statistics for every discount rate and portfolio size."""
    at_risk = forward.compute_at_risk(config.loan, config.market, config.hazards)
    distribution = forward.event_probabilities(at_risk, config.hazards)
    tables = []
    for rate in config.rates:
        discount = DiscountSpec.from_annual(rate)
        moments = backward.backward_first_two_moments(
            config.loan, discount, config.market, config.hazards, config.recovery)
        lim_b, lim_g = limit_cv(moments)
        rows = []
        for size in config.sizes:
            stats = portfolio_moments(moments, size)
            rows.append(SizeRow(size, stats.mean_bad, stats.sd_bad, stats.cv_bad,
                                stats.mean_good, stats.sd_good, stats.cv_good))
        tables.append(RateTable(
            rate, certain_npv(config.loan, discount),
            moments.covariance("B"), moments.covariance("G"),
            moments.correlation("B"), moments.correlation("G"),
            lim_b, lim_g, tuple(rows)))
    return SweepReport(tuple(tables), distribution.start_bad.atom_count)


# ---------------------------------------------------------------------------
# rendering

def _money(x: float) -> str:
    return str(round(x))


def format_report(report: SweepReport) -> str:
    out = io.StringIO()
    for table in report.tables:
        out.write(f"Annual discount rate: {table.annual_rate:g}\n")
        out.write(f"Contractual NPV: {_money(table.contractual_npv)}\n")
        out.write(f"Pair covariance: cov_B = {_money(table.covariance_bad)}, "
                  f"cov_G = {_money(table.covariance_good)}\n")
        out.write(f"Pair correlation: rho_B = {table.correlation_bad:.5f}, "
                  f"rho_G = {table.correlation_good:.5f}\n\n")
        out.write(f"{'m':>8} {'mean_B':>12} {'sd_B':>12} {'cv_B':>8} "
                  f"{'mean_G':>12} {'sd_G':>12} {'cv_G':>8}\n")
        for r in table.rows:
            out.write(f"{r.size:>8} {_money(r.mean_bad):>12} {_money(r.sd_bad):>12} "
                      f"{r.cv_bad:>8.2f} {_money(r.mean_good):>12} "
                      f"{_money(r.sd_good):>12} {r.cv_good:>8.2f}\n")
        out.write("\n")
    out.write("Limit coefficient of variation (portfolio size -> infinity):\n")
    out.write(f"{'rate':>8} {'limit_cv_B':>12} {'limit_cv_G':>12}\n")
    for table in report.tables:
        out.write(f"{table.annual_rate:>8g} {table.limit_cv_bad:>12.3f} "
                  f"{table.limit_cv_good:>12.3f}\n")
    out.write(f"\nExit events per initial state: {report.atom_count}\n")
    return out.getvalue()


def write_csv(report: SweepReport, directory: str | Path) -> list[Path]:
    """One RFC-4180 file per rate plus the limit-CV table."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for table in report.tables:
        path = directory / f"rate_{table.annual_rate:g}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in table.rows:
                writer.writerow([r.size, _money(r.mean_bad), _money(r.sd_bad),
                                 f"{r.cv_bad:.2f}", _money(r.mean_good),
                                 _money(r.sd_good), f"{r.cv_good:.2f}"])
        paths.append(path)
    path = directory / "limit_cv.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LIMIT_HEADER)
        for table in report.tables:
            writer.writerow([f"{table.annual_rate:g}", f"{table.limit_cv_bad:.3f}",
                             f"{table.limit_cv_good:.3f}"])
    paths.append(path)
    return paths


def read_csv_table(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Header and raw string rows of an emitted CSV table."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValidationError(f"{path}: empty CSV table")
    return rows[0], rows[1:]


# ---------------------------------------------------------------------------
# cross-check report

@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]
    backend: str | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def _relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) / scale


def analytic_checks(config: ScenarioConfig) -> list[CheckResult]:
    """Forward-vs-backward agreement and probability-mass closure."""
    at_risk = forward.compute_at_risk(config.loan, config.market, config.hazards)
    distribution = forward.event_probabilities(at_risk, config.hazards)
    checks = []
    for state in ("B", "G"):
        residual = abs(distribution.block(state).total_mass - 1.0)
        checks.append(CheckResult(f"probability_mass/{state}", residual,
                                  ANALYTIC_TOL, residual <= ANALYTIC_TOL))
    w = config.loan.principal
    for rate in config.rates:
        discount = DiscountSpec.from_annual(rate)
        fwd = forward.moments_forward(config.loan, discount, distribution,
                                      config.recovery)
        bwd = backward.backward_first_two_moments(
            config.loan, discount, config.market, config.hazards, config.recovery)
        gap = 0.0
        for state in ("B", "G"):
            ev_b = bwd.first(state) - w
            ev2_b = bwd.second(state) - 2.0 * w * bwd.first(state) + w * w
            gap = max(gap, _relative_gap(fwd.first(state), ev_b),
                      _relative_gap(fwd.second(state), ev2_b))
        checks.append(CheckResult(f"forward_backward@{rate:g}", gap,
                                  ANALYTIC_TOL, gap <= ANALYTIC_TOL))
    return checks


def mc_checks(config: ScenarioConfig, backend: str | None = None) -> list[CheckResult]:
    """z-scores of simulated mean/sd/pair covariance against the engines."""
    checks = []
    cfg = montecarlo.SimConfig(config.mc_replications, config.mc_seed,
                               config.mc_antithetic)
    for rate in config.rates:
        discount = DiscountSpec.from_annual(rate)
        for state in ("B", "G"):
            market = replace(config.market, initial_state=state)
            bwd = backward.backward_first_two_moments(
                config.loan, discount, market, config.hazards, config.recovery)
            sim = montecarlo.simulate_pair(config.loan, discount, market,
                                           config.hazards, config.recovery,
                                           cfg, backend=backend)
            targets = (
                ("mean", sim.mean_1, bwd.expected_value(state), sim.se_mean),
                ("sd", sim.sd_1, bwd.sd(state), sim.se_sd),
                ("cov", sim.covariance, bwd.covariance(state), sim.se_covariance),
            )
            for label, sample, target, se in targets:
                z = (sample - target) / se if se > 0.0 else 0.0
                checks.append(CheckResult(f"mc_{label}@{rate:g}/{state}", z,
                                          MC_Z_BOUND, abs(z) <= MC_Z_BOUND))
    return checks


def run_verify(config: ScenarioConfig, backend: str | None = None) -> VerifyReport:
    checks = analytic_checks(config)
    resolved = None
    if config.mc_enabled:
        resolved = montecarlo.active_backend(backend)
        checks.extend(mc_checks(config, backend=backend))
    return VerifyReport(tuple(checks), resolved)


def format_verify(report: VerifyReport, config: ScenarioConfig) -> str:
    out = io.StringIO()
    out.write("Cross-check report\n")
    if report.backend is not None:
        out.write(f"Simulation: replications = {config.mc_replications}, "
                  f"seed = {config.mc_seed}, backend = {report.backend}\n")
    out.write("\n")
    for check in report.checks:
        status = "ok" if check.passed else "FAIL"
        out.write(f"{check.name:<28} {check.value:>14.6g}  "
                  f"(bound {check.bound:g})  {status}\n")
    out.write("\nresult: " + ("all checks passed\n" if report.ok
                              else "CROSS-CHECK FAILURE\n"))
    return out.getvalue()
