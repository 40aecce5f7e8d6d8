"""Scenario configuration: JSON loading, validation, model construction.

A scenario bundles one loan parameterization, the market chain, hazard and
recovery assumptions, the sweep grid (discount rates x portfolio sizes)
and simulation settings.  Validation failures name the offending field.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .behavior import HazardModel, RecoveryModel
from .market import MarketModel, STATES
from .schedule import LoanSpec
from .validation import ValidationError

DEFAULT_MC_REPLICATIONS = 1_000_000
DEFAULT_MC_SEED = 20240901


@dataclass(frozen=True)
class ScenarioConfig:
    loan: LoanSpec
    market: MarketModel
    hazards: HazardModel
    recovery: RecoveryModel
    rates: tuple[float, ...]
    sizes: tuple[int, ...]
    mc_enabled: bool
    mc_replications: int
    mc_seed: int
    mc_antithetic: bool

    def with_mc(self, enabled: bool | None = None, replications: int | None = None,
                seed: int | None = None) -> "ScenarioConfig":
        """Copy with simulation settings overridden (CLI flags)."""
        out = self
        if enabled is not None:
            out = replace(out, mc_enabled=enabled)
        if replications is not None:
            out = replace(out, mc_replications=int(replications))
        if seed is not None:
            out = replace(out, mc_seed=int(seed))
        return out


def baseline_config_path() -> Path:
    """Path of the packaged baseline consumer-loan scenario."""
    return Path(resources.files("loanrnpv") / "data" / "consumer_loan_baseline.json")


def _fail(path: str, message: str):
    raise ValidationError(f"{path}: {message}")


def _section(doc: dict, name: str) -> dict:
    if name not in doc:
        _fail(name, "missing section")
    if not isinstance(doc[name], dict):
        _fail(name, "expected an object")
    return doc[name]


def _number(section: dict, path: str, key: str, required: bool = True,
            default=None):
    if key not in section:
        if required:
            _fail(f"{path}.{key}", "missing value")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float, list)):
        _fail(f"{path}.{key}", "expected a number or list of numbers")
    return value


def _build_loan(section: dict) -> LoanSpec:
    principal = _number(section, "loan", "principal")
    charge = _number(section, "loan", "prepay_charge", required=False, default=1.0)
    if "instalments" in section:
        instalments = np.asarray(section["instalments"], dtype=float)
    else:
        level = _number(section, "loan", "instalment")
        term = section.get("term")
        if not isinstance(term, int) or term < 1:
            _fail("loan.term", "expected a positive integer")
        instalments = np.full(term, float(level))
    if "term" in section and len(instalments) != section["term"]:
        _fail("loan.term", f"term {section['term']} does not match "
                           f"{len(instalments)} instalments")
    return LoanSpec(float(principal), instalments, charge)


def _build_market(section: dict, term: int) -> MarketModel:
    state = section.get("initial_state")
    if state not in STATES:
        _fail("market.initial_state", f"expected one of {STATES}, got {state!r}")
    b = _number(section, "market", "persist_bad")
    g = _number(section, "market", "persist_good")
    return MarketModel(state, _expand(b, term, "market.persist_bad"),
                       _expand(g, term, "market.persist_good"))


def _expand(value, length: int, path: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        return np.full(length, arr[0])
    if arr.size != length:
        _fail(path, f"expected {length} entries, got {arr.size}")
    return arr


def _build_hazards(section: dict, term: int) -> HazardModel:
    lam_b = _expand(_number(section, "hazards", "default_bad"), term,
                    "hazards.default_bad")
    lam_g = _expand(_number(section, "hazards", "default_good"), term,
                    "hazards.default_good")

    def prepay(key: str) -> np.ndarray:
        raw = _number(section, "hazards", key)
        arr = np.atleast_1d(np.asarray(raw, dtype=float))
        if arr.size == 1:
            out = np.full(term, arr[0])
            out[term - 1] = 0.0
            return out
        if arr.size not in (term - 1, term):
            _fail(f"hazards.{key}", f"expected {term - 1} entries, got {arr.size}")
        return arr

    return HazardModel(lam_b, lam_g, prepay("prepay_bad"), prepay("prepay_good"))


def _build_recovery(section: dict, term: int) -> RecoveryModel:
    specs = {}
    for state in ("bad", "good"):
        if state not in section:
            _fail(f"recovery.{state}", "missing recovery block")
        block = section[state]
        if not isinstance(block, dict):
            _fail(f"recovery.{state}", "expected an object")
        if "a" in block or "b" in block:
            if "a" not in block or "b" not in block:
                _fail(f"recovery.{state}", "beta form needs both 'a' and 'b'")
            specs[state] = ("beta", (float(block["a"]), float(block["b"])))
        else:
            if "mean" not in block or "sd" not in block:
                _fail(f"recovery.{state}", "expected 'mean' and 'sd' (or 'a'/'b')")
            specs[state] = ("moments", (float(block["mean"]), float(block["sd"])))
    kinds = {kind for kind, _ in specs.values()}
    if kinds == {"beta"}:
        return RecoveryModel.from_beta(term, specs["bad"][1], specs["good"][1])
    if kinds == {"moments"}:
        return RecoveryModel.from_moments(term, specs["bad"][1], specs["good"][1])
    _fail("recovery", "mix of beta and moment parameterizations is not supported")


def _build_sweep(section: dict) -> tuple[tuple[float, ...], tuple[int, ...]]:
    rates = section.get("annual_discount_rates")
    if not isinstance(rates, list) or not rates:
        _fail("sweep.annual_discount_rates", "expected a nonempty list")
    for r in rates:
        if isinstance(r, bool) or not isinstance(r, (int, float)) or r < 0:
            _fail("sweep.annual_discount_rates", f"invalid rate {r!r}")
    sizes = section.get("portfolio_sizes")
    if not isinstance(sizes, list) or not sizes:
        _fail("sweep.portfolio_sizes", "expected a nonempty list")
    for m in sizes:
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            _fail("sweep.portfolio_sizes", f"expected positive integers, got {m!r}")
    return tuple(float(r) for r in rates), tuple(int(m) for m in sizes)


def load_config(path: str | Path) -> ScenarioConfig:
    """Parse and validate a scenario file; raises ValidationError on issues."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(
            f"parse error at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    if not isinstance(doc, dict):
        raise ValidationError("top level: expected an object")

    def build(section_name: str, builder, *args):
        try:
            return builder(_section(doc, section_name), *args)
        except ValidationError as err:
            msg = str(err)
            if not msg.startswith(section_name):
                msg = f"{section_name}: {msg}"
            raise ValidationError(msg) from None

    loan = build("loan", _build_loan)
    term = loan.term
    market = build("market", _build_market, term)
    hazards = build("hazards", _build_hazards, term)
    recovery = build("recovery", _build_recovery, term)
    rates, sizes = build("sweep", _build_sweep)

    mc = doc.get("mc", {})
    if not isinstance(mc, dict):
        raise ValidationError("mc: expected an object")
    enabled = mc.get("enabled", False)
    if not isinstance(enabled, bool):
        raise ValidationError("mc.enabled: expected true or false")
    replications = mc.get("replications", DEFAULT_MC_REPLICATIONS)
    if isinstance(replications, bool) or not isinstance(replications, int) \
            or replications < 1:
        raise ValidationError("mc.replications: expected a positive integer")
    seed = mc.get("seed", DEFAULT_MC_SEED)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError("mc.seed: expected an integer")
    antithetic = mc.get("antithetic", False)
    if not isinstance(antithetic, bool):
        raise ValidationError("mc.antithetic: expected true or false")

    return ScenarioConfig(loan, market, hazards, recovery, rates, sizes,
                          enabled, replications, seed, antithetic)
