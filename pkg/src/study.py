"""
Monte Carlo study of rejection rates (Table-1 style).

For every scenario (model, n) and repetition r, a data set is drawn from the
model, analysed once, and every requested (hypothesis, statistic, alpha)
decision is recorded. Rejection rates are integer counts divided by the
number of successful runs, so aggregation does not depend on the order in
which repetitions finish.

Random streams: data (seed, s, r, 0), bootstrap (seed, s, r, 1, b),
ties (seed, s, r, 2).
"""

import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from . import SCHEMA_VERSION, __version__
from .arch_test import TestConfig, analyse, decide, normalize_hypothesis, normalize_statistic
from .config import (
    DEFAULT_B,
    DEFAULT_GRID_M,
    DEFAULT_RUNS,
    DEFAULT_TIE_POLICY,
    HYPOTHESES,
    STATISTICS,
    STUDY_ALPHAS,
)
from .exceptions import ArchTestError, ConfigError
from .model_spec import parse_model
from .utils import get_logger, make_rng, print_section_header

_TOP_LEVEL_KEYS = {"seed", "runs", "B", "alphas", "statistics", "hypotheses", "grid_m",
                   "bandwidth", "jobs", "tie_policy", "scenario"}
_SCENARIO_KEYS = {"model", "n", "label", "dependence"}


def cell_key(hypothesis: str, statistic: str, alpha: float) -> str:
    return f"{hypothesis}|{statistic}|{alpha:g}"


@dataclass(frozen=True)
class Scenario:
    """
    One data-generating setting.

    Attributes:
        model: Model specification string
        n: Sample size
        label: Row label in the study table (defaults to the model string)
        dependence: Dependence level shown next to the label, e.g. 'tau=1/3'
    """

    model: str
    n: int
    label: str = ""
    dependence: str = ""

    @property
    def name(self) -> str:
        base = self.label or self.model
        return f"{base} ({self.dependence})" if self.dependence else base


@dataclass(frozen=True)
class StudyConfig:
    """Validated study configuration."""

    scenarios: Tuple[Scenario, ...]
    runs: int = DEFAULT_RUNS
    B: int = DEFAULT_B
    alphas: Tuple[float, ...] = STUDY_ALPHAS
    statistics: Tuple[str, ...] = STATISTICS
    hypotheses: Tuple[str, ...] = HYPOTHESES
    grid_m: int = DEFAULT_GRID_M
    bandwidth: Union[float, str] = "auto"
    seed: int = 0
    jobs: Union[int, str] = 1
    tie_policy: str = DEFAULT_TIE_POLICY

    def __post_init__(self):
        if not self.scenarios:
            raise ConfigError("study needs at least one scenario")
        if int(self.runs) != self.runs or int(self.runs) < 1:
            raise ConfigError(f"runs must be a positive integer, got {self.runs}")
        if not self.alphas or not self.statistics or not self.hypotheses:
            raise ConfigError("alphas, statistics and hypotheses must be non-empty")
        object.__setattr__(self, "runs", int(self.runs))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "statistics", tuple(normalize_statistic(s) for s in self.statistics))
        object.__setattr__(self, "hypotheses", tuple(normalize_hypothesis(h) for h in self.hypotheses))
        if self.jobs != "auto" and (not isinstance(self.jobs, int) or isinstance(self.jobs, bool)
                                    or self.jobs == 0):
            raise ConfigError(f"jobs must be a non-zero integer or 'auto', got {self.jobs}")

        for s in self.scenarios:
            if int(s.n) != s.n or int(s.n) < 2:
                raise ConfigError(f"scenario '{s.name}': n must be an integer >= 2, got {s.n}")
            try:
                parse_model(s.model)
            except ArchTestError as e:
                raise ConfigError(f"scenario '{s.name}': invalid model '{s.model}': {e}") from e

        # Validates B, grid_m, bandwidth, alphas and tie policy once for all runs
        for alpha in self.alphas:
            self.test_config(alpha=alpha)

    @property
    def n_jobs(self) -> int:
        return -1 if self.jobs == "auto" else int(self.jobs)

    def test_config(self, alpha: Optional[float] = None) -> TestConfig:
        return TestConfig(
            hypothesis=self.hypotheses[0],
            statistic=self.statistics[0],
            alpha=self.alphas[0] if alpha is None else alpha,
            B=self.B,
            grid_m=self.grid_m,
            bandwidth=self.bandwidth,
            seed=self.seed,
            tie_policy=self.tie_policy,
            n_jobs=1,
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StudyConfig":
        unknown = set(data) - _TOP_LEVEL_KEYS
        if unknown:
            raise ConfigError(f"unknown study config keys: {sorted(unknown)}")
        scenarios = []
        for i, entry in enumerate(data.get("scenario", [])):
            bad = set(entry) - _SCENARIO_KEYS
            if bad:
                raise ConfigError(f"scenario {i + 1}: unknown keys {sorted(bad)}")
            if "model" not in entry or "n" not in entry:
                raise ConfigError(f"scenario {i + 1}: 'model' and 'n' are required")
            scenarios.append(Scenario(model=str(entry["model"]), n=entry["n"],
                                      label=str(entry.get("label", "")),
                                      dependence=str(entry.get("dependence", ""))))
        kwargs = {k: data[k] for k in _TOP_LEVEL_KEYS - {"scenario"} if k in data}
        for key in ("alphas", "statistics", "hypotheses"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(scenarios=tuple(scenarios), **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "runs": self.runs,
            "B": self.B,
            "alphas": list(self.alphas),
            "statistics": list(self.statistics),
            "hypotheses": list(self.hypotheses),
            "grid_m": self.grid_m,
            "bandwidth": self.bandwidth,
            "tie_policy": self.tie_policy,
            "scenario": [
                {"model": s.model, "n": s.n, "label": s.label, "dependence": s.dependence}
                for s in self.scenarios
            ],
        }


def load_study_config(filepath: Union[str, Path]) -> StudyConfig:
    """
    Load a study configuration from TOML.

    Args:
        filepath: Path of the TOML file

    Returns:
        StudyConfig
    """
    path = Path(filepath)
    if not path.exists():
        raise FileNotFoundError(f"Study config not found: {filepath}")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed study config {filepath}: {e}") from None
    return StudyConfig.from_dict(data)


def run_replication(config: StudyConfig, s: int, r: int) -> Dict[str, Any]:
    """
    One repetition of one scenario.

    Returns:
        Per-run record: scenario, run, ok, error, decisions (cell key -> bool),
        T (statistic -> observed value), A_n
    """
    scenario = config.scenarios[s]
    record: Dict[str, Any] = {"scenario": s, "run": r, "ok": True, "error": None,
                              "decisions": {}, "T": {}, "A_n": None}
    try:
        model = parse_model(scenario.model)
        data = model.sample(int(scenario.n), make_rng(config.seed, s, r, 0))
        analysis = analyse(data, config.test_config(), config.statistics, path=(s, r))
        for hypothesis in config.hypotheses:
            for stat in config.statistics:
                for alpha in config.alphas:
                    report = decide(analysis, hypothesis, stat, alpha)
                    record["decisions"][cell_key(hypothesis, stat, alpha)] = report.reject
        record["T"] = dict(analysis.T)
        record["A_n"] = analysis.A_n
    except Exception as e:
        record["ok"] = False
        record["error"] = f"{type(e).__name__}: {e}"
    return record


@dataclass
class StudyResult:
    """
    Outcome of a study.

    Attributes:
        config: The configuration
        records: Per-run records in (scenario, run) order
        wall_time: Elapsed seconds
    """

    config: StudyConfig
    records: List[Dict[str, Any]]
    wall_time: float = 0.0
    cells: List[Dict[str, Any]] = field(default_factory=list)

    def __post_init__(self):
        if not self.cells:
            self.cells = aggregate(self.config, self.records)

    def rate(self, scenario: int, hypothesis: str, statistic: str, alpha: float) -> Optional[float]:
        key = cell_key(normalize_hypothesis(hypothesis), normalize_statistic(statistic), alpha)
        for cell in self.cells:
            if cell["scenario"] == scenario and cell["key"] == key:
                return cell["rate"]
        raise KeyError(key)

    def payload(self, include_timing: bool = False) -> Dict[str, Any]:
        """JSON-ready result; wall time only on request so that the payload is reproducible."""
        out = {
            "schema_version": SCHEMA_VERSION,
            "package_version": __version__,
            "config": self.config.to_dict(),
            "cells": [{k: v for k, v in cell.items() if k != "key"} for cell in self.cells],
            "runs": self.records,
        }
        if include_timing:
            out["wall_time_seconds"] = self.wall_time
        return out

    def to_long_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{k: v for k, v in cell.items() if k != "key"} for cell in self.cells])

    def to_table(self) -> pd.DataFrame:
        """
        Table-1 layout: one row per scenario, one column per (statistic, alpha),
        cells 'arch (assoc)' with rates to three decimals.
        """
        cfg = self.config
        rows = []
        # archimedeanity first, associativity in brackets
        ordered = sorted(cfg.hypotheses, key=lambda h: h != "archimedeanity")
        for s, scenario in enumerate(cfg.scenarios):
            row = {"model": scenario.name, "n": scenario.n}
            for stat in cfg.statistics:
                for alpha in cfg.alphas:
                    parts = []
                    for hypothesis in ordered:
                        rate = self.rate(s, hypothesis, stat, alpha)
                        parts.append("NA" if rate is None else f"{rate:.3f}")
                    cell = parts[0] if len(parts) == 1 else f"{parts[0]} ({parts[1]})"
                    row[f"{stat} {alpha:g}"] = cell
            rows.append(row)
        return pd.DataFrame(rows)


def aggregate(config: StudyConfig, records: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Integer rejection counts, rates and standard errors per scenario and cell."""
    cells = []
    for s, scenario in enumerate(config.scenarios):
        mine = [rec for rec in records if rec["scenario"] == s]
        ok = [rec for rec in mine if rec["ok"]]
        failures = len(mine) - len(ok)
        for hypothesis in config.hypotheses:
            for stat in config.statistics:
                for alpha in config.alphas:
                    key = cell_key(hypothesis, stat, alpha)
                    rejections = sum(1 for rec in ok if rec["decisions"][key])
                    valid = len(ok)
                    rate = rejections / valid if valid else None
                    se = float(np.sqrt(rate * (1 - rate) / valid)) if valid else None
                    cells.append({
                        "scenario": s,
                        "label": scenario.name,
                        "n": scenario.n,
                        "hypothesis": hypothesis,
                        "statistic": stat,
                        "alpha": alpha,
                        "rejections": rejections,
                        "runs": valid,
                        "failures": failures,
                        "rate": rate,
                        "se": se,
                        "key": key,
                    })
    return cells


def run_study(config: StudyConfig, n_jobs: Optional[int] = None, progress: bool = True) -> StudyResult:
    """
    Run all scenarios and repetitions.

    Args:
        config: Study configuration
        n_jobs: Worker count override (default: config.jobs)
        progress: Show a progress bar on stderr

    Returns:
        StudyResult
    """
    logger = get_logger()
    n_jobs = config.n_jobs if n_jobs is None else n_jobs
    tasks = [(s, r) for s in range(len(config.scenarios)) for r in range(config.runs)]
    logger.info(f"Study: {len(config.scenarios)} scenario(s) x {config.runs} run(s), "
                f"B={config.B}, jobs={n_jobs}")

    start = time.perf_counter()
    results = Parallel(n_jobs=n_jobs, return_as="generator")(
        delayed(run_replication)(config, s, r) for s, r in tasks
    )
    records = list(tqdm(results, total=len(tasks), desc="Study", file=sys.stderr,
                        disable=not progress))
    wall_time = time.perf_counter() - start

    for rec in records:
        if not rec["ok"]:
            logger.error(f"Scenario {config.scenarios[rec['scenario']].name}, "
                         f"run {rec['run']} failed: {rec['error']}")

    result = StudyResult(config, records, wall_time)
    logger.info(f"Study finished in {wall_time:.1f}s")
    return result


def print_study_summary(result: StudyResult, stream=None):
    """Human-readable table on stderr."""
    out = stream if stream is not None else sys.stderr
    print_section_header("REJECTION RATES: ARCH (ASSOC)", out)
    out.write(result.to_table().to_string(index=False) + "\n")
