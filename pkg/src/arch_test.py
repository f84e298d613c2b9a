"""
Tests of associativity and Archimedeanity of a bivariate copula.

Procedure for one data set:

1. Ranks -> empirical copula C_n -> T_n = L2 or KS statistic of H_n.
2. B multiplier replications -> bootstrap sample of T_n^xi.
3. Associativity: reject if T_n > q_{1-alpha}.
4. Archimedeanity: A_n = max{(i/n)(1 - i/n) : C_n(i/n, i/n) = i/n},
   penalty k_n (4 A_n)^2 with k_n = q_{0.05} n^{1/4},
   reject if S_n = T_n + penalty > q_{1-alpha}.

The bootstrap distribution is shared by both hypotheses, both statistics
and all levels (``analyse`` once, ``decide`` many times).
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import SCHEMA_VERSION, __version__
from .associativity import Grid3, ProcessField, hn_field, statistic
from .config import (
    AUTO_BANDWIDTH_CAP,
    AUTO_BANDWIDTH_EXPONENT,
    DEFAULT_ALPHA,
    DEFAULT_B,
    DEFAULT_GRID_M,
    DEFAULT_TIE_POLICY,
    HYPOTHESES,
    MIN_RECOMMENDED_B,
    PENALTY_QUANTILE,
    SMALL_SAMPLE_SIZE,
    STATISTICS,
    TIE_POLICIES,
    WARN_SAMPLE_SIZE,
)
from .empirical_copula import EmpiricalCopula, Sample, ranks
from .exceptions import ConfigError
from .multiplier_bootstrap import BootstrapSample, MultiplierProcess, bootstrap_all, quantile
from .utils import get_logger, make_rng

HYPOTHESIS_ALIASES = {
    "associativity": "associativity",
    "assoc": "associativity",
    "archimedeanity": "archimedeanity",
    "arch": "archimedeanity",
}


def normalize_hypothesis(name: str) -> str:
    try:
        return HYPOTHESIS_ALIASES[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown hypothesis '{name}', expected one of {HYPOTHESES}") from None


def normalize_statistic(name: str) -> str:
    upper = name.upper()
    if upper not in STATISTICS:
        raise ConfigError(f"unknown statistic '{name}', expected one of {STATISTICS}")
    return upper


@dataclass(frozen=True)
class TestConfig:
    """
    Configuration of one test.

    Attributes:
        hypothesis: 'associativity' or 'archimedeanity'
        statistic: 'L2' or 'KS'
        alpha: Test level in (0, 1)
        B: Number of bootstrap replications
        grid_m: Grid points per axis
        bandwidth: Derivative bandwidth in (0, 1/2) or 'auto' (n^{-1/4})
        seed: Master seed
        tie_policy: 'random' or 'error'
        n_jobs: joblib worker count for the bootstrap
    """

    __test__ = False

    hypothesis: str = "archimedeanity"
    statistic: str = "L2"
    alpha: float = DEFAULT_ALPHA
    B: int = DEFAULT_B
    grid_m: int = DEFAULT_GRID_M
    bandwidth: Union[float, str] = "auto"
    seed: int = 0
    tie_policy: str = DEFAULT_TIE_POLICY
    n_jobs: int = field(default=1, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "hypothesis", normalize_hypothesis(self.hypothesis))
        object.__setattr__(self, "statistic", normalize_statistic(self.statistic))
        if not 0.0 < float(self.alpha) < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.B) != self.B or int(self.B) < 1:
            raise ConfigError(f"B must be a positive integer, got {self.B}")
        if int(self.grid_m) != self.grid_m or int(self.grid_m) < 2:
            raise ConfigError(f"grid_m must be an integer >= 2, got {self.grid_m}")
        if self.tie_policy not in TIE_POLICIES:
            raise ConfigError(f"unknown tie policy '{self.tie_policy}', expected one of {TIE_POLICIES}")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != "auto":
                raise ConfigError(f"bandwidth must be a number or 'auto', got '{self.bandwidth}'")
        elif not 0.0 < float(self.bandwidth) < 0.5:
            raise ConfigError(f"bandwidth must lie in (0, 1/2), got {self.bandwidth}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "B", int(self.B))
        object.__setattr__(self, "grid_m", int(self.grid_m))
        object.__setattr__(self, "seed", int(self.seed))

    def resolve_bandwidth(self, n: int) -> float:
        """Bandwidth for sample size n; 'auto' is n^{-1/4}, capped below 1/2."""
        if self.bandwidth != "auto":
            return float(self.bandwidth)
        h = float(n) ** AUTO_BANDWIDTH_EXPONENT
        if h > AUTO_BANDWIDTH_CAP:
            get_logger().warning(
                f"Auto bandwidth n^(-1/4) = {h:.4f} for n={n} clipped to {AUTO_BANDWIDTH_CAP}")
            h = AUTO_BANDWIDTH_CAP
        return h

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class TestReport:
    """Outcome of one test with full provenance."""

    __test__ = False

    hypothesis: str
    statistic: str
    alpha: float
    n: int
    T_value: float
    A_n: float
    k_n: float
    penalty: float
    S_value: float
    q_alpha: float
    q05: float
    p_value: float
    reject: bool
    bandwidth: float
    B: int
    bootstrap_redraws: int
    fixed_points: Tuple[float, ...]
    config: Dict[str, Any]

    @property
    def tested_value(self) -> float:
        return self.T_value if self.hypothesis == "associativity" else self.S_value

    def to_dict(self) -> Dict[str, Any]:
        """Versioned JSON-ready representation."""
        return {
            "schema_version": SCHEMA_VERSION,
            "hypothesis": self.hypothesis,
            "statistic": self.statistic,
            "alpha": self.alpha,
            "n": self.n,
            "T_value": self.T_value,
            "A_n": self.A_n,
            "k_n": self.k_n,
            "penalty": self.penalty,
            "S_value": self.S_value,
            "q_alpha": self.q_alpha,
            "q05": self.q05,
            "p_value": self.p_value,
            "reject": self.reject,
            "diagnostics": {
                "fixed_points": list(self.fixed_points),
                "bandwidth": self.bandwidth,
                "bootstrap_redraws": self.bootstrap_redraws,
            },
            "provenance": {
                "package_version": __version__,
                "seed": self.config["seed"],
                "B": self.B,
                "config": dict(self.config),
            },
        }


def an_statistic(ec: EmpiricalCopula) -> float:
    """
    Diagonal statistic A_n = max{(i/n)(1 - i/n) : cum[i, i] = i}.

    The hit test and the maximization are carried out in integers; i = 0 and
    i = n always hit, so A_n = 0 when no interior index hits.
    """
    n = ec.n
    hits = ec.diagonal_hits().astype(np.int64)
    best = int(np.max(hits * (n - hits)))
    return best / (n * n)


def penalty(a_n: float, q05: float, n: int) -> float:
    """k_n phi(A_n) with k_n = q05 n^{1/4} and phi(x) = (4x)^2."""
    return q05 * float(n) ** 0.25 * (4.0 * a_n) ** 2


@dataclass
class Analysis:
    """
    Everything computed once per data set.

    Attributes:
        n: Sample size
        ec: Empirical copula
        process_field: H_n on the grid
        T: Observed statistics by name
        bootstrap: Bootstrap samples by statistic name
        A_n: Diagonal statistic
        fixed_points: Diagonal fixed points i/n
        bandwidth: Bandwidth used for the derivative estimates
        config: Configuration (its hypothesis/statistic/alpha are defaults for ``decide``)
    """

    n: int
    ec: EmpiricalCopula
    process_field: ProcessField
    T: Dict[str, float]
    bootstrap: Dict[str, BootstrapSample]
    A_n: float
    fixed_points: List[float]
    bandwidth: float
    config: TestConfig


def _warn_small(n: int, B: int):
    logger = get_logger()
    if n < SMALL_SAMPLE_SIZE:
        logger.warning(f"Sample size n={n} is far below {SMALL_SAMPLE_SIZE}; "
                       f"the bootstrap approximation is unreliable")
    elif n < WARN_SAMPLE_SIZE:
        logger.warning(f"Sample size n={n} is below {WARN_SAMPLE_SIZE}; results may be inaccurate")
    if B < MIN_RECOMMENDED_B:
        logger.warning(f"B={B} bootstrap replications is below the recommended {MIN_RECOMMENDED_B}")


def analyse(sample: Sample, config: TestConfig, statistics: Optional[Sequence[str]] = None,
            path: Tuple[int, ...] = ()) -> Analysis:
    """
    Compute the observed statistics and their multiplier bootstrap samples.

    Args:
        sample: Data, n >= 2
        config: Test configuration
        statistics: Statistics to compute (default: the configured one)
        path: Random-stream prefix; ties use path + (2,), replication b path + (1, b)

    Returns:
        Analysis
    """
    statistics = tuple(normalize_statistic(s) for s in (statistics or (config.statistic,)))
    path = tuple(path)
    logger = get_logger()

    rm = ranks(sample, config.tie_policy, make_rng(config.seed, *path, 2))
    ec = EmpiricalCopula(rm)
    n = ec.n
    _warn_small(n, config.B)

    h = config.resolve_bandwidth(n)
    grid = Grid3(config.grid_m)
    hn = hn_field(ec, grid)
    observed = {name: statistic(hn, name) for name in statistics}

    logger.debug(f"n={n}, m={grid.m}, h={h:.4f}, observed {observed}")
    process = MultiplierProcess(ec, grid, h)
    boot = bootstrap_all(ec, grid, h, config.B, statistics, seed=config.seed,
                         path=path + (1,), n_jobs=config.n_jobs, process=process)

    hits = ec.diagonal_hits()
    return Analysis(
        n=n,
        ec=ec,
        process_field=hn,
        T=observed,
        bootstrap=boot,
        A_n=an_statistic(ec),
        fixed_points=[float(i) / n for i in hits],
        bandwidth=h,
        config=config,
    )


def decide(analysis: Analysis, hypothesis: Optional[str] = None,
           statistic_name: Optional[str] = None, alpha: Optional[float] = None) -> TestReport:
    """
    Apply the decision rule to an analysis.

    Args:
        analysis: Output of ``analyse``
        hypothesis: Defaults to the configured hypothesis
        statistic_name: Defaults to the configured statistic
        alpha: Defaults to the configured level

    Returns:
        TestReport
    """
    config = analysis.config
    hypothesis = normalize_hypothesis(hypothesis or config.hypothesis)
    stat = normalize_statistic(statistic_name or config.statistic)
    alpha = config.alpha if alpha is None else float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if stat not in analysis.bootstrap:
        raise ConfigError(f"statistic {stat} was not computed in this analysis")

    n = analysis.n
    boot = analysis.bootstrap[stat]
    t_value = analysis.T[stat]
    q_alpha = quantile(boot, 1.0 - alpha)
    q05 = quantile(boot, PENALTY_QUANTILE)
    k_n = q05 * float(n) ** 0.25
    pen = penalty(analysis.A_n, q05, n)
    s_value = t_value + pen

    tested = t_value if hypothesis == "associativity" else s_value
    reject = bool(tested > q_alpha)
    p_value = (1 + int(np.count_nonzero(boot.stats >= tested))) / (boot.B + 1)

    provenance = config.to_dict()
    provenance.update(hypothesis=hypothesis, statistic=stat, alpha=alpha)
    provenance.pop("n_jobs", None)

    get_logger().info(
        f"{hypothesis} ({stat}, alpha={alpha}): tested={tested:.6g}, "
        f"q={q_alpha:.6g}, p={p_value:.4f} -> {'reject' if reject else 'do not reject'}")

    return TestReport(
        hypothesis=hypothesis,
        statistic=stat,
        alpha=alpha,
        n=n,
        T_value=t_value,
        A_n=analysis.A_n,
        k_n=k_n,
        penalty=pen,
        S_value=s_value,
        q_alpha=q_alpha,
        q05=q05,
        p_value=p_value,
        reject=reject,
        bandwidth=analysis.bandwidth,
        B=boot.B,
        bootstrap_redraws=boot.redraws,
        fixed_points=tuple(analysis.fixed_points),
        config=provenance,
    )


def run_test(sample: Sample, config: TestConfig) -> TestReport:
    """Run the configured test on a sample."""
    return decide(analyse(sample, config))
