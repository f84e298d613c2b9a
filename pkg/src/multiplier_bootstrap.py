"""
Multiplier bootstrap for the associativity process.

Multipliers xi_i are i.i.d. uniform on {0, 2}. The bootstrap empirical
copula weights observation i by xi_i / mean(xi), giving

    alpha_n^xi(u) = sqrt(n) (C_n^xi(u) - C_n(u)),

and H_n^xi combines alpha_n^xi with the finite-difference derivative
estimates of C_n. The derivative estimates depend on the data only, so they
are computed once per data set (``MultiplierProcess``) and reused for every
replication.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from .associativity import Grid3, ProcessField, STATISTIC_FUNCTIONS
from .config import LATTICE_TOL, MAX_MULTIPLIER_REDRAWS
from .empirical_copula import EmpiricalCopula, lattice_index
from .exceptions import BootstrapError, ConfigError
from .utils import get_logger, make_rng


@dataclass(frozen=True)
class MultiplierDraw:
    """
    One vector of multipliers.

    Attributes:
        xi: n multiplier values
        redraws: Number of all-zero vectors discarded before this one
    """

    xi: np.ndarray
    redraws: int = 0

    def __post_init__(self):
        xi = np.array(self.xi, dtype=float)
        if xi.ndim != 1 or xi.size == 0:
            raise ValueError("multipliers must be a non-empty vector")
        if xi.sum() == 0:
            raise BootstrapError("multipliers have mean zero")
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "MultiplierDraw":
        """Build a draw from explicit values (forced draws)."""
        return cls(np.asarray(values, dtype=float))

    @property
    def n(self) -> int:
        return self.xi.size

    @property
    def xibar(self) -> float:
        return float(self.xi.mean())


def draw_multipliers(n: int, rng: np.random.Generator,
                     max_redraws: int = MAX_MULTIPLIER_REDRAWS) -> MultiplierDraw:
    """
    Draw n i.i.d. multipliers uniform on {0, 2}.

    All-zero vectors are discarded and redrawn from the same stream; the
    number of discarded vectors is recorded on the draw.

    Args:
        n: Number of observations (>= 2)
        rng: Generator of this replication
        max_redraws: Redraw limit before giving up

    Returns:
        MultiplierDraw
    """
    if n < 2:
        raise ConfigError(f"need n >= 2 multipliers, got {n}")
    redraws = 0
    while True:
        xi = 2.0 * rng.integers(0, 2, size=n)
        if xi.any():
            if redraws:
                get_logger().warning(f"Discarded {redraws} all-zero multiplier vector(s)")
            return MultiplierDraw(xi, redraws)
        redraws += 1
        if redraws > max_redraws:
            raise BootstrapError(f"multiplier draw was all zero {redraws} times in a row")


def weighted_cum(ec: EmpiricalCopula, draw: MultiplierDraw) -> np.ndarray:
    """Weighted cumulative counts wcum[i, j] = sum of xi_k over R_k1 <= i, R_k2 <= j."""
    if draw.n != ec.n:
        raise ValueError(f"draw has {draw.n} multipliers for {ec.n} observations")
    weights = np.zeros((ec.n + 1, ec.n + 1))
    weights[ec.r1, ec.r2] = draw.xi
    return weights.cumsum(axis=0).cumsum(axis=1)


def alpha_matrix(ec: EmpiricalCopula, draw: MultiplierDraw) -> np.ndarray:
    """
    alpha_n^xi on the whole lattice: A[i, j] = alpha_n^xi(i/n, j/n).

    Multipliers take integer values, so the weighted counts are exact and
    A vanishes exactly wherever C_n^xi and C_n agree.
    """
    n = ec.n
    wcum = weighted_cum(ec, draw)
    total = wcum[n, n]
    return np.sqrt(n) * (wcum / total - ec.cum / n)


def alpha_xi(ec: EmpiricalCopula, draw: MultiplierDraw, u1, u2=None):
    """
    alpha_n^xi(u) = sqrt(n) (C_n^xi(u) - C_n(u)).

    Args:
        ec: Empirical copula
        draw: Multipliers
        u1: First argument(s), or a point (u1, u2) when ``u2`` is omitted
        u2: Second argument(s)

    Returns:
        Float for scalar input, array otherwise
    """
    if u2 is None:
        u1, u2 = u1
    i = lattice_index(u1, ec.n)
    j = lattice_index(u2, ec.n)
    out = alpha_matrix(ec, draw)[i, j]
    return float(out) if np.ndim(out) == 0 else out


class MultiplierProcess:
    """
    Data-dependent part of H_n^xi on a grid.

    Holds the lattice indices of every alpha_n^xi argument in the
    multiplier-process expression and the clamped derivative estimates at
    those arguments. ``field(draw)`` then only needs one alpha matrix per
    replication.
    """

    def __init__(self, ec: EmpiricalCopula, grid: Grid3, h: float):
        if not 0.0 < h < 0.5:
            raise ConfigError(f"bandwidth must lie in (0, 1/2), got {h}")
        self.ec = ec
        self.grid = grid
        self.h = h

        n = ec.n
        t = grid.axis
        idx = grid.indices(n)
        # inner[a, b] = n C_n(t_a, t_b): lattice index of the inner composition
        inner = ec.cum[idx[:, None], idx[None, :]].astype(np.int64)
        inner_u = inner / n

        self.n = n
        self.idx = idx
        self.inner = inner

        d = ec.deriv_hat
        # Arguments (x, C_n(y,z)) and (C_n(x,y), z)
        self.d1_x_cyz = d(1, t[:, None, None], inner_u[None, :, :], h)
        self.d2_x_cyz = d(2, t[:, None, None], inner_u[None, :, :], h)
        self.d1_cxy_z = d(1, inner_u[:, :, None], t[None, None, :], h)
        self.d2_cxy_z = d(2, inner_u[:, :, None], t[None, None, :], h)
        # Arguments on the grid plane: (y, z) and (x, y) share one matrix
        self.d1_plane = d(1, t[:, None], t[None, :], h)
        self.d2_plane = d(2, t[:, None], t[None, :], h)

    def field_from_alpha(self, alpha: np.ndarray) -> ProcessField:
        """
        Assemble H_n^xi from a lattice matrix of alpha values.

        At node (x, y, z), with C_1 and C_2 the derivative estimates:

            a(x, Cyz) - C_1(x, Cyz) a(x, 1) - C_2(x, Cyz) a(1, Cyz)
          - [a(Cxy, z) - C_1(Cxy, z) a(Cxy, 1) - C_2(Cxy, z) a(1, z)]
          + C_2(x, Cyz) [a(y, z) - C_1(y, z) a(y, 1) - C_2(y, z) a(1, z)]
          - C_1(Cxy, z) [a(x, y) - C_1(x, y) a(x, 1) - C_2(x, y) a(1, y)]

        The map is linear in ``alpha``.
        """
        n, idx, inner = self.n, self.idx, self.inner
        a_plane = alpha[idx[:, None], idx[None, :]]
        a_t1 = alpha[idx, n]       # a(t, 1)
        a_1t = alpha[n, idx]       # a(1, t)

        a_x_cyz = alpha[idx[:, None, None], inner[None, :, :]]
        a_x_1 = a_t1[:, None, None]
        a_1_cyz = alpha[n, inner][None, :, :]

        a_cxy_z = alpha[inner[:, :, None], idx[None, None, :]]
        a_cxy_1 = alpha[inner, n][:, :, None]
        a_1_z = a_1t[None, None, :]

        a_yz = a_plane[None, :, :]
        a_y_1 = a_t1[None, :, None]
        a_xy = a_plane[:, :, None]
        a_1_y = a_1t[None, :, None]

        d1_yz = self.d1_plane[None, :, :]
        d2_yz = self.d2_plane[None, :, :]
        d1_xy = self.d1_plane[:, :, None]
        d2_xy = self.d2_plane[:, :, None]

        values = (
            a_x_cyz - self.d1_x_cyz * a_x_1 - self.d2_x_cyz * a_1_cyz
            - (a_cxy_z - self.d1_cxy_z * a_cxy_1 - self.d2_cxy_z * a_1_z)
            + self.d2_x_cyz * (a_yz - d1_yz * a_y_1 - d2_yz * a_1_z)
            - self.d1_cxy_z * (a_xy - d1_xy * a_x_1 - d2_xy * a_1_y)
        )
        return ProcessField(self.grid, values)

    def field(self, draw: MultiplierDraw) -> ProcessField:
        return self.field_from_alpha(alpha_matrix(self.ec, draw))


def hn_xi_field(ec: EmpiricalCopula, draw: MultiplierDraw, grid: Grid3, h: float) -> ProcessField:
    """H_n^xi on the grid for one multiplier draw."""
    return MultiplierProcess(ec, grid, h).field(draw)


@dataclass(frozen=True)
class BootstrapSample:
    """
    Bootstrap replications of one statistic.

    Attributes:
        stats: B statistic values, replication order
        statistic: 'L2' or 'KS'
        seed: Master seed
        path: Stream prefix; replication b used stream path + (b,)
        redraws: Total number of discarded all-zero multiplier vectors
    """

    stats: np.ndarray
    statistic: str = "L2"
    seed: int = 0
    path: Tuple[int, ...] = ()
    redraws: int = 0

    def __post_init__(self):
        stats = np.array(self.stats, dtype=float)
        stats.setflags(write=False)
        object.__setattr__(self, "stats", stats)
        object.__setattr__(self, "path", tuple(int(p) for p in self.path))

    @property
    def B(self) -> int:
        return self.stats.size

    @property
    def stream_ids(self) -> List[Tuple[int, ...]]:
        return [self.path + (b,) for b in range(self.B)]


MultiplierSampler = Callable[[int, np.random.Generator], MultiplierDraw]


def _replicate_batch(process: MultiplierProcess, seed: int, path: Tuple[int, ...],
                     replications: Sequence[int], statistics: Sequence[str],
                     sampler: MultiplierSampler) -> List[Tuple[Dict[str, float], int]]:
    results = []
    for b in replications:
        draw = sampler(process.n, make_rng(seed, *path, int(b)))
        f = process.field(draw)
        results.append(({name: STATISTIC_FUNCTIONS[name](f) for name in statistics}, draw.redraws))
    return results


def bootstrap_all(ec: EmpiricalCopula, grid: Grid3, h: float, B: int,
                  statistics: Sequence[str] = ("L2", "KS"), seed: int = 0,
                  path: Tuple[int, ...] = (1,), n_jobs: int = 1,
                  sampler: Optional[MultiplierSampler] = None,
                  process: Optional[MultiplierProcess] = None) -> Dict[str, BootstrapSample]:
    """
    Run B multiplier replications and evaluate several statistics on each field.

    Replication b draws its multipliers from the stream (seed, *path, b), so
    the output does not depend on ``n_jobs`` or the execution order.

    Args:
        ec: Empirical copula
        grid: Evaluation grid
        h: Bandwidth of the derivative estimates
        B: Number of replications (>= 1)
        statistics: Statistic names to evaluate
        seed: Master seed
        path: Stream prefix of the replications
        n_jobs: joblib worker count
        sampler: Multiplier sampler (default: draw_multipliers)
        process: Precomputed MultiplierProcess for (ec, grid, h)

    Returns:
        Dictionary statistic name -> BootstrapSample
    """
    if int(B) < 1:
        raise ConfigError(f"number of bootstrap replications must be >= 1, got {B}")
    for name in statistics:
        if name not in STATISTIC_FUNCTIONS:
            raise ConfigError(f"unknown statistic '{name}'")
    sampler = sampler or draw_multipliers
    process = process or MultiplierProcess(ec, grid, h)
    path = tuple(int(p) for p in path)

    n_batches = 1 if n_jobs == 1 else min(int(B), 4 * (n_jobs if n_jobs > 0 else 8))
    batches = [list(chunk) for chunk in np.array_split(np.arange(int(B)), n_batches) if chunk.size]

    batch_results = Parallel(n_jobs=n_jobs)(
        delayed(_replicate_batch)(process, seed, path, batch, tuple(statistics), sampler)
        for batch in batches
    )
    flat = [item for batch in batch_results for item in batch]
    redraws = sum(r for _, r in flat)

    return {
        name: BootstrapSample(np.array([values[name] for values, _ in flat]),
                              statistic=name, seed=seed, path=path, redraws=redraws)
        for name in statistics
    }


def bootstrap_statistics(ec: EmpiricalCopula, grid: Grid3, h: float, B: int,
                         statistic: str = "L2", seed: int = 0,
                         path: Tuple[int, ...] = (1,), n_jobs: int = 1,
                         sampler: Optional[MultiplierSampler] = None) -> BootstrapSample:
    """B bootstrap replications of a single statistic (see ``bootstrap_all``)."""
    return bootstrap_all(ec, grid, h, B, (statistic,), seed, path, n_jobs, sampler)[statistic]


def quantile(sample: Union[BootstrapSample, Sequence[float], np.ndarray], p: float) -> float:
    """
    Order-statistic quantile: the ceil(p B)-th smallest value.

    Args:
        sample: Bootstrap sample or raw values
        p: Level in (0, 1)

    Returns:
        Quantile value
    """
    stats = sample.stats if isinstance(sample, BootstrapSample) else np.asarray(sample, dtype=float)
    if stats.size == 0:
        raise BootstrapError("cannot take a quantile of an empty bootstrap sample")
    if not 0.0 < p < 1.0:
        raise ConfigError(f"quantile level must lie in (0, 1), got {p}")
    k = int(np.ceil(p * stats.size - LATTICE_TOL))
    k = min(max(k, 1), stats.size)
    return float(np.sort(stats)[k - 1])
