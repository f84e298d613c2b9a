"""
Ranks, the empirical copula and its finite-difference partial derivatives.

The empirical copula is stored as the integer matrix
``cum[i, j] = #{k : R_k1 <= i and R_k2 <= j}``, so that
C_n(u1, u2) = cum[ceil(n u1), ceil(n u2)] / n is a constant-time lookup and
compositions such as C_n(x, C_n(y, z)) can be carried out on integer indices.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import LATTICE_TOL, MIN_SAMPLE_SIZE, TIE_POLICIES
from .exceptions import ConfigError, DataQualityError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Sample:
    """
    n x 2 matrix of observations (raw data or pseudo-observations).

    Attributes:
        data: Read-only float array of shape (n, 2)
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DataQualityError(f"sample must have shape (n, 2), got {arr.shape}")
        if arr.shape[0] < 1:
            raise DataQualityError("sample is empty")
        bad = np.argwhere(~np.isfinite(arr))
        if bad.size:
            row, col = bad[0]
            raise DataQualityError(f"non-finite value {arr[row, col]} in row {row + 1}, column {col + 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_columns(cls, x1, x2) -> "Sample":
        return cls(np.column_stack([np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)]))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def x1(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def x2(self) -> np.ndarray:
        return self.data[:, 1]


@dataclass(frozen=True)
class RankMatrix:
    """Componentwise ranks; each column is a permutation of 1..n."""

    r1: np.ndarray
    r2: np.ndarray

    def __post_init__(self):
        r1 = np.asarray(self.r1, dtype=np.int64)
        r2 = np.asarray(self.r2, dtype=np.int64)
        n = r1.shape[0]
        expected = np.arange(1, n + 1)
        for name, r in (("r1", r1), ("r2", r2)):
            if r.shape != (n,) or not np.array_equal(np.sort(r), expected):
                raise DataQualityError(f"{name} is not a permutation of 1..{n}")
        r1.setflags(write=False)
        r2.setflags(write=False)
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)

    @property
    def n(self) -> int:
        return self.r1.shape[0]


def _column_ranks(x: np.ndarray, column: int, tie_policy: str,
                  rng: Optional[np.random.Generator]) -> np.ndarray:
    n = x.shape[0]
    sorted_x = np.sort(x)
    tied = sorted_x[1:] == sorted_x[:-1]

    if tie_policy == "error" and np.any(tied):
        values = np.unique(sorted_x[1:][tied])
        shown = ", ".join(f"{v:g}" for v in values[:5])
        more = f" (and {values.size - 5} more)" if values.size > 5 else ""
        raise DataQualityError(f"tied values in column {column}: {shown}{more}")

    # Random tie-break key; without ties the ordering is decided by x alone
    key = rng.random(n) if tie_policy == "random" else np.zeros(n)
    order = np.lexsort((key, x))
    r = np.empty(n, dtype=np.int64)
    r[order] = np.arange(1, n + 1)
    return r


def ranks(sample: Sample, tie_policy: str = "random",
          rng: Optional[np.random.Generator] = None) -> RankMatrix:
    """
    Componentwise ranks of a sample.

    Args:
        sample: Observations, n >= 2
        tie_policy: 'error' aborts on ties, 'random' breaks them with ``rng``
        rng: Generator for the random tie-break (seed 0 stream if omitted)

    Returns:
        RankMatrix
    """
    if tie_policy not in TIE_POLICIES:
        raise ConfigError(f"unknown tie policy '{tie_policy}', expected one of {TIE_POLICIES}")
    if sample.n < MIN_SAMPLE_SIZE:
        raise DataQualityError(f"need at least {MIN_SAMPLE_SIZE} observations, got {sample.n}")
    if tie_policy == "random" and rng is None:
        rng = np.random.default_rng(0)

    r1 = _column_ranks(sample.x1, 1, tie_policy, rng)
    r2 = _column_ranks(sample.x2, 2, tie_policy, rng)
    return RankMatrix(r1, r2)


def lattice_index(u: ArrayLike, n: int) -> np.ndarray:
    """
    Map u in [0,1] to the lattice index ceil(n u), with ceil(0) = 0.

    Values within LATTICE_TOL of a lattice point i/n map to i.
    """
    idx = np.ceil(np.asarray(u, dtype=float) * n - LATTICE_TOL)
    return np.clip(idx, 0, n).astype(np.int64)


class EmpiricalCopula:
    """
    Empirical copula of a rank matrix.

    Attributes:
        n: Sample size
        r1, r2: Ranks
        cum: (n+1) x (n+1) read-only integer matrix of cumulative counts
    """

    def __init__(self, rank_matrix: RankMatrix):
        self.n = rank_matrix.n
        self.r1 = rank_matrix.r1
        self.r2 = rank_matrix.r2

        n = self.n
        counts = np.zeros((n + 1, n + 1), dtype=np.int32)
        counts[self.r1, self.r2] = 1
        cum = counts.cumsum(axis=0, dtype=np.int32).cumsum(axis=1, dtype=np.int32)
        cum.setflags(write=False)
        self.cum = cum

    @classmethod
    def from_sample(cls, sample: Sample, tie_policy: str = "random",
                    rng: Optional[np.random.Generator] = None) -> "EmpiricalCopula":
        return cls(ranks(sample, tie_policy, rng))

    def count(self, i: ArrayLike, j: ArrayLike) -> np.ndarray:
        """Integer count #{k : R_k1 <= i, R_k2 <= j}."""
        return self.cum[i, j]

    def _lookup(self, u1: ArrayLike, u2: ArrayLike) -> np.ndarray:
        return self.cum[lattice_index(u1, self.n), lattice_index(u2, self.n)] / self.n

    def eval(self, u1: ArrayLike, u2: ArrayLike) -> ArrayLike:
        """
        C_n(u1, u2) = cum[ceil(n u1), ceil(n u2)] / n.

        Args:
            u1: First argument(s) in [0, 1]
            u2: Second argument(s) in [0, 1]

        Returns:
            Float for scalar input, array otherwise
        """
        a = np.asarray(u1, dtype=float)
        b = np.asarray(u2, dtype=float)
        if np.any((a < 0) | (a > 1) | (b < 0) | (b > 1)) or np.any(np.isnan(a)) or np.any(np.isnan(b)):
            raise ValueError("empirical copula arguments must lie in the unit square")
        out = self._lookup(a, b)
        return float(out) if np.ndim(out) == 0 else out

    def diagonal_hits(self) -> np.ndarray:
        """Indices i in 0..n with cum[i, i] == i, i.e. C_n(i/n, i/n) = i/n."""
        i = np.arange(self.n + 1)
        return np.flatnonzero(self.cum[i, i] == i)

    def deriv_hat(self, p: int, u1: ArrayLike, u2: ArrayLike, h: float,
                  clamp: bool = True) -> ArrayLike:
        """
        Finite-difference estimate of the partial derivative dC/du_p.

        For p = 1 (p = 2 is symmetric in the roles of u1 and u2):
            (C_n(u1+h, u2) - C_n(u1-h, u2)) / 2h    if u1 in [h, 1-h]
            C_n(2h, u2) / 2h                        if u1 in [0, h)
            (u2 - C_n(1-2h, u2)) / 2h               if u1 in (1-h, 1]

        Args:
            p: 1 or 2
            u1: First argument(s)
            u2: Second argument(s)
            h: Bandwidth in (0, 1/2)
            clamp: Clamp the estimate to [0, 1]

        Returns:
            Estimates, float for scalar input
        """
        if p not in (1, 2):
            raise ValueError(f"p must be 1 or 2, got {p}")
        if not 0.0 < h < 0.5:
            raise ConfigError(f"bandwidth must lie in (0, 1/2), got {h}")

        a, b = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
        # free: differentiated coordinate; fixed: the other one
        free, fixed = (a, b) if p == 1 else (b, a)

        def c(s, t):
            s = np.clip(s, 0.0, 1.0)
            return self._lookup(s, t) if p == 1 else self._lookup(t, s)

        central = (c(free + h, fixed) - c(free - h, fixed)) / (2 * h)
        lower = c(np.full_like(free, 2 * h), fixed) / (2 * h)
        upper = (fixed - c(np.full_like(free, 1 - 2 * h), fixed)) / (2 * h)

        value = np.where(free < h, lower, np.where(free > 1 - h, upper, central))
        if clamp:
            value = np.clip(value, 0.0, 1.0)
        return float(value) if value.ndim == 0 else value


def eval(ec: EmpiricalCopula, u) -> float:
    """C_n at a single point u = (u1, u2)."""
    return ec.eval(u[0], u[1])


def deriv_hat(ec: EmpiricalCopula, p: int, u, h: float) -> float:
    """Clamped finite-difference partial derivative at a single point."""
    return ec.deriv_hat(p, u[0], u[1], h)
