"""
The associativity process H_n(x,y,z) = sqrt(n) {C_n(x, C_n(y,z)) - C_n(C_n(x,y), z)}
on a midpoint grid, and its L2 and KS statistics.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .empirical_copula import EmpiricalCopula, lattice_index
from .exceptions import ConfigError


@dataclass(frozen=True)
class Grid3:
    """Midpoint lattice {(i + 1/2)/m : i = 0..m-1}^3."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or int(self.m) < 2:
            raise ConfigError(f"grid size m must be an integer >= 2, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def axis(self) -> np.ndarray:
        return (np.arange(self.m) + 0.5) / self.m

    def indices(self, n: int) -> np.ndarray:
        """Lattice indices ceil(n t) of the axis nodes."""
        return lattice_index(self.axis, n)


@dataclass(frozen=True)
class ProcessField:
    """
    Values of H_n or H_n^xi on a Grid3.

    Attributes:
        grid: The grid
        values: Array of shape (m, m, m) indexed [x, y, z]
    """

    grid: Grid3
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        m = self.grid.m
        if values.shape != (m, m, m):
            raise ValueError(f"field must have shape {(m, m, m)}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", values)

    def to_frame(self) -> pd.DataFrame:
        """Long table with columns x, y, z, value (x slowest)."""
        axis = self.grid.axis
        x, y, z = np.meshgrid(axis, axis, axis, indexing="ij")
        return pd.DataFrame({
            "x": x.ravel(),
            "y": y.ravel(),
            "z": z.ravel(),
            "value": self.values.ravel(),
        })


def hn_field(ec: EmpiricalCopula, grid: Grid3) -> ProcessField:
    """
    Evaluate H_n on every node of the grid.

    Both compositions are evaluated on integer lattice indices: with I the
    indices of the axis nodes and G[a, b] = cum[I[a], I[b]] (so that
    C_n(t_a, t_b) = G[a, b] / n, whose own lattice index is G[a, b]),

        C_n(x, C_n(y, z)) = cum[I[x], G[y, z]] / n
        C_n(C_n(x, y), z) = cum[G[x, y], I[z]] / n

    The difference is formed in integers, so the field is exact up to the
    final scaling.

    Args:
        ec: Empirical copula
        grid: Evaluation grid

    Returns:
        ProcessField with values[x, y, z]
    """
    n = ec.n
    idx = grid.indices(n)
    inner = ec.cum[idx[:, None], idx[None, :]]

    left = ec.cum[idx[:, None, None], inner[None, :, :]].astype(np.int64)
    right = ec.cum[inner[:, :, None], idx[None, None, :]].astype(np.int64)

    return ProcessField(grid, np.sqrt(n) * (left - right) / n)


def statistic_l2(field: ProcessField) -> float:
    """Midpoint rule for the integral of H^2: (1/m^3) sum of squared values (C-order reduction)."""
    return float(np.sum(field.values ** 2) / field.values.size)


def statistic_ks(field: ProcessField) -> float:
    """Maximum absolute value over the grid."""
    return float(np.max(np.abs(field.values)))


STATISTIC_FUNCTIONS = {
    "L2": statistic_l2,
    "KS": statistic_ks,
}


def statistic(field: ProcessField, name: str) -> float:
    """Evaluate the statistic ``name`` ('L2' or 'KS')."""
    try:
        return STATISTIC_FUNCTIONS[name](field)
    except KeyError:
        raise ConfigError(f"unknown statistic '{name}', expected one of {tuple(STATISTIC_FUNCTIONS)}") from None
