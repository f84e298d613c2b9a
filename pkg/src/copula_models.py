"""
Bivariate copula families used by the test and the simulation study.

Every family exposes its distribution function, first partial derivatives,
Kendall's tau, tail dependence coefficients and a random sampler:

- Independence:      C(u,v) = uv
- FrechetM:          C(u,v) = min(u,v)
- Clayton(theta):    C(u,v) = max(u^-theta + v^-theta - 1, 0)^(-1/theta)
- Gumbel(theta):     C(u,v) = exp(-((-log u)^theta + (-log v)^theta)^(1/theta))
- StudentT(rho, df): copula of the bivariate t distribution
- AsymNegLogistic(theta, psi1, psi2):
      extreme-value copula with exponent function
      C(u,v) = uv * exp([(psi1 x)^-theta + (psi2 y)^-theta]^(-1/theta)),
      x = -log u, y = -log v. Its upper tail dependence coefficient is
      lambda_U = (psi1^-theta + psi2^-theta)^(-1/theta), increasing in theta
      from 0 (independence) to min(psi1, psi2).
- OrdinalSum(partition, components):
      a_i + (b_i - a_i) C_i((u-a_i)/(b_i-a_i), (v-a_i)/(b_i-a_i)) on J_i x J_i,
      min(u,v) elsewhere.

All models are immutable; samplers draw from a caller-owned
``numpy.random.Generator``.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, optimize, special, stats

from .config import LAMBDA_BISECTION_XTOL
from .empirical_copula import Sample
from .exceptions import ParameterDomainError

ArrayLike = Union[float, np.ndarray]

# Used to keep arguments of logs and quantile functions off the boundary
_EPS = 1e-300
_BISECTION_STEPS = 64


def _check_unit(u1: np.ndarray, u2: np.ndarray):
    if np.any(~np.isfinite(u1)) or np.any(~np.isfinite(u2)):
        raise ParameterDomainError("copula arguments must be finite")
    if np.any((u1 < 0) | (u1 > 1) | (u2 < 0) | (u2 > 1)):
        raise ParameterDomainError("copula arguments must lie in the unit square")


def _scalar_or_array(out: np.ndarray) -> ArrayLike:
    return float(out) if out.ndim == 0 else out


class CopulaModel(ABC):
    """
    Common interface of all bivariate copula models.

    Subclasses implement the formulas on the open unit square; this class
    takes care of broadcasting, argument checks and the exact boundary values
    C(u,0) = C(0,u) = 0, C(u,1) = C(1,u) = u.
    """

    family: ClassVar[str] = ""

    def cdf(self, u1: ArrayLike, u2: ArrayLike) -> ArrayLike:
        """
        Evaluate the copula.

        Args:
            u1: First argument(s) in [0, 1]
            u2: Second argument(s) in [0, 1]

        Returns:
            C(u1, u2), float for scalar input, array otherwise
        """
        a, b = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
        _check_unit(a, b)

        out = np.empty(a.shape)
        zero = (a == 0) | (b == 0)
        top1 = (a == 1) & ~zero
        top2 = (b == 1) & ~zero & ~top1
        inner = ~(zero | top1 | top2)

        out[zero] = 0.0
        out[top1] = b[top1]
        out[top2] = a[top2]
        if np.any(inner):
            x, y = a[inner], b[inner]
            value = self._cdf_interior(x, y)
            # Frechet bounds absorb rounding noise
            out[inner] = np.clip(value, np.maximum(x + y - 1.0, 0.0), np.minimum(x, y))
        return _scalar_or_array(out)

    def partial(self, p: int, u1: ArrayLike, u2: ArrayLike) -> ArrayLike:
        """
        First partial derivative dC/du_p.

        Args:
            p: 1 or 2
            u1: First argument(s)
            u2: Second argument(s)

        Returns:
            Partial derivative values in [0, 1]
        """
        if p not in (1, 2):
            raise ValueError(f"p must be 1 or 2, got {p}")
        a, b = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
        _check_unit(a, b)

        # The derivative variable and the conditioning variable
        free, other = (a, b) if p == 1 else (b, a)
        out = np.empty(a.shape)
        low = other == 0
        high = (other == 1) & ~low
        inner = ~(low | high)
        out[low] = 0.0
        out[high] = 1.0
        if np.any(inner):
            f = np.clip(free[inner], 1e-12, 1 - 1e-12)
            o = other[inner]
            value = self._partial1(f, o) if p == 1 else self._partial2(o, f)
            out[inner] = np.clip(value, 0.0, 1.0)
        return _scalar_or_array(out)

    def diagonal(self, u: ArrayLike) -> ArrayLike:
        """Diagonal section C(u, u)."""
        return self.cdf(u, u)

    def sample(self, n: int, rng: np.random.Generator) -> Sample:
        """
        Draw n i.i.d. observations with uniform margins.

        Args:
            n: Number of observations (>= 1)
            rng: Seeded random generator owned by the caller

        Returns:
            Sample of shape (n, 2)
        """
        if int(n) < 1:
            raise ParameterDomainError(f"sample size must be >= 1, got {n}")
        return Sample(self._sample_array(int(n), rng))

    @abstractmethod
    def _cdf_interior(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        """C on (0,1)^2."""

    @abstractmethod
    def _partial1(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        """dC/du1 on (0,1)^2."""

    def _partial2(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        # Exchangeable families
        return self._partial1(u2, u1)

    def _sample_array(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # Conditional inversion: U1 ~ U(0,1), U2 = C_{2|1}^{-1}(W | U1)
        u = rng.random(n)
        w = rng.random(n)
        return np.column_stack([u, self._conditional_inverse(u, w)])

    def _conditional_inverse(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Solve dC/du1(u, v) = w for v by vectorized bisection (monotone in v)."""
        lo = np.zeros_like(u)
        hi = np.ones_like(u)
        uc = np.clip(u, 1e-12, 1 - 1e-12)
        for _ in range(_BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            below = np.clip(self._partial1(uc, np.clip(mid, 1e-300, 1.0)), 0.0, 1.0) < w
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    @abstractmethod
    def kendall_tau(self) -> float:
        """Kendall's tau of the model."""

    @abstractmethod
    def tail_dependence(self) -> Tuple[float, float]:
        """Lower and upper tail dependence coefficients (lambda_L, lambda_U)."""


@dataclass(frozen=True)
class Independence(CopulaModel):
    """Independence copula Pi(u,v) = uv."""

    family: ClassVar[str] = "independence"

    def _cdf_interior(self, u1, u2):
        return u1 * u2

    def _partial1(self, u1, u2):
        return np.asarray(u2, dtype=float) * np.ones_like(u1)

    def _sample_array(self, n, rng):
        return rng.random((n, 2))

    def kendall_tau(self) -> float:
        return 0.0

    def tail_dependence(self) -> Tuple[float, float]:
        return 0.0, 0.0


@dataclass(frozen=True)
class FrechetM(CopulaModel):
    """Comonotone upper Frechet bound M(u,v) = min(u,v)."""

    family: ClassVar[str] = "frechet_m"

    def _cdf_interior(self, u1, u2):
        return np.minimum(u1, u2)

    def _partial1(self, u1, u2):
        return (u1 < u2).astype(float)

    def _sample_array(self, n, rng):
        u = rng.random(n)
        return np.column_stack([u, u])

    def kendall_tau(self) -> float:
        return 1.0

    def tail_dependence(self) -> Tuple[float, float]:
        return 1.0, 1.0


@dataclass(frozen=True)
class Clayton(CopulaModel):
    """
    Clayton copula.

    theta > 0 is the usual Archimedean family. With ``allow_negative=True``
    theta in (-1, 0) is accepted as well (truncated generator, used for
    negatively dependent ordinal-sum blocks).
    """

    theta: float
    allow_negative: bool = field(default=False, compare=False, repr=False)

    family: ClassVar[str] = "clayton"

    def __post_init__(self):
        theta = float(self.theta)
        lower = -1.0 if self.allow_negative else 0.0
        if not np.isfinite(theta) or theta <= lower or theta == 0.0:
            domain = "(-1, 0) or (0, inf)" if self.allow_negative else "(0, inf)"
            raise ParameterDomainError(f"Clayton theta must lie in {domain}, got {self.theta}")
        object.__setattr__(self, "theta", theta)

    def _base(self, u1, u2):
        t = self.theta
        return u1 ** (-t) + u2 ** (-t) - 1.0

    def _cdf_interior(self, u1, u2):
        t = self.theta
        with np.errstate(over="ignore", divide="ignore"):
            return np.maximum(self._base(u1, u2), 0.0) ** (-1.0 / t)

    def _partial1(self, u1, u2):
        t = self.theta
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            base = self._base(u1, u2)
            positive = base > 0
            logp = (-t - 1.0) * np.log(u1) + (-1.0 / t - 1.0) * np.log(np.where(positive, base, 1.0))
            return np.where(positive, np.exp(logp), 0.0)

    def _sample_array(self, n, rng):
        # Closed-form inverse of the conditional distribution
        t = self.theta
        u = rng.random(n)
        w = rng.random(n)
        with np.errstate(over="ignore", divide="ignore"):
            base = u ** (-t) * (w ** (-t / (1.0 + t)) - 1.0) + 1.0
            v = np.maximum(base, 0.0) ** (-1.0 / t)
        return np.column_stack([u, np.clip(v, 0.0, 1.0)])

    def kendall_tau(self) -> float:
        return self.theta / (self.theta + 2.0)

    def tail_dependence(self) -> Tuple[float, float]:
        if self.theta > 0:
            return 2.0 ** (-1.0 / self.theta), 0.0
        return 0.0, 0.0


@dataclass(frozen=True)
class Gumbel(CopulaModel):
    """Gumbel copula, theta >= 1 (theta = 1 is independence)."""

    theta: float

    family: ClassVar[str] = "gumbel"

    def __post_init__(self):
        theta = float(self.theta)
        if not np.isfinite(theta) or theta < 1.0:
            raise ParameterDomainError(f"Gumbel theta must be >= 1, got {self.theta}")
        object.__setattr__(self, "theta", theta)

    def _cdf_interior(self, u1, u2):
        t = self.theta
        x, y = -np.log(u1), -np.log(u2)
        return np.exp(-(x ** t + y ** t) ** (1.0 / t))

    def _partial1(self, u1, u2):
        t = self.theta
        x, y = -np.log(u1), -np.log(np.maximum(u2, _EPS))
        s = x ** t + y ** t
        c = np.exp(-s ** (1.0 / t))
        with np.errstate(divide="ignore", invalid="ignore"):
            value = c * s ** (1.0 / t - 1.0) * x ** (t - 1.0) / u1
        return np.nan_to_num(value, nan=0.0)

    def _sample_array(self, n, rng):
        # Marshall-Olkin frailty with a positive stable variable (Kanter's representation)
        if self.theta == 1.0:
            return rng.random((n, 2))
        a = 1.0 / self.theta
        phi = rng.uniform(0.0, np.pi, n)
        e = rng.exponential(size=n)
        s = (np.sin(a * phi) / np.sin(phi) ** (1.0 / a)) * (np.sin((1.0 - a) * phi) / e) ** ((1.0 - a) / a)
        e12 = rng.exponential(size=(n, 2))
        return np.exp(-(e12 / s[:, None]) ** a)

    def kendall_tau(self) -> float:
        return 1.0 - 1.0 / self.theta

    def tail_dependence(self) -> Tuple[float, float]:
        return 0.0, 2.0 - 2.0 ** (1.0 / self.theta)


@dataclass(frozen=True)
class StudentT(CopulaModel):
    """
    Student t copula with correlation rho and df degrees of freedom.

    The cdf has no closed form; it is computed as the integral of the
    conditional distribution dC/du1 (a scaled t with df + 1 degrees of
    freedom) over [0, u1] with adaptive quadrature.
    """

    rho: float
    df: int = 1

    family: ClassVar[str] = "t"

    # Absolute quadrature tolerance of the cdf
    CDF_TOL: ClassVar[float] = 1e-10

    def __post_init__(self):
        rho = float(self.rho)
        if not np.isfinite(rho) or not -1.0 < rho < 1.0:
            raise ParameterDomainError(f"t copula rho must lie in (-1, 1), got {self.rho}")
        if float(self.df) != int(self.df) or int(self.df) < 1:
            raise ParameterDomainError(f"t copula df must be a positive integer, got {self.df}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "df", int(self.df))

    def _cond_scalar(self, w: float, y: float) -> float:
        nu, rho = self.df, self.rho
        x = stats.t.ppf(w, nu)
        scale = np.sqrt((1.0 - rho ** 2) * (nu + x ** 2) / (nu + 1.0))
        return stats.t.cdf((y - rho * x) / scale, nu + 1)

    def _cdf_scalar(self, u1: float, u2: float) -> float:
        y = stats.t.ppf(u2, self.df)
        value, _ = integrate.quad(self._cond_scalar, 0.0, u1, args=(y,),
                                  epsabs=self.CDF_TOL, epsrel=self.CDF_TOL, limit=200)
        return value

    def _cdf_interior(self, u1, u2):
        return np.vectorize(self._cdf_scalar, otypes=[float])(u1, u2)

    def _partial1(self, u1, u2):
        nu, rho = self.df, self.rho
        x = stats.t.ppf(u1, nu)
        y = stats.t.ppf(np.clip(u2, 1e-300, 1.0), nu)
        scale = np.sqrt((1.0 - rho ** 2) * (nu + x ** 2) / (nu + 1.0))
        return stats.t.cdf((y - rho * x) / scale, nu + 1)

    def _sample_array(self, n, rng):
        chol = np.linalg.cholesky(np.array([[1.0, self.rho], [self.rho, 1.0]]))
        z = rng.standard_normal((n, 2)) @ chol.T
        w = rng.chisquare(self.df, size=n)
        x = z / np.sqrt(w / self.df)[:, None]
        return stats.t.cdf(x, self.df)

    def kendall_tau(self) -> float:
        return 2.0 / np.pi * np.arcsin(self.rho)

    def tail_dependence(self) -> Tuple[float, float]:
        nu = self.df
        lam = 2.0 * stats.t.cdf(-np.sqrt((nu + 1.0) * (1.0 - self.rho) / (1.0 + self.rho)), nu + 1)
        return float(lam), float(lam)


def _aneglog_upper_tail(theta: float, psi1: float, psi2: float) -> float:
    """lambda_U = (psi1^-theta + psi2^-theta)^(-1/theta); 0 in the theta -> 0 limit."""
    if theta <= 0:
        return 0.0
    log_s = np.logaddexp(-theta * np.log(psi1), -theta * np.log(psi2))
    return float(np.exp(-log_s / theta))


@dataclass(frozen=True)
class AsymNegLogistic(CopulaModel):
    """Asymmetric negative logistic extreme-value copula (Joe 1990 parameterization)."""

    theta: float
    psi1: float = 1.0
    psi2: float = 1.0

    family: ClassVar[str] = "aneglog"

    def __post_init__(self):
        theta, psi1, psi2 = float(self.theta), float(self.psi1), float(self.psi2)
        if not np.isfinite(theta) or theta <= 0:
            raise ParameterDomainError(f"aneglog theta must be > 0, got {self.theta}")
        for name, psi in (("psi1", psi1), ("psi2", psi2)):
            if not 0.0 < psi <= 1.0:
                raise ParameterDomainError(f"aneglog {name} must lie in (0, 1], got {psi}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "psi1", psi1)
        object.__setattr__(self, "psi2", psi2)

    def _terms(self, u1, u2):
        t = self.theta
        x = -np.log(u1)
        y = -np.log(np.maximum(u2, _EPS))
        lx = np.log(self.psi1 * np.maximum(x, _EPS))
        ly = np.log(self.psi2 * np.maximum(y, _EPS))
        w = np.exp(-np.logaddexp(-t * lx, -t * ly) / t)
        c = np.exp(-x - y + w)
        return c, lx, ly

    def _cdf_interior(self, u1, u2):
        c, _, _ = self._terms(u1, u2)
        return c

    def _partial1(self, u1, u2):
        t = self.theta
        c, lx, ly = self._terms(u1, u2)
        r1 = special.expit(t * (ly - lx))
        return c / u1 * (1.0 - self.psi1 * r1 ** (1.0 + 1.0 / t))

    def _partial2(self, u1, u2):
        t = self.theta
        c, lx, ly = self._terms(u1, u2)
        r2 = special.expit(t * (lx - ly))
        return c / np.maximum(u2, _EPS) * (1.0 - self.psi2 * r2 ** (1.0 + 1.0 / t))

    def kendall_tau(self) -> float:
        raise NotImplementedError("Kendall's tau of the asymmetric negative logistic model has no closed form")

    def tail_dependence(self) -> Tuple[float, float]:
        return 0.0, _aneglog_upper_tail(self.theta, self.psi1, self.psi2)


@dataclass(frozen=True)
class OrdinalSum(CopulaModel):
    """
    Ordinal sum of copulas over a finite partition of [0,1] into closed intervals.

    Attributes:
        partition: Intervals (a_i, b_i) with a_1 = 0, b_last = 1, b_i = a_{i+1}
        components: One copula per interval
    """

    partition: Tuple[Tuple[float, float], ...]
    components: Tuple[CopulaModel, ...]

    family: ClassVar[str] = "ordinal"

    def __post_init__(self):
        partition = tuple((float(a), float(b)) for a, b in self.partition)
        components = tuple(self.components)
        if len(partition) == 0 or len(partition) != len(components):
            raise ParameterDomainError("ordinal sum needs one component per interval")
        if partition[0][0] != 0.0 or partition[-1][1] != 1.0:
            raise ParameterDomainError("ordinal sum partition must start at 0 and end at 1")
        for i, (a, b) in enumerate(partition):
            if not a < b:
                raise ParameterDomainError(f"ordinal sum interval {i + 1} is empty: [{a}, {b}]")
            if i > 0 and partition[i - 1][1] != a:
                raise ParameterDomainError(
                    f"ordinal sum intervals {i} and {i + 1} do not adjoin: "
                    f"{partition[i - 1][1]} != {a}")
        for comp in components:
            if not isinstance(comp, CopulaModel):
                raise ParameterDomainError(f"ordinal sum component is not a copula: {comp!r}")
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "components", components)

    @property
    def widths(self) -> np.ndarray:
        return np.array([b - a for a, b in self.partition])

    def _blocks(self, u1, u2):
        for (a, b), comp in zip(self.partition, self.components):
            inside = (u1 >= a) & (u1 <= b) & (u2 >= a) & (u2 <= b)
            yield a, b - a, comp, inside

    def _cdf_interior(self, u1, u2):
        out = np.minimum(u1, u2)
        for a, w, comp, inside in self._blocks(u1, u2):
            if np.any(inside):
                s1 = np.clip((u1[inside] - a) / w, 0.0, 1.0)
                s2 = np.clip((u2[inside] - a) / w, 0.0, 1.0)
                out[inside] = a + w * np.asarray(comp.cdf(s1, s2))
        return out

    def _partial(self, p, u1, u2):
        out = ((u1 < u2) if p == 1 else (u2 < u1)).astype(float)
        for a, w, comp, inside in self._blocks(u1, u2):
            if np.any(inside):
                s1 = np.clip((u1[inside] - a) / w, 0.0, 1.0)
                s2 = np.clip((u2[inside] - a) / w, 0.0, 1.0)
                out[inside] = np.asarray(comp.partial(p, s1, s2))
        return out

    def _partial1(self, u1, u2):
        return self._partial(1, u1, u2)

    def _partial2(self, u1, u2):
        return self._partial(2, u1, u2)

    def _sample_array(self, n, rng):
        block = rng.choice(len(self.components), size=n, p=self.widths / self.widths.sum())
        out = np.empty((n, 2))
        for i, ((a, b), comp) in enumerate(zip(self.partition, self.components)):
            rows = np.flatnonzero(block == i)
            if rows.size == 0:
                continue
            v = comp._sample_array(rows.size, rng)
            # Clipping keeps every draw inside its block despite rounding
            out[rows] = np.clip(a + (b - a) * v, a, b)
        return out

    def kendall_tau(self) -> float:
        w = self.widths
        taus = np.array([comp.kendall_tau() for comp in self.components])
        return float(1.0 - np.sum(w ** 2 * (1.0 - taus)))

    def tail_dependence(self) -> Tuple[float, float]:
        return self.components[0].tail_dependence()[0], self.components[-1].tail_dependence()[1]


# ---------------------------------------------------------------------------
# Functional interface and parameter calibration
# ---------------------------------------------------------------------------

def cdf(model: CopulaModel, u: Sequence[float]) -> float:
    """C(u) for a single point u = (u1, u2)."""
    return model.cdf(u[0], u[1])


def diagonal(model: CopulaModel, u: ArrayLike) -> ArrayLike:
    """Diagonal section C(u, u)."""
    return model.diagonal(u)


def sample(model: CopulaModel, n: int, rng: np.random.Generator) -> Sample:
    """Draw n observations from ``model``."""
    return model.sample(n, rng)


_FAMILY_ALIASES = {
    "clayton": "clayton",
    "gumbel": "gumbel",
    "t": "t",
    "student": "t",
    "student_t": "t",
}


def param_from_tau(family: str, tau: float, df: int = 1,
                   allow_negative: bool = False) -> CopulaModel:
    """
    Choose the family parameter that realizes a given Kendall's tau.

    Clayton: theta = 2 tau / (1 - tau); Gumbel: theta = 1 / (1 - tau);
    Student t: rho = sin(pi tau / 2).

    Args:
        family: 'clayton', 'gumbel' or 't'
        tau: Target Kendall's tau
        df: Degrees of freedom (t only)
        allow_negative: Permit negative tau for Clayton (ordinal-sum blocks)

    Returns:
        Calibrated model
    """
    key = _FAMILY_ALIASES.get(family.lower())
    if key is None:
        raise ParameterDomainError(f"no tau calibration for family '{family}'")
    tau = float(tau)
    if not np.isfinite(tau):
        raise ParameterDomainError(f"tau must be finite, got {tau}")

    if key == "clayton":
        lower = -1.0 if allow_negative else 0.0
        if not lower <= tau < 1.0 or (tau == lower and lower < 0):
            raise ParameterDomainError(f"Clayton tau must lie in [{lower}, 1), got {tau}")
        if tau == 0.0:
            return Independence()
        return Clayton(2.0 * tau / (1.0 - tau), allow_negative=allow_negative)

    if key == "gumbel":
        if not 0.0 <= tau < 1.0:
            raise ParameterDomainError(f"Gumbel tau must lie in [0, 1), got {tau}")
        return Gumbel(1.0 / (1.0 - tau))

    if not -1.0 < tau < 1.0:
        raise ParameterDomainError(f"t copula tau must lie in (-1, 1), got {tau}")
    return StudentT(float(np.sin(np.pi * tau / 2.0)), df)


def param_from_lambdaU(psi1: float, psi2: float, lambdaU: float) -> AsymNegLogistic:
    """
    Calibrate the asymmetric negative logistic model to an upper tail dependence.

    Solves lambda_U(theta; psi1, psi2) = lambdaU by bisection; lambda_U is
    increasing in theta with supremum min(psi1, psi2).

    Args:
        psi1: Asymmetry parameter in (0, 1]
        psi2: Asymmetry parameter in (0, 1]
        lambdaU: Target coefficient in (0, min(psi1, psi2))

    Returns:
        Calibrated model
    """
    psi1, psi2, target = float(psi1), float(psi2), float(lambdaU)
    for name, psi in (("psi1", psi1), ("psi2", psi2)):
        if not 0.0 < psi <= 1.0:
            raise ParameterDomainError(f"aneglog {name} must lie in (0, 1], got {psi}")
    upper = min(psi1, psi2)
    if not 0.0 < target < upper:
        raise ParameterDomainError(
            f"lambdaU={target} is not attainable for psi1={psi1}, psi2={psi2}; "
            f"it must lie in (0, {upper})")

    def excess(theta: float) -> float:
        return _aneglog_upper_tail(theta, psi1, psi2) - target

    hi = 1.0
    while excess(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise ParameterDomainError(f"lambdaU={target} is numerically unattainable")

    theta = optimize.bisect(excess, 0.0, hi, xtol=LAMBDA_BISECTION_XTOL, maxiter=500)
    return AsymNegLogistic(theta, psi1, psi2)


@dataclass(frozen=True)
class DependenceSpec:
    """
    Target dependence level used to pick a family parameter.

    Exactly one of ``kendall_tau`` (in (-1, 1)) and ``lambda_U`` (in (0, 1))
    is set.
    """

    kendall_tau: Optional[float] = None
    lambda_U: Optional[float] = None

    def __post_init__(self):
        if (self.kendall_tau is None) == (self.lambda_U is None):
            raise ParameterDomainError("exactly one of kendall_tau and lambda_U must be set")
        if self.kendall_tau is not None:
            tau = float(self.kendall_tau)
            if not -1.0 < tau < 1.0:
                raise ParameterDomainError(f"kendall_tau must lie in (-1, 1), got {tau}")
            object.__setattr__(self, "kendall_tau", tau)
        else:
            lam = float(self.lambda_U)
            if not 0.0 < lam < 1.0:
                raise ParameterDomainError(f"lambda_U must lie in (0, 1), got {lam}")
            object.__setattr__(self, "lambda_U", lam)

    @property
    def label(self) -> str:
        if self.kendall_tau is not None:
            return f"tau={self.kendall_tau:.4g}"
        return f"lambdaU={self.lambda_U:.4g}"

    def calibrate(self, family: str, df: int = 1, psi1: float = 1.0, psi2: float = 1.0,
                  allow_negative: bool = False) -> CopulaModel:
        """
        Build the model of ``family`` that realizes this dependence level.

        Kendall's tau applies to clayton, gumbel and t; lambda_U to aneglog.
        """
        if self.kendall_tau is not None:
            return param_from_tau(family, self.kendall_tau, df=df, allow_negative=allow_negative)
        if family.lower() != "aneglog":
            raise ParameterDomainError(f"no lambda_U calibration for family '{family}'")
        return param_from_lambdaU(psi1, psi2, self.lambda_U)
