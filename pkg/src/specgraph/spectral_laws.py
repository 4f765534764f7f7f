"""Closed-form limit laws, ESD queries, and interval-length thresholds.

The semicircle law has density sqrt(4-x^2)/(2 pi) on [-2, 2]; the degree-d
Kesten-McKay law has density d*sqrt(4(d-1)-x^2) / (2 pi (d^2-x^2)) on
[-2 sqrt(d-1), 2 sqrt(d-1)]. Masses use closed antiderivatives so the
Kolmogorov-Smirnov comparisons need no quadrature.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import SingularInput

__all__ = [
    "Esd",
    "Interval",
    "Semicircle",
    "KestenMcKay",
    "LimitLaw",
    "ThresholdParams",
    "semicircle_density",
    "semicircle_mass",
    "kesten_mckay_density",
    "kesten_mckay_mass",
    "km_normalized_density",
    "semicircle_moment",
    "empirical_moment",
    "esd_cdf",
    "count_in_interval",
    "ks_distance",
    "stieltjes_semicircle",
    "empirical_stieltjes",
    "min_interval_length_gnp",
    "min_interval_length_regular",
    "delocalization_bound",
]


@dataclass(frozen=True)
class Esd:
    """Sorted eigenvalue multiset; ``values`` is an ascending float64 array."""

    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=np.float64), kind="stable")
        if v.ndim != 1 or v.size == 0:
            raise ValueError("Esd needs a non-empty 1-d collection of eigenvalues")
        if not np.isfinite(v).all():
            raise ValueError("eigenvalues must be finite")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a <= self.b:
            raise ValueError(f"interval needs a <= b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class Semicircle:
    """Semicircle law on [-2, 2]."""

    def density(self, x: float) -> float:
        return semicircle_density(x)

    def mass(self, interval: Interval) -> float:
        return semicircle_mass(interval)

    def cdf(self, x) -> np.ndarray:
        return _semicircle_cdf(np.asarray(x, dtype=np.float64))

    def support(self) -> Interval:
        return Interval(-2.0, 2.0)


@dataclass(frozen=True)
class KestenMcKay:
    """Kesten-McKay law for degree d >= 2, support [-2 sqrt(d-1), 2 sqrt(d-1)]."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"Kesten-McKay law needs d >= 2, got {self.d}")

    def density(self, x: float) -> float:
        return kesten_mckay_density(x, self.d)

    def mass(self, interval: Interval) -> float:
        return kesten_mckay_mass(interval, self.d)

    def cdf(self, x) -> np.ndarray:
        return _km_cdf(np.asarray(x, dtype=np.float64), self.d)

    def support(self) -> Interval:
        half = 2.0 * math.sqrt(self.d - 1)
        return Interval(-half, half)


LimitLaw = Union[Semicircle, KestenMcKay]


@dataclass(frozen=True)
class ThresholdParams:
    """Inputs to the minimum-interval-length formulas.

    ``np_or_d`` is np for G(n,p) and d for the regular model. K (entry
    bound, 1/sqrt(p) for G(n,p)) and M4 (fourth-moment bound) are carried
    for documentation; the corollary formulas below do not consume them.
    """

    delta: float
    np_or_d: float
    K: Optional[float] = None
    M4: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")


def semicircle_density(x: float) -> float:
    """sqrt(4 - x^2) / (2 pi) on [-2, 2], zero outside."""
    if abs(x) >= 2.0:
        return 0.0
    return math.sqrt(4.0 - x * x) / (2.0 * math.pi)


def _semicircle_cdf(x: np.ndarray) -> np.ndarray:
    """Closed antiderivative (x sqrt(4-x^2)/2 + 2 asin(x/2)) / (2 pi) + 1/2."""
    xc = np.clip(x, -2.0, 2.0)
    return (xc * np.sqrt(4.0 - xc * xc) / 2.0 + 2.0 * np.arcsin(xc / 2.0)) / (
        2.0 * math.pi
    ) + 0.5


def semicircle_mass(interval: Interval) -> float:
    """Semicircle mass of the interval (clipped to the support)."""
    lo, hi = _semicircle_cdf(np.array([interval.a, interval.b]))
    return float(hi - lo)


def kesten_mckay_density(x: float, d: int) -> float:
    """Kesten-McKay density at x for degree d >= 2."""
    if d < 2:
        raise ValueError(f"Kesten-McKay density needs d >= 2, got {d}")
    b2 = 4.0 * (d - 1.0)
    if x * x >= b2:
        return 0.0
    return d * math.sqrt(b2 - x * x) / (2.0 * math.pi * (d * d - x * x))


def _km_cdf(x: np.ndarray, d: int) -> np.ndarray:
    """Closed-form Kesten-McKay CDF.

    For d > 2, integrating via x = b sin(theta), b = 2 sqrt(d-1), gives
      F(x) = 1/2 + [d*theta - (d-2)*(T+ + T-)] / (2 pi),
      T+- = atan((d tan(theta/2) +- b) / (d - 2));
    d = 2 is the arcsine law F(x) = 1/2 + asin(x/2)/pi.
    """
    b = 2.0 * math.sqrt(d - 1.0)
    xc = np.clip(x, -b, b)
    if d == 2:
        return 0.5 + np.arcsin(xc / 2.0) / math.pi
    theta = np.arcsin(xc / b)
    t = np.tan(theta / 2.0)
    tplus = np.arctan((d * t + b) / (d - 2.0))
    tminus = np.arctan((d * t - b) / (d - 2.0))
    return 0.5 + (d * theta - (d - 2.0) * (tplus + tminus)) / (2.0 * math.pi)


def kesten_mckay_mass(interval: Interval, d: int) -> float:
    """Kesten-McKay mass of the interval (clipped to the support)."""
    if d < 2:
        raise ValueError(f"Kesten-McKay mass needs d >= 2, got {d}")
    lo, hi = _km_cdf(np.array([interval.a, interval.b]), d)
    return float(hi - lo)


def km_normalized_density(y: float, d: int) -> float:
    """Kesten-McKay density after rescaling x by sqrt(d-1): support [-2, 2]."""
    s = math.sqrt(d - 1.0)
    return s * kesten_mckay_density(s * y, d)


def semicircle_moment(k: int) -> float:
    """k-th semicircle moment: 0 for odd k, Catalan number C(2m,m)/(m+1) for k=2m."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    if k % 2 == 1:
        return 0.0
    m = k // 2
    return math.comb(2 * m, m) / (m + 1)


def empirical_moment(esd: Esd, k: int) -> float:
    """(1/n) sum of lambda_i^k."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    return float(np.mean(esd.values**k))


def esd_cdf(esd: Esd, x: float) -> float:
    """Fraction of eigenvalues <= x (right-continuous step function)."""
    return np.searchsorted(esd.values, x, side="right") / esd.n


def count_in_interval(esd: Esd, interval: Interval) -> int:
    """Number of eigenvalues in the closed interval [a, b]."""
    lo = np.searchsorted(esd.values, interval.a, side="left")
    hi = np.searchsorted(esd.values, interval.b, side="right")
    return int(hi - lo)


def ks_distance(esd: Esd, law: LimitLaw) -> float:
    """sup_x |F_n(x) - F(x)| against the law's closed-form CDF.

    Because F is continuous, the supremum is attained at eigenvalue points
    from one side or the other, so it equals
    max_i max((i+1)/n - F(lambda_i), F(lambda_i) - i/n).
    """
    values = esd.values
    n = esd.n
    f = law.cdf(values)
    i = np.arange(n)
    upper = (i + 1) / n - f
    lower = f - i / n
    return float(max(upper.max(), lower.max(), 0.0))


def stieltjes_semicircle(z: complex) -> complex:
    """Stieltjes transform of the semicircle law at z with Im z > 0.

    The root of s^2 + z s + 1 = 0 with positive imaginary part; it is the
    unique upper-half-plane solution of s + 1/(s + z) = 0.
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"z must lie in the upper half-plane, got {z}")
    root = cmath.sqrt(z * z - 4.0)
    s1 = (-z + root) / 2.0
    s2 = (-z - root) / 2.0
    return s1 if s1.imag > 0.0 else s2


def empirical_stieltjes(esd: Esd, z: complex) -> complex:
    """(1/n) sum 1/(lambda_i - z); z must avoid the spectrum."""
    z = complex(z)
    if z.imag == 0.0 and np.any(esd.values == z.real):
        raise SingularInput(f"z={z} equals an eigenvalue")
    return complex(np.mean(1.0 / (esd.values - z)))


def min_interval_length_gnp(params: ThresholdParams) -> float:
    """(log(np) / (delta^4 (np)^(1/2)))^(1/5) for the G(n,p) concentration bound."""
    np_ = params.np_or_d
    if not np_ > 1.0:
        raise ValueError(f"np must exceed 1, got {np_}")
    return (math.log(np_) / (params.delta**4 * math.sqrt(np_))) ** 0.2


def min_interval_length_regular(params: ThresholdParams) -> float:
    """delta^(-4/5) d^(-1/10) log^(1/5) d for the G_{n,d} concentration bound."""
    d = params.np_or_d
    if not d >= 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return params.delta ** (-0.8) * d ** (-0.1) * math.log(d) ** 0.2


def delocalization_bound(n: int, p: float, kappa: float) -> float:
    """Bulk eigenvector infinity-norm scale sqrt(log^2.2(g) log(n) / (np)).

    g = np / log(n) must exceed 1 (i.e. np > log n). The constant hidden in
    the O_kappa of the underlying bound is unknown and reported as 1; kappa
    only selects the bulk window and does not enter the value.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    logn = math.log(n)
    if not n * p > logn:
        raise ValueError(f"need np > log n (np={n * p:.4g}, log n={logn:.4g})")
    g = n * p / logn
    return math.sqrt(math.log(g) ** 2.2 * logn / (n * p))
