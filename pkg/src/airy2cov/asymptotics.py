"""Large-t expansion of the two-point function and covariance of the Airy2 process.

    P(A(0) <= s1, A(t) <= s2) ~ sum_n c_n(s1, s2) / t^n,
    cov(t) ~ sum_n C_n / t^n,    C_n = double integral of c_n.

Odd orders vanish.  c_0 = F2(s1) F2(s2); c_2 .. c_8 are products of f2
derivatives with polynomial weights.  C_4 .. C_10 are polynomials in the
moments of F2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument
from .numerics import gauss_legendre
from .tw_core import MomentSet, TWProfile

SUPPORTED_ORDERS = (2, 4, 6, 8, 10)
CN_ORDERS = (0, 2, 4, 6, 8)
INTEGRATION_BOX = (-10.0, 6.0)
INTEGRATION_ORDER = 200


@dataclass(frozen=True)
class CovCoefficients:
    """C_1..C_10; ``C[n]`` is C_n and ``C[0]`` is unused (zero)."""

    C: tuple[float, ...]
    moments: MomentSet

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= 10:
            raise InvalidArgument(f"coefficient index must lie in 1..10, got {n}")
        return self.C[n]

    def as_dict(self) -> dict[str, float]:
        return {f"C{n}": self.C[n] for n in range(1, 11)}


def cov_coefficients(m: MomentSet) -> CovCoefficients:
    if len(m.mu) < 5:
        raise InvalidArgument("moments through mu_4 are required")
    mu1, mu2, mu3, mu4 = m.mu[1:5]
    c = [0.0] * 11
    c[2] = 1.0
    c[4] = 2 * mu1
    c[6] = 2 * mu2 + 10.0 / 3.0 * mu1**2
    c[8] = 2 * mu3 + 14 * mu2 * mu1 + 6.5
    c[10] = 2 * mu4 + 24 * mu3 * mu1 + 126.0 / 5.0 * mu2**2 + 116 * mu1
    return CovCoefficients(tuple(c), m)


def cov_asymptotic(c: CovCoefficients, t: float, N: int) -> float:
    """Partial sum of C_n / t^n through order N."""
    if N not in SUPPORTED_ORDERS:
        raise InvalidArgument(f"order must be one of {SUPPORTED_ORDERS}, got {N}")
    if not t > 0:
        raise InvalidArgument(f"t must be positive, got {t}")
    return float(sum(c.C[n] / t**n for n in range(2, N + 1, 2)))


def _derivs(profile: TWProfile, s, k_max: int):
    return [np.asarray(v) for v in profile.f2_many(k_max, s)]


def _cn_from_derivs(n: int, s1, s2, a, b, F1=None, F2=None):
    """c_n given f2 derivatives a[k] at s1 and b[k] at s2."""
    if n == 0:
        return F1 * F2
    if n == 2:
        return a[0] * b[0]
    if n == 4:
        return (s1 + s2) * a[0] * b[0] + 0.5 * a[1] * b[1]
    if n == 6:
        return (
            (3 * s1 + s2) * (3 * s2 + s1) / 3 * a[0] * b[0]
            + 3 * (a[1] * b[0] + a[0] * b[1])
            + (s1 + s2) * a[1] * b[1]
            + a[2] * b[2] / 6
        )
    if n == 8:
        return (
            (149.0 / 6 + s1**3 + 7 * s1 * s2**2 + 7 * s1**2 * s2 + s2**3) * a[0] * b[0]
            + (15 * s1 + 34.0 / 3 * s2) * a[0] * b[1]
            + (15 * s2 + 34.0 / 3 * s1) * b[0] * a[1]
            + (1.5 * s1**2 + 13.0 / 3 * s1 * s2 + 1.5 * s2**2) * a[1] * b[1]
            + 3 * (a[2] * b[1] + b[2] * a[1])
            + 0.5 * (s1 + s2) * a[2] * b[2]
            + a[3] * b[3] / 24
        )
    raise InvalidArgument(f"c_n is available for n in {CN_ORDERS}, got {n}")


def c_n(profile: TWProfile, n: int, s1, s2):
    """Coefficient c_n(s1, s2); odd n give zero, broadcasting over arrays."""
    if n < 0 or n > 8:
        raise InvalidArgument(f"c_n is available for 0 <= n <= 8, got {n}")
    s1a = np.asarray(s1, dtype=np.float64)
    s2a = np.asarray(s2, dtype=np.float64)
    if n % 2:
        out = np.zeros(np.broadcast(s1a, s2a).shape)
    elif n == 0:
        out = np.asarray(profile.cdf(s1a) * profile.cdf(s2a))
    else:
        a = _derivs(profile, s1a, 3)
        b = _derivs(profile, s2a, 3)
        out = _cn_from_derivs(n, s1a, s2a, a, b)
    return float(out) if np.ndim(out) == 0 else out


def integrate_cn(
    profile: TWProfile, n: int, order: int = INTEGRATION_ORDER, box: tuple[float, float] = INTEGRATION_BOX
) -> float:
    """Tensor Gauss-Legendre integral of c_n over box x box."""
    if n not in (2, 4, 6, 8):
        raise InvalidArgument(f"n must be one of 2, 4, 6, 8, got {n}")
    rule = gauss_legendre(order, *box)
    s1, s2 = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    vals = c_n(profile, n, s1, s2)
    return float(rule.weights @ vals @ rule.weights)


@dataclass
class TwoPointApprox:
    """Truncated large-t expansion of the joint distribution at order N <= 8.

    f2 derivatives at previously seen thresholds are cached.
    """

    profile: TWProfile
    order: int = 8
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.order not in (0, 2, 4, 6, 8):
            raise InvalidArgument(f"order must be an even integer in [0, 8], got {self.order}")

    def _at(self, s: float):
        s = float(s)
        hit = self._cache.get(s)
        if hit is None:
            hit = (float(self.profile.cdf(s)), [float(v) for v in _derivs(self.profile, s, 3)])
            self._cache[s] = hit
        return hit

    def terms(self, s1: float, s2: float) -> list[float]:
        """[c_0, c_2, ..., c_order] at (s1, s2)."""
        F1, a = self._at(s1)
        F2, b = self._at(s2)
        return [
            float(_cn_from_derivs(n, float(s1), float(s2), a, b, F1, F2))
            for n in range(0, self.order + 1, 2)
        ]

    def raw(self, t: float, s1: float, s2: float) -> float:
        if not t > 0:
            raise InvalidArgument(f"t must be positive, got {t}")
        return float(sum(c / t**n for n, c in zip(range(0, self.order + 1, 2), self.terms(s1, s2))))

    def __call__(self, t: float, s1: float, s2: float) -> float:
        """Partial sum clamped to [0, 1] for reporting."""
        return min(1.0, max(0.0, self.raw(t, s1, s2)))


def joint_asymptotic(profile: TWProfile, t: float, s1: float, s2: float, N: int = 8) -> float:
    """Raw partial sum F2(s1) F2(s2) + sum_{n<=N} c_n / t^n (not clamped)."""
    return TwoPointApprox(profile, N).raw(t, s1, s2)
