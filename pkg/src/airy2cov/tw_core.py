"""The GUE largest-eigenvalue law F2 and the u_{j,k} table, both built from Painleve II.

Everything lives on one fine Chebyshev grid over the solution domain.
q and q' are resampled there from the collocation solution, and every
u_{j,k} is a tail integral

    u_{j,k}(s) = int_s^{s_max} q_j(x) q_k(x) dx,

evaluated spectrally.  Each q_n is algebraic in lower-order quantities:

    q_0 = q,  q_1 = q' + u_00 q,
    q_n = (n-2) q_{n-3} + s q_{n-2} - u_{n-2,1} q + u_{n-2,0} q_1   (n >= 2),

so the system is triangular and can be filled in order of n.

F2 = exp(-int_s u_00) and f2^(k) = P_k(s, q, q', u_00) F2, where the P_k are
polynomials with exact rational coefficients generated from

    P_0 = u_00,
    P_{k+1} = d_s P + q' d_q P + (s q + 2 q^3) d_{q'} P - q^2 d_u P + u_00 P.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.optimize

from .errors import InvalidArgument
from .identities import DEFAULT_SUITE, get_identity
from .numerics import (
    GridFunction,
    chebyshev_points,
    chebyshev_resample,
    chebyshev_tail_integral,
    gauss_legendre,
    interp_eval,
)
from .painleve2 import HMSolution, solve_hastings_mcleod

FINE_NODES = 512
MAX_ORDER = 8
IDENTITY_WINDOW = (-6.0, 4.0)

Monomial = tuple[int, int, int, int]  # powers of (s, q, q', u_00)


@dataclass(frozen=True, eq=False)
class UTable:
    """u_{j,k} for j + k <= 8 (stored with j >= k) and q_n for n <= 8."""

    grid: np.ndarray
    entries: dict[tuple[int, int], GridFunction]
    q_n: dict[int, GridFunction]
    q_prime: GridFunction

    def get(self, j: int, k: int) -> GridFunction:
        key = (j, k) if j >= k else (k, j)
        if key not in self.entries:
            raise InvalidArgument(f"u_{{{j},{k}}} is outside the table (j + k <= {MAX_ORDER})")
        return self.entries[key]

    def values(self, j: int, k: int) -> np.ndarray:
        return self.get(j, k).values

    def __call__(self, j: int, k: int, s):
        return interp_eval(self.get(j, k), s)

    def closed_form(self, j: int, k: int) -> np.ndarray:
        """Polynomial expressions for the lowest entries, on the grid."""
        s = self.grid
        q = self.q_n[0].values
        qp = self.q_prime.values
        u00 = self.values(0, 0)
        key = (max(j, k), min(j, k))
        if key == (0, 0):
            return qp**2 - s * q**2 - q**4
        if key == (1, 0):
            return 0.5 * u00**2 - 0.5 * q**2
        if key == (1, 1):
            return u00**3 / 3 - (q**2 + s / 3) * u00 - 2.0 / 3.0 * q * qp
        if key == (2, 0):
            return 0.5 * self.values(1, 1) + 0.5 * s * u00
        raise InvalidArgument(f"no closed form for u_{{{j},{k}}}")


@dataclass(frozen=True, eq=False)
class TWProfile:
    """F2 and f2^(k) on the fine grid, plus pointwise evaluation.

    Off the grid, values are rebuilt from the interpolated smooth pieces
    (log F2, q, q', u_00) rather than interpolated directly, so tails keep
    their relative accuracy and F2 stays positive.
    """

    grid: np.ndarray
    F2: GridFunction
    f2_derivs: tuple[GridFunction, ...]
    solution: HMSolution
    utable: UTable
    log_F2: GridFunction

    @property
    def domain(self) -> tuple[float, float]:
        return self.F2.domain

    def _check_order(self, k: int):
        if not 0 <= k < len(self.f2_derivs):
            raise InvalidArgument(f"derivative order {k} not available (max {len(self.f2_derivs) - 1})")

    def f2_many(self, k_max: int, s) -> list:
        """[f2(s), f2'(s), ..., f2^(k_max)(s)] sharing one set of interpolations."""
        self._check_order(k_max)
        F = np.exp(np.asarray(interp_eval(self.log_F2, s)))
        q = np.asarray(interp_eval(self.utable.q_n[0], s))
        qp = np.asarray(interp_eval(self.utable.q_prime, s))
        u = np.asarray(interp_eval(self.utable.get(0, 0), s))
        s = np.asarray(s, dtype=np.float64)
        out = []
        for poly in f2_polynomials(MAX_ORDER)[: k_max + 1]:
            v = _eval_monomials(poly, s, q, qp, u) * F
            out.append(float(v) if v.ndim == 0 else v)
        return out

    def f2(self, k: int, s):
        """f2^(k)(s), k = 0 being the density itself."""
        self._check_order(k)
        return self.f2_many(k, s)[k]

    def cdf(self, s):
        v = np.exp(np.asarray(interp_eval(self.log_F2, s)))
        return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class MomentSet:
    mu: tuple[float, ...]

    @property
    def variance(self) -> float:
        return self.mu[2] - self.mu[1] ** 2


# --------------------------------------------------------------------------
# construction


def _fine_grid(sol: HMSolution, m: int):
    a, b = sol.domain
    s = chebyshev_points(m, a, b)
    q = chebyshev_resample(sol.q.values, m)
    qp = chebyshev_resample(sol.q_prime.values, m)
    return s, q, qp, a, b


_cache_lock = threading.Lock()
_utables: "weakref.WeakKeyDictionary[HMSolution, dict]" = weakref.WeakKeyDictionary()
_profiles: "weakref.WeakKeyDictionary[HMSolution, dict]" = weakref.WeakKeyDictionary()


def _cached(store, sol, m, build):
    with _cache_lock:
        hit = store.get(sol, {}).get(m)
    if hit is not None:
        return hit
    value = build()
    with _cache_lock:
        store.setdefault(sol, {})[m] = value
    return value


def build_u_table(sol: HMSolution, m: int = FINE_NODES) -> UTable:
    return _cached(_utables, sol, m, lambda: _build_u_table(sol, m))


def _build_u_table(sol: HMSolution, m: int) -> UTable:
    s, q, qp, a, b = _fine_grid(sol, m)

    def tail(f):
        return chebyshev_tail_integral(f, a, b)

    u: dict[tuple[int, int], np.ndarray] = {}
    qn: dict[int, np.ndarray] = {0: q}
    u[0, 0] = tail(q * q)
    qn[1] = qp + u[0, 0] * q
    for n in range(1, MAX_ORDER + 1):
        if n >= 2:
            prev = qn[n - 3] if n >= 3 else 0.0
            u_n1 = u[n - 2, 1] if n >= 3 else u[1, 0]
            qn[n] = (n - 2) * prev + s * qn[n - 2] - u_n1 * q + u[n - 2, 0] * qn[1]
        for j in range(0, min(n, MAX_ORDER - n) + 1):
            u[n, j] = tail(qn[n] * qn[j])
    return UTable(
        grid=s,
        entries={key: GridFunction(s, v) for key, v in u.items()},
        q_n={n: GridFunction(s, v) for n, v in qn.items()},
        q_prime=GridFunction(s, qp),
    )


def _log_F2(sol: HMSolution, m: int) -> GridFunction:
    ut = build_u_table(sol, m)
    a, b = sol.domain
    return GridFunction(ut.grid, -chebyshev_tail_integral(ut.values(0, 0), a, b))


def build_F2(sol: HMSolution, m: int = FINE_NODES) -> GridFunction:
    """F2(s) = exp(-int_s u_00), u_00(s) = int_s q^2."""
    log_f = _log_F2(sol, m)
    return GridFunction(log_f.grid, np.exp(log_f.values))


@lru_cache(maxsize=1)
def f2_polynomials(k_max: int = MAX_ORDER) -> tuple[dict[Monomial, Fraction], ...]:
    """Exact P_0..P_{k_max} with f2^(k) = P_k(s, q, q', u_00) F2."""

    def step(poly):
        out: dict[Monomial, Fraction] = {}

        def add(key, v):
            out[key] = out.get(key, Fraction(0)) + v

        for (a, b, c, e), v in poly.items():
            if a:
                add((a - 1, b, c, e), v * a)
            if b:
                add((a, b - 1, c + 1, e), v * b)
            if c:
                add((a + 1, b + 1, c - 1, e), v * c)
                add((a, b + 3, c - 1, e), 2 * v * c)
            if e:
                add((a, b + 2, c, e - 1), -v * e)
            add((a, b, c, e + 1), v)
        return {k: v for k, v in out.items() if v != 0}

    polys = [{(0, 0, 0, 1): Fraction(1)}]
    for _ in range(k_max):
        polys.append(step(polys[-1]))
    return tuple(polys)


def _eval_monomials(poly, s, q, qp, u) -> np.ndarray:
    out = np.zeros_like(s)
    for (a, b, c, e), v in sorted(poly.items()):
        out += float(v) * s**a * q**b * qp**c * u**e
    return out


def f2_derivative_chain(
    sol: HMSolution, F2: GridFunction, u00: GridFunction, k_max: int = MAX_ORDER
) -> list[GridFunction]:
    """f2^(k) for k = 0..k_max on the grid of ``F2``."""
    if not 0 <= k_max <= MAX_ORDER:
        raise InvalidArgument(f"k_max must lie in [0, {MAX_ORDER}]")
    s = F2.grid
    m = len(s) - 1
    q = chebyshev_resample(sol.q.values, m)
    qp = chebyshev_resample(sol.q_prime.values, m)
    return [
        GridFunction(s, _eval_monomials(p, s, q, qp, u00.values) * F2.values)
        for p in f2_polynomials(MAX_ORDER)[: k_max + 1]
    ]


def build_profile(sol: HMSolution | None = None, m: int = FINE_NODES) -> TWProfile:
    if sol is None:
        sol = solve_hastings_mcleod()
    return _cached(_profiles, sol, m, lambda: _build_profile(sol, m))


def _build_profile(sol: HMSolution, m: int) -> TWProfile:
    ut = build_u_table(sol, m)
    F2 = build_F2(sol, m)
    derivs = f2_derivative_chain(sol, F2, ut.get(0, 0))
    return TWProfile(
        grid=ut.grid, F2=F2, f2_derivs=tuple(derivs), solution=sol, utable=ut, log_F2=_log_F2(sol, m)
    )


@lru_cache(maxsize=1)
def default_profile() -> TWProfile:
    return build_profile(solve_hastings_mcleod())


# --------------------------------------------------------------------------
# identities and moments


def _poly_values(poly, s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    for p, c in poly.items():
        out += float(c) * s**p
    return out


def identity_sides(profile: TWProfile, utable: UTable, name, window=IDENTITY_WINDOW):
    """(s, lhs, rhs) sampled at the grid points inside ``window``."""
    ident = get_identity(name)
    mask = (profile.grid >= window[0]) & (profile.grid <= window[1])
    s = profile.grid[mask]
    lhs = ident.lhs(lambda j, k: utable.values(j, k)[mask]) * profile.F2.values[mask]
    rhs = np.zeros_like(s)
    for order, poly in ident.rhs.items():
        rhs += _poly_values(poly, s) * profile.f2_derivs[order].values[mask]
    return s, lhs, rhs


def verify_identity(profile: TWProfile, utable: UTable, name, window=IDENTITY_WINDOW) -> float:
    """Largest |lhs - rhs| of the named identity over ``window``."""
    _, lhs, rhs = identity_sides(profile, utable, name, window)
    return float(np.max(np.abs(lhs - rhs)))


def verify_all(profile: TWProfile, names=DEFAULT_SUITE) -> dict[str, float]:
    return {str(n): verify_identity(profile, profile.utable, n) for n in names}


def moments(profile: TWProfile, n_max: int = 4, order: int = 256) -> MomentSet:
    """mu_n = int s^n f2(s) ds by Gauss-Legendre over the profile domain."""
    if not 0 <= n_max <= 4:
        raise InvalidArgument(f"n_max must lie in [0, 4], got {n_max}")
    a, b = profile.domain
    rule = gauss_legendre(order, a, b)
    f = profile.f2(0, rule.nodes)
    return MomentSet(tuple(float(np.dot(rule.weights, rule.nodes**n * f)) for n in range(n_max + 1)))


def quantile(profile: TWProfile, p: float) -> float:
    if not 0 < p < 1:
        raise InvalidArgument(f"probability must lie in (0, 1), got {p}")
    a, b = profile.domain
    return float(scipy.optimize.brentq(lambda s: profile.cdf(s) - p, a, b, xtol=1e-14))
