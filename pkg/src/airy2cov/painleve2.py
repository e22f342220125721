"""Hastings-McLeod solution of Painleve II, q'' = s q + 2 q^3, q ~ Ai at +infinity.

Chebyshev collocation on [s_min, s_max] with a damped Newton iteration.
Boundary conditions:

* right: Dirichlet q(s_max) = Ai(s_max).  The nonlinear correction there is
  of relative size Ai(s_max)^2, far below double precision for s_max >= 6.
* left: Robin closure q'/q = (log g)' with
  g(s) = sqrt(-s/2) (1 + 1/(8 s^3) - 73/(128 s^6) + 10657/(1024 s^9)),
  the large negative-s expansion of the same solution.  Using several terms
  makes the solution on [-8, s_max] insensitive to where the left edge sits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .airy import airy_ai
from .errors import InvalidArgument, NoConvergence
from .numerics import GridFunction, LUSolver, chebyshev_diff_matrix, chebyshev_points, interp_eval

DEFAULT_DOMAIN = (-10.0, 10.0)
DEFAULT_NODES = 160
MAX_NEWTON = 60


@dataclass(frozen=True, eq=False)
class HMSolution:
    """q and q' on a Chebyshev grid.

    ``tolerance`` is the largest collocation residual |q'' - s q - 2 q^3|
    over the interior grid points, with q'' taken from the discretization.
    """

    domain: tuple[float, float]
    q: GridFunction
    q_prime: GridFunction
    tolerance: float
    iterations: int

    @property
    def grid(self) -> np.ndarray:
        return self.q.grid


def left_asymptotic(s):
    """Large negative-s expansion of q and its logarithmic derivative."""
    s = np.asarray(s, dtype=np.float64)
    series = 1 + 1 / (8 * s**3) - 73 / (128 * s**6) + 10657 / (1024 * s**9)
    dseries = -3 / (8 * s**4) + 438 / (128 * s**7) - 95913 / (1024 * s**10)
    return np.sqrt(-s / 2) * series, 1 / (2 * s) + dseries / series


def _residual(d2: np.ndarray, s: np.ndarray, q: np.ndarray) -> np.ndarray:
    return d2 @ q - s * q - 2 * q**3


def solve_hastings_mcleod(
    s_min: float = DEFAULT_DOMAIN[0],
    s_max: float = DEFAULT_DOMAIN[1],
    tol: float = 1e-10,
    n: int = DEFAULT_NODES,
) -> HMSolution:
    """Solve on ``n + 1`` Chebyshev points of [s_min, s_max].

    Raises NoConvergence if the final collocation residual exceeds ``tol``.
    """
    if not s_min < -6 or not s_max > 6:
        raise InvalidArgument(f"domain must satisfy s_min < -6 < 6 < s_max, got [{s_min}, {s_max}]")
    if not 1e-13 <= tol <= 1e-6:
        raise InvalidArgument(f"tol must lie in [1e-13, 1e-6], got {tol}")
    if int(n) != n or n < 16:
        raise InvalidArgument(f"need at least 16 collocation intervals, got {n}")
    return _solve(float(s_min), float(s_max), float(tol), int(n))


@lru_cache(maxsize=8)
def _solve(s_min: float, s_max: float, tol: float, n: int) -> HMSolution:
    s = chebyshev_points(n, s_min, s_max)
    d1 = chebyshev_diff_matrix(n, s_min, s_max)
    d2 = d1 @ d1
    ai = np.asarray(airy_ai(s))
    q = np.maximum(ai, np.sqrt(np.maximum(-s, 0.0) / 2))
    _, robin = left_asymptotic(s_min)
    right_value = float(airy_ai(s_max))

    def system(q):
        f = _residual(d2, s, q)
        f[0] = d1[0] @ q - robin * q[0]
        f[-1] = q[-1] - right_value
        return f

    f = system(q)
    norm = np.max(np.abs(f))
    for it in range(1, MAX_NEWTON + 1):
        jac = d2 - np.diag(s + 6 * q**2)
        jac[0] = d1[0]
        jac[0, 0] -= robin
        jac[-1] = 0.0
        jac[-1, -1] = 1.0
        step = LUSolver(jac).solve(-f)
        lam = 1.0
        while True:
            trial = q + lam * step
            f_trial = system(trial)
            norm_trial = np.max(np.abs(f_trial))
            if norm_trial < norm or lam < 1e-3:
                break
            lam *= 0.5
        q, f = trial, f_trial
        small = np.max(np.abs(lam * step)) <= 1e-14 * max(1.0, np.max(np.abs(q)))
        # near the fixed point the residual stops decreasing: rounding floor
        stalled = norm_trial >= norm and lam == 1.0
        norm = min(norm, norm_trial)
        if small or stalled:
            break
    achieved = float(np.max(np.abs(_residual(d2, s, q)[1:-1])))
    if not math.isfinite(achieved) or achieved > tol or np.any(q <= 0):
        raise NoConvergence(
            f"collocation residual {achieved:.3e} after {it} Newton steps exceeds tol {tol:.1e}"
        )
    return HMSolution(
        domain=(s_min, s_max),
        q=GridFunction(s, q),
        q_prime=GridFunction(s, d1 @ q),
        tolerance=achieved,
        iterations=it,
    )


def q_eval(sol: HMSolution, s):
    return interp_eval(sol.q, s)


def qp_eval(sol: HMSolution, s):
    return interp_eval(sol.q_prime, s)
