"""Precomputed data shared by the compiled and pure-Python Airy kernels.

Ai is represented on [LEFT_EDGE, RIGHT_EDGE) by Taylor polynomials about
equally spaced centres.  Values at the centres come from stepping the Airy
ODE in the stable direction: leftwards from the exponentially small
asymptotic regime at RIGHT_CENTER (Ai is dominant going left), and leftwards
from the exact values at the origin on the oscillatory side.  Outside the
table the classical asymptotic expansions are used; at the table edges their
smallest term is below 1e-17 relative.
"""

from __future__ import annotations

import math

import numpy as np

STEP = 0.5
FIRST_CENTER = -10.0
RIGHT_CENTER = 9.5
N_TAYLOR = 32
N_ASYMPTOTIC = 40

LEFT_EDGE = FIRST_CENTER - STEP / 2
RIGHT_EDGE = RIGHT_CENTER + STEP / 2

AI_ZERO = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP_ZERO = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)


def _asymptotic_coefficients(n: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.empty(n)
    v = np.empty(n)
    u[0] = v[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        v[k] = -(6 * k + 1) / (6 * k - 1) * u[k]
    return u, v


ASYM_U, ASYM_V = _asymptotic_coefficients(N_ASYMPTOTIC)


def taylor_coefficients(center: float, ai: float, aip: float, n: int = N_TAYLOR) -> np.ndarray:
    """Taylor coefficients of the Airy solution with the given data at ``center``."""
    a = np.zeros(n)
    a[0] = ai
    a[1] = aip
    # (k+2)(k+1) a_{k+2} = c a_k + a_{k-1}, from y'' = x y
    for k in range(n - 2):
        prev = a[k - 1] if k >= 1 else 0.0
        a[k + 2] = (center * a[k] + prev) / ((k + 2) * (k + 1))
    return a


def _taylor_value(a: np.ndarray, h: float) -> tuple[float, float]:
    v = 0.0
    d = 0.0
    for k in range(len(a) - 1, 0, -1):
        v = v * h + a[k]
        d = d * h + k * a[k]
    return v * h + a[0], d


def asymptotic_right(x: float) -> tuple[float, float]:
    zeta = 2.0 / 3.0 * x**1.5
    s = sp = 0.0
    term = 1.0
    for k in range(N_ASYMPTOTIC):
        s += ASYM_U[k] * term
        sp += ASYM_V[k] * term
        term *= -1.0 / zeta
        if abs(ASYM_U[k] * term) < 1e-17 * abs(s):
            break
    e = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return e * s / x**0.25, -e * sp * x**0.25


def _build_table() -> np.ndarray:
    n_centers = int(round((RIGHT_CENTER - FIRST_CENTER) / STEP)) + 1
    centers = FIRST_CENTER + STEP * np.arange(n_centers)
    zero = int(round(-FIRST_CENTER / STEP))
    values = np.zeros((n_centers, 2))

    values[-1] = asymptotic_right(RIGHT_CENTER)
    for k in range(n_centers - 1, zero, -1):
        a = taylor_coefficients(centers[k], *values[k])
        values[k - 1] = _taylor_value(a, -STEP)

    values[zero] = (AI_ZERO, AIP_ZERO)
    for k in range(zero, 0, -1):
        a = taylor_coefficients(centers[k], *values[k])
        values[k - 1] = _taylor_value(a, -STEP)

    return np.ascontiguousarray(
        np.array([taylor_coefficients(c, *v) for c, v in zip(centers, values)])
    )


TAYLOR = _build_table()
N_CENTERS = TAYLOR.shape[0]
