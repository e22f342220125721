"""Airy function Ai and its derivatives of every order.

Values come from the kernel backend (Taylor table plus asymptotic tails).
Higher derivatives reduce to Ai and Ai' through the Airy equation, so no
numerical differentiation is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidArgument


@dataclass(frozen=True)
class AiryValue:
    x: float
    n: int
    value: float


def _scalar_or_array(x):
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def airy_pair(x):
    """Return ``(Ai(x), Ai'(x))``; works elementwise on arrays."""
    arr, scalar = _scalar_or_array(x)
    if scalar:
        return kernels.airy_scalar(float(arr))
    return kernels.airy_array(arr)


def airy_ai(x):
    return airy_pair(x)[0]


def airy_ai_prime(x):
    return airy_pair(x)[1]


def derivative_coefficients(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Integer polynomials (a_n, b_n) with Ai^(n)(x) = a_n(x) Ai(x) + b_n(x) Ai'(x).

    Each polynomial is a list of ``(power, coefficient)`` pairs.  Built from
    d/dx (a Ai + b Ai') = (a' + x b) Ai + (a + b') Ai'.
    """
    if n < 0:
        raise InvalidArgument(f"derivative order must be >= 0, got {n}")
    a = {0: 1}
    b: dict[int, int] = {}
    for _ in range(n):
        na: dict[int, int] = {}
        nb: dict[int, int] = {}
        for p, c in a.items():
            if p:
                na[p - 1] = na.get(p - 1, 0) + p * c
            nb[p] = nb.get(p, 0) + c
        for p, c in b.items():
            na[p + 1] = na.get(p + 1, 0) + c
            if p:
                nb[p - 1] = nb.get(p - 1, 0) + p * c
        a = {p: c for p, c in na.items() if c}
        b = {p: c for p, c in nb.items() if c}
    return sorted(a.items()), sorted(b.items())


def airy_derivatives(n_max: int, x) -> list:
    """[Ai(x), Ai'(x), ..., Ai^(n_max)(x)] by the three-term recursion."""
    if n_max < 0:
        raise InvalidArgument(f"derivative order must be >= 0, got {n_max}")
    ai, aip = airy_pair(x)
    xs = np.asarray(x, dtype=np.float64) if np.ndim(x) else float(x)
    out = [ai, aip, xs * ai]
    for n in range(3, n_max + 1):
        out.append((n - 2) * out[n - 3] + xs * out[n - 2])
    return out[: n_max + 1]


def airy_derivative(n: int, x):
    """Ai^(n)(x), using Ai^(n) = (n-2) Ai^(n-3) + x Ai^(n-2) for n >= 3."""
    if int(n) != n or n < 0:
        raise InvalidArgument(f"derivative order must be a non-negative integer, got {n!r}")
    return airy_derivatives(int(n), x)[int(n)]


def airy_value(n: int, x: float) -> AiryValue:
    return AiryValue(float(x), int(n), float(airy_derivative(n, float(x))))
