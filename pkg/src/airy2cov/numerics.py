"""Shared numerical kernels: Gauss-Legendre rules, dense LU, Chebyshev grids.

Gridded functions live on Chebyshev points of the second kind (ascending)
and are evaluated by barycentric interpolation, which reproduces
polynomials of degree below the number of nodes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft
import scipy.linalg
import scipy.linalg.lapack

from ._backend import kernels
from .errors import InvalidArgument, OutOfDomain, SingularMatrix

# --------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]
    order: int

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _legendre_with_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, n * (x * p1 - p0) / (x * x - 1.0)


@lru_cache(maxsize=64)
def _legendre_reference(n: int, tol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    # Newton iteration on P_n from the Tricomi-type initial guess
    x = np.cos(np.pi * (np.arange(1, n + 1) - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    _, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1].copy()
    w = w[::-1].copy()
    if n % 2 == 1:
        x[n // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """n-point Gauss-Legendre rule on (a, b), exact for degree <= 2n - 1."""
    if int(n) != n or n < 1:
        raise InvalidArgument(f"quadrature order must be a positive integer, got {n!r}")
    if not a < b:
        raise InvalidArgument(f"empty interval ({a}, {b})")
    x, w = _legendre_reference(int(n))
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return QuadratureRule(mid + half * x, half * w, (float(a), float(b)), int(n))


# --------------------------------------------------------------------------
# dense linear algebra


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {m.shape}")
    return m


_getrf, _getrs = scipy.linalg.lapack.get_lapack_funcs(("getrf", "getrs"), dtype=np.float64)


def _lu(m: np.ndarray):
    # LAPACK directly: lu_factor would warn on exact singularity, and
    # silencing warnings is not thread-safe
    lu, piv, info = _getrf(m)
    if info < 0:
        raise InvalidArgument(f"getrf rejected argument {-info}")
    return lu, piv


def log_determinant(m) -> tuple[float, float]:
    """Return ``(sign, log|det m|)`` from an LU factorization with partial pivoting."""
    m = _as_square(m)
    if m.shape[0] == 0:
        return 1.0, 0.0
    lu, piv = _lu(m)
    d = np.diag(lu)
    if np.any(d == 0.0):
        return 0.0, -math.inf
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    sign = (-1.0) ** swaps * np.prod(np.sign(d))
    return float(sign), float(np.sum(np.log(np.abs(d))))


def determinant(m) -> float:
    sign, logabs = log_determinant(m)
    return sign * math.exp(logabs) if sign != 0.0 else 0.0


class LUSolver:
    """Factor once, solve many times; raises SingularMatrix on tiny pivots."""

    def __init__(self, m, pivot_tol: float = 1e-14):
        m = _as_square(m)
        self.n = m.shape[0]
        self._lu, self._piv = _lu(m)
        row_scale = np.max(np.abs(m), axis=1)
        perm = np.arange(self.n)
        for i, p in enumerate(self._piv):
            perm[i], perm[p] = perm[p], perm[i]
        pivots = np.abs(np.diag(self._lu))
        bad = pivots <= pivot_tol * row_scale[perm]
        if np.any(bad):
            i = int(np.argmax(bad))
            raise SingularMatrix(f"pivot {i} is {pivots[i]:.3e}, below {pivot_tol:g} of its row scale")

    def solve(self, rhs) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=np.float64)
        if rhs.shape[0] != self.n:
            raise InvalidArgument(f"right-hand side has {rhs.shape[0]} rows, matrix has {self.n}")
        # getrs shifts the pivot array in place while it runs, so concurrent
        # solves must not share it
        x, info = _getrs(self._lu, self._piv.copy(), rhs)
        if info != 0:
            raise InvalidArgument(f"getrs rejected argument {-info}")
        return x

    def log_determinant(self) -> tuple[float, float]:
        d = np.diag(self._lu)
        swaps = np.count_nonzero(self._piv != np.arange(self.n))
        return float((-1.0) ** swaps * np.prod(np.sign(d))), float(np.sum(np.log(np.abs(d))))


def solve_linear(m, rhs) -> np.ndarray:
    return LUSolver(m).solve(rhs)


# --------------------------------------------------------------------------
# Chebyshev grids


def chebyshev_points(n: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """The n + 1 Chebyshev extreme points on [a, b], ascending."""
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    # exact symmetry about the midpoint
    x = 0.5 * (x - x[::-1])
    return 0.5 * (b + a) + 0.5 * (b - a) * x


def chebyshev_diff_matrix(n: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """First-derivative collocation matrix on ``chebyshev_points(n, a, b)``."""
    x = chebyshev_points(n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    d -= np.diag(d.sum(axis=1))
    return d * (2.0 / (b - a))


def chebyshev_coefficients(values) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through ascending extreme points."""
    f = np.asarray(values, dtype=np.float64)[::-1]
    n = len(f) - 1
    c = scipy.fft.dct(f, type=1) / n
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def chebyshev_values(coefficients) -> np.ndarray:
    """Inverse of :func:`chebyshev_coefficients`."""
    c = np.asarray(coefficients, dtype=np.float64).copy()
    alt = (-1.0) ** np.arange(len(c))
    f = 0.5 * (scipy.fft.dct(c, type=1) + c[0] + alt * c[-1])
    return f[::-1]


def chebyshev_resample(values, m: int) -> np.ndarray:
    """Values of the same interpolant on ``m + 1`` extreme points."""
    c = chebyshev_coefficients(values)
    out = np.zeros(m + 1)
    k = min(len(c), m + 1)
    out[:k] = c[:k]
    return chebyshev_values(out)


def chebyshev_derivative(values, a: float, b: float) -> np.ndarray:
    c = chebyshev_coefficients(values)
    dc = np.polynomial.chebyshev.chebder(c) * (2.0 / (b - a))
    return chebyshev_values(np.append(dc, 0.0))


def chebyshev_tail_integral(values, a: float, b: float) -> np.ndarray:
    """Values of ``s -> integral_s^b f`` on the grid carrying ``values``."""
    c = chebyshev_coefficients(values)
    anti = np.polynomial.chebyshev.chebint(c, lbnd=1.0)
    # the antiderivative gains a T_{n+1} term; add it exactly at the grid points
    grid_vals = chebyshev_values(anti[:-1]) + anti[-1] * np.cos(
        (len(c)) * np.arccos(chebyshev_points(len(c) - 1))
    )
    # pin the value at b to exactly zero
    return -0.5 * (b - a) * (grid_vals - grid_vals[-1])


def chebyshev_tail(values, k: int = 8) -> float:
    """Magnitude of the last ``k`` Chebyshev coefficients, relative to the largest."""
    c = np.abs(chebyshev_coefficients(values))
    scale = c.max()
    return float(c[-k:].max() / scale) if scale > 0 else 0.0


# --------------------------------------------------------------------------
# gridded functions


def _chebyshev_bary_weights(n: int) -> np.ndarray:
    w = (-1.0) ** np.arange(n + 1)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _general_bary_weights(x: np.ndarray) -> np.ndarray:
    # capacity scaling keeps the products in range
    scale = 4.0 / (x[-1] - x[0])
    d = (x[:, None] - x[None, :]) * scale
    np.fill_diagonal(d, 1.0)
    sign = np.prod(np.sign(d), axis=1)
    logmag = np.sum(np.log(np.abs(d)), axis=1)
    w = sign * np.exp(-(logmag - logmag.max()))
    return w


@dataclass(frozen=True)
class GridFunction:
    """Samples of a smooth function on a strictly increasing grid.

    ``representation`` is ``"chebyshev"`` when the grid is a set of
    Chebyshev extreme points (closed-form weights, spectral calculus
    available) or ``"barycentric"`` for any other grid.
    """

    grid: np.ndarray
    values: np.ndarray
    representation: str = "chebyshev"
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.ascontiguousarray(self.grid, dtype=np.float64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise InvalidArgument("grid and values must be 1-D arrays of equal length")
        if len(grid) < 4:
            raise InvalidArgument("a grid function needs at least 4 points")
        if np.any(np.diff(grid) <= 0):
            raise InvalidArgument("grid must be strictly increasing")
        if self.representation == "chebyshev":
            weights = _chebyshev_bary_weights(len(grid) - 1)
        elif self.representation == "barycentric":
            weights = _general_bary_weights(grid)
        else:
            raise InvalidArgument(f"unknown representation {self.representation!r}")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def __call__(self, s):
        return interp_eval(self, s)

    def derivative(self) -> "GridFunction":
        if self.representation != "chebyshev":
            raise InvalidArgument("spectral derivative needs a Chebyshev grid")
        a, b = self.domain
        return GridFunction(self.grid, chebyshev_derivative(self.values, a, b))


def interp_eval(f: GridFunction, s):
    """Interpolated value(s) of ``f``; scalars in, scalars out."""
    arr = np.asarray(s, dtype=np.float64)
    a, b = f.domain
    # a few ulps of slack for end points produced by affine maps
    slack = 8 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)
    if np.any(arr < a - slack) or np.any(arr > b + slack) or np.any(np.isnan(arr)):
        raise OutOfDomain(f"evaluation point outside [{a}, {b}]")
    out = kernels.barycentric_eval(f.grid, f.weights, f.values, np.clip(arr, a, b))
    out = np.asarray(out).reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out
