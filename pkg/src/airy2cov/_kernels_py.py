"""Pure-Python/numpy versions of the kernels in ``_kernels.pyx``."""

from __future__ import annotations

import math

import numpy as np

from . import _airy_table as _tab

_SQRT_PI = math.sqrt(math.pi)


def _asym_left_scalar(x: float) -> tuple[float, float]:
    ax = -x
    zeta = 2.0 / 3.0 * ax**1.5
    p = q = pp = qp = 0.0
    term = 1.0
    for k in range(_tab.N_ASYMPTOTIC):
        sgn = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            p += sgn * _tab.ASYM_U[k] * term
            pp += sgn * _tab.ASYM_V[k] * term
        else:
            q += sgn * _tab.ASYM_U[k] * term
            qp += sgn * _tab.ASYM_V[k] * term
        term /= zeta
        if _tab.ASYM_U[k] * term < 1e-17:
            break
    th = zeta + 0.25 * math.pi
    r = ax**0.25
    return (
        (math.sin(th) * p - math.cos(th) * q) / (_SQRT_PI * r),
        -r / _SQRT_PI * (math.cos(th) * pp + math.sin(th) * qp),
    )


def airy_scalar(x: float) -> tuple[float, float]:
    """Return ``(Ai(x), Ai'(x))`` for a finite float."""
    x = float(x)
    if x >= _tab.RIGHT_EDGE:
        return _tab.asymptotic_right(x)
    if x < _tab.LEFT_EDGE:
        return _asym_left_scalar(x)
    k = int(math.floor((x - _tab.FIRST_CENTER) / _tab.STEP + 0.5))
    k = min(max(k, 0), _tab.N_CENTERS - 1)
    h = x - (_tab.FIRST_CENTER + k * _tab.STEP)
    row = _tab.TAYLOR[k]
    v = d = 0.0
    for j in range(_tab.N_TAYLOR - 1, 0, -1):
        v = v * h + row[j]
        d = d * h + j * row[j]
    return v * h + row[0], d


def _asym_right_array(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    zeta = 2.0 / 3.0 * x**1.5
    s = np.zeros_like(x)
    sp = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(_tab.N_ASYMPTOTIC):
        s += _tab.ASYM_U[k] * term
        sp += _tab.ASYM_V[k] * term
        term = term * (-1.0 / zeta)
        if np.all(np.abs(_tab.ASYM_U[k] * term) < 1e-17 * np.abs(s)):
            break
    e = np.exp(-zeta) / (2.0 * _SQRT_PI)
    return e * s / x**0.25, -e * sp * x**0.25


def _asym_left_array(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ax = -x
    zeta = 2.0 / 3.0 * ax**1.5
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    pp = np.zeros_like(x)
    qp = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(_tab.N_ASYMPTOTIC):
        sgn = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            p += sgn * _tab.ASYM_U[k] * term
            pp += sgn * _tab.ASYM_V[k] * term
        else:
            q += sgn * _tab.ASYM_U[k] * term
            qp += sgn * _tab.ASYM_V[k] * term
        term = term / zeta
        if np.all(_tab.ASYM_U[k] * term < 1e-17):
            break
    th = zeta + 0.25 * np.pi
    r = ax**0.25
    return (
        (np.sin(th) * p - np.cos(th) * q) / (_SQRT_PI * r),
        -r / _SQRT_PI * (np.cos(th) * pp + np.sin(th) * qp),
    )


def airy_array(x) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(Ai, Ai')`` over an array of any shape."""
    arr = np.asarray(x, dtype=np.float64)
    flat = arr.reshape(-1)
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)

    right = flat >= _tab.RIGHT_EDGE
    left = flat < _tab.LEFT_EDGE
    mid = ~(right | left)
    if right.any():
        ai[right], aip[right] = _asym_right_array(flat[right])
    if left.any():
        ai[left], aip[left] = _asym_left_array(flat[left])
    if mid.any():
        xm = flat[mid]
        k = np.floor((xm - _tab.FIRST_CENTER) / _tab.STEP + 0.5).astype(np.intp)
        k = np.clip(k, 0, _tab.N_CENTERS - 1)
        h = xm - (_tab.FIRST_CENTER + k * _tab.STEP)
        rows = _tab.TAYLOR[k]
        v = np.zeros_like(xm)
        d = np.zeros_like(xm)
        for j in range(_tab.N_TAYLOR - 1, 0, -1):
            v = v * h + rows[:, j]
            d = d * h + j * rows[:, j]
        ai[mid] = v * h + rows[:, 0]
        aip[mid] = d
    return ai.reshape(arr.shape), aip.reshape(arr.shape)


def barycentric_eval(nodes, weights, values, targets) -> np.ndarray:
    """Second-form barycentric interpolation at ``targets`` (exact at nodes)."""
    nodes = np.asarray(nodes, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    arr = np.asarray(targets, dtype=np.float64)
    flat = arr.reshape(-1)
    out = np.empty_like(flat)
    # chunked to bound the (targets x nodes) temporary
    for lo in range(0, flat.size, 2048):
        t = flat[lo:lo + 2048]
        diff = t[:, None] - nodes[None, :]
        exact = diff == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            c = weights / diff
            res = (c @ values) / c.sum(axis=1)
        rows, cols = np.nonzero(exact)
        res[rows] = values[cols]
        out[lo:lo + 2048] = res
    return out.reshape(arr.shape)
