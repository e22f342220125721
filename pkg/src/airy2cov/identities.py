"""Closed-form identities linking u_{j,k} F2 to derivatives of f2 = F2'.

Every identity has the shape

    lhs(u)(s) * F2(s) = sum_m p_m(s) f2^(m)(s)

with p_m polynomials in s with rational coefficients.  The table rows are
stored as text (one entry per derivative order, starting at f2 itself) and
parsed into exact coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import UnknownIdentity

Poly = dict[int, Fraction]

_ROWS = """
0,0: 1
1,0: 0 | 1/2
1,1: -s/3 | 0 | 1/3
2,0: s/3 | 0 | 1/6
2,1: -1/4 | 0 | 0 | 1/8
3,0: 7/12 | s/3 | 0 | 1/24
2,2: s**2/5 | -3/10 | 0 | 0 | 1/20
3,1: -s**2/5 | 2/15 | s/6 | 0 | 1/30
4,0: s**2/5 | 47/60 | s/6 | 0 | 1/120
3,2: 2*s/9 | s**2/18 | -1/12 | s/18 | 0 | 1/72
4,1: -13*s/18 | -s**2/18 | 11/24 | s/9 | 0 | 1/144
5,0: 101*s/90 | 23*s**2/90 | 59/120 | s/18 | 0 | 1/720
3,3: -s**3/7+34/63 | 17*s/42 | s**2/9 | -1/18 | s/36 | 0 | 1/252
4,2: s**3/7-11/42 | -13*s/84 | 0 | 1/8 | s/24 | 0 | 1/336
5,1: -s**3/7-74/105 | -47*s/420 | s**2/10 | 7/20 | s/24 | 0 | 1/840
6,0: s**3/7+1151/630 | 733*s/420 | 7*s**2/45 | 71/360 | s/72 | 0 | 1/5040
4,3: -s**2/4 | 127/288 | 5*s/18 | s**2/18 | 5/288 | s/72 | 0 | 1/1152
5,2: 43*s**2/60 | s**3/15-123/160 | -3*s/20 | s**2/30 | 61/480 | s/60 | 0 | 1/1920
6,1: -73*s**2/60 | -s**3/15+271/1440 | 29*s/36 | 17*s**2/180 | 221/1440 | s/90 | 0 | 1/5760
7,0: 691*s**2/420 | 22*s**3/105+4873/1440 | 394*s/315 | 11*s**2/180 | 83/1440 | s/360 | 0 | 1/40320
4,4: s**4/9-118*s/81 | -17*s**2/54 | -s**3/81+119/144 | 31*s/108 | s**2/27 | 1/144 | s/216 | 0 | 1/5184
5,3: -s**4/9+667*s/810 | 197*s**2/540 | 32*s**3/405-4/45 | 119*s/1080 | 29*s**2/1080 | 11/360 | 11*s/2160 | 0 | 1/6480
6,2: s**4/9+322*s/405 | 103*s**2/540 | s**3/162-35/72 | 113*s/540 | 37*s**2/1080 | 11/180 | s/216 | 0 | 1/12960
7,1: -s**4/9-21167*s/5670 | -1999*s**2/3780 | 37*s**3/567+115/63 | 6107*s/7560 | 47*s**2/1080 | 17/360 | s/432 | 0 | 1/45360
8,0: s**4/9+19912*s/2835 | 5297*s**2/1890 | 409*s**3/2835+28319/10080 | 4273*s/7560 | 19*s**2/1080 | 19/1440 | s/2160 | 0 | 1/362880
"""

_TERM = re.compile(r"([+-]?)(\d+)?(\*)?(s(?:\*\*(\d+))?)?(?:/(\d+))?")


def parse_poly(text: str) -> Poly:
    """Parse sums of monomials like ``-13*s/18``, ``s**3/7+34/63``, ``0``."""
    text = text.replace(" ", "")
    poly: Poly = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(4) is None):
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign, num, star, var, power, den = m.groups()
        if star and not var:
            raise ValueError(f"dangling '*' in {text!r}")
        coeff = Fraction(int(num) if num else 1, int(den) if den else 1)
        if sign == "-":
            coeff = -coeff
        p = (int(power) if power else 1) if var else 0
        poly[p] = poly.get(p, Fraction(0)) + coeff
        pos = m.end()
    return {p: c for p, c in poly.items() if c != 0}


def _parse_rows(block: str) -> dict[tuple[int, int], list[Poly]]:
    rows = {}
    for line in block.strip().splitlines():
        key, rest = line.split(":")
        j, k = (int(v) for v in key.split(","))
        rows[(j, k)] = [parse_poly(e) for e in rest.split("|")]
    return rows


TABLE: dict[tuple[int, int], list[Poly]] = _parse_rows(_ROWS)

UGetter = Callable[[int, int], object]


@dataclass(frozen=True)
class Identity:
    """``lhs(u) * F2 == sum_m rhs[m](s) * f2^(m)``."""

    name: str
    lhs: Callable[[UGetter], object]
    rhs: Mapping[int, Poly]
    description: str = ""


def _row_identity(j: int, k: int) -> Identity:
    return Identity(
        name=f"{j},{k}",
        lhs=lambda u, j=j, k=k: u(j, k),
        rhs={m: p for m, p in enumerate(TABLE[(j, k)]) if p},
        description=f"u_{{{j},{k}}} F2",
    )


def _a(u: UGetter):
    return u(1, 0) ** 2 - u(0, 0) * u(1, 1)


def _b(u: UGetter):
    return (
        -2 * u(2, 0) ** 2
        + u(1, 1) * u(2, 0)
        - u(1, 0) * u(2, 1)
        + 2 * u(0, 0) * u(2, 2)
        + 3 * u(1, 0) * u(3, 0)
        - 3 * u(0, 0) * u(3, 1)
    )


def _c(u: UGetter):
    return u(1, 0) * u(2, 0) - u(0, 0) * u(2, 1)


_A_RHS = {0: {0: Fraction(-1, 6)}, 1: {1: Fraction(1, 3)}, 3: {0: Fraction(-1, 12)}}

EXTRA: dict[str, Identity] = {
    "8th": Identity("8th", _a, _A_RHS, "(u10^2 - u00 u11) F2, the order-8 product term"),
    "A": Identity("A", _a, _A_RHS, "A(s) F2"),
    # the last term carries a factor s; without it the residual is O(1)
    "B": Identity(
        "B",
        _b,
        {0: {1: Fraction(-1, 3)}, 1: {2: Fraction(2, 3)}, 3: {1: Fraction(-1, 6)}},
        "B(s) F2",
    ),
    "C": Identity(
        "C",
        _c,
        {1: {0: Fraction(1, 12)}, 2: {1: Fraction(1, 6)}, 4: {0: Fraction(-1, 24)}},
        "C(s) F2",
    ),
    # the same identity without the factor s; it does not hold (see tests)
    "B-unscaled": Identity(
        "B-unscaled",
        _b,
        {0: {1: Fraction(-1, 3)}, 1: {2: Fraction(2, 3)}, 3: {0: Fraction(-1, 6)}},
        "B(s) F2 with an s-free third-derivative term",
    ),
}

DEFAULT_SUITE: tuple[str, ...] = tuple(f"{j},{k}" for j, k in TABLE) + ("8th", "A", "B", "C")


def get_identity(name) -> Identity:
    if isinstance(name, tuple):
        name = f"{name[0]},{name[1]}"
    name = str(name).replace(" ", "")
    if name in EXTRA:
        return EXTRA[name]
    try:
        j, k = (int(v) for v in name.split(","))
    except ValueError:
        raise UnknownIdentity(name) from None
    if (j, k) in TABLE:
        return _row_identity(j, k)
    if (k, j) in TABLE:
        return _row_identity(k, j)
    raise UnknownIdentity(name)
