import math

import mpmath as mp
import numpy as np
import pytest
import sympy

from airy2cov.airy import (
    airy_ai,
    airy_ai_prime,
    airy_derivative,
    airy_derivatives,
    airy_pair,
    airy_value,
    derivative_coefficients,
)
from airy2cov.errors import InvalidArgument

SAMPLE = [-40.0, -17.3, -8.0, -5.2, -2.338107410459767, -1.0, -0.3, 0.0, 0.4, 1.0, 2.5, 4.49, 4.51, 7.0, 12.0, 25.0]


def _mp_pair(x):
    with mp.workdps(40):
        return mp.airyai(x), mp.airyai(x, derivative=1)


@pytest.mark.parametrize("x", SAMPLE)
def test_values_against_mpmath(x):
    ai, aip = airy_pair(x)
    ref, refp = _mp_pair(x)
    # absolute on the oscillatory side, relative on the decaying side
    scale = 1.0 if x <= 0 else float(abs(ref))
    scale_p = max(1.0, abs(x) ** 0.25) if x <= 0 else float(abs(refp))
    assert abs(ai - float(ref)) <= 2e-14 * max(scale, 1e-300) + (1e-14 if x <= 0 else 0)
    assert abs(aip - float(refp)) <= 2e-14 * max(scale_p, 1e-300) + (1e-14 if x <= 0 else 0)


def test_special_values():
    assert abs(airy_ai(0.0) - 1 / (3 ** (2 / 3) * math.gamma(2 / 3))) < 1e-16
    assert abs(airy_ai_prime(0.0) + 1 / (3 ** (1 / 3) * math.gamma(1 / 3))) < 1e-16
    assert abs(airy_ai(1.0) - 0.1352924163128814) < 1e-15
    assert abs(airy_ai(-2.338107410459767)) < 1e-14
    assert airy_ai(5.0) > 0


def test_array_input_matches_scalar_calls():
    xs = np.linspace(-12, 12, 301)
    ai, aip = airy_pair(xs)
    assert ai.shape == xs.shape
    for i in range(0, 301, 37):
        s_ai, s_aip = airy_pair(float(xs[i]))
        assert ai[i] == pytest.approx(s_ai, rel=1e-14, abs=1e-16)
        assert aip[i] == pytest.approx(s_aip, rel=1e-14, abs=1e-16)


def test_airy_equation_residual():
    # Ai'' = x Ai against a five-point difference of Ai'
    h = 1e-3
    for x in np.linspace(-8, 6, 29):
        d = (airy_ai_prime(x - 2 * h) - 8 * airy_ai_prime(x - h) + 8 * airy_ai_prime(x + h) - airy_ai_prime(x + 2 * h)) / (12 * h)
        assert abs(d - x * airy_ai(x)) < 1e-10


def test_wronskian_with_bi():
    mpx = [mp.mpf(v) for v in (-6.0, -1.5, 0.0, 2.0)]
    for x in mpx:
        ai, aip = airy_pair(float(x))
        w = ai * float(mp.airybi(x, derivative=1)) - aip * float(mp.airybi(x))
        assert abs(w - 1 / math.pi) < 1e-13


def test_central_difference_of_ai():
    h = 1e-5
    for x in (-3.0, 0.7, 2.0):
        fd = (airy_ai(x + h) - airy_ai(x - h)) / (2 * h)
        assert abs(fd - airy_ai_prime(x)) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("x", [-3.0, 0.0, 1.5])
def test_higher_derivatives_against_mpmath(n, x):
    with mp.workdps(30):
        ref = float(mp.airyai(x, derivative=n))
    assert abs(airy_derivative(n, x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_third_derivative_formula():
    x = 1.3
    assert abs(airy_derivative(3, x) - (airy_ai(x) + x * airy_ai_prime(x))) < 1e-15


def test_derivatives_list_and_value_record():
    out = airy_derivatives(6, 0.5)
    assert len(out) == 7
    for n, v in enumerate(out):
        assert v == airy_derivative(n, 0.5)
    rec = airy_value(4, 0.5)
    assert (rec.x, rec.n, rec.value) == (0.5, 4, out[4])


def test_derivatives_on_arrays():
    xs = np.array([-1.0, 0.0, 2.0])
    d5 = airy_derivative(5, xs)
    np.testing.assert_allclose(d5, [airy_derivative(5, float(v)) for v in xs], rtol=1e-15)


@pytest.mark.parametrize("n", range(0, 9))
def test_derivative_coefficients_against_symbolic_oracle(n):
    x = sympy.Symbol("x")
    ai, aip = sympy.Function("A")(x), sympy.Function("B")(x)
    # d/dx A = B, d/dx B = x A
    expr = ai
    for _ in range(n):
        expr = sympy.expand(sympy.diff(expr, x).subs({sympy.Derivative(ai, x): aip, sympy.Derivative(aip, x): x * ai}))
    a_ref = sympy.Poly(expr.coeff(ai), x) if expr.coeff(ai) != 0 else None
    b_ref = sympy.Poly(expr.coeff(aip), x) if expr.coeff(aip) != 0 else None
    a, b = derivative_coefficients(n)

    def as_pairs(poly):
        if poly is None:
            return []
        return sorted((m[0], int(c)) for m, c in zip(poly.monoms(), poly.coeffs()))

    assert a == as_pairs(a_ref)
    assert b == as_pairs(b_ref)


@pytest.mark.parametrize("bad", [-1, 2.5])
def test_invalid_order(bad):
    with pytest.raises(InvalidArgument):
        airy_derivative(bad, 0.0)


def test_negative_order_for_coefficients():
    with pytest.raises(InvalidArgument):
        derivative_coefficients(-2)
