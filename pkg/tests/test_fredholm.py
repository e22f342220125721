import warnings

import mpmath as mp
import numpy as np
import pytest

from airy2cov.errors import AccuracyWarning, InvalidArgument
from airy2cov.fredholm import (
    FredholmConfig,
    _lower_rule,
    _split_rule,
    airy_kernel,
    covariance_exact,
    covariance_grid,
    extended_entry,
    fredholm_F2,
    gaussian_full_line,
    joint_distribution,
    joint_excess,
    resolvent_u,
    use_split,
)
from airy2cov.airy import airy_ai
from airy2cov.reference import COVARIANCE_TABLE


def mp_kernel(x, y, weight=lambda z: 1, sign=1):
    with mp.workdps(30):
        f = lambda z: weight(z) * mp.airyai(x + sign * z) * mp.airyai(y + sign * z)  # noqa: E731
        return float(mp.quad(f, [0, 2, 6, 15, mp.inf]))


# --------------------------------------------------------------------------
# kernels


@pytest.mark.parametrize("x, y", [(0.0, 1.0), (-3.0, -1.2), (-5.0, 2.0), (1.5, 1.5), (-2.0, -2.0004)])
def test_airy_kernel_against_quadrature(x, y):
    assert abs(airy_kernel(x, y) - mp_kernel(x, y)) < 1e-13


def test_airy_kernel_symmetry_and_diagonal_continuity():
    x = np.linspace(-6, 4, 11)
    np.testing.assert_allclose(airy_kernel(x[:, None], x[None, :]), airy_kernel(x[None, :], x[:, None]), rtol=1e-14)
    for m in (-4.0, 0.3):
        inside = airy_kernel(m + 0.9e-3, m - 0.9e-3)
        outside = airy_kernel(m + 1.1e-3, m - 1.1e-3)
        assert abs(inside - outside) < 1e-6
        assert abs(inside - mp_kernel(m + 0.9e-3, m - 0.9e-3)) < 5e-14


@pytest.mark.parametrize("t", [1.0, 4.0])
@pytest.mark.parametrize("x, y", [(0.0, 0.5), (-2.5, -1.0)])
def test_upper_block_against_quadrature(t, x, y):
    ref = mp_kernel(x, y, weight=lambda z: mp.exp(-z * t))
    assert abs(extended_entry(1, 2, x, y, t) - ref) < 1e-13


@pytest.mark.parametrize("t", [1.0, 2.5, 5.0])
@pytest.mark.parametrize("x, y", [(0.0, 0.5), (-2.5, -1.0), (2.0, 3.0)])
def test_lower_block_against_quadrature(t, x, y):
    ref = -mp_kernel(x, y, weight=lambda z: mp.exp(-z * t), sign=-1)
    assert abs(extended_entry(2, 1, x, y, t) - ref) < 1e-12 * max(1.0, abs(ref))


def test_diagonal_blocks_are_airy_kernel():
    assert extended_entry(1, 1, 0.2, -0.7, 3.0) == airy_kernel(0.2, -0.7)
    assert extended_entry(2, 2, 0.2, -0.7, 3.0) == airy_kernel(0.2, -0.7)


def test_split_and_direct_lower_block_agree():
    # where both are usable, the two representations of K21 must coincide
    t = 2.0
    cfg = FredholmConfig(t=t, s1=1.0, s2=1.0)
    for x, y in [(1.0, 1.5), (2.0, 2.0), (0.5, 3.0)]:
        z, w = _lower_rule(t, min(x, y), cfg)
        direct = -np.dot(w, airy_ai(x - z) * airy_ai(y - z))
        z, w = _split_rule(t, cfg)
        split = np.dot(w, airy_ai(x + z) * airy_ai(y + z)) - gaussian_full_line(x, y, t)
        assert abs(direct - split) < 1e-12


def test_gaussian_full_line_against_quadrature():
    t, x, y = 1.5, 0.4, -0.3
    with mp.workdps(30):
        ref = float(mp.quad(lambda z: mp.exp(z * t) * mp.airyai(x + z) * mp.airyai(y + z), [-mp.inf, -20, -5, 0, 5, mp.inf]))
    assert abs(gaussian_full_line(x, y, t) - ref) < 1e-12


def test_route_choice():
    cfg = FredholmConfig(t=1.0)
    assert use_split(3.0, 3.0, 1.0, cfg)
    assert not use_split(-6.0, -6.0, 3.5, cfg)
    assert not use_split(0.0, 0.0, 8.0, cfg)


def test_degenerate_time():
    assert extended_entry(2, 1, 0.0, 1.0, 0.0) == airy_kernel(0.0, 1.0)
    with pytest.raises(InvalidArgument):
        extended_entry(2, 1, 0.5, 0.5, 0.0)
    with pytest.raises(InvalidArgument):
        extended_entry(3, 1, 0.0, 0.0, 1.0)
    with pytest.raises(InvalidArgument):
        extended_entry(1, 2, 0.0, 0.0, -1.0)


# --------------------------------------------------------------------------
# one-point determinant


def test_mean_from_nystrom_cdf():
    # mu_1 = int_0^inf (1 - F2) - int_-inf^0 F2
    from airy2cov.numerics import gauss_legendre
    from airy2cov.reference import MOMENTS

    neg = gauss_legendre(60, -10.0, 0.0)
    pos = gauss_legendre(40, 0.0, 8.0)
    mean = sum(w * (1 - fredholm_F2(float(x))) for x, w in zip(pos.nodes, pos.weights))
    mean -= sum(w * fredholm_F2(float(x)) for x, w in zip(neg.nodes, neg.weights))
    assert abs(mean - MOMENTS[1]) < 1e-10


def test_f2_quadrature_convergence():
    vals = [fredholm_F2(-3.0, FredholmConfig(quad_order=n)) for n in (40, 60, 90)]
    assert abs(vals[1] - vals[2]) < 1e-14
    assert abs(vals[0] - vals[2]) < 1e-9


def test_f2_against_profile(profile):
    for s in (-5.0, -2.0, 1.0):
        assert abs(fredholm_F2(s) - profile.cdf(s)) < 1e-11


# --------------------------------------------------------------------------
# two-point determinant


def test_time_zero_reduces_to_minimum():
    cfg = FredholmConfig(t=0.0, s1=-1.0, s2=0.5)
    assert joint_distribution(cfg) == fredholm_F2(-1.0)


@pytest.mark.parametrize("t", [5.0, 10.0])
@pytest.mark.parametrize("s1, s2", [(0.0, 0.0), (-2.0, 1.0), (-4.0, -3.0), (2.0, 2.5)])
def test_routes_agree(t, s1, s2):
    cfg = FredholmConfig(t=t, s1=s1, s2=s2)
    assert abs(joint_distribution(cfg, "direct") - joint_distribution(cfg, "factorized")) < 1e-9


def test_frechet_bounds_and_positive_association():
    for t in (0.5, 2.0, 8.0):
        for s1, s2 in [(-1.0, 0.0), (-3.0, -2.0), (1.0, -2.5)]:
            cfg = FredholmConfig(t=t, s1=s1, s2=s2)
            j = joint_distribution(cfg)
            F1, F2 = fredholm_F2(s1), fredholm_F2(s2)
            assert max(0.0, F1 + F2 - 1) - 1e-14 <= j <= min(F1, F2) + 1e-14
            assert joint_excess(cfg) > 0


def test_symmetry_in_thresholds():
    a = joint_distribution(FredholmConfig(t=3.0, s1=-2.0, s2=0.7))
    b = joint_distribution(FredholmConfig(t=3.0, s1=0.7, s2=-2.0))
    assert abs(a - b) < 1e-14


def test_excess_matches_difference():
    cfg = FredholmConfig(t=2.0, s1=-1.0, s2=-0.5)
    direct = joint_distribution(cfg) - fredholm_F2(-1.0) * fredholm_F2(-0.5)
    assert abs(joint_excess(cfg) - direct) < 1e-14


def test_large_separation_is_nearly_independent(profile):
    from airy2cov.asymptotics import joint_asymptotic

    cfg = FredholmConfig(t=40.0, s1=-1.5, s2=-1.0)
    ex = joint_excess(cfg)
    # leading correction f2(s1) f2(s2) / t^2, next terms O(t^-10) away
    assert abs(ex * 40.0**2 / (profile.f2(0, -1.5) * profile.f2(0, -1.0)) - 1) < 0.05
    series = joint_asymptotic(profile, 40.0, -1.5, -1.0) - profile.cdf(-1.5) * profile.cdf(-1.0)
    assert abs(ex - series) < 1e-14


def test_joint_quadrature_convergence():
    base = FredholmConfig(t=1.5, s1=-2.0, s2=-1.0)
    a = joint_distribution(base)
    b = joint_distribution(base.with_(quad_order=90, z_order=90))
    assert abs(a - b) < 1e-13


def test_route_validation():
    with pytest.raises(InvalidArgument):
        joint_distribution(FredholmConfig(t=1.0), route="series")


# --------------------------------------------------------------------------
# configuration


@pytest.mark.parametrize(
    "kwargs",
    [dict(t=-1.0), dict(t=float("nan")), dict(quad_order=20), dict(quad_order=60.5), dict(z_order=5), dict(cutoff=4.0), dict(z_cutoff=0.0)],
)
def test_config_validation(kwargs):
    with pytest.raises(InvalidArgument):
        FredholmConfig(**kwargs)


def test_small_time_warning():
    with pytest.warns(AccuracyWarning):
        cfg = FredholmConfig(t=0.01)
    assert cfg.accuracy_warning is not None
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert FredholmConfig(t=0.05).accuracy_warning is None


def test_z_cutoff_default():
    assert FredholmConfig(t=0.5).effective_z_cutoff == 40.0
    assert FredholmConfig(t=5.0).effective_z_cutoff == pytest.approx(34.538776394910684 / 5)


# --------------------------------------------------------------------------
# resolvent route


@pytest.mark.parametrize("s", [-4.0, -2.0, 0.0, 2.0])
def test_resolvent_against_u_table(profile, s):
    for j in range(5):
        for k in range(5 - j):
            assert abs(resolvent_u(j, k, s) - profile.utable(j, k, s)) < 1e-9


def test_resolvent_symmetry_and_validation():
    assert resolvent_u(1, 3, -1.0) == pytest.approx(resolvent_u(3, 1, -1.0), rel=1e-12)
    with pytest.raises(InvalidArgument):
        resolvent_u(3, 2, 0.0)


# --------------------------------------------------------------------------
# covariance


def test_covariance_at_five():
    assert abs(covariance_exact(5.0) - COVARIANCE_TABLE[5][0]) < 1e-10


def test_covariance_grid_is_symmetric_and_parallel_safe():
    g1 = covariance_grid(8.0, order=24)
    g2 = covariance_grid(8.0, order=24, jobs=3)
    np.testing.assert_array_equal(g1.excess, g2.excess)
    np.testing.assert_array_equal(g1.excess, g1.excess.T)
    i, j = 5, 17
    direct = joint_excess(FredholmConfig(t=8.0, s1=float(g1.nodes[j]), s2=float(g1.nodes[i])))
    assert abs(g1.excess[i, j] - direct) < 1e-15


def test_covariance_convergence_in_grid_order():
    assert abs(covariance_exact(3.0, order=60) - covariance_exact(3.0, order=80)) < 1e-10


def test_covariance_decreases():
    vals = [covariance_exact(t, order=50) for t in (1.0, 2.0, 4.0)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_small_time_covariance_approaches_variance(profile):
    from airy2cov.tw_core import moments

    var = moments(profile).variance
    ratios = [(covariance_exact(t) - (var - t)) / t for t in (0.1, 0.05)]
    assert ratios[1] < ratios[0] < 0.2


def test_covariance_validation():
    with pytest.raises(InvalidArgument):
        covariance_exact(0.0)
