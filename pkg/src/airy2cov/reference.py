"""High-precision reference values used by the CLI and the tests."""

from __future__ import annotations

# moments mu_0..mu_4 of F2, the GUE largest-eigenvalue law
MOMENTS = (
    1.0,
    -1.771086807411601626,
    3.949943272220377513,
    -9.711844753027647354,
    26.025435426839994565,
)

COEFFICIENTS = {
    4: -3.542173614823203252,
    6: 18.355714809065487,
    8: -110.863383378,
    10: 652.588990733866004,
}

# t: (cov, cov_{2,6}, err_6, cov_{2,8}, err_8, cov_{2,10}, err_10)
COVARIANCE_TABLE = {
    5: (0.03527955721, 0.03550728796, -2e-4, 0.03522347770, 6e-5, 0.03529030281, -1e-5),
    10: (0.00966309240, 0.00966413835, -1e-6, 0.00966302972, 6e-8, 0.00966309498, -3e-9),
    15: (0.004376044913, 0.00437608706, -4e-8, 0.00437604380, 1e-9, 0.00437604493, -2e-11),
    20: (0.002478143955, 0.00247814822, -4e-9, 0.00247814389, 6e-11, 0.00247814396, -1e-12),
    25: (0.001591006500, 0.00159100722, -7e-10, 0.00159100649, 6e-12, 0.00159100650, -8e-13),
}

# Hastings-McLeod q(0), from a run at twice the default collocation density
Q_AT_ZERO = 0.3670615515
