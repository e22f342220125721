"""Nystrom evaluation of extended-Airy-kernel Fredholm determinants.

An independent route to the joint distribution of the Airy2 process at two
times 0 and t,

    P(A(0) <= s1, A(t) <= s2) = det(I - chi K chi),

with the 2x2 block kernel

    K11 = K22 = K_Ai,
    K12(x, y) = int_0^inf e^{-zt} Ai(x+z) Ai(y+z) dz,
    K21(x, y) = -int_{-inf}^0 e^{zt} Ai(x+z) Ai(y+z) dz,

and chi restricting block i to [s_i, infinity).  Each half-line is truncated
and discretized with Gauss-Legendre nodes; the matrices are symmetrized with
square-root weights.

For small t the K21 integrand oscillates over a long range.  There the
full-line Gaussian integral

    int_R e^{zt} Ai(x+z) Ai(y+z) dz
        = exp(t^3/12 - (x+y) t/2 - (x-y)^2/(4t)) / (2 sqrt(pi t))

is subtracted, leaving a rapidly decaying integral over z > 0.

Per-threshold data (nodes, Airy kernel block, its LU factors, Airy samples
on the z rules) is cached, so a covariance sweep over an s-grid costs one
small factorization per grid point plus cheap pair products.
"""

from __future__ import annotations

import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .airy import airy_derivatives, airy_pair
from .errors import AccuracyWarning, InvalidArgument
from .numerics import LUSolver, gauss_legendre, log_determinant

SMALL_T = 0.05
SPLIT_BELOW = 3.0
DEFAULT_WINDOW = 10.0
EXP_TAIL = -math.log(1e-15)
SPLIT_Z = 24.0
SPLIT_MAGNITUDE = 10.0
COV_BOX = (-10.0, 6.0)
COV_ORDER = 80


@dataclass(frozen=True)
class FredholmConfig:
    """Discretization of the two-time determinant.

    ``cutoff`` is the upper end of both intervals; ``None`` uses
    ``max(s_i, 0) + 10`` for block i.  ``z_cutoff`` truncates the K12/K21
    z-integrals; ``None`` means ``min(40, -ln(1e-15) / t)``.
    """

    t: float = 0.0
    s1: float = 0.0
    s2: float = 0.0
    cutoff: float | None = None
    quad_order: int = 60
    z_order: int = 60
    z_cutoff: float | None = None

    def __post_init__(self):
        for name in ("t", "s1", "s2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"{name} must be finite")
        if self.t < 0:
            raise InvalidArgument(f"t must be >= 0, got {self.t}")
        if int(self.quad_order) != self.quad_order or self.quad_order < 30:
            raise InvalidArgument(f"quad_order must be an integer >= 30, got {self.quad_order}")
        if int(self.z_order) != self.z_order or self.z_order < 10:
            raise InvalidArgument(f"z_order must be an integer >= 10, got {self.z_order}")
        if self.cutoff is not None and self.cutoff < max(self.s1, self.s2) + 8:
            raise InvalidArgument(
                f"cutoff {self.cutoff} must be at least max(s1, s2) + 8 = {max(self.s1, self.s2) + 8}"
            )
        if self.z_cutoff is not None and not self.z_cutoff > 0:
            raise InvalidArgument("z_cutoff must be positive")
        if 0 < self.t < SMALL_T:
            warnings.warn(self.accuracy_warning, AccuracyWarning, stacklevel=3)

    @property
    def accuracy_warning(self) -> str | None:
        if 0 < self.t < SMALL_T:
            return f"t = {self.t} is below {SMALL_T}; kernel blocks are near-singular and results are unvalidated"
        return None

    @property
    def effective_z_cutoff(self) -> float:
        if self.z_cutoff is not None:
            return float(self.z_cutoff)
        return 40.0 if self.t == 0 else min(40.0, EXP_TAIL / self.t)

    def interval(self, s: float) -> tuple[float, float]:
        hi = self.cutoff if self.cutoff is not None else max(s, 0.0) + DEFAULT_WINDOW
        return float(s), float(hi)

    def with_(self, **changes) -> "FredholmConfig":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AccuracyWarning)
            return replace(self, **changes)


# --------------------------------------------------------------------------
# kernels


def airy_kernel(x, y):
    """K_Ai(x, y) = int_0^inf Ai(x+z) Ai(y+z) dz, elementwise.

    Closed form (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y) away from the diagonal;
    within 1e-3 of it, the expansion about the midpoint m = (x+y)/2,
    K = Ai'(m)^2 - m Ai(m)^2 + h^2 (Ai Ai'/3 + 2(m Ai'^2 - m^2 Ai^2)/3), h = (x-y)/2,
    whose truncation error is O(h^4).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x, y = np.broadcast_arrays(x, y)
    ax, apx = airy_pair(x)
    ay, apy = airy_pair(y)
    d = x - y
    near = np.abs(d) < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(near, 0.0, (ax * apy - apx * ay) / np.where(near, 1.0, d))
    if np.any(near):
        m = 0.5 * (x[near] + y[near])
        h = 0.5 * d[near]
        am, apm = airy_pair(m)
        diag = apm**2 - m * am**2
        curv = am * apm / 3 + 2.0 / 3.0 * (m * apm**2 - m**2 * am**2)
        out = np.array(out, dtype=np.float64)
        out[near] = diag + h * h * curv
    return float(out) if out.ndim == 0 else out


def _upper_rule(t: float, cfg: FredholmConfig):
    rule = gauss_legendre(cfg.z_order, 0.0, cfg.effective_z_cutoff)
    return rule.nodes, rule.weights * np.exp(-rule.nodes * t)


def _lower_order(t: float, s_low: float, cfg: FredholmConfig) -> int:
    # nodes for -int_0^Z e^{-zt} Ai(x-z) Ai(y-z) dz: enough to follow the
    # oscillation of the product down to x - Z
    zc = cfg.effective_z_cutoff
    depth = max(zc - s_low, 0.0)
    phase = 4.0 / 3.0 * depth**1.5
    return max(cfg.z_order, int(math.ceil(0.6 * phase)) + 40)


def _lower_rule(t: float, s_low: float, cfg: FredholmConfig):
    rule = gauss_legendre(_lower_order(t, s_low, cfg), 0.0, cfg.effective_z_cutoff)
    return rule.nodes, rule.weights * np.exp(-rule.nodes * t)


def _split_rule(t: float, cfg: FredholmConfig):
    rule = gauss_legendre(max(cfg.z_order, 80), 0.0, SPLIT_Z)
    return rule.nodes, rule.weights * np.exp(rule.nodes * t)


def gaussian_full_line(x, y, t: float):
    """int_R e^{zt} Ai(x+z) Ai(y+z) dz for t > 0."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.exp(t**3 / 12 - (x + y) * t / 2 - (x - y) ** 2 / (4 * t)) / (2 * math.sqrt(math.pi * t))


def extended_entry(i: int, j: int, x: float, y: float, t: float, cfg: FredholmConfig | None = None) -> float:
    """One entry of the extended Airy kernel between times 0 (block 1) and t (block 2)."""
    if i not in (1, 2) or j not in (1, 2):
        raise InvalidArgument(f"block indices must be 1 or 2, got ({i}, {j})")
    if t < 0:
        raise InvalidArgument(f"t must be >= 0, got {t}")
    if cfg is None:
        cfg = FredholmConfig(t=t, s1=min(x, y), s2=min(x, y))
    if i == j or (t == 0 and i == 1):
        return airy_kernel(x, y)
    if t == 0:
        # the full-line integral is a delta function; only its off-diagonal part is a value
        if x == y:
            raise InvalidArgument("the (2, 1) block at t = 0 carries a delta function on the diagonal")
        return airy_kernel(x, y)
    if 0 < t < SMALL_T:
        warnings.warn(cfg.accuracy_warning or "", AccuracyWarning, stacklevel=2)
    if i == 1:
        z, w = _upper_rule(t, cfg)
        return float(np.dot(w, airy_pair(x + z)[0] * airy_pair(y + z)[0]))
    if not use_split(x, y, t, cfg):
        z, w = _lower_rule(t, min(x, y), cfg)
        return -float(np.dot(w, airy_pair(x - z)[0] * airy_pair(y - z)[0]))
    z, w = _split_rule(t, cfg)
    pos = float(np.dot(w, airy_pair(x + z)[0] * airy_pair(y + z)[0]))
    return pos - float(gaussian_full_line(x, y, t))


# --------------------------------------------------------------------------
# per-threshold blocks


@dataclass(frozen=True, eq=False)
class _Block:
    s: float
    x: np.ndarray
    r: np.ndarray
    kernel: np.ndarray  # r K_Ai r
    lu: LUSolver
    log_det: float  # log F2(s)
    sign: float

    @property
    def F2(self) -> float:
        return self.sign * math.exp(self.log_det) if self.sign else 0.0


@lru_cache(maxsize=4096)
def _block(s: float, hi: float, n: int) -> _Block:
    rule = gauss_legendre(n, s, hi)
    x = rule.nodes
    r = np.sqrt(rule.weights)
    k = r[:, None] * airy_kernel(x[:, None], x[None, :]) * r[None, :]
    m = np.eye(n) - k
    lu = LUSolver(m, pivot_tol=0.0)
    sign, ld = lu.log_determinant()
    return _Block(s, x, r, k, lu, ld, sign)


def _block_for(s: float, cfg: FredholmConfig) -> _Block:
    lo, hi = cfg.interval(s)
    return _block(lo, hi, int(cfg.quad_order))


def fredholm_F2(s: float, cfg: FredholmConfig | None = None) -> float:
    """F2(s) = det(I - K_Ai) on [s, infinity) by Nystrom."""
    cfg = cfg or FredholmConfig(s1=s, s2=s)
    return _block_for(float(s), cfg).F2


def _split_magnitude(x_plus_y: float, t: float) -> float:
    # size of the subtracted Gaussian term, which sets the cancellation error
    return math.exp(t**3 / 12 - x_plus_y * t / 2) / (2 * math.sqrt(math.pi * t))


def use_split(s1: float, s2: float, t: float, cfg: FredholmConfig) -> bool:
    """Whether K21 for thresholds (s1, s2) is assembled by the Gaussian split.

    The split is exact in exact arithmetic but cancels against a term of
    size M = exp(t^3/12 - (s1+s2) t/2) / (2 sqrt(pi t)).  The direct
    integral needs e^{-Z t} negligible, i.e. t Z >= ln(1e15) within the cap.
    """
    if t >= SPLIT_BELOW:
        return False
    direct_ok = t * cfg.effective_z_cutoff >= EXP_TAIL - 1e-9
    return not direct_ok or _split_magnitude(s1 + s2, t) <= SPLIT_MAGNITUDE


class _PairAssembler:
    """Off-diagonal blocks for a fixed t and z rules, with per-threshold caches."""

    def __init__(self, cfg: FredholmConfig, s_low: float):
        self.cfg = cfg
        self.t = cfg.t
        self.s_low = s_low
        self.zu, self.wu = _upper_rule(self.t, cfg)
        self._rules: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        self._samples_cache: dict[tuple[str, float], np.ndarray] = {}
        self._lock = threading.Lock()

    def _rule(self, kind: str):
        if kind not in self._rules:
            if kind == "up":
                self._rules[kind] = (self.zu, self.wu)
            elif kind == "split":
                self._rules[kind] = _split_rule(self.t, self.cfg)
            else:
                z, w = _lower_rule(self.t, self.s_low, self.cfg)
                self._rules[kind] = (-z, w)
        return self._rules[kind]

    def samples(self, kind: str, blk: _Block) -> np.ndarray:
        """r_i Ai(x_i + z_m) sqrt(w_m) for the named z rule."""
        key = (kind, blk.s)
        with self._lock:
            hit = self._samples_cache.get(key)
            if hit is None:
                z, w = self._rule(kind)
        if hit is not None:
            return hit
        val = blk.r[:, None] * airy_pair(blk.x[:, None] + z[None, :])[0] * np.sqrt(w)[None, :]
        with self._lock:
            self._samples_cache[key] = val
        return val

    def blocks(self, b1: _Block, b2: _Block) -> tuple[np.ndarray, np.ndarray]:
        """Weighted (K12, K21) on the nodes of b1 (rows of K12) and b2."""
        k12 = self.samples("up", b1) @ self.samples("up", b2).T
        if use_split(b1.s, b2.s, self.t, self.cfg):
            g = gaussian_full_line(b2.x[:, None], b1.x[None, :], self.t)
            k21 = self.samples("split", b2) @ self.samples("split", b1).T - b2.r[:, None] * g * b1.r[None, :]
        else:
            k21 = -(self.samples("low", b2) @ self.samples("low", b1).T)
        return k12, k21


def _direct(b1: _Block, b2: _Block, k12: np.ndarray, k21: np.ndarray) -> float:
    n1, n2 = len(b1.x), len(b2.x)
    m = np.empty((n1 + n2, n1 + n2))
    m[:n1, :n1] = np.eye(n1) - b1.kernel
    m[n1:, n1:] = np.eye(n2) - b2.kernel
    m[:n1, n1:] = -k12
    m[n1:, :n1] = -k21
    sign, ld = log_determinant(m)
    return sign * math.exp(ld) if sign else 0.0


def _factorized_excess(b1: _Block, b2: _Block, k12: np.ndarray, k21: np.ndarray) -> tuple[float, float]:
    """(F2(s1) F2(s2), joint - F2(s1) F2(s2)) via det(I - T12 T21)."""
    base = b1.F2 * b2.F2
    t12 = b1.lu.solve(k12)
    t21 = b2.lu.solve(k21)
    sign, ld = log_determinant(np.eye(len(b1.x)) - t12 @ t21)
    factor = math.expm1(ld) if sign > 0 else (-math.exp(ld) - 1.0 if sign < 0 else -1.0)
    return base, base * factor


# below this product the resolvent solves lose accuracy; the direct
# difference is then exact enough in absolute terms
_FACTORIZE_FLOOR = 1e-10


def _pair(assembler: _PairAssembler, b1: _Block, b2: _Block, route: str) -> tuple[float, float]:
    """(F2(s1) F2(s2), joint) for t > 0."""
    k12, k21 = assembler.blocks(b1, b2)
    base = b1.F2 * b2.F2
    if route == "direct" or base < _FACTORIZE_FLOOR:
        return base, _direct(b1, b2, k12, k21)
    base, excess = _factorized_excess(b1, b2, k12, k21)
    return base, base + excess


def _check_route(route: str):
    if route not in ("direct", "factorized"):
        raise InvalidArgument(f"route must be 'direct' or 'factorized', got {route!r}")


def joint_distribution(cfg: FredholmConfig, route: str = "direct") -> float:
    """P(A(0) <= s1, A(t) <= s2).

    ``route="direct"`` takes the determinant of the full block matrix;
    ``"factorized"`` uses F2(s1) F2(s2) det(I - T12 T21), T = (I - K)^{-1} L.
    At t = 0 both reduce to F2(min(s1, s2)).
    """
    _check_route(route)
    if cfg.t == 0:
        return fredholm_F2(min(cfg.s1, cfg.s2), cfg)
    b1 = _block_for(cfg.s1, cfg)
    b2 = _block_for(cfg.s2, cfg)
    assembler = _PairAssembler(cfg, min(cfg.s1, cfg.s2))
    k12, k21 = assembler.blocks(b1, b2)
    if route == "direct":
        return _direct(b1, b2, k12, k21)
    base, excess = _factorized_excess(b1, b2, k12, k21)
    return base + excess


def joint_excess(cfg: FredholmConfig) -> float:
    """joint - F2(s1) F2(s2), computed without cancellation where possible."""
    if cfg.t == 0:
        return fredholm_F2(min(cfg.s1, cfg.s2), cfg) - fredholm_F2(cfg.s1, cfg) * fredholm_F2(cfg.s2, cfg)
    b1 = _block_for(cfg.s1, cfg)
    b2 = _block_for(cfg.s2, cfg)
    assembler = _PairAssembler(cfg, min(cfg.s1, cfg.s2))
    base, joint = _pair(assembler, b1, b2, "factorized")
    if base < _FACTORIZE_FLOOR:
        return joint - base
    k12, k21 = assembler.blocks(b1, b2)
    return _factorized_excess(b1, b2, k12, k21)[1]


# --------------------------------------------------------------------------
# covariance


@dataclass(frozen=True)
class CovarianceGrid:
    """Excess values E[i, j] = joint(s_i, s_j) - F2(s_i) F2(s_j) on a tensor rule."""

    t: float
    nodes: np.ndarray
    weights: np.ndarray
    excess: np.ndarray

    @property
    def value(self) -> float:
        return float(self.weights @ self.excess @ self.weights)


def covariance_grid(
    t: float,
    cfg: FredholmConfig | None = None,
    order: int = COV_ORDER,
    box: tuple[float, float] = COV_BOX,
    jobs: int = 1,
) -> CovarianceGrid:
    """Tabulate the Hoeffding integrand on an order x order Gauss-Legendre grid.

    The joint law of the stationary, time-reversible Airy2 process is
    symmetric in (s1, s2), so only the upper triangle is computed.
    """
    if not t > 0:
        raise InvalidArgument(f"t must be positive, got {t}")
    cfg = (cfg or FredholmConfig()).with_(t=float(t), s1=box[0], s2=box[0])
    if cfg.cutoff is not None:
        # a shared cutoff must clear the top of the box
        cfg = cfg.with_(cutoff=max(cfg.cutoff, box[1] + 8))
    if 0 < t < SMALL_T:
        warnings.warn(cfg.accuracy_warning or "", AccuracyWarning, stacklevel=2)
    rule = gauss_legendre(order, *box)
    blocks = [_block_for(float(s), cfg) for s in rule.nodes]
    assembler = _PairAssembler(cfg, box[0])
    excess = np.zeros((order, order))

    def row(i: int):
        out = []
        for j in range(i, order):
            base, joint = _pair(assembler, blocks[i], blocks[j], "factorized")
            if base < _FACTORIZE_FLOOR:
                out.append(joint - base)
            else:
                k12, k21 = assembler.blocks(blocks[i], blocks[j])
                out.append(_factorized_excess(blocks[i], blocks[j], k12, k21)[1])
        return i, out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(row, range(order)))
    else:
        results = [row(i) for i in range(order)]
    for i, vals in results:
        excess[i, i:] = vals
        excess[i:, i] = vals
    return CovarianceGrid(float(t), rule.nodes, rule.weights, excess)


def covariance_exact(
    t: float,
    cfg: FredholmConfig | None = None,
    order: int = COV_ORDER,
    box: tuple[float, float] = COV_BOX,
    jobs: int = 1,
) -> float:
    """cov(A(0), A(t)) = double integral of joint - F2 F2 over box x box."""
    return covariance_grid(t, cfg, order, box, jobs).value


# --------------------------------------------------------------------------
# resolvent route to u_{j,k}


def resolvent_u(j: int, k: int, s: float, cfg: FredholmConfig | None = None) -> float:
    """u_{j,k}(s) = (Ai^(k), (I - K_Ai)^{-1} Ai^(j)) on [s, infinity) by Nystrom."""
    if j < 0 or k < 0 or j + k > 4:
        raise InvalidArgument(f"need j, k >= 0 and j + k <= 4, got ({j}, {k})")
    cfg = cfg or FredholmConfig(s1=s, s2=s)
    lo, hi = cfg.interval(float(s))
    rule = gauss_legendre(int(cfg.quad_order), lo, hi)
    x = rule.nodes
    r = np.sqrt(rule.weights)
    kmat = r[:, None] * airy_kernel(x[:, None], x[None, :]) * r[None, :]
    lu = LUSolver(np.eye(len(x)) - kmat)
    derivs = airy_derivatives(max(j, k), x)
    return float((r * derivs[k]) @ lu.solve(r * derivs[j]))
