"""Parameter-dependent symbol families and the fractional-frequency multiplier.

The central object is the scalar symbol P_t(xi), a positive-order function of
the frequency vector xi weighted by per-axis scale parameters t_k.  The
module also provides the branch of (i*xi)^alpha used to define fractional
derivatives in frequency space, a numerical symbol-class checker, and the
sector sum constant |lam + nu| >= C (|lam| + |nu|).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AngleSumTooLarge, NonFiniteDerivative, OutOfTable

SYMBOL_KINDS = ("power", "rotated-power", "smoothed-power", "user-table")


@dataclass(frozen=True)
class MultiIndex:
    """Nonnegative real multi-index alpha = (alpha_1, ..., alpha_n)."""

    components: tuple

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        if any(c < 0 for c in comps):
            raise ValueError(f"multi-index components must be >= 0, got {comps}")
        object.__setattr__(self, "components", comps)

    @property
    def order(self) -> float:
        return float(sum(self.components))

    @property
    def n(self) -> int:
        return len(self.components)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if len(self.components) != len(other.components):
            raise ValueError("multi-index dimension mismatch")
        return MultiIndex(tuple(a + b for a, b in zip(self.components, other.components)))

    def __iter__(self):
        return iter(self.components)


@dataclass(frozen=True)
class Sector:
    """Closed sector S_phi = {z : |arg z| <= phi} plus the origin."""

    angle: float

    def __post_init__(self):
        if not 0.0 <= self.angle < math.pi:
            raise ValueError(f"sector angle must lie in [0, pi), got {self.angle}")

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        z = complex(z)
        if abs(z) <= tol:
            return True
        return abs(cmath.phase(z)) <= self.angle + tol


@dataclass(frozen=True)
class ScaleParams:
    """Positive per-axis scale parameters t = (t_1, ..., t_n) capped by t0."""

    t: tuple
    t0: float = 1.0

    def __post_init__(self):
        t = tuple(float(v) for v in self.t)
        if self.t0 <= 0:
            raise ValueError("cap t0 must be positive")
        if any(v <= 0 or v > self.t0 + 1e-15 for v in t):
            raise ValueError(f"scale parameters must lie in (0, t0={self.t0}], got {t}")
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return len(self.t)

    def weight(self, alpha: MultiIndex, m: float) -> float:
        """Anisotropic weight t(alpha) = prod_k t_k^(alpha_k / m)."""
        return float(np.prod([tk ** (ak / m) for tk, ak in zip(self.t, alpha)]))

    @classmethod
    def isotropic(cls, value: float, n: int, t0: float = None) -> "ScaleParams":
        cap = t0 if t0 is not None else max(1.0, value)
        return cls((value,) * n, t0=cap)


@dataclass(frozen=True)
class SymbolSpec:
    """A parametric symbol family.

    kind:
      power           sum_k t_k |xi_k|^m        (nonnegative real, angle 0)
      rotated-power   e^{i theta0} * power      (|theta0| <= phi1)
      smoothed-power  sum_k t_k (eps^2 + xi_k^2)^(m/2)
      user-table      1-D table (xi_points, values), linear interpolation
    """

    kind: str
    m: float
    phi1: float = 0.0
    theta0: float = 0.0
    epsilon: float = 0.0
    gamma: float = 1.0
    table: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in SYMBOL_KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.m <= 0:
            raise ValueError("order m must be positive")
        if not 0.0 <= self.phi1 < math.pi:
            raise ValueError("phi1 must lie in [0, pi)")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.kind == "rotated-power" and abs(self.theta0) > self.phi1 + 1e-15:
            raise ValueError("rotated-power requires |theta0| <= phi1")
        if self.kind == "user-table" and self.table is None:
            raise ValueError("user-table kind requires a table")


def power_symbol(m: float = 2.0, gamma: float = 1.0) -> SymbolSpec:
    return SymbolSpec(kind="power", m=m, gamma=gamma, phi1=0.0)


def rotated_power_symbol(m: float, theta0: float, gamma: float = 1.0) -> SymbolSpec:
    return SymbolSpec(kind="rotated-power", m=m, theta0=theta0, phi1=abs(theta0), gamma=gamma)


def smoothed_power_symbol(m: float, epsilon: float, gamma: float = 1.0) -> SymbolSpec:
    return SymbolSpec(kind="smoothed-power", m=m, epsilon=epsilon, gamma=gamma, phi1=0.0)


def i_xi_power_factor(xi, alpha_k: float):
    """One axis factor (i*xi_k)^alpha_k = exp[alpha_k (ln|xi_k| + i pi sgn(xi_k)/2)].

    Vectorized over xi.  Returns 1 for alpha_k = 0, and 0 where xi vanishes
    with alpha_k > 0 (the factor-wise zero convention).
    """
    xi = np.asarray(xi, dtype=float)
    if alpha_k == 0:
        return np.ones_like(xi, dtype=complex)
    out = np.zeros(xi.shape, dtype=complex)
    nz = xi != 0
    out[nz] = np.exp(
        alpha_k * (np.log(np.abs(xi[nz])) + 1j * (np.pi / 2.0) * np.sign(xi[nz]))
    )
    return out


def i_xi_power(xi, alpha) -> complex:
    """Product over axes of (i*xi_k)^alpha_k with the logarithmic branch.

    xi is a scalar or a frequency vector; alpha a scalar order, sequence or
    MultiIndex of matching length.  A vanishing coordinate with positive order
    makes the whole product zero; alpha = 0 gives 1 at every point.
    """
    xi_vec = np.atleast_1d(np.asarray(xi, dtype=float))
    if isinstance(alpha, MultiIndex):
        alpha_vec = alpha.components
    else:
        alpha_vec = np.atleast_1d(np.asarray(alpha, dtype=float))
    if len(xi_vec) != len(alpha_vec):
        raise ValueError("xi and alpha must have the same length")
    out = complex(1.0)
    for xk, ak in zip(xi_vec, alpha_vec):
        out *= complex(i_xi_power_factor(np.array([xk]), float(ak))[0])
        if out == 0:
            return 0.0 + 0.0j
    return out


def eval_symbol(spec: SymbolSpec, t: ScaleParams, xi):
    """Evaluate P_t(xi).  xi has shape (..., n); broadcasts over leading axes."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        xi = xi.reshape(1)
    if xi.shape[-1] != t.n:
        raise ValueError(f"frequency dimension {xi.shape[-1]} != len(t) = {t.n}")
    tvec = np.asarray(t.t)
    if spec.kind == "power":
        vals = np.sum(tvec * np.abs(xi) ** spec.m, axis=-1)
        return vals if vals.ndim else complex(vals)
    if spec.kind == "rotated-power":
        base = np.sum(tvec * np.abs(xi) ** spec.m, axis=-1)
        vals = np.exp(1j * spec.theta0) * base
        return vals if vals.ndim else complex(vals)
    if spec.kind == "smoothed-power":
        vals = np.sum(tvec * (spec.epsilon**2 + xi**2) ** (spec.m / 2.0), axis=-1)
        return vals if vals.ndim else complex(vals)
    # user-table: 1-D only, linear interpolation, strict range
    if t.n != 1:
        raise ValueError("user-table symbols are one-dimensional")
    pts, values = spec.table
    pts = np.asarray(pts, dtype=float)
    values = np.asarray(values)
    x = xi[..., 0]
    if np.any(x < pts[0]) or np.any(x > pts[-1]):
        raise OutOfTable(f"frequency outside tabulated range [{pts[0]}, {pts[-1]}]")
    re = np.interp(x, pts, values.real)
    im = np.interp(x, pts, values.imag)
    vals = re + 1j * im
    return vals if vals.ndim else complex(vals)


@dataclass
class SymbolClassReport:
    """Outcome of the symbol-class check for one spec over sampled (t, xi)."""

    constants: dict          # beta tuple -> smallest admissible C_beta
    sector_ok: bool
    lower_margin: float      # min |P| / (gamma * sum t_k |xi_k|^m)
    samples: int

    @property
    def verdict(self) -> bool:
        finite = all(np.isfinite(c) for c in self.constants.values())
        return finite and self.sector_ok and self.lower_margin >= 1.0 - 1e-9


def _finite_difference(spec, t, xi, beta, h):
    """Central finite difference D^beta P at one point xi (beta in {0,1}^n)."""
    axes = [k for k, b in enumerate(beta) if b]
    if not axes:
        return eval_symbol(spec, t, xi)
    total = 0.0 + 0.0j
    for signs in np.ndindex(*([2] * len(axes))):
        shifted = np.array(xi, dtype=float)
        coeff = 1.0
        for ax, s in zip(axes, signs):
            sgn = 1.0 if s == 0 else -1.0
            shifted[ax] += sgn * h[ax]
            coeff *= sgn / (2.0 * h[ax])
        total += coeff * complex(eval_symbol(spec, t, shifted))
    return total


def check_symbol_class(spec: SymbolSpec, t_grid, xi_grid, betas=None,
                       fd_scale: float = 1e-4) -> SymbolClassReport:
    """Estimate the symbol-class constants C_beta by finite differences.

    For each derivative order beta in {0,1}^n the bound reads
    |D^beta P_t(xi)| <= C_beta [1 + (sum_k t_k^(2/(m-|beta|)) xi_k^2)^(1/2)]^(m-|beta|);
    the report carries the smallest C_beta valid over every sampled (t, xi),
    sector membership of every value, and the lower-bound margin against
    gamma * sum_k t_k |xi_k|^m.
    """
    xi_grid = np.atleast_2d(np.asarray(xi_grid, dtype=float))
    n = xi_grid.shape[1]
    if betas is None:
        betas = [tuple(b) for b in np.ndindex(*([2] * n))]
    sector = Sector(spec.phi1)

    constants = {tuple(b): 0.0 for b in betas}
    sector_ok = True
    margin = np.inf
    count = 0
    for t in t_grid:
        tvec = np.asarray(t.t)
        for xi in xi_grid:
            h = fd_scale * (1.0 + np.abs(xi))
            count += 1
            val = complex(eval_symbol(spec, t, xi))
            if not sector.contains(val, tol=1e-9):
                sector_ok = False
            denom = spec.gamma * float(np.sum(tvec * np.abs(xi) ** spec.m))
            if denom > 0:
                margin = min(margin, abs(val) / denom)
            for beta in betas:
                order = sum(beta)
                if any(beta[k] and abs(xi[k]) < 10.0 * h[k] for k in range(n)):
                    continue  # finite differences would straddle xi_k = 0
                d = _finite_difference(spec, t, xi, beta, h)
                if not np.isfinite(d):
                    raise NonFiniteDerivative(
                        f"derivative D^{beta} diverged at xi={xi}, t={t.t}")
                e = spec.m - order
                if e > 0:
                    bracket = (1.0 + math.sqrt(
                        float(np.sum(tvec ** (2.0 / e) * xi**2)))) ** e
                else:
                    bracket = 1.0
                constants[beta] = max(constants[beta], abs(d) / bracket)
    if not np.isfinite(margin):
        margin = 1.0  # no sample had a nonzero lower bound to compare against
    return SymbolClassReport(constants=constants, sector_ok=sector_ok,
                             lower_margin=float(margin), samples=count)


def sector_sum_constant(phi1: float, phi2: float, samples: int = 100_000) -> float:
    """Smallest sampled |lam + nu| / (|lam| + |nu|) over the two sector boundaries.

    Requires phi1 + phi2 < pi.  The minimum is attained with lam and nu on the
    extreme opposing rays at equal modulus, so that configuration is always
    among the samples; the analytic value is cos((phi1 + phi2)/2).
    """
    if phi1 + phi2 >= math.pi:
        raise AngleSumTooLarge(f"phi1 + phi2 = {phi1 + phi2} >= pi")
    # boundary rays of each sector, crossed with log-spaced modulus ratios
    per_axis = max(4, int(round(math.sqrt(samples / 16.0))))
    a1 = np.linspace(-phi1, phi1, per_axis) if phi1 > 0 else np.array([0.0])
    a2 = np.linspace(-phi2, phi2, per_axis) if phi2 > 0 else np.array([0.0])
    # boundary angles must be present exactly
    a1 = np.union1d(a1, [-phi1, phi1])
    a2 = np.union1d(a2, [-phi2, phi2])
    ratios = np.union1d(np.logspace(-3, 3, 25), [1.0])
    th1, th2, r = np.meshgrid(a1, a2, ratios, indexing="ij")
    lam = np.exp(1j * th1)
    nu = r * np.exp(1j * th2)
    vals = np.abs(lam + nu) / (np.abs(lam) + np.abs(nu))
    return float(vals.min())


def symbol_to_config(spec: SymbolSpec) -> dict:
    return {
        "kind": spec.kind,
        "m": spec.m,
        "theta0": spec.theta0,
        "epsilon": spec.epsilon,
        "gamma": spec.gamma,
        "phi1": spec.phi1,
    }


def symbol_from_config(cfg: dict) -> SymbolSpec:
    known = {"kind", "m", "theta0", "epsilon", "gamma", "phi1"}
    unknown = set(cfg) - known
    if unknown:
        raise ValueError(f"unknown symbol config keys: {sorted(unknown)}")
    return SymbolSpec(
        kind=cfg["kind"],
        m=float(cfg["m"]),
        theta0=float(cfg.get("theta0", 0.0)),
        epsilon=float(cfg.get("epsilon", 0.0)),
        gamma=float(cfg.get("gamma", 1.0)),
        phi1=float(cfg.get("phi1", abs(cfg.get("theta0", 0.0)))),
    )
