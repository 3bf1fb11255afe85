"""Finite-dimensional operator realizations: matrices on C^N with l_q norms.

Provides resolvents, sector-positivity certificates, fractional powers via
eigendecomposition, the symmetric-system builder and a 1-D Dirichlet BVP
discretizer whose matrix serves as the abstract operator in scenarios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EllipticityFailure,
    NotDiagonalizable,
    NotPositiveDefinite,
    NotSymmetric,
    SpectrumHit,
    SpectrumNotSectorial,
)
from .sweep import SectorSweep

KAPPA_LIMIT = 1e6


@dataclass(frozen=True)
class NormBracket:
    """Certified two-sided bound on an operator norm; exact when lower == upper."""

    lower: float
    upper: float

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> float:
        if not self.exact:
            raise ValueError("norm bracket is not exact; use .lower / .upper")
        return self.upper


@dataclass(frozen=True)
class OperatorModel:
    """N x N complex matrix with spectral metadata and an l_q operator norm."""

    A: np.ndarray = field(repr=False)
    q: float = 2.0
    eigvals: np.ndarray = field(default=None, repr=False)
    eigvecs: np.ndarray = field(default=None, repr=False)
    kappa: float = None              # condition number of the eigenvector matrix
    symmetric: bool = False
    positive_definite: bool = False
    C0: float = None                 # smallest eigenvalue when SPD

    @property
    def N(self) -> int:
        return self.A.shape[0]

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Apply the matrix along the trailing component axis."""
        return np.einsum("ij,...j->...i", self.A, values)


@dataclass(frozen=True)
class PositivityCertificate:
    """Numerical witness for ||(A + lam)^-1|| <= M / (1 + |lam|) on a sector."""

    phi: float
    M: float
    sweep: SectorSweep
    worst_lambda: complex

    @property
    def finite(self) -> bool:
        return math.isfinite(self.M)


def make_model(A, q: float = 2.0) -> OperatorModel:
    """Build an OperatorModel, computing the diagonalization cache eagerly."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be a square matrix")
    scale = max(1.0, float(np.abs(A).max()))
    symmetric = bool(np.abs(A - A.T).max() <= 1e-12 * scale)
    hermitian = symmetric and bool(np.abs(A.imag).max() <= 1e-12 * scale)
    if hermitian:
        w, V = np.linalg.eigh(A.real)
        w = w.astype(complex)
        V = V.astype(complex)
        kappa = 1.0
    else:
        w, V = np.linalg.eig(A)
        kappa = float(np.linalg.cond(V))
    pd = hermitian and bool(w.real.min() > 0)
    C0 = float(w.real.min()) if pd else None
    return OperatorModel(A=A, q=q, eigvals=w, eigvecs=V, kappa=kappa,
                         symmetric=symmetric, positive_definite=pd, C0=C0)


def tridiagonal_matrix(N: int, lower: float, diag: float, upper: float) -> np.ndarray:
    A = np.zeros((N, N))
    np.fill_diagonal(A, diag)
    idx = np.arange(N - 1)
    A[idx + 1, idx] = lower
    A[idx, idx + 1] = upper
    return A


def operator_norm(mat, q: float) -> NormBracket:
    """l_q -> l_q operator norm; exact for q in {1, 2, inf}.

    Other exponents get a lower bound from vector maximization and an upper
    bound from Riesz-Thorin interpolation between the exact exponents.
    """
    mat = np.asarray(mat, dtype=complex)
    if q == 1:
        v = float(np.abs(mat).sum(axis=0).max())
        return NormBracket(v, v)
    if q == np.inf:
        v = float(np.abs(mat).sum(axis=1).max())
        return NormBracket(v, v)
    if q == 2:
        v = float(np.linalg.norm(mat, 2))
        return NormBracket(v, v)
    if not 1 < q < np.inf:
        raise ValueError("q must lie in [1, inf]")
    n1 = np.abs(mat).sum(axis=0).max()
    n2 = np.linalg.norm(mat, 2)
    ninf = np.abs(mat).sum(axis=1).max()
    if q < 2:
        theta = 2.0 * (1.0 - 1.0 / q)
        upper = float(n1 ** (1 - theta) * n2**theta)
    else:
        theta = 1.0 - 2.0 / q
        upper = float(n2 ** (1 - theta) * ninf**theta)
    rng = np.random.default_rng(0)
    N = mat.shape[1]
    probes = rng.standard_normal((256, N)) + 1j * rng.standard_normal((256, N))
    probes = np.concatenate([probes, np.eye(N)], axis=0)
    num = np.abs(probes @ mat.T)
    lo = 0.0
    for v, av in zip(probes, num):
        nv = float((np.abs(v) ** q).sum() ** (1 / q))
        if nv > 0:
            lo = max(lo, float((av**q).sum() ** (1 / q)) / nv)
    return NormBracket(min(lo, upper), upper)


def resolvent(model: OperatorModel, lam: complex) -> np.ndarray:
    """(A + lam I)^-1 by direct solve; rejects lam within roundoff of -spectrum."""
    lam = complex(lam)
    scale = max(1.0, float(np.abs(model.A).max()))
    if model.eigvals is not None:
        dist = float(np.abs(model.eigvals + lam).min())
        if dist <= 1e-12 * scale:
            raise SpectrumHit(f"-lambda = {-lam} within tolerance of the spectrum")
    N = model.N
    R = np.linalg.solve(model.A + lam * np.eye(N), np.eye(N, dtype=complex))
    residual = np.abs((model.A + lam * np.eye(N)) @ R - np.eye(N)).max()
    if residual > 1e-10 * max(1.0, abs(lam)):
        raise SpectrumHit(f"resolvent residual {residual:.2e} too large at lambda={lam}")
    return R


def check_positivity(model: OperatorModel, phi: float, sweep: SectorSweep) -> PositivityCertificate:
    """Certify M = sup (1 + |lam|) ||(A + lam)^-1||_q over the sampled sector.

    lam = 0 is always included (the sector contains the origin).
    """
    if any(abs(r) > phi + 1e-12 for r in sweep.rays):
        raise ValueError("sweep rays must lie within [-phi, phi]")
    best = -np.inf
    worst = 0.0 + 0.0j
    for lam in [0.0 + 0.0j] + sweep.lambdas():
        R = resolvent(model, lam)
        val = (1.0 + abs(lam)) * operator_norm(R, model.q).upper
        if val > best:
            best = val
            worst = lam
    return PositivityCertificate(phi=phi, M=float(best), sweep=sweep, worst_lambda=worst)


def fractional_power(model: OperatorModel, theta: float) -> np.ndarray:
    """A^theta = V diag(eig^theta) V^-1 with the principal branch.

    Requires a well-conditioned eigenbasis and spectrum in the open right
    half-plane (except theta >= 0 integer powers, which are polynomial anyway).
    """
    if model.eigvals is None or model.eigvecs is None:
        raise NotDiagonalizable("model carries no diagonalization cache")
    if model.kappa is None or model.kappa >= KAPPA_LIMIT:
        raise NotDiagonalizable(f"eigenvector condition {model.kappa} >= {KAPPA_LIMIT}")
    if model.eigvals.real.min() <= 0:
        raise SpectrumNotSectorial("eigenvalue with nonpositive real part")
    powered = model.eigvals**theta
    V = model.eigvecs
    return V @ np.diag(powered) @ np.linalg.inv(V)


def build_system(a) -> OperatorModel:
    """Validate a symmetric positive-definite coefficient matrix a_ij.

    Reports the ellipticity constant C0 (smallest eigenvalue) on the model.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("system matrix must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError("system entries must be finite")
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.T).max() > 1e-12 * scale:
        raise NotSymmetric("a_ij != a_ji")
    w = np.linalg.eigvalsh(a)
    if w.min() <= 0:
        raise NotPositiveDefinite(f"smallest eigenvalue {w.min():.6g} <= 0")
    return make_model(a)


def build_bvp_operator(K: int, ell: float, b2, b1=None, b0=None,
                       q: float = 2.0) -> OperatorModel:
    """Central-difference Dirichlet matrix for -b2(y) u'' + b1(y) u' + b0(y) u.

    K counts grid points including the two boundary points; the returned
    matrix acts on the K-2 interior values with boundary rows eliminated.
    """
    if K < 3:
        raise ValueError("K must be at least 3")
    if ell <= 0:
        raise ValueError("interval length must be positive")
    h = ell / (K - 1)
    y = h * np.arange(1, K - 1)

    def sample(fn, default):
        if fn is None:
            return np.full(K - 2, default)
        if np.isscalar(fn):
            return np.full(K - 2, float(fn))
        return np.array([float(fn(yi)) for yi in y])

    c2 = sample(b2, 1.0)
    c1 = sample(b1, 0.0)
    c0 = sample(b0, 0.0)
    if np.any(c2 <= 0):
        raise EllipticityFailure("leading coefficient b2 must be uniformly positive")

    Nint = K - 2
    A = np.zeros((Nint, Nint))
    np.fill_diagonal(A, 2.0 * c2 / h**2 + c0)
    for i in range(Nint - 1):
        A[i, i + 1] = -c2[i] / h**2 + c1[i] / (2.0 * h)
        A[i + 1, i] = -c2[i + 1] / h**2 - c1[i + 1] / (2.0 * h)
    model = make_model(A, q=q)
    return model
