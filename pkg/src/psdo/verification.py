"""Empirical harness for the uniform estimates: coercivity and resolvent
sweeps over the spectral sector and scale parameters, multiplier-family
boundedness, and randomized-sign (Rademacher) lower bounds on R-bounds.

Constants reported here are artifacts of this implementation (the underlying
estimates are existential); sweeps check finiteness and flatness across
parameter decades, which is the testable content of uniformity.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np
from scipy import optimize

from .elliptic import (
    EllipticProblem,
    _relative_residual,
    coercive_index_set,
    solve_principal,
)
from .errors import TooManyForEnumeration
from .operators import OperatorModel, operator_norm, resolvent
from .spaces import (
    GridSpec,
    SampledField,
    gaussian_field,
    liouville_derivative,
    lp_lq_norm,
    mode_field,
    random_band_limited_field,
    vector_norms,
)
from .sweep import SectorSweep, default_sweep  # noqa: F401  (re-exported)
from .symbols import MultiIndex, ScaleParams, SymbolSpec, eval_symbol, i_xi_power

DEFAULT_FLATNESS = {"coercivity": 1.5, "resolvent": 2.0}


# ---------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    """Per-sweep-point records plus summary statistics and a verdict."""

    kind: str
    points: list = field(default_factory=list)   # dicts: ray, radius, t, ratio, residual, error
    max_ratio: float = None
    median_ratio: float = None
    flatness: float = None
    worst: dict = None
    flatness_threshold: float = None
    max_ratio_threshold: float = None
    status: str = "not-applicable"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "summary": {
                "max_ratio": self.max_ratio,
                "median_ratio": self.median_ratio,
                "flatness": self.flatness,
                "worst": self.worst,
                "flatness_threshold": self.flatness_threshold,
                "max_ratio_threshold": self.max_ratio_threshold,
                "status": self.status,
            },
            "points": self.points,
            "details": self.details,
        }


def _summarize(report: VerificationReport) -> VerificationReport:
    ok = [p for p in report.points if p.get("error") is None]
    if not ok:
        report.status = "not-applicable" if not report.points else "fail"
        return report
    ratios = np.array([p["ratio"] for p in ok])
    report.max_ratio = float(ratios.max())
    report.median_ratio = float(np.median(ratios))
    report.flatness = float(report.max_ratio / report.median_ratio) \
        if report.median_ratio > 0 else math.inf
    report.worst = dict(ok[int(ratios.argmax())])
    failed = len(report.points) - len(ok)
    verdict = failed == 0 and np.all(np.isfinite(ratios))
    if report.flatness_threshold is not None:
        verdict = verdict and report.flatness <= report.flatness_threshold
    if report.max_ratio_threshold is not None:
        verdict = verdict and report.max_ratio <= report.max_ratio_threshold
    report.status = "pass" if verdict else "fail"
    return report


# ---------------------------------------------------------------------------
# coercivity / resolvent sweeps


@dataclass(frozen=True)
class ProblemTemplate:
    """Everything but (lambda, t): instantiated at each sweep point."""

    model: OperatorModel
    symbol: SymbolSpec
    grid: GridSpec
    p: float = 2.0
    index_set: tuple = None

    def indices(self):
        if self.index_set is not None:
            return list(self.index_set)
        return coercive_index_set(self.grid.n, self.symbol.m)

    def problem(self, lam: complex, t: ScaleParams) -> EllipticProblem:
        return EllipticProblem(model=self.model, symbol=self.symbol, t=t,
                               lam=lam, grid=self.grid)


def coercive_ratio(u: SampledField, f: SampledField, model: OperatorModel,
                   t: ScaleParams, lam: complex, m: float, p: float = 2.0,
                   index_set=None) -> float:
    """[sum_alpha t(alpha) |lam|^(1-|alpha|/m) ||D^alpha u|| + ||A u||] / ||f||."""
    nf = lp_lq_norm(f, p)
    if nf == 0:
        raise ZeroDivisionError("coercive ratio undefined for f = 0")
    if index_set is None:
        index_set = coercive_index_set(u.grid.n, m)
    total = 0.0
    for alpha in index_set:
        w = t.weight(alpha, m) * abs(lam) ** (1.0 - alpha.order / m)
        if w == 0:
            continue
        du = liouville_derivative(u, alpha, check_nyquist=False)
        total += w * lp_lq_norm(du, p)
    Au = u.with_values(model.apply(u.values))
    total += lp_lq_norm(Au, p)
    return total / nf


def _worst_mode_data(prob: EllipticProblem, index_set, p: float) -> SampledField:
    """Single lattice mode maximizing the per-mode coercive bound."""
    grid = prob.grid
    xi = grid.frequency_mesh().reshape(-1, grid.n)
    P = prob.symbol_values().reshape(-1)
    m = prob.symbol.m
    N = prob.model.N
    eye = np.eye(N, dtype=complex)
    nyq = grid.nyquist_mask().reshape(-1)
    best_score, best_idx, best_vec = -1.0, 0, None
    for k in range(xi.shape[0]):
        if nyq[k]:
            continue
        B = np.linalg.inv(prob.model.A + (prob.lam + P[k]) * eye)
        weights = 0.0
        for alpha in index_set:
            w = prob.t.weight(alpha, m) * abs(prob.lam) ** (1.0 - alpha.order / m)
            weights += w * abs(i_xi_power(xi[k], alpha))
        score = weights * operator_norm(B, prob.model.q).upper \
            + operator_norm(prob.model.A @ B, prob.model.q).upper
        if score > best_score:
            best_score, best_idx = score, k
            _, _, vh = np.linalg.svd(B)
            best_vec = vh[0].conj()
    return mode_field(grid, xi[best_idx], best_vec, q=prob.model.q)


def _sweep_data(prob: EllipticProblem, index_set, p: float, count: int, rng):
    fields = [gaussian_field(prob.grid, vector=np.ones(prob.model.N), q=prob.model.q),
              _worst_mode_data(prob, index_set, p)]
    while len(fields) < count:
        fields.append(random_band_limited_field(prob.grid, prob.model.N, rng,
                                                q=prob.model.q))
    return fields


def _point_meta(lam: complex, t: ScaleParams) -> dict:
    return {
        "ray": cmath.phase(lam) if lam != 0 else 0.0,
        "radius": abs(lam),
        "t": list(t.t),
    }


def _saturation_frequency(lam: complex, t: ScaleParams, m: float) -> float:
    """Frequency magnitude where the symbol balances the spectral shift.

    The estimate terms peak near t_k |xi_k|^m ~ |lam|; a sweep grid must
    resolve that scale or every large-|lam| point degenerates to ratio ~ 1.
    """
    r = max(abs(lam), 1.0)
    return max((r / tk) ** (1.0 / m) for tk in t.t)


def _adapted_grid(grid: GridSpec, lam: complex, t: ScaleParams, m: float,
                  span: float = 4.0) -> GridSpec:
    """Rescale the box so the lattice reaches `span` times the peak frequency."""
    xi_star = _saturation_frequency(lam, t, m)
    L = math.pi * grid.M / (span * xi_star)
    return GridSpec(n=grid.n, M=grid.M, L=L)


def coercivity_sweep(template: ProblemTemplate, sweep: SectorSweep,
                     data_count: int = 8, seed: int = 0, threads: int = 1,
                     flatness_threshold: float = None,
                     max_ratio_threshold: float = None,
                     adapt_grid: bool = True) -> VerificationReport:
    """Solve and measure the coercive ratio at every (lambda, t) sweep point.

    With adapt_grid the box length is rescaled per point so that the lattice
    resolves the saturation frequency (|lam| / t_k)^(1/m); data fields are
    generated on the adapted grid.
    """
    index_set = template.indices()
    points = sweep.points()
    flat = DEFAULT_FLATNESS["coercivity"] if flatness_threshold is None else flatness_threshold
    m = template.symbol.m

    def evaluate(item):
        idx, (lam, t) = item
        rng = np.random.default_rng((seed, idx))
        rec = _point_meta(lam, t)
        try:
            grid = _adapted_grid(template.grid, lam, t, m) if adapt_grid else template.grid
            prob = EllipticProblem(model=template.model, symbol=template.symbol,
                                   t=t, lam=lam, grid=grid)
            worst_ratio, worst_res = 0.0, 0.0
            for f in _sweep_data(prob, index_set, template.p, data_count, rng):
                u = solve_principal(prob, f)
                r = coercive_ratio(u, f, template.model, t, lam, m,
                                   template.p, index_set)
                worst_res = max(worst_res, _relative_residual(prob, u, f))
                worst_ratio = max(worst_ratio, r)
            rec.update(ratio=worst_ratio, residual=worst_res, error=None)
        except Exception as exc:  # recorded, not raised: one bad point fails the verdict
            rec.update(ratio=None, residual=None, error=f"{type(exc).__name__}: {exc}")
        return rec

    records = _run_points(evaluate, list(enumerate(points)), threads)
    report = VerificationReport(kind="coercivity", points=records,
                                flatness_threshold=flat,
                                max_ratio_threshold=max_ratio_threshold)
    return _summarize(report)


def _adapted_xi_samples(lam: complex, t: ScaleParams, m: float, n: int,
                        per_axis: int = 33, decades_below: float = 4.0) -> np.ndarray:
    """Signed log-spaced frequencies reaching past the saturation scale."""
    xi_star = _saturation_frequency(lam, t, m)
    mags = np.logspace(math.log10(xi_star) - decades_below,
                       math.log10(xi_star) + 1.0, per_axis)
    vals = np.concatenate([-mags[::-1], mags])
    if n == 1:
        return vals[:, None]
    out = []
    for ax in range(n):
        pts = np.zeros((len(vals), n))
        pts[:, ax] = vals
        out.append(pts)
    diag = np.repeat(vals[:, None], n, axis=1)
    out.append(diag)
    return np.concatenate(out, axis=0)


def resolvent_sweep(template: ProblemTemplate, sweep: SectorSweep,
                    per_axis: int = 33, seed: int = 0, threads: int = 1,
                    flatness_threshold: float = None,
                    max_ratio_threshold: float = None) -> VerificationReport:
    """Summed resolvent estimate probed with plane waves.

    Per sweep point the sum over derivative orders of
    t(alpha) |lam|^(1-|alpha|/m) ||D^alpha (O_t + lam)^-1|| plus
    ||A (O_t + lam)^-1|| is measured; each term is a Fourier multiplier whose
    action on the plane wave e^{i xi x} v is exact, so the term norms are the
    suprema over sampled frequencies (log-spaced through the saturation
    scale) of the per-frequency matrix norms.  The residual column carries
    the worst per-frequency inversion defect.
    """
    index_set = template.indices()
    points = sweep.points()
    flat = DEFAULT_FLATNESS["resolvent"] if flatness_threshold is None else flatness_threshold
    m = template.symbol.m
    model = template.model
    n = template.grid.n
    eye = np.eye(model.N, dtype=complex)

    def evaluate(item):
        idx, (lam, t) = item
        rec = _point_meta(lam, t)
        try:
            xi_samples = _adapted_xi_samples(lam, t, m, n, per_axis)
            terms = [0.0] * len(index_set)
            aterm = 0.0
            worst_res = 0.0
            for xi in xi_samples:
                P = complex(eval_symbol(template.symbol, t, xi))
                mat = model.A + (lam + P) * eye
                B = np.linalg.inv(mat)
                worst_res = max(worst_res, float(np.abs(mat @ B - eye).max()))
                nB = operator_norm(B, model.q).upper
                for i, alpha in enumerate(index_set):
                    w = t.weight(alpha, m) * abs(lam) ** (1.0 - alpha.order / m)
                    terms[i] = max(terms[i], w * abs(i_xi_power(xi, alpha)) * nB)
                aterm = max(aterm, operator_norm(model.A @ B, model.q).upper)
            rec.update(ratio=sum(terms) + aterm, residual=worst_res, error=None)
        except Exception as exc:
            rec.update(ratio=None, residual=None, error=f"{type(exc).__name__}: {exc}")
        return rec

    records = _run_points(evaluate, list(enumerate(points)), threads)
    report = VerificationReport(kind="resolvent", points=records,
                                flatness_threshold=flat,
                                max_ratio_threshold=max_ratio_threshold)
    return _summarize(report)


def _run_points(evaluate, items, threads: int):
    if threads <= 1:
        return [evaluate(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(evaluate, items))  # ordered merge keeps determinism


# ---------------------------------------------------------------------------
# Rademacher machinery


def _sign_patterns(m: int, mode: str, trials: int, seed: int) -> np.ndarray:
    if mode == "enumerate":
        if m > 20:
            raise TooManyForEnumeration(f"2^{m} sign patterns is too many to enumerate")
        bits = (np.arange(2**m)[:, None] >> np.arange(m)) & 1
        return 2 * bits - 1
    rng = np.random.default_rng(seed)
    return rng.choice([-1, 1], size=(trials, m))


def rademacher_average(operators, vectors, q: float = 2.0, mode: str = "enumerate",
                       trials: int = 4096, seed: int = 0):
    """Averaged randomized-sign norms (numerator with operators applied,
    denominator without): the building block of R-bound estimation."""
    if len(operators) != len(vectors) or not operators:
        raise ValueError("need equally many operators and vectors, at least one")
    ops = [np.atleast_2d(np.asarray(T, dtype=complex)) for T in operators]
    us = np.stack([np.atleast_1d(np.asarray(u, dtype=complex)) for u in vectors])
    Tu = np.stack([T @ u for T, u in zip(ops, us)])
    signs = _sign_patterns(len(ops), mode, trials, seed).astype(complex)
    num = float(np.mean(vector_norms(np.tensordot(signs, Tu, axes=(1, 0)), q)))
    den = float(np.mean(vector_norms(np.tensordot(signs, us, axes=(1, 0)), q)))
    return num, den


def _ratio_objective(ops, q, x):
    """Rademacher ratio as a function of stacked real coordinates."""
    m = len(ops)
    N = ops[0].shape[0]
    vecs = x.reshape(m, 2, N)
    us = vecs[:, 0, :] + 1j * vecs[:, 1, :]
    num, den = rademacher_average(ops, list(us), q=q, mode="enumerate")
    if den == 0:
        return 0.0
    return num / den


def _maximize_tuple(ops, q: float, seed: int, restarts: int = 4) -> float:
    """Best Rademacher ratio over probe vectors for a fixed operator tuple.

    Deterministic given (ops, q, seed) and independent of any enclosing
    family, so enlarging a family can only enlarge the resulting estimate.
    """
    m = len(ops)
    N = ops[0].shape[0]
    rng = np.random.default_rng(seed)
    starts = []
    # each slot seeded with its operator's leading right singular vector
    sv = np.zeros((m, 2, N))
    for j, T in enumerate(ops):
        v = np.linalg.svd(T)[2][0].conj()
        sv[j, 0], sv[j, 1] = v.real, v.imag
    starts.append(sv.ravel())
    for _ in range(restarts):
        starts.append(rng.standard_normal(m * 2 * N))
    cloud = rng.standard_normal((64, m * 2 * N))
    vals = np.array([_ratio_objective(ops, q, x) for x in cloud])
    starts.append(cloud[int(vals.argmax())])
    best, best_x = 0.0, starts[0]
    for x0 in starts:
        res = optimize.minimize(lambda x: -_ratio_objective(ops, q, x), x0,
                                method="Nelder-Mead",
                                options={"maxiter": 2000, "xatol": 1e-9, "fatol": 1e-12})
        if -float(res.fun) > best:
            best, best_x = -float(res.fun), res.x
    polish = optimize.minimize(lambda x: -_ratio_objective(ops, q, x), best_x,
                               method="L-BFGS-B",
                               options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12})
    return max(best, -float(polish.fun))


def probe_norm(T, q: float = 2.0, seed: int = 1234, probes: int = 512) -> float:
    """Probe-maximized l_q -> l_q operator norm (random cloud + local polish)."""
    T = np.atleast_2d(np.asarray(T, dtype=complex))
    N = T.shape[1]
    rng = np.random.default_rng(seed)

    def ratio(x):
        u = x[:N] + 1j * x[N:]
        nu = float(vector_norms(u[None, :], q)[0])
        if nu == 0:
            return 0.0
        return float(vector_norms((T @ u)[None, :], q)[0]) / nu

    cloud = rng.standard_normal((probes, 2 * N))
    vals = np.array([ratio(x) for x in cloud])
    order = np.argsort(vals)[::-1]
    best, best_x = float(vals.max()), cloud[order[0]]
    for idx in order[:4]:
        res = optimize.minimize(lambda x: -ratio(x), cloud[idx], method="Nelder-Mead",
                                options={"maxiter": 4000, "xatol": 1e-9, "fatol": 1e-12})
        if -float(res.fun) > best:
            best, best_x = -float(res.fun), res.x
    polish = optimize.minimize(lambda x: -ratio(x), best_x, method="L-BFGS-B",
                               options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12})
    return max(best, -float(polish.fun))


@dataclass
class RBoundEstimate:
    """Certified lower bound on the R-bound of a finite operator family."""

    value: float
    tuple_indices: tuple
    tuples_tried: int

    def __float__(self):
        return self.value


def estimate_rbound(family, q: float = 2.0, tuple_size: int = 3, restarts: int = 2,
                    seed: int = 0, budget: int = 48) -> RBoundEstimate:
    """Maximize the Rademacher ratio over operator tuples drawn from the family.

    The result is a lower bound on the family R-bound.  The candidate set is
    deterministic and inclusion-monotone: every singleton and every constant
    tuple, plus unordered tuples enumerated by (largest member index, lex)
    up to the budget.  Appending members to the family therefore only grows
    the candidate set, and since each tuple is scored independently of the
    family, the estimate never decreases under family inclusion.
    """
    members = [np.atleast_2d(np.asarray(T, dtype=complex)) for T in family]
    k = len(members)
    if k == 0:
        raise ValueError("family must be non-empty")
    candidates = [(j,) for j in range(k)]
    candidates += [(j,) * tuple_size for j in range(k)]
    mixed = sorted(combinations_with_replacement(range(k), tuple_size),
                   key=lambda tup: (tup[-1], tup))
    candidates += mixed[:budget]
    seen = set()
    best_val, best_tup = 0.0, (0,)
    for tup in candidates:
        tup = tuple(int(j) for j in tup)
        key = tuple(sorted(tup))  # the ratio is invariant under tuple reordering
        if key in seen:
            continue
        seen.add(key)
        val = _maximize_tuple([members[j] for j in tup], q, seed, restarts=restarts)
        if val > best_val:
            best_val, best_tup = val, tup
    return RBoundEstimate(value=best_val, tuple_indices=best_tup, tuples_tried=len(seen))


@dataclass
class KahaneResult:
    constant: float           # measured num / den
    scale: float              # max |a_j|
    complex_scalars: bool
    verdict: bool


def kahane_contraction_check(scalars, vectors, q: float = 2.0) -> KahaneResult:
    """Measure the scalar-contraction constant by full sign enumeration.

    Real scalars of modulus <= s inflate the average by at most s; complex
    scalars by at most 2s.
    """
    scalars = list(scalars)
    if len(scalars) > 12:
        raise TooManyForEnumeration("kahane check enumerates at most 2^12 patterns")
    s = max(abs(complex(a)) for a in scalars)
    is_complex = any(abs(complex(a).imag) > 0 for a in scalars)
    N = len(np.atleast_1d(vectors[0]))
    ops = [complex(a) * np.eye(N) for a in scalars]
    num, den = rademacher_average(ops, vectors, q=q, mode="enumerate")
    constant = num / den if den > 0 else 0.0
    factor = 2.0 if is_complex else 1.0
    return KahaneResult(constant=constant, scale=s, complex_scalars=is_complex,
                        verdict=constant <= factor * s + 1e-12)


# ---------------------------------------------------------------------------
# multiplier families


@dataclass
class OperatorFamilySample:
    """A finite sample from a named operator family with its draw metadata."""

    name: str
    members: list = field(default_factory=list)
    meta: list = field(default_factory=list)   # (lam, t, xi) per member

    def add(self, member: np.ndarray, lam=None, t=None, xi=None):
        member = np.asarray(member, dtype=complex)
        if not np.all(np.isfinite(member)):
            raise ValueError(f"non-finite member in family {self.name}")
        self.members.append(member)
        self.meta.append((lam, tuple(t.t) if t is not None else None,
                          tuple(np.atleast_1d(xi)) if xi is not None else None))

    def __len__(self):
        return len(self.members)


def _B_matrix(model: OperatorModel, symbol: SymbolSpec, t: ScaleParams, lam, xi):
    P = complex(eval_symbol(symbol, t, np.atleast_1d(xi)))
    return np.linalg.inv(model.A + (lam + P) * np.eye(model.N))


def sigma_matrix(model, symbol, t, lam, xi) -> np.ndarray:
    """A [A + lam + P_t(xi)]^-1."""
    return model.A @ _B_matrix(model, symbol, t, lam, xi)


def sigma_alpha_matrix(model, symbol, t, lam, xi, alpha: MultiIndex) -> np.ndarray:
    """t(alpha) |lam|^(1-|alpha|/m) (i xi)^alpha [A + lam + P_t(xi)]^-1."""
    m = symbol.m
    scalar = t.weight(alpha, m) * abs(lam) ** (1.0 - alpha.order / m) \
        * i_xi_power(np.atleast_1d(xi), alpha)
    return scalar * _B_matrix(model, symbol, t, lam, xi)


def fd_sigma_matrix(model, symbol, t, lam, xi, beta, fd_scale: float = 1e-4) -> np.ndarray:
    """|xi|^{|beta|} times the central finite difference Delta^beta of sigma."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    axes = [k for k, b in enumerate(beta) if b]
    h = fd_scale * (1.0 + np.abs(xi))
    if not axes:
        return sigma_matrix(model, symbol, t, lam, xi)
    total = np.zeros((model.N, model.N), dtype=complex)
    for signs in np.ndindex(*([2] * len(axes))):
        shifted = xi.copy()
        coeff = 1.0
        for ax, s in zip(axes, signs):
            sgn = 1.0 if s == 0 else -1.0
            shifted[ax] += sgn * h[ax]
            coeff *= sgn / (2.0 * h[ax])
        total = total + coeff * sigma_matrix(model, symbol, t, lam, shifted)
    return float(np.linalg.norm(xi)) ** len(axes) * total


def default_xi_samples(n: int, per_axis: int = 7, lo: float = 1e-2, hi: float = 1e2):
    """Off-hyperplane frequency samples: signed log-spaced axis values, crossed."""
    mags = np.logspace(math.log10(lo), math.log10(hi), per_axis)
    vals = np.concatenate([-mags[::-1], mags])
    if n == 1:
        return vals[:, None]
    grids = np.meshgrid(*([vals] * n), indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, n)


def multiplier_family_check(model: OperatorModel, symbol: SymbolSpec, sweep: SectorSweep,
                            xi_samples=None, dims: int = 1, index_set=None, betas=None,
                            rbound_subsample: int = 8, tuple_size: int = 3,
                            seed: int = 0, threads: int = 1,
                            flatness_threshold: float = None,
                            sigma_sup_threshold: float = None) -> VerificationReport:
    """Sup norms of the multiplier families over the sweep, plus R-bound
    lower estimates for each family from a subsample of its members.

    When xi_samples is None the frequencies are re-sampled per sweep point,
    log-spaced through the saturation scale (|lam| / t_k)^(1/m)."""
    if xi_samples is None:
        n = dims
        fixed_samples = None
    else:
        fixed_samples = np.atleast_2d(xi_samples)
        n = fixed_samples.shape[1]
    if index_set is None:
        index_set = [a for a in coercive_index_set(n, symbol.m) if a.order > 0]
    if betas is None:
        betas = [tuple(b) for b in np.ndindex(*([2] * n)) if sum(b) > 0]
    points = sweep.points()
    alpha_keys = [tuple(a.components) for a in index_set]

    def evaluate(item):
        idx, (lam, t) = item
        rec = _point_meta(lam, t)
        try:
            samples = fixed_samples if fixed_samples is not None \
                else _adapted_xi_samples(lam, t, symbol.m, n, per_axis=17)
            sig = 0.0
            sig_alpha = {k: 0.0 for k in alpha_keys}
            fd = {str(b): 0.0 for b in betas}
            for xi in samples:
                sig = max(sig, operator_norm(sigma_matrix(model, symbol, t, lam, xi),
                                             model.q).upper)
                for a, key in zip(index_set, alpha_keys):
                    sig_alpha[key] = max(sig_alpha[key], operator_norm(
                        sigma_alpha_matrix(model, symbol, t, lam, xi, a), model.q).upper)
                for b in betas:
                    fd[str(b)] = max(fd[str(b)], operator_norm(
                        fd_sigma_matrix(model, symbol, t, lam, xi, b), model.q).upper)
            rec.update(ratio=sig, residual=0.0, error=None,
                       sigma_alpha={str(k): v for k, v in sig_alpha.items()},
                       fd_sup=fd)
        except Exception as exc:
            rec.update(ratio=None, residual=None, error=f"{type(exc).__name__}: {exc}")
        return rec

    records = _run_points(evaluate, list(enumerate(points)), threads)

    # R-bound lower estimate for the sigma family, subsampled across the sweep
    rng = np.random.default_rng(seed)
    family = OperatorFamilySample(name="sigma")
    ok_points = [(lam, t) for (lam, t), rec in zip(points, records) if rec["error"] is None]
    if ok_points:
        picks = rng.choice(len(ok_points), size=min(rbound_subsample, len(ok_points)),
                           replace=False)
        for pi in sorted(picks):
            lam, t = ok_points[pi]
            samples = fixed_samples if fixed_samples is not None \
                else _adapted_xi_samples(lam, t, symbol.m, n, per_axis=17)
            xi = samples[int(rng.integers(0, len(samples)))]
            family.add(sigma_matrix(model, symbol, t, lam, xi), lam=lam, t=t, xi=xi)
    details = {}
    if len(family):
        est = estimate_rbound(family.members, q=model.q, tuple_size=tuple_size, seed=seed)
        details["sigma_rbound_lower"] = est.value
        details["sigma_rbound_tuple"] = list(est.tuple_indices)
    # aggregate per-family suprema
    ok = [r for r in records if r["error"] is None]
    if ok:
        def flat(vals):
            med = float(np.median(vals))
            return float(max(vals) / med) if med > 0 else math.inf

        details["sigma_sup"] = max(r["ratio"] for r in ok)
        details["sigma_alpha_sup"] = {
            k: max(r["sigma_alpha"][str(k)] for r in ok) for k in map(str, alpha_keys)}
        details["sigma_alpha_flatness"] = {
            k: flat([r["sigma_alpha"][str(k)] for r in ok]) for k in map(str, alpha_keys)}
        details["fd_sup"] = {str(b): max(r["fd_sup"][str(b)] for r in ok) for b in betas}
    report = VerificationReport(kind="multipliers", points=records,
                                flatness_threshold=flatness_threshold,
                                max_ratio_threshold=sigma_sup_threshold,
                                details=details)
    return _summarize(report)


def lambda_resolvent_family(model: OperatorModel, lambdas) -> OperatorFamilySample:
    """The family {lam (A + lam)^-1} sampled at the given spectral parameters."""
    fam = OperatorFamilySample(name="lambda-resolvent")
    for lam in lambdas:
        fam.add(complex(lam) * resolvent(model, lam), lam=complex(lam))
    return fam
