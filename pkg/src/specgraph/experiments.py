"""Seeded Monte Carlo ensembles and exact identity checks.

Every experiment derives per-trial seeds from the master seed with the
SplitMix64 mixer, gathers results in trial order, and is therefore
bit-reproducible and independent of how many worker threads run the trials.
Secondary randomness inside a trial (perturbations, reference sphere
samples) uses seeds derived from the trial seed, never a shared stream.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .eigensolve import (
    SymMatrix,
    eigendecompose,
    eigenvalues_only,
    gaussian_perturb,
    normalize_centered_gnp,
    normalize_regular,
    normalize_uncentered_gnp,
    principal_minor,
)
from .errors import DegenerateInput
from .graphgen import (
    Graph,
    GraphModel,
    adjacency_matrix,
    degree_sequence,
    sample_gnp,
    sample_regular,
)
from .io import HistogramFile, derive_trial_seed, emit_histogram
from .spectral_laws import (
    Esd,
    Interval,
    KestenMcKay,
    Semicircle,
    count_in_interval,
    delocalization_bound,
    empirical_moment,
    empirical_stieltjes,
    ks_distance,
    semicircle_mass,
    semicircle_moment,
)

__all__ = [
    "EnsembleConfig",
    "ConvergenceReport",
    "ConcentrationReport",
    "DelocalizationReport",
    "TopEigenReport",
    "ProjectionReport",
    "MomentReport",
    "IsotropyReport",
    "IdentityReport",
    "run_semicircle_convergence",
    "run_mckay_convergence",
    "run_esd_concentration",
    "run_delocalization",
    "run_top_eigen_check",
    "run_projection_concentration",
    "run_moment_check",
    "run_isotropy_check",
    "check_rank_one_interlacing",
    "check_minor_stieltjes_identity",
    "check_eigvec_entry_identity",
    "two_sample_ks",
]

NORMALIZATIONS = ("centered-gnp", "uncentered-gnp", "regular", "raw")

# Degenerate spectra are resolved by a small Gaussian perturbation: applied
# when any eigenvalue gap falls below _GAP_TOL, with eps = _PERTURB_SCALE
# times the Frobenius norm unless the config supplies perturb_eps.
_GAP_TOL = 1e-12
_PERTURB_SCALE = 1e-8


@dataclass(frozen=True)
class EnsembleConfig:
    """Deterministic ensemble description; ``model.seed`` is ignored and
    replaced per trial by derive_trial_seed(master_seed, trial_index)."""

    model: GraphModel
    n: int
    trials: int
    master_seed: int
    normalization: str
    perturb_eps: Optional[float] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(
                f"normalization must be one of {NORMALIZATIONS}, "
                f"got {self.normalization!r}"
            )
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ConvergenceReport:
    law: str
    per_trial_ks: list
    mean_ks: float
    histogram: HistogramFile
    extra_top_multiplicity_flags: int = 0


@dataclass(frozen=True)
class ConcentrationReport:
    interval: Interval
    delta: float
    expected_mass: float
    per_trial_counts: list
    failure_fraction: float


@dataclass(frozen=True)
class DelocalizationReport:
    kappa: float
    per_trial_max_inf_norm: list
    bound_value: float
    bulk_index_sets: list  # (first, last) inclusive index pair per trial
    per_trial_perturbed: list


@dataclass(frozen=True)
class TopEigenReport:
    np_value: float
    lambda_window: tuple
    degree_window: tuple
    per_trial_lambda_max: list
    per_trial_max_degree: list
    per_trial_top_inf_norm: list
    per_trial_cs_bound: list  # sqrt(max degree) / lambda_max
    flags: list  # trial indices violating either window


@dataclass(frozen=True)
class ProjectionReport:
    n: int
    p: float
    dim: int
    t: float
    trials: int
    per_trial_norms: list
    deviation_count: int
    deviation_frequency: float
    probability_bound: float
    mean_norm: float
    target_norm: float  # sigma * sqrt(dim)


@dataclass(frozen=True)
class MomentReport:
    k_max: int
    per_trial_moments: list  # row per trial, orders 0..k_max
    mean_moments: list
    limit_moments: list
    deviations: list
    odd_error_scale: float  # 1/sqrt(np)
    even_error_scale: float  # 1/(np)


@dataclass(frozen=True)
class IsotropyReport:
    ks_statistic: float
    trials: int
    n_reference: int
    eigen_index: int  # 0-based index used (ceil(n/2) in 1-based terms)
    per_trial_abs_dot: list
    reference_abs_dot: list


@dataclass(frozen=True)
class IdentityReport:
    cases: int
    max_abs_residual: float
    worst_case_seed: int


def _map_trials(fn, count: int, threads: int) -> list:
    """Run fn(0..count-1), results ordered by trial index regardless of
    scheduling; threads > 1 uses a worker pool (the eigensolver kernels
    release the GIL)."""
    if threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _sample_graph(cfg: EnsembleConfig, trial_seed: int) -> Graph:
    model = cfg.model
    if model.kind == "gnp":
        return sample_gnp(cfg.n, model.p, trial_seed)
    if model.kind == "gnd":
        return sample_regular(cfg.n, model.d, trial_seed)
    raise ValueError(f"cannot sample from model kind {model.kind!r}")


def _normalized_matrix(cfg: EnsembleConfig, g: Graph) -> SymMatrix:
    a = adjacency_matrix(g)
    norm = cfg.normalization
    if norm == "raw":
        return a
    if norm == "centered-gnp":
        return normalize_centered_gnp(a, cfg.model.p)
    if norm == "uncentered-gnp":
        return normalize_uncentered_gnp(a, cfg.model.p)
    if norm == "regular":
        return normalize_regular(a, cfg.model.d)
    raise ValueError(f"unknown normalization {norm!r}")


def _decompose_resolving_degeneracy(
    cfg: EnsembleConfig, m: SymMatrix, trial_seed: int
):
    """Full decomposition; on a repeated eigenvalue (gap < 1e-12) redo it on
    a Gaussian-perturbed copy so eigenvectors are uniquely determined."""
    decomp = eigendecompose(m)
    gaps = np.diff(decomp.eigenvalues)
    if m.n > 1 and gaps.size and gaps.min() < _GAP_TOL:
        eps = cfg.perturb_eps
        if eps is None:
            eps = _PERTURB_SCALE * float(np.linalg.norm(m.a))
        perturbed = gaussian_perturb(m, eps, derive_trial_seed(trial_seed, 1))
        return eigendecompose(perturbed), True
    return decomp, False


def run_semicircle_convergence(
    cfg: EnsembleConfig, bins: int, threads: int = 1
) -> ConvergenceReport:
    """Per-trial KS distance of the normalized ESD from the semicircle law,
    plus a pooled histogram over [-2.5, 2.5]."""
    if cfg.normalization not in ("centered-gnp", "regular"):
        raise ValueError(
            "semicircle convergence needs centered-gnp or regular normalization"
        )

    def trial(i: int):
        seed = derive_trial_seed(cfg.master_seed, i)
        g = _sample_graph(cfg, seed)
        values = eigenvalues_only(_normalized_matrix(cfg, g))
        return ks_distance(Esd(values), Semicircle()), values

    results = _map_trials(trial, cfg.trials, threads)
    ks_list = [float(ks) for ks, _ in results]
    pooled = np.concatenate([vals for _, vals in results])
    hist = emit_histogram(pooled, bins, -2.5, 2.5)
    return ConvergenceReport(
        law="semicircle",
        per_trial_ks=ks_list,
        mean_ks=float(np.mean(ks_list)),
        histogram=hist,
    )


def run_mckay_convergence(
    n: int, d: int, trials: int, seed: int, bins: int = 50, threads: int = 1
) -> ConvergenceReport:
    """KS of the raw regular-graph spectrum (top eigenvalue removed) against
    the Kesten-McKay law of degree d.

    The top adjacency eigenvalue of a d-regular graph is exactly d, an atom
    the law does not describe; only the largest one is dropped. Disconnected
    samples carry further eigenvalues equal to d, which are counted in
    ``extra_top_multiplicity_flags`` but kept in the comparison.
    """
    if d < 2:
        raise ValueError(f"Kesten-McKay comparison needs d >= 2, got {d}")
    law = KestenMcKay(d)

    def trial(i: int):
        g = sample_regular(n, d, derive_trial_seed(seed, i))
        values = eigenvalues_only(adjacency_matrix(g))
        rest = values[:-1]
        extra = int(np.sum(np.abs(rest - d) < 1e-9))
        return ks_distance(Esd(rest), law), rest, extra

    results = _map_trials(trial, trials, threads)
    ks_list = [float(ks) for ks, _, _ in results]
    pooled = np.concatenate([vals for _, vals, _ in results])
    half = 2.0 * math.sqrt(d - 1)
    hist = emit_histogram(pooled, bins, -half - 0.5, half + 0.5)
    return ConvergenceReport(
        law=f"kesten-mckay-{d}",
        per_trial_ks=ks_list,
        mean_ks=float(np.mean(ks_list)),
        histogram=hist,
        extra_top_multiplicity_flags=sum(extra for _, _, extra in results),
    )


def run_esd_concentration(
    cfg: EnsembleConfig, interval: Interval, delta: float, threads: int = 1
) -> ConcentrationReport:
    """Count eigenvalues in the interval per trial and compare with the
    semicircle mass n * integral_I rho_sc; a trial fails when the count
    deviates from the expectation by more than delta relative."""
    if cfg.normalization == "raw":
        raise ValueError("concentration compares against the semicircle law; "
                         "use a normalized spectrum")
    expected = cfg.n * semicircle_mass(interval)

    def trial(i: int):
        seed = derive_trial_seed(cfg.master_seed, i)
        g = _sample_graph(cfg, seed)
        values = eigenvalues_only(_normalized_matrix(cfg, g))
        esd = Esd(values)
        lo = np.searchsorted(esd.values, interval.a, side="left")
        hi = np.searchsorted(esd.values, interval.b, side="right")
        return int(hi - lo)

    counts = _map_trials(trial, cfg.trials, threads)
    if expected > 0.0:
        failures = sum(abs(c - expected) > delta * expected for c in counts)
    else:
        failures = sum(c > 0 for c in counts)
    return ConcentrationReport(
        interval=interval,
        delta=delta,
        expected_mass=float(expected),
        per_trial_counts=counts,
        failure_fraction=failures / cfg.trials,
    )


def run_delocalization(
    cfg: EnsembleConfig, kappa: float, threads: int = 1
) -> DelocalizationReport:
    """Max infinity norm over bulk eigenvectors of B_n = A/(sqrt(n) sigma).

    Bulk selection is by eigenvalue location, lambda in [-2+kappa, 2-kappa]
    on the normalized spectrum. Repeated eigenvalues are resolved with the
    Gaussian-perturbation device before eigenvectors are read off.
    """
    if cfg.normalization != "uncentered-gnp":
        raise ValueError("delocalization is defined for uncentered-gnp (B_n)")
    if not 0.0 < kappa < 2.0:
        raise ValueError(f"kappa must lie in (0, 2), got {kappa}")
    bound = delocalization_bound(cfg.n, cfg.model.p, kappa)

    def trial(i: int):
        seed = derive_trial_seed(cfg.master_seed, i)
        g = _sample_graph(cfg, seed)
        decomp, perturbed = _decompose_resolving_degeneracy(
            cfg, _normalized_matrix(cfg, g), seed
        )
        lo = np.searchsorted(decomp.eigenvalues, -2.0 + kappa, side="left")
        hi = np.searchsorted(decomp.eigenvalues, 2.0 - kappa, side="right")
        if hi <= lo:
            raise ValueError(
                f"empty bulk window [-2+{kappa}, 2-{kappa}] in trial {i}"
            )
        max_inf = float(np.abs(decomp.eigenvectors[lo:hi]).max())
        return max_inf, (int(lo), int(hi - 1)), perturbed

    results = _map_trials(trial, cfg.trials, threads)
    return DelocalizationReport(
        kappa=kappa,
        per_trial_max_inf_norm=[r[0] for r in results],
        bound_value=float(bound),
        bulk_index_sets=[r[1] for r in results],
        per_trial_perturbed=[r[2] for r in results],
    )


def run_top_eigen_check(cfg: EnsembleConfig, threads: int = 1) -> TopEigenReport:
    """Largest adjacency eigenvalue and maximum degree per trial.

    Flags trials with lambda_max outside np +- 3 sqrt(np) or max degree
    outside (1 +- 0.1) np, and records the Cauchy-Schwarz bound
    sqrt(max degree)/lambda_max on the top eigenvector's infinity norm.
    """
    if cfg.model.kind != "gnp":
        raise ValueError("top-eigenvalue check is defined for the gnp model")
    np_val = cfg.n * cfg.model.p
    lam_win = (np_val - 3.0 * math.sqrt(np_val), np_val + 3.0 * math.sqrt(np_val))
    deg_win = (0.9 * np_val, 1.1 * np_val)

    def trial(i: int):
        seed = derive_trial_seed(cfg.master_seed, i)
        g = _sample_graph(cfg, seed)
        decomp = eigendecompose(adjacency_matrix(g))
        lam = float(decomp.eigenvalues[-1])
        top = decomp.eigenvectors[-1]
        delta = max(degree_sequence(g))
        return lam, delta, float(np.abs(top).max())

    results = _map_trials(trial, cfg.trials, threads)
    flags = [
        i
        for i, (lam, delta, _) in enumerate(results)
        if not (lam_win[0] <= lam <= lam_win[1] and deg_win[0] <= delta <= deg_win[1])
    ]
    return TopEigenReport(
        np_value=np_val,
        lambda_window=lam_win,
        degree_window=deg_win,
        per_trial_lambda_max=[r[0] for r in results],
        per_trial_max_degree=[r[1] for r in results],
        per_trial_top_inf_norm=[r[2] for r in results],
        per_trial_cs_bound=[math.sqrt(r[1]) / r[0] for r in results],
        flags=flags,
    )


def run_projection_concentration(
    n: int, p: float, dim: int, t: float, trials: int, seed: int, threads: int = 1
) -> ProjectionReport:
    """Concentration of the projection of a centered Bernoulli vector onto a
    uniformly random dim-dimensional subspace.

    Per trial (in this draw order): the Bernoulli vector, then a Gaussian
    n x dim frame whose QR orthornormalization spans the subspace. A trial
    deviates when | ||pi_H(Y)|| - sigma sqrt(dim) | >= t; the comparison
    bound is 10 exp(-t^2/4) per trial.
    """
    if not 1 <= dim <= n:
        raise ValueError(f"need 1 <= dim <= n, got dim={dim}, n={n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    sigma = math.sqrt(p * (1.0 - p))
    target = sigma * math.sqrt(dim)

    def trial(i: int):
        rng = np.random.default_rng(derive_trial_seed(seed, i))
        y = (rng.random(n) < p).astype(np.float64) - p
        frame = rng.standard_normal((n, dim))
        q, _ = np.linalg.qr(frame)
        norm = float(np.linalg.norm(q.T @ y))
        return norm

    norms = _map_trials(trial, trials, threads)
    deviations = sum(abs(v - target) >= t for v in norms)
    return ProjectionReport(
        n=n,
        p=p,
        dim=dim,
        t=t,
        trials=trials,
        per_trial_norms=norms,
        deviation_count=int(deviations),
        deviation_frequency=deviations / trials,
        probability_bound=10.0 * math.exp(-t * t / 4.0),
        mean_norm=float(np.mean(norms)),
        target_norm=target,
    )


def run_moment_check(
    cfg: EnsembleConfig, k_max: int, threads: int = 1
) -> MomentReport:
    """Ensemble-mean spectral moments of W_n against the semicircle moments.

    Odd moments vanish at rate 1/sqrt(np); even moments approach the Catalan
    numbers at rate 1/(np). Both scales are attached to the report.
    """
    if cfg.normalization != "centered-gnp":
        raise ValueError("moment check is defined for centered-gnp (W_n)")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")

    def trial(i: int):
        seed = derive_trial_seed(cfg.master_seed, i)
        g = _sample_graph(cfg, seed)
        esd = Esd(eigenvalues_only(_normalized_matrix(cfg, g)))
        return [empirical_moment(esd, k) for k in range(k_max + 1)]

    rows = np.array(_map_trials(trial, cfg.trials, threads))
    means = rows.mean(axis=0)
    limits = [semicircle_moment(k) for k in range(k_max + 1)]
    np_val = cfg.n * cfg.model.p
    return MomentReport(
        k_max=k_max,
        per_trial_moments=[[float(v) for v in row] for row in rows],
        mean_moments=[float(v) for v in means],
        limit_moments=limits,
        deviations=[float(m - l) for m, l in zip(means, limits)],
        odd_error_scale=1.0 / math.sqrt(np_val),
        even_error_scale=1.0 / np_val,
    )


def two_sample_ks(x, y) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_x - F_y|."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    pooled = np.concatenate([x, y])
    fx = np.searchsorted(x, pooled, side="right") / x.size
    fy = np.searchsorted(y, pooled, side="right") / y.size
    return float(np.abs(fx - fy).max())


def run_isotropy_check(
    cfg: EnsembleConfig, w: np.ndarray, n_reference: int, threads: int = 1
) -> IsotropyReport:
    """Two-sample KS between {|w . u|} over trials (u the mid-spectrum
    eigenvector) and {|w . v|} for v uniform on the unit sphere.

    Evidence only: the underlying conjectures are not asserted pass/fail.
    |w . u| is used because eigenvector signs are a convention. The
    eigenvector is the one at 1-based index ceil(n/2) of the ascending
    spectrum; reference sphere draws use seed indices after the trials.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (cfg.n,):
        raise ValueError(f"w must be a vector of length n={cfg.n}")
    if abs(np.linalg.norm(w) - 1.0) > 1e-9:
        raise ValueError("w must be a unit vector")
    if n_reference < 1:
        raise ValueError("n_reference must be >= 1")
    eig_index = math.ceil(cfg.n / 2) - 1

    def trial(i: int):
        seed = derive_trial_seed(cfg.master_seed, i)
        g = _sample_graph(cfg, seed)
        decomp, _ = _decompose_resolving_degeneracy(
            cfg, _normalized_matrix(cfg, g), seed
        )
        return abs(float(w @ decomp.eigenvectors[eig_index]))

    eig_samples = _map_trials(trial, cfg.trials, threads)
    ref_samples = []
    for j in range(n_reference):
        rng = np.random.default_rng(derive_trial_seed(cfg.master_seed, cfg.trials + j))
        v = rng.standard_normal(cfg.n)
        v /= np.linalg.norm(v)
        ref_samples.append(abs(float(w @ v)))
    return IsotropyReport(
        ks_statistic=two_sample_ks(eig_samples, ref_samples),
        trials=cfg.trials,
        n_reference=n_reference,
        eigen_index=eig_index,
        per_trial_abs_dot=eig_samples,
        reference_abs_dot=ref_samples,
    )


def _random_symmetric(rng: np.random.Generator, n: int) -> SymMatrix:
    """Symmetric matrix with iid standard Gaussian upper triangle (incl. diagonal)."""
    draws = rng.standard_normal(n * (n + 1) // 2)
    a = np.zeros((n, n))
    iu = np.triu_indices(n)
    a[iu] = draws
    a = a + np.triu(a, 1).T
    return SymMatrix(a)


def check_rank_one_interlacing(
    n: int, trials: int, seed: int, threads: int = 1
) -> IdentityReport:
    """Eigenvalue counts of A and A + (rank-one) on a random interval differ
    by at most one; any excess is a hard failure (max_abs_residual > 0).

    Per trial draw order: symmetric Gaussian A, unit vector v, sign, then
    the interval endpoints uniform over +-2.5 sqrt(n)."""

    def trial(i: int):
        trial_seed = derive_trial_seed(seed, i)
        rng = np.random.default_rng(trial_seed)
        a = _random_symmetric(rng, n)
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        b = SymMatrix(a.a + sign * np.outer(v, v))
        span = 2.5 * math.sqrt(n)
        lo, hi = np.sort(rng.uniform(-span, span, size=2))
        interval = Interval(float(lo), float(hi))
        esd_a = Esd(eigenvalues_only(a))
        esd_b = Esd(eigenvalues_only(b))
        diff = abs(count_in_interval(esd_b, interval) - count_in_interval(esd_a, interval))
        return max(0, diff - 1), trial_seed

    results = _map_trials(trial, trials, threads)
    worst = max(results, key=lambda r: r[0])
    return IdentityReport(
        cases=trials,
        max_abs_residual=float(worst[0]),
        worst_case_seed=worst[1] if worst[0] > 0 else results[0][1],
    )


def check_minor_stieltjes_identity(
    m: SymMatrix, z: complex, seed: int = 0
) -> IdentityReport:
    """Residual between (1/n) sum 1/(lambda_i - z) and the minor expansion
    (1/n) sum_k 1/(m_kk - z - a_k^T (M_k - z)^{-1} a_k).

    The inner resolvent is evaluated through the minor's eigendecomposition.
    Requires Im z > 0 (so no minor resolvent can be singular).
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"z must lie in the upper half-plane, got {z}")
    n = m.n
    lhs = empirical_stieltjes(Esd(eigenvalues_only(m)), z)
    total = 0.0 + 0.0j
    for k in range(n):
        if n == 1:
            quad = 0.0 + 0.0j
        else:
            minor = principal_minor(m, k)
            md = eigendecompose(minor)
            keep = np.arange(n) != k
            a_k = m.a[keep, k]
            coeffs = md.eigenvectors @ a_k
            quad = complex(np.sum(coeffs**2 / (md.eigenvalues - z)))
        total += 1.0 / (m.a[k, k] - z - quad)
    rhs = total / n
    return IdentityReport(
        cases=n,
        max_abs_residual=abs(lhs - rhs),
        worst_case_seed=seed,
    )


def _secular_offset(a00, mu, coeffs, jstar, delta0):
    """Offset delta = lambda_i - mu[jstar] solved from the secular equation
    a00 - (mu[jstar] + delta) - sum_j c_j^2 / (mu_j - mu[jstar] - delta) = 0.

    Differencing two separately computed eigenvalues loses the tiny gap to
    cancellation; the secular root carries it at full relative precision
    (the divide-and-conquer eigensolver trick). The equation is strictly
    decreasing between adjacent poles, so the root on the side indicated by
    the float estimate ``delta0`` is unique and safely bracketed.
    """
    rel = mu - mu[jstar]
    others = np.arange(mu.size) != jstar
    cstar2 = coeffs[jstar] ** 2
    if cstar2 == 0.0:
        # decoupled coordinate: mu[jstar] is itself an eigenvalue, which is
        # the excluded shared-eigenvalue case
        raise DegenerateInput("minor eigenvector decoupled from the first row")

    def f(delta):
        tail = np.sum(coeffs[others] ** 2 / (rel[others] - delta))
        return a00 - mu[jstar] - delta - tail + cstar2 / delta

    # bracket between 0 and the adjacent pole (or an outward walk when the
    # root lies beyond all poles on that side)
    if delta0 > 0:
        above = rel[others][rel[others] > 0]
        hi = above.min() if above.size else None
        lo = 0.0
    else:
        below = rel[others][rel[others] < 0]
        lo = below.max() if below.size else None
        hi = 0.0
    span = max(1.0, abs(a00) + np.abs(mu).max() + np.abs(coeffs).sum())
    if delta0 > 0:
        lo_b = abs(delta0) * 1e-8
        hi_b = (hi * (1 - 1e-15)) if hi is not None else 4.0 * span
        for _ in range(80):
            if f(lo_b) >= 0.0:
                break
            lo_b *= 1e-4
        else:
            raise DegenerateInput("secular bracketing failed near the pole")
        while hi is None and f(hi_b) > 0.0:
            hi_b *= 2.0
        a, b = lo_b, hi_b
    else:
        hi_b = -abs(delta0) * 1e-8
        lo_b = (lo * (1 - 1e-15)) if lo is not None else -4.0 * span
        for _ in range(80):
            if f(hi_b) <= 0.0:
                break
            hi_b *= 1e-4
        else:
            raise DegenerateInput("secular bracketing failed near the pole")
        while lo is None and f(lo_b) < 0.0:
            lo_b *= 2.0
        a, b = lo_b, hi_b
    # f decreases from +inf at a to -inf at b; bisection in log-ish steps
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if f(mid) > 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def check_eigvec_entry_identity(
    m: SymMatrix, i: int, seed: int = 0
) -> IdentityReport:
    """Relative error of the first-coordinate formula
    |x|^2 = 1 / (1 + sum_j (lambda_j(minor) - lambda_i)^{-2} |u_j . X|^2)
    against the actual squared first coordinate of the i-th eigenvector.

    The minor is the matrix with row/column 0 removed and X the first
    column below the diagonal. Raises DegenerateInput when the minor
    spectrum meets lambda_i (the formula's own exclusion). A minor
    eigenvalue merely close to lambda_i (which happens exactly when the
    coordinate is small) is re-resolved through the secular equation so the
    near-cancelling gap keeps full relative precision.
    """
    n = m.n
    if not 0 <= i < n:
        raise ValueError(f"eigenvalue index {i} out of range for n={n}")
    if n < 2:
        raise ValueError("identity needs n >= 2")
    decomp = eigendecompose(m)
    lam = decomp.eigenvalues[i]
    actual = float(decomp.eigenvectors[i, 0] ** 2)
    minor = principal_minor(m, 0)
    md = eigendecompose(minor)
    gaps = md.eigenvalues - lam
    scale = max(1.0, float(np.linalg.norm(m.a)))
    jstar = int(np.argmin(np.abs(gaps)))
    x_vec = m.a[1:, 0]
    coeffs = md.eigenvectors @ x_vec
    if abs(gaps[jstar]) <= 1e-13 * scale:
        raise DegenerateInput(
            f"minor spectrum meets eigenvalue {lam}; perturb the matrix first"
        )
    if abs(gaps[jstar]) < 1e-4 * scale:
        delta = _secular_offset(m.a[0, 0], md.eigenvalues, coeffs, jstar, -gaps[jstar])
        gaps = (md.eigenvalues - md.eigenvalues[jstar]) - delta
        gaps[jstar] = -delta
    predicted = 1.0 / (1.0 + float(np.sum(coeffs**2 / gaps**2)))
    rel = abs(predicted - actual) / max(actual, 1e-300)
    return IdentityReport(cases=1, max_abs_residual=rel, worst_case_seed=seed)
