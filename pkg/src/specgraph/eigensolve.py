"""Dense symmetric eigensolver and matrix normalizations.

The solver is Householder tridiagonalization followed by implicit-shift QL
iteration (see ``_kernels``). Output is deterministic: eigenvalues ascending
via a stable sort of the QL output, and each eigenvector signed so that its
largest-magnitude coordinate is positive (ties broken by lowest index).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericFailure

__all__ = [
    "SymMatrix",
    "SpectralDecomposition",
    "eigendecompose",
    "eigenvalues_only",
    "normalize_centered_gnp",
    "normalize_uncentered_gnp",
    "normalize_regular",
    "gaussian_perturb",
    "principal_minor",
]


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix. ``a`` is (n, n) float64, exactly symmetric."""

    a: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.a, dtype=np.float64))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("matrix must have dimension >= 1")
        if not np.isfinite(a).all():
            raise ValueError("matrix entries must be finite")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix must be exactly symmetric")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Full eigensystem: ascending eigenvalues, row i of ``eigenvectors``
    is the unit eigenvector paired with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def eigenvector(self, i: int) -> np.ndarray:
        return self.eigenvectors[i]


def _apply_sign_convention(vectors: np.ndarray) -> None:
    """Flip rows in place so the largest-|coordinate| entry is positive.

    np.argmax returns the lowest index among ties, which is the tie rule.
    """
    idx = np.argmax(np.abs(vectors), axis=1)
    flip = vectors[np.arange(vectors.shape[0]), idx] < 0.0
    vectors[flip] *= -1.0


def eigendecompose(m: SymMatrix) -> SpectralDecomposition:
    """Full ordered eigensystem of a symmetric matrix.

    Raises NumericFailure if the QL iteration exceeds 30n implicit shifts
    for some eigenvalue (not observed on well-scaled inputs).
    """
    a = m.a.copy()
    n = a.shape[0]
    d, e, betas = _kernels.householder_tridiag(a)
    z = _kernels.accumulate_qt(a, betas)
    rc = _kernels.ql_implicit(d, e, z, True, 30 * n)
    if rc != 0:
        raise NumericFailure(
            f"QL iteration exceeded {30 * n} implicit shifts for an eigenvalue"
        )
    order = np.argsort(d, kind="stable")
    vectors = np.ascontiguousarray(z[order, :])
    _apply_sign_convention(vectors)
    return SpectralDecomposition(eigenvalues=d[order], eigenvectors=vectors)


def eigenvalues_only(m: SymMatrix) -> np.ndarray:
    """Ascending eigenvalues without accumulating eigenvectors.

    Same reduction and QL sweeps as eigendecompose, skipping the rotation
    accumulation; used by the ensemble experiments that only need spectra.
    """
    a = m.a.copy()
    n = a.shape[0]
    d, e, _ = _kernels.householder_tridiag(a)
    dummy = np.empty((0, 0))
    rc = _kernels.ql_implicit(d, e, dummy, False, 30 * n)
    if rc != 0:
        raise NumericFailure(
            f"QL iteration exceeded {30 * n} implicit shifts for an eigenvalue"
        )
    return np.sort(d, kind="stable")


def _ones_rank_one(n: int) -> np.ndarray:
    return np.ones((n, n))


def normalize_centered_gnp(a: SymMatrix, p: float) -> SymMatrix:
    """Centered-and-scaled matrix (A - p J) / (sigma sqrt(n)), sigma^2 = p(1-p)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    n = a.n
    sigma = np.sqrt(p * (1.0 - p))
    w = (a.a - p * _ones_rank_one(n)) / (sigma * np.sqrt(n))
    return SymMatrix(w)


def normalize_uncentered_gnp(a: SymMatrix, p: float) -> SymMatrix:
    """Scaled-only matrix A / (sigma sqrt(n)); eigenvectors are unchanged."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    sigma = np.sqrt(p * (1.0 - p))
    return SymMatrix(a.a / (sigma * np.sqrt(a.n)))


def normalize_regular(a: SymMatrix, d: int) -> SymMatrix:
    """Centered-and-scaled regular-graph matrix (A - (d/n) J) / sqrt((d/n)(1-d/n) n)."""
    n = a.n
    if not 0 < d < n:
        raise ValueError(f"degree must satisfy 0 < d < n, got d={d}, n={n}")
    q = d / n
    m = (a.a - q * _ones_rank_one(n)) / np.sqrt(q * (1.0 - q))
    return SymMatrix(m / np.sqrt(n))


def gaussian_perturb(m: SymMatrix, eps: float, seed: int) -> SymMatrix:
    """m + eps*N for a symmetric N with iid standard Gaussian entries on the
    upper triangle, diagonal included; deterministic given seed."""
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    n = m.n
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal(n * (n + 1) // 2)
    noise = np.zeros((n, n))
    iu = np.triu_indices(n)
    noise[iu] = draws
    noise = noise + np.triu(noise, 1).T
    return SymMatrix(m.a + eps * noise)


def principal_minor(m: SymMatrix, k: int) -> SymMatrix:
    """The (n-1) x (n-1) matrix with row and column k removed."""
    n = m.n
    if n < 2:
        raise ValueError("cannot take a principal minor of a 1x1 matrix")
    if not 0 <= k < n:
        raise ValueError(f"index k={k} out of range for n={n}")
    keep = np.arange(n) != k
    return SymMatrix(np.ascontiguousarray(m.a[np.ix_(keep, keep)]))
