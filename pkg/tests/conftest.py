"""Shared oracles for the test suite.

These are deliberately independent of the library's own numerics: the
characteristic polynomial is expanded by exhaustive cofactors and rooted
through the companion matrix, and integrals use Gauss-Legendre panels.
"""

import numpy as np
import numpy.polynomial.polynomial as npoly
import pytest

import specgraph as sg


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure the algorithm."""
    m = sg.SymMatrix(np.array([[2.0, 1.0], [1.0, 2.0]]))
    sg.eigendecompose(m)
    sg.eigenvalues_only(m)


def charpoly_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Roots of det(xI - A) with the determinant expanded by cofactors.

    Intended for n <= 5; the polynomial arithmetic is exact cofactor
    expansion and the rooting goes through numpy's companion-matrix solver,
    so no code path is shared with the package's eigensolver.
    """

    def det_poly(m):
        k = len(m)
        if k == 1:
            return m[0][0]
        total = np.zeros(1)
        for j in range(k):
            minor = [[row[jj] for jj in range(k) if jj != j] for row in m[1:]]
            term = npoly.polymul(m[0][j], det_poly(minor))
            total = npoly.polyadd(total, ((-1) ** j) * term)
        return total

    n = a.shape[0]
    entries = [
        [
            np.array([-a[i, j], 1.0]) if i == j else np.array([-a[i, j]])
            for j in range(n)
        ]
        for i in range(n)
    ]
    coeffs = det_poly(entries)
    roots = np.roots(coeffs[::-1])
    return np.sort(roots.real)


def gauss_quad(f, lo: float, hi: float, nodes: int = 400) -> float:
    """Fixed-order Gauss-Legendre quadrature of f over [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return float(half * np.sum(w * np.array([f(mid + half * t) for t in x])))


def gauss_quad_sqrt_edge(f, lo: float, hi: float, half_width: float, nodes: int = 400):
    """Quadrature of f over [lo, hi] inside [-half_width, half_width] for
    integrands with sqrt edge behaviour: substituting x = half_width*sin(t)
    removes the edge singularity, so Gauss-Legendre converges spectrally."""
    ta = np.arcsin(lo / half_width)
    tb = np.arcsin(hi / half_width)
    return gauss_quad(
        lambda t: f(half_width * np.sin(t)) * half_width * np.cos(t), ta, tb, nodes
    )


def random_symmetric(rng: np.random.Generator, n: int) -> sg.SymMatrix:
    a = rng.standard_normal((n, n))
    return sg.SymMatrix((a + a.T) / 2.0)
