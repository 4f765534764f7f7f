"""Compiled numeric kernels for the dense symmetric eigensolver.

Householder reduction to tridiagonal form followed by implicit-shift QL
iteration, in the classical EISPACK organisation. The kernels are compiled
with numba (nogil so independent decompositions can run on worker threads);
loops are arranged so every inner loop walks a contiguous row.
"""

import numpy as np
from numba import njit

MACHINE_EPS = float(np.finfo(np.float64).eps)


@njit(cache=True, fastmath=True, nogil=True)
def householder_tridiag(a):
    """Reduce symmetric ``a`` (destroyed in place) to tridiagonal (d, e).

    The Householder vector of step k is left in a[k+1:, k]; the scalars
    needed to reapply the reflectors are returned in ``betas``. e[i] couples
    d[i] and d[i+1]; e[n-1] is unused.
    """
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(n)
    betas = np.zeros(n)
    p = np.empty(n)
    v = np.empty(n)
    for k in range(n - 2):
        xnorm2 = 0.0
        for i in range(k + 1, n):
            xnorm2 += a[i, k] * a[i, k]
        x0 = a[k + 1, k]
        xnorm = np.sqrt(xnorm2)
        if xnorm == 0.0:
            e[k] = 0.0
            continue
        alpha = -xnorm if x0 >= 0.0 else xnorm
        v0 = x0 - alpha
        vnorm2 = xnorm2 - x0 * x0 + v0 * v0
        if vnorm2 == 0.0:
            e[k] = alpha
            continue
        beta = 2.0 / vnorm2
        a[k + 1, k] = v0
        for i in range(k + 1, n):
            v[i] = a[i, k]
        # p = beta * A[k+1:, k+1:] v, then w = p - (beta/2)(v.p) v
        for i in range(k + 1, n):
            s = 0.0
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            p[i] = beta * s
        vp = 0.0
        for i in range(k + 1, n):
            vp += v[i] * p[i]
        gamma = 0.5 * beta * vp
        for i in range(k + 1, n):
            p[i] -= gamma * v[i]
        # symmetric rank-2 update of the trailing block
        for i in range(k + 1, n):
            vi = v[i]
            wi = p[i]
            for j in range(k + 1, n):
                a[i, j] -= vi * p[j] + wi * v[j]
        e[k] = alpha
        betas[k] = beta
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    for i in range(n):
        d[i] = a[i, i]
    return d, e, betas


@njit(cache=True, fastmath=True, nogil=True)
def accumulate_qt(a, betas):
    """Form Q^T row-wise from the reflectors stored by householder_tridiag.

    Q = H_0 H_1 ... H_{n-3}, so Q^T = H_{n-3} ... H_0 is built by
    right-multiplication in descending k; before step k the partial product
    is the identity outside the trailing (k+1..) block, so only that block
    is touched. Row i of the result is column i of Q.
    """
    n = a.shape[0]
    qt = np.eye(n)
    v = np.empty(n)
    rv = np.empty(n)
    for k in range(n - 3, -1, -1):
        beta = betas[k]
        if beta == 0.0:
            continue
        for j in range(k + 1, n):
            v[j] = a[j, k]
        rv[k + 1] = v[k + 1]
        for i in range(k + 2, n):
            s = 0.0
            for j in range(k + 1, n):
                s += qt[i, j] * v[j]
            rv[i] = s
        for i in range(k + 1, n):
            f = beta * rv[i]
            for j in range(k + 1, n):
                qt[i, j] -= f * v[j]
    return qt


@njit(cache=True, fastmath=True, nogil=True)
def ql_implicit(d, e, z, want_z, max_shifts):
    """Implicit-shift QL iteration on the tridiagonal (d, e).

    e[i] couples d[i] and d[i+1]. An off-diagonal counts as converged when
    |e[i]| <= eps * (|d[i]| + |d[i+1]|) with eps = machine epsilon. Each
    eigenvalue is allowed at most ``max_shifts`` implicit shifts; on
    exhaustion -1 is returned and the caller raises.

    When want_z, the plane rotations are accumulated into the rows of ``z``
    (z must start as Q^T); on return row i of z is the eigenvector paired
    with d[i]. Eigenvalues are left unordered.
    """
    n = d.shape[0]
    if n == 0:
        return 0
    e[n - 1] = 0.0
    for l in range(n):
        shifts = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= MACHINE_EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if shifts >= max_shifts:
                return -1
            shifts += 1
            # Wilkinson-style shift from the 2x2 at the deflation corner
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            sg = r if g >= 0.0 else -r
            g = d[m] - d[l] + e[l] / (g + sg)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated early; recover and restart sweep
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_z:
                    for col in range(z.shape[1]):
                        f = z[i + 1, col]
                        z[i + 1, col] = s * z[i, col] + c * f
                        z[i, col] = c * z[i, col] - s * f
            if not underflow:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return 0
