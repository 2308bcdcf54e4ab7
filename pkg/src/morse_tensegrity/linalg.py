"""Kernel extraction shared by the classical and Morse equilibrium systems."""

import numpy as np

RANK_TOL = 1e-10


def kernel(matrix, rank_tol=RANK_TOL):
    """Orthonormal basis of the null space, one vector per row.

    Numerical rank counts singular values above ``rank_tol * sigma_max``.
    The returned basis is canonical: it depends only on the null space, not
    on which right-singular vectors the SVD happened to return (see
    :func:`canonical_basis`).
    """
    m = np.asarray(matrix, dtype=float)
    n = m.shape[1]
    if n == 0:
        return np.zeros((0, 0))
    if m.shape[0] == 0:
        return canonical_basis(np.eye(n))
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rank_tol * smax)) if smax > 0 else 0
    return canonical_basis(vt[rank:])


def canonical_basis(rows, tol=1e-9):
    """Reproducible orthonormal basis of ``span(rows)``.

    Gram-Schmidt is run on the columns of the orthogonal projector onto the
    subspace, which is unique.  At each step the first column whose residual
    is at least half the largest residual is taken, then every vector is
    signed so that its first entry above ``tol`` is positive.
    """
    k = np.asarray(rows, dtype=float)
    d, n = k.shape if k.ndim == 2 else (0, 0)
    if d == 0:
        return np.zeros((0, n))
    proj = k.T @ k
    chosen = []
    resid = proj.copy()
    for _ in range(d):
        norms = np.linalg.norm(resid, axis=0)
        j = int(np.flatnonzero(norms >= 0.5 * norms.max())[0])
        v = resid[:, j] / norms[j]
        for u in chosen:  # second pass of classical Gram-Schmidt
            v = v - (u @ v) * u
        v /= np.linalg.norm(v)
        chosen.append(v)
        resid = resid - np.outer(v, v @ resid)
    basis = np.array(chosen)
    for row in basis:
        nz = np.flatnonzero(np.abs(row) > tol)
        if nz.size and row[nz[0]] < 0:
            row *= -1.0
    return basis


def principal_angles(a, b):
    """Principal angles between the row spaces of ``a`` and ``b``."""
    from scipy.linalg import subspace_angles

    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(0)
    return subspace_angles(a.T, b.T)
