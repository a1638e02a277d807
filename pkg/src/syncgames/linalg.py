"""Dense real-symmetric linear algebra used by the SDP layer and the checkers.

Eigendecompositions go through the cyclic Jacobi kernel of the active
backend (compiled or numpy); everything else is thin numpy.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import _backend

MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-12
PSD_TOL = 1e-9


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns


def symmetrize(m) -> np.ndarray:
    """``(M + M^T) / 2`` as a float array; rejects non-square or non-finite input."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return 0.5 * (m + m.T)


def eig_sym(m, backend: str | None = None) -> Spectrum:
    """Full spectrum of a symmetric matrix by cyclic Jacobi."""
    a = symmetrize(m)
    if a.shape[0] == 0:
        raise ValueError("empty matrix")
    evals, evecs, _ = _backend.get(backend).jacobi_eigh(a, MAX_SWEEPS, OFFDIAG_TOL)
    return Spectrum(np.asarray(evals), np.asarray(evecs))


def lambda_min(m) -> float:
    return float(eig_sym(m).eigenvalues[0])


def lambda_max(m) -> float:
    return float(eig_sym(m).eigenvalues[-1])


def is_psd(m, tol: float = PSD_TOL) -> bool:
    """``lambda_min(M) >= -tol * max(1, ||M||_F)``."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    a = symmetrize(m)
    if a.size == 0:
        return True
    return lambda_min(a) >= -tol * max(1.0, float(np.linalg.norm(a)))


def real_embedding(x) -> np.ndarray:
    """Real symmetric matrix ``[[Re, -Im], [Im, Re]]`` of a Hermitian matrix.

    Its spectrum is that of ``x`` with every eigenvalue doubled.
    """
    x = np.asarray(x, dtype=np.complex128)
    re, im = x.real, x.imag
    return np.block([[re, -im], [im, re]])


def hermitian_lambda_min(x) -> float:
    x = np.asarray(x, dtype=np.complex128)
    x = 0.5 * (x + x.conj().T)
    return lambda_min(real_embedding(x))


def circulant_spectrum(first_row) -> np.ndarray:
    """Eigenvalues ``sum_k c_k cos(2 pi j k / n)`` of a symmetric circulant, j = 0..n-1."""
    c = np.asarray(first_row, dtype=np.float64)
    n = c.size
    if n == 0:
        raise ValueError("empty first row")
    mirrored = c[(-np.arange(n)) % n]
    if not np.allclose(c, mirrored, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(c).max()))):
        raise ValueError("first row does not define a symmetric circulant")
    j = np.arange(n)
    return np.cos(2.0 * math.pi * np.outer(j, j) / n) @ c


def circulant(first_row) -> np.ndarray:
    c = np.asarray(first_row, dtype=np.float64)
    n = c.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return c[idx]


def is_symmetric_circulant(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    if n == 0 or not np.allclose(m, m.T, atol=tol):
        return False
    return bool(np.allclose(m, circulant(m[0]), atol=tol))


def gram_vectors(p, rank_tol: float = PSD_TOL) -> np.ndarray:
    """Unit vectors (rows) whose Gram matrix reproduces the correlation matrix ``p``.

    The dimension is the numerical rank: eigenvalues above
    ``rank_tol * lambda_max`` are kept.
    """
    a = symmetrize(p)
    if np.any(np.abs(np.diag(a) - 1.0) > 1e-8):
        raise ValueError("matrix does not have unit diagonal")
    if not is_psd(a, rank_tol):
        raise ValueError("matrix is not positive semidefinite")
    evals, evecs = eig_sym(a)
    top = max(float(evals[-1]), 0.0)
    keep = evals > rank_tol * top
    vecs = evecs[:, keep] * np.sqrt(np.clip(evals[keep], 0.0, None))
    vecs = vecs[:, ::-1]
    norms = np.linalg.norm(vecs, axis=1)
    return vecs / norms[:, None]
