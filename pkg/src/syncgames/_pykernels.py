"""Pure numpy implementations of the enumeration and eigenvalue kernels.

These mirror ``_kernels.pyx`` exactly in semantics (value, witness
tie-breaking, convergence rule) and are used whenever the compiled
extension is unavailable or ``SYNCGAMES_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

# Largest number of tail assignments materialised at once.
_TAIL_BUDGET = 1 << 16
_BR_BUDGET = 1 << 22


class _Best:
    """Running maximum plus the witness rule shared by both backends.

    A candidate replaces the witness only if it beats the *witness* value by
    more than ``tol``; the reported value is the true maximum seen.
    """

    __slots__ = ("tol", "value", "wvalue", "witness")

    def __init__(self, tol: float):
        self.tol = tol
        self.value = -math.inf
        self.wvalue = -math.inf
        self.witness = -1

    def scan(self, values: np.ndarray, offset: int) -> None:
        if values.size == 0:
            return
        m = float(values.max())
        if m > self.value:
            self.value = m
        start = 0
        while m > self.wvalue + self.tol:
            hits = np.flatnonzero(values[start:] > self.wvalue + self.tol)
            if hits.size == 0:
                break
            i = start + int(hits[0])
            self.wvalue = float(values[i])
            self.witness = offset + i
            start = i + 1


def _digits(count: int, k: int) -> np.ndarray:
    """All base-``k`` tuples of length ``count`` in lexicographic order."""
    if count == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(k), repeat=count)), dtype=np.int64)


def _split(n: int, k: int, budget: int) -> int:
    t = 0
    while t < n and k ** (t + 1) <= budget:
        t += 1
    return max(t, min(n, 1))


def sync_search(w: np.ndarray, tol: float = 1e-12) -> tuple[float, np.ndarray]:
    """Maximise ``sum_{x,y} w[x, y, f(x), f(y)]`` over all ``f: [n] -> [k]``.

    Returns the maximum and the lexicographically first witness under the
    shared tolerance rule.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    n, _, k, _ = w.shape
    if n == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    t = _split(n, k, _TAIL_BUDGET)
    h = n - t
    head_idx = np.arange(h)
    tail_idx = np.arange(h, n)
    tail = _digits(t, k)
    # tail-tail contribution for every tail assignment
    tt = np.zeros(tail.shape[0])
    for i, x in enumerate(tail_idx):
        for j, y in enumerate(tail_idx):
            tt += w[x, y][tail[:, i], tail[:, j]]
    best = _Best(tol)
    ntail = tail.shape[0]
    for hcount, head in enumerate(itertools.product(range(k), repeat=h)):
        hh = 0.0
        for i, x in enumerate(head_idx):
            for j, y in enumerate(head_idx):
                hh += w[x, y, head[i], head[j]]
        vals = tt + hh
        for j, y in enumerate(tail_idx):
            cross = np.zeros(k)
            for i, x in enumerate(head_idx):
                cross += w[x, y, head[i], :] + w[y, x, :, head[i]]
            vals = vals + cross[tail[:, j]]
        best.scan(vals, hcount * ntail)
    witness = np.empty(n, dtype=np.int64)
    hpart, tpart = divmod(best.witness, ntail)
    for i in range(h - 1, -1, -1):
        hpart, witness[i] = divmod(hpart, k)
    witness[h:] = tail[tpart]
    return best.value, witness


def alice_search(w: np.ndarray, tol: float = 1e-12) -> tuple[float, np.ndarray]:
    """Maximise ``sum_y max_b sum_x w[x, y, f(x), b]`` over Alice functions ``f``.

    Bob's best response is implicit; the caller reconstructs it.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    na, nb, ka, kb = w.shape
    if na == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    per = max(1, nb * kb)
    t = _split(na, ka, max(ka, _BR_BUDGET // per))
    h = na - t
    tail = _digits(t, ka)
    st = np.zeros((tail.shape[0], nb, kb))
    for i in range(t):
        st += w[h + i][:, tail[:, i], :].transpose(1, 0, 2)
    best = _Best(tol)
    ntail = tail.shape[0]
    for hcount, head in enumerate(itertools.product(range(ka), repeat=h)):
        sh = np.zeros((nb, kb))
        for i in range(h):
            sh += w[i, :, head[i], :]
        vals = (st + sh).max(axis=2).sum(axis=1)
        best.scan(vals, hcount * ntail)
    witness = np.empty(na, dtype=np.int64)
    hpart, tpart = divmod(best.witness, ntail)
    for i in range(h - 1, -1, -1):
        hpart, witness[i] = divmod(hpart, ka)
    witness[h:] = tail[tpart]
    return best.value, witness


def jacobi_eigh(m: np.ndarray, max_sweeps: int = 100, rel_tol: float = 1e-12):
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Returns ``(eigenvalues ascending, eigenvectors as columns, sweeps)``.
    """
    a = np.array(m, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    thresh = rel_tol * scale
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = math.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off <= thresh:
            sweeps -= 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) < 1e-300:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + math.hypot(1.0, theta))
                else:
                    t = -1.0 / (-theta + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * rowq
                a[q, :] = s * rowp + c * rowq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    evals = np.diag(a).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], np.ascontiguousarray(v[:, order]), sweeps
