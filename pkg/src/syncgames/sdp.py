"""Maximise ``Tr(A P)`` over the elliptope with an a-posteriori dual certificate.

The primal is solved in factored form ``P = V V^T`` with unit-norm rows of
``V`` (rank ``ceil(sqrt(2n)) + 1``) by Riemannian gradient ascent on the
product of spheres. At the final point the diagonal dual candidate is
``y_i = (A V V^T)_{ii}``; ``Diag(y) - A`` is tested for positive
semidefiniteness and, if it fails, ``y`` is lifted uniformly by the most
negative eigenvalue. The primal value is therefore always a lower bound and
``sum(y)`` always an upper bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg

GAP_TOL = 1e-6
ARMIJO_C = 1e-4
SHRINK = 0.5
MAX_ITER = 50_000
# Stop once the objective has not moved by more than STALL_RTOL (relative)
# for STALL_ITERS iterations; below that the gradient is rounding noise.
STALL_ITERS = 100
STALL_RTOL = 1e-14
DEFAULT_SEED = 42
DEFAULT_RESTARTS = 8

#: Callables ``f(a, solution)`` invoked after every solve (used for auditing).
observers: list = []


@dataclass(frozen=True, eq=False)
class SdpSolution:
    value: float
    primal: np.ndarray
    dual: np.ndarray
    gap: float
    certified: bool
    lift: float = 0.0
    restart: int = -1
    iterations: int = 0

    @property
    def upper(self) -> float:
        return float(np.sum(self.dual))

    @property
    def lower(self) -> float:
        return self.value

    @classmethod
    def from_pair(cls, a, p, y, gap_tol: float = GAP_TOL) -> "SdpSolution":
        """Wrap an explicit primal/dual pair, checking feasibility of both."""
        a = linalg.symmetrize(a)
        p = linalg.symmetrize(p)
        y = np.asarray(y, dtype=np.float64)
        if np.any(np.abs(np.diag(p) - 1.0) > 1e-8) or not linalg.is_psd(p, 1e-8):
            raise ValueError("primal matrix is not in the elliptope")
        if not linalg.is_psd(np.diag(y) - a, 1e-8):
            raise ValueError("dual vector is infeasible")
        value = float(np.sum(a * p))
        gap = float(np.sum(y)) - value
        return cls(value, p, y, gap, gap <= gap_tol * max(1.0, abs(value)))


def default_rank(n: int) -> int:
    return min(n, math.ceil(math.sqrt(2 * n)) + 1) if n > 1 else 1


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1)
    norms[norms == 0.0] = 1.0
    return v / norms[:, None]


def _ascend(a: np.ndarray, v: np.ndarray, grad_tol: float, max_iter: int):
    """Riemannian gradient ascent with Armijo backtracking.

    The trial step starts at the Barzilai-Borwein estimate (1.0 on the first
    iteration) and is halved until the Armijo condition holds.
    """
    av = a @ v
    f = float(np.sum(v * av))
    prev_v = prev_g = None
    it = 0
    mark, since = f, 0
    for it in range(1, max_iter + 1):
        g = 2.0 * av
        rg = g - np.sum(g * v, axis=1)[:, None] * v
        gnorm2 = float(np.sum(rg * rg))
        if math.sqrt(gnorm2) <= grad_tol:
            break
        step = 1.0
        if prev_v is not None:
            s = v - prev_v
            dy = rg - prev_g
            sy = abs(float(np.sum(s * dy)))
            if sy > 0.0:
                step = min(max(float(np.sum(s * s)) / sy, 1e-12), 1e12)
        accepted = False
        while step > 1e-30:
            cand = _normalize_rows(v + step * rg)
            cav = a @ cand
            fc = float(np.sum(cand * cav))
            if fc >= f + ARMIJO_C * step * gnorm2:
                accepted = True
                break
            step *= SHRINK
        if not accepted:
            break
        prev_v, prev_g = v, rg
        v, av, f = cand, cav, fc
        if f - mark > STALL_RTOL * max(1.0, abs(f)):
            mark, since = f, 0
        else:
            since += 1
            if since >= STALL_ITERS:
                break
    return v, av, f, it


def _certificate(a: np.ndarray, v: np.ndarray, av: np.ndarray):
    y = np.sum(av * v, axis=1)
    lmin = linalg.lambda_min(np.diag(y) - a)
    lift = max(0.0, -lmin)
    return y + lift, lift


def solve_elliptope(
    a,
    seed: int = DEFAULT_SEED,
    restarts: int = DEFAULT_RESTARTS,
    rank: int | None = None,
    max_iter: int = MAX_ITER,
    gap_tol: float = GAP_TOL,
) -> SdpSolution:
    """``max Tr(A P)`` over ``P >= 0`` with unit diagonal.

    Restart ``j`` draws its starting point from seed ``seed + j``. The primal
    of the best restart is reported (ties go to the lowest index); the dual is
    the smallest upper bound found across restarts, and ``lift`` is the
    uniform shift that bound needed.
    """
    a = linalg.symmetrize(a)
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty objective matrix")
    r = default_rank(n) if rank is None else rank
    grad_tol = 1e-10 * max(1.0, float(np.linalg.norm(a)))
    best = None
    best_dual = None
    for j in range(max(1, restarts)):
        rng = np.random.default_rng(seed + j)
        v = _normalize_rows(rng.standard_normal((n, r)))
        v, av, f, iters = _ascend(a, v, grad_tol, max_iter)
        y, lift = _certificate(a, v, av)
        if best is None or f > best[0] + 1e-12 * max(1.0, abs(best[0])):
            best = (f, v, j, iters)
        if best_dual is None or y.sum() < best_dual[0].sum():
            best_dual = (y, lift)
    f, v, j, iters = best
    best_dual, lift = best_dual
    p = v @ v.T
    np.fill_diagonal(p, 1.0)
    value = float(np.sum(a * p))
    gap = float(best_dual.sum()) - value
    sol = SdpSolution(
        value=value,
        primal=p,
        dual=best_dual,
        gap=gap,
        certified=gap <= gap_tol * max(1.0, abs(value)),
        lift=lift,
        restart=j,
        iterations=iters,
    )
    for hook in observers:
        hook(a, sol)
    return sol


def solve_diag_dual(a, **solver_kw) -> tuple[np.ndarray, float]:
    """Minimise ``sum(y)`` subject to ``Diag(y) - A >= 0``.

    For a symmetric circulant the cyclic-shift average of any feasible dual
    is feasible and constant, so ``y = lambda_max(A) * 1`` is optimal.
    """
    a = linalg.symmetrize(a)
    n = a.shape[0]
    if not np.any(a):
        return np.zeros(n), 0.0
    if linalg.is_symmetric_circulant(a):
        lam = float(linalg.circulant_spectrum(a[0]).max())
        y = np.full(n, lam)
        return y, float(y.sum())
    sol = solve_elliptope(a, **solver_kw)
    return sol.dual, float(sol.dual.sum())


def slackness_residual(a, p, y) -> float:
    """``|| P (Diag(y) - A) ||_F``."""
    a = linalg.symmetrize(a)
    return float(np.linalg.norm(np.asarray(p) @ (np.diag(y) - a)))


def dual_uniqueness_check(a, sol: SdpSolution, tol: float = 1e-6) -> bool:
    """Complementary slackness of a certified pair, the mechanism that pins the dual."""
    if not sol.certified:
        raise ValueError("solution is not certified")
    return slackness_residual(a, sol.primal, sol.dual) <= tol
