"""XOR games: cost matrices, quantum and synchronous quantum values, biases.

Both values reduce to elliptope programs: the ordinary value uses the
``2n x 2n`` block matrix ``B = (1/2)[[0, A], [A^T, 0]]`` and the synchronous
value the symmetrised cost matrix ``(A + A^T)/2``; in each case
``omega = 1/2 + (1/2) * max Tr(M P)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, sdp
from .games import Graph, XorGame, coloring_xor_game, uniform_edge_prior

PSD_CHECK_TOL = 1e-8
THRESHOLD_GUARD = 1e-12


class UncertifiedSolutionError(RuntimeError):
    """The SDP solver could not close the duality gap; bounds are attached."""

    def __init__(self, message: str, solution: sdp.SdpSolution):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True, eq=False)
class CostMatrices:
    a: np.ndarray
    a_sym: np.ndarray
    b: np.ndarray


def cost_matrices(g: XorGame) -> CostMatrices:
    a = np.where(g.f == 1, -1.0, 1.0) * g.prior.pi
    n = g.n
    zero = np.zeros((n, n))
    b = 0.5 * np.block([[zero, a], [a.T, zero]])
    return CostMatrices(a, 0.5 * (a + a.T), b)


def _solve(m, strict: bool, **solver_kw) -> sdp.SdpSolution:
    sol = sdp.solve_elliptope(m, **solver_kw)
    if strict and not sol.certified:
        raise UncertifiedSolutionError(
            f"duality gap {sol.gap:.3e} above tolerance; value in "
            f"[{sol.lower:.10f}, {sol.upper:.10f}]",
            sol,
        )
    return sol


def xor_value(g: XorGame, strict: bool = True, **solver_kw) -> float:
    """Quantum (= quantum commuting) value."""
    return 0.5 + 0.5 * _solve(cost_matrices(g).b, strict, **solver_kw).value


def xor_sync_value(g: XorGame, strict: bool = True, **solver_kw) -> float:
    """Synchronous quantum (= synchronous quantum commuting) value."""
    return 0.5 + 0.5 * _solve(cost_matrices(g).a_sym, strict, **solver_kw).value


def quantum_max_cut2(g: Graph, strict: bool = True, **solver_kw) -> float:
    """Quantum max 2-cut: ``|E|/4 - (1/4) min Tr(Adj P)`` with ordered ``|E|``."""
    if not g.edges:
        raise ValueError("graph has no edges")
    sol = _solve(-g.adjacency(), strict, **solver_kw)
    return g.ordered_edge_count / 4.0 + sol.value / 4.0


def two_coloring_sync_value(g: Graph, strict: bool = True, **solver_kw) -> float:
    """Synchronous quantum value of the 2-colouring game, uniform edge prior."""
    return xor_sync_value(coloring_xor_game(g, uniform_edge_prior(g)), strict, **solver_kw)


def graph_corr_half(g: Graph, strict: bool = True, **solver_kw) -> float:
    """Quantum graph correlation function at ``r = 1/2``."""
    if not g.edges:
        raise ValueError("graph has no edges")
    omega = two_coloring_sync_value(g, strict, **solver_kw)
    return 0.5 * g.ordered_edge_count * (1.0 - omega)


def is_synchronous_xor(g: XorGame) -> bool:
    f = g.f
    return (
        not np.any(np.diag(f))
        and np.array_equal(f, f.T)
        and g.prior.is_symmetric()
    )


def balanced_check(g: XorGame, **solver_kw) -> tuple[bool, np.ndarray]:
    """Whether ``-Diag(y*) <= A <= Diag(y*)`` for the optimal diagonal dual ``y*``.

    Questions with an all-zero row and column are removed first; their dual
    entries are reported as 0.
    """
    if not is_synchronous_xor(g):
        raise ValueError("balancedness is defined for synchronous XOR games only")
    a = cost_matrices(g).a_sym
    keep = np.flatnonzero(np.any(a != 0, axis=1))
    y = np.zeros(g.n)
    if keep.size == 0:
        return True, y
    sub = a[np.ix_(keep, keep)]
    y_sub, _ = sdp.solve_diag_dual(sub, **solver_kw)
    y[keep] = y_sub
    d = np.diag(y_sub)
    ok = linalg.is_psd(d - sub, PSD_CHECK_TOL) and linalg.is_psd(d + sub, PSD_CHECK_TOL)
    return bool(ok), y


@dataclass(frozen=True, eq=False)
class BiasReport:
    omega: float
    omega_sync: float
    bias: float
    bias_sync: float
    balanced: bool | None
    dual_y: np.ndarray
    gap: float
    gap_sync: float
    certified: bool
    certified_sync: bool
    bounds: tuple[float, float]
    bounds_sync: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "omega": self.omega,
            "omega_sync": self.omega_sync,
            "bias": self.bias,
            "bias_sync": self.bias_sync,
            "balanced": self.balanced,
            "dual_y": [float(v) for v in self.dual_y],
            "gap": self.gap,
            "gap_sync": self.gap_sync,
            "certified": self.certified,
            "certified_sync": self.certified_sync,
            "omega_bounds": list(self.bounds),
            "omega_sync_bounds": list(self.bounds_sync),
        }


def bias_report(g: XorGame, **solver_kw) -> BiasReport:
    """All four values of an XOR game plus balancedness; never raises on a gap."""
    cm = cost_matrices(g)
    full = sdp.solve_elliptope(cm.b, **solver_kw)
    sync = sdp.solve_elliptope(cm.a_sym, **solver_kw)
    omega = 0.5 + 0.5 * full.value
    omega_s = 0.5 + 0.5 * sync.value
    balanced = None
    if is_synchronous_xor(g):
        balanced, _ = balanced_check(g, **solver_kw)
    return BiasReport(
        omega=omega,
        omega_sync=omega_s,
        bias=2.0 * omega - 1.0,
        bias_sync=2.0 * omega_s - 1.0,
        balanced=balanced,
        dual_y=sync.dual,
        gap=full.gap,
        gap_sync=sync.gap,
        certified=full.certified,
        certified_sync=sync.certified,
        bounds=(omega, 0.5 + 0.5 * full.upper),
        bounds_sync=(omega_s, 0.5 + 0.5 * sync.upper),
    )


def cycle_threshold(n: int) -> float:
    """Edge weight above which the quantum value of the symmetric odd-cycle game is ``p``."""
    return 1.0 / (2.0 - math.cos(math.pi / (2 * n)) ** 2)


def cycle_closed_forms(n: int, p: float | None = None) -> dict:
    """Closed-form values of the 2-colouring game of the odd cycle C_n.

    ``p=None``: prior ``1/(2n)`` on ``(x, x)`` and ``(x, x+1)``.
    Otherwise: ``p/(2n)`` on each ordered edge, ``(1-p)/n`` on the diagonal.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    c2 = math.cos(math.pi / (2 * n)) ** 2
    if p is None:
        return {
            "n": n,
            "p": None,
            "omega_q": math.cos(math.pi / (4 * n)) ** 2,
            "omega_q_sync": 0.5 + 0.5 * c2,
        }
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    q = 1.0 - p
    thr = cycle_threshold(n)
    sync = q + p * c2
    return {
        "n": n,
        "p": p,
        "threshold": thr,
        "omega_q": p if p > thr + THRESHOLD_GUARD else sync,
        "omega_q_sync": sync,
    }
