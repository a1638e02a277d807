"""Exact classical values by exhaustive enumeration.

Questions that carry no prior weight are pruned before enumerating (their
answers are fixed to 0 in the witness). For the ordinary local value only
one player's functions are enumerated; the other plays a best response,
choosing the lowest-index answer on ties.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .games import (
    GameInstance,
    Graph,
    complete_graph,
    coloring_game,
    uniform_edge_prior,
)

DEFAULT_CAP = 10**8
TIE_TOL = 1e-12


class EnumerationCapError(RuntimeError):
    """The search space exceeds the enumeration cap."""


@dataclass(frozen=True)
class DeterministicStrategy:
    f_a: tuple[int, ...]
    f_b: tuple[int, ...]


def _relevant(mask: np.ndarray) -> np.ndarray:
    return np.flatnonzero(mask)


def _check_cap(k: int, count: int, cap: int) -> int:
    size = k**count
    if size > cap:
        raise EnumerationCapError(
            f"{k}^{count} = {size} assignments exceeds the enumeration cap {cap}; "
            "exploit product structure or raise the cap"
        )
    return size


def local_value(
    inst: GameInstance, cap: int = DEFAULT_CAP, backend: str | None = None
) -> tuple[float, DeterministicStrategy]:
    """Best winning probability over pairs of deterministic functions."""
    kern = _backend.get(backend)
    g = inst.game
    pi = inst.prior.pi
    w = inst.weights()
    ra = _relevant(pi.sum(axis=1) > 0)
    rb = _relevant(pi.sum(axis=0) > 0)
    size_a = g.k_a ** len(ra)
    size_b = g.k_b ** len(rb)
    if min(size_a, size_b) > cap:
        _check_cap(min(g.k_a, g.k_b), min(len(ra), len(rb)), cap)
    sub = w[np.ix_(ra, rb)]
    f_a = np.zeros(g.n_a, dtype=np.int64)
    f_b = np.zeros(g.n_b, dtype=np.int64)
    if size_a <= size_b:
        value, wit = kern.alice_search(sub, TIE_TOL)
        f_a[ra] = wit
        resp = w[ra[:, None], np.arange(g.n_b)[None, :], wit[:, None], :].sum(axis=0)
        f_b[rb] = np.argmax(resp[rb], axis=1)
    else:
        value, wit = kern.alice_search(sub.transpose(1, 0, 3, 2), TIE_TOL)
        f_b[rb] = wit
        resp = w[np.arange(g.n_a)[:, None], rb[None, :], :, wit[None, :]].sum(axis=1)
        f_a[ra] = np.argmax(resp[ra], axis=1)
    strat = DeterministicStrategy(tuple(int(v) for v in f_a), tuple(int(v) for v in f_b))
    return float(value), strat


def sync_local_value(
    inst: GameInstance, cap: int = DEFAULT_CAP, backend: str | None = None
) -> tuple[float, tuple[int, ...]]:
    """Best winning probability when both players use the same function."""
    g = inst.game
    if not g.is_square:
        raise ValueError(f"synchronous value needs a square game, got shape {g.shape}")
    kern = _backend.get(backend)
    pi = inst.prior.pi
    r = _relevant((pi.sum(axis=0) + pi.sum(axis=1)) > 0)
    _check_cap(g.k_a, len(r), cap)
    w = inst.weights()[np.ix_(r, r)]
    value, wit = kern.sync_search(w, TIE_TOL)
    f = np.zeros(g.n_a, dtype=np.int64)
    f[r] = wit
    return float(value), tuple(int(v) for v in f)


def strategy_value(inst: GameInstance, f_a, f_b=None) -> float:
    """Winning probability of a deterministic strategy, summed directly."""
    f_b = f_a if f_b is None else f_b
    w = inst.weights()
    xs = np.arange(inst.game.n_a)[:, None]
    ys = np.arange(inst.game.n_b)[None, :]
    return float(w[xs, ys, np.asarray(f_a)[:, None], np.asarray(f_b)[None, :]].sum())


def max_c_cut(
    g: Graph, c: int, cap: int = DEFAULT_CAP, backend: str | None = None
) -> tuple[int, tuple[int, ...]]:
    """Maximum number of (unordered) edges whose endpoints get different colours."""
    if c < 1:
        raise ValueError("need at least one colour")
    kern = _backend.get(backend)
    part = np.zeros(g.n, dtype=np.int64)
    if not g.edges:
        return 0, tuple(int(v) for v in part)
    adj = g.adjacency()
    r = _relevant(adj.sum(axis=0) > 0)
    _check_cap(c, len(r), cap)
    differ = 1.0 - np.eye(c)
    w = adj[np.ix_(r, r)][:, :, None, None] * differ[None, None, :, :]
    value, wit = kern.sync_search(w, 0.5)
    part[r] = wit
    return int(round(value)) // 2, tuple(int(v) for v in part)


def bipartite_double_cover(g: Graph) -> Graph:
    """Vertices ``(x, i)`` as ``x + i * n``; ``(x, 0) ~ (y, 1)`` iff ``x ~ y``."""
    n = g.n
    edges = set()
    for u, v in g.edges:
        edges.add((u, v + n))
        edges.add((v, u + n))
    return Graph(2 * n, frozenset(edges))


@dataclass(frozen=True)
class CompleteGraphCrossCheck:
    n: int
    c: int
    brute_force: float
    closed_form: float
    discrepancy: bool


def complete_graph_crosscheck(
    n: int, c: int, tol: float = 1e-9, backend: str | None = None
) -> CompleteGraphCrossCheck:
    """Exact synchronous local value of ``c``-colouring K_n vs ``1 + 1/n - 1/c``.

    Uses the uniform prior on ordered edges. The brute-force number is the
    ground truth; ``discrepancy`` records whether the closed form disagrees.
    """
    g = complete_graph(n)
    inst = GameInstance(coloring_game(g, c), uniform_edge_prior(g))
    value, _ = sync_local_value(inst, backend=backend)
    closed = 1.0 + 1.0 / n - 1.0 / c
    return CompleteGraphCrossCheck(n, c, value, closed, abs(value - closed) > tol)
