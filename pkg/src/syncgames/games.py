"""Games, prior distributions, graphs and the constructions built from them.

Index conventions
-----------------
Rule tensors are indexed ``rule[x, y, a, b]`` (Alice question, Bob question,
Alice answer, Bob answer). Products pair indices row-major, so the pair
``(x1, x2)`` becomes ``x1 * n2 + x2``; the same holds for answers and for
the questions of an XOR-sum.

Graphs store unordered edges ``(u, v)`` with ``u < v``. Formulas that follow
the ordered-pair convention use :attr:`Graph.ordered_edge_count`, which is
twice the number of edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

#: Default cap on the number of rule-tensor entries a product may create.
DEFAULT_TENSOR_CAP = 1 << 28

PRIOR_TOL = 1e-12


class SizeLimitError(ValueError):
    """A construction would exceed the dense-tensor memory cap."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Game:
    """Finite two-player game given by its 0/1 rule tensor ``rule[x, y, a, b]``."""

    rule: np.ndarray

    def __post_init__(self):
        rule = np.asarray(self.rule)
        if rule.ndim != 4:
            raise ValueError(f"rule tensor must be 4-dimensional, got shape {rule.shape}")
        if rule.size and not np.all((rule == 0) | (rule == 1)):
            raise ValueError("rule entries must be exactly 0 or 1")
        object.__setattr__(self, "rule", _frozen(rule.astype(np.uint8)))

    @property
    def n_a(self) -> int:
        return self.rule.shape[0]

    @property
    def n_b(self) -> int:
        return self.rule.shape[1]

    @property
    def k_a(self) -> int:
        return self.rule.shape[2]

    @property
    def k_b(self) -> int:
        return self.rule.shape[3]

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.rule.shape

    @property
    def is_square(self) -> bool:
        return self.n_a == self.n_b and self.k_a == self.k_b

    def winning_set(self) -> list[tuple[int, int, int, int]]:
        return [tuple(int(i) for i in t) for t in np.argwhere(self.rule == 1)]

    def null_set(self) -> list[tuple[int, int, int, int]]:
        return [tuple(int(i) for i in t) for t in np.argwhere(self.rule == 0)]

    @classmethod
    def from_win_tuples(cls, n_a, n_b, k_a, k_b, win) -> "Game":
        rule = np.zeros((n_a, n_b, k_a, k_b), dtype=np.uint8)
        for x, y, a, b in win:
            rule[x, y, a, b] = 1
        return cls(rule)

    def __eq__(self, other):
        return isinstance(other, Game) and np.array_equal(self.rule, other.rule)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PriorDistribution:
    """Probability matrix over question pairs. Unnormalised input is rejected."""

    pi: np.ndarray

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=np.float64)
        if pi.ndim != 2:
            raise ValueError(f"prior must be a matrix, got shape {pi.shape}")
        if not np.all(np.isfinite(pi)):
            raise ValueError("prior has non-finite entries")
        if np.any(pi < 0):
            raise ValueError("prior has negative entries")
        total = float(pi.sum())
        if abs(total - 1.0) > PRIOR_TOL:
            raise ValueError(f"prior sums to {total!r}, expected 1 (within {PRIOR_TOL})")
        object.__setattr__(self, "pi", _frozen(pi))

    @property
    def shape(self) -> tuple[int, int]:
        return self.pi.shape

    def is_symmetric(self, tol: float = PRIOR_TOL) -> bool:
        return self.pi.shape[0] == self.pi.shape[1] and bool(
            np.all(np.abs(self.pi - self.pi.T) <= tol)
        )

    @classmethod
    def uniform(cls, n_a: int, n_b: int) -> "PriorDistribution":
        return cls(np.full((n_a, n_b), 1.0 / (n_a * n_b)))


@dataclass(frozen=True)
class GameInstance:
    """A game together with the distribution its questions are drawn from."""

    game: Game
    prior: PriorDistribution

    def __post_init__(self):
        if self.prior.shape != (self.game.n_a, self.game.n_b):
            raise ValueError(
                f"prior shape {self.prior.shape} does not match inputs "
                f"({self.game.n_a}, {self.game.n_b})"
            )

    def weights(self) -> np.ndarray:
        """``pi(x, y) * rule(x, y, a, b)`` as a float tensor."""
        return self.prior.pi[:, :, None, None] * self.game.rule


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = (int(i) for i in e)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build from a list of unordered pairs, rejecting duplicates."""
        seen = set()
        for e in edges:
            u, v = (int(i) for i in e)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def ordered_edge_count(self) -> int:
        return 2 * len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n))
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = 1.0
        return adj

    def degree(self, x: int) -> int:
        return sum(1 for e in self.edges if x in e)

    def neighbours(self, x: int) -> list[int]:
        return sorted(v if u == x else u for u, v in self.edges if x in (u, v))

    def is_bipartite(self) -> bool:
        side = [-1] * self.n
        adj = [self.neighbours(x) for x in range(self.n)]
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for v in adj[u]:
                    if side[v] < 0:
                        side[v] = 1 - side[u]
                        stack.append(v)
                    elif side[v] == side[u]:
                        return False
        return True


@dataclass(frozen=True, eq=False)
class XorGame:
    """Binary-answer game won iff ``a XOR b == f(x, y)``."""

    f: np.ndarray
    prior: PriorDistribution

    def __post_init__(self):
        f = np.asarray(self.f)
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValueError(f"rule function must be square, got shape {f.shape}")
        if f.size and not np.all((f == 0) | (f == 1)):
            raise ValueError("rule function entries must be 0 or 1")
        if self.prior.shape != f.shape:
            raise ValueError("prior and rule function shapes differ")
        object.__setattr__(self, "f", _frozen(f.astype(np.uint8)))

    @property
    def n(self) -> int:
        return self.f.shape[0]

    def to_game(self) -> Game:
        a = np.arange(2)
        xor = a[:, None] ^ a[None, :]
        rule = (xor[None, None, :, :] == self.f[:, :, None, None]).astype(np.uint8)
        return Game(rule)

    def to_instance(self) -> GameInstance:
        return GameInstance(self.to_game(), self.prior)

    @classmethod
    def from_instance(cls, inst: GameInstance, tol: float = 0.0) -> "XorGame":
        """Recover the XOR structure of a two-answer game.

        Question pairs with zero prior weight are don't-cares and get
        ``f = 0``; every other pair must follow an XOR pattern.
        """
        g = inst.game
        if not (g.is_square and g.k_a == 2):
            raise ValueError("XOR games need square question sets and two answers")
        f = np.zeros((g.n_a, g.n_b), dtype=np.uint8)
        for x in range(g.n_a):
            for y in range(g.n_b):
                block = g.rule[x, y]
                if inst.prior.pi[x, y] <= tol:
                    continue
                if np.array_equal(block, [[1, 0], [0, 1]]):
                    f[x, y] = 0
                elif np.array_equal(block, [[0, 1], [1, 0]]):
                    f[x, y] = 1
                else:
                    raise ValueError(f"question pair {(x, y)} is not an XOR constraint")
        return cls(f, inst.prior)


def _square_check(game: Game) -> None:
    if not game.is_square:
        raise ValueError(
            "synchronicity/symmetry need equal question and answer sets, got "
            f"shape {game.shape}"
        )


def is_synchronous(game: Game) -> bool:
    """True iff equal questions forbid unequal answers."""
    _square_check(game)
    n, k = game.n_a, game.k_a
    off = ~np.eye(k, dtype=bool)
    diag = game.rule[np.arange(n), np.arange(n)]
    return not bool(np.any(diag[:, off]))


def is_symmetric(game: Game, prior: PriorDistribution) -> tuple[bool, bool]:
    """(rule invariant under swapping players, prior symmetric as a matrix)."""
    _square_check(game)
    rule_sym = bool(np.array_equal(game.rule, game.rule.transpose(1, 0, 3, 2)))
    return rule_sym, prior.is_symmetric()


def coloring_game(g: Graph, c: int) -> Game:
    """The graph ``c``-colouring game Hom(G, K_c)."""
    if c < 2:
        raise ValueError("colour count must be at least 2")
    rule = np.ones((g.n, g.n, c, c), dtype=np.uint8)
    same = np.eye(c, dtype=bool)
    for u, v in g.edges:
        rule[u, v][same] = 0
        rule[v, u][same] = 0
    for x in range(g.n):
        rule[x, x][~same] = 0
    return Game(rule)


def uniform_edge_prior(g: Graph) -> PriorDistribution:
    """Uniform distribution over ordered edges."""
    if not g.edges:
        raise ValueError("graph has no edges")
    pi = g.adjacency() / g.ordered_edge_count
    return PriorDistribution(pi)


def _check_cap(entries: int, cap: int) -> None:
    if entries > cap:
        raise SizeLimitError(f"product would need {entries} tensor entries (cap {cap})")


def product_game(g1: GameInstance, g2: GameInstance, cap: int = DEFAULT_TENSOR_CAP) -> GameInstance:
    """Parallel play of two games: win iff both are won."""
    r1, r2 = g1.game.rule, g2.game.rule
    _check_cap(r1.size * r2.size, cap)
    n_a, n_b, k_a, k_b = (s1 * s2 for s1, s2 in zip(r1.shape, r2.shape))
    rule = np.einsum("xyab,XYAB->xXyYaAbB", r1, r2).reshape(n_a, n_b, k_a, k_b)
    pi = np.einsum("xy,XY->xXyY", g1.prior.pi, g2.prior.pi).reshape(n_a, n_b)
    return GameInstance(Game(rule), PriorDistribution(pi))


def xor_sum(g1: XorGame, g2: XorGame) -> XorGame:
    """XOR of XOR games: the target bit is ``f1 XOR f2``, priors multiply."""
    n = g1.n * g2.n
    f = (g1.f[:, None, :, None] ^ g2.f[None, :, None, :]).reshape(n, n)
    pi = np.einsum("xy,XY->xXyY", g1.prior.pi, g2.prior.pi).reshape(n, n)
    return XorGame(f, PriorDistribution(pi))


def seyed_game(n: int = 1) -> GameInstance:
    """``n``-fold product of the two-question game whose Bob always gets question 1.

    Single copy: ``pi(0, 1) = pi(1, 1) = 1/2``; the winning tuples are
    ``(0, 1, 1, 1)`` and ``(1, 1, 0, 1)``.
    """
    if n < 1:
        raise ValueError("repetition count must be at least 1")
    base = GameInstance(
        Game.from_win_tuples(2, 2, 2, 2, [(0, 1, 1, 1), (1, 1, 0, 1)]),
        PriorDistribution(np.array([[0.0, 0.5], [0.0, 0.5]])),
    )
    inst = base
    for _ in range(n - 1):
        inst = product_game(inst, base)
    return inst


# -- standard instances ------------------------------------------------------


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset((j, (j + 1) % n) for j in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((j, j + 1) for j in range(n - 1)))


def chsh_game() -> XorGame:
    """CHSH: win iff ``a XOR b = x * y``, uniform questions."""
    f = np.array([[0, 0], [0, 1]])
    return XorGame(f, PriorDistribution.uniform(2, 2))


def trivial_xor_game() -> XorGame:
    """One question, ``f = 0``; the unit for :func:`xor_sum`."""
    return XorGame(np.zeros((1, 1)), PriorDistribution(np.ones((1, 1))))


def example67_game() -> XorGame:
    """Three-question synchronous XOR game with cost matrix (1/21)[[1,-3,-3],...]."""
    pi = np.array([[1.0, 3.0, 3.0], [3.0, 1.0, 3.0], [3.0, 3.0, 1.0]]) / 21.0
    f = 1 - np.eye(3, dtype=np.uint8)
    return XorGame(f, PriorDistribution(pi))


def nonsymmetric_cycle_prior(n: int) -> PriorDistribution:
    """Mass ``1/(2n)`` on ``(x, x)`` and ``(x, x+1 mod n)``."""
    pi = np.zeros((n, n))
    for x in range(n):
        pi[x, x] += 1.0 / (2 * n)
        pi[x, (x + 1) % n] += 1.0 / (2 * n)
    return PriorDistribution(pi)


def symmetric_cycle_prior(n: int, p: float) -> PriorDistribution:
    """Mass ``p/(2n)`` on each ordered edge of C_n and ``(1-p)/n`` on the diagonal."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    q = 1.0 - p
    pi = np.zeros((n, n))
    for x in range(n):
        pi[x, x] = q / n
        pi[x, (x + 1) % n] = p / (2 * n)
        pi[(x + 1) % n, x] = p / (2 * n)
    return PriorDistribution(pi)


def coloring_xor_game(g: Graph, prior: PriorDistribution) -> XorGame:
    """View the 2-colouring game as an XOR game.

    Only valid when ``prior`` vanishes on distinct non-adjacent pairs; ``f``
    is 1 on edges and 0 everywhere else.
    """
    adj = g.adjacency().astype(bool)
    off = ~np.eye(g.n, dtype=bool) & ~adj
    if np.any(prior.pi[off] > 0):
        raise ValueError("prior puts weight on non-adjacent distinct vertices")
    return XorGame(adj.astype(np.uint8), prior)


def cycle_xor_game(n: int, p: float | None = None) -> XorGame:
    """2-colouring game of the odd cycle C_n as an XOR game.

    ``p=None`` selects the non-symmetric prior, otherwise the symmetric one
    with edge weight ``p``.
    """
    prior = nonsymmetric_cycle_prior(n) if p is None else symmetric_cycle_prior(n, p)
    return coloring_xor_game(cycle_graph(n), prior)
