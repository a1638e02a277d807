"""JSON readers and writers for graphs, games, XOR games and PVM families.

Formats
-------
graph:  ``{"n": 5, "edges": [[0, 1], ...]}``
game:   ``{"n_a", "n_b", "k_a", "k_b", "win": [[x, y, a, b], ...], "pi": [[...]]}``
        (``pi`` optional, uniform when absent; listed tuples win, all others lose)
xor:    ``{"n": 2, "f": [[0, 0], [0, 1]], "pi": [[...]]}``
pvm:    ``{"n", "k", "m", "matrices": [x][a][row][col] = [re, im]}``

Structural problems raise :class:`ParseError`; objects that parse but break
a domain invariant (unnormalised prior, non-projection) raise the domain
error (a ``ValueError``).
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .games import Game, GameInstance, Graph, PriorDistribution, XorGame
from .strategies import PovmFamily, PvmFamily


class ParseError(ValueError):
    """Input is not valid JSON or does not have the expected structure."""


def bundled(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("syncgames") / "data" / name))


def bundled_names() -> list[str]:
    return sorted(p.name for p in resources.files("syncgames").joinpath("data").iterdir()
                  if p.name.endswith(".json"))


def resolve(path: str | Path) -> Path:
    """``path`` itself if it exists, else the bundled file of that name."""
    p = Path(path)
    if p.exists():
        return p
    b = bundled(p.name)
    if b.exists():
        return b
    raise ParseError(f"no such file: {path}")


def read_json(path: str | Path):
    p = resolve(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: invalid JSON ({exc})") from exc


def _field(obj, key):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object at top level")
    if key not in obj:
        raise ParseError(f"missing field {key!r}")
    return obj[key]


def _int(obj, key, minimum=0) -> int:
    v = _field(obj, key)
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ParseError(f"field {key!r} must be an integer >= {minimum}")
    return v


def _matrix(obj, key, shape) -> np.ndarray:
    try:
        arr = np.asarray(_field(obj, key), dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field {key!r} is not a numeric matrix") from exc
    if arr.shape != shape:
        raise ParseError(f"field {key!r} has shape {arr.shape}, expected {shape}")
    return arr


def parse_graph(obj) -> Graph:
    n = _int(obj, "n")
    edges = _field(obj, "edges")
    if not isinstance(edges, list) or any(
        not isinstance(e, list) or len(e) != 2 or not all(isinstance(i, int) for i in e)
        for e in edges
    ):
        raise ParseError("edges must be a list of [u, v] integer pairs")
    return Graph.from_edges(n, edges)


def parse_xor(obj) -> XorGame:
    n = _int(obj, "n", 1)
    f = _matrix(obj, "f", (n, n))
    pi = _matrix(obj, "pi", (n, n))
    return XorGame(f, PriorDistribution(pi))


def parse_game(obj) -> GameInstance:
    """A game file, or an XOR file (recognised by its ``f`` field)."""
    if isinstance(obj, dict) and "f" in obj:
        return parse_xor(obj).to_instance()
    n_a, n_b = _int(obj, "n_a", 1), _int(obj, "n_b", 1)
    k_a, k_b = _int(obj, "k_a", 1), _int(obj, "k_b", 1)
    win = _field(obj, "win")
    try:
        tuples = np.asarray(win, dtype=np.int64).reshape(-1, 4)
    except (TypeError, ValueError) as exc:
        raise ParseError("win must be a list of [x, y, a, b] tuples") from exc
    bounds = np.array([n_a, n_b, k_a, k_b])
    if np.any(tuples < 0) or np.any(tuples >= bounds):
        raise ParseError("win tuple out of range")
    game = Game.from_win_tuples(n_a, n_b, k_a, k_b, tuples.tolist())
    if "pi" in obj:
        prior = PriorDistribution(_matrix(obj, "pi", (n_a, n_b)))
    else:
        prior = PriorDistribution.uniform(n_a, n_b)
    return GameInstance(game, prior)


def parse_pvm(obj, projective: bool = True) -> PovmFamily:
    n, k, m = _int(obj, "n", 1), _int(obj, "k", 1), _int(obj, "m", 1)
    try:
        raw = np.asarray(_field(obj, "matrices"), dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError("matrices must be nested [re, im] pairs") from exc
    if raw.shape != (n, k, m, m, 2):
        raise ParseError(f"matrices have shape {raw.shape}, expected {(n, k, m, m, 2)}")
    e = raw[..., 0] + 1j * raw[..., 1]
    return (PvmFamily if projective else PovmFamily)(e)


def load_graph(path) -> Graph:
    return parse_graph(read_json(path))


def load_game(path) -> GameInstance:
    return parse_game(read_json(path))


def load_xor(path) -> XorGame:
    return parse_xor(read_json(path))


def load_pvm(path, projective: bool = True) -> PovmFamily:
    return parse_pvm(read_json(path), projective)


# -- writers -----------------------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def game_to_json(inst: GameInstance) -> dict:
    g = inst.game
    return {
        "n_a": g.n_a,
        "n_b": g.n_b,
        "k_a": g.k_a,
        "k_b": g.k_b,
        "win": [list(t) for t in g.winning_set()],
        "pi": inst.prior.pi.tolist(),
    }


def xor_to_json(g: XorGame) -> dict:
    return {"n": g.n, "f": g.f.astype(int).tolist(), "pi": g.prior.pi.tolist()}


def pvm_to_json(fam: PovmFamily) -> dict:
    e = np.asarray(fam.e)
    return {
        "n": fam.n,
        "k": fam.k,
        "m": fam.m,
        "matrices": np.stack([e.real, e.imag], axis=-1).tolist(),
    }


def dumps(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))
