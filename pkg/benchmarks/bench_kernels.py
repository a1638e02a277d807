"""Compare the compiled and numpy kernels on the hot loops.

    python benchmarks/bench_kernels.py [--repeat 3] [--csv]
"""
import argparse
import sys
import time

import numpy as np

from syncgames import _backend, _pykernels
from syncgames import games as G


def _best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    rng = np.random.default_rng(0)
    seyed3 = G.seyed_game(3).weights()  # every question is asked, so nothing to prune
    k = G.complete_graph(9).adjacency()[:, :, None, None] * (1 - np.eye(3))[None, None]
    alice = rng.random((10, 6, 3, 3))
    sym = rng.standard_normal((60, 60))
    sym = sym + sym.T
    yield "sync_search seyed(3) 8^8", "sync_search", (seyed3, 1e-12)
    yield "sync_search K9 3-cut", "sync_search", (k, 0.5)
    yield "alice_search 3^10 x best response", "alice_search", (alice, 1e-12)
    yield "jacobi_eigh 60x60", "jacobi_eigh", (sym, 100, 1e-12)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--csv", action="store_true")
    args = ap.parse_args(argv)
    if _backend.compiled is None:
        print("compiled kernels not available; build with `pip install -e . --no-build-isolation`", file=sys.stderr)
    rows = []
    for label, name, params in cases():
        t_py, r_py = _best_time(lambda: getattr(_pykernels, name)(*params), args.repeat)
        if _backend.compiled is not None:
            t_cy, r_cy = _best_time(lambda: getattr(_backend.compiled, name)(*params), args.repeat)
            agree = np.allclose(np.asarray(r_py[0]), np.asarray(r_cy[0]))
        else:
            t_cy, agree = float("nan"), None
        rows.append((label, t_py, t_cy, t_py / t_cy, agree))
    if args.csv:
        print("case,python_s,cython_s,speedup,agree")
        for r in rows:
            print(",".join(str(v) for v in r))
    else:
        print(f"{'case':<36}{'python [s]':>12}{'cython [s]':>12}{'speedup':>9}  agree")
        for label, tp, tc, sp, ag in rows:
            print(f"{label:<36}{tp:>12.4f}{tc:>12.4f}{sp:>9.2f}  {ag}")


if __name__ == "__main__":
    main()
