"""Command-line front end.

Exit codes: 0 ok, 1 a checked condition failed, 2 unreadable input,
3 enumeration cap exceeded, 4 SDP not certified (values still printed),
5 unsupported request, 6 input object violates its invariants.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
from dataclasses import dataclass, field

from . import classical, sdp, strategies, xor
from . import io as sio
from .games import GameInstance, coloring_game, cycle_graph, complete_graph, seyed_game, uniform_edge_prior
from .games import cycle_xor_game

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_UNCERTIFIED = 4
EXIT_UNSUPPORTED = 5
EXIT_INVALID = 6


@dataclass
class RunConfig:
    seed: int = sdp.DEFAULT_SEED
    restarts: int = sdp.DEFAULT_RESTARTS
    tolerances: dict = field(default_factory=lambda: {"gap": sdp.GAP_TOL, "check": strategies.CHECK_TOL})
    output_format: str = "table"
    quiet: bool = False

    def solver_kw(self) -> dict:
        return {"seed": self.seed, "restarts": self.restarts, "gap_tol": self.tolerances["gap"]}


class _Unsupported(Exception):
    pass


# -- output ------------------------------------------------------------------


def _fmt(v, precise: bool) -> str:
    if isinstance(v, bool) or v is None:
        return {True: "true", False: "false", None: ""}[v]
    if isinstance(v, float):
        return format(v, ".17g") if precise else format(v, ".10g")
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x, precise) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def render(records: list[dict], fmt: str) -> str:
    """Render result rows as an aligned table, JSON or CSV (17 significant digits)."""
    if fmt == "json":
        body = [{k: _jsonable(v) for k, v in r.items()} for r in records]
        return json.dumps(body[0] if len(body) == 1 else body, indent=2) + "\n"
    keys = list(records[0]) if records else []
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in records:
            w.writerow([_fmt(r.get(k), True) for k in keys])
        return buf.getvalue()
    if len(records) == 1:
        width = max(len(k) for k in keys)
        return "".join(f"{k:<{width}}  {_fmt(v, False)}\n" for k, v in records[0].items())
    cells = [[_fmt(r.get(k), False) for k in keys] for r in records]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------


def cmd_classical(args, cfg: RunConfig):
    inst = sio.load_game(args.game)
    if args.sync:
        value, f = classical.sync_local_value(inst, cap=args.cap)
        rec = {"sync_local_value": value, "f": list(f)}
    else:
        value, strat = classical.local_value(inst, cap=args.cap)
        rec = {"local_value": value, "f_a": list(strat.f_a), "f_b": list(strat.f_b)}
    return [rec], EXIT_OK


def cmd_xor(args, cfg: RunConfig):
    g = sio.load_xor(args.xor)
    r = xor.bias_report(g, **cfg.solver_kw())
    rec = {
        "omega": r.omega,
        "omega_lower": r.bounds[0],
        "omega_upper": r.bounds[1],
        "omega_sync": r.omega_sync,
        "omega_sync_lower": r.bounds_sync[0],
        "omega_sync_upper": r.bounds_sync[1],
        "bias": r.bias,
        "bias_sync": r.bias_sync,
        "balanced": r.balanced,
        "dual_y": [float(v) for v in r.dual_y],
        "gap": r.gap,
        "gap_sync": r.gap_sync,
        "certified": r.certified and r.certified_sync,
    }
    return [rec], EXIT_OK if rec["certified"] else EXIT_UNCERTIFIED


def cmd_cut(args, cfg: RunConfig):
    g = sio.load_graph(args.graph)
    if args.quantum and args.c != 2:
        raise _Unsupported("quantum cut is only available for c = 2")
    cut, part = classical.max_c_cut(g, args.c, cap=args.cap)
    rec = {"c": args.c, "edges": g.edge_count, "cut": cut, "partition": list(part)}
    code = EXIT_OK
    if args.quantum:
        if not g.edges:
            raise _Unsupported("quantum cut needs at least one edge")
        kw = cfg.solver_kw()
        sol = sdp.solve_elliptope(-g.adjacency(), **kw)
        e2 = g.ordered_edge_count
        cut_q = e2 / 4.0 + sol.value / 4.0
        omega_s = xor.two_coloring_sync_value(g, strict=False, **kw)
        rec.update(
            cut_q=cut_q,
            cut_q_upper=e2 / 4.0 + sol.upper / 4.0,
            graph_corr_half=0.5 * e2 * (1.0 - omega_s),
            omega_sync_2col=omega_s,
            gap=sol.gap,
            certified=sol.certified,
        )
        if not sol.certified:
            code = EXIT_UNCERTIFIED
    return [rec], code


def cmd_cycle_table(args, cfg: RunConfig):
    kw = cfg.solver_kw()
    rows, code = [], EXIT_OK
    for n in range(3, args.n_max + 1, 2):
        cf = xor.cycle_closed_forms(n, args.p)
        g = cycle_xor_game(n, args.p)
        cm = xor.cost_matrices(g)
        full = sdp.solve_elliptope(cm.b, **kw)
        sync = sdp.solve_elliptope(cm.a_sym, **kw)
        w, ws = 0.5 + 0.5 * full.value, 0.5 + 0.5 * sync.value
        rows.append({
            "n": n,
            "omega_closed": cf["omega_q"],
            "omega_sdp": w,
            "omega_delta": abs(w - cf["omega_q"]),
            "omega_sync_closed": cf["omega_q_sync"],
            "omega_sync_sdp": ws,
            "omega_sync_delta": abs(ws - cf["omega_q_sync"]),
            "certified": full.certified and sync.certified,
        })
        if not rows[-1]["certified"]:
            code = EXIT_UNCERTIFIED
    return rows, code


def cmd_check_pvm(args, cfg: RunConfig):
    inst = sio.load_game(args.game)
    fam = sio.load_pvm(args.pvm)
    tol = cfg.tolerances["check"]
    fo = strategies.check_first_order(inst, fam, tol)
    ex = strategies.check_exchange_inequality(inst, fam, tol)
    rec = {
        "value": strategies.game_value(inst, strategies.density_from_pvm(fam)),
        "first_order": fo.passed,
        "first_order_residual": fo.value,
        "exchange": ex.passed,
        "exchange_worst": ex.value,
    }
    ok = fo.passed and ex.passed
    try:
        pr = strategies.check_povm_conditions(inst, fam, tol)
    except ValueError:
        rec["povm_conditions"] = "n/a"
    else:
        rec.update(
            povm_conditions=pr.passed,
            povm_psd_worst=pr.worst_psd,
            povm_annihilation_worst=pr.worst_annihilation,
            povm_sum_worst=pr.worst_sum,
        )
        ok = ok and pr.passed
    if (fam.n, fam.k) == (2, 2):
        rec["commutator_norm"] = strategies.chsh_commutation_audit(fam)
    return [rec], EXIT_OK if ok else EXIT_FAIL


def cmd_crosscheck_kn(args, cfg: RunConfig):
    r = classical.complete_graph_crosscheck(args.n, args.c)
    rec = {"n": r.n, "c": r.c, "brute_force": r.brute_force,
           "closed_form": r.closed_form, "discrepancy": r.discrepancy}
    return [rec], EXIT_OK


def cmd_generate(args, cfg: RunConfig):
    kind = args.kind
    if kind == "cycle":
        obj = sio.graph_to_json(cycle_graph(args.n))
    elif kind == "complete":
        obj = sio.graph_to_json(complete_graph(args.n))
    elif kind == "cycle-xor":
        obj = sio.xor_to_json(cycle_xor_game(args.n, args.p))
    elif kind == "coloring":
        g = cycle_graph(args.n) if args.graph is None else sio.load_graph(args.graph)
        obj = sio.game_to_json(GameInstance(coloring_game(g, args.c), uniform_edge_prior(g)))
    else:
        obj = sio.game_to_json(seyed_game(args.n))
    return obj, EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=sdp.DEFAULT_SEED, help="base RNG seed (restart j uses seed+j)")
    common.add_argument("--restarts", type=int, default=sdp.DEFAULT_RESTARTS, help="SDP random restarts")
    common.add_argument("--tol-gap", type=float, default=sdp.GAP_TOL, help="relative duality-gap tolerance")
    common.add_argument("--tol-check", type=float, default=strategies.CHECK_TOL, help="tolerance of the PVM checks")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--quiet", action="store_true", help="print nothing; report through the exit code")

    p = argparse.ArgumentParser(prog="syncgames", description="Values of nonlocal, synchronous and XOR games.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classical", parents=[common], help="exact (synchronous) local value")
    s.add_argument("game", help="game or XOR-game JSON file")
    s.add_argument("--sync", action="store_true", help="both players use the same function")
    s.add_argument("--cap", type=int, default=classical.DEFAULT_CAP, help="enumeration cap")
    s.set_defaults(func=cmd_classical)

    s = sub.add_parser("xor", parents=[common], help="quantum and synchronous values of an XOR game")
    s.add_argument("xor", help="XOR-game JSON file")
    s.set_defaults(func=cmd_xor)

    s = sub.add_parser("cut", parents=[common], help="max c-cut, optionally with the quantum 2-cut")
    s.add_argument("graph", help="graph JSON file")
    s.add_argument("--c", type=int, default=2, help="number of colours")
    s.add_argument("--quantum", action="store_true", help="also compute the quantum 2-cut (c = 2 only)")
    s.add_argument("--cap", type=int, default=classical.DEFAULT_CAP, help="enumeration cap")
    s.set_defaults(func=cmd_cut)

    s = sub.add_parser("cycle-table", parents=[common], help="odd-cycle closed forms next to SDP values")
    s.add_argument("--n-max", type=int, default=11)
    s.add_argument("--p", type=float, default=None, help="edge weight of the symmetric prior")
    s.set_defaults(func=cmd_cycle_table)

    s = sub.add_parser("check-pvm", parents=[common], help="optimality conditions of a PVM strategy")
    s.add_argument("game", help="game or XOR-game JSON file")
    s.add_argument("pvm", help="PVM JSON file")
    s.set_defaults(func=cmd_check_pvm)

    s = sub.add_parser("crosscheck-kn", parents=[common], help="brute-force c-colouring value of K_n vs 1 + 1/n - 1/c")
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--c", type=int, default=3)
    s.set_defaults(func=cmd_crosscheck_kn)

    s = sub.add_parser("generate", parents=[common], help="write an input file to stdout")
    s.add_argument("kind", choices=("cycle", "complete", "cycle-xor", "coloring", "seyed"))
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--p", type=float, default=None, help="cycle-xor: symmetric prior edge weight")
    s.add_argument("--c", type=int, default=2, help="coloring: number of colours")
    s.add_argument("--graph", default=None, help="coloring: graph file (default: the n-cycle)")
    s.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    cfg = RunConfig(
        seed=args.seed,
        restarts=args.restarts,
        tolerances={"gap": args.tol_gap, "check": args.tol_check},
        output_format=args.format,
        quiet=args.quiet,
    )

    def fail(code, msg):
        if not cfg.quiet:
            print(f"syncgames: {msg}", file=sys.stderr)
        return code

    try:
        out, code = args.func(args, cfg)
    except sio.ParseError as exc:
        return fail(EXIT_PARSE, exc)
    except classical.EnumerationCapError as exc:
        return fail(EXIT_CAP, exc)
    except _Unsupported as exc:
        return fail(EXIT_UNSUPPORTED, exc)
    except ValueError as exc:
        return fail(EXIT_INVALID, exc)
    if not cfg.quiet:
        if args.command == "generate":
            sys.stdout.write(sio.dumps(out) + "\n")
        else:
            sys.stdout.write(render(out, cfg.output_format))
        if code == EXIT_UNCERTIFIED:
            print("syncgames: warning: SDP duality gap above tolerance; values are bounds", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
