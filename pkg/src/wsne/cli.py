"""Command-line entry point: ``python3 -m wsne <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algorithms import base_wsne, improved_wsne, optimal_z, winlose_wsne
from .apxne import THETA, apx_ne
from .comm import endpoints, protocol_ne, protocol_winlose, protocol_wsne
from .game import load_game, parse_profile, save_game, verify
from .harness import KINDS, GeneratorSpec, generate, load_suite_spec, run_suite
from .query import PayoffOracle, query_wsne


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _profile_doc(game, profile, claimed, measure) -> tuple[dict, bool]:
    rep = verify(game, profile)
    regret = rep.max_pure_regret if measure == "wsne" else rep.max_regret
    ok = regret <= claimed + 1e-9
    return {"profile": profile.to_dict(), "claimed_eps": claimed, "measure": measure,
            "regrets": rep.to_dict(), "verified": ok}, ok


def cmd_solve(a) -> int:
    game = load_game(a.game)
    algs = {"base": base_wsne, "winlose": winlose_wsne, "apxne": apx_ne,
            "improved": lambda g: improved_wsne(g, a.z)}
    out = algs[a.alg](game)
    doc, ok = _profile_doc(game, out.profile, out.claimed_eps, out.measure)
    doc["step"] = out.step.value
    _emit(doc)
    return 0 if ok else 1


def cmd_comm(a) -> int:
    game = load_game(a.game)
    row, col = endpoints(game, a.seed)
    z = optimal_z()
    if a.protocol == "wsne":
        profile, tr = protocol_wsne(row, col, a.eps, z)
        claimed, measure = 2 / 3 - z + a.eps, "wsne"
    elif a.protocol == "ne":
        profile, tr = protocol_ne(row, col, a.eps)
        claimed, measure = THETA + a.eps, "ne"
    else:
        profile, tr = protocol_winlose(row, col, a.eps)
        claimed, measure = 0.5 + a.eps, "wsne"
    doc, ok = _profile_doc(game, profile, claimed, measure)
    doc.update(step=tr.notes["step"], bits=tr.total_bits, transcript=tr.to_dict()["messages"])
    _emit(doc)
    return 0 if ok else 1


def cmd_query(a) -> int:
    game = load_game(a.game)
    oracle = PayoffOracle(game, keep_log=a.log is not None)
    out, q = query_wsne(oracle, a.eps, a.seed, force_sampling=a.force_sampling)
    doc, ok = _profile_doc(game, out.profile, out.claimed_eps, out.measure)
    doc.update(step=out.step.value, queries=q, mode=out.notes.get("mode"))
    if a.log is not None:
        Path(a.log).write_text(oracle.log_csv(), encoding="utf-8")
    _emit(doc)
    return 0 if ok else 1


def cmd_gen(a) -> int:
    spec = GeneratorSpec(a.kind, n=a.n, seed=a.seed, count=a.count, p=a.p, name=a.name)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    for k, g in enumerate(generate(spec)):
        save_game(g, out / f"game_{k:04d}.txt")
    print(f"wrote {spec.count} games to {out}")
    return 0


def cmd_suite(a) -> int:
    spec, alg, params = load_suite_spec(Path(a.spec).read_text(encoding="utf-8"))
    if a.timing:
        from dataclasses import replace

        params = replace(params, timing=True)
    report = run_suite(spec, alg, params)
    out = Path(a.out)
    out.write_text(report.to_json(), encoding="utf-8")
    out.with_suffix(".csv").write_text(report.to_csv(), encoding="utf-8")
    _emit(report.summary())
    return 0 if report.ok else 1


def cmd_verify(a) -> int:
    game = load_game(a.game)
    profile = parse_profile(Path(a.profile).read_text(encoding="utf-8"), game.n)
    rep = verify(game, profile)
    doc = rep.to_dict()
    ok = True
    if a.eps is not None:
        ok = rep.is_eps_wsne(a.eps) if a.measure == "wsne" else rep.is_eps_ne(a.eps)
        doc["verified"] = ok
    _emit(doc)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wsne", description="Approximate equilibria of bimatrix games.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run an exact-knowledge algorithm on a game file")
    s.add_argument("--game", required=True)
    s.add_argument("--alg", choices=["base", "improved", "winlose", "apxne"], required=True)
    s.add_argument("--z", type=float, default=None)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("comm", help="simulate a two-party protocol")
    s.add_argument("--game", required=True)
    s.add_argument("--protocol", choices=["wsne", "ne", "winlose"], required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_comm)

    s = sub.add_parser("query", help="run the payoff-query algorithm")
    s.add_argument("--game", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--force-sampling", action="store_true", help="never fall back to full enumeration")
    s.add_argument("--log", metavar="CSV", help="write every query as i,j,R_ij,C_ij (reveals the game)")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("gen", help="write generated games to a directory")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--name", default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("suite", help="run a batch described by a JSON spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical reruns)")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("verify", help="report the regrets of a profile")
    s.add_argument("--game", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--eps", type=float, default=None, help="also check the profile against eps")
    s.add_argument("--measure", choices=["wsne", "ne"], default="wsne")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
