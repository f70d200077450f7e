"""Command-line interface: ``diamlab <command> ...``.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import catalog as cat
from .bounds import verify_report
from .errors import BoundViolation, BudgetExceeded, DiamlabError
from .formats import emit_cayley_table, emit_report
from .gensets import DEFAULT_BUDGET, abelianization_rank, is_p_group, max_diameters, rank
from .groups import (
    DEFAULT_MAX_ELEMENTS,
    FiniteGroup,
    closure,
    derived_series,
    direct_power,
    is_normal,
    trivial,
    whole,
)
from .schreier import Decomposer, SeriesDecomposer
from .wordlen import eval_word, length_table, shortest_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(f"DIAMLAB_{name}")
    return int(raw) if raw else default


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-elements", type=int, default=argparse.SUPPRESS, help="cap on |G^n| (default 10^6)")
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="cap on enumeration candidates (default 10^7)")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for enumeration")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="diamlab", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list or describe catalog groups")
    p.add_argument("name", nargs="?")
    p.add_argument("--check", action="store_true", help="recompute every entry's invariants")

    p = sub.add_parser("info", parents=[common], help="order, derived series, rank")
    p.add_argument("group")

    p = sub.add_parser("table", parents=[common], help="print the Cayley table file of a group")
    p.add_argument("group")

    p = sub.add_parser("diam", parents=[common], help="diameter for one generating set")
    p.add_argument("group")
    p.add_argument("--gens", required=True)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--words", action="store_true", help="print a shortest word for every element")

    p = sub.add_parser("dmax", parents=[common], help="maximum diameter over generating sets")
    p.add_argument("group")
    p.add_argument("--power", type=int, default=1)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sample", type=int, metavar="M")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--size-cap", type=int, default=None)

    p = sub.add_parser("schreier", parents=[common], help="transversal, Schreier generators, decompositions")
    p.add_argument("group")
    p.add_argument("--normal", required=True, help="derived | derived:K | trivial | whole | comma list of elements")
    p.add_argument("--gens", required=True)
    p.add_argument("--element", default=None)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--series", action="store_true", help="decompose down the whole derived series")

    p = sub.add_parser("verify", parents=[common], help="check every diameter bound for G^n")
    p.add_argument("group")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--sample", type=int, default=200, metavar="M", help="samples when exact is infeasible")
    p.add_argument("--seed", type=int, default=None)
    return parser


def _settings(args) -> dict:
    return {
        "max_elements": getattr(args, "max_elements", None) or _env_int("MAX_ELEMENTS", DEFAULT_MAX_ELEMENTS),
        "budget": getattr(args, "budget", None) or _env_int("BUDGET", DEFAULT_BUDGET),
        "threads": getattr(args, "threads", None) or _env_int("THREADS", 1),
    }


def _seed(args) -> int:
    return args.seed if args.seed is not None else _env_int("SEED", 0)


def _group(spec: str, cfg: dict) -> FiniteGroup:
    try:
        return cat.parse_group_spec(spec, max_elements=cfg["max_elements"])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad group {spec!r}: {exc}") from None


def _elements(G: FiniteGroup, spec: str) -> list[int]:
    try:
        return [G.element_id(s) for s in spec.split(",") if s.strip()]
    except (KeyError, IndexError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _names(G: FiniteGroup, els) -> str:
    return "{" + ", ".join(G.element_name(int(e)) for e in els) + "}"


def _word_text(G: FiniteGroup, gens, w) -> str:
    if not w.length:
        return "1"
    return " ".join(G.element_name(gens[i]) + ("" if s == 1 else "^-1") for i, s in w.tokens)


def cmd_catalog(args, cfg, out) -> int:
    if args.name:
        if args.name not in cat.CATALOG:
            raise UsageError(f"unknown catalog entry {args.name!r}")
        entries = [cat.CATALOG[args.name]]
    else:
        entries = list(cat.CATALOG.values())
    status = EXIT_OK
    for e in entries:
        line = (
            f"{e.name:8} {e.spec:34} order={e.order:<4} solvable={str(e.solvable).lower():5} "
            f"l={e.derived_length if e.derived_length is not None else '-'} rank={e.rank}"
        )
        if args.check:
            bad = e.self_check()
            line += "  ok" if not bad else f"  MISMATCH {bad}"
            status = status if not bad else EXIT_FAIL
        print(line, file=out)
    return status


def cmd_info(args, cfg, out) -> int:
    G = _group(args.group, cfg)
    series = derived_series(G)
    print(f"group: {G.name}", file=out)
    print(f"order: {G.order}", file=out)
    print(f"backend: {G.backend}", file=out)
    print(f"abelian: {str(G.is_abelian).lower()}", file=out)
    print(f"p-group: {str(is_p_group(G)).lower()}", file=out)
    print(f"derived series orders: {series.orders}", file=out)
    print(f"solvable: {str(series.solvable).lower()}", file=out)
    if series.solvable:
        print(f"derived length: {series.derived_length}", file=out)
    print(f"rank: {rank(G, cfg['budget'])}", file=out)
    print(f"rank(G/G'): {abelianization_rank(G, cfg['budget'])}", file=out)
    return EXIT_OK


def cmd_table(args, cfg, out) -> int:
    out.write(emit_cayley_table(_group(args.group, cfg)))
    return EXIT_OK


def cmd_diam(args, cfg, out) -> int:
    G = _group(args.group, cfg)
    gens = _elements(G, args.gens)
    if not gens:
        raise UsageError("--gens is empty")
    tab = length_table(G, gens, args.symmetric)
    print(f"group: {G.name}  gens: {_names(G, gens)}  symmetric: {str(args.symmetric).lower()}", file=out)
    print(f"generates: {str(tab.generates).lower()}", file=out)
    print(f"diameter: {tab.diameter}", file=out)
    print(f"witness: {G.element_name(tab.witness)} = {_word_text(G, gens, shortest_word(tab, tab.witness))}", file=out)
    if args.words:
        for g in range(G.order):
            if tab.reached[g]:
                w = shortest_word(tab, g)
                print(f"  {G.element_name(g):>12}  {w.length:3}  {_word_text(G, gens, w)}", file=out)
    return EXIT_OK if tab.generates else EXIT_FAIL


def cmd_dmax(args, cfg, out) -> int:
    G = _group(args.group, cfg)
    if args.power > 1:
        G = direct_power(G, args.power, max_elements=cfg["max_elements"])
    if args.sample:
        cert = max_diameters(G, "sampled", samples=args.sample, seed=_seed(args), size_cap=args.size_cap)
    else:
        cert = max_diameters(G, "exact", size_cap=args.size_cap, budget=cfg["budget"], threads=cfg["threads"])
    kind = "exact" if cert.exhaustive else f"lower bound (sampled, seed {cert.seed})"
    print(f"group: {G.name}  order: {G.order}  ({kind}, {cert.visited} generating sets)", file=out)
    print(f"D  = {cert.value_positive}  attained by {_names(G, cert.argmax_positive.elements)}", file=out)
    print(f"Ds = {cert.value_symmetric}  attained by {_names(G, cert.argmax_symmetric.elements)}", file=out)
    return EXIT_OK


def _normal(G: FiniteGroup, spec: str):
    if spec == "trivial":
        return trivial(G)
    if spec == "whole":
        return whole(G)
    if spec.startswith("derived"):
        k = int(spec.split(":")[1]) if ":" in spec else 1
        terms = derived_series(G).terms
        if k >= len(terms):
            raise UsageError(f"derived series has only {len(terms)} terms")
        return terms[k]
    H = closure(G, _elements(G, spec))
    if not is_normal(G, H):
        raise UsageError(f"subgroup generated by {spec} is not normal")
    return H


def cmd_schreier(args, cfg, out) -> int:
    G = _group(args.group, cfg)
    gens = _elements(G, args.gens)
    if args.series:
        sd = SeriesDecomposer(G, gens, symmetric=args.symmetric)
        print(f"group: {G.name}  gens: {_names(G, gens)}  series orders: {sd.series.orders}", file=out)
        for k, lv in enumerate(sd.levels):
            print(
                f"level {k}: Ml(T)={lv.max_rep} Ml(T^-1)={lv.max_inverse_rep} "
                f"|S|={len(lv.schreier)} bound={sd.level_bounds[k]}",
                file=out,
            )
        targets = [G.element_id(args.element)] if args.element else range(G.order)
        worst = 0
        for g in targets:
            d = sd.decompose(g)
            if eval_word(G, gens, d.word) != g or d.word.length > d.certified_bound:
                print(f"certificate FAILED for {G.element_name(g)}", file=out)
                return EXIT_FAIL
            worst = max(worst, d.word.length)
            if args.element:
                print(f"{G.element_name(g)} = {_word_text(G, gens, d.word)}  (length {d.word.length})", file=out)
        print(f"certified bound: {sd.certified_bound}  longest emitted word: {worst}", file=out)
        return EXIT_OK

    H = _normal(G, args.normal)
    dec = Decomposer(G, H, gens, symmetric=args.symmetric)
    T = dec.transversal
    print(f"group: {G.name}  |H| = {H.order}  cosets: {len(T.reps)}", file=out)
    for c, r, w in T.reps:
        print(f"  coset {c}: rep {G.element_name(r)} = {_word_text(G, gens, w)}", file=out)
    print(f"Schreier generators ({len(dec.schreier)}):", file=out)
    for s in dec.schreier:
        print(f"  {G.element_name(s.element)}  word length {s.word.length}", file=out)
    print(f"Ml(T) = {dec.max_rep}  Ml(T^-1) = {dec.max_inverse_rep}  diam(H, S) = {dec.h_diameter}", file=out)
    print(f"certified bound: {dec.certified_bound}", file=out)
    if args.element:
        g = G.element_id(args.element)
        d = dec.decompose(g)
        ok = eval_word(G, gens, d.word) == g and d.word.length <= d.certified_bound
        print(
            f"{G.element_name(g)} = ({G.element_name(d.h)}) * ({G.element_name(d.t)}) = "
            f"{_word_text(G, gens, d.word)}  (length {d.word.length}, {'ok' if ok else 'FAILED'})",
            file=out,
        )
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_verify(args, cfg, out) -> int:
    G = _group(args.group, cfg)
    rep = verify_report(
        G,
        args.power,
        budget=cfg["budget"],
        samples=args.sample,
        seed=_seed(args),
        max_elements=cfg["max_elements"],
        threads=cfg["threads"],
    )
    text = emit_report(rep, args.format)
    if args.out:
        args.out.write_text(text)
    else:
        out.write(text)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "catalog": cmd_catalog,
    "info": cmd_info,
    "table": cmd_table,
    "diam": cmd_diam,
    "dmax": cmd_dmax,
    "schreier": cmd_schreier,
    "verify": cmd_verify,
}


VALUE_FLAGS = ("--gens", "--element", "--normal")


def _glue_values(argv: list[str]) -> list[str]:
    # element names such as -k would otherwise be read as options
    out, i = [], 0
    while i < len(argv):
        if argv[i] in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _settings(args)
    try:
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        print(f"diamlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"diamlab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BoundViolation as exc:
        print(f"diamlab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except DiamlabError as exc:
        print(f"diamlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
