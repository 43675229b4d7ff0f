"""Batch front-end: solve, verify, decide, generate, and oracle-check from
files. Verdict lines are a stable contract (first stdout line), and exit
codes let shell pipelines branch without parsing:

    0  ok / stable / yes        1  usage error
    2  I/O or validation error  3  blocked / no
    4  search budget or oracle size guard exceeded
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import BudgetExceeded, HgameError, ParseError, SizeGuard, ValidationError
from .model import (
    Coalition,
    GameInstance,
    Mode,
    Partition,
    degree_profile,
    parse_instance,
    parse_partition,
    serialize_instance,
    serialize_partition,
)
from .preferences import BlockingCertificate
from . import core_solvers as core
from . import neutral_solvers as neutral
from . import generators as gen
from . import oracle
from . import graph_kernels as gk

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NEGATIVE = 3
EXIT_GUARD = 4

DEFAULT_BUDGET = neutral.DEFAULT_BUDGET


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _write_out(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("HGAME_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"bad HGAME_BUDGET value {env!r}") from exc
    return DEFAULT_BUDGET


def _cert_lines(cert: BlockingCertificate) -> list[str]:
    lines = ["coalition " + " ".join(str(a + 1) for a in cert.coalition.members)]
    for a in cert.coalition.members:
        old, new = cert.per_agent[a]
        tag = "strict" if a in cert.strict_improvers else "weak"
        lines.append(
            f"agent {a + 1}: enemies {old.enemy_count}->{new.enemy_count}"
            f" friends {old.friend_count}->{new.friend_count} ({tag})"
        )
    return lines


def _cert_json(cert: BlockingCertificate | None):
    if cert is None:
        return None
    return {
        "coalition": [a + 1 for a in cert.coalition.members],
        "strict_improvers": sorted(a + 1 for a in cert.strict_improvers),
        "scores": {
            str(a + 1): {
                "old": {"enemies": old.enemy_count, "friends": old.friend_count},
                "new": {"enemies": new.enemy_count, "friends": new.friend_count},
            }
            for a, (old, new) in cert.per_agent.items()
        },
    }


def _partition_json(part: Partition | None):
    if part is None:
        return None
    return [[a + 1 for a in c.members] for c in part.coalitions]


def _report(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    t0 = time.perf_counter()
    strategy = args.strategy or core.dispatch_strategy(inst, "cf")
    part = core.solve_cf(inst, args.strategy)
    elapsed = time.perf_counter() - t0
    text = serialize_partition(part)
    if args.json:
        print(
            json.dumps(
                {
                    "command": "solve cf",
                    "partition": _partition_json(part),
                    "strategy": strategy,
                    "elapsed_s": round(elapsed, 6),
                },
                indent=2,
                sort_keys=True,
            )
        )
    else:
        _write_out(args.output, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    part = parse_partition(_read(args.partition), inst)
    t0 = time.perf_counter()
    if inst.mode is Mode.WITH_NEUTRALS:
        strategy = "neutral-search"
        cert = neutral.find_blocking_neutral(
            inst, part, weak=(args.problem == "scv"), budget=_budget(args)
        )
    else:
        strategy = args.strategy or core.dispatch_strategy(inst, args.problem)
        if args.problem == "cv":
            cert = core.verify_cv(inst, part, args.strategy)
        else:
            cert = core.verify_scv(inst, part, args.strategy)
    elapsed = time.perf_counter() - t0
    verdict = "STABLE" if cert is None else "BLOCKED"
    human = [verdict]
    if cert is not None:
        human += _cert_lines(cert)
    _report(
        args,
        {
            "command": f"verify {args.problem}",
            "verdict": verdict.lower(),
            "certificate": _cert_json(cert),
            "strategy": strategy,
            "elapsed_s": round(elapsed, 6),
        },
        human,
    )
    return EXIT_OK if cert is None else EXIT_NEGATIVE


def cmd_exists(args) -> int:
    inst = parse_instance(_read(args.instance))
    budget = _budget(args)
    t0 = time.perf_counter()
    problem = args.problem
    strategy = "neutral-search"
    if problem in ("ce-n", "sce-n"):
        weak = problem == "sce-n"
        if args.max_partitions is None and args.max_coalition is None:
            fn = neutral.exists_sce_neutral if weak else neutral.exists_ce_neutral
            part = fn(inst, budget=budget)
        else:
            fn = neutral.exists_sce_neutral_bounded if weak else neutral.exists_ce_neutral_bounded
            part = fn(
                inst,
                max_partitions=args.max_partitions,
                max_coalition=args.max_coalition,
                budget=budget,
            )
    else:
        strategy = args.strategy or core.dispatch_strategy(inst, "sce" if problem == "sce" else "cf")
        if problem == "sce":
            if args.max_partitions is not None:
                part = core.exists_sce_bounded_partitions(inst, args.max_partitions, args.strategy, budget)
            elif args.max_coalition is not None:
                part = core.exists_sce_bounded_coalition(inst, args.max_coalition, args.strategy)
            else:
                part = core.exists_sce(inst, args.strategy)
        else:  # ce
            if args.max_partitions is not None:
                part = core.exists_ce_bounded_partitions(inst, args.max_partitions, args.strategy, budget)
            elif args.max_coalition is not None:
                part = core.exists_ce_bounded_coalition(inst, args.max_coalition, args.strategy)
            else:
                part = core.solve_cf(inst, args.strategy)  # always exists
    elapsed = time.perf_counter() - t0
    verdict = "YES" if part is not None else "NO"
    human = [verdict]
    if part is not None:
        human.append(serialize_partition(part).rstrip("\n"))
    _report(
        args,
        {
            "command": f"exists {problem}",
            "verdict": verdict.lower(),
            "partition": _partition_json(part),
            "strategy": strategy,
            "elapsed_s": round(elapsed, 6),
        },
        human,
    )
    return EXIT_OK if part is not None else EXIT_NEGATIVE


def _load_graph(path: str) -> gk.UGraph:
    return gen.parse_edge_list(_read(path))


def _serialize_gadget(inst: GameInstance, names: dict[str, int]) -> str:
    lines = [f"# name {label} {aid + 1}" for label, aid in names.items()]
    return "\n".join(lines) + "\n" + serialize_instance(inst)


def cmd_gen(args) -> int:
    kind = args.kind
    partition = None
    if kind == "fig2":
        inst, names = gen.gen_fig2(with_names=True)
    elif kind == "3col":
        inst, names = gen.gen_3col_to_ce3(_load_graph(args.source), with_names=True)
    elif kind == "tripack":
        inst, names = gen.gen_tripack_to_sce(_load_graph(args.source), with_names=True)
    elif kind == "3sat-cv":
        f = gen.parse_dimacs_cnf(_read(args.source))
        inst, partition, names = gen.gen_3sat_to_cv(f, strict_variant=args.strict, with_names=True)
    elif kind == "is-cv3":
        if args.k is None:
            raise ValidationError("gen is-cv3 requires --k")
        inst, partition, names = gen.gen_is_to_cv3(_load_graph(args.source), args.k, with_names=True)
    elif kind == "3sat-ce-n":
        f = gen.parse_dimacs_cnf(_read(args.source))
        inst, names = gen.gen_3sat_to_ce_neutral(f, with_names=True)
    elif kind == "x3c-sce-n":
        inst, names = gen.gen_x3c_to_sce_neutral(gen.parse_x3c(_read(args.source)), with_names=True)
    elif kind == "x3c-cv-n":
        inst, partition, names = gen.gen_x3c_to_cv_neutral(
            gen.parse_x3c(_read(args.source)), args.variant, with_names=True
        )
    elif kind == "x3c-scv-n":
        inst, partition, names = gen.gen_x3c_to_scv_neutral(
            gen.parse_x3c(_read(args.source)), args.variant, with_names=True
        )
    elif kind == "random":
        inst = gen.gen_random(args.n, args.p_friend, args.p_enemy, args.seed, args.mode)
        names = {}
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown generator {kind!r}")
    _write_out(args.output, _serialize_gadget(inst, names) if names else serialize_instance(inst))
    if partition is not None:
        if args.partition_out is None:
            raise ValidationError(f"gen {kind} emits an initial partition; pass --partition-out")
        _write_out(args.partition_out, serialize_partition(partition))
    return EXIT_OK


def cmd_oracle(args) -> int:
    kind = args.kind
    if kind == "stability":
        inst = parse_instance(_read(args.files[0]))
        part = parse_partition(_read(args.files[1]), inst)
        block = oracle.brute_stability(inst, part, strict=args.strict)
        verdict = "STABLE" if block is None else "BLOCKED"
        human = [verdict]
        if block is not None:
            human.append("coalition " + " ".join(str(a + 1) for a in block.members))
        payload = {
            "command": "oracle stability",
            "verdict": verdict.lower(),
            "coalition": None if block is None else [a + 1 for a in block.members],
        }
        _report(args, payload, human)
        return EXIT_OK if block is None else EXIT_NEGATIVE
    if kind == "sat3":
        f = gen.parse_dimacs_cnf(_read(args.files[0]))
        got = oracle.brute_sat3(f.clauses, f.n_vars)
        print("YES" if got is not None else "NO")
        return EXIT_OK if got is not None else EXIT_NEGATIVE
    if kind == "3col":
        got = oracle.brute_3coloring(_load_graph(args.files[0]))
        print("YES" if got is not None else "NO")
        return EXIT_OK if got is not None else EXIT_NEGATIVE
    if kind == "tripack":
        got = oracle.brute_triangle_partition(_load_graph(args.files[0]))
        print("YES" if got is not None else "NO")
        return EXIT_OK if got is not None else EXIT_NEGATIVE
    if kind == "x3c":
        x = gen.parse_x3c(_read(args.files[0]))
        got = oracle.brute_exact_cover(x.n_elements, list(x.sets))
        print("YES" if got is not None else "NO")
        return EXIT_OK if got is not None else EXIT_NEGATIVE
    if kind == "is":
        if args.k is None:
            raise ValidationError("oracle is requires --k")
        got = oracle.brute_independent_set(_load_graph(args.files[0]), args.k)
        print("YES" if got is not None else "NO")
        return EXIT_OK if got is not None else EXIT_NEGATIVE
    raise ValidationError(f"unknown oracle {kind!r}")  # pragma: no cover


def cmd_validate(args) -> int:
    inst = parse_instance(_read(args.instance))
    prof = degree_profile(inst)
    gf = core.friend_graph(inst)
    ge = core.enemy_graph(inst)
    rep = core.interval_rep_of(inst)
    info = {
        "command": "validate",
        "agents": inst.n,
        "mode": inst.mode.value,
        "max_friend_degree": prof.max_friend_degree,
        "max_enemy_degree": prof.max_enemy_degree,
        "max_total_degree": prof.max_total_degree,
        "friend_graph_bipartite": gk.bipartition(gf)[0] is not None,
        "enemy_graph_bipartite": gk.bipartition(ge)[0] is not None,
        "interval_lines": rep is not None,
        "interval_matches_friend_graph": bool(rep is not None and rep.matches(gf)),
        "interval_matches_enemy_graph": bool(rep is not None and rep.matches(ge)),
        "strategy": {p: core.dispatch_strategy(inst, p) for p in ("cf", "cv", "sce", "scv")},
    }
    human = [f"{k}: {v}" for k, v in info.items() if k != "command"]
    _report(args, info, human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hgame",
        description="Core stability tools for hedonic games with enemy-oriented preferences",
    )
    p.add_argument("--version", action="version", version=f"hgame {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, budget=True, strategy=True):
        sp.add_argument("--json", action="store_true", help="emit one JSON report object")
        if budget:
            sp.add_argument("--budget", type=int, default=None, help="search node budget")
        if strategy:
            sp.add_argument(
                "--strategy", choices=core.STRATEGIES, default=None, help="force a solver strategy"
            )

    sp = sub.add_parser("solve", help="find a core stable partition")
    sp.add_argument("problem", choices=["cf"])
    sp.add_argument("instance")
    sp.add_argument("-o", "--output", default=None)
    add_common(sp)
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("verify", help="verify (strict) core stability of a partition")
    sp.add_argument("problem", choices=["cv", "scv"])
    sp.add_argument("instance")
    sp.add_argument("partition")
    add_common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("exists", help="decide (strict) core existence, optionally bounded")
    sp.add_argument("problem", choices=["ce", "sce", "ce-n", "sce-n"])
    sp.add_argument("instance")
    sp.add_argument("--max-partitions", type=int, default=None)
    sp.add_argument("--max-coalition", type=int, default=None)
    add_common(sp)
    sp.set_defaults(fn=cmd_exists)

    sp = sub.add_parser("gen", help="generate gadget or random instances")
    sp.add_argument(
        "kind",
        choices=[
            "fig2",
            "3col",
            "tripack",
            "3sat-cv",
            "is-cv3",
            "3sat-ce-n",
            "x3c-sce-n",
            "x3c-cv-n",
            "x3c-scv-n",
            "random",
        ],
    )
    sp.add_argument("source", nargs="?", help="source problem file (cnf / edge list / x3c)")
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--partition-out", default=None)
    sp.add_argument("--strict", action="store_true", help="strict variant (3sat-cv)")
    sp.add_argument("--variant", choices=["two_partitions", "small_coalitions"], default="two_partitions")
    sp.add_argument("--k", type=int, default=None, help="target independent set size (is-cv3)")
    sp.add_argument("--n", type=int, default=8, help="agents (random)")
    sp.add_argument("--p-friend", type=float, default=0.5)
    sp.add_argument("--p-enemy", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=["complete", "neutrals"], default="complete")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("oracle", help="brute-force verdicts for cross-checking")
    sp.add_argument("kind", choices=["stability", "sat3", "3col", "tripack", "x3c", "is"])
    sp.add_argument("files", nargs="+")
    sp.add_argument("--strict", action="store_true", help="strict core (stability)")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("validate", help="degree profile, classes, and dispatch strategy")
    sp.add_argument("instance")
    add_common(sp, budget=False, strategy=False)
    sp.set_defaults(fn=cmd_validate)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (BudgetExceeded, SizeGuard) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except HgameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
