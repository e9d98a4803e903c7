"""Command-line front end: ``fsl analyze|check|subnormal|example|verify``.

Defaults for ``--order-cap``, ``--interval-bound`` and ``--strict`` may also
come from the environment (``FSL_ORDER_CAP``, ``FSL_INTERVAL_BOUND``,
``FSL_STRICT``).  Usage errors exit with status 2, mathematical or input
errors with status 1.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import harness
from .builder import NAMED_EXAMPLES, named_example, parse, read_group_file, serialize
from .errors import GroupError, UnknownFormation
from .formations import BUILTIN_TOKENS, parse_formation
from .permgroup import DEFAULT_INTERVAL_BOUND, DEFAULT_ORDER_CAP, PermGroup, Permutation, as_subgroup, generate, normalizer
from .primes import ALL_PRIMES, PrimeSet
from .structure import arithmetic_length, is_soluble, nilpotent_length, p_length, pi, sylow
from .subnormality import (
    in_w_star,
    is_f_subnormal,
    is_kf_subnormal,
    is_kp_subnormal,
    is_p_subnormal,
    is_strongly_kf_subnormal,
    is_subnormal,
    sylow_class_membership,
)

ANALYZE_FORMATIONS = ("all", "soluble", "nilpotent", "NA", "supersoluble", "N^2", "N^3", "La(1)", "La(2)")
KINDS = ("sn", "p", "kp", "f", "kf", "skf")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    order_cap: int = DEFAULT_ORDER_CAP
    interval_bound: int = DEFAULT_INTERVAL_BOUND
    strict: bool = False

    @classmethod
    def from_env(cls, env=os.environ) -> "CliConfig":
        def positive(name, default):
            raw = env.get(name)
            if raw is None:
                return default
            try:
                value = int(raw)
            except ValueError:
                raise UsageError(f"{name} must be an integer, got {raw!r}") from None
            if value < 1:
                raise UsageError(f"{name} must be positive")
            return value

        strict = env.get("FSL_STRICT", "").strip().lower() in ("1", "true", "yes", "on")
        return cls(positive("FSL_ORDER_CAP", DEFAULT_ORDER_CAP), positive("FSL_INTERVAL_BOUND", DEFAULT_INTERVAL_BOUND), strict)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _prime_set(text: str) -> PrimeSet:
    try:
        return PrimeSet.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser(config: CliConfig) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fsl", description="Generalised subnormality of Sylow normalizers in finite groups.")
    ap.add_argument("--order-cap", type=_positive_int, default=config.order_cap, help="largest group order to enumerate")
    ap.add_argument("--interval-bound", type=_positive_int, default=config.interval_bound, help="largest subgroup interval to enumerate")
    ap.add_argument("--strict", action="store_true", default=config.strict, help="test every Sylow subgroup, not one per prime")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="print structural invariants and formation memberships")
    p.add_argument("file")
    p.add_argument("--group", help="record name (default: every record)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = sub.add_parser("check", help="decide membership in a class")
    p.add_argument("file")
    p.add_argument("--class", dest="klass", required=True, help=f"one of {', '.join(BUILTIN_TOKENS)}, or wstar:F, W:F, Wbar:F")
    p.add_argument("--pi", type=_prime_set, default=ALL_PRIMES, help="prime set for wstar/W/Wbar, e.g. all or 2,3")
    p.add_argument("--group", help="record name (default: the only record)")

    p = sub.add_parser("subnormal", help="decide a subnormality notion and print the certificate")
    p.add_argument("file")
    p.add_argument("--sub", required=True, help='subgroup generators as image lists, ";"-separated')
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--formation", help="formation token (needed for f, kf, skf)")
    p.add_argument("--group", help="record name (default: the only record)")
    p.add_argument("--out", help="write the certificate JSON here instead of stdout")

    p = sub.add_parser("example", help="write one of the named constructions as a group file")
    p.add_argument("--name", required=True, choices=sorted(NAMED_EXAMPLES))
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", action="append", required=True, help=f"suite id or 'all'; repeatable. Known: {', '.join(harness.SUITES)}")
    p.add_argument("--corpus", help="group file or directory of *.grp files (default: bundled small groups)")
    p.add_argument("--with-examples", action="store_true", help="add the two named constructions to the corpus")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--max-order", type=_positive_int, help="drop corpus groups above this order")
    return ap


# helpers -------------------------------------------------------------------------


def _load(args, config: CliConfig) -> list[tuple[str, PermGroup]]:
    records, _ = read_group_file(args.file, cap=config.order_cap)
    for _, G in records:
        G.interval_bound = config.interval_bound
    return records


def _pick(records, name: str | None) -> tuple[str, PermGroup]:
    if name is not None:
        for rec in records:
            if rec[0] == name:
                return rec
        raise UsageError(f"no group named {name!r}; have {[r[0] for r in records]}")
    if len(records) != 1:
        raise UsageError(f"file holds {len(records)} groups; choose one with --group")
    return records[0]


def _formation(token: str):
    try:
        return parse_formation(token)
    except UnknownFormation as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None


def _subgroup(G: PermGroup, text: str):
    gens = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            images = [int(t) for t in part.split()]
        except ValueError:
            raise UsageError(f"bad generator {part!r}") from None
        if len(images) != G.degree:
            raise UsageError(f"generator {part!r} has {len(images)} images, group degree is {G.degree}")
        gens.append(G.index(Permutation(images)))
    return generate(G, gens)


def _analysis(name: str, G: PermGroup) -> dict:
    out = {"name": name, "order": G.order, "degree": G.degree, "pi": list(pi(G)), "soluble": is_soluble(G)}
    if out["soluble"]:
        out["nilpotent_length"] = nilpotent_length(G)
        out["arithmetic_length"] = arithmetic_length(G)
        out["p_lengths"] = {str(p): p_length(G, p) for p in pi(G)}
    out["sylow_normalizer_orders"] = {str(p): normalizer(G, sylow(G, p)).order for p in pi(G)}
    out["formations"] = {t: parse_formation(t).contains(G) for t in ANALYZE_FORMATIONS}
    return out


def _print_analysis(info: dict) -> None:
    print(f"group {info['name']}")
    for key, value in info.items():
        if key == "name":
            continue
        if isinstance(value, dict):
            value = " ".join(f"{k}={_fmt(v)}" for k, v in value.items())
        elif isinstance(value, list):
            value = "{" + ",".join(map(str, value)) + "}"
        else:
            value = _fmt(value)
        print(f"  {key}: {value}")


def _fmt(v) -> str:
    return str(v).lower() if isinstance(v, bool) else str(v)


# commands ------------------------------------------------------------------------


def cmd_analyze(args, config) -> int:
    records = _load(args, config)
    if args.group is not None:
        records = [_pick(records, args.group)]
    infos = [_analysis(name, G) for name, G in records]
    if args.json:
        print(json.dumps(infos, indent=2))
    else:
        for info in infos:
            _print_analysis(info)
    return 0


def cmd_check(args, config) -> int:
    name, G = _pick(_load(args, config), args.group)
    klass = args.klass
    if ":" in klass:
        kind, token = klass.split(":", 1)
        kinds = {"wstar": "wstar", "W": "W", "Wbar": "Wbar"}
        if kind not in kinds:
            raise UsageError(f"unknown class prefix {kind!r}; use wstar:, W: or Wbar:")
        F = _formation(token)
        ok, witnesses = sylow_class_membership(kinds[kind], F, args.pi, G, strict=config.strict)
        print(_fmt(ok))
        for w in witnesses:
            what = "1" if w.prime is None and w.subgroup is not None else f"p={w.prime}"
            if w.subgroup is None:
                print(f"  {w.note}")
                continue
            line = f"  {what}: tested subgroup of order {w.tested.order}: {_fmt(w.flag)}"
            if w.certificate is not None:
                line += f" (chain orders {[S.order for S in w.certificate.chain]})"
            print(line)
        return 0
    F = _formation(klass)
    print(_fmt(F.contains(G)))
    return 0


def cmd_subnormal(args, config) -> int:
    name, G = _pick(_load(args, config), args.group)
    H = _subgroup(G, args.sub)
    Gs = as_subgroup(G)
    if args.kind in ("f", "kf", "skf"):
        if not args.formation:
            raise UsageError(f"--kind {args.kind} needs --formation")
        F = _formation(args.formation)
        decide = {"f": is_f_subnormal, "kf": is_kf_subnormal, "skf": is_strongly_kf_subnormal}[args.kind]
        ok, cert = decide(F, Gs, H)
    else:
        decide = {"sn": is_subnormal, "p": is_p_subnormal, "kp": is_kp_subnormal}[args.kind]
        ok, cert = decide(Gs, H)
    print(_fmt(ok))
    if cert is not None:
        text = cert.to_json()
        if args.out:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        else:
            print(text)
    return 0


def cmd_example(args, config) -> int:
    G = named_example(args.name, cap=config.order_cap)
    text = f"# {args.name}: order {G.order}\n" + serialize(args.name, G)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args, config) -> int:
    unknown = [s for s in args.suite if s != "all" and s not in harness.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; known: {', '.join(harness.SUITES)}")
    corpus, description = harness.load_corpus(args.corpus, with_examples=args.with_examples, cap=config.order_cap)
    if args.max_order:
        corpus = [(n, G) for n, G in corpus if G.order <= args.max_order]
        description["max_order"] = args.max_order
        description["groups"] = len(corpus)
    for _, G in corpus:
        G.interval_bound = config.interval_bound
    opts = harness.Options(seed=args.seed, strict=config.strict, workers=args.workers)
    report = harness.run_suites(args.suite, corpus, opts, description)
    for s in report.suites:
        c = s.counts
        status = "PASS" if s.failed == 0 else "FAIL"
        print(
            f"{status} {s.suite}: checked={c['checked']} passed={c['passed']} failed={c['failed']} "
            f"skipped={c['skipped']} vacuous={c['vacuous']} certificates={s.certificates['valid']}/{s.certificates['checked']} "
            f"({s.wall_time_s:.1f}s)"
        )
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    return 0 if report.failed == 0 else 1


COMMANDS = {
    "analyze": cmd_analyze,
    "check": cmd_check,
    "subnormal": cmd_subnormal,
    "example": cmd_example,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    try:
        config = CliConfig.from_env()
    except UsageError as exc:
        print(f"fsl: error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = CliConfig(args.order_cap, args.interval_bound, args.strict)
    try:
        return COMMANDS[args.command](args, config)
    except UsageError as exc:
        print(f"fsl: error: {exc}", file=sys.stderr)
        return 2
    except (GroupError, OSError, ValueError) as exc:
        print(f"fsl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
