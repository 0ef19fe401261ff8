"""Command-line interface: ``fusion-amalgam <command> ...``.

Exit codes: 0 pass, 1 counterexample, 2 usage, 3 resource cap, 4 fingerprint mismatch.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import counting
from .amalgam import (
    INFINITE,
    ContextMismatch,
    build_context,
    euler_characteristic,
    free_rank_of_index,
)
from .core import DEFAULT_SIZE_CAP, AmalgamParameters, SizeCapExceeded
from .core.symplectic import default_cache_dir
from .verifier import CLAIMS, DEFAULT_MAX_LETTERS, DEFAULT_SAMPLES, DEFAULT_SEED, run_claim, suite_passed

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_FINGERPRINT = 0, 1, 2, 3, 4

log = logging.getLogger("fusion_amalgam")


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser, primes: bool = True) -> None:
    if primes:
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--q", type=int, required=True)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP)
    parser.add_argument("--cache-dir", type=Path, default=None, help="matrix cache (default: user cache dir)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--output", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusion-amalgam", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("construct", help="build A, B, C and print their data"))

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--claim", required=True, choices=CLAIMS + ("all",))
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--max-letters", type=int, default=DEFAULT_MAX_LETTERS)

    p = sub.add_parser("word", help="normal-form arithmetic on JSON words (operands: JSON or @path)")
    actions = p.add_subparsers(dest="action", required=True)
    for name, nargs, text in (
        ("reduce", 1, "canonical form of a word"),
        ("order", 1, "order of a word, or 'infinite'"),
        ("inverse", 1, "inverse of a word"),
        ("mul", "+", "product of two or more words"),
        ("carter", 0, "the Carter generator z*sigma as a word"),
        ("random", 0, "a seeded random reduced word"),
    ):
        a = actions.add_parser(name, help=text)
        _common(a)
        if nargs:
            a.add_argument("words", nargs=nargs)
        if name == "random":
            a.add_argument("--length", type=int, default=4)
            a.add_argument("--word-seed", type=int, default=0)

    _common(sub.add_parser("chi", help="Euler characteristic of X"))

    p = sub.add_parser("rank", help="rank of a free subgroup of given index")
    _common(p)
    p.add_argument("--index", type=int, required=True)

    p = sub.add_parser("counting", help="exact counting contradiction for finite groups")
    _common(p, primes=False)
    p.add_argument("--grid", type=int, default=None, metavar="MAX_PRIME")
    p.add_argument("--max-exponent", type=int, default=9)
    p.add_argument("--minimal", action="store_true", help="only the sizes p^3, q^3")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--size-p", type=int)
    p.add_argument("--size-q", type=int)
    p.add_argument("--csv", action="store_true", help="emit grid rows as CSV")
    return parser


def _params(args) -> AmalgamParameters:
    try:
        return AmalgamParameters.from_primes(args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _context(args):
    params = _params(args)
    cache = args.cache_dir if args.cache_dir is not None else default_cache_dir()
    return build_context(params, seed=args.seed, cache_dir=cache, size_cap=args.size_cap)


def _matrix_fingerprint(m) -> str:
    return hashlib.sha256(json.dumps([list(r) for r in m]).encode()).hexdigest()[:12]


def _emit(args, payload, text: str) -> None:
    out = json.dumps(payload, sort_keys=True) + "\n" if args.format == "json" else text.rstrip("\n") + "\n"
    if args.output is not None:
        args.output.write_text(out)
    else:
        sys.stdout.write(out)


def cmd_construct(args) -> int:
    params = _params(args)
    params.check_size(args.size_cap)
    ctx = _context(args)
    payload = dict(params.as_dict())
    payload.update(
        seed=args.seed,
        matrices={s: [list(r) for r in f.matrix] for s, f in ctx.factors.items()},
        matrix_fingerprints={s: _matrix_fingerprint(f.matrix) for s, f in ctx.factors.items()},
        transversal_sizes={s: ctx.transversal_size(s) for s in "AB"},
        context_fingerprint=ctx.fingerprint,
    )
    lines = [
        f"p={params.p} q={params.q} m={params.m} n={params.n}",
        f"|Q|={params.orderQ} |P|={params.orderP} |A|={params.orderA} |B|={params.orderB} |C|={params.orderC}",
        f"acting matrix A: {payload['matrix_fingerprints']['A']}  B: {payload['matrix_fingerprints']['B']}",
        f"transversal sizes A: {ctx.transversal_size('A')}  B: {ctx.transversal_size('B')}",
        f"context fingerprint: {ctx.fingerprint}",
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 0 or args.max_letters < 1:
        raise UsageError("--samples must be >= 0 and --max-letters >= 1")
    ctx = _context(args)
    reports = run_claim(ctx, args.claim, args.samples, args.max_letters, args.seed)
    ok = suite_passed(reports)
    payload = {
        "params": {"p": args.p, "q": args.q},
        "seed": args.seed,
        "context_fingerprint": ctx.fingerprint,
        "passed": ok,
        "reports": [r.to_json() for r in reports],
    }
    lines = [
        f"{r.claim:24s} {r.mode:8s} {r.verdict:5s} trials={r.trials} failures={len(r.fail)} ({r.duration_ms:.0f} ms)"
        for r in reports
    ]
    lines.append("PASS" if ok else "FAIL")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _read_word(ctx, text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON word: {exc}") from exc
    try:
        return ctx.word_from_json(data)
    except ContextMismatch:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed word: {exc}") from exc


def cmd_word(args) -> int:
    ctx = _context(args)
    words = [_read_word(ctx, w) for w in getattr(args, "words", [])]
    if args.action == "mul" and len(words) < 2:
        raise UsageError("'mul' takes at least two words")
    if args.action == "order":
        order = ctx.element_order(words[0])
        value = "infinite" if order is INFINITE else order
        _emit(args, {"order": value}, str(value))
        return EXIT_OK
    if args.action == "reduce":
        result = words[0]
    elif args.action == "mul":
        result = ctx.product(*words)
    elif args.action == "inverse":
        result = ctx.inverse(words[0])
    elif args.action == "carter":
        result = ctx.from_c((1, 1))
    else:
        result = ctx.random_word(args.length, args.word_seed)
    data = ctx.word_to_json(result)
    text = json.dumps(data, sort_keys=True)
    _emit(args, data, text)
    return EXIT_OK


def cmd_chi(args) -> int:
    params = _params(args)
    chi = euler_characteristic(params)
    _emit(args, {"chi": str(chi), "numerator": chi.numerator, "denominator": chi.denominator}, str(chi))
    return EXIT_OK


def cmd_rank(args) -> int:
    params = _params(args)
    try:
        res = free_rank_of_index(params, args.index)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    flag = "agrees" if res.agrees else "DISCREPANCY"
    payload = {
        "index": res.index,
        "rank": res.rank,
        "chi": str(euler_characteristic(params)),
        "displayed_formula": str(res.displayed_formula),
        "discrepancy": not res.agrees,
    }
    _emit(args, payload, f"rank {res.rank} (from chi)\ndisplayed formula: {res.displayed_formula} [{flag}]")
    return EXIT_OK


def cmd_counting(args) -> int:
    if args.grid is not None:
        rows = counting.grid_sweep(args.grid, args.max_exponent, args.minimal)
        ok = all(r["verdict"] for r in rows)
        if args.csv:
            text = counting.rows_to_csv(rows)
            (args.output.write_text(text) if args.output else sys.stdout.write(text))
        else:
            summary = f"{len(rows)} instances, all verdicts TRUE" if ok else "some verdicts FALSE"
            _emit(args, {"rows": rows, "all_true": ok}, summary)
        return EXIT_OK if ok else EXIT_FAIL
    if args.p is None or args.q is None:
        raise UsageError("counting needs --grid or --p/--q")
    if args.size_p is None and args.size_q is None:
        params = _params(args)
        inst = counting.CountingInstance.from_params(params)
        extra = {"excess_equals_minus_chi": counting.excess_equals_minus_chi(params)}
    else:
        if args.size_p is None or args.size_q is None:
            raise UsageError("give both --size-p and --size-q")
        try:
            inst = counting.CountingInstance(args.p, args.q, args.size_p, args.size_q)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        extra = {}
    ok, excess = counting.check_contradiction(inst)
    acc = counting.accounted_fraction(inst)
    payload = {
        "p": inst.p, "q": inst.q, "sizeP": inst.sizeP, "sizeQ": inst.sizeQ,
        "p_elements": str(acc.p_elements), "q_elements": str(acc.q_elements),
        "pq_elements": str(acc.pq_elements), "accounted": str(acc.total),
        "excess": str(excess), "verdict": ok, **extra,
    }
    lines = [f"accounted fraction {acc.total}", f"excess {excess}: {'contradiction' if ok else 'no contradiction'}"]
    lines += [f"{k}: {v}" for k, v in extra.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "word": cmd_word,
    "chi": cmd_chi,
    "rank": cmd_rank,
    "counting": cmd_counting,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ContextMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINGERPRINT


if __name__ == "__main__":
    sys.exit(main())
