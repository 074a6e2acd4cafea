"""``polyrecon`` command line.

Exit status: 0 on success, 1 when a verification fails or nothing is
recovered, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from . import codes
from .field import POLICIES, POLICY_ALIASES, ctx_for_prime, make_ctx
from .poly import BiPoly, f_from_multiset, f_of, multiset_poly
from .reconstruct import ReconstructionError, reconstruct
from .strings import CompositionMultiset, MalformedInput, check_bits, compose

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None


def _load_f(text: str) -> BiPoly:
    """Parse a multiset or polynomial file into F, telling them apart by header."""
    head = text.lstrip().split("\n", 1)[0]
    if head.startswith("# degx="):
        return BiPoly.from_text(text)
    ms = CompositionMultiset.from_text(text)
    ms.validate()
    return f_from_multiset(multiset_poly(ms), ms.n)


def _ctx(args, n: int):
    if args.field_prime is not None:
        return ctx_for_prime(args.field_prime, n)
    return make_ctx(n, args.field_policy)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_compose(args) -> int:
    _emit(compose(check_bits(args.string)).to_text(), args.out)
    return EXIT_OK


def cmd_fpoly(args) -> int:
    if args.string is not None:
        F = f_of(check_bits(args.string))
    else:
        F = _load_f(_read(args.input))
    _emit(F.to_text(), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    F = _load_f(_read(args.input))
    n = (F.degx + F.degy) // 2
    rep = reconstruct(F, _ctx(args, n), first_only=args.first, trace=args.trace, backend=args.backend)
    if args.trace:
        for line in rep.trace_lines():
            print(line, file=sys.stderr)
    for s in rep.results:
        print(s)
    if args.stats:
        print(
            f"# nodes={rep.nodes} pauses={len(rep.pauses)} branch_points={rep.branch_points} "
            f"dead_ends={rep.dead_ends} backtracks={rep.backtracks} q={rep.q}",
            file=sys.stderr,
        )
    if not rep.results:
        print("no string starting with 1 and ending with 0 has this multiset", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_gen_code(args) -> int:
    if args.n <= codes.MAX_IN_MEMORY_N:
        words = codes.generate(args.family, args.n).words
    else:
        # streamed in generation order; sorting would need the whole set in memory
        iters = {
            "sr": codes.iter_sr, "p": codes.iter_p, "q": codes.iter_q, "r": codes.iter_r,
        }
        if args.family not in iters:
            raise MalformedInput(f"family {args.family!r} above n={codes.MAX_IN_MEMORY_N} is not streamable")
        words = iters[args.family](args.n)
    fh = open(args.out, "w") if args.out else sys.stdout
    try:
        for w in words:
            fh.write(w + "\n")
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def _read_codebook(path: str, n: int | None, family: str | None) -> codes.Codebook:
    words = []
    for lineno, line in enumerate(_read(path).splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            check_bits(line)
        except MalformedInput:
            raise MalformedInput(f"line {lineno}: not a binary word") from None
        if n is not None and len(line) != n:
            raise MalformedInput(f"line {lineno}: word has length {len(line)}, expected {n}")
        words.append(line)
    if not words:
        raise MalformedInput("codebook file is empty")
    return codes.Codebook(len(words[0]), family, tuple(words))


def cmd_verify_code(args) -> int:
    if args.input:
        cb = _read_codebook(args.input, args.n, args.family)
    elif args.family and args.n:
        cb = codes.generate(args.family, args.n)
    else:
        raise MalformedInput("verify-code needs --in, or both --family and --n")
    rep = codes.verify_codebook(cb, _ctx(args, cb.n), backend=args.backend)
    ok = rep.passed
    if cb.family == "t" and cb.n >= 4:
        sr = len(codes.gen_sr(cb.n))
        big = 40 * rep.size >= 41 * sr
        ok = ok and big
        rel = "≥" if big else "<"
        print(f"{'PASS' if ok else 'FAIL'}: {rep.total_backtracks} backtracks, |T|={rep.size} {rel} 41/40·|S_R| (|S_R|={sr})")
    print(rep.summary())
    for label, items in (
        ("collision", rep.collisions), ("misdecoded", rep.bad_decodes), ("backtracking", rep.backtracking),
        ("type2", rep.type2), ("structural", rep.structural),
    ):
        for item in items[: args.show]:
            print(f"  {label}: {' '.join(item) if isinstance(item, tuple) else item}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    from . import oracle

    if args.string is not None:
        s = check_bits(args.string)
        if args.n is not None and len(s) != args.n:
            raise MalformedInput(f"--string has length {len(s)}, --n says {args.n}")
        members = oracle.equivalence_class(s) if args.unrestricted else oracle.restricted_class(s)
    elif args.input:
        ms = CompositionMultiset.from_text(_read(args.input))
        members = oracle.oracle_reconstruct(ms, restricted=not args.unrestricted)
    elif args.n is not None:
        classes = oracle.build_classes(args.n)
        restricted = [
            {t for t in v if t[0] == "1" and t[-1] == "0"} for v in classes.values()
        ]
        multi = sum(len(r) > 1 for r in restricted)
        print(f"n={args.n} classes={len(classes)} restricted_ambiguous={multi}")
        return EXIT_OK
    else:
        raise MalformedInput("oracle needs --n, --string or --in")
    for t in sorted(members):
        print(t)
    return EXIT_OK


def cmd_bench(args) -> int:
    ladder = [int(v) for v in args.ladder.split(",")]
    rows = bench_mod.run_bench(ladder, args.samples, args.seed, args.backend)
    _emit(bench_mod.to_csv(rows), args.out)
    back = sum(r.backtracks for r in rows)
    return EXIT_OK if back == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyrecon", description=__doc__.split("\n", 1)[0])
    sub = p.add_subparsers(dest="command", required=True)

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--field-policy", choices=POLICIES + tuple(POLICY_ALIASES), default="safe",
                       help="prime choice: 'safe' (q-1 > 2n+2, default) or 'min' (smallest prime above n)")
    field.add_argument("--field-prime", type=int, default=None, help="explicit prime modulus")
    field.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compose", help="print the composition multiset of a string")
    c.add_argument("--string", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compose)

    f = sub.add_parser("fpoly", help="print F = P * P^* for a string or multiset file")
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--string")
    src.add_argument("--in", dest="input")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fpoly)

    r = sub.add_parser("reconstruct", parents=[field], help="recover strings from a multiset or F file")
    r.add_argument("--in", dest="input", required=True, help="multiset or polynomial file ('-' for stdin)")
    mode = r.add_mutually_exclusive_group()
    mode.add_argument("--all", dest="first", action="store_false", help="every matching string (default)")
    mode.add_argument("--first", dest="first", action="store_true", help="stop at the first verified string")
    r.add_argument("--trace", action="store_true", help="step log 'j a_j a_{d-j} [pause] [backtrack]' on stderr")
    r.add_argument("--stats", action="store_true", help="search counters on stderr")
    r.set_defaults(func=cmd_reconstruct, first=False)

    g = sub.add_parser("gen-code", help="write a codebook, one word per line")
    g.add_argument("--family", choices=codes.FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_code)

    v = sub.add_parser("verify-code", parents=[field], help="check a codebook file or a generated family")
    v.add_argument("--in", dest="input")
    v.add_argument("--family", choices=codes.FAMILIES)
    v.add_argument("--n", type=int)
    v.add_argument("--show", type=int, default=5, help="offending words to list per check")
    v.set_defaults(func=cmd_verify_code)

    o = sub.add_parser("oracle", help="brute-force equivalence classes (small n)")
    o.add_argument("--n", type=int)
    osrc = o.add_mutually_exclusive_group()
    osrc.add_argument("--string")
    osrc.add_argument("--in", dest="input")
    o.add_argument("--unrestricted", action="store_true", help="include strings not of the form 1...0")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", parents=[seeded], help="time reconstruction of random P_n codewords")
    b.add_argument("--ladder", default=",".join(map(str, bench_mod.DEFAULT_LADDER)))
    b.add_argument("--samples", type=int, default=50)
    b.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedInput, ReconstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
