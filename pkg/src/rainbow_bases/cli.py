"""Command-line front end: gen, extract, verify, oracle, stats."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import InputError, ResourceLimitError
from .extract import ExtractionConfig, extract_all
from .formats import format_certificate, format_instance, parse_certificate, parse_instance
from .graph import build_graph
from .oracle import InstanceSpec, brute_force_t, gen_instance, verify_certificate

EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_RESOURCE = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_gen(args) -> int:
    M, B = gen_instance(InstanceSpec(args.n, args.k, args.seed_pos, args.mode))
    text = format_instance(M, B)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_extract(args) -> int:
    if Path(args.input).resolve() == Path(args.output).resolve():
        raise InputError("input and output paths must differ")
    M, B = parse_instance(_read(args.input))
    if args.dump_graph:
        print("\n".join(build_graph(B, M.m).edge_list()), file=sys.stderr)
    cert = extract_all(M, B, ExtractionConfig(seed=args.seed, retries=args.retries, fallback=args.fallback))
    Path(args.output).write_text(format_certificate(cert))
    print(f"t {cert.t}")
    print(f"b0_observed {cert.b0_observed}")
    if args.verbose:
        print(f"stop {cert.stop.reason}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    M, B = parse_instance(_read(args.input))
    cert = parse_certificate(_read(args.cert))
    ok = verify_certificate(M, B, cert)
    print("valid" if ok else "invalid")
    return 0 if ok else EXIT_VERIFY


def cmd_oracle(args) -> int:
    M, B = parse_instance(_read(args.input))
    print(f"t {brute_force_t(M, B)}")
    return 0


def _stats_row(n, k, seed, config):
    M, B = gen_instance(InstanceSpec(n, k, seed))
    cert = extract_all(M, B, config)
    return f"{n},{k},{seed},{cert.t},{cert.b0_observed},{cert.stop.reason}"


def cmd_stats(args) -> int:
    seeds = range(args.seed_pos, args.seed_pos + args.count)
    config = ExtractionConfig(seed=args.seed, retries=args.retries, fallback=args.fallback)
    print("n,k,seed,t,b0_observed,stop_reason")
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = pool.map(lambda s: _stats_row(args.n, args.k, s, config), seeds)
        for row in rows:
            print(row)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rainbow-bases", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for retry tie-breaking")
    parser.add_argument("--retries", type=int, default=8)
    parser.add_argument("--verbose", "-v", action="count", default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument(
        "--fallback",
        action="store_true",
        help="after failed repairs, accept a matching whose removal keeps every deficit inequality",
    )
    parser.add_argument("--dump-graph", action="store_true", help="print G_0 edges to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("seed_pos", metavar="seed", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--mode", choices=["uniform", "planted"], default="uniform")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("extract", help="extract disjoint rainbow bases")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    p.add_argument("input")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact t by brute force (n <= 5, k <= 2)")
    p.add_argument("input")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("stats", help="CSV summary over generated instances")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("count", type=int)
    p.add_argument("seed_pos", metavar="seed", type=int)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
