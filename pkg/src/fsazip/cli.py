"""fsazip command line.

Exit codes: 0 ok, 1 usage, 2 parse/format error, 3 corrupt container,
4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from fsazip import bench, lza
from fsazip.automaton import ParseError, fingerprint, parse_text, serialize_text
from fsazip.generators import CLASSES, GenSpec

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CORRUPT, EXIT_INTERNAL = 0, 1, 2, 3, 4

log = logging.getLogger("fsazip")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def cmd_compress(args) -> int:
    raw = _read(args.input)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"input is not UTF-8: {e}") from None
    a = parse_text(text, strip_weights=args.strip_weights, dedupe=args.dedupe)
    mode = lza.STRUCTURE if args.structure else lza.FULL
    c = lza.encode(a, mode)
    blob = c.to_bytes()
    _write(args.output, blob)
    if args.verbose:
        st = c.stats
        print(f"input {len(raw)} bytes -> {len(blob)} bytes ({mode} mode)", file=sys.stderr)
        print(f"|D| = {st.dict_size}, phrases/state = {st.phrases / a.n:.3f}", file=sys.stderr)
        if mode == lza.FULL and st.dict_size:
            bound = lza.lemma2_bound(st.dict_size, a.n, a.m)
            print(f"payload {st.payload_bits} bits, Lemma-2 bound {bound:.0f} bits "
                  f"(ratio {st.payload_bits / bound:.3f})", file=sys.stderr)
    return EXIT_OK


def cmd_decompress(args) -> int:
    a = lza.decode(_read(args.input))
    _write(args.output, serialize_text(a).encode("utf-8"))
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = GenSpec(args.kind, args.n, args.p, args.m, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _write(args.output, serialize_text(spec.build()).encode("utf-8"))
    return EXIT_OK


def _split(value: str | None) -> list[str]:
    return [v.strip() for v in (value or "").split(",") if v.strip()]


def cmd_bench(args) -> int:
    classes = [c.upper() for c in _split(args.classes)]
    if classes == ["ALL"]:
        classes = list(CLASSES)
    if not classes and not args.input:
        raise UsageError("no inputs: give --classes and/or --input")
    try:
        specs = [GenSpec(c, args.n, args.p, args.m) for c in classes]
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    methods = _split(args.methods) or list(bench.DEFAULT_METHODS)
    report = bench.run_bench(
        specs + list(args.input or []),
        runs=args.runs,
        methods=methods,
        base_seed=args.seed,
        workers=args.workers,
    )
    md = report.to_markdown()
    if args.out_csv:
        Path(args.out_csv).write_text(report.to_csv())
    if args.out_md:
        Path(args.out_md).write_text(md)
    fig = args.out_fig
    if fig is None and args.out_csv:
        fig = str(Path(args.out_csv).with_suffix(".png"))
    if fig:
        from fsazip.figures import plot_sizes

        plot_sizes(report, fig)
    if not args.out_md:
        sys.stdout.write(md)
    for r in report.rows:
        if r.note:
            log.info("%s %s: %s", r.input_id, r.method, r.note)
    return EXIT_OK


def cmd_inspect(args) -> int:
    raw = _read(args.input)
    if raw[:4] == lza.MAGIC:
        c = lza.CompressedAutomaton.from_bytes(raw)
        a = lza.decode(raw)
        print(f"container: mode={c.mode} n={c.n} m={c.m} initial={c.initial} "
              f"finals={len(c.finals)} bytes={len(raw)}")
    else:
        a = parse_text(raw.decode("utf-8"), strip_weights=True, dedupe=True)
        print(f"text: {len(raw)} bytes")
    print(f"automaton: n={a.n} m={a.m} transitions={len(a.transitions)} "
          f"initial={a.initial} finals={len(a.finals)}")
    fp = fingerprint(a)
    print(f"bfs layers: {len(fp[-1])} (reachable {sum(fp[-1])} of {a.n})")
    for mode in (lza.FULL, lza.STRUCTURE):
        c = lza.encode(a, mode)
        print(f"{mode}: {len(c.to_bytes())} bytes, |D|={c.stats.dict_size}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fsazip", description="Lempel-Ziv compression of automata and graphs.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    c = sub.add_parser(
        "compress",
        help="text automaton -> container",
        description="Compress a text-format automaton. With --structure only the "
        "structure is kept: decompression yields an isomorphic automaton with "
        "states renumbered in BFS order, not the original numbering.",
    )
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--structure", action="store_true",
                   help="LZA_S: compress up to isomorphism (state ids not preserved)")
    c.add_argument("--strip-weights", action="store_true", help="drop arc/final weights")
    c.add_argument("--dedupe", action="store_true", help="silently drop duplicate arcs")
    c.add_argument("-v", "--verbose", action="count", default=0)
    c.set_defaults(func=cmd_compress)

    d = sub.add_parser("decompress", help="container -> canonical text")
    d.add_argument("input")
    d.add_argument("output")
    d.set_defaults(func=cmd_decompress)

    g = sub.add_parser("gen", help="generate a synthetic automaton")
    g.add_argument("--class", dest="kind", required=True, type=str.upper,
                   choices=CLASSES, metavar="{g1,a1,g2,a2}")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.01)
    g.add_argument("--m", type=int, default=10)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("output", nargs="?", default="-")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="size comparison in the layout of the paper's Table 1")
    b.add_argument("--classes", help="comma list of G1,A1,G2,A2 or 'all'")
    b.add_argument("--input", action="append", help="text-format automaton file (repeatable)")
    b.add_argument("--n", type=int, default=1000)
    b.add_argument("--p", type=float, default=0.01)
    b.add_argument("--m", type=int, default=10)
    b.add_argument("--runs", type=int, default=20)
    b.add_argument("--methods", help=f"comma list (default {','.join(bench.DEFAULT_METHODS)})")
    b.add_argument("--seed", type=int, default=0, help="base seed")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out-csv")
    b.add_argument("--out-md")
    b.add_argument("--out-fig", help="PNG path (default: next to --out-csv)")
    b.set_defaults(func=cmd_bench)

    i = sub.add_parser("inspect", help="summarize a text automaton or container")
    i.add_argument("input")
    i.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as e:
        print(f"fsazip: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"fsazip: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except lza.CorruptInput as e:
        print(f"fsazip: corrupt input: {e}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as e:
        print(f"fsazip: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, RuntimeError) as e:
        print(f"fsazip: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
