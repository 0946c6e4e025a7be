"""Command-line front end: ``xbwk build|bwt2xbw|xbw2bwt|optimize|stats|verify|simulate-ac``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .checks import CaseSpec, run_cases
from .container import Container, encode_strings, histogram
from .conversion import bwt_to_xbw, xbw_to_bwt
from .decomposition import decompose_bwt, simulate_ac
from .errors import FormatError, MissingSection, NotAPermutation, RecordError, XbwkError
from .optimize import optimize_order, rl_measures
from .suffix import build_tables
from .text import StringSet, lex_ordered, load_string_set, make_ordered, read_records
from .trie import build_failure_links, build_trie
from .xbw import xbw_from_arrays

log = logging.getLogger("xbwk")

EXIT_OK, EXIT_PROPERTY, EXIT_IO, EXIT_FORMAT = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e.strerror or e}") from None


def _write_bytes(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e.strerror or e}") from None


def _load_container(path: str) -> Container:
    return Container.from_bytes(_read_bytes(path))


def _load_set(path: str, fmt: str) -> StringSet:
    return load_string_set(_read_bytes(path), fmt)


def _resolve_order(S: StringSet, order: str, fmt: str):
    """``lex``, ``optimize`` or a file listing the strings in concatenation order."""
    if order == "lex":
        return lex_ordered(S), None
    if order == "optimize":
        res = optimize_order(S)
        return res.ordered, res
    seq = [r for r in read_records(_read_bytes(order), fmt) if not r.startswith(b"#RESULT")]
    try:
        return make_ordered(S, seq), None
    except (KeyError, NotAPermutation) as e:
        raise CliError(EXIT_FORMAT, f"order file {order}: {e}") from None


def _tables_container(P, res=None) -> Container:
    tables = build_tables(P)
    d = decompose_bwt(tables.lcp_p, tables.lrs)
    c = Container()
    c.put("SA", tables.sa.sa)
    c.put("BWT", tables.index.bwt)
    c.put("LCP", tables.lcp_p.values)
    c.put("LRS", tables.lrs.values)
    c.put("BWD", d.bwd)
    meta = {
        "string_count": len(P.set),
        "histogram": histogram(P.set),
        "order": encode_strings(P.strings_in_order()),
        "length": len(tables.index.bwt),
    }
    if res is not None:
        meta["optimize"] = res.footer()
    c.meta = meta
    return c


def _add_xbw(c: Container) -> None:
    c.require("BWT", "BWD")
    x = bwt_to_xbw(c.get("BWT"), c.get("BWD"))
    c.put("XBWT", x.xbwt)
    c.put("XBWL", x.xbwl)
    c.put("XBWD", x.xbwd)


def cmd_build(args) -> int:
    S = _load_set(args.input, args.format)
    P, res = _resolve_order(S, args.order, args.format)
    c = _tables_container(P, res)
    if args.xbw:
        _add_xbw(c)
    _write_bytes(args.output, c.to_bytes())
    return EXIT_OK


def cmd_bwt2xbw(args) -> int:
    c = _load_container(args.input)
    _add_xbw(c)
    _write_bytes(args.output or args.input, c.to_bytes())
    return EXIT_OK


def cmd_xbw2bwt(args) -> int:
    c = _load_container(args.input)
    c.require("XBWT", "XBWL")
    x = xbw_from_arrays(c.get("XBWT"), c.get("XBWL"))
    e = xbw_to_bwt(x)
    c.put("BWT", e.bwt)
    c.put("LRS", e.lrs.values)
    c.put("LCP", e.lcp_p.values)
    c.put("BWD", e.bwd)
    c.put("XBWD", x.xbwd)
    # the expansion follows the trie's planar order, which need not be any concatenation
    c.drop("SA")
    meta = c.meta
    meta["order"] = None
    meta.setdefault("string_count", int(np.count_nonzero(e.bwt == 0)))
    meta["length"] = len(e.bwt)
    c.meta = meta
    _write_bytes(args.output or args.input, c.to_bytes())
    return EXIT_OK


def cmd_optimize(args) -> int:
    S = _load_set(args.input, args.format)
    res = optimize_order(S, args.target)
    lines = b"".join(s + b"\n" for s in res.order)
    footer = ("#RESULT " + json.dumps(res.footer(), sort_keys=True) + "\n").encode()
    if args.output:
        _write_bytes(args.output, lines)
        sys.stdout.write(footer.decode())
    else:
        _write_bytes("-", lines + footer)
    return EXIT_OK


def _sym(c: int) -> str:
    if c == 0:
        return "$"
    if 32 < c < 127 and c not in (ord("$"), ord("\\")):
        return chr(c)
    return f"\\x{c:02x}"


def container_stats(c: Container) -> dict:
    c.require("BWT")
    bwt = c.get("BWT")
    out = {
        "length": len(bwt),
        "strings": int(np.count_nonzero(bwt == 0)),
        "alphabet": int(len(np.unique(bwt[bwt != 0]))),
    }
    if len(bwt):
        m = rl_measures(bwt)
        out["d_B"], out["rle_bwt"] = m.changes, m.rle_size
    if "BWD" in c:
        out["bwt_blocks"] = len(c.get("BWD"))
    if "XBWT" in c:
        xt = c.get("XBWT")
        m = rl_measures(xt)
        out["d_X"], out["rle_xbwt"] = m.changes, m.rle_size
        out["xbwt_length"] = len(xt)
    if "XBWL" in c:
        out["xbw_blocks"] = int(np.count_nonzero(c.get("XBWL")))
    meta = c.meta
    if "optimize" in meta:
        out["optimize"] = meta["optimize"]
    return out


def _tsv(c: Container, stats: dict) -> str:
    rows = [f"{k}\t{json.dumps(v, sort_keys=True) if isinstance(v, dict) else v}" for k, v in stats.items()]
    bwt = c.get("BWT")
    lcp = c.get("LCP") if "LCP" in c else None
    lrs = c.get("LRS") if "LRS" in c else None
    for r, s in enumerate(bwt.tolist()):
        cols = ["BWT", str(r), _sym(s)]
        if lcp is not None:
            cols.append(str(int(lcp[r])))
        if lrs is not None:
            cols.append(str(int(lrs[r])))
        rows.append("\t".join(cols))
    if "XBWT" in c and "XBWL" in c:
        xt, xl = c.get("XBWT").tolist(), c.get("XBWL").tolist()
        b, start = 0, 0
        for i, bit in enumerate(xl):
            if bit:
                syms = "".join(_sym(s) for s in xt[start:i + 1])
                bits = "".join(str(v) for v in xl[start:i + 1])
                rows.append(f"XBW\t{b}\t{syms}\t{bits}")
                b, start = b + 1, i + 1
    return "\n".join(rows) + "\n"


def cmd_stats(args) -> int:
    c = _load_container(args.input)
    st = container_stats(c)
    if args.format == "json":
        print(json.dumps(st, sort_keys=True))
    elif args.format == "tsv":
        sys.stdout.write(_tsv(c, st))
    else:
        for k, v in st.items():
            print(f"{k:>12}  {v}")
    return EXIT_OK


def _verify_chunk(payload):
    seed, chunk, spec = payload
    return run_cases(seed, chunk, spec)


def cmd_verify(args) -> int:
    spec = CaseSpec(args.max_strings, args.max_len, args.alphabet.encode("latin-1"))
    log.info("verify: seed %d, %d cases", args.seed, args.cases)
    if args.jobs > 1:
        from multiprocessing import Pool

        chunks = [range(k, args.cases, args.jobs) for k in range(args.jobs)]
        with Pool(args.jobs) as pool:
            parts = pool.map(_verify_chunk, [(args.seed, ch, spec) for ch in chunks])
        failed = sorted((r for p in parts for r in p), key=lambda r: r.case["case"])
    else:
        failed = run_cases(args.seed, args.cases, spec)
    dump = "".join(r.to_json() + "\n" for r in failed)
    if args.failures:
        _write_bytes(args.failures, dump.encode())
    else:
        sys.stdout.write(dump)
    print(f"verify: {args.cases} cases, {len(failed)} failed checks (seed {args.seed})", file=sys.stderr)
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_simulate_ac(args) -> int:
    S = _load_set(args.input, args.format)
    P, _ = _resolve_order(S, args.order, args.format)
    if args.graph == "bwt":
        dot = simulate_ac(P).to_dot()
    else:
        t = build_trie(S, terminators=False)
        dot = t.to_dot(build_failure_links(t))
    _write_bytes(args.output, dot.encode())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xbwk", description="Multi-string BWT and XBW of Aho-Corasick tries.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("input", help="string set, one record per line ('-' for stdin)")
        sp.add_argument("--format", choices=["lines", "fasta"], default="lines", help="input record format")

    sp = sub.add_parser("build", help="build BWT-side tables into a container")
    add_input(sp)
    sp.add_argument("-o", "--output", required=True, help="container path")
    sp.add_argument("--order", default="lex", help="lex, optimize, or a file of strings in concatenation order")
    sp.add_argument("--xbw", action="store_true", help="also store the XBW sections")
    sp.set_defaults(func=cmd_build)

    for name, func, text in (("bwt2xbw", cmd_bwt2xbw, "add XBWT/XBWL/XBWD computed from BWT and BWD"),
                             ("xbw2bwt", cmd_xbw2bwt, "replace BWT-side sections by the block expansion of the XBW")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("input", help="container path")
        sp.add_argument("-o", "--output", help="output container (default: rewrite input)")
        sp.set_defaults(func=func)

    sp = sub.add_parser("optimize", help="print a concatenation order with few BWT runs")
    add_input(sp)
    sp.add_argument("--target", choices=["bwt", "xbwt"], default="bwt")
    sp.add_argument("-o", "--output", help="write the order here; the #RESULT footer still goes to stdout")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("stats", help="run-length measures and block counts of a container")
    sp.add_argument("input", help="container path")
    sp.add_argument("--format", choices=["text", "json", "tsv"], default="text")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("verify", help="random instances checked against brute-force oracles")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=1000)
    sp.add_argument("--max-strings", type=int, default=6)
    sp.add_argument("--max-len", type=int, default=5)
    sp.add_argument("--alphabet", default="abc")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--failures", help="write JSON-lines failures here instead of stdout")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("simulate-ac", help="DOT drawing of the automaton read off the BWT blocks")
    add_input(sp)
    sp.add_argument("--order", default="lex", help="lex, optimize, or an order file")
    sp.add_argument("--graph", choices=["bwt", "trie"], default="bwt",
                    help="bwt: graph over BWT blocks of the reversed set; trie: explicit automaton")
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_simulate_ac)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as e:
        print(f"xbwk: {e}", file=sys.stderr)
        return e.code
    except (MissingSection, FormatError) as e:
        print(f"xbwk: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except (RecordError, NotAPermutation) as e:
        print(f"xbwk: invalid input: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except XbwkError as e:
        # inconsistent tables inside an otherwise readable container
        print(f"xbwk: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
