"""Per-instance property checks against the oracles, shared by ``xbwk verify`` and the tests."""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .conversion import block_bijection, bwt_to_xbw, reversed_trie, verify_theorem6, xbw_to_bwt
from .decomposition import dec_pre, decompose_bwt, failure_arcs, simulate_ac, tree_arcs
from .errors import RepresentativeMismatch
from .oracles import NaiveAc, OracleReport, naive_ac, naive_concat, naive_index, naive_xbw_of_order
from .optimize import rl_measures
from .suffix import build_tables
from .text import OrderedStringSet, StringSet, make_ordered
from .trie import is_planar


@dataclass(frozen=True)
class CaseSpec:
    max_strings: int = 6
    max_len: int = 5
    alphabet: bytes = b"abc"


def random_case(rng: random.Random, spec: CaseSpec) -> OrderedStringSet:
    """Distinct random strings in a random circular order."""
    n = rng.randint(1, spec.max_strings)
    pool = set()
    # a small alphabet and length cap may not hold n distinct strings
    cap = sum(len(spec.alphabet) ** k for k in range(1, spec.max_len + 1))
    n = min(n, cap)
    while len(pool) < n:
        k = rng.randint(1, spec.max_len)
        pool.add(bytes(rng.choice(spec.alphabet) for _ in range(k)))
    S = StringSet(tuple(sorted(pool)))
    seq = list(range(n))
    rng.shuffle(seq)
    return make_ordered(S, seq)


def describe(P: OrderedStringSet) -> dict:
    return {"order": [s.decode("latin-1") for s in P.strings_in_order()]}


def _graph_names(tables, decomp):
    return [dec_pre(decomp, tables, k) for k in range(len(decomp))]


def _ac_matches(names, parent_arcs, failure, ref: NaiveAc) -> tuple[bool, bool, bool]:
    nodes_ok = len(names) == len(set(names)) and set(names) == set(ref.nodes)
    arcs = {(names[a.parent], names[a.child], a.label) for a in parent_arcs}
    fail = {names[k]: names[int(f)] for k, f in enumerate(failure) if f >= 0}
    return nodes_ok, arcs == set(ref.arcs), fail == ref.failure


def check_index(P: OrderedStringSet) -> list[OracleReport]:
    """Tables and block structure of ``P`` against the literal definitions."""
    case = describe(P)
    tables = build_tables(P)
    ref = naive_index(naive_concat(P))
    out = []
    got = {
        "sa": tables.sa.sa.tolist(),
        "bwt": tables.index.bwt_bytes(),
        "lcp": tables.lcp.values.tolist(),
        "lrs": tables.lrs.values.tolist(),
        "lcp_p": tables.lcp_p.values.tolist(),
    }
    for key, val in got.items():
        exp = getattr(ref, key)
        out.append(OracleReport({**case, "check": key}, exp, val, exp == val))
    decomp = decompose_bwt(tables.lcp_p, tables.lrs)
    names = _graph_names(tables, decomp)
    rev = [s[::-1] for s in P.set]
    ac = naive_ac(rev)
    arcs = tree_arcs(decomp, tables.index)
    fail = failure_arcs(decomp, tables.lcp_p, tables.lrs)
    nodes_ok, arcs_ok, fail_ok = _ac_matches(names, arcs, fail, ac)
    out.append(OracleReport({**case, "check": "dec_pre_bijection"}, len(ac.nodes), len(names), nodes_ok))
    out.append(OracleReport({**case, "check": "tree_arcs"}, len(ac.arcs), len(arcs), arcs_ok))
    out.append(OracleReport({**case, "check": "failure_arcs"}, None, None, fail_ok))
    g = simulate_ac(P)
    ac2 = naive_ac(list(P.set))
    names2 = [g.prefix(v) for v in range(len(g))]
    ok = _ac_matches(names2, g.tree_arcs(), g.failure, ac2)
    out.append(OracleReport({**case, "check": "simulate_ac"}, None, list(ok), all(ok)))
    return out


def check_conversion(P: OrderedStringSet) -> list[OracleReport]:
    """Both conversion directions, the block pairing and the planarity claims."""
    case = describe(P)
    out = []
    tables = build_tables(P)
    decomp = decompose_bwt(tables.lcp_p, tables.lrs)
    x = bwt_to_xbw(tables.index.bwt, decomp.bwd)
    exp_t, exp_l = naive_xbw_of_order(P)
    got = (x.xbwt_bytes(), x.xbwl.tolist())
    out.append(OracleReport({**case, "check": "bwt_to_xbw"}, [exp_t, exp_l], list(got), got == (exp_t, exp_l)))
    try:
        block_bijection(decomp, x, tables)
        paired = True
    except RepresentativeMismatch:
        paired = False
    out.append(OracleReport({**case, "check": "block_bijection"}, True, paired, paired))
    rep = verify_theorem6(P)
    out.append(OracleReport({**case, "check": "block_labels"}, [], [c.block for c in rep.failures()], rep.ok))
    e = xbw_to_bwt(x)
    d_exp = rl_measures(e.bwt).changes
    d_bwt = rl_measures(tables.index.bwt).changes
    d_x = rl_measures(x.xbwt).changes
    planar = is_planar(reversed_trie(P))
    if planar:
        same = (np.array_equal(e.bwt, tables.index.bwt) and np.array_equal(e.lrs.values, tables.lrs.values)
                and np.array_equal(e.lcp_p.values, tables.lcp_p.values))
        out.append(OracleReport({**case, "check": "roundtrip"}, tables.index.bwt_bytes(), e.index.bwt_bytes(), same))
    out.append(OracleReport({**case, "check": "expansion_le_bwt"}, d_bwt, d_exp, d_exp <= d_bwt))
    out.append(OracleReport({**case, "check": "expansion_eq_xbwt"}, d_x, d_exp, d_exp == d_x))
    return out


def check_case(P: OrderedStringSet) -> list[OracleReport]:
    return check_index(P) + check_conversion(P)


def case_rng(seed: int, k: int) -> random.Random:
    """Independent stream per case so any split across workers gives the same instances."""
    return random.Random(seed * 1_000_003 + k)


def run_cases(seed: int, cases, spec: CaseSpec) -> list[OracleReport]:
    """Failures only, over case numbers ``cases`` (an int means ``range(cases)``)."""
    if isinstance(cases, int):
        cases = range(cases)
    failed = []
    for k in cases:
        P = random_case(case_rng(seed, k), spec)
        for r in check_case(P):
            if not r.passed:
                failed.append(OracleReport({**r.case, "seed": seed, "case": k}, r.expected, r.actual, False))
    return failed
