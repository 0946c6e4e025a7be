"""Compiled inner loops. Everything here works on 0-based numpy arrays."""
import numpy as np
from numba import njit

# ---------------------------------------------------------------- SA-IS


@njit(cache=True)
def _classify(t):
    n = t.shape[0]
    stype = np.zeros(n, dtype=np.bool_)
    stype[n - 1] = True
    for i in range(n - 2, -1, -1):
        if t[i] < t[i + 1] or (t[i] == t[i + 1] and stype[i + 1]):
            stype[i] = True
    return stype


@njit(cache=True)
def _bucket_bounds(t, k, tails):
    counts = np.zeros(k, dtype=np.int64)
    for i in range(t.shape[0]):
        counts[t[i]] += 1
    out = np.empty(k, dtype=np.int64)
    s = 0
    for c in range(k):
        s += counts[c]
        out[c] = s - 1 if tails else s - counts[c]
    return out


@njit(cache=True)
def _place_lms(t, sa, lms, k):
    tails = _bucket_bounds(t, k, True)
    for p in range(lms.shape[0] - 1, -1, -1):
        j = lms[p]
        c = t[j]
        sa[tails[c]] = j
        tails[c] -= 1


@njit(cache=True)
def _induce(t, sa, stype, k):
    n = t.shape[0]
    heads = _bucket_bounds(t, k, False)
    for i in range(n):
        j = sa[i] - 1
        if sa[i] > 0 and not stype[j]:
            c = t[j]
            sa[heads[c]] = j
            heads[c] += 1
    tails = _bucket_bounds(t, k, True)
    for i in range(n - 1, -1, -1):
        j = sa[i] - 1
        if sa[i] > 0 and stype[j]:
            c = t[j]
            sa[tails[c]] = j
            tails[c] -= 1


@njit(cache=True)
def _is_lms(stype, i):
    return i > 0 and stype[i] and not stype[i - 1]


@njit(cache=True)
def _lms_equal(t, stype, a, b):
    n = t.shape[0]
    if a == n - 1 or b == n - 1:
        return a == b
    i = 0
    while True:
        if t[a + i] != t[b + i] or stype[a + i] != stype[b + i]:
            return False
        if i > 0:
            ea = _is_lms(stype, a + i)
            eb = _is_lms(stype, b + i)
            if ea or eb:
                return ea and eb
        i += 1


@njit(cache=True)
def _name_lms(t, sa, stype):
    n = t.shape[0]
    names = np.full(n, -1, dtype=np.int64)
    name = -1
    prev = -1
    for i in range(n):
        p = sa[i]
        if _is_lms(stype, p):
            if prev < 0 or not _lms_equal(t, stype, prev, p):
                name += 1
            names[p] = name
            prev = p
    return names, name + 1


def sais(t, k):
    """Suffix array of ``t`` whose last symbol is a unique minimum 0."""
    n = t.shape[0]
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    stype = _classify(t)
    idx = np.arange(1, n)
    lms = idx[stype[1:] & ~stype[:-1]].astype(np.int64)
    sa = np.full(n, -1, dtype=np.int64)
    _place_lms(t, sa, lms, k)
    _induce(t, sa, stype, k)
    names, count = _name_lms(t, sa, stype)
    reduced = names[lms]
    if count < lms.shape[0]:
        sub = sais(reduced, count)
    else:
        sub = np.empty(lms.shape[0], dtype=np.int64)
        sub[reduced] = np.arange(lms.shape[0])
    sorted_lms = lms[sub]
    sa.fill(-1)
    _place_lms(t, sa, sorted_lms, k)
    _induce(t, sa, stype, k)
    return sa


# ------------------------------------------------------- LCP, LF, LRS


@njit(cache=True)
def kasai(text, sa, cyclic):
    """Kasai scan; with ``cyclic`` comparisons wrap past the end (rotation LCP)."""
    n = text.shape[0]
    rank = np.empty(n, dtype=np.int64)
    for i in range(n):
        rank[sa[i]] = i
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            if cyclic:
                while h < n and text[(i + h) % n] == text[(j + h) % n]:
                    h += 1
            else:
                while i + h < n and j + h < n and text[i + h] == text[j + h]:
                    h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@njit(cache=True)
def lf_table(bwt, c_array):
    n = bwt.shape[0]
    seen = np.zeros(256, dtype=np.int64)
    lf = np.empty(n, dtype=np.int64)
    for i in range(n):
        c = bwt[i]
        lf[i] = c_array[c] + seen[c]
        seen[c] += 1
    return lf


@njit(cache=True)
def lrs_walks(bwt, lf, string_count):
    n = bwt.shape[0]
    lrs = np.full(n, -1, dtype=np.int64)
    visits = np.zeros(n, dtype=np.int64)
    for i in range(string_count):
        pos = i
        nb = 0
        while True:
            lrs[pos] = nb
            visits[pos] += 1
            if bwt[pos] == 0:
                break
            nb += 1
            pos = lf[pos]
    return lrs, visits


# ------------------------------------------------ failure arcs (stack)


@njit(cache=True)
def failure_targets(starts, lcp_p, lrs, block_of):
    """For each block start i, the largest k < i with lrs[k] <= min(lcp_p[k+1..i]).

    A stack keeps candidates with strictly increasing lrs: an older k' with
    lrs[k'] >= lrs[k] can never beat a newer k.
    """
    n = lcp_p.shape[0]
    stack = np.empty(n, dtype=np.int64)
    top = 0
    out = np.full(starts.shape[0], -1, dtype=np.int64)
    s = 0
    for i in range(n):
        h = lcp_p[i]
        while top > 0 and lrs[stack[top - 1]] > h:
            top -= 1
        if s < starts.shape[0] and starts[s] == i:
            if top > 0:
                out[s] = block_of[stack[top - 1]]
            s += 1
        while top > 0 and lrs[stack[top - 1]] >= lrs[i]:
            top -= 1
        stack[top] = i
        top += 1
    return out


# ------------------------------------------------------ BWT <-> XBW


@njit(cache=True)
def bwt_to_xbw(bwt, bwd):
    n = bwt.shape[0]
    xbwt = np.empty(n, dtype=np.uint8)
    xbwl = np.zeros(n, dtype=np.uint8)
    stamp = np.full(256, -1, dtype=np.int64)
    k = 0
    p = 0
    for b in range(bwd.shape[0]):
        for j in range(p, p + bwd[b]):
            c = bwt[j]
            if stamp[c] != b:
                stamp[c] = b
                xbwt[k] = c
                k += 1
        xbwl[k - 1] = 1
        p += bwd[b]
    return xbwt[:k].copy(), xbwl[:k].copy()


@njit(cache=True)
def xbw_child_blocks(xbwt):
    """Child block number of every position (-1 under a ``$`` label)."""
    n = xbwt.shape[0]
    counts = np.zeros(256, dtype=np.int64)
    for i in range(n):
        counts[xbwt[i]] += 1
    # every labelled node except a leaf is internal, so blocks whose
    # parent label is below c number 1 + #{j : $ < xbwt[j] < c}
    start = np.zeros(256, dtype=np.int64)
    acc = 1
    for c in range(1, 256):
        start[c] = acc
        acc += counts[c]
    seen = np.zeros(256, dtype=np.int64)
    child = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        c = xbwt[i]
        if c != 0:
            child[i] = start[c] + seen[c]
            seen[c] += 1
    return child, start


@njit(cache=True)
def xbw_tree_pass(block_start, child):
    """BFS over blocks: depth of every block, parent position, leaf counts."""
    nb = block_start.shape[0] - 1
    n = child.shape[0]
    depth = np.full(nb, -1, dtype=np.int64)
    parent = np.full(nb, -1, dtype=np.int64)
    order = np.empty(nb, dtype=np.int64)
    depth[0] = 0
    order[0] = 0
    head = 0
    tail = 1
    while head < tail:
        b = order[head]
        head += 1
        for i in range(block_start[b], block_start[b + 1]):
            cb = child[i]
            if cb >= 0:
                depth[cb] = depth[b] + 1
                parent[cb] = i
                order[tail] = cb
                tail += 1
    leaves = np.zeros(n, dtype=np.int64)
    block_leaves = np.zeros(nb, dtype=np.int64)
    for q in range(tail - 1, -1, -1):
        b = order[q]
        tot = 0
        for i in range(block_start[b], block_start[b + 1]):
            cb = child[i]
            leaves[i] = 1 if cb < 0 else block_leaves[cb]
            tot += leaves[i]
        block_leaves[b] = tot
    return depth, parent, leaves, tail


@njit(cache=True)
def xbw_expand(xbwt, block_start, depth, leaves):
    """Per block, repeat each child label by its leaf count; BWT symbols, LRS and block sizes."""
    nb = block_start.shape[0] - 1
    total = 0
    for i in range(xbwt.shape[0]):
        total += leaves[i]
    bwt = np.empty(total, dtype=np.uint8)
    lrs = np.empty(total, dtype=np.int64)
    bwd = np.empty(nb, dtype=np.int64)
    p = 0
    for b in range(nb):
        first = p
        for i in range(block_start[b], block_start[b + 1]):
            for _ in range(leaves[i]):
                bwt[p] = xbwt[i]
                lrs[p] = depth[b]
                p += 1
        bwd[b] = p - first
    return bwt, lrs, bwd


@njit(cache=True)
def capped_lcp_from_bwt(bwt, lf):
    """LCP of adjacent ranks, stopping at the first $, from the BWT alone.

    The LF cycles are unrolled into a text (each cycle ends on a $-suffix),
    then a Kasai pass runs over it.  Only the order of the $-capped
    prefixes is used, so the BWT need not come from a single text.
    """
    n = bwt.shape[0]
    seq = np.empty(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    rank_of = np.empty(n, dtype=np.int64)
    text = np.empty(n, dtype=np.uint8)
    k = 0
    for r0 in range(n):
        # ranks below #$ are the $-suffixes and come first, so every cycle
        # is entered at a $-suffix and its unrolled text ends on $
        if seen[r0]:
            continue
        a = k
        r = r0
        while not seen[r]:
            seen[r] = True
            seq[k] = r
            k += 1
            r = lf[r]
        # seq[a:k] walks the cycle backwards from r0; lay it out forwards
        m = k - a
        for q in range(m):
            rr = seq[a + q]
            pos = a + m - 1 - q
            rank_of[pos] = rr
        if k == n:
            break
    sa = np.empty(n, dtype=np.int64)
    for pos in range(n):
        sa[rank_of[pos]] = pos
    # suffix lf[r] starts with bwt[r]
    for r in range(n):
        text[sa[lf[r]]] = bwt[r]
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank_of[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h] and text[i + h] != 0:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1
    return lcp
