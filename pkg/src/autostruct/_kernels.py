"""Hot numeric kernels over dense automaton tables and rule tries.

Everything here operates on plain numpy arrays so the module works both
JIT-compiled (numba) and as ordinary Python; see ``_accel``.  Conventions:

* DFA transition tables are ``int32[n_states + 1, n_syms]`` with row 0 the
  implicit dead state (all zeros) and entry 0 meaning "no transition".
  State 1 is the initial state.
* Hashing is multiply-free (xor/rotate on values < 2**63) so the JIT and
  fallback paths compute bit-identical values without integer overflow.
* Growable structures are reallocated by doubling inside the kernels.
"""

import numpy as np

from ._accel import maybe_njit

_M63 = (1 << 63) - 1


@maybe_njit(cache=True)
def _mix(h, k):
    h = (h ^ k) & _M63
    h = h ^ (h >> 33)
    h = (((h & ((1 << 39) - 1)) << 24) | (h >> 39)) ^ (h >> 11)
    h = ((h & ((1 << 31) - 1)) << 32) ^ (h >> 31) ^ ((h >> 7) & ((1 << 24) - 1))
    return h & _M63


@maybe_njit(cache=True)
def _grow_i32(arr, need):
    cap = arr.shape[0]
    while cap < need:
        cap *= 2
    out = np.zeros(cap, np.int32)
    out[: arr.shape[0]] = arr
    return out


@maybe_njit(cache=True)
def _grow_i64(arr, need):
    cap = arr.shape[0]
    while cap < need:
        cap *= 2
    out = np.zeros(cap, np.int64)
    out[: arr.shape[0]] = arr
    return out


# ---------------------------------------------------------------------------
# open-addressing hash table: int64 key -> int32 value (key -1 = empty slot)
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def _key_hash(key):
    return _mix(np.int64(0x51ED2701), np.int64(key))


@maybe_njit(cache=True)
def _ht_probe(hkeys, key):
    """Slot holding `key`, or the empty slot where it would go."""
    mask = hkeys.shape[0] - 1
    i = _key_hash(key) & mask
    while True:
        k = hkeys[i]
        if k == key or k == -1:
            return i
        i = (i + 1) & mask


@maybe_njit(cache=True)
def _ht_grow(hkeys, hvals):
    cap = hkeys.shape[0] * 2
    nk = np.full(cap, -1, np.int64)
    nv = np.zeros(cap, np.int32)
    mask = cap - 1
    for i in range(hkeys.shape[0]):
        k = hkeys[i]
        if k != -1:
            j = _key_hash(k) & mask
            while nk[j] != -1:
                j = (j + 1) & mask
            nk[j] = k
            nv[j] = hvals[i]
    return nk, nv


# ---------------------------------------------------------------------------
# registry of int64 sequences (subset pool with hash-consing)
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def _seq_hash(pool, lo, hi):
    h = np.int64(0x243F6A88)
    for i in range(lo, hi):
        h = _mix(h, pool[i] + 1)
    return h


@maybe_njit(cache=True)
def _seq_equal(pool, lo1, hi1, buf, m):
    if hi1 - lo1 != m:
        return False
    for i in range(m):
        if pool[lo1 + i] != buf[i]:
            return False
    return True


@maybe_njit(cache=True)
def _registry_intern(pool, offs, n_seq, hkeys, hvals, buf, m):
    """Intern buf[:m] into the sequence registry.

    Returns (id, pool, offs, hkeys, hvals, n_seq).  Ids are 0-based in
    discovery order; the hash table stores sequence hashes as keys and
    resolves collisions by content comparison against the pool.
    """
    h = _seq_hash(buf, 0, m)
    mask = hkeys.shape[0] - 1
    i = h & mask
    while True:
        k = hkeys[i]
        if k == -1:
            break
        if k == h:
            cand = hvals[i]
            if _seq_equal(pool, offs[cand], offs[cand + 1], buf, m):
                return cand, pool, offs, hkeys, hvals, n_seq
        i = (i + 1) & mask
    end = offs[n_seq]
    pool = _grow_i64(pool, end + m + 1)
    for j in range(m):
        pool[end + j] = buf[j]
    offs = _grow_i64(offs, n_seq + 2)
    offs[n_seq + 1] = end + m
    hkeys[i] = h
    hvals[i] = n_seq
    n_seq += 1
    if 4 * n_seq > 3 * hkeys.shape[0]:
        hkeys, hvals = _ht_grow(hkeys, hvals)
    return n_seq - 1, pool, offs, hkeys, hvals, n_seq


@maybe_njit(cache=True)
def _sort_dedup(buf, m):
    """Sort buf[:m] in place and return the deduplicated length."""
    if m <= 1:
        return m
    sub = np.sort(buf[:m])
    w = 0
    prev = np.int64(-1)
    for i in range(m):
        v = sub[i]
        if v != prev:
            buf[w] = v
            w += 1
            prev = v
    return w


# ---------------------------------------------------------------------------
# generic NFA subset construction
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def nfa_determinize(indptr, targets, n_nfa, n_sym, init, acc_mask, bad_mask,
                    prune_bad, max_states):
    """Subset construction over a CSR-encoded NFA.

    ``indptr`` has length n_nfa*n_sym+1; the row for (state s, symbol a) is
    ``s*n_sym + a`` with 0-based NFA states.  Subsets containing a
    ``bad_mask`` state are pruned when ``prune_bad`` is set (the transition
    into them is dropped), so no word through a bad subset is accepted.

    Returns (status, n_dfa, trans_flat, acc); status 0=ok, 1=budget hit.
    """
    pool = np.zeros(256, np.int64)
    offs = np.zeros(64, np.int64)
    hkeys = np.full(256, -1, np.int64)
    hvals = np.zeros(256, np.int32)
    n_seq = 0

    buf = np.zeros(16 + init.shape[0], np.int64)
    m = 0
    for i in range(init.shape[0]):
        buf[m] = init[i]
        m += 1
    m = _sort_dedup(buf, m)
    bad = False
    for i in range(m):
        if bad_mask[buf[i]] != 0:
            bad = True
    if prune_bad and bad:
        return 0, 1, np.zeros(2 * n_sym, np.int32), np.zeros(2, np.uint8)
    _, pool, offs, hkeys, hvals, n_seq = _registry_intern(
        pool, offs, n_seq, hkeys, hvals, buf, m)

    cap_states = 64
    trans = np.zeros(cap_states * n_sym, np.int32)
    acc = np.zeros(cap_states, np.uint8)

    q = 0
    while q < n_seq:
        if n_seq > max_states:
            return 1, n_seq, trans, acc
        if n_seq + 2 > cap_states:
            cap_states *= 2
            trans = _grow_i32(trans, cap_states * n_sym)
            nacc = np.zeros(cap_states, np.uint8)
            nacc[: acc.shape[0]] = acc
            acc = nacc
        lo = offs[q]
        hi = offs[q + 1]
        a_acc = np.uint8(0)
        for i in range(lo, hi):
            if acc_mask[pool[i]] != 0:
                a_acc = np.uint8(1)
        acc[q + 1] = a_acc
        for sym in range(n_sym):
            m = 0
            for i in range(lo, hi):
                e = pool[i]
                row = e * n_sym + sym
                for t in range(indptr[row], indptr[row + 1]):
                    if m >= buf.shape[0]:
                        buf = _grow_i64(buf, m + 1)
                    buf[m] = targets[t]
                    m += 1
            if m == 0:
                continue
            m = _sort_dedup(buf, m)
            bad = False
            for i in range(m):
                if bad_mask[buf[i]] != 0:
                    bad = True
            if prune_bad and bad:
                continue
            tid, pool, offs, hkeys, hvals, n_seq = _registry_intern(
                pool, offs, n_seq, hkeys, hvals, buf, m)
            trans[(q + 1) * n_sym + sym] = tid + 1
        q += 1

    return 0, n_seq, trans[: (n_seq + 1) * n_sym].copy(), acc[: n_seq + 1].copy()


# ---------------------------------------------------------------------------
# deterministic synchronized products (multiplier, rule acceptor)
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def mult_product(dm_trans, w_trans, w_acc, k, max_states, out, write_out):
    """BFS of the multiplier product dm x W x W over padded pair symbols.

    States are packed ``(d*(nw+1) + w1)*(nw+1) + w2`` where w1/w2 = 0 means
    that side is past its end (reading padding).  ``out`` is a row-major
    transition table filled when ``write_out`` is set; it must have room
    for (count+1)*n_pair entries as established by a prior counting run.
    State keys are returned in discovery order either way.

    Returns (status, n_states, keys).
    """
    nw = w_trans.shape[0] - 1
    kp = k + 1
    n_pair = kp * kp
    side = np.int64(nw + 1)

    hkeys = np.full(1 << 14, -1, np.int64)
    hvals = np.zeros(1 << 14, np.int32)
    cap = 1 << 12
    keys = np.zeros(cap, np.int64)

    init = (np.int64(1) * side + np.int64(1)) * side + np.int64(1)
    slot = _ht_probe(hkeys, init)
    hkeys[slot] = init
    hvals[slot] = 1
    keys[0] = init
    n = 1

    q = 0
    while q < n:
        key = keys[q]
        w2 = key % side
        rest = key // side
        w1 = rest % side
        d = rest // side
        q += 1
        base = np.int64(q) * n_pair
        for x in range(kp):
            if x < k:
                if w1 == 0:
                    continue
                t1 = np.int64(w_trans[w1, x])
                if t1 == 0:
                    continue
            else:
                if w1 != 0 and w_acc[w1] == 0:
                    continue
                t1 = np.int64(0)
            for y in range(kp):
                if x == k and y == k:
                    continue
                td = np.int64(dm_trans[d, x * kp + y])
                if td == 0:
                    continue
                if y < k:
                    if w2 == 0:
                        continue
                    t2 = np.int64(w_trans[w2, y])
                    if t2 == 0:
                        continue
                else:
                    if w2 != 0 and w_acc[w2] == 0:
                        continue
                    t2 = np.int64(0)
                nkey = (td * side + t1) * side + t2
                slot = _ht_probe(hkeys, nkey)
                if hkeys[slot] == -1:
                    if n >= max_states:
                        return 1, n, keys[:n].copy()
                    hkeys[slot] = nkey
                    hvals[slot] = n + 1
                    if n >= cap:
                        cap *= 2
                        keys = _grow_i64(keys, cap)
                    keys[n] = nkey
                    n += 1
                    if 4 * n > 3 * hkeys.shape[0]:
                        hkeys, hvals = _ht_grow(hkeys, hvals)
                if write_out:
                    out[base + x * kp + y] = hvals[slot]
    return 0, n, keys[:n].copy()


@maybe_njit(cache=True)
def rule_acceptor_product(dm_trans, w_trans, eps_state, k, max_states):
    """Product accepting the pairs (u, v) of the minimal reduction rules.

    Components per state: a = W-run on u (0 once dead, terminal), b = W-run
    on u with its first letter dropped (must stay alive; 0 = not started),
    d = word-difference state for (u, v), c = W-run on v (0 once padded
    out), flag = shortlex status of v against u (0 eq, 1 less, 2 greater,
    3 v padded).  Accepting: a == 0, d == eps_state, flag in {1, 3}.

    Returns (status, n_states, keys, trans_flat, acc).
    """
    nw = w_trans.shape[0] - 1
    kp = k + 1
    n_pair = kp * kp
    sw = np.int64(nw + 1)
    nd1 = np.int64(dm_trans.shape[0])

    hkeys = np.full(1 << 14, -1, np.int64)
    hvals = np.zeros(1 << 14, np.int32)
    cap = 1 << 12
    keys = np.zeros(cap, np.int64)
    trans = np.zeros(cap * n_pair, np.int32)
    acc = np.zeros(cap, np.uint8)

    init = (((np.int64(1) * sw + 0) * nd1 + eps_state) * sw + 1) * 4 + 0
    slot = _ht_probe(hkeys, init)
    hkeys[slot] = init
    hvals[slot] = 1
    keys[0] = init
    n = 1

    q = 0
    while q < n:
        key = keys[q]
        flag = key % 4
        rest = key // 4
        c = rest % sw
        rest = rest // sw
        d = rest % nd1
        rest = rest // nd1
        b = rest % sw
        a = rest // sw
        q += 1
        if a == 0:
            continue  # u-run died on its final letter: terminal state
        if n + 2 > cap:
            cap *= 2
            keys = _grow_i64(keys, cap)
            trans = _grow_i32(trans, cap * n_pair)
            nacc = np.zeros(cap, np.uint8)
            nacc[: acc.shape[0]] = acc
            acc = nacc
        base = np.int64(q) * n_pair
        for x in range(k):  # u never pads: it is the longer side
            ta = np.int64(w_trans[a, x])  # 0 = dies now (allowed, terminal)
            tb = np.int64(1) if b == 0 else np.int64(w_trans[b, x])
            if b != 0 and tb == 0:
                continue  # a proper suffix of u left W: not a minimal lhs
            for y in range(kp):
                td = np.int64(dm_trans[d, x * kp + y])
                if td == 0:
                    continue
                if y < k:
                    if c == 0:
                        continue
                    tc = np.int64(w_trans[c, y])
                    if tc == 0:
                        continue
                else:
                    tc = np.int64(0)
                if flag == 0:
                    if y == k:
                        nflag = 3
                    elif x == y:
                        nflag = 0
                    elif y < x:
                        nflag = 1
                    else:
                        nflag = 2
                elif flag == 3:
                    if y != k:
                        continue
                    nflag = 3
                else:
                    nflag = 3 if y == k else flag
                nkey = (((ta * sw + tb) * nd1 + td) * sw + tc) * 4 + nflag
                slot = _ht_probe(hkeys, nkey)
                if hkeys[slot] == -1:
                    if n >= max_states:
                        return 1, n, keys[:n].copy(), trans, acc
                    hkeys[slot] = nkey
                    hvals[slot] = n + 1
                    if n >= cap:
                        cap *= 2
                        keys = _grow_i64(keys, cap)
                        trans = _grow_i32(trans, cap * n_pair)
                        nacc = np.zeros(cap, np.uint8)
                        nacc[: acc.shape[0]] = acc
                        acc = nacc
                    keys[n] = nkey
                    if ta == 0 and td == eps_state and (nflag == 1 or nflag == 3):
                        acc[n] = 1
                    n += 1
                    if 4 * n > 3 * hkeys.shape[0]:
                        hkeys, hvals = _ht_grow(hkeys, hvals)
                trans[base + x * kp + y] = hvals[slot]
    return 0, n, keys[:n].copy(), trans[: (n + 1) * n_pair].copy(), acc[: n + 1].copy()


# ---------------------------------------------------------------------------
# composition of padded-pair automata
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def compose_product(f_trans, f_acc, g_trans, g_acc, k, max_states):
    """Determinized composite {(u,w) : exists v, (u,v) in f, (v,w) in g}.

    NFA elements are packed (sf*(ng+1) + sg)*2 + vdone where vdone records
    that the guessed middle word has ended.  The middle word may run one
    letter past both outer words; that final step is folded into the
    acceptance test instead of a transition.

    Returns (status, n_dfa, trans_flat, acc).
    """
    ng = g_trans.shape[0] - 1
    kp = k + 1
    n_pair = kp * kp
    sg = np.int64(ng + 1)

    pool = np.zeros(256, np.int64)
    offs = np.zeros(64, np.int64)
    hkeys = np.full(256, -1, np.int64)
    hvals = np.zeros(256, np.int32)
    n_seq = 0

    buf = np.zeros(1024, np.int64)
    buf[0] = (np.int64(1) * sg + 1) * 2
    _, pool, offs, hkeys, hvals, n_seq = _registry_intern(
        pool, offs, n_seq, hkeys, hvals, buf, 1)

    cap_states = 64
    trans = np.zeros(cap_states * n_pair, np.int32)
    acc = np.zeros(cap_states, np.uint8)

    q = 0
    while q < n_seq:
        if n_seq > max_states:
            return 1, n_seq, trans, acc
        if n_seq + 2 > cap_states:
            cap_states *= 2
            trans = _grow_i32(trans, cap_states * n_pair)
            nacc = np.zeros(cap_states, np.uint8)
            nacc[: acc.shape[0]] = acc
            acc = nacc
        lo = offs[q]
        hi = offs[q + 1]
        a_acc = np.uint8(0)
        for i in range(lo, hi):
            e = pool[i]
            vdone = e % 2
            rest = e // 2
            sgi = rest % sg
            sfi = rest // sg
            if f_acc[sfi] != 0 and g_acc[sgi] != 0:
                a_acc = np.uint8(1)
                break
            if vdone == 0:
                hit = False
                for x in range(k):
                    tf = f_trans[sfi, k * kp + x]
                    if tf == 0 or f_acc[tf] == 0:
                        continue
                    tg = g_trans[sgi, x * kp + k]
                    if tg != 0 and g_acc[tg] != 0:
                        hit = True
                        break
                if hit:
                    a_acc = np.uint8(1)
                    break
        acc[q + 1] = a_acc
        for a in range(kp):
            for b in range(kp):
                if a == k and b == k:
                    continue
                sym = a * kp + b
                m = 0
                for i in range(lo, hi):
                    e = pool[i]
                    vdone = e % 2
                    rest = e // 2
                    sgi = rest % sg
                    sfi = rest // sg
                    if vdone == 0:
                        for x in range(k):
                            tf = np.int64(f_trans[sfi, a * kp + x])
                            if tf == 0:
                                continue
                            tg = np.int64(g_trans[sgi, x * kp + b])
                            if tg == 0:
                                continue
                            if m >= buf.shape[0]:
                                buf = _grow_i64(buf, m + 1)
                            buf[m] = (tf * sg + tg) * 2
                            m += 1
                    # middle word ends now or earlier: x = pad
                    if a == k:
                        tf = sfi if f_acc[sfi] != 0 else np.int64(0)
                    else:
                        tf = np.int64(f_trans[sfi, a * kp + k])
                    if tf == 0:
                        continue
                    if b == k:
                        tg = sgi if g_acc[sgi] != 0 else np.int64(0)
                    else:
                        tg = np.int64(g_trans[sgi, k * kp + b])
                    if tg == 0:
                        continue
                    if m >= buf.shape[0]:
                        buf = _grow_i64(buf, m + 1)
                    buf[m] = (tf * sg + tg) * 2 + 1
                    m += 1
                if m == 0:
                    continue
                m = _sort_dedup(buf, m)
                tid, pool, offs, hkeys, hvals, n_seq = _registry_intern(
                    pool, offs, n_seq, hkeys, hvals, buf, m)
                trans[(q + 1) * n_pair + sym] = tid + 1
        q += 1

    return 0, n_seq, trans[: (n_seq + 1) * n_pair].copy(), acc[: n_seq + 1].copy()


# ---------------------------------------------------------------------------
# pairwise DFA comparison / intersection
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def dfa_compare(t1, a1, t2, a2, subset_only):
    """BFS product over two DFAs (dead state 0 joins the walk on each side).

    With ``subset_only`` the offending pair is one accepting in t1 but not
    in t2 (witness that L1 is not a subset of L2); otherwise any acceptance
    mismatch counts (language equality test).  BFS in symbol order makes
    the returned witness the shortlex-least one.

    Returns (found, witness_symbols).
    """
    n_sym = t1.shape[1]
    n2 = np.int64(t2.shape[0] - 1)
    side = n2 + 1

    hkeys = np.full(1 << 12, -1, np.int64)
    hvals = np.zeros(1 << 12, np.int32)
    cap = 1 << 10
    keys = np.zeros(cap, np.int64)
    par = np.zeros(cap, np.int32)
    psym = np.zeros(cap, np.int32)

    init = np.int64(1) * side + 1
    slot = _ht_probe(hkeys, init)
    hkeys[slot] = init
    hvals[slot] = 1
    keys[0] = init
    par[0] = 0
    n = 1

    q = 0
    while q < n:
        key = keys[q]
        s2 = key % side
        s1 = key // side
        if subset_only:
            bad = a1[s1] != 0 and a2[s2] == 0
        else:
            bad = (a1[s1] != 0) != (a2[s2] != 0)
        if bad:
            ln = 0
            i = q
            while i > 0:
                ln += 1
                i = par[i] - 1
            wit = np.zeros(ln, np.int32)
            i = q
            j = ln - 1
            while i > 0:
                wit[j] = psym[i]
                j -= 1
                i = par[i] - 1
            return True, wit
        q += 1
        for sym in range(n_sym):
            u1 = np.int64(t1[s1, sym])
            u2 = np.int64(t2[s2, sym])
            if u1 == 0 and u2 == 0:
                continue
            nkey = u1 * side + u2
            slot = _ht_probe(hkeys, nkey)
            if hkeys[slot] == -1:
                hkeys[slot] = nkey
                hvals[slot] = n + 1
                if n >= cap:
                    cap *= 2
                    keys = _grow_i64(keys, cap)
                    par = _grow_i32(par, cap)
                    psym = _grow_i32(psym, cap)
                keys[n] = nkey
                par[n] = q  # parent's 1-based id (q was just advanced)
                psym[n] = sym
                n += 1
                if 4 * n > 3 * hkeys.shape[0]:
                    hkeys, hvals = _ht_grow(hkeys, hvals)
    return False, np.zeros(0, np.int32)


@maybe_njit(cache=True)
def dfa_intersect(t1, a1, t2, a2, max_states):
    """Product DFA over the same symbol set; only pairs alive on both sides."""
    n_sym = t1.shape[1]
    n2 = np.int64(t2.shape[0] - 1)
    side = n2 + 1

    hkeys = np.full(1 << 12, -1, np.int64)
    hvals = np.zeros(1 << 12, np.int32)
    cap = 1 << 10
    keys = np.zeros(cap, np.int64)
    trans = np.zeros(cap * n_sym, np.int32)
    acc = np.zeros(cap, np.uint8)

    init = np.int64(1) * side + 1
    slot = _ht_probe(hkeys, init)
    hkeys[slot] = init
    hvals[slot] = 1
    keys[0] = init
    n = 1

    q = 0
    while q < n:
        key = keys[q]
        s2 = key % side
        s1 = key // side
        q += 1
        if n + 2 > cap:
            cap *= 2
            keys = _grow_i64(keys, cap)
            trans = _grow_i32(trans, cap * n_sym)
            nacc = np.zeros(cap, np.uint8)
            nacc[: acc.shape[0]] = acc
            acc = nacc
        if a1[s1] != 0 and a2[s2] != 0:
            acc[q] = 1
        base = np.int64(q) * n_sym
        for sym in range(n_sym):
            u1 = np.int64(t1[s1, sym])
            if u1 == 0:
                continue
            u2 = np.int64(t2[s2, sym])
            if u2 == 0:
                continue
            nkey = u1 * side + u2
            slot = _ht_probe(hkeys, nkey)
            if hkeys[slot] == -1:
                if n >= max_states:
                    return 1, n, trans, acc
                hkeys[slot] = nkey
                hvals[slot] = n + 1
                if n >= cap:
                    cap *= 2
                    keys = _grow_i64(keys, cap)
                    trans = _grow_i32(trans, cap * n_sym)
                    nacc = np.zeros(cap, np.uint8)
                    nacc[: acc.shape[0]] = acc
                    acc = nacc
                keys[n] = nkey
                n += 1
                if 4 * n > 3 * hkeys.shape[0]:
                    hkeys, hvals = _ht_grow(hkeys, hvals)
            trans[base + sym] = hvals[slot]
    return 0, n, trans[: (n + 1) * n_sym].copy(), acc[: n + 1].copy()


# ---------------------------------------------------------------------------
# reachability and canonical renumbering
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def bfs_order(trans):
    """Breadth-first renumbering from state 1 in symbol order.

    Returns (order, n_reach) with order[s] the new 1-based id (0 when
    unreachable).
    """
    n = trans.shape[0] - 1
    n_sym = trans.shape[1]
    order = np.zeros(n + 1, np.int32)
    queue = np.zeros(n + 1, np.int32)
    order[1] = 1
    queue[0] = 1
    cnt = 1
    q = 0
    while q < cnt:
        s = queue[q]
        q += 1
        for a in range(n_sym):
            t = trans[s, a]
            if t != 0 and order[t] == 0:
                cnt += 1
                order[t] = cnt
                queue[cnt - 1] = t
    return order, cnt


@maybe_njit(cache=True)
def coaccessible(trans, acc):
    """Mask of states from which an accepting state is reachable."""
    n = trans.shape[0] - 1
    n_sym = trans.shape[1]
    cnt = np.zeros(n + 2, np.int64)
    for s in range(1, n + 1):
        for a in range(n_sym):
            t = trans[s, a]
            if t != 0:
                cnt[t + 1] += 1
    for i in range(1, n + 2):
        cnt[i] += cnt[i - 1]
    src = np.zeros(cnt[n + 1], np.int32)
    fill = cnt.copy()
    for s in range(1, n + 1):
        for a in range(n_sym):
            t = trans[s, a]
            if t != 0:
                src[fill[t]] = s
                fill[t] += 1
    mask = np.zeros(n + 1, np.uint8)
    queue = np.zeros(n + 1, np.int32)
    m = 0
    for s in range(1, n + 1):
        if acc[s] != 0:
            mask[s] = 1
            queue[m] = s
            m += 1
    q = 0
    while q < m:
        t = queue[q]
        q += 1
        for i in range(cnt[t], cnt[t + 1]):
            s = src[i]
            if mask[s] == 0:
                mask[s] = 1
                queue[m] = s
                m += 1
    return mask


@maybe_njit(cache=True)
def has_live_cycle(trans, live):
    """True iff the subgraph of live states contains a cycle."""
    n = trans.shape[0] - 1
    n_sym = trans.shape[1]
    color = np.zeros(n + 1, np.uint8)  # 0 new, 1 on stack, 2 done
    stack = np.zeros(n + 1, np.int32)
    it = np.zeros(n + 1, np.int32)
    for s0 in range(1, n + 1):
        if live[s0] == 0 or color[s0] != 0:
            continue
        depth = 0
        stack[0] = s0
        it[0] = 0
        color[s0] = 1
        while depth >= 0:
            s = stack[depth]
            a = it[depth]
            advanced = False
            while a < n_sym:
                t = trans[s, a]
                a += 1
                if t == 0 or live[t] == 0:
                    continue
                if color[t] == 1:
                    return True
                if color[t] == 0:
                    it[depth] = a
                    depth += 1
                    stack[depth] = t
                    it[depth] = 0
                    color[t] = 1
                    advanced = True
                    break
            if not advanced:
                color[s] = 2
                depth -= 1
    return False


# ---------------------------------------------------------------------------
# minimization: Hopcroft partition refinement and Moore passes
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def hopcroft_refine(trans, init_cls, n_cls0):
    """Hopcroft partition refinement over a completed table (row 0 = dead).

    init_cls assigns classes 0..n_cls0-1 with state 0 in class 0.  Returned
    class ids are arbitrary; canonicalize with bfs_order afterwards.
    """
    n1 = trans.shape[0]
    n_sym = trans.shape[1]

    # inverse transitions, CSR keyed by target*n_sym + symbol
    cnt = np.zeros(np.int64(n1) * n_sym + 1, np.int64)
    for s in range(n1):
        for a in range(n_sym):
            cnt[np.int64(trans[s, a]) * n_sym + a + 1] += 1
    for i in range(1, cnt.shape[0]):
        cnt[i] += cnt[i - 1]
    inv_src = np.zeros(cnt[cnt.shape[0] - 1], np.int32)
    fill = cnt.copy()
    for s in range(n1):
        for a in range(n_sym):
            row = np.int64(trans[s, a]) * n_sym + a
            inv_src[fill[row]] = s
            fill[row] += 1

    cls = init_cls.astype(np.int32).copy()
    elems = np.zeros(n1, np.int32)
    pos = np.zeros(n1, np.int32)
    cls_start = np.zeros(n1 + 1, np.int32)
    cls_size = np.zeros(n1 + 1, np.int32)
    for s in range(n1):
        cls_size[cls[s]] += 1
    for c in range(1, n_cls0):
        cls_start[c] = cls_start[c - 1] + cls_size[c - 1]
    fill2 = cls_start.copy()
    for s in range(n1):
        c = cls[s]
        elems[fill2[c]] = s
        pos[s] = fill2[c]
        fill2[c] += 1
    ncls = n_cls0

    marked = np.zeros(n1 + 1, np.int32)
    touched = np.zeros(n1 + 1, np.int32)
    wl = np.zeros(4 * (n1 + 2), np.int32)
    in_wl = np.zeros(n1 + 1, np.uint8)
    wl_n = 0
    for c in range(n_cls0):
        wl[wl_n] = c
        wl_n += 1
        in_wl[c] = 1

    pred = np.zeros(n1, np.int32)
    snap = np.zeros(n1, np.int32)

    while wl_n > 0:
        wl_n -= 1
        A = wl[wl_n]
        in_wl[A] = 0
        # snapshot members: the splitter may itself split mid-processing
        a_size = cls_size[A]
        a_start = cls_start[A]
        for i in range(a_size):
            snap[i] = elems[a_start + i]
        for a in range(n_sym):
            np_cnt = 0
            for i in range(a_size):
                row = np.int64(snap[i]) * n_sym + a
                for j in range(cnt[row], cnt[row + 1]):
                    pred[np_cnt] = inv_src[j]
                    np_cnt += 1
            if np_cnt == 0:
                continue
            nt = 0
            for i in range(np_cnt):
                s = pred[i]
                c = cls[s]
                if marked[c] == 0:
                    touched[nt] = c
                    nt += 1
                p = pos[s]
                mstop = cls_start[c] + marked[c]
                if p != mstop:
                    other = elems[mstop]
                    elems[mstop] = s
                    elems[p] = other
                    pos[s] = mstop
                    pos[other] = p
                marked[c] += 1
            for i in range(nt):
                c = touched[i]
                mk = marked[c]
                marked[c] = 0
                sz = cls_size[c]
                if mk == sz:
                    continue
                newc = ncls
                ncls += 1
                cls_start[newc] = cls_start[c]
                cls_size[newc] = mk
                cls_start[c] = cls_start[c] + mk
                cls_size[c] = sz - mk
                for p in range(cls_start[newc], cls_start[newc] + mk):
                    cls[elems[p]] = newc
                if in_wl[c] != 0:
                    wl[wl_n] = newc
                    wl_n += 1
                    in_wl[newc] = 1
                else:
                    small = newc if mk <= sz - mk else c
                    wl[wl_n] = small
                    wl_n += 1
                    in_wl[small] = 1
    return cls


@maybe_njit(cache=True)
def moore_refine(trans, init_cls, n_cls0):
    """Iterated signature refinement; the table is swept sequentially per
    pass, which also suits memory-mapped tables.

    Signatures are (class, classes of all successors); new ids are assigned
    in first-occurrence order so state 0 keeps class 0.
    """
    n1 = trans.shape[0]
    n_sym = trans.shape[1]
    cls = init_cls.astype(np.int32).copy()
    newcls = np.zeros(n1, np.int32)
    ncls = n_cls0
    cap = 1
    while cap < 4 * n1:
        cap *= 2
    mask = cap - 1
    while True:
        hkeys = np.full(cap, -1, np.int64)
        hrep = np.zeros(cap, np.int32)
        hid = np.zeros(cap, np.int32)
        nxt = 0
        for s in range(n1):
            h = _mix(np.int64(0x9E3779B9), np.int64(cls[s]))
            for a in range(n_sym):
                h = _mix(h, np.int64(cls[trans[s, a]]))
            i = h & mask
            while True:
                kk = hkeys[i]
                if kk == -1:
                    hkeys[i] = h
                    hrep[i] = s
                    hid[i] = nxt
                    newcls[s] = nxt
                    nxt += 1
                    break
                if kk == h:
                    r = hrep[i]
                    same = cls[r] == cls[s]
                    if same:
                        for a in range(n_sym):
                            if cls[trans[r, a]] != cls[trans[s, a]]:
                                same = False
                                break
                    if same:
                        newcls[s] = hid[i]
                        break
                i = (i + 1) & mask
        if nxt == ncls:
            return cls
        ncls = nxt
        tmp = cls
        cls = newcls
        newcls = tmp


def moore_refine_np(trans, init_cls, n_cls0):
    """Vectorized Moore refinement (pure-numpy fallback path)."""
    trans = np.asarray(trans)
    cls = np.asarray(init_cls, dtype=np.int64)
    ncls = n_cls0
    while True:
        sig = np.empty((trans.shape[0], trans.shape[1] + 1), dtype=np.int64)
        sig[:, 0] = cls
        sig[:, 1:] = cls[trans]
        uniq, first, inverse = np.unique(
            sig, axis=0, return_index=True, return_inverse=True)
        if uniq.shape[0] == ncls:
            return cls.astype(np.int32)
        remap = np.empty(uniq.shape[0], dtype=np.int64)
        remap[np.argsort(first, kind="stable")] = np.arange(uniq.shape[0])
        cls = remap[np.asarray(inverse).ravel()]
        ncls = uniq.shape[0]


# ---------------------------------------------------------------------------
# rewriting: reversed-lhs trie walk with stacked pending input
# ---------------------------------------------------------------------------


@maybe_njit(cache=True)
def rewrite_word(tchild, trule, rrhs_off, rrhs_len, rrhs_pool, rlhs_len, word):
    """Leftmost reduction of `word` by the rule trie.

    ``tchild`` is the dense child table of the trie of *reversed* left-hand
    sides; ``trule[node]`` is the rule ending at that node or -1.  After
    each letter is shifted onto the output the trie is walked backwards
    from the output top; the first hit is the shortest matching lhs.  The
    match is popped and its rhs pushed back onto the pending input.
    Replacements never grow the word, so the buffers never exceed len+1.
    """
    n = word.shape[0]
    out = np.zeros(n + 2, np.int32)
    pend = np.zeros(n + 2, np.int32)
    for i in range(n):
        pend[i] = word[n - 1 - i]
    top = n
    p = 0
    while top > 0:
        top -= 1
        c = pend[top]
        out[p] = c
        p += 1
        node = np.int64(0)
        j = p - 1
        r = np.int64(-1)
        while j >= 0:
            node = tchild[node, out[j]]
            if node == 0:
                break
            if trule[node] >= 0:
                r = trule[node]
                break
            j -= 1
        if r >= 0:
            p -= rlhs_len[r]
            rl = rrhs_len[r]
            off = rrhs_off[r]
            for i in range(rl):
                pend[top + i] = rrhs_pool[off + rl - 1 - i]
            top += rl
    return out[:p].copy()


@maybe_njit(cache=True)
def trie_insert(tchild, trule, n_nodes, word_rev, rule_id):
    """Insert a reversed lhs; node capacity must be ensured by the caller.

    Returns (terminal_node, new n_nodes).
    """
    node = np.int64(0)
    for i in range(word_rev.shape[0]):
        c = word_rev[i]
        t = np.int64(tchild[node, c])
        if t == 0:
            t = n_nodes
            n_nodes += 1
            tchild[node, c] = t
        node = t
    trule[node] = rule_id
    return node, n_nodes


@maybe_njit(cache=True)
def diff_path(tchild, trule, rrhs_off, rrhs_len, rrhs_pool, rlhs_len, inv,
              u, v):
    """Iterative word differences of the padded equation (u, v).

    Step i reduces inv(u_i) . d . v_i with the trie (pad positions act as
    identity), matching the transition law of the difference machine.
    Returns (pool, offs) holding d_0 .. d_L, offs[j+1] = end of d_j.
    """
    lu = u.shape[0]
    lv = v.shape[0]
    L = lu if lu >= lv else lv
    pool = np.zeros(16 + 4 * (L + 2), np.int32)
    offs = np.zeros(L + 2, np.int64)
    dcur = np.zeros(0, np.int32)
    for i in range(L):
        dl = dcur.shape[0]
        buf = np.zeros(dl + 2, np.int32)
        m = 0
        if i < lu:
            buf[m] = inv[u[i]]
            m += 1
        for j in range(dl):
            buf[m] = dcur[j]
            m += 1
        if i < lv:
            buf[m] = v[i]
            m += 1
        dcur = rewrite_word(tchild, trule, rrhs_off, rrhs_len, rrhs_pool,
                            rlhs_len, buf[:m])
        end = offs[i + 1]
        need = end + dcur.shape[0]
        if need > pool.shape[0]:
            pool = _grow_i32(pool, need)
        for j in range(dcur.shape[0]):
            pool[end + j] = dcur[j]
        offs[i + 2] = need
    return pool[: offs[L + 1]].copy(), offs


@maybe_njit(cache=True)
def overlap_scan(rchild, rrule, rlist_head, fchild, flist_head,
                 list_rule, list_next,
                 lhs_off, lhs_len, lhs_pool, rhs_off, rhs_len, rhs_pool,
                 alive, considered, rid, max_overlap_len):
    """All critical pairs of rule `rid` against the considered rules.

    Walks the forward trie for partners whose lhs starts with a suffix of
    lhs1, and the reversed trie for partners whose lhs ends with a prefix
    of lhs1; each superposed word is reduced both ways and the unequal
    results are emitted as equations.  Partners whose lhs would be a
    factor of the other lhs are skipped (inter-reduction territory).

    Returns (skipped, pairs_pool, pairs_offs): equation i is
    pool[offs[2i]:offs[2i+1]] vs pool[offs[2i+1]:offs[2i+2]].
    """
    out_pool = np.zeros(256, np.int32)
    out_offs = np.zeros(64, np.int64)
    n_out = 0  # number of emitted words (2 per equation)
    skipped = False
    n1 = np.int64(lhs_len[rid])
    l1 = lhs_off[rid]
    buf = np.zeros(512, np.int32)
    for left_side in range(2):
        for o in range(1, n1):
            # walk the trie along the overlap word
            node = np.int64(0)
            if left_side == 0:
                for i in range(o):
                    node = fchild[node, lhs_pool[l1 + n1 - o + i]]
                    if node == 0:
                        break
            else:
                for i in range(o):
                    node = rchild[node, lhs_pool[l1 + o - 1 - i]]
                    if node == 0:
                        break
            if node == 0:
                continue
            ptr = rlist_head[node] if left_side == 1 else flist_head[node]
            while ptr >= 0:
                r2 = list_rule[ptr]
                ptr = list_next[ptr]
                if alive[r2] == 0:
                    continue
                if left_side == 0:
                    if considered[r2] == 0 and r2 != rid:
                        continue
                else:
                    if r2 == rid or considered[r2] == 0:
                        continue
                n2 = np.int64(lhs_len[r2])
                if n2 <= o:
                    continue
                if max_overlap_len > 0 and n1 + n2 - o > max_overlap_len:
                    skipped = True
                    continue
                l2 = lhs_off[r2]
                if left_side == 0:
                    ra, la, lb, rb = rid, l1, l2, r2
                    na, nb = n1, n2
                else:
                    ra, la, lb, rb = r2, l2, l1, rid
                    na, nb = n2, n1
                # word = lhsA + lhsB[o:]; reduce via A and via B
                m = 0
                rl = rhs_len[ra]
                ro = rhs_off[ra]
                need = rl + (nb - o)
                if need > buf.shape[0]:
                    buf = _grow_i32(buf, need)
                for i in range(rl):
                    buf[m] = rhs_pool[ro + i]
                    m += 1
                for i in range(o, nb):
                    buf[m] = lhs_pool[lb + i]
                    m += 1
                e1 = rewrite_word(rchild, rrule, rhs_off, rhs_len, rhs_pool,
                                  lhs_len, buf[:m])
                m = 0
                rl = rhs_len[rb]
                ro = rhs_off[rb]
                need = (na - o) + rl
                if need > buf.shape[0]:
                    buf = _grow_i32(buf, need)
                for i in range(na - o):
                    buf[m] = lhs_pool[la + i]
                    m += 1
                for i in range(rl):
                    buf[m] = rhs_pool[ro + i]
                    m += 1
                e2 = rewrite_word(rchild, rrule, rhs_off, rhs_len, rhs_pool,
                                  lhs_len, buf[:m])
                same = e1.shape[0] == e2.shape[0]
                if same:
                    for i in range(e1.shape[0]):
                        if e1[i] != e2[i]:
                            same = False
                            break
                if same:
                    continue
                end = out_offs[n_out]
                need = end + e1.shape[0] + e2.shape[0]
                if need > out_pool.shape[0]:
                    out_pool = _grow_i32(out_pool, need)
                if n_out + 3 > out_offs.shape[0]:
                    out_offs = _grow_i64(out_offs, n_out + 3)
                for i in range(e1.shape[0]):
                    out_pool[end + i] = e1[i]
                out_offs[n_out + 1] = end + e1.shape[0]
                end += e1.shape[0]
                for i in range(e2.shape[0]):
                    out_pool[end + i] = e2[i]
                out_offs[n_out + 2] = end + e2.shape[0]
                n_out += 2
    return skipped, out_pool[: out_offs[n_out]].copy(), out_offs[: n_out + 1].copy()


@maybe_njit(cache=True)
def dm_closure(tchild, trule, rrhs_off, rrhs_len, rrhs_pool, rlhs_len, inv,
               dpool, doffs, k):
    """Transition table of the word-difference machine.

    States 1..n correspond to the given (distinct) difference words.  For
    every state d and pair (x, y), the word inv(x) . d . y is reduced; a
    transition exists iff the reduct is again one of the difference words.
    """
    nd = doffs.shape[0] - 1
    kp = k + 1
    pool = np.zeros(max(np.int64(16), doffs[nd] + 1), np.int64)
    offs = np.zeros(nd + 1, np.int64)
    hkeys = np.full(1 << 10, -1, np.int64)
    hvals = np.zeros(1 << 10, np.int32)
    n_seq = 0
    buf = np.zeros(256, np.int64)
    for i in range(nd):
        lo = doffs[i]
        hi = doffs[i + 1]
        m = hi - lo
        if m > buf.shape[0]:
            buf = _grow_i64(buf, m)
        for j in range(m):
            buf[j] = dpool[lo + j]
        _, pool, offs, hkeys, hvals, n_seq = _registry_intern(
            pool, offs, n_seq, hkeys, hvals, buf[:m] if m > 0 else buf[:0], m)
    trans = np.zeros((nd + 1) * kp * kp, np.int32)
    wbuf = np.zeros(256, np.int32)
    for d in range(nd):
        lo = doffs[d]
        hi = doffs[d + 1]
        dl = hi - lo
        for x in range(kp):
            for y in range(kp):
                if x == k and y == k:
                    continue
                m = 0
                need = dl + 2
                if need > wbuf.shape[0]:
                    wbuf = _grow_i32(wbuf, need)
                if x < k:
                    wbuf[m] = inv[x]
                    m += 1
                for j in range(dl):
                    wbuf[m] = dpool[lo + j]
                    m += 1
                if y < k:
                    wbuf[m] = y
                    m += 1
                red = rewrite_word(tchild, trule, rrhs_off, rrhs_len,
                                   rrhs_pool, rlhs_len, wbuf[:m])
                rl = red.shape[0]
                if rl > buf.shape[0]:
                    buf = _grow_i64(buf, rl)
                for j in range(rl):
                    buf[j] = red[j]
                h = _seq_hash(buf, 0, rl)
                hmask = hkeys.shape[0] - 1
                i = h & hmask
                tgt = -1
                while True:
                    kk = hkeys[i]
                    if kk == -1:
                        break
                    if kk == h:
                        cand = hvals[i]
                        if _seq_equal(pool, offs[cand], offs[cand + 1],
                                      buf, rl):
                            tgt = cand
                            break
                    i = (i + 1) & hmask
                if tgt >= 0:
                    trans[(d + 1) * kp * kp + x * kp + y] = tgt + 1
    return trans
