"""Knuth-Bendix completion for shortlex string rewriting over groups.

The rule store keeps two tries over the left-hand sides: a reversed-lhs
trie driving the rewrite kernel (suffix matching) and a forward trie for
overlap enumeration.  Every trie node carries the list of rules passing
through it, so "rules whose lhs starts with s" and "rules whose lhs ends
with p" are both single walks.  Rules are never compacted; removal clears
the alive flag and the rule slot in the trie.

Word differences are collected incrementally from every rule created, by
the same iterative reduction the difference machine uses, and the final
returned set is re-extracted from the finished rules so stale differences
are remapped rather than duplicated.
"""

import heapq
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .words import invert_word, shortlex_compare, shortlex_key

_EMPTY = np.zeros(0, np.int32)


def _arr(w):
    return np.asarray(w, dtype=np.int32) if w else _EMPTY


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple
    rhs: tuple


@dataclass
class KbConfig:
    """Budgets and the stabilization heuristic for kb_complete.

    ``stabilization_window`` counts consecutive passes with a constant
    inverse-closed word-difference total before the heuristic halt; 0
    disables it so only confluence or budgets stop the run.
    ``max_word_len`` limits stored equation sides; longer equations are
    deferred and the limit grows when the queues drain.  ``max_overlap_len``
    (0 = unlimited) skips superposed words above the limit, which renders a
    "confluent" halt impossible but keeps huge runs affordable.
    """

    max_equations: int = 1_000_000
    max_word_len: int = 0  # 0 = derive from the presentation, growable
    stabilization_window: int = 3
    memory_budget: int = 2 << 30
    eqns_per_pass: int = 500
    max_overlap_len: int = 0  # 0 = unlimited
    max_rules: int = 500_000

    def __post_init__(self):
        if (self.max_equations <= 0 or self.stabilization_window < 0
                or self.memory_budget <= 0 or self.eqns_per_pass <= 0
                or self.max_rules <= 0 or self.max_word_len < 0
                or self.max_overlap_len < 0):
            raise ValueError("budgets must be positive")


class RuleSet:
    """Oriented rewrite rules with trie-indexed left-hand sides."""

    def __init__(self, alphabet):
        self.alphabet = alphabet
        k = len(alphabet)
        self._k = k
        # reversed-lhs trie (rewriting + suffix queries)
        self._rchild = np.zeros((64, k), np.int32)
        self._rrule = np.full(64, -1, np.int32)
        self._rn = 1
        self._rlist_head = np.full(64, -1, np.int32)
        # forward-lhs trie (prefix queries)
        self._fchild = np.zeros((64, k), np.int32)
        self._fn = 1
        self._flist_head = np.full(64, -1, np.int32)
        # per-node rule membership lists, pooled
        self._list_rule = np.zeros(64, np.int32)
        self._list_next = np.full(64, -1, np.int32)
        self._list_fill = 0
        # rule storage
        self._lhs = []
        self._rhs = []
        self._alive = np.zeros(64, np.uint8)
        self._rnode = []
        self._lhs_off = np.zeros(64, np.int64)
        self._lhs_len = np.zeros(64, np.int32)
        self._lhs_pool = np.zeros(256, np.int32)
        self._lhs_fill = 0
        self._rhs_off = np.zeros(64, np.int64)
        self._rhs_len = np.zeros(64, np.int32)
        self._rhs_pool = np.zeros(256, np.int32)
        self._rhs_fill = 0
        self.n_alive = 0
        self.stats = {"equations": 0, "rules_created": 0, "passes": []}

    # -- storage management -------------------------------------------------

    def _grow2d(self, arr, need):
        cap = arr.shape[0]
        while cap < need:
            cap *= 2
        g = np.zeros((cap, arr.shape[1]), np.int32)
        g[: arr.shape[0]] = arr
        return g

    def _grow_neg(self, arr, need):
        cap = arr.shape[0]
        while cap < need:
            cap *= 2
        g = np.full(cap, -1, np.int32)
        g[: arr.shape[0]] = arr
        return g

    def _ensure_nodes(self, extra):
        if self._rn + extra > self._rchild.shape[0]:
            need = self._rn + extra
            self._rchild = self._grow2d(self._rchild, need)
            self._rrule = self._grow_neg(self._rrule, need)
            self._rlist_head = self._grow_neg(self._rlist_head, need)
        if self._fn + extra > self._fchild.shape[0]:
            need = self._fn + extra
            self._fchild = self._grow2d(self._fchild, need)
            self._flist_head = self._grow_neg(self._flist_head, need)

    def _ensure_rules(self, n_letters):
        nr = len(self._lhs) + 1
        if nr > self._rhs_off.shape[0]:
            self._rhs_off = K._grow_i64(self._rhs_off, nr)
            self._rhs_len = K._grow_i32(self._rhs_len, nr)
            self._lhs_off = K._grow_i64(self._lhs_off, nr)
            self._lhs_len = K._grow_i32(self._lhs_len, nr)
            a = np.zeros(self._rhs_off.shape[0], np.uint8)
            a[: self._alive.shape[0]] = self._alive
            self._alive = a
        if self._lhs_fill + n_letters > self._lhs_pool.shape[0]:
            self._lhs_pool = K._grow_i32(self._lhs_pool,
                                         self._lhs_fill + n_letters)
        if self._rhs_fill + n_letters > self._rhs_pool.shape[0]:
            self._rhs_pool = K._grow_i32(self._rhs_pool,
                                         self._rhs_fill + n_letters)
        if self._list_fill + 2 * n_letters > self._list_rule.shape[0]:
            need = self._list_fill + 2 * n_letters
            self._list_rule = K._grow_i32(self._list_rule, need)
            self._list_next = self._grow_neg(self._list_next, need)

    def _push_list(self, heads, node, rid):
        i = self._list_fill
        self._list_fill += 1
        self._list_rule[i] = rid
        self._list_next[i] = heads[node]
        heads[node] = i

    # -- rule operations ----------------------------------------------------

    def rule_at(self, rid):
        return RewriteRule(self._lhs[rid], self._rhs[rid])

    def is_alive(self, rid):
        return bool(self._alive[rid])

    @property
    def rules(self):
        return [RewriteRule(self._lhs[i], self._rhs[i])
                for i in range(len(self._lhs)) if self._alive[i]]

    def rewrite(self, w):
        """Irreducible word equal to w in the group; leftmost strategy."""
        if not w:
            return ()
        out = K.rewrite_word(self._rchild, self._rrule, self._rhs_off,
                             self._rhs_len, self._rhs_pool, self._lhs_len,
                             _arr(w))
        return tuple(int(x) for x in np.asarray(out))

    def rewrite_arr(self, arr):
        return K.rewrite_word(self._rchild, self._rrule, self._rhs_off,
                              self._rhs_len, self._rhs_pool, self._lhs_len,
                              arr)

    def existing_rule(self, lhs):
        """Alive rule id with this exact lhs, or -1."""
        node = 0
        for c in reversed(lhs):
            node = int(self._rchild[node, c])
            if node == 0:
                return -1
        rid = int(self._rrule[node])
        if rid >= 0 and self._alive[rid]:
            return rid
        return -1

    def add_rule(self, lhs, rhs):
        """Insert an oriented rule (rhs shortlex-less than lhs)."""
        if shortlex_compare(rhs, lhs) != -1:
            raise ValueError("rule is not orientation-correct")
        rid = len(self._lhs)
        self._ensure_nodes(len(lhs) + 1)
        self._ensure_rules(len(lhs) + len(rhs) + 2)
        self._lhs.append(tuple(lhs))
        self._rhs.append(tuple(rhs))
        self._alive[rid] = 1
        self._lhs_off[rid] = self._lhs_fill
        self._lhs_len[rid] = len(lhs)
        for i, c in enumerate(lhs):
            self._lhs_pool[self._lhs_fill + i] = c
        self._lhs_fill += len(lhs)
        self._rhs_off[rid] = self._rhs_fill
        self._rhs_len[rid] = len(rhs)
        for i, c in enumerate(rhs):
            self._rhs_pool[self._rhs_fill + i] = c
        self._rhs_fill += len(rhs)
        node = 0
        for c in reversed(lhs):
            t = int(self._rchild[node, c])
            if t == 0:
                t = self._rn
                self._rn += 1
                self._rchild[node, c] = t
            node = t
            self._push_list(self._rlist_head, node, rid)
        self._rrule[node] = rid
        self._rnode.append(node)
        node = 0
        for c in lhs:
            t = int(self._fchild[node, c])
            if t == 0:
                t = self._fn
                self._fn += 1
                self._fchild[node, c] = t
            node = t
            self._push_list(self._flist_head, node, rid)
        self.n_alive += 1
        self.stats["rules_created"] += 1
        return rid

    def remove_rule(self, rid):
        if self._alive[rid]:
            self._alive[rid] = 0
            self._rrule[self._rnode[rid]] = -1
            self.n_alive -= 1

    def _set_rhs(self, rid, rhs):
        self._ensure_rules(len(rhs) + 1)
        self._rhs[rid] = tuple(rhs)
        self._rhs_off[rid] = self._rhs_fill
        self._rhs_len[rid] = len(rhs)
        for i, c in enumerate(rhs):
            self._rhs_pool[self._rhs_fill + i] = c
        self._rhs_fill += len(rhs)

    # -- queries ------------------------------------------------------------

    def rules_with_prefix(self, word):
        """Alive rule ids whose lhs starts with `word` (may equal it)."""
        node = 0
        for c in word:
            node = int(self._fchild[node, c])
            if node == 0:
                return
        i = int(self._flist_head[node])
        while i >= 0:
            rid = int(self._list_rule[i])
            if self._alive[rid]:
                yield rid
            i = int(self._list_next[i])

    def rules_with_suffix(self, word):
        """Alive rule ids whose lhs ends with `word` (may equal it)."""
        node = 0
        for c in reversed(word):
            node = int(self._rchild[node, c])
            if node == 0:
                return
        i = int(self._rlist_head[node])
        while i >= 0:
            rid = int(self._list_rule[i])
            if self._alive[rid]:
                yield rid
            i = int(self._list_next[i])

    def memory_estimate(self):
        return (self._rchild.nbytes + self._fchild.nbytes
                + self._lhs_pool.nbytes + self._rhs_pool.nbytes
                + 2 * self._list_rule.nbytes
                + 120 * len(self._lhs))

    def diff_path(self, u, v):
        """Iterative word differences of the equation (u, v); d_0 = empty."""
        pool, offs = K.diff_path(self._rchild, self._rrule, self._rhs_off,
                                 self._rhs_len, self._rhs_pool, self._lhs_len,
                                 self.alphabet.inv_array, _arr(u), _arr(v))
        pool = np.asarray(pool)
        offs = np.asarray(offs)
        out = []
        for i in range(offs.shape[0] - 1):
            out.append(tuple(int(x) for x in pool[offs[i]: offs[i + 1]]))
        return out


class WordDifferenceSet:
    """Normal-form words arising as prefix differences of equations, with
    the transition structure seen while extracting them."""

    def __init__(self, words=(), inverse_closed=False):
        self._words = {(): None}
        for w in words:
            self._words[tuple(w)] = None
        self.transitions = {}
        self.inverse_closed = inverse_closed

    def __contains__(self, w):
        return tuple(w) in self._words

    def __len__(self):
        return len(self._words)

    def __iter__(self):
        return iter(self._words)

    def add(self, w):
        self._words[tuple(w)] = None

    def words(self):
        return list(self._words)

    def sorted_words(self):
        return sorted(self._words, key=shortlex_key)

    def record(self, d, x, y, d2):
        self.transitions[(d, x, y)] = d2

    def copy(self):
        out = WordDifferenceSet(self._words, self.inverse_closed)
        out.transitions = dict(self.transitions)
        return out


def extract_word_differences(equations, reducer):
    """Union of the prefix word differences of the given equations.

    Each equation (u, v) must hold in the group; differences are produced
    iteratively (d_next = reduce(x^-1 . d . y)) so they match the
    transition law of the difference machine built from the same reducer.
    """
    k = len(reducer.alphabet)
    wd = WordDifferenceSet()
    for u, v in equations:
        ds = reducer.diff_path(u, v)
        L = max(len(u), len(v))
        for i in range(L):
            x = u[i] if i < len(u) else k
            y = v[i] if i < len(v) else k
            wd.add(ds[i + 1])
            wd.record(ds[i], x, y, ds[i + 1])
    return wd


def close_under_inversion(wd, reducer):
    """Add the normal form of d^-1 for every difference, with the reversed
    transitions; idempotent."""
    ab = reducer.alphabet
    out = wd.copy()
    for d in wd.words():
        out.add(reducer.rewrite(invert_word(ab, d)))
    k = len(ab)
    inv = list(ab.inv) + [k]  # padding inverts to padding
    nf = {d: reducer.rewrite(invert_word(ab, d)) for d in out.words()}
    for (d, x, y), d2 in list(out.transitions.items()):
        if d in nf and d2 in nf:
            out.record(nf[d], inv[y], inv[x], nf[d2])
    out.inverse_closed = True
    return out


def critical_pairs(rs):
    """Overlap-induced equations among the alive rules, both sides reduced;
    empty iff the system is confluent."""
    out = []
    seen = set()
    for r1 in range(len(rs._lhs)):
        if not rs._alive[r1]:
            continue
        lhs1, rhs1 = rs._lhs[r1], rs._rhs[r1]
        for o in range(1, len(lhs1)):
            beta = lhs1[len(lhs1) - o:]
            for r2 in rs.rules_with_prefix(beta):
                lhs2 = rs._lhs[r2]
                if len(lhs2) <= o:
                    continue  # factor case: inter-reduction territory
                e1 = rs.rewrite(rhs1 + lhs2[o:])
                e2 = rs.rewrite(lhs1[: len(lhs1) - o] + rs._rhs[r2])
                if e1 != e2:
                    pair = (e1, e2) if shortlex_compare(e1, e2) == 1 \
                        else (e2, e1)
                    if pair not in seen:
                        seen.add(pair)
                        out.append(pair)
    return out


def rewrite(rs, w):
    """Spec-level alias: deterministic leftmost reduction of w."""
    return rs.rewrite(w)


class _Kb:
    """Working state of one completion run."""

    def __init__(self, presentation, cfg):
        self.p = presentation
        self.cfg = cfg
        self.ab = presentation.alphabet
        self.rs = RuleSet(self.ab)
        self.pending = []  # heap of (size, seq, lhs, rhs)
        self.deferred = []
        self.consider = []  # heap of (lhs_len, seq, rid)
        self.considered = np.zeros(64, np.uint8)
        self.seen = set()
        self.seq = 0
        self.diffs = {(): None}
        self.diffs_inv = {(): None}
        self.eqns_seen = 0
        self.eqns_processed = 0
        self.overlaps_skipped = False
        self.dropped = 0
        self.max_word_len = cfg.max_word_len
        if self.max_word_len == 0:
            longest = max((len(l) + len(r)
                           for l, r in presentation.relations), default=2)
            self.max_word_len = 2 * longest + 2
        self.grow_log = []

    def push_equation(self, u, v):
        if u == v:
            return
        if self.eqns_seen >= self.cfg.max_equations:
            self.dropped += 1
            return
        pair = (u, v) if shortlex_compare(u, v) == 1 else (v, u)
        if pair in self.seen:
            return
        self.seen.add(pair)
        self.eqns_seen += 1
        self.seq += 1
        heapq.heappush(self.pending,
                       (len(pair[0]) + len(pair[1]), self.seq,
                        pair[0], pair[1]))

    def note_rule_diffs(self, lhs, rhs):
        for d in self.rs.diff_path(lhs, rhs):
            if d not in self.diffs:
                self.diffs[d] = None
            if d not in self.diffs_inv:
                self.diffs_inv[d] = None
                di = self.rs.rewrite(invert_word(self.ab, d))
                self.diffs_inv[di] = None

    def add_oriented(self, lhs, rhs):
        """Insert a reduced, oriented equation as a rule; inter-reduce."""
        dup = self.rs.existing_rule(lhs)
        if dup >= 0:
            old = self.rs._rhs[dup]
            if old == rhs:
                return
            if shortlex_compare(rhs, old) == -1:
                self.rs._set_rhs(dup, rhs)
                self.push_equation(old, rhs)
            else:
                self.push_equation(rhs, old)
            return
        rid = self.rs.add_rule(lhs, rhs)
        if rid >= self.considered.shape[0]:
            g = np.zeros(2 * self.considered.shape[0], np.uint8)
            g[: self.considered.shape[0]] = self.considered
            self.considered = g
        self.note_rule_diffs(lhs, rhs)
        self.seq += 1
        heapq.heappush(self.consider, (len(lhs), self.seq, rid))
        # rules whose lhs ends with the new lhs are reducible: requeue them;
        # interior occurrences are caught by the tidy sweeps
        for other in list(self.rs.rules_with_suffix(lhs)):
            if other != rid and len(self.rs._lhs[other]) > len(lhs):
                self._requeue_rule(other)
        return rid

    def _requeue_rule(self, rid):
        lhs, rhs = self.rs._lhs[rid], self.rs._rhs[rid]
        self.rs.remove_rule(rid)
        self.push_equation(lhs, rhs)

    def process_equation(self, u, v):
        self.eqns_processed += 1
        self.rs.stats["equations"] = self.eqns_processed
        ru = self.rs.rewrite(u)
        rv = self.rs.rewrite(v)
        if ru == rv:
            return
        c = shortlex_compare(ru, rv)
        lhs, rhs = (ru, rv) if c == 1 else (rv, ru)
        if len(lhs) > self.max_word_len:
            self.deferred.append((lhs, rhs))
            return
        self.add_oriented(lhs, rhs)

    def consider_overlaps(self, rid):
        """Critical pairs of one rule against itself and the considered
        rules (kernel scan); resulting equations join the queue."""
        rs = self.rs
        skipped, pool, offs = K.overlap_scan(
            rs._rchild, rs._rrule, rs._rlist_head, rs._fchild, rs._flist_head,
            rs._list_rule, rs._list_next, rs._lhs_off, rs._lhs_len,
            rs._lhs_pool, rs._rhs_off, rs._rhs_len, rs._rhs_pool,
            rs._alive, self.considered, rid,
            self.cfg.max_overlap_len)
        if skipped:
            self.overlaps_skipped = True
        pool = np.asarray(pool)
        offs = np.asarray(offs)
        for i in range(0, offs.shape[0] - 1, 2):
            e1 = tuple(int(x) for x in pool[offs[i]: offs[i + 1]])
            e2 = tuple(int(x) for x in pool[offs[i + 1]: offs[i + 2]])
            self.push_equation(e1, e2)
        self.considered[rid] = 1

    def tidy(self):
        """Full inter-reduction sweep; stale rules become equations."""
        rs = self.rs
        for rid in range(len(rs._lhs)):
            if not rs._alive[rid]:
                continue
            node = rs._rnode[rid]
            rs._rrule[node] = -1  # mask self while reducing its own lhs
            lw = rs.rewrite(rs._lhs[rid])
            if lw != rs._lhs[rid]:
                rs._alive[rid] = 0
                rs.n_alive -= 1
                self.push_equation(rs._lhs[rid], rs._rhs[rid])
                continue
            rs._rrule[node] = rid
            rw = rs.rewrite(rs._rhs[rid])
            if rw != rs._rhs[rid]:
                rs._set_rhs(rid, rw)

    def drained(self):
        return not self.pending and not self._has_consider()

    def _has_consider(self):
        while self.consider:
            _, _, rid = self.consider[0]
            if self.rs._alive[rid] and not self.considered[rid]:
                return True
            heapq.heappop(self.consider)
        return False

    def step(self):
        """One unit of work; False when nothing is left to do."""
        if self.pending:
            _, _, u, v = heapq.heappop(self.pending)
            self.process_equation(u, v)
            return True
        if self._has_consider():
            _, _, rid = heapq.heappop(self.consider)
            self.consider_overlaps(rid)
            return True
        return False

    def flush_short(self, flush_len):
        """Finish all short work after a stabilization halt, so short-word
        reduction (the domain of difference arithmetic) is reliable."""
        guard = 0
        while guard < self.cfg.max_equations:
            guard += 1
            if self.pending and self.pending[0][0] <= flush_len:
                _, _, u, v = heapq.heappop(self.pending)
                self.process_equation(u, v)
                continue
            if self._has_consider() and self.consider[0][0] * 2 <= flush_len:
                _, _, rid = heapq.heappop(self.consider)
                self.consider_overlaps(rid)
                continue
            if not self.pending or self.pending[0][0] > flush_len:
                return


def kb_complete(presentation, cfg=None, log=None):
    """Run Knuth-Bendix on the presentation until confluence, word-difference
    stabilization, or budget exhaustion.

    Returns (rules, word_differences, halt_reason) with halt_reason one of
    "confluent", "stabilized", "budget".  The word-difference set is the
    final re-extraction over the finished rules (raw, not inverse-closed);
    per-pass counts live in rules.stats["passes"].
    """
    cfg = cfg or KbConfig()
    st = _Kb(presentation, cfg)
    ab = presentation.alphabet

    # trivial inverse rules x . x^-1 -> empty, always present
    for x in range(len(ab)):
        lhs = (x, ab.inv[x])
        if st.rs.existing_rule(lhs) < 0:
            st.add_oriented(lhs, ())
    for lhs, rhs in presentation.relations:
        st.push_equation(tuple(lhs), tuple(rhs))

    halt = None
    pass_k = 0
    history = []
    while halt is None:
        pass_k += 1
        units = 0
        while units < cfg.eqns_per_pass:
            if st.rs.n_alive > cfg.max_rules \
                    or st.rs.memory_estimate() > cfg.memory_budget:
                halt = "budget"
                break
            if not st.step():
                if st.deferred and st.eqns_seen < cfg.max_equations:
                    st.max_word_len += max(4, st.max_word_len // 4)
                    st.grow_log.append((pass_k, st.max_word_len))
                    for lhs, rhs in st.deferred:
                        st.push_equation(lhs, rhs)
                    st.deferred.clear()
                    continue
                st.tidy()
                if st.drained():
                    if st.overlaps_skipped or st.dropped or st.deferred:
                        halt = "budget"
                    else:
                        halt = "confluent"
                    break
                continue
            units += 1
        if st.eqns_seen >= cfg.max_equations and st.drained() and halt is None:
            halt = "budget"
        entry = {"pass": pass_k, "rules": st.rs.n_alive,
                 "eqns": st.eqns_processed, "wdiffs": len(st.diffs),
                 "wdiffs_inv": len(st.diffs_inv)}
        st.rs.stats["passes"].append(entry)
        if log:
            log(entry)
        if halt is None and cfg.stabilization_window > 0:
            history.append(len(st.diffs_inv))
            w = cfg.stabilization_window
            if len(history) > w and len(set(history[-(w + 1):])) == 1:
                maxdiff = max((len(d) for d in st.diffs_inv), default=0)
                st.flush_short(min(st.max_word_len, 2 * maxdiff + 2))
                st.tidy()
                halt = "stabilized"

    st.tidy()
    st.rs.stats["grow_log"] = st.grow_log
    st.rs.stats["halt"] = halt
    # final extraction: diffs of the finished rules, freshly normalized
    eqs = [(r.lhs, r.rhs) for r in st.rs.rules]
    wd = extract_word_differences(eqs, st.rs)
    st.rs.stats["final_wdiffs"] = len(wd)
    return st.rs, wd, halt
