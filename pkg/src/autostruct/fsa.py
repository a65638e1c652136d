"""Finite-state automata over one-variable and padded two-variable alphabets.

Representation: partial deterministic automata with a dense transition
table ``int32[n_states + 1, n_syms]``.  States are 1-based, state 1 is
initial, and 0 means "no transition" (also the serialized convention).
There is no dead state; constructors trim unreachable and dead-end states.
All states of a table row 0 are zero.

Pair automata read padded pairs of words: the symbol (x, y) has id
``x*(k+1) + y`` with the padding mark as letter id k.  (pad, pad) is not a
symbol.  Once a side is padded it stays padded in any well-formed input.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from ._accel import jit_enabled
from .words import Alphabet, shortlex_key

DEFAULT_MAX_STATES = 1 << 26
HOPCROFT_CELL_LIMIT = 50_000_000  # table cells; beyond this use Moore passes
EXTERNAL_TABLE_BYTES = 1 << 30

PAD_NAME = "_"

SINGLE = "single"
PAIR = "pair"


class BudgetExceeded(RuntimeError):
    """A construction exceeded its state budget (resource limit, not bad
    input)."""


def _as_bool(acc):
    a = np.asarray(acc)
    if a.dtype != np.bool_:
        a = a.astype(np.uint8).astype(np.bool_)
    return a


class Fsa:
    """Immutable partial DFA.  Use the module functions for algebra."""

    def __init__(self, alphabet, kind, trans, accepting, labels=None,
                 name="fsa"):
        self.alphabet = alphabet
        self.kind = kind
        self.trans = np.ascontiguousarray(trans, dtype=np.int32)
        self.accepting = _as_bool(accepting)
        self.labels = dict(labels) if labels else None
        self.name = name
        n = self.trans.shape[0] - 1
        if n < 1:
            raise ValueError("an automaton needs at least the initial state")
        if self.accepting.shape[0] != n + 1:
            raise ValueError("accepting array size mismatch")
        if self.accepting[0]:
            raise ValueError("state 0 is reserved and cannot accept")
        if self.trans.shape[1] != self.n_syms:
            raise ValueError("transition table width does not match alphabet")

    @property
    def n_states(self):
        return self.trans.shape[0] - 1

    @property
    def k(self):
        return len(self.alphabet)

    @property
    def n_syms(self):
        k = len(self.alphabet)
        return k if self.kind == SINGLE else (k + 1) * (k + 1)

    def pair_sym(self, x, y):
        k = len(self.alphabet)
        return x * (k + 1) + y

    def sym_name(self, sym):
        names = self.alphabet.names
        if self.kind == SINGLE:
            return names[sym]
        k = len(self.alphabet)
        x, y = divmod(sym, k + 1)
        nx = PAD_NAME if x == k else names[x]
        ny = PAD_NAME if y == k else names[y]
        return f"{nx},{ny}"

    def sym_from_name(self, text):
        if self.kind == SINGLE:
            return self.alphabet.id_of(text)
        k = len(self.alphabet)
        xs, ys = text.split(",")
        x = k if xs == PAD_NAME else self.alphabet.id_of(xs)
        y = k if ys == PAD_NAME else self.alphabet.id_of(ys)
        return x * (k + 1) + y

    def step(self, state, sym):
        return int(self.trans[state, sym])

    def membership(self, word):
        s = 1
        for sym in word:
            s = self.trans[s, sym]
            if s == 0:
                return False
        return bool(self.accepting[s])

    def trace(self, word):
        """States visited from state 1; (states, None) on success or
        (states, position) where the first missing transition was hit."""
        s = 1
        states = [1]
        for i, sym in enumerate(word):
            s = int(self.trans[s, sym])
            if s == 0:
                return states, i
            states.append(s)
        return states, None

    def pair_word(self, u, v):
        """Padded pair-symbol sequence for the word pair (u, v)."""
        k = len(self.alphabet)
        L = max(len(u), len(v))
        out = []
        for i in range(L):
            x = u[i] if i < len(u) else k
            y = v[i] if i < len(v) else k
            out.append(x * (k + 1) + y)
        return tuple(out)

    def __repr__(self):
        return (f"Fsa({self.name}: {self.kind}, {self.n_states} states, "
                f"{int(np.count_nonzero(self.trans))} transitions)")


@dataclass
class Nfa:
    """Nondeterministic automaton; intermediate of subset construction.

    transitions maps (state, sym) -> set of states; several initial states
    are allowed, epsilon moves are not.
    """

    alphabet: Alphabet
    kind: str
    n_states: int
    initials: frozenset
    transitions: dict
    accepting: frozenset
    name: str = "nfa"

    @property
    def n_syms(self):
        k = len(self.alphabet)
        return k if self.kind == SINGLE else (k + 1) * (k + 1)

    def membership(self, word):
        cur = set(self.initials)
        for sym in word:
            nxt = set()
            for s in cur:
                nxt.update(self.transitions.get((s, sym), ()))
            cur = nxt
            if not cur:
                return False
        return bool(cur & self.accepting)


def _empty_like(alphabet, kind, name):
    n_syms = len(alphabet) if kind == SINGLE else (len(alphabet) + 1) ** 2
    return Fsa(alphabet, kind, np.zeros((2, n_syms), np.int32),
               np.zeros(2, np.bool_), name=name)


def _build(alphabet, kind, trans, acc, labels=None, name="fsa", trim=True):
    """Assemble an Fsa from raw arrays: co-accessibility trim plus
    breadth-first canonical renumbering."""
    trans = np.ascontiguousarray(trans, dtype=np.int32)
    acc8 = np.ascontiguousarray(_as_bool(acc).astype(np.uint8))
    if trim:
        live = K.coaccessible(trans, acc8)
        if not live[1]:
            return _empty_like(alphabet, kind, name)
        dead = np.flatnonzero(live == 0)
        if dead.size:
            trans = trans.copy()
            trans[:, :][np.isin(trans, dead)] = 0
    order, n_new = K.bfs_order(trans)
    order = np.asarray(order)
    n_old = trans.shape[0] - 1
    if n_new != n_old or not np.array_equal(order[1:], np.arange(1, n_old + 1)):
        new_trans = np.zeros((n_new + 1, trans.shape[1]), np.int32)
        new_acc = np.zeros(n_new + 1, np.bool_)
        old_of = np.zeros(n_new + 1, np.int64)
        sel = np.flatnonzero(order)
        old_of[order[sel]] = sel
        new_trans[1:] = order[trans[old_of[1:]]]
        new_acc[1:] = _as_bool(acc)[old_of[1:]]
        new_labels = None
        if labels:
            new_labels = {}
            for s, lab in labels.items():
                ns = int(order[s])
                if ns:
                    new_labels[ns] = lab
        return Fsa(alphabet, kind, new_trans, new_acc, new_labels, name)
    return Fsa(alphabet, kind, trans, acc, labels, name)


# ---------------------------------------------------------------------------
# subset construction
# ---------------------------------------------------------------------------


def _determinize_csr(alphabet, kind, n_nfa, indptr, targets, init, acc_mask,
                     bad_mask=None, prune_bad=False,
                     max_states=DEFAULT_MAX_STATES, name="dfa", trim=True):
    n_syms = len(alphabet) if kind == SINGLE else (len(alphabet) + 1) ** 2
    if bad_mask is None:
        bad_mask = np.zeros(n_nfa, np.uint8)
    status, n, trans_flat, acc = K.nfa_determinize(
        np.ascontiguousarray(indptr, np.int64),
        np.ascontiguousarray(targets, np.int32),
        n_nfa, n_syms,
        np.ascontiguousarray(init, np.int64),
        np.ascontiguousarray(acc_mask, np.uint8),
        np.ascontiguousarray(bad_mask, np.uint8),
        prune_bad, max_states)
    if status != 0:
        raise BudgetExceeded(
            f"subset construction exceeded {max_states} states")
    trans = np.asarray(trans_flat)[: (n + 1) * n_syms].reshape(n + 1, n_syms)
    return _build(alphabet, kind, trans, np.asarray(acc)[: n + 1], name=name,
                  trim=trim)


def determinize(nfa, max_states=DEFAULT_MAX_STATES):
    """Language-equivalent DFA by subset construction (reachable subsets
    only, then trimmed)."""
    if not nfa.initials:
        raise ValueError("NFA needs at least one initial state")
    n_syms = nfa.n_syms
    n = nfa.n_states
    counts = np.zeros(n * n_syms + 1, np.int64)
    for (s, a), ts in nfa.transitions.items():
        counts[(s - 1) * n_syms + a + 1] += len(ts)
    indptr = np.cumsum(counts)
    targets = np.zeros(indptr[-1], np.int32)
    fill = indptr.copy()
    for (s, a), ts in sorted(nfa.transitions.items()):
        row = (s - 1) * n_syms + a
        for t in sorted(ts):
            targets[fill[row]] = t - 1
            fill[row] += 1
    acc_mask = np.zeros(n, np.uint8)
    for s in nfa.accepting:
        acc_mask[s - 1] = 1
    init = np.asarray(sorted(s - 1 for s in nfa.initials), np.int64)
    return _determinize_csr(nfa.alphabet, nfa.kind, n, indptr, targets, init,
                            acc_mask, max_states=max_states, name=nfa.name)


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------


def _label_classes(f):
    """Initial partition ids by (accepting, label); class 0 holds state 0."""
    n = f.n_states
    cls = np.zeros(n + 1, np.int32)
    key_ids = {(False, None): 0}
    labels = f.labels or {}
    for s in range(1, n + 1):
        key = (bool(f.accepting[s]), labels.get(s))
        if key not in key_ids:
            key_ids[key] = len(key_ids)
        cls[s] = key_ids[key]
    return cls, len(key_ids)


def minimize(f, external=None, external_threshold=EXTERNAL_TABLE_BYTES):
    """Minimal partial DFA for the same language, canonically renumbered.

    Label-carrying states only merge when their labels agree, so accept
    labels survive minimization.  With ``external`` (or when the table is
    memory-mapped / beyond the size threshold) the refinement runs in
    sequential sweeps of the table instead of Hopcroft's inverted-index
    refinement, so the table can live on disk.
    """
    trans = f.trans
    n1 = trans.shape[0]
    init_cls, ncls0 = _label_classes(f)
    if external is None:
        external = isinstance(trans, np.memmap) or trans.nbytes > external_threshold
    use_hopcroft = (jit_enabled() and not external
                    and n1 * f.n_syms <= HOPCROFT_CELL_LIMIT)
    if use_hopcroft:
        cls = np.asarray(K.hopcroft_refine(trans, init_cls, ncls0))
    elif jit_enabled():
        cls = np.asarray(K.moore_refine(np.asarray(trans), init_cls, ncls0))
    else:
        cls = np.asarray(K.moore_refine_np(trans, init_cls, ncls0))

    dead_cls = cls[0]
    if cls[1] == dead_cls:
        return _empty_like(f.alphabet, f.kind, f.name)
    uniq, first = np.unique(cls, return_index=True)
    # class-level table; dead class -> 0, the initial state's class -> 1
    remap = np.zeros(uniq.max() + 1, np.int32)
    remap[cls[1]] = 1
    nid = 2
    for c in uniq:
        if c == dead_cls or c == cls[1]:
            continue
        remap[c] = nid
        nid += 1
    reps = np.zeros(nid, np.int64)
    for c, fi in zip(uniq, first):
        if c != dead_cls:
            reps[remap[c]] = fi
    ctrans = np.zeros((nid, f.n_syms), np.int32)
    ctrans[1:] = remap[cls[np.asarray(trans)[reps[1:]]]]
    cacc = np.zeros(nid, np.bool_)
    cacc[1:] = f.accepting[reps[1:]]
    clabels = None
    if f.labels:
        clabels = {}
        for s, lab in f.labels.items():
            c = remap[cls[s]]
            if c:
                clabels[int(c)] = lab
    # states equivalent to nothing-accepting were merged into the dead
    # class already, so no further trim is needed; renumber canonically.
    return _build(f.alphabet, f.kind, ctrans, cacc, clabels, f.name,
                  trim=False)


# ---------------------------------------------------------------------------
# boolean algebra
# ---------------------------------------------------------------------------


def well_padded_fsa(alphabet):
    """All well-padded pair words: padding persists once begun, on each side."""
    k = len(alphabet)
    kp = k + 1
    trans = np.zeros((4, kp * kp), np.int32)
    for x in range(k):
        for y in range(k):
            trans[1, x * kp + y] = 1
    for y in range(k):
        trans[1, k * kp + y] = 2
        trans[2, k * kp + y] = 2
    for x in range(k):
        trans[1, x * kp + k] = 3
        trans[3, x * kp + k] = 3
    acc = np.array([False, True, True, True])
    return Fsa(alphabet, PAIR, trans, acc, name="well-padded")


def complement(f):
    """Complete with a sink, flip acceptance, trim.  For pair automata the
    result is restricted to well-padded words."""
    n = f.n_states
    trans = np.asarray(f.trans).copy()
    sink = n + 1
    trans = np.vstack([trans, np.full((1, f.n_syms), sink, np.int32)])
    trans[trans == 0] = sink
    trans[0, :] = 0
    acc = np.zeros(n + 2, np.bool_)
    acc[1: n + 1] = ~f.accepting[1:]
    acc[sink] = True
    if f.kind == PAIR:
        kp = f.k + 1
        pp = kp * kp - 1
        trans[:, pp] = 0  # (pad, pad) is not a symbol
        out = _build(f.alphabet, PAIR, trans, acc, name=f"co-{f.name}")
        return intersect(out, well_padded_fsa(f.alphabet),
                         name=f"co-{f.name}")
    return _build(f.alphabet, SINGLE, trans, acc, name=f"co-{f.name}")


def _check_compatible(f, g):
    if f.kind != g.kind or f.alphabet != g.alphabet:
        raise ValueError("automata are over different alphabets")


def intersect(f, g, max_states=DEFAULT_MAX_STATES, name=None):
    """Product construction, trimmed; L = L(f) & L(g)."""
    _check_compatible(f, g)
    status, n, trans_flat, acc = K.dfa_intersect(
        f.trans, f.accepting.astype(np.uint8),
        g.trans, g.accepting.astype(np.uint8), max_states)
    if status != 0:
        raise BudgetExceeded(f"product exceeded {max_states} states")
    trans = np.asarray(trans_flat)[: (n + 1) * f.n_syms].reshape(n + 1, -1)
    return _build(f.alphabet, f.kind, trans, np.asarray(acc)[: n + 1],
                  name=name or f"{f.name}&{g.name}")


def language_equal(f, g):
    _check_compatible(f, g)
    found, _ = K.dfa_compare(f.trans, f.accepting.astype(np.uint8),
                             g.trans, g.accepting.astype(np.uint8), False)
    return not found


def difference_witness(f, g):
    """Shortlex-least word in L(f) \\ L(g), or None if L(f) is a subset."""
    _check_compatible(f, g)
    found, wit = K.dfa_compare(f.trans, f.accepting.astype(np.uint8),
                               g.trans, g.accepting.astype(np.uint8), True)
    if not found:
        return None
    return tuple(int(x) for x in np.asarray(wit))


def equality_witness(f, g):
    """Shortlex-least word on which the two languages disagree, or None."""
    _check_compatible(f, g)
    found, wit = K.dfa_compare(f.trans, f.accepting.astype(np.uint8),
                               g.trans, g.accepting.astype(np.uint8), False)
    if not found:
        return None
    return tuple(int(x) for x in np.asarray(wit))


# ---------------------------------------------------------------------------
# projections and composition of pair automata
# ---------------------------------------------------------------------------


def _pad_closure_accepting(f, side):
    """States from which acceptance is reachable using only symbols padded
    on `side` (those reads vanish under projection)."""
    k = f.k
    kp = k + 1
    if side == "first":
        syms = [k * kp + y for y in range(k)]
    else:
        syms = [x * kp + k for x in range(k)]
    n = f.n_states
    acc = f.accepting.copy()
    changed = True
    sub = np.asarray(f.trans)[:, syms]
    while changed:
        changed = False
        reach = acc[sub]  # (n+1, len(syms)) acceptance after one padded step
        reach[sub == 0] = False
        newacc = acc | reach.any(axis=1)
        newacc[0] = False
        if not np.array_equal(newacc, acc):
            acc = newacc
            changed = True
    return acc


def exists_project(f, side, max_states=DEFAULT_MAX_STATES):
    """Project a pair language onto one coordinate (the other is
    existentially quantified; padding erases to nothing)."""
    if f.kind != PAIR:
        raise ValueError("projection needs a padded-pair automaton")
    if side not in ("first", "second"):
        raise ValueError("side must be 'first' or 'second'")
    k = f.k
    kp = k + 1
    acc = _pad_closure_accepting(f, side)
    n = f.n_states
    block = np.asarray(f.trans)[1:].reshape(n, kp, kp)
    if side == "first":
        sub = block[:, :k, :]  # kept letter x, erased coordinate last
    else:
        sub = block[:, :, :k].transpose(0, 2, 1)
    src, kept, _other = np.nonzero(sub)
    tgt = sub[src, kept, _other].astype(np.int32) - 1
    rows = src * k + kept
    order = np.argsort(rows, kind="stable")
    targets = tgt[order]
    counts = np.bincount(rows, minlength=n * k)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    init = np.asarray([0], np.int64)
    return _determinize_csr(f.alphabet, SINGLE, n, indptr, targets, init,
                            acc[1:].astype(np.uint8), max_states=max_states,
                            name=f"proj-{side}-{f.name}")


def _check_multiplier_shaped(f):
    """Reject pair automata accepting pairs whose lengths differ by > 1."""
    k = f.k
    kp = k + 1
    trans = np.asarray(f.trans)
    live = np.asarray(K.coaccessible(trans, f.accepting.astype(np.uint8)))
    for syms in ([k * kp + y for y in range(k)],
                 [x * kp + k for x in range(k)]):
        once = np.unique(trans[1:, syms])
        once = once[once != 0]
        if once.size:
            twice = np.unique(trans[once][:, syms])
            twice = twice[twice != 0]
            if twice.size and live[twice].any():
                raise ValueError(
                    "middle-overflow: operand accepts pairs with length "
                    "difference above 1")


def compose(f, g, max_states=DEFAULT_MAX_STATES, name=None):
    """Relational composition of two multiplier-shaped pair automata:
    accepts (u, w) iff some middle word v has (u, v) in f and (v, w) in g.
    The middle word is tracked implicitly and may run one letter past both
    outer words.  Determinized and minimized."""
    _check_compatible(f, g)
    if f.kind != PAIR:
        raise ValueError("compose needs padded-pair automata")
    _check_multiplier_shaped(f)
    _check_multiplier_shaped(g)
    status, n, trans_flat, acc = K.compose_product(
        f.trans, f.accepting.astype(np.uint8),
        g.trans, g.accepting.astype(np.uint8), f.k, max_states)
    if status != 0:
        raise BudgetExceeded(f"composition exceeded {max_states} states")
    trans = np.asarray(trans_flat)[: (n + 1) * f.n_syms].reshape(n + 1, -1)
    out = _build(f.alphabet, PAIR, trans, np.asarray(acc)[: n + 1],
                 name=name or f"{f.name}*{g.name}")
    return minimize(out)


# ---------------------------------------------------------------------------
# counting and enumeration
# ---------------------------------------------------------------------------


def language_count(f):
    """Number of accepted words, or None when the language is infinite."""
    acc8 = f.accepting.astype(np.uint8)
    live = np.asarray(K.coaccessible(f.trans, acc8))
    order, _ = K.bfs_order(f.trans)
    live = live & (np.asarray(order) > 0).astype(np.uint8)
    if not live[1]:
        return 0
    if K.has_live_cycle(f.trans, live):
        return None
    # DAG dynamic programming with exact integers
    n = f.n_states
    trans = np.asarray(f.trans)
    indeg = np.zeros(n + 1, np.int64)
    for s in range(1, n + 1):
        if live[s]:
            for t in trans[s]:
                if t and live[t]:
                    indeg[t] += 1
    ways = [0] * (n + 1)
    ways[1] = 1
    queue = [1]
    total = 0
    qi = 0
    while qi < len(queue):
        s = queue[qi]
        qi += 1
        if f.accepting[s]:
            total += ways[s]
        for t in trans[s]:
            t = int(t)
            if t and live[t]:
                ways[t] += ways[s]
                indeg[t] -= 1
                if indeg[t] == 0:
                    queue.append(t)
    return total


def enumerate_words(f, max_len):
    """Accepted words of length <= max_len in shortlex order (symbol ids)."""
    out = []
    frontier = [((), 1)]
    if f.accepting[1]:
        out.append(())
    for _ in range(max_len):
        nxt = []
        for word, s in frontier:
            for sym in range(f.n_syms):
                t = int(f.trans[s, sym])
                if t:
                    w2 = word + (sym,)
                    nxt.append((w2, t))
                    if f.accepting[t]:
                        out.append(w2)
        frontier = nxt
        if not frontier:
            break
    return out


def growth_counts(f, max_len):
    """Counts of accepted words of each exact length 0..max_len."""
    n = f.n_states
    trans = np.asarray(f.trans)
    cur = [0] * (n + 1)
    cur[1] = 1
    counts = [1 if f.accepting[1] else 0]
    for _ in range(max_len):
        nxt = [0] * (n + 1)
        for s in range(1, n + 1):
            c = cur[s]
            if c:
                for t in trans[s]:
                    if t:
                        nxt[t] += c
        counts.append(sum(nxt[s] for s in range(1, n + 1) if f.accepting[s]))
        cur = nxt
    return counts


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_text(f):
    lines = [f"fsa {f.name}"]
    ab = f.alphabet
    if f.kind == SINGLE:
        lines.append("alphabet: single " + " ".join(ab.names))
    else:
        lines.append("alphabet: pair " + " ".join(ab.names) + " pad: _")
    pairs = []
    seen = set()
    for i, j in enumerate(ab.inv):
        if i not in seen:
            seen.update((i, j))
            pairs.append(f"{ab.names[i]} {ab.names[j]}")
    lines.append("inverses: " + ", ".join(pairs))
    lines.append(f"states: {f.n_states}  initial: 1")
    if bool(f.accepting[1:].all()):
        lines.append("accepting: all")
    else:
        ids = " ".join(str(s) for s in np.flatnonzero(f.accepting))
        lines.append(f"accepting: {ids}")
    if f.labels:
        for s in sorted(f.labels):
            lines.append(f"labels: {s}: " + " ".join(f.labels[s]))
    trans = np.asarray(f.trans)
    for s in range(1, f.n_states + 1):
        for sym in range(f.n_syms):
            t = trans[s, sym]
            if t:
                lines.append(f"t {s} {f.sym_name(sym)} {t}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def from_text(text):
    name = "fsa"
    kind = None
    ab = None
    n_states = None
    accepting = None
    labels = {}
    trans_items = []
    gens = []
    inv_pairs = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("fsa "):
            name = line[4:].strip()
        elif line.startswith("alphabet:"):
            toks = line[len("alphabet:"):].split()
            kind = toks[0]
            if kind not in (SINGLE, PAIR):
                raise ValueError(f"line {ln}: bad alphabet kind {kind!r}")
            toks = toks[1:]
            if kind == PAIR:
                if toks[-2:] != ["pad:", PAD_NAME]:
                    raise ValueError(f"line {ln}: pair alphabet needs pad: _")
                toks = toks[:-2]
            gens = toks
        elif line.startswith("inverses:"):
            for chunk in line[len("inverses:"):].split(","):
                toks = chunk.split()
                if len(toks) == 1:
                    inv_pairs.append((toks[0], toks[0]))
                elif len(toks) == 2:
                    inv_pairs.append((toks[0], toks[1]))
        elif line.startswith("states:"):
            toks = line.replace("initial:", " ").split()
            n_states = int(toks[1])
            if len(toks) > 2 and int(toks[2]) != 1:
                raise ValueError("initial state must be 1")
        elif line.startswith("accepting:"):
            body = line[len("accepting:"):].strip()
            accepting = "all" if body == "all" else [int(t) for t in body.split()]
        elif line.startswith("labels:"):
            body = line[len("labels:"):]
            sid, toks = body.split(":", 1)
            labels[int(sid)] = tuple(toks.split())
        elif line.startswith("t "):
            toks = line.split()
            if len(toks) != 4:
                raise ValueError(f"line {ln}: bad transition {line!r}")
            trans_items.append((int(toks[1]), toks[2], int(toks[3])))
        elif line == "end":
            break
        else:
            raise ValueError(f"line {ln}: unrecognized line {line!r}")
    if kind is None or n_states is None or accepting is None:
        raise ValueError("incomplete automaton file")
    idx = {nm: i for i, nm in enumerate(gens)}
    inv = list(range(len(gens)))
    for g, gi in inv_pairs:
        inv[idx[g]] = idx[gi]
        inv[idx[gi]] = idx[g]
    ab = Alphabet(gens, inv)
    k = len(ab)
    n_syms = k if kind == SINGLE else (k + 1) * (k + 1)
    trans = np.zeros((n_states + 1, n_syms), np.int32)
    acc = np.zeros(n_states + 1, np.bool_)
    if accepting == "all":
        acc[1:] = True
    else:
        for s in accepting:
            acc[s] = True
    probe = Fsa(ab, kind, trans, acc, name=name)
    for s, symtext, t in trans_items:
        if not (1 <= s <= n_states and 1 <= t <= n_states):
            raise ValueError(f"transition touches unknown state: {s} -> {t}")
        sym = probe.sym_from_name(symtext)
        trans[s, sym] = t
    return Fsa(ab, kind, trans, acc, labels or None, name=name)


def save(f, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_text(f))


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return from_text(fh.read())
