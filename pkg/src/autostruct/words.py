"""Alphabets, shortlex order, words, and group presentations.

Words are plain tuples of letter ids (indices into an :class:`Alphabet`);
the empty tuple is the group identity.  Letter order is the index order,
fixed when the alphabet is built, so shortlex comparison needs no alphabet
at all.  The token ``1`` denotes the empty word in text form; ``_`` is the
padding mark of pair automata.  Neither may name a generator.
"""

from dataclasses import dataclass, field

import numpy as np

Word = tuple  # sequence of letter ids

RESERVED_TOKENS = {"1", "_", ",", "=", "->", "#"}

LESS, EQUAL, GREATER = -1, 0, 1


class Alphabet:
    """Ordered inverse-closed monoid generating set.

    ``names`` lists the letters in their (total, fixed) order; ``inverses``
    pairs each letter with its inverse, given as an involution on ids.
    A letter may be its own inverse.
    """

    def __init__(self, names, inverses):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate letter names")
        for nm in names:
            if not nm or nm in RESERVED_TOKENS or "," in nm \
                    or any(c.isspace() for c in nm):
                raise ValueError(f"invalid letter name {nm!r}")
        inv = tuple(int(i) for i in inverses)
        if len(inv) != len(names):
            raise ValueError("inverse map must cover every letter")
        for i, j in enumerate(inv):
            if not 0 <= j < len(names) or inv[j] != i:
                raise ValueError("inverse map is not an involution")
        self.names = names
        self.inv = inv
        self._index = {nm: i for i, nm in enumerate(names)}
        self._inv_arr = np.asarray(inv, dtype=np.int32)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from (generator, inverse) name pairs, listed in order."""
        names = []
        for g, gi in pairs:
            names.append(g)
            if gi != g:
                names.append(gi)
        inv = [0] * len(names)
        idx = {nm: i for i, nm in enumerate(names)}
        for g, gi in pairs:
            inv[idx[g]] = idx[gi]
            inv[idx[gi]] = idx[g]
        return cls(names, inv)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (isinstance(other, Alphabet) and self.names == other.names
                and self.inv == other.inv)

    def __hash__(self):
        return hash((self.names, self.inv))

    def __repr__(self):
        return f"Alphabet({', '.join(self.names)})"

    @property
    def inv_array(self):
        return self._inv_arr

    def id_of(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown letter {name!r}") from None

    def parse(self, text):
        """Parse a word: whitespace-separated letter names, or a compact
        run of single-character names; ``1`` is the empty word."""
        text = text.strip()
        if text == "1" or text == "":
            return ()
        toks = text.split()
        if len(toks) == 1 and toks[0] not in self._index \
                and all(len(nm) == 1 for nm in self.names):
            toks = list(toks[0])
        return tuple(self.id_of(t) for t in toks)

    def format(self, word, sep=" "):
        if not word:
            return "1"
        return sep.join(self.names[x] for x in word)

    def validate(self, word):
        for x in word:
            if not 0 <= x < len(self.names):
                raise ValueError(f"letter id {x} out of range")
        return word


def shortlex_compare(u, v):
    """-1, 0, or 1 as u is shortlex-less, equal, or greater than v.

    Length decides first; equal lengths compare letterwise by letter order.
    """
    if len(u) != len(v):
        return LESS if len(u) < len(v) else GREATER
    if u == v:
        return EQUAL
    return LESS if u < v else GREATER


def shortlex_key(w):
    return (len(w), w)


def invert_word(alphabet, w):
    """Reversed sequence of letterwise inverses."""
    inv = alphabet.inv
    return tuple(inv[x] for x in reversed(w))


def free_reduce(alphabet, w):
    """Delete adjacent x,inverse(x) pairs until none remain."""
    inv = alphabet.inv
    out = []
    for x in w:
        if out and out[-1] == inv[x]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    """A monoid presentation of a group: relations are equations lhs = rhs
    over an inverse-closed alphabet; the free-reduction relations are
    implicit and never listed."""

    alphabet: Alphabet
    relations: tuple = field(default_factory=tuple)
    name: str = "G"

    def __post_init__(self):
        for lhs, rhs in self.relations:
            self.alphabet.validate(lhs)
            self.alphabet.validate(rhs)

    def to_text(self):
        ab = self.alphabet
        lines = [f"generators: {' '.join(ab.names)}"]
        pairs = []
        seen = set()
        for i, j in enumerate(ab.inv):
            if i not in seen:
                seen.update((i, j))
                pairs.append(f"{ab.names[i]} {ab.names[j]}")
        lines.append("inverses: " + ", ".join(pairs))
        for lhs, rhs in self.relations:
            lines.append(f"relation: {ab.format(lhs)} = {ab.format(rhs)}")
        return "\n".join(lines) + "\n"


def parse_presentation(text, name="G"):
    """Parse the line-oriented presentation format.

    ::

        generators: a1 A1 a2 A2
        inverses: a1 A1, a2 A2
        relation: a1 a2 = a3
    """
    gens = None
    inv_pairs = []
    relations = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("generators:"):
            gens = line[len("generators:"):].split()
        elif line.startswith("inverses:"):
            for chunk in line[len("inverses:"):].split(","):
                toks = chunk.split()
                if not toks:
                    continue
                if len(toks) == 1:
                    inv_pairs.append((toks[0], toks[0]))
                elif len(toks) == 2:
                    inv_pairs.append((toks[0], toks[1]))
                else:
                    raise ValueError(f"line {ln}: bad inverse pair {chunk!r}")
        elif line.startswith("relation:"):
            body = line[len("relation:"):]
            if "=" not in body:
                raise ValueError(f"line {ln}: relation needs '='")
            lhs_t, rhs_t = body.split("=", 1)
            relations.append((lhs_t.strip(), rhs_t.strip()))
        else:
            raise ValueError(f"line {ln}: unrecognized directive {line!r}")
    if gens is None:
        raise ValueError("missing generators: line")
    idx = {nm: i for i, nm in enumerate(gens)}
    inv = list(range(len(gens)))
    declared = set()
    for g, gi in inv_pairs:
        if g not in idx or gi not in idx:
            raise ValueError(f"inverse pair names unknown generator: {g} {gi}")
        inv[idx[g]] = idx[gi]
        inv[idx[gi]] = idx[g]
        declared.update((g, gi))
    missing = [nm for nm in gens if nm not in declared]
    if missing:
        raise ValueError(f"generators without declared inverse: {missing}")
    ab = Alphabet(gens, inv)
    rels = tuple((ab.parse(l), ab.parse(r)) for l, r in relations)
    return Presentation(ab, rels, name=name)


def fibonacci_presentation(n):
    """F(2, n) = < a_1 .. a_n | a_i a_{i+1} = a_{i+2}, indices mod n >.

    Letters are named a1, A1, a2, A2, ... with each generator directly
    followed by its inverse.
    """
    if n < 2:
        raise ValueError("fibonacci presentation needs n >= 2")
    pairs = [(f"a{i + 1}", f"A{i + 1}") for i in range(n)]
    ab = Alphabet.from_pairs(pairs)
    gen = [2 * i for i in range(n)]  # id of a_{i+1}
    rels = []
    for i in range(n):
        lhs = (gen[i], gen[(i + 1) % n])
        rhs = (gen[(i + 2) % n],)
        rels.append((lhs, rhs))
    return Presentation(ab, tuple(rels), name=f"fib{n}")


def parse_presentation_arg(tokens):
    """CLI input: a presentation file path, or the shorthand ``fib N``."""
    if len(tokens) == 2 and tokens[0] == "fib":
        return fibonacci_presentation(int(tokens[1]))
    if len(tokens) == 1 and tokens[0].startswith("fib") \
            and tokens[0][3:].isdigit():
        return fibonacci_presentation(int(tokens[0][3:]))
    if len(tokens) == 1:
        with open(tokens[0], "r", encoding="utf-8") as fh:
            import os
            base = os.path.basename(tokens[0])
            return parse_presentation(fh.read(), name=base.rsplit(".", 1)[0])
    raise ValueError(f"cannot interpret input {tokens!r}")
