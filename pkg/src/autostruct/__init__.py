"""Shortlex automatic structures of finitely presented groups.

The pipeline: Knuth-Bendix completion collects word differences, the
word-acceptor and multiplier are built from the difference machine, a
partial correctness loop repairs the difference set, and axiom checking
verifies the final structure, which then answers word-problem, order and
growth queries.
"""

from .words import (Alphabet, Presentation, fibonacci_presentation,
                    free_reduce, invert_word, parse_presentation,
                    shortlex_compare)
from .fsa import (Fsa, Nfa, complement, compose, determinize,
                  enumerate_words, exists_project, intersect, language_count,
                  language_equal, minimize)

__all__ = [
    "Alphabet", "Presentation", "fibonacci_presentation", "free_reduce",
    "invert_word", "parse_presentation", "shortlex_compare",
    "Fsa", "Nfa", "complement", "compose", "determinize", "enumerate_words",
    "exists_project", "intersect", "language_count", "language_equal",
    "minimize",
]

__version__ = "0.1.0"
