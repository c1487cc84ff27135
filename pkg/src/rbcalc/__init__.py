"""rbcalc: exact symbolic computation in free integro-differential algebras.

The engine works on Rota-Baxter words over a truncated differential alphabet
with coefficients in Q[lam] (lam the formal weight), provides the reduction
onto the RBWord basis, the diamond product, the weight-lam derivation, and
reduction to the canonical functional-monomial normal form, plus an
enumerative verification harness and a small CLI (``rbcalc``).
"""

from .coeff import LAM, ONE, ZERO, LambdaPoly, Rational
from .terms import (Alphabet, Bracket, DegPair, Letter, Placement, Poly,
                    Relation, StarContext, Word, breadth, classify_pair, deg,
                    dep_star, depth, enumerate_rbwords, is_rbword, placements,
                    subst)
from .ordering import cmp_letter, cmp_word, is_normal, leading, sort_key
from .rb_engine import derive, diamond, integral, red
from .gs import (Composition, GenKind, Generator, LeadClass, LeadTag,
                 ReductionTrace, compositions, enumerate_irr, find_reduction,
                 is_epsilon, is_functional_monomial, is_irreducible,
                 is_trivial_mod, match_leading, normal_form, phi1, phi2)
from .textio import ParseError, parse_poly, render_poly, render_word

__version__ = "0.1.0"


def clear_caches() -> None:
    """Reset all memoization (test hook; needed after monkeypatching)."""
    from . import gs, rb_engine, terms

    gs.clear_gs_caches()
    rb_engine.clear_engine_caches()
    terms.clear_term_caches()
