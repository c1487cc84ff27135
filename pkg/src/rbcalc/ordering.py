"""The word order, leading terms, and normality of context substitutions.

Letters compare by (symbol, -derivative) lexicographically, so higher
derivatives are smaller: x'' < x' < x.  Words compare first by the pair
(deg_total, bracket count), then standard forms compare atom by atom; a
bracket dominates any letter, and brackets compare by their contents (the
degree pair of P[w] is that of w shifted by (1,1), so comparing contents is
the same as comparing the bracket atoms as words).

With equal degree pairs one standard form can never be a proper prefix of the
other (the extra factors would add degree), but totality still needs a rule,
so a shorter sequence counts as smaller.

This is a well order on words over a finite alphabet and it is weakly
monomial: substitution into a plain context preserves it unconditionally, and
substitution under a hole derivative preserves it for normal substitutions.
Both facts are checked at desk scale by verify.check_order.
"""

from __future__ import annotations

from functools import cmp_to_key

from .coeff import LambdaPoly
from .terms import (Alphabet, Atom, Bracket, Letter, Poly, StarContext, Word,
                    deg, is_rbword, subst)


def cmp_letter(x: Letter, y: Letter) -> int:
    a = (x.sym, -x.deriv)
    b = (y.sym, -y.deriv)
    return -1 if a < b else (1 if a > b else 0)


def _cmp_atom(x: Atom, y: Atom) -> int:
    x_is_letter = isinstance(x, Letter)
    y_is_letter = isinstance(y, Letter)
    if x_is_letter and y_is_letter:
        return cmp_letter(x, y)
    if x_is_letter:
        return -1   # a letter has degree (1,0), below any bracket
    if y_is_letter:
        return 1
    return cmp_word(x.content, y.content)


def cmp_word(u: Word, v: Word) -> int:
    du, dv = deg(u), deg(v)
    if du != dv:
        return -1 if du < dv else 1
    for x, y in zip(u.atoms, v.atoms):
        c = _cmp_atom(x, y)
        if c:
            return c
    if len(u.atoms) != len(v.atoms):
        return -1 if len(u.atoms) < len(v.atoms) else 1
    return 0


sort_key = cmp_to_key(cmp_word)


def word_max(words) -> Word:
    return max(words, key=sort_key)


def leading(p: Poly) -> tuple[LambdaPoly, Word]:
    """Leading (coefficient, monomial) of a nonzero Poly."""
    if p.is_zero():
        raise ValueError("zero polynomial has no leading term")
    w = word_max(p.terms)
    return p.terms[w], w


def leading_word(p: Poly) -> Word:
    return leading(p)[1]


def is_monic(p: Poly) -> bool:
    c, _ = leading(p)
    return c == 1


def _as_leading_word(p: Poly | Word) -> Word:
    if isinstance(p, Word):
        return p
    return leading_word(p)


def is_normal(a: Alphabet, q: StarContext, p: Poly | Word) -> bool:
    """True iff substituting the leading monomial of ``p`` needs no reduction.

    For a plain context this means the spliced word is already an RBWord.
    For a type I context (derivative power ell at the hole) the substituted
    leading monomial must be a single letter of order at most n - ell, so that
    the derivative collapses to a single in-bounds letter; splicing a letter
    never breaks alternation.
    """
    lead = _as_leading_word(p)
    if q.hole_deriv >= 1:
        if len(lead.atoms) != 1:
            return False
        atom = lead.atoms[0]
        return (isinstance(atom, Letter) and atom.sym >= 0
                and atom.deriv + q.hole_deriv <= a.order_n)
    return is_rbword(subst(q, lead))
