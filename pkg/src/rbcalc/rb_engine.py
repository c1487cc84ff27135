"""The free differential Rota-Baxter algebra on RBWords.

Three operations generate everything:

* ``red`` rewrites every adjacency of two brackets via
  P[u]P[v] -> P[u P[v]] + P[P[u] v] + lam P[u v]
  until all monomials are alternation-valid, projecting a general bracketed
  word onto the RBWord basis.  The rewriting is confluent; the strategy
  argument only fixes the intermediate trace.

* ``diamond`` is the algebra product on the RBWord basis: concatenate, and
  resolve the single possible bracket collision at the seam recursively.
  On all inputs it agrees with ``red`` of the raw concatenation.

* ``derive`` is the weight-lam derivation: letters step up one derivative
  order (to zero at the truncation order), a bracket peels off, the unit dies,
  and products follow the lam-Leibniz rule, implemented in closed form as the
  subset-sum expansion over the standard-form factors of each monomial.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional

from .coeff import LAM, ONE, LambdaPoly
from .terms import (Alphabet, Bracket, Letter, Path, Poly, Word, bracket,
                    concat, replace_span)

RED_STRATEGIES = ("innermost", "outermost", "random")


def as_poly(t: Word | Poly) -> Poly:
    return t if isinstance(t, Poly) else Poly.mono(t)


# ---------------------------------------------------------------------------
# red: projection onto the RBWord basis
# ---------------------------------------------------------------------------

def _redexes(w: Word, path: Path = ()) -> list[tuple[Path, int]]:
    """Positions of bracket-bracket adjacencies, as (bracket path, left index)."""
    out = []
    for i in range(len(w.atoms) - 1):
        if isinstance(w.atoms[i], Bracket) and isinstance(w.atoms[i + 1], Bracket):
            out.append((path, i))
    for i, a in enumerate(w.atoms):
        if isinstance(a, Bracket):
            out.extend(_redexes(a.content, path + (i,)))
    return out


def _subterm(w: Word, path: Path) -> Word:
    for i in path:
        a = w.atoms[i]
        assert isinstance(a, Bracket)
        w = a.content
    return w


def _rewrite_at(w: Word, path: Path, i: int) -> tuple[tuple[Word, LambdaPoly], ...]:
    level = _subterm(w, path)
    left = level.atoms[i]
    right = level.atoms[i + 1]
    assert isinstance(left, Bracket) and isinstance(right, Bracket)
    u, v = left.content, right.content
    pieces = (
        (Bracket(concat(u, bracket(v))), ONE),
        (Bracket(concat(bracket(u), v)), ONE),
        (Bracket(concat(u, v)), LAM),
    )
    return tuple((replace_span(w, path, i, i + 2, (atom,)), c) for atom, c in pieces)


def _pick_redex(redexes: list[tuple[Path, int]], strategy: str,
                rng: Optional[random.Random]) -> tuple[Path, int]:
    if strategy == "innermost":
        d = max(len(p) for p, _ in redexes)
        return min((r for r in redexes if len(r[0]) == d))
    if strategy == "outermost":
        d = min(len(p) for p, _ in redexes)
        return min((r for r in redexes if len(r[0]) == d))
    if strategy == "random":
        if rng is None:
            rng = random.Random(0)
        return rng.choice(sorted(redexes))
    raise ValueError(f"unknown strategy {strategy!r}")


def red(t: Word | Poly, strategy: str = "innermost",
        rng: Optional[random.Random] = None) -> Poly:
    """Rewrite exhaustively until every monomial is an RBWord."""
    if isinstance(t, Word) and strategy == "innermost" and rng is None:
        return _red_word(t)
    stack: list[tuple[Word, LambdaPoly]] = \
        [(t, ONE)] if isinstance(t, Word) else list(t.terms.items())
    done: list[tuple[Word, LambdaPoly]] = []
    while stack:
        w, c = stack.pop()
        redexes = _redexes(w)
        if not redexes:
            done.append((w, c))
            continue
        path, i = _pick_redex(redexes, strategy, rng)
        for w2, k in _rewrite_at(w, path, i):
            stack.append((w2, c * k))
    return Poly(done)


@lru_cache(maxsize=None)
def _red_word(w: Word) -> Poly:
    redexes = _redexes(w)
    if not redexes:
        return Poly.mono(w)
    path, i = _pick_redex(redexes, "innermost", None)
    out = Poly()
    for w2, k in _rewrite_at(w, path, i):
        out = out + _red_word(w2).scale(k)
    return out


# ---------------------------------------------------------------------------
# integral and diamond product
# ---------------------------------------------------------------------------

def integral(p: Word | Poly) -> Poly:
    """Linear extension of u -> P[u]; wrapping never breaks alternation."""
    p = as_poly(p)
    return Poly([(bracket(w), c) for w, c in p.terms.items()])


@lru_cache(maxsize=None)
def diamond_words(u: Word, v: Word) -> Poly:
    if not u.atoms:
        return Poly.mono(v)
    if not v.atoms:
        return Poly.mono(u)
    last, first = u.atoms[-1], v.atoms[0]
    if isinstance(last, Bracket) and isinstance(first, Bracket):
        ut, vt = last.content, first.content
        inner = (diamond_words(ut, bracket(vt))
                 + diamond_words(bracket(ut), vt)
                 + diamond_words(ut, vt).scale(LAM))
        prefix, suffix = u.atoms[:-1], v.atoms[1:]
        return Poly([(Word(prefix + (Bracket(m),) + suffix), c)
                     for m, c in inner.terms.items()])
    return Poly(((concat(u, v), ONE),))


def diamond(p: Word | Poly, q: Word | Poly) -> Poly:
    """Bilinear product on the RBWord basis; equals red of the concatenation."""
    p, q = as_poly(p), as_poly(q)
    out = Poly()
    for u, cu in p.terms.items():
        for v, cv in q.terms.items():
            out = out + diamond_words(u, v).scale(cu * cv)
    return out


def diamond_all(factors: Iterable[Word | Poly]) -> Poly:
    out = Poly.unit()
    for f in factors:
        out = diamond(out, f)
    return out


# ---------------------------------------------------------------------------
# derivation
# ---------------------------------------------------------------------------

def _derive_atom(a: Alphabet, atom) -> Poly:
    if isinstance(atom, Letter):
        if atom.sym < 0:
            raise ValueError("cannot derive a context hole")
        if atom.deriv >= a.order_n:
            return Poly()
        return Poly.mono(Word((Letter(atom.sym, atom.deriv + 1),)))
    return Poly.mono(atom.content)


@lru_cache(maxsize=None)
def derive_word(a: Alphabet, w: Word) -> Poly:
    """Closed-form Leibniz expansion over the standard-form factors.

    d(u_1 ... u_k) is the sum over nonempty subsets I of the factor positions
    of lam^(|I|-1) times the product with each factor in I replaced by its
    derivative.  Subsets containing a factor with zero derivative contribute
    nothing.
    """
    k = len(w.atoms)
    datoms = [_derive_atom(a, at) for at in w.atoms]
    alive = [i for i in range(k) if datoms[i]]
    out = Poly()
    for r in range(1, len(alive) + 1):
        for chosen in combinations(alive, r):
            picked = set(chosen)
            factors: list[Word | Poly] = [
                datoms[i] if i in picked else Word((w.atoms[i],))
                for i in range(k)
            ]
            out = out + diamond_all(factors).scale(LambdaPoly.lam(r - 1))
    return out


def derive(a: Alphabet, p: Word | Poly) -> Poly:
    """The weight-lam derivation; the result is red-normalized by construction."""
    p = as_poly(p)
    out = Poly()
    for w, c in p.terms.items():
        out = out + derive_word(a, w).scale(c)
    return out


def derive_power(a: Alphabet, p: Word | Poly, times: int) -> Poly:
    out = as_poly(p)
    for _ in range(times):
        out = derive(a, out)
    return out


def clear_engine_caches() -> None:
    _red_word.cache_clear()
    diamond_words.cache_clear()
    derive_word.cache_clear()
