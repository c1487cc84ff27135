"""Reduction to the canonical basis of the free integro-differential algebra.

The relation family consists of the two integration-by-parts rules

    phi1(u,v) = P[d(u) P[v]] - u P[v] + P[u v] + lam P[d(u) v]
    phi2(u,v) = P[P[u] d(v)] - P[u] v + P[u v] + lam P[u d(v)]

over all RBWord pairs (u, v).  The family is closed under the derivation and
critical-pair complete for the word order, so reducing the greatest reducible
monomial by any matching rule instance terminates in a unique normal form.
Normal-form supports are exactly the functional monomials minus the finitely
many truncation artifacts ("epsilon" leads, which contain maximal-order runs
and disappear as the truncation order grows).

Reducibility is recognized structurally: every rule's leading monomial is a
single bracket, and ``match_leading`` inverts the leading-term shapes back to
generator arguments, verifying each recovery by expansion.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .coeff import LAM, ONE, LambdaPoly
from .ordering import cmp_word, is_normal, leading, leading_word, sort_key
from .terms import (Alphabet, Atom, Bracket, Letter, Placement, Poly,
                    StarContext, Word, bracket, placements_with_addresses)
from .rb_engine import (as_poly, derive, derive_power, diamond, integral, red)
from . import textio


class GenKind(enum.Enum):
    PHI1 = "Phi1"
    PHI2 = "Phi2"


@dataclass(frozen=True, slots=True)
class Generator:
    """One relation instance phi_kind(u, v)."""

    kind: GenKind
    u: Word
    v: Word

    def expand(self, a: Alphabet) -> Poly:
        fn = phi1 if self.kind is GenKind.PHI1 else phi2
        return fn(a, self.u, self.v)

    def label(self, a: Alphabet) -> str:
        return (f"{self.kind.value}({textio.render_word(a, self.u)}, "
                f"{textio.render_word(a, self.v)})")


class LeadTag(enum.Enum):
    # listed in the preference order used when several rules match a monomial
    CASE1_PHI1 = "Case1Phi1"
    CASE1_PHI2 = "Case1Phi2"
    CASE2_PHI1 = "Case2Phi1"
    CASE2_PHI2 = "Case2Phi2"
    EPSILON = "Epsilon"


_TAG_PRIORITY = {tag: i for i, tag in enumerate(LeadTag)}

_EPSILON_TAGS = frozenset((LeadTag.EPSILON, LeadTag.CASE2_PHI1, LeadTag.CASE2_PHI2))


@dataclass(frozen=True, slots=True)
class LeadClass:
    """How a word arises as a generator's leading monomial."""

    tag: LeadTag
    gen: Generator


# ---------------------------------------------------------------------------
# the generators
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def phi1(a: Alphabet, u: Word, v: Word) -> Poly:
    du = derive(a, u)
    pv = bracket(v)
    return (integral(diamond(du, pv))
            - diamond(u, pv)
            + integral(diamond(u, v))
            + integral(diamond(du, v)).scale(LAM))


@lru_cache(maxsize=None)
def phi2(a: Alphabet, u: Word, v: Word) -> Poly:
    dv = derive(a, v)
    pu = bracket(u)
    return (integral(diamond(pu, dv))
            - diamond(pu, v)
            + integral(diamond(u, v))
            + integral(diamond(u, dv)).scale(LAM))


def phi1_poly(a: Alphabet, u: Word, v: Word | Poly) -> Poly:
    """phi1 extended linearly in the second argument."""
    out = Poly()
    for m, c in as_poly(v).terms.items():
        out = out + phi1(a, u, m).scale(c)
    return out


def phi2_poly(a: Alphabet, u: Word, v: Word | Poly) -> Poly:
    out = Poly()
    for m, c in as_poly(v).terms.items():
        out = out + phi2(a, u, m).scale(c)
    return out


# ---------------------------------------------------------------------------
# letter-run classifiers
# ---------------------------------------------------------------------------

def _all_letters(w: Word) -> bool:
    return all(isinstance(at, Letter) for at in w.atoms)


def is_saturated(a: Alphabet, w: Word) -> bool:
    """Nonempty letter word with every letter at the truncation order.

    Exactly the nonempty words killed by the derivation.
    """
    return (bool(w.atoms) and _all_letters(w)
            and all(at.deriv == a.order_n for at in w.atoms))


def is_derivative_lead(a: Alphabet, w: Word) -> bool:
    """True iff w is the leading monomial of d(u) for some letter word u.

    Equivalently: w is a nonempty letter word whose last letter is derived.
    Letter words split into these and the functional ones (trailing letter
    underived); ``derivative_lead_witness`` produces an explicit u.
    """
    return (bool(w.atoms) and _all_letters(w)
            and w.atoms[-1].deriv >= 1)


def derivative_lead_witness(a: Alphabet, w: Word) -> Optional[Word]:
    """Bounded search for u with leading(d(u)) = w.

    Candidates vary each letter of w by at most one derivative level; the
    search is checked against the derivation itself, so a returned witness is
    correct by construction.
    """
    if not w.atoms or not _all_letters(w):
        return None
    from itertools import product

    options = []
    for at in w.atoms:
        options.append([d for d in (at.deriv - 1, at.deriv, at.deriv + 1)
                        if 0 <= d <= a.order_n])
    for combo in product(*options):
        u = Word(tuple(Letter(at.sym, d) for at, d in zip(w.atoms, combo)))
        du = derive(a, u)
        if du and leading_word(du) == w:
            return u
    return None


def _saturated_alternating(a: Alphabet, w: Word) -> bool:
    """Membership in the saturated alternation class (not a lone bracket).

    Nonempty, not a single bracket, and every top-level letter is at the
    truncation order; bracket contents are unconstrained.
    """
    if not w.atoms:
        return False
    if len(w.atoms) == 1 and isinstance(w.atoms[0], Bracket):
        return False
    return all(at.deriv == a.order_n for at in w.atoms if isinstance(at, Letter))


# ---------------------------------------------------------------------------
# leading-term recognition
# ---------------------------------------------------------------------------

def _raise_positions(a: Alphabet, atoms: tuple[Atom, ...]) -> tuple[int, ...]:
    """Indices of derived letters with only maximal-order letters after them.

    Lowering such a position i by one gives the unique word u whose
    derivative has the given atoms as leading monomial with the raise at i.
    """
    out = []
    trailing_max = True
    for i in reversed(range(len(atoms))):
        at = atoms[i]
        if isinstance(at, Letter):
            if trailing_max and at.deriv >= 1:
                out.append(i)
            if at.deriv != a.order_n:
                trailing_max = False
    return tuple(reversed(out))


def _lowered(atoms: tuple[Atom, ...], i: int) -> tuple[Atom, ...]:
    at = atoms[i]
    assert isinstance(at, Letter) and at.deriv >= 1
    return atoms[:i] + (Letter(at.sym, at.deriv - 1),) + atoms[i + 1:]


@lru_cache(maxsize=None)
def match_leading(a: Alphabet, w: Word) -> tuple[LeadClass, ...]:
    """All ways w arises as the leading monomial of a generator.

    Only single brackets qualify.  Candidate (u, v) pairs come from the four
    reverse recipes below; each candidate is verified by expanding the
    generator, so a returned LeadClass always reproduces w exactly.

    * raise recipes: the content ends with (starts with) a bracket and some
      derived letter has only maximal-order letters after it; lowering it
      recovers the differentiated argument.  Intervening brackets between the
      raise position and the far end mark the truncation-artifact (epsilon)
      variants.
    * cut recipes: a prefix (suffix) of the content lies in the saturated
      alternation class, where the derivative degenerates and P[u v] leads.
    """
    if len(w.atoms) != 1 or not isinstance(w.atoms[0], Bracket):
        return ()
    content = w.atoms[0].content.atoms
    recs: list[LeadClass] = []
    seen: set[Generator] = set()

    def consider(tag: LeadTag, kind: GenKind, u: Word, v: Word) -> None:
        gen = Generator(kind, u, v)
        if gen in seen:
            return
        poly = gen.expand(a)
        if poly and leading_word(poly) == w:
            seen.add(gen)
            recs.append(LeadClass(tag, gen))

    if len(content) >= 2 and isinstance(content[-1], Bracket):
        head = content[:-1]
        v = content[-1].content
        for i in _raise_positions(a, head):
            eps = any(isinstance(x, Bracket) for x in head[i + 1:])
            consider(LeadTag.EPSILON if eps else LeadTag.CASE1_PHI1,
                     GenKind.PHI1, Word(_lowered(head, i)), v)
    if len(content) >= 2 and isinstance(content[0], Bracket):
        u = content[0].content
        rest = content[1:]
        for i in _raise_positions(a, rest):
            eps = any(isinstance(x, Bracket) for x in rest[i + 1:])
            consider(LeadTag.EPSILON if eps else LeadTag.CASE1_PHI2,
                     GenKind.PHI2, u, Word(_lowered(rest, i)))
    for k in range(1, len(content) + 1):
        u = Word(content[:k])
        if _saturated_alternating(a, u):
            consider(LeadTag.CASE2_PHI1, GenKind.PHI1, u, Word(content[k:]))
    for k in range(len(content)):
        v = Word(content[k:])
        if _saturated_alternating(a, v):
            consider(LeadTag.CASE2_PHI2, GenKind.PHI2, Word(content[:k]), v)
    return tuple(recs)


def is_epsilon(a: Alphabet, w: Word) -> bool:
    """Truncation-artifact lead: matched by a saturated-run pattern.

    Such words disappear from the lead set as the truncation order grows;
    every one of them contains a maximal-order letter run.
    """
    return any(r.tag in _EPSILON_TAGS for r in match_leading(a, w))


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def substitute_poly(a: Alphabet, q: StarContext, p: Word | Poly) -> Poly:
    """red-normalized substitution of a polynomial into a one-hole context.

    A derivative power at the hole is applied to the argument first; then
    each monomial is spliced and projected back onto the RBWord basis.
    """
    from .terms import subst

    p = as_poly(p)
    if q.hole_deriv:
        p = derive_power(a, p, q.hole_deriv)
    out = Poly()
    for m, c in p.terms.items():
        out = out + red(subst(q.body, m)).scale(c)
    return out


@lru_cache(maxsize=None)
def find_reductions(a: Alphabet, w: Word) -> tuple[tuple[Placement, Generator], ...]:
    """All normal rule occurrences in w, outermost-leftmost, tag priority."""
    hits: list[tuple[Placement, Generator]] = []
    for _, pl in placements_with_addresses(w):
        sub = pl.subword
        if len(sub.atoms) != 1 or not isinstance(sub.atoms[0], Bracket):
            continue  # every generator's leading monomial is a single bracket
        recs = match_leading(a, sub)
        for rec in sorted(recs, key=lambda r: _TAG_PRIORITY[r.tag]):
            if is_normal(a, pl.context, rec.gen.expand(a)):
                hits.append((pl, rec.gen))
    return tuple(hits)


def find_reduction(a: Alphabet, w: Word) -> Optional[tuple[Placement, Generator]]:
    hits = find_reductions(a, w)
    return hits[0] if hits else None


def is_irreducible(a: Alphabet, w: Word) -> bool:
    return find_reduction(a, w) is None


@dataclass(frozen=True, slots=True)
class ReductionStep:
    index: int
    monomial: Word
    coefficient: LambdaPoly
    placement: Placement
    generator: Generator
    becomes: Poly  # what the reduced monomial is rewritten to

    def text(self, a: Alphabet) -> str:
        return (f"step {self.index}: {self.generator.label(a)} at "
                f"{textio.render_word(a, self.placement.context.body)} reduces "
                f"{textio.render_word(a, self.monomial)} -> "
                f"{textio.render_poly(a, self.becomes)}")

    def json_obj(self, a: Alphabet) -> dict:
        return {
            "index": self.index,
            "monomial": textio.render_word(a, self.monomial),
            "coefficient": self.coefficient.render(),
            "context": textio.render_word(a, self.placement.context.body),
            "generator": {
                "kind": self.generator.kind.value,
                "u": textio.render_word(a, self.generator.u),
                "v": textio.render_word(a, self.generator.v),
            },
            "becomes": textio.poly_json_obj(a, self.becomes)["poly"],
        }


@dataclass(frozen=True, slots=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    result: Poly

    def to_text(self, a: Alphabet) -> str:
        lines = [s.text(a) for s in self.steps]
        lines.append(f"normal form: {textio.render_poly(a, self.result)}")
        return "\n".join(lines)

    def to_json_obj(self, a: Alphabet) -> dict:
        return {"steps": [s.json_obj(a) for s in self.steps],
                "result": textio.poly_json_obj(a, self.result)["poly"]}


NF_STRATEGIES = ("greatest-first", "smallest-last", "random")


def _pick(a: Alphabet, work: Poly, strategy: str,
          rng: Optional[random.Random]) -> Optional[tuple[Word, Placement, Generator]]:
    reducible = [m for m in work.terms if find_reductions(a, m)]
    if not reducible:
        return None
    if strategy == "greatest-first":
        m = max(reducible, key=sort_key)
        pl, gen = find_reductions(a, m)[0]
    elif strategy == "smallest-last":
        m = min(reducible, key=sort_key)
        pl, gen = find_reductions(a, m)[-1]
    elif strategy == "random":
        if rng is None:
            rng = random.Random(0)
        m = rng.choice(sorted(reducible, key=sort_key))
        pl, gen = rng.choice(find_reductions(a, m))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return m, pl, gen


def normal_form(a: Alphabet, p: Word | Poly, *, strategy: str = "greatest-first",
                rng: Optional[random.Random] = None, trace: bool = False):
    """Canonical representative modulo the relation ideal.

    Repeatedly rewrites a reducible monomial m (picked per ``strategy``) by a
    matching rule occurrence; the substituted rule has leading term m with
    coefficient one, so m is cancelled exactly and only smaller monomials
    appear.  All strategies reach the same fixpoint, whose support consists
    of irreducible words.

    Returns the normal form, or (normal form, ReductionTrace) with ``trace``.
    """
    work = as_poly(p)
    steps: list[ReductionStep] = []
    while True:
        picked = _pick(a, work, strategy, rng)
        if picked is None:
            break
        m, pl, gen = picked
        c = work.terms[m]
        repl = substitute_poly(a, pl.context, gen.expand(a))
        lc, lw = leading(repl)
        assert lw == m and lc == ONE, "reduction must cancel its target exactly"
        work = work - repl.scale(c)
        if trace:
            steps.append(ReductionStep(len(steps) + 1, m, c, pl, gen,
                                       Poly.mono(m) - repl))
    if trace:
        return work, ReductionTrace(tuple(steps), work)
    return work


class InconclusiveReduction(Exception):
    """Raised when a bounded reduction runs out of budget before settling."""


def is_trivial_mod(a: Alphabet, p: Word | Poly, w: Optional[Word] = None,
                   budget: int = 10000) -> bool:
    """Decide congruence to zero using only steps strictly below w.

    A reduction step rewrites exactly its target monomial, so constraining
    steps below w is the same as requiring the whole support to stay below w.
    With ``w=None`` the reduction is unbounded (plain ideal membership).
    Budget exhaustion raises InconclusiveReduction rather than answering.
    """
    work = as_poly(p)
    steps = 0
    while True:
        if w is not None and any(cmp_word(m, w) >= 0 for m in work.terms):
            return False
        picked = _pick(a, work, "greatest-first", None)
        if picked is None:
            return work.is_zero()
        steps += 1
        if steps > budget:
            raise InconclusiveReduction(f"no fixpoint within {budget} steps")
        m, pl, gen = picked
        work = work - substitute_poly(a, pl.context, gen.expand(a)).scale(work.terms[m])


# ---------------------------------------------------------------------------
# canonical basis
# ---------------------------------------------------------------------------

def is_functional_monomial(w: Word) -> bool:
    """Canonical-basis shape test, applied to every bracket content c:

    * if c ends with a bracket (and has other factors), the letter just
      before that bracket is underived;
    * if c starts with a bracket and ends with a letter, that trailing
      letter is underived.

    Positions outside brackets are unconstrained.
    """
    for at in w.atoms:
        if isinstance(at, Bracket):
            c = at.content.atoms
            if len(c) >= 2:
                if isinstance(c[-1], Bracket):
                    before = c[-2]
                    if not (isinstance(before, Letter) and before.deriv == 0):
                        return False
                elif isinstance(c[0], Bracket):
                    if c[-1].deriv != 0:
                        return False
            if not is_functional_monomial(at.content):
                return False
    return True


def has_epsilon_occurrence(a: Alphabet, w: Word) -> bool:
    """Does any subword of w lie in the truncation-artifact lead set?"""
    return any(
        is_epsilon(a, pl.subword)
        for _, pl in placements_with_addresses(w)
        if len(pl.subword.atoms) == 1 and isinstance(pl.subword.atoms[0], Bracket)
    )


def irr_by_characterization(a: Alphabet, w: Word) -> bool:
    """Irreducibility via the basis characterization, not via reduction."""
    return is_functional_monomial(w) and not has_epsilon_occurrence(a, w)


def enumerate_irr(a: Alphabet, max_size: int) -> tuple[Word, ...]:
    """All irreducible words with deg_total <= max_size, ascending."""
    from .terms import enumerate_rbwords

    return tuple(w for w in enumerate_rbwords(a, max_size) if is_irreducible(a, w))


# ---------------------------------------------------------------------------
# compositions (critical pairs)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Composition:
    kind: str  # "intersection" | "inclusion"
    ambiguity: Word
    poly: Poly
    context: Optional[StarContext] = None      # inclusion
    pair: Optional[tuple[Word, Word]] = None   # intersection (u, v)


def compositions(a: Alphabet, f: Generator, g: Generator) -> tuple[Composition, ...]:
    """All intersection and inclusion compositions of two generators.

    Intersection pairs need a proper overlap of the leading words' standard
    forms (impossible here: all leading words are single brackets, so the
    scan below finds none; it is kept general for the verification harness).
    Inclusion compositions come from occurrences of one leading word inside
    the other.
    """
    from .terms import Word as _W, is_rbword

    fp, gp = f.expand(a), g.expand(a)
    if fp.is_zero() or gp.is_zero():
        return ()
    fbar, gbar = leading_word(fp), leading_word(gp)
    out: list[Composition] = []

    fa, ga = fbar.atoms, gbar.atoms
    for o in range(1, min(len(fa), len(ga))):
        # w = fbar u = v gbar
        if fa[len(fa) - o:] == ga[:o]:
            w = _W(fa + ga[o:])
            if is_rbword(w):
                u, v = _W(ga[o:]), _W(fa[:len(fa) - o])
                out.append(Composition("intersection", w,
                                       diamond(fp, u) - diamond(v, gp),
                                       pair=(u, v)))
        # w = u fbar = gbar v
        if ga[len(ga) - o:] == fa[:o]:
            w = _W(ga + fa[o:])
            if is_rbword(w):
                u, v = _W(ga[:len(ga) - o]), _W(fa[o:])
                out.append(Composition("intersection", w,
                                       diamond(u, fp) - diamond(gp, v),
                                       pair=(u, v)))

    for _, pl in placements_with_addresses(fbar):
        if pl.subword == gbar and is_normal(a, pl.context, gp):
            out.append(Composition("inclusion", fbar,
                                   fp - substitute_poly(a, pl.context, gp),
                                   context=pl.context))
    return tuple(out)


def clear_gs_caches() -> None:
    phi1.cache_clear()
    phi2.cache_clear()
    match_leading.cache_clear()
    find_reductions.cache_clear()
