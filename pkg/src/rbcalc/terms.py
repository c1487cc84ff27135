"""Term model: bracketed words over a truncated differential alphabet.

A word is a flat sequence of atoms, each atom being a letter x^(k) or a
bracket P[...] wrapping another word.  This sequence is exactly the standard
form into indecomposable factors: breadth is its length, letter runs are
maximal stretches of letter atoms, and the unit 1 is the empty sequence.

Rota-Baxter words (RBWords) are the alternation-valid subset: no two adjacent
bracket atoms at any nesting level.  General words (with adjacent brackets
allowed) arise as intermediate values of substitution and of the Rota-Baxter
rewriting and are eliminated by ``rb_engine.red``.

One-hole contexts (``StarContext``) are words over the alphabet extended by a
hole letter; a derivative power may act at the hole (``hole_deriv >= 1``, a
"type I" context).  A ``Placement`` locates one occurrence of a subword as a
contiguous atom span at some nesting level.

Everything here is immutable and hashable; enumeration helpers are cached.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

from .coeff import ONE, LambdaPoly, Scalar


class Letter(NamedTuple):
    sym: int    # index into Alphabet.symbols; negative values are hole sentinels
    deriv: int  # derivative order, 0 <= deriv <= Alphabet.order_n


@dataclass(frozen=True, slots=True)
class Bracket:
    content: "Word"


Atom = Union[Letter, Bracket]


@dataclass(frozen=True, slots=True)
class Word:
    atoms: tuple[Atom, ...] = ()

    def is_unit(self) -> bool:
        return not self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        return f"Word<{debug_str(self)}>"


EMPTY = Word()

# Hole sentinels for one- and two-hole contexts.
HOLE = Letter(-1, 0)
HOLE1 = Letter(-2, 0)
HOLE2 = Letter(-3, 0)


def letter(sym: int, deriv: int = 0) -> Word:
    return Word((Letter(sym, deriv),))


def word_of(*atoms: Atom) -> Word:
    return Word(atoms)


def bracket(w: Word) -> Word:
    """The single-atom word P[w]."""
    return Word((Bracket(w),))


def concat(*ws: Word) -> Word:
    """Raw concatenation; the result need not be an RBWord."""
    out: tuple[Atom, ...] = ()
    for w in ws:
        out += w.atoms
    return Word(out)


def debug_str(w: Word) -> str:
    """Alphabet-free rendering for repr/debugging; CLI rendering lives in textio."""
    if not w.atoms:
        return "1"
    parts = []
    for a in w.atoms:
        if isinstance(a, Letter):
            name = {HOLE.sym: "*", HOLE1.sym: "*1", HOLE2.sym: "*2"}.get(a.sym, f"#{a.sym}")
            parts.append(name + (f"^({a.deriv})" if a.deriv else ""))
        else:
            parts.append(f"P[{debug_str(a.content)}]")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# alphabet
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    """Ordered symbols plus the truncation order n of the differential alphabet."""

    symbols: tuple[str, ...]
    order_n: int

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("alphabet needs at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if self.order_n < 1:
            raise ValueError("truncation order must be >= 1")

    def letters(self) -> list[Letter]:
        """All letters x^(k), k <= order_n, in symbol-major order."""
        return [Letter(s, d) for s in range(len(self.symbols))
                for d in range(self.order_n + 1)]

    def extended(self) -> Alphabet:
        """The alphabet with one extra hole symbol appended (for contexts)."""
        return Alphabet(self.symbols + ("*",), self.order_n)


# ---------------------------------------------------------------------------
# structural statistics
# ---------------------------------------------------------------------------

class DegPair(NamedTuple):
    total: int    # letters plus brackets, all nesting levels
    p_count: int  # brackets, all nesting levels


@lru_cache(maxsize=None)
def deg(w: Word) -> DegPair:
    total = p = 0
    for a in w.atoms:
        if isinstance(a, Letter):
            total += 1
        else:
            inner = deg(a.content)
            total += 1 + inner.total
            p += 1 + inner.p_count
    return DegPair(total, p)


def breadth(w: Word) -> int:
    """Number of indecomposable factors in the standard form (0 for the unit)."""
    return len(w.atoms)


@lru_cache(maxsize=None)
def depth(w: Word) -> int:
    """Maximal bracket-nesting depth."""
    return max((1 + depth(a.content) for a in w.atoms if isinstance(a, Bracket)),
               default=0)


@lru_cache(maxsize=None)
def is_rbword(w: Word) -> bool:
    """Alternation check: no adjacent brackets at any level, no hole atoms."""
    prev_bracket = False
    for a in w.atoms:
        if isinstance(a, Bracket):
            if prev_bracket or not is_rbword(a.content):
                return False
            prev_bracket = True
        else:
            if a.sym < 0:
                return False
            prev_bracket = False
    return True


# ---------------------------------------------------------------------------
# polynomials: finitely supported maps Word -> LambdaPoly
# ---------------------------------------------------------------------------

class Poly:
    """Finite Q[lam]-linear combination of words; zero coefficients dropped."""

    __slots__ = ("terms",)

    terms: dict[Word, LambdaPoly]

    def __init__(self, terms: Mapping[Word, LambdaPoly] | Iterable[tuple[Word, LambdaPoly]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, LambdaPoly] = {}
        for w, c in items:
            c = LambdaPoly.coerce(c)
            if w in acc:
                c = acc[w] + c
            if c:
                acc[w] = c
            else:
                acc.pop(w, None)
        object.__setattr__(self, "terms", acc)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Poly is immutable")

    @classmethod
    def mono(cls, w: Word, c: Scalar = ONE) -> Poly:
        return cls(((w, LambdaPoly.coerce(c)),))

    @classmethod
    def zero(cls) -> Poly:
        return cls()

    @classmethod
    def unit(cls) -> Poly:
        return cls.mono(EMPTY)

    def __add__(self, other: Poly) -> Poly:
        acc = dict(self.terms)
        for w, c in other.terms.items():
            s = acc.get(w)
            s = c if s is None else s + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        out = Poly()
        object.__setattr__(out, "terms", acc)
        return out

    def __neg__(self) -> Poly:
        return self.scale(-1)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c: Scalar) -> Poly:
        c = LambdaPoly.coerce(c)
        if not c:
            return Poly()
        out = Poly()
        object.__setattr__(out, "terms", {w: k * c for w, k in self.terms.items()})
        return out

    def coeff(self, w: Word) -> LambdaPoly:
        return self.terms.get(w, LambdaPoly())

    def support(self) -> frozenset[Word]:
        return frozenset(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly<0>"
        bits = " + ".join(f"({c.render()})·{debug_str(w)}" for w, c in self.terms.items())
        return f"Poly<{bits}>"


# ---------------------------------------------------------------------------
# one-hole contexts, substitution, placements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class StarContext:
    """A word with exactly one hole; hole_deriv >= 1 marks a type I context."""

    body: Word
    hole_deriv: int = 0

    @property
    def is_type_one(self) -> bool:
        return self.hole_deriv >= 1


@dataclass(frozen=True, slots=True)
class Placement:
    """One occurrence of ``subword`` in an ambient word, as a plain context."""

    subword: Word
    context: StarContext


Path = tuple[int, ...]
Address = tuple[Path, int, int]  # (bracket path, span start, span end)


def hole_address(w: Word, hole: Letter = HOLE) -> Optional[tuple[Path, int]]:
    """Path and atom index of the unique hole letter, or None."""
    for i, a in enumerate(w.atoms):
        if a == hole:
            return (), i
        if isinstance(a, Bracket):
            found = hole_address(a.content, hole)
            if found is not None:
                path, idx = found
                return (i,) + path, idx
    return None


def replace_span(w: Word, path: Path, start: int, end: int,
                 new_atoms: tuple[Atom, ...]) -> Word:
    """Rebuild ``w`` with atoms[start:end] at ``path`` replaced by ``new_atoms``."""
    if not path:
        return Word(w.atoms[:start] + new_atoms + w.atoms[end:])
    i = path[0]
    inner = w.atoms[i]
    assert isinstance(inner, Bracket)
    rebuilt = Bracket(replace_span(inner.content, path[1:], start, end, new_atoms))
    return Word(w.atoms[:i] + (rebuilt,) + w.atoms[i + 1:])


def subst(q: StarContext | Word, u: Word) -> Word:
    """Splice ``u`` into the hole of a plain (type II) context.

    The result is a general bracketed word: substituting a word that starts or
    ends with a bracket next to a neighbouring bracket breaks alternation, and
    substituting the unit can make two brackets adjacent.  Type I contexts are
    handled by gs.substitute_poly, which applies the derivative first.
    """
    if isinstance(q, StarContext):
        if q.hole_deriv:
            raise ValueError("type I context: apply the hole derivative first")
        body = q.body
    else:
        body = q
    found = hole_address(body)
    if found is None:
        raise ValueError("context has no hole")
    path, idx = found
    return replace_span(body, path, idx, idx + 1, u.atoms)


def dep_star(q: StarContext) -> int:
    """Bracket-nesting depth of the hole."""
    found = hole_address(q.body)
    if found is None:
        raise ValueError("context has no hole")
    return len(found[0])


def _spans(w: Word, path: Path) -> Iterator[tuple[Address, Placement]]:
    n = len(w.atoms)
    for start in range(n):
        for end in range(start + 1, n + 1):
            sub = Word(w.atoms[start:end])
            body = replace_span(w, path, start, end, (HOLE,))
            yield (path, start, end), Placement(sub, StarContext(body))
    for i, a in enumerate(w.atoms):
        if isinstance(a, Bracket):
            yield from _descend(a.content, path + (i,), w)


def _descend(inner: Word, path: Path, root: Word) -> Iterator[tuple[Address, Placement]]:
    n = len(inner.atoms)
    for start in range(n):
        for end in range(start + 1, n + 1):
            sub = Word(inner.atoms[start:end])
            body = replace_span(root, path, start, end, (HOLE,))
            yield (path, start, end), Placement(sub, StarContext(body))
    for i, a in enumerate(inner.atoms):
        if isinstance(a, Bracket):
            yield from _descend(a.content, path + (i,), root)


@lru_cache(maxsize=None)
def placements_with_addresses(w: Word) -> tuple[tuple[Address, Placement], ...]:
    found = list(_spans(w, ()))
    found.sort(key=lambda t: (len(t[0][0]), t[0]))
    return tuple(found)


def placements(w: Word) -> tuple[Placement, ...]:
    """All (subword, context) pairs, outermost first, then leftmost."""
    return tuple(p for _, p in placements_with_addresses(w))


class Relation(enum.Enum):
    SEPARATED = "separated"
    NESTED = "nested"
    INTERSECTING = "intersecting"


def _address_of(p: Placement, w: Word) -> Address:
    found = hole_address(p.context.body)
    if found is None:
        raise ValueError("placement context has no hole")
    path, idx = found
    return path, idx, idx + len(p.subword.atoms)


def classify_pair(p1: Placement, p2: Placement, w: Word) -> Relation:
    """Trichotomy for two placements in the same ambient word.

    Same level: disjoint spans are separated, containment is nested, genuine
    overlap is intersecting.  Different levels: a placement descending into a
    bracket that lies inside the other's span is nested, otherwise the two
    sit in independent branches and are separated.
    """
    for p in (p1, p2):
        if subst(p.context, p.subword) != w:
            raise ValueError("placement does not reconstruct the ambient word")
    (path1, s1, e1) = _address_of(p1, w)
    (path2, s2, e2) = _address_of(p2, w)
    if path1 == path2:
        if e1 <= s2 or e2 <= s1:
            return Relation.SEPARATED
        if (s1 <= s2 and e2 <= e1) or (s2 <= s1 and e1 <= e2):
            return Relation.NESTED
        return Relation.INTERSECTING
    if path1 == path2[:len(path1)]:
        return Relation.NESTED if s1 <= path2[len(path1)] < e1 else Relation.SEPARATED
    if path2 == path1[:len(path2)]:
        return Relation.NESTED if s2 <= path1[len(path2)] < e2 else Relation.SEPARATED
    return Relation.SEPARATED


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _rb_seqs(a: Alphabet, budget: int, after_bracket: bool) -> tuple[tuple[Atom, ...], ...]:
    """All alternation-valid atom sequences of deg_total <= budget."""
    out: list[tuple[Atom, ...]] = [()]
    if budget >= 1:
        for lt in a.letters():
            for rest in _rb_seqs(a, budget - 1, False):
                out.append((lt,) + rest)
        if not after_bracket:
            for inner in _rb_seqs(a, budget - 1, False):
                cost = 1 + deg(Word(inner)).total
                if cost <= budget:
                    for rest in _rb_seqs(a, budget - cost, True):
                        out.append((Bracket(Word(inner)),) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_rbwords(a: Alphabet, max_size: int) -> tuple[Word, ...]:
    """All RBWords with deg_total <= max_size, ascending in the word order."""
    from .ordering import sort_key  # local import: ordering depends on terms

    words = [Word(seq) for seq in _rb_seqs(a, max_size, False)]
    words.sort(key=sort_key)
    return tuple(words)


@lru_cache(maxsize=None)
def enumerate_contexts(a: Alphabet, max_size: int,
                       type_one: Optional[bool] = None) -> tuple[StarContext, ...]:
    """One-hole contexts of deg_total <= max_size (the hole counts once).

    ``type_one=True`` keeps only contexts with a derivative acting at the
    hole, ``False`` only plain ones, ``None`` both.
    """
    ext = a.extended()
    star_sym = len(a.symbols)
    out: list[StarContext] = []
    for seq in _rb_seqs(ext, max_size, False):
        stars = [at for at in _flat_letters(seq) if at.sym == star_sym]
        if len(stars) != 1:
            continue
        ell = stars[0].deriv
        if type_one is True and ell == 0:
            continue
        if type_one is False and ell != 0:
            continue
        body = _substitute_letter(Word(seq), Letter(star_sym, ell), HOLE)
        out.append(StarContext(body, ell))
    return tuple(out)


def _flat_letters(seq: tuple[Atom, ...]) -> Iterator[Letter]:
    for at in seq:
        if isinstance(at, Letter):
            yield at
        else:
            yield from _flat_letters(at.content.atoms)


def _substitute_letter(w: Word, old: Letter, new: Letter) -> Word:
    atoms: list[Atom] = []
    for at in w.atoms:
        if at == old:
            atoms.append(new)
        elif isinstance(at, Bracket):
            atoms.append(Bracket(_substitute_letter(at.content, old, new)))
        else:
            atoms.append(at)
    return Word(tuple(atoms))


@lru_cache(maxsize=None)
def _free_seqs(a: Alphabet, budget: int) -> tuple[tuple[Atom, ...], ...]:
    """Atom sequences without the alternation constraint (free bracketed words)."""
    out: list[tuple[Atom, ...]] = [()]
    if budget >= 1:
        for lt in a.letters():
            for rest in _free_seqs(a, budget - 1):
                out.append((lt,) + rest)
        for inner in _free_seqs(a, budget - 1):
            cost = 1 + deg(Word(inner)).total
            if cost <= budget:
                for rest in _free_seqs(a, budget - cost):
                    out.append((Bracket(Word(inner)),) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_bracketed(a: Alphabet, max_size: int, max_brackets: int) -> tuple[Word, ...]:
    """General bracketed words (adjacent brackets allowed) within bounds."""
    out = []
    for seq in _free_seqs(a, max_size):
        w = Word(seq)
        if deg(w).p_count <= max_brackets:
            out.append(w)
    return tuple(out)


def clear_term_caches() -> None:
    for fn in (deg, depth, is_rbword, placements_with_addresses,
               _rb_seqs, enumerate_rbwords, enumerate_contexts,
               _free_seqs, enumerate_bracketed):
        fn.cache_clear()
