"""Enumerative verification harness.

Each check certifies, at desk scale, one cluster of facts the reduction
engine relies on: the defining operator axioms, the well order and its weak
monomiality, the critical-pair facts behind confluence of the reduction, and
the canonical-basis characterization with its truncation-order compatibility.

Checks are exhaustive below the given size bound and seeded-random above it;
a report records the bounds, the seed, per-item instance counts, and every
counterexample in rendered form, so a failing report is directly actionable.
Engine entry points are resolved through their modules at call time, which
lets the test suite fault-inject broken variants and confirm each check
actually has teeth.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .coeff import LAM, LambdaPoly
from . import gs as _gs
from . import ordering as _ord
from . import rb_engine as _rb
from . import terms as _terms
from . import textio as _io
from .terms import Alphabet, Bracket, Letter, Poly, StarContext, Word, bracket


@dataclass
class VerificationReport:
    check: str
    alphabet: tuple[str, ...]
    order_n: int
    max_size: int
    seed: Optional[int]
    counts: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    millis: float = 0.0

    @property
    def instances(self) -> int:
        return sum(self.counts.values())

    @property
    def passed(self) -> bool:
        return not self.failures

    def count(self, item: str, k: int = 1) -> None:
        self.counts[item] = self.counts.get(item, 0) + k

    def fail(self, item: str, detail: str) -> None:
        self.failures.append(f"{item}: {detail}")

    def to_text(self) -> str:
        lines = [
            f"check: {self.check}",
            f"alphabet: {','.join(self.alphabet)}  order n: {self.order_n}  "
            f"max size: {self.max_size}  seed: {self.seed if self.seed is not None else '-'}",
            f"instances: {self.instances} ("
            + ", ".join(f"{k} {v}" for k, v in sorted(self.counts.items())) + ")",
        ]
        if self.failures:
            lines.append(f"FAILURES ({len(self.failures)}):")
            lines.extend(f"  {f}" for f in self.failures)
        else:
            lines.append("failures: none")
        lines.append(f"time: {self.millis:.0f} ms")
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "check": self.check,
            "alphabet": list(self.alphabet),
            "order_n": self.order_n,
            "max_size": self.max_size,
            "seed": self.seed,
            "instances": self.instances,
            "counts": self.counts,
            "failures": self.failures,
            "passed": self.passed,
            "millis": round(self.millis, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)


def _timed(fn: Callable[[VerificationReport], None],
           report: VerificationReport) -> VerificationReport:
    start = time.perf_counter()
    fn(report)
    report.millis = (time.perf_counter() - start) * 1000.0
    return report


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

def check_axioms(a: Alphabet, max_size: int,
                 seed: Optional[int] = None) -> VerificationReport:
    """Leibniz, Rota-Baxter, section, and product associativity, exhaustively."""
    report = VerificationReport("axioms", a.symbols, a.order_n, max_size, seed)

    def run(rep: VerificationReport) -> None:
        words = _terms.enumerate_rbwords(a, max_size)
        pair_words = words
        for u in pair_words:
            for v in pair_words:
                pu, pv = bracket(u), bracket(v)
                lhs = _rb.diamond(pu, pv)
                rhs = (_rb.integral(_rb.diamond(u, pv))
                       + _rb.integral(_rb.diamond(pu, v))
                       + _rb.integral(_rb.diamond(u, v)).scale(LAM))
                rep.count("rota_baxter")
                if lhs != rhs:
                    rep.fail("rota_baxter", f"u={_io.render_word(a, u)} v={_io.render_word(a, v)}")
                du, dv = _rb.derive(a, u), _rb.derive(a, v)
                lhs = _rb.derive(a, _rb.diamond(u, v))
                rhs = (_rb.diamond(du, v) + _rb.diamond(u, dv)
                       + _rb.diamond(du, dv).scale(LAM))
                rep.count("leibniz")
                if lhs != rhs:
                    rep.fail("leibniz", f"u={_io.render_word(a, u)} v={_io.render_word(a, v)}")
        for u in words:
            rep.count("section")
            if _rb.derive(a, bracket(u)) != Poly.mono(u):
                rep.fail("section", f"u={_io.render_word(a, u)}")
        for u in words:
            for v in words:
                for w in words:
                    rep.count("assoc")
                    if (_rb.diamond(_rb.diamond(u, v), w)
                            != _rb.diamond(u, _rb.diamond(v, w))):
                        rep.fail("assoc",
                                 f"u={_io.render_word(a, u)} v={_io.render_word(a, v)} "
                                 f"w={_io.render_word(a, w)}")

    return _timed(run, report)


def check_red_confluence(a: Alphabet, max_size: int, max_brackets: int = 3,
                         seed: Optional[int] = 0) -> VerificationReport:
    """All rewrite strategies agree on every small bracketed word."""
    report = VerificationReport("red-confluence", a.symbols, a.order_n, max_size, seed)

    def run(rep: VerificationReport) -> None:
        rng = random.Random(seed)
        for t in _terms.enumerate_bracketed(a, max_size, max_brackets):
            rep.count("terms")
            base = _rb.red(t, strategy="innermost")
            if _rb.red(t, strategy="outermost") != base:
                rep.fail("outermost", _terms.debug_str(t))
            if _rb.red(t, strategy="random", rng=rng) != base:
                rep.fail("random", _terms.debug_str(t))
            if not all(_terms.is_rbword(w) for w in base.terms):
                rep.fail("image", _terms.debug_str(t))

    return _timed(run, report)


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------

def check_order(a: Alphabet, max_size: int,
                seed: Optional[int] = None) -> VerificationReport:
    """Totality and transitivity, product/context monotonicity, normality."""
    report = VerificationReport("order", a.symbols, a.order_n, max_size, seed)

    def run(rep: VerificationReport) -> None:
        words = _terms.enumerate_rbwords(a, max_size)
        small = _terms.enumerate_rbwords(a, min(2, max_size))

        for u in words:
            for v in words:
                c1, c2 = _ord.cmp_word(u, v), _ord.cmp_word(v, u)
                rep.count("totality")
                if c1 != -c2 or ((c1 == 0) != (u == v)):
                    rep.fail("totality",
                             f"{_io.render_word(a, u)} vs {_io.render_word(a, v)}")
        for u in words:
            for v in words:
                if _ord.cmp_word(u, v) > 0:
                    continue
                for w in words:
                    if _ord.cmp_word(v, w) <= 0:
                        rep.count("transitivity")
                        if _ord.cmp_word(u, w) > 0:
                            rep.fail("transitivity",
                                     f"{_io.render_word(a, u)} <= {_io.render_word(a, v)}"
                                     f" <= {_io.render_word(a, w)}")
        seen = set()
        prev = None
        for w in words:
            rep.count("enumeration")
            if w in seen or (prev is not None and _ord.cmp_word(prev, w) >= 0):
                rep.fail("enumeration", _io.render_word(a, w))
            seen.add(w)
            prev = w

        # product monotonicity: u < v stays strict after multiplying by w
        for u in small:
            for v in small:
                if _ord.cmp_word(u, v) >= 0:
                    continue
                for w in small:
                    rep.count("mul_monotone")
                    lr = _ord.cmp_word(_ord.leading_word(_rb.diamond(u, w)),
                                       _ord.leading_word(_rb.diamond(v, w)))
                    rl = _ord.cmp_word(_ord.leading_word(_rb.diamond(w, u)),
                                       _ord.leading_word(_rb.diamond(w, v)))
                    if lr >= 0 or rl >= 0:
                        rep.fail("mul_monotone",
                                 f"u={_io.render_word(a, u)} v={_io.render_word(a, v)} "
                                 f"w={_io.render_word(a, w)}")

        # normality of a bare derivative hole: single letters of low order only
        for ell in range(1, a.order_n + 1):
            hole = StarContext(Word((_terms.HOLE,)), ell)
            for s in small:
                rep.count("deriv_normality")
                expected = (len(s.atoms) == 1 and isinstance(s.atoms[0], Letter)
                            and s.atoms[0].deriv <= a.order_n - ell)
                if _ord.is_normal(a, hole, s) != expected:
                    rep.fail("deriv_normality",
                             f"ell={ell} s={_io.render_word(a, s)}")

        # derivative monotonicity on letters, gated by normality
        letters = [Word((lt,)) for lt in a.letters()]
        for ell in range(1, a.order_n + 1):
            for u in letters:
                for v in letters:
                    if _ord.cmp_word(u, v) >= 0:
                        continue
                    if u.atoms[0].deriv + ell > a.order_n:
                        rep.count("deriv_monotone_vacuous")
                        continue
                    if v.atoms[0].deriv + ell > a.order_n:
                        continue
                    rep.count("deriv_monotone")
                    du = _rb.derive_power(a, u, ell)
                    dv = _rb.derive_power(a, v, ell)
                    if _ord.cmp_word(_ord.leading_word(du), _ord.leading_word(dv)) >= 0:
                        rep.fail("deriv_monotone",
                                 f"ell={ell} u={_io.render_word(a, u)} v={_io.render_word(a, v)}")

        # weak monomiality across contexts
        ctx_bound = min(3, max_size)
        for q in _terms.enumerate_contexts(a, ctx_bound):
            for u in small:
                for v in small:
                    if _ord.cmp_word(u, v) >= 0:
                        continue
                    if q.hole_deriv:
                        if not _ord.is_normal(a, q, v):
                            rep.count("weak_monomial_gated")
                            continue
                        qu = _gs.substitute_poly(a, q, u)
                        if qu.is_zero():
                            rep.count("weak_monomial_vacuous")
                            continue
                        qv = _gs.substitute_poly(a, q, v)
                        rep.count("weak_monomial_I")
                        item = "weak_monomial_I"
                    else:
                        qu = _gs.substitute_poly(a, q, u)
                        qv = _gs.substitute_poly(a, q, v)
                        rep.count("weak_monomial_II")
                        item = "weak_monomial_II"
                    if _ord.cmp_word(_ord.leading_word(qu), _ord.leading_word(qv)) >= 0:
                        rep.fail(item,
                                 f"q={_terms.debug_str(q.body)}^{q.hole_deriv} "
                                 f"u={_io.render_word(a, u)} v={_io.render_word(a, v)}")

        # leading term of a normal substitution is the substituted leading term
        polys = []
        for i, u in enumerate(small):
            for v in small[:i]:
                polys.append(Poly.mono(u) + Poly.mono(v))
                polys.append(Poly.mono(u) + Poly.mono(v).scale(LAM))
        for q in _terms.enumerate_contexts(a, ctx_bound):
            for s in polys:
                if not _ord.is_normal(a, q, s):
                    continue
                rep.count("normal_leading")
                lead = _ord.leading_word(s)
                if q.hole_deriv:
                    image = _gs.substitute_poly(a, q, Poly.mono(lead))
                    expected = _ord.leading_word(image) if image else None
                else:
                    expected = _terms.subst(q.body, lead)
                got = _gs.substitute_poly(a, q, s)
                if got.is_zero() or expected is None \
                        or _ord.leading_word(got) != expected:
                    rep.fail("normal_leading",
                             f"q={_terms.debug_str(q.body)}^{q.hole_deriv} s={s!r}")

    return _timed(run, report)


# ---------------------------------------------------------------------------
# composition-diamond facts
# ---------------------------------------------------------------------------

def _all_generators(a: Alphabet, arg_size: int) -> list[_gs.Generator]:
    words = _terms.enumerate_rbwords(a, arg_size)
    gens = []
    for kind in _gs.GenKind:
        for u in words:
            for v in words:
                g = _gs.Generator(kind, u, v)
                if g.expand(a):
                    gens.append(g)
    return gens


def _random_context(a: Alphabet, rng: random.Random, max_size: int) -> StarContext:
    ctxs = _terms.enumerate_contexts(a, max_size, type_one=False)
    return rng.choice(ctxs)


def _random_ideal_element(a: Alphabet, rng: random.Random, gens,
                          ctx_size: int, parts: int = 2) -> Poly:
    out = Poly()
    for _ in range(rng.randint(1, parts)):
        q = _random_context(a, rng, ctx_size)
        g = rng.choice(gens)
        c = LambdaPoly((rng.randint(-2, 2), rng.randint(-1, 1)))
        if not c:
            c = LambdaPoly.const(1)
        out = out + _gs.substitute_poly(a, q, g.expand(a)).scale(c)
    return out


def check_cd(a: Alphabet, max_size: int, seed: Optional[int] = 7,
             trials: int = 200) -> VerificationReport:
    """Critical-pair triviality and the diamond consequences of completeness.

    ``max_size`` bounds generator arguments; contexts go one size larger.
    """
    report = VerificationReport("cd", a.symbols, a.order_n, max_size, seed)

    def run(rep: VerificationReport) -> None:
        rng = random.Random(seed)
        gens = _all_generators(a, max_size)
        ctx_size = max_size + 1

        # no intersection compositions: all leading words have breadth one
        leads = sorted({_ord.leading_word(g.expand(a)) for g in gens},
                       key=_ord.sort_key)
        for fbar in leads:
            for gbar in leads:
                rep.count("no_intersection")
                fa, ga = fbar.atoms, gbar.atoms
                for o in range(1, min(len(fa), len(ga))):
                    if fa[len(fa) - o:] == ga[:o] or ga[len(ga) - o:] == fa[:o]:
                        rep.fail("no_intersection",
                                 f"{_io.render_word(a, fbar)} / {_io.render_word(a, gbar)}")

        # right-multiplication identity:
        # phi1(u,v) P[w] = P[phi1(u,v) w] + phi1(u, P[v] w) + phi1(u, v P[w])
        #                  + lam phi1(u, v w)
        words = _terms.enumerate_rbwords(a, max_size)
        for u in words:
            for v in words:
                for w in words:
                    rep.count("mul_identity")
                    f = _gs.phi1(a, u, v)
                    lhs = _rb.diamond(f, bracket(w))
                    rhs = (_rb.integral(_rb.diamond(f, w))
                           + _gs.phi1_poly(a, u, _rb.diamond(bracket(v), w))
                           + _gs.phi1_poly(a, u, _rb.diamond(v, bracket(w)))
                           + _gs.phi1_poly(a, u, _rb.diamond(v, w)).scale(LAM))
                    if lhs != rhs:
                        rep.fail("mul_identity",
                                 f"u={_io.render_word(a, u)} v={_io.render_word(a, v)} "
                                 f"w={_io.render_word(a, w)}")

        # multiplication compositions reduce to zero
        for _ in range(min(trials, 50)):
            g = rng.choice(gens)
            w = rng.choice(words)
            for p in (_rb.diamond(g.expand(a), bracket(w)),
                      _rb.diamond(bracket(w), g.expand(a))):
                rep.count("mul_trivial")
                if not _gs.is_trivial_mod(a, p, None):
                    rep.fail("mul_trivial", f"{g.label(a)} * P[{_io.render_word(a, w)}]")

        # inclusion compositions are trivial below their ambiguity
        checked = 0
        for f in rng.sample(gens, min(len(gens), 60)):
            for g in rng.sample(gens, min(len(gens), 30)):
                for comp in _gs.compositions(a, f, g):
                    if comp.kind != "inclusion":
                        continue
                    rep.count("inclusion_trivial")
                    checked += 1
                    if comp.poly and not _gs.is_trivial_mod(a, comp.poly, comp.ambiguity):
                        rep.fail("inclusion_trivial",
                                 f"{f.label(a)} vs {g.label(a)}")
        if checked == 0:
            rep.fail("inclusion_trivial", "no inclusion compositions sampled")

        # ideal elements: leading monomial is reducible, normal form is zero
        for _ in range(trials):
            e = _random_ideal_element(a, rng, gens, ctx_size)
            if e.is_zero():
                rep.count("ideal_zero_sample")
                continue
            rep.count("ideal_lead_reducible")
            if _gs.find_reduction(a, _ord.leading_word(e)) is None:
                rep.fail("ideal_lead_reducible", repr(e))
            rep.count("ideal_membership")
            if _gs.normal_form(a, e):
                rep.fail("ideal_membership", repr(e))

        # irreducible combinations are already normal
        irr = _gs.enumerate_irr(a, max_size + 1)
        for _ in range(trials // 2):
            r = Poly()
            for _ in range(rng.randint(1, 3)):
                r = r + Poly.mono(rng.choice(irr),
                                  LambdaPoly((rng.randint(-2, 2), rng.randint(0, 1))))
            rep.count("irr_fixed")
            if _gs.normal_form(a, r) != r:
                rep.fail("irr_fixed", repr(r))
            e = _random_ideal_element(a, rng, gens, ctx_size, parts=1)
            rep.count("direct_sum")
            if _gs.normal_form(a, e + r) != r:
                rep.fail("direct_sum", repr(r))

    return _timed(run, report)


# ---------------------------------------------------------------------------
# basis
# ---------------------------------------------------------------------------

def check_basis(a: Alphabet, max_size: int, n_max: Optional[int] = None,
                seed: Optional[int] = None) -> VerificationReport:
    """Basis characterization, census, and truncation-order compatibility."""
    report = VerificationReport("basis", a.symbols, a.order_n, max_size, seed)
    if n_max is None:
        n_max = a.order_n + 1

    def run(rep: VerificationReport) -> None:
        for n in range(a.order_n, n_max + 1):
            an = Alphabet(a.symbols, n)
            words = _terms.enumerate_rbwords(an, max_size)
            for w in words:
                rep.count(f"characterization_n{n}")
                if _gs.is_irreducible(an, w) != _gs.irr_by_characterization(an, w):
                    rep.fail(f"characterization_n{n}", _io.render_word(an, w))
            got = census_by_filter(an, max_size)
            expect = functional_census(an, max_size)
            rep.count(f"census_n{n}", len(expect))
            if got != expect:
                rep.fail(f"census_n{n}", f"filter={got} grammar={expect}")

        for n in range(a.order_n, n_max):
            an = Alphabet(a.symbols, n)
            an1 = Alphabet(a.symbols, n + 1)
            for w in _terms.enumerate_rbwords(an, max_size):
                if not _gs.is_functional_monomial(w):
                    continue
                rep.count(f"inclusion_n{n}_to_n{n + 1}")
                if not _gs.is_irreducible(an1, w):
                    rep.fail(f"inclusion_n{n}_to_n{n + 1}", _io.render_word(an, w))
            # a saturated-run artifact lead at order n stops matching at n+1
            x = Letter(0, n)
            x0 = Letter(0, 0)
            art = bracket(Word((x, Bracket(Word((x0,))), x, Bracket(Word((x0,))))))
            rep.count("artifact_point")
            if not _gs.is_epsilon(an, art) or _gs.is_epsilon(an1, art):
                rep.fail("artifact_point", _io.render_word(an, art))

    return _timed(run, report)


def census_by_filter(a: Alphabet, max_size: int) -> list[int]:
    """Functional-monomial counts by exact size via the membership test."""
    out = [0] * (max_size + 1)
    for w in _terms.enumerate_rbwords(a, max_size):
        if _gs.is_functional_monomial(w):
            out[_terms.deg(w).total] += 1
    return out


def functional_census(a: Alphabet, max_size: int) -> list[int]:
    """Functional-monomial counts from the shape grammar alone.

    Counts alternating atom sequences by dynamic programming on
    (size, first-atom kind, last-atom kind, adjacent-letter flags), with
    bracket contents drawn from the constrained table one level down.
    Independent of gs.is_functional_monomial: no terms are built.
    """
    letters0 = len(a.symbols)               # underived letters
    letters1 = len(a.symbols) * a.order_n   # derived letters

    def level(budget: int, constrained: bool, content: list[int]) -> list[int]:
        # state: (first, last, last_is_plain_letter, letter_before_last_bracket_plain)
        # first/last: "L"/"B".  Sequences indexed by exact size.
        State = tuple[str, str, bool, bool]
        frontier: dict[State, list[int]] = {}

        def bump(d: dict[State, list[int]], key: State, size: int, val: int) -> None:
            arr = d.setdefault(key, [0] * (budget + 1))
            arr[size] += val

        # seed with single atoms
        start: dict[State, list[int]] = {}
        if budget >= 1:
            bump(start, ("L", "L", True, False), 1, letters0)
            bump(start, ("L", "L", False, False), 1, letters1)
            for inner, ways in enumerate(content):
                if ways and 1 + inner <= budget:
                    bump(start, ("B", "B", False, True), 1 + inner, ways)
                    # lone bracket: no letter precedes it; flag True means
                    # "no violation recorded for the final bracket"
        totals = [0] * (budget + 1)
        totals[0] = 1  # the unit
        frontier = start
        while frontier:
            for (first, last, last_plain, before_ok), sizes in frontier.items():
                for size, ways in enumerate(sizes):
                    if not ways:
                        continue
                    if not constrained:
                        totals[size] += ways
                        continue
                    if last == "B":
                        ok = before_ok
                    elif first == "B":
                        ok = last_plain
                    else:
                        ok = True
                    if ok:
                        totals[size] += ways
            nxt: dict[State, list[int]] = {}
            for (first, last, last_plain, _before_ok), sizes in frontier.items():
                for size, ways in enumerate(sizes):
                    if not ways:
                        continue
                    if size + 1 <= budget:
                        bump(nxt, (first, "L", True, False), size + 1, ways * letters0)
                        bump(nxt, (first, "L", False, False), size + 1, ways * letters1)
                    if last != "B":
                        for inner, cways in enumerate(content):
                            if not cways:
                                continue
                            cost = 1 + inner
                            if size + cost <= budget:
                                bump(nxt, (first, "B", False, last_plain),
                                     size + cost, ways * cways)
            frontier = {k: v for k, v in nxt.items() if any(v)}
        return totals

    # fixpoint for the constrained content table: contents can nest, and the
    # table for budget b only needs entries < b, so iterate sizes upward
    content = [0] * (max_size + 1)
    content[0] = 1
    for s in range(1, max_size + 1):
        content[s] = level(s, True, content)[s]
    return level(max_size, False, content)


CHECKS = {
    "axioms": check_axioms,
    "red": check_red_confluence,
    "order": check_order,
    "cd": check_cd,
    "basis": check_basis,
}
