"""Canonical text syntax for words and polynomials.

Grammar (whitespace-insensitive; products by juxtaposition, '*' optional):

    poly    := ['-'] term (('+'|'-') term)*
    term    := factor ('*'? factor)*
    factor  := rational | lam | letter | 'P' '[' poly ']'
             | 'D' '(' poly ')' | '(' poly ')'
    rational:= digits ['/' digits]
    lam     := 'λ' | 'lam' | 'lambda'
    letter  := name primes | name '^(' digits ')'

``D(...)`` is evaluated eagerly through the derivation, so parsed polynomials
never contain derivative nodes; ``P[...]`` applies the integral operator
linearly.  Rationals and lam parse to multiples of the unit monomial and
multiply into coefficients through the diamond product.

Rendering writes derivative orders 1 and 2 as primes and higher ones as
``^(k)``.  Polynomial terms are listed with nonnegative-leading-coefficient
terms first, then negative ones, each group in descending word order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .coeff import LambdaPoly
from .ordering import sort_key
from .terms import Alphabet, Bracket, Letter, Poly, Word
from . import rb_engine


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_letter(a: Alphabet, lt: Letter) -> str:
    name = a.symbols[lt.sym] if lt.sym >= 0 else "*"
    if lt.deriv == 0:
        return name
    if lt.deriv <= 2:
        return name + "'" * lt.deriv
    return f"{name}^({lt.deriv})"


def render_word(a: Alphabet, w: Word) -> str:
    if not w.atoms:
        return "1"
    parts = []
    for at in w.atoms:
        if isinstance(at, Letter):
            parts.append(render_letter(a, at))
        else:
            parts.append(f"P[{render_word(a, at.content)}]")
    return " ".join(parts)


def _specialize(p: Poly, weight: Optional[Fraction]) -> Poly:
    if weight is None:
        return p
    return Poly([(w, LambdaPoly.const(c.eval_at(weight)))
                 for w, c in p.terms.items()])


def _render_terms(a: Alphabet, p: Poly) -> list[tuple[bool, str]]:
    """(negative?, body) per term, sign-major then descending word order."""
    nonneg = [w for w, c in p.terms.items() if not c.leading_negative()]
    neg = [w for w, c in p.terms.items() if c.leading_negative()]
    ordered = (sorted(nonneg, key=sort_key, reverse=True)
               + sorted(neg, key=sort_key, reverse=True))
    out = []
    for w in ordered:
        c = p.terms[w]
        negative = c.leading_negative()
        mag = -c if negative else c
        multi = sum(1 for x in mag.coeffs if x) > 1
        coeff_str = f"({mag.render()})" if multi else mag.render()
        if w.is_unit():
            body = coeff_str
        elif mag == 1:
            body = render_word(a, w)
        else:
            body = f"{coeff_str} {render_word(a, w)}"
        out.append((negative, body))
    return out


def render_poly(a: Alphabet, p: Poly, weight: Optional[Fraction] = None) -> str:
    p = _specialize(p, weight)
    if p.is_zero():
        return "0"
    pieces = []
    for i, (negative, body) in enumerate(_render_terms(a, p)):
        if i == 0:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)


def poly_json_obj(a: Alphabet, p: Poly, weight: Optional[Fraction] = None) -> dict:
    p = _specialize(p, weight)
    terms = sorted(p.terms, key=sort_key, reverse=True)
    return {"poly": [{"coeff": p.terms[w].render(), "monomial": render_word(a, w)}
                     for w in terms]}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_LAM_NAMES = ("lambda", "lam", "λ")


class _Parser:
    def __init__(self, a: Alphabet, text: str):
        self.a = a
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def _name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def _digits(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a number")
        return int(self.text[start:self.pos])

    # grammar ------------------------------------------------------------

    def poly(self) -> Poly:
        negative = False
        if self.peek() == "-":
            self.eat("-")
            negative = True
        elif self.peek() == "+":
            self.eat("+")
        out = self.term().scale(-1 if negative else 1)
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.eat(op)
            t = self.term()
            out = out + (t.scale(-1) if op == "-" else t)
        return out

    def term(self) -> Poly:
        out = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.eat("*")
                out = rb_engine.diamond(out, self.factor())
                continue
            if ch and (ch.isalnum() or ch in "(λ"):
                out = rb_engine.diamond(out, self.factor())
                continue
            return out

    def factor(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            inner = self.poly()
            self.eat(")")
            return inner
        if ch.isdigit():
            num = self._digits()
            if self.peek() == "/":
                self.eat("/")
                den_pos = self.pos
                den = self._digits()
                if den == 0:
                    self.pos = den_pos
                    raise self.error("zero denominator")
                return Poly.unit().scale(LambdaPoly.const(Fraction(num, den)))
            return Poly.unit().scale(LambdaPoly.const(num))
        if ch == "λ":
            self.eat("λ")
            return self._lam_tail()
        if ch.isalpha() or ch == "_":
            name_pos = self.pos
            name = self._name()
            if name == "P":
                self.eat("[")
                inner = self.poly()
                self.eat("]")
                return rb_engine.integral(inner)
            if name == "D":
                self.eat("(")
                inner = self.poly()
                self.eat(")")
                return rb_engine.derive(self.a, inner)
            if name in _LAM_NAMES:
                return self._lam_tail()
            return self.letter(name, name_pos)
        raise self.error("expected a factor")

    def _lam_tail(self) -> Poly:
        power = 1
        if self.peek() == "^":
            self.eat("^")
            power = self._digits()
        return Poly.unit().scale(LambdaPoly.lam(power))

    def letter(self, name: str, name_pos: int) -> Poly:
        if name not in self.a.symbols:
            self.pos = name_pos
            raise self.error(f"unknown symbol {name!r}")
        sym = self.a.symbols.index(name)
        deriv = 0
        if self.peek() == "'":
            while self.peek() == "'":
                self.eat("'")
                deriv += 1
        elif self.peek() == "^":
            self.eat("^")
            self.eat("(")
            deriv = self._digits()
            self.eat(")")
        if deriv > self.a.order_n:
            self.pos = name_pos
            raise self.error(
                f"derivative order {deriv} exceeds truncation order {self.a.order_n}")
        return Poly.mono(Word((Letter(sym, deriv),)))


def parse_poly(a: Alphabet, text: str) -> Poly:
    p = _Parser(a, text)
    out = p.poly()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("unexpected trailing input")
    return out
