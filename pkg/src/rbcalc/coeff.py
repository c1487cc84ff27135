"""Exact coefficient arithmetic in Q[lam].

All engine identities are stated for a generic weight lam, so coefficients are
univariate polynomials in the formal symbol lam with arbitrary-precision
rational coefficients (fractions.Fraction).  Keeping lam symbolic makes every
identity hold identically in Q[lam]; specializing lam to a fixed rational is a
ring homomorphism and is applied only at the output boundary (see the CLI).

Representation: a dense tuple ``coeffs`` with ``coeffs[i]`` the coefficient of
lam**i and no trailing zeros.  The zero polynomial is the empty tuple, so zero
testing is exact and free.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

Scalar = Union[int, Fraction, "LambdaPoly"]


class LambdaPoly:
    """Immutable polynomial in the formal weight lam over Q."""

    __slots__ = ("coeffs",)

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[int | Fraction] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("LambdaPoly is immutable")

    @classmethod
    def const(cls, value: int | Fraction) -> LambdaPoly:
        return cls((Fraction(value),))

    @classmethod
    def lam(cls, power: int = 1) -> LambdaPoly:
        """lam**power as a polynomial."""
        return cls((0,) * power + (1,))

    @staticmethod
    def coerce(value: Scalar) -> LambdaPoly:
        if isinstance(value, LambdaPoly):
            return value
        return LambdaPoly.const(value)

    # ring operations ------------------------------------------------------

    def __add__(self, other: Scalar) -> LambdaPoly:
        other = LambdaPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return LambdaPoly(out)

    __radd__ = __add__

    def __neg__(self) -> LambdaPoly:
        return LambdaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Scalar) -> LambdaPoly:
        return self + (-LambdaPoly.coerce(other))

    def __rsub__(self, other: Scalar) -> LambdaPoly:
        return LambdaPoly.coerce(other) + (-self)

    def __mul__(self, other: Scalar) -> LambdaPoly:
        other = LambdaPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return LambdaPoly(out)

    __rmul__ = __mul__

    # structure ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LambdaPoly.const(other)
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree in lam; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading_negative(self) -> bool:
        """True iff the highest-power coefficient is negative (False for 0)."""
        return bool(self.coeffs) and self.coeffs[-1] < 0

    def eval_at(self, weight: int | Fraction) -> Fraction:
        """Horner evaluation at lam = weight."""
        w = Fraction(weight)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc

    # rendering ------------------------------------------------------------

    def render(self) -> str:
        """Compact text form: "0", "3/2", "λ", "1+2λ", "1-λ^2", "λ^2"."""
        if not self.coeffs:
            return "0"
        pieces: list[str] = []
        for power, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                sym = "λ" if power == 1 else f"λ^{power}"
                body = sym if mag == 1 else f"{mag}{sym}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+" if c > 0 else "-") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LambdaPoly({self.render()!r})"


ZERO = LambdaPoly()
ONE = LambdaPoly.const(1)
LAM = LambdaPoly.lam()


def lp_add(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    return a + b


def lp_mul(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    return a * b


def lp_eval(a: LambdaPoly, weight: int | Fraction) -> Fraction:
    return a.eval_at(weight)
