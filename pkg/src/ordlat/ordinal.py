"""Exact ordinal arithmetic in Cantor normal form.

An ordinal below epsilon_0 is stored as a tuple of (exponent, coefficient)
pairs with strictly decreasing exponents and positive integer coefficients;
the empty tuple is zero.  Everything here is immutable and hashable so
ordinals can key dictionaries and sit inside frozen dataclasses.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

MAX_DEPTH = 8
MAX_COEFF = 2**31


class OrdinalCapError(ValueError):
    """Raised when a literal exceeds the nesting-depth or coefficient caps."""


class OrdinalParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


@functools.total_ordering
@dataclass(frozen=True, slots=True)
class Ordinal:
    terms: Tuple[Tuple["Ordinal", int], ...] = ()

    def __post_init__(self) -> None:
        prev: Optional[Ordinal] = None
        for exp, coeff in self.terms:
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficient must be a positive int, got {coeff!r}")
            if coeff > MAX_COEFF:
                raise OrdinalCapError(f"coefficient {coeff} exceeds cap {MAX_COEFF}")
            if prev is not None and compare(exp, prev) >= 0:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp
        if self.depth() > MAX_DEPTH:
            raise OrdinalCapError(f"nesting depth exceeds cap {MAX_DEPTH}")

    def depth(self) -> int:
        if not self.terms:
            return 0
        return 1 + max(exp.depth() for exp, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_nat(self) -> bool:
        """True when the ordinal is a natural number (possibly zero)."""
        if not self.terms:
            return True
        return len(self.terms) == 1 and self.terms[0][0].is_zero

    def as_nat(self) -> int:
        if not self.is_nat():
            raise ValueError(f"{self} is not a natural number")
        return self.terms[0][1] if self.terms else 0

    def key(self):
        # Tuple encoding whose lexicographic order agrees with the ordinal
        # order; handy as a sort key.
        return tuple((exp.key(), coeff) for exp, coeff in self.terms)

    def __lt__(self, other: "Ordinal") -> bool:
        return compare(self, other) < 0

    def __add__(self, other: "Ordinal") -> "Ordinal":
        return add(self, other)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal[{format_ordinal(self)}]"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are nonnegative")
    if n == 0:
        return ZERO
    return Ordinal(((ZERO, n),))


def omega_power(exp: Ordinal, coeff: int = 1) -> Ordinal:
    if coeff == 0:
        return ZERO
    return Ordinal(((exp, coeff),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: -1, 0 or 1."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != 0:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) == len(b.terms):
        return 0
    return -1 if len(a.terms) < len(b.terms) else 1


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum.  Non-commutative: terms of a below b's lead are absorbed."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    lead_exp = b.terms[0][0]
    kept = [t for t in a.terms if compare(t[0], lead_exp) > 0]
    boundary = [t for t in a.terms if compare(t[0], lead_exp) == 0]
    if boundary:
        merged = (lead_exp, boundary[0][1] + b.terms[0][1])
        return Ordinal(tuple(kept) + (merged,) + b.terms[1:])
    return Ordinal(tuple(kept) + b.terms)


def successor(a: Ordinal) -> Ordinal:
    return add(a, ONE)


def classify(a: Ordinal) -> Tuple[str, Optional[Ordinal]]:
    """Return ("zero", None), ("successor", predecessor) or ("limit", None)."""
    if a.is_zero:
        return ("zero", None)
    last_exp, last_coeff = a.terms[-1]
    if not last_exp.is_zero:
        return ("limit", None)
    if last_coeff == 1:
        return ("successor", Ordinal(a.terms[:-1]))
    return ("successor", Ordinal(a.terms[:-1] + ((last_exp, last_coeff - 1),)))


def last_exponent(a: Ordinal) -> Ordinal:
    if a.is_zero:
        raise ValueError("zero has no last exponent")
    return a.terms[-1][0]


def floor_rank(a: Ordinal, delta: Ordinal) -> Ordinal:
    """Largest multiple of w^delta that is <= a (zero when there is none)."""
    if delta.is_zero:
        return a
    kept = []
    for exp, coeff in a.terms:
        if compare(exp, delta) >= 0:
            kept.append((exp, coeff))
        else:
            break
    return Ordinal(tuple(kept))


# --- text syntax -----------------------------------------------------------
#
# expr     := term ("+" term)*
# term     := NAT | "w" ("^" exponent)? ("*" NAT)?
# exponent := NAT | "w" | "(" expr ")"


def format_ordinal(a: Ordinal) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            body = "w"
        elif exp.is_nat():
            body = f"w^{exp.as_nat()}"
        elif exp == OMEGA:
            body = "w^w"
        else:
            body = f"w^({format_ordinal(exp)})"
        parts.append(body if coeff == 1 else f"{body}*{coeff}")
    return " + ".join(parts)


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.take(ch):
            raise OrdinalParseError(f"expected {ch!r}", self.pos)

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise OrdinalParseError("expected a number", start)
        return int(self.text[start:self.pos])


def _parse_expr(sc: _Scanner) -> Ordinal:
    total = _parse_term(sc)
    while sc.take("+"):
        total = add(total, _parse_term(sc))
    return total


def _parse_term(sc: _Scanner) -> Ordinal:
    ch = sc.peek()
    if ch == "w":
        sc.pos += 1
        exp = ONE
        if sc.take("^"):
            exp = _parse_exponent(sc)
        coeff = 1
        if sc.take("*"):
            coeff = sc.nat()
            if coeff < 1:
                raise OrdinalParseError("coefficient must be positive", sc.pos)
        return omega_power(exp, coeff)
    if ch.isdigit():
        return from_int(sc.nat())
    raise OrdinalParseError("expected 'w' or a number", sc.pos)


def _parse_exponent(sc: _Scanner) -> Ordinal:
    ch = sc.peek()
    if ch == "(":
        sc.pos += 1
        inner = _parse_expr(sc)
        sc.expect(")")
        return inner
    if ch == "w":
        sc.pos += 1
        return OMEGA
    if ch.isdigit():
        return from_int(sc.nat())
    raise OrdinalParseError("expected exponent", sc.pos)


def parse_ordinal(text: str) -> Ordinal:
    sc = _Scanner(text)
    value = _parse_expr(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise OrdinalParseError("trailing input", sc.pos)
    return value


def iter_below(bound: Ordinal, coeff_cap: int) -> Iterator[Ordinal]:
    """Yield the grid of ordinals <= bound whose coefficients are all <= cap.

    Only supports bounds below w^4, which covers every space used here.
    """
    exps = [from_int(i) for i in range(4)]
    digits = [range(coeff_cap + 1) for _ in exps]

    def build(ds):
        terms = []
        for exp, d in zip(reversed(exps), reversed(ds)):
            if d:
                terms.append((exp, d))
        return Ordinal(tuple(terms))

    import itertools

    for ds in itertools.product(*digits):
        x = build(ds)
        if compare(x, bound) <= 0:
            yield x
