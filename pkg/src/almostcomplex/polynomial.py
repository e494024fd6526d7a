"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is stored as a mapping from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients.  Variables are positional and are
written ``x1 .. xv`` in text form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Polynomial",
    "ParseError",
    "poly_eval",
    "poly_diff",
    "parse_polynomial",
    "dot",
    "compose_many",
]


class ParseError(ValueError):
    """Raised when a polynomial string does not follow the grammar."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Polynomial:
    """Polynomial in ``nvars`` variables over the rationals.

    Instances are treated as immutable; every operation returns a new object.
    """

    __slots__ = ("nvars", "terms", "_hash", "_ints")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction] | None = None):
        if nvars < 0:
            raise ValueError("variable count must be non-negative")
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise ValueError(
                        f"exponent {exps} has length {len(exps)}, expected {nvars}"
                    )
                if coeff:
                    clean[tuple(exps)] = _as_fraction(coeff)
        self.terms = clean
        self._hash = None
        self._ints = None

    # constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # terms must already be clean: no zero coefficients, correct lengths
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        obj._ints = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        value = _as_fraction(value)
        if not value:
            return cls.zero(nvars)
        return cls._raw(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        """The coordinate function ``x{index+1}`` (``index`` is 0-based)."""
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls._raw(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def variables(cls, nvars: int) -> list["Polynomial"]:
        return [cls.variable(nvars, i) for i in range(nvars)]

    # basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, factor) -> "Polynomial":
        factor = _as_fraction(factor)
        if not factor:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Polynomial.zero(self.nvars)
        # multiply integer numerators, divide by the common denominator once per term
        d1, a = self._integer_form()
        d2, b = other._integer_form()
        acc: dict = {}
        get = acc.get
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(map(sum, zip(e1, e2)))
                acc[e] = get(e, 0) + c1 * c2
        den = d1 * d2
        return Polynomial._raw(self.nvars, {e: Fraction(c, den) for e, c in acc.items() if c})

    def _integer_form(self):
        """``(D, [(exps, D * coeff)])`` with ``D`` the lcm of the denominators."""
        if self._ints is None:
            den = lcm(*(c.denominator for c in self.terms.values()))
            self._ints = (den, [(e, c.numerator * (den // c.denominator)) for e, c in self.terms.items()])
        return self._ints

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # calculus and evaluation -------------------------------------------

    def diff(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable index {index} out of range for {self.nvars} variables")
        terms = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                ne = e[:index] + (k - 1,) + e[index + 1:]
                terms[ne] = c * k
        return Polynomial._raw(self.nvars, terms)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables"
            )
        point = [_as_fraction(v) for v in point]
        # cache powers per variable
        powers: list[dict] = [{0: Fraction(1)} for _ in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = point[i] ** k
                    term *= cache[k]
            total += term
        return total

    def compose(self, substitutions: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``x{i+1} -> substitutions[i]``.

        The substitutions share a common variable count which becomes the
        variable count of the result.
        """
        if len(substitutions) != self.nvars:
            raise ValueError(
                f"need {self.nvars} substitutions, got {len(substitutions)}"
            )
        if not substitutions:
            return self
        return compose_many([self], substitutions)[0]

    # text form ----------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded reverse-lexicographic-free order: degree desc, then lex desc."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if idx == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {str(self)!r})"


def compose_many(polys: Sequence[Polynomial], substitutions: Sequence[Polynomial]) -> tuple:
    """``p(substitutions)`` for each ``p``, sharing monomial images between them."""
    if not substitutions:
        return tuple(polys)
    m = substitutions[0].nvars
    if any(s.nvars != m for s in substitutions):
        raise ValueError("substitutions must share a variable count")
    k = len(substitutions)
    one = Polynomial.constant(m, 1)
    cache = {(0,) * k: one}

    def monomial(e):
        # image of x^e, built from x^(e - unit) for the last nonzero exponent
        if e not in cache:
            i = max(j for j, a in enumerate(e) if a)
            cache[e] = monomial(e[:i] + (e[i] - 1,) + e[i + 1:]) * substitutions[i]
        return cache[e]

    out = []
    for p in polys:
        if p.nvars != k:
            raise ValueError(f"need {p.nvars} substitutions, got {k}")
        acc: dict = {}
        get = acc.get
        for e, c in p.terms.items():
            for te, tc in monomial(e).terms.items():
                acc[te] = get(te, 0) + c * tc
        out.append(Polynomial._raw(m, {e: c for e, c in acc.items() if c}))
    return tuple(out)


def dot(pairs: Iterable[tuple[Polynomial, Polynomial]], nvars: int) -> Polynomial:
    """``sum(a * b for a, b in pairs)`` accumulated in a single pass."""
    forms = [
        (a._integer_form(), b._integer_form()) for a, b in pairs if a.terms and b.terms
    ]
    den = lcm(*(fa[0] * fb[0] for fa, fb in forms)) if forms else 1
    acc: dict = {}
    get = acc.get
    for (d1, ta), (d2, tb) in forms:
        m = den // (d1 * d2)
        for e1, c1 in ta:
            c1 *= m
            for e2, c2 in tb:
                e = tuple(map(sum, zip(e1, e2)))
                acc[e] = get(e, 0) + c1 * c2
    return Polynomial._raw(nvars, {e: Fraction(c, den) for e, c in acc.items() if c})


def poly_eval(p: Polynomial, point: Sequence) -> Fraction:
    return p.evaluate(point)


def poly_diff(p: Polynomial, var_index: int) -> Polynomial:
    return p.diff(var_index)


# parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\^)|([-+*/()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        num, var, caret, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif var is not None:
            tokens.append(("var", var))
        elif caret is not None:
            tokens.append(("op", "^"))
        else:
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := atom ['^' int]
    # atom   := int ['/' int] | var | '(' expr ')'

    def __init__(self, text: str, nvars: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value):
        kind, val = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, got {val!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial string")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input at token {self.tokens[self.pos][1]!r}")
        return p

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if val in ("+", "-"):
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if val not in ("+", "-"):
                return acc
            self.take()
            t = self.term()
            acc = acc + t if val == "+" else acc - t

    def term(self):
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer literal")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            value = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                kind2, den = self.take()
                if kind2 != "num":
                    raise ParseError("rational literal needs an integer denominator")
                if int(den) == 0:
                    raise ParseError("zero denominator")
                value = Fraction(int(val), int(den))
            return Polynomial.constant(self.nvars, value)
        if kind == "var":
            idx = int(val)
            if not 1 <= idx <= self.nvars:
                raise ParseError(f"variable x{idx} outside x1..x{self.nvars}")
            return Polynomial.variable(self.nvars, idx - 1)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse ``text`` using variables ``x1 .. x{nvars}``.

    >>> str(parse_polynomial("1/2*x1^2 - x2", 2))
    '1/2*x1^2 - x2'
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a polynomial string, got {type(text).__name__}")
    return _Parser(text, nvars).parse()


def polynomials(values: Iterable, nvars: int) -> list[Polynomial]:
    """Coerce ints, Fractions, strings or polynomials to polynomials."""
    out = []
    for v in values:
        if isinstance(v, Polynomial):
            out.append(v)
        elif isinstance(v, str):
            out.append(parse_polynomial(v, nvars))
        else:
            out.append(Polynomial.constant(nvars, v))
    return out
