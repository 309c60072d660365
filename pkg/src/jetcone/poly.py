"""Sparse multivariate polynomials with exact or floating coefficients.

A polynomial is a map from exponent tuples (one nonnegative integer per
variable) to nonzero coefficients.  The zero polynomial is the empty map.
Coefficients are ``Fraction`` under the exact field and ``float``/``complex``
otherwise; arithmetic never mixes representations silently.

Canonical printing orders terms by ascending total degree, so the initial
form comes first, and uses the aliases x, y, z when there are at most three
variables.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import ParseError
from .fields import Field, Scalar

Exponent = tuple[int, ...]

_ALIASES = ("x", "y", "z")


class Polynomial:
    """Immutable sparse polynomial in ``n_vars`` variables."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Mapping[Exponent, Scalar]):
        if n_vars <= 0:
            raise ValueError("n_vars must be positive")
        clean: dict[Exponent, Scalar] = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != n_vars:
                raise ValueError(f"exponent vector {exps} has length != {n_vars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if coeff == 0:
                continue
            clean[exps] = coeff
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_vars: int) -> "Polynomial":
        return cls(n_vars, {})

    @classmethod
    def constant(cls, n_vars: int, value: Scalar) -> "Polynomial":
        return cls(n_vars, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, n_vars: int, index: int, one: Scalar = Fraction(1)) -> "Polynomial":
        if not 0 <= index < n_vars:
            raise ValueError(f"variable index {index} out of range for n_vars={n_vars}")
        exps = [0] * n_vars
        exps[index] = 1
        return cls(n_vars, {tuple(exps): one})

    # -- arithmetic --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n_vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, 0) + coeff
            if acc == 0:
                out.pop(exps, None)
            else:
                out[exps] = acc
        return Polynomial(self.n_vars, out)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            out: dict[Exponent, Scalar] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    acc = out.get(exps, 0) + c1 * c2
                    if acc == 0:
                        out.pop(exps, None)
                    else:
                        out[exps] = acc
            return Polynomial(self.n_vars, out)
        return Polynomial(self.n_vars, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.n_vars, Fraction(1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n_vars != self.n_vars:
                raise ValueError("mixed variable counts")
            return other
        return Polynomial.constant(self.n_vars, other)

    # -- structure ---------------------------------------------------------

    def total_degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> Optional[int]:
        """Least total degree carrying a nonzero term; None if f = 0."""
        return min((sum(e) for e in self.terms), default=None)

    def homogeneous_component(self, degree: int) -> "Polynomial":
        return Polynomial(
            self.n_vars, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    def initial_form(self) -> "Polynomial":
        m = self.order()
        return self if m is None else self.homogeneous_component(m)

    def next_form(self) -> "Polynomial":
        m = self.order()
        return self if m is None else self.homogeneous_component(m + 1)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    # -- calculus ----------------------------------------------------------

    def partial(self, index: int) -> "Polynomial":
        out: dict[Exponent, Scalar] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            key = tuple(new)
            acc = out.get(key, 0) + coeff * e
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
        return Polynomial(self.n_vars, out)

    def gradient(self) -> tuple["Polynomial", ...]:
        return tuple(self.partial(i) for i in range(self.n_vars))

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.n_vars:
            raise ValueError(
                f"point has dimension {len(point)}, polynomial has {self.n_vars}"
            )
        total: Scalar = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for value, e in zip(point, exps):
                if e:
                    term *= value**e
            total += term
        return total

    def gradient_at(self, point: Sequence[Scalar]) -> tuple[Scalar, ...]:
        return tuple(g.evaluate(point) for g in self.gradient())

    def hessian_at(self, point: Sequence[Scalar]) -> tuple[tuple[Scalar, ...], ...]:
        firsts = self.gradient()
        rows = []
        for i in range(self.n_vars):
            rows.append(tuple(firsts[i].partial(j).evaluate(point) for j in range(self.n_vars)))
        return tuple(rows)

    # -- substitution ------------------------------------------------------

    def substitute(self, replacements: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable i by ``replacements[i]`` (full composition)."""
        if len(replacements) != self.n_vars:
            raise ValueError("one replacement polynomial per variable required")
        m_vars = replacements[0].n_vars
        power_cache: dict[tuple[int, int], Polynomial] = {}

        def powered(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = replacements[i] ** e
            return power_cache[key]

        acc = Polynomial.zero(m_vars)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(m_vars, coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * powered(i, e)
            acc = acc + term
        return acc

    def shift(self, point: Sequence[Scalar]) -> "Polynomial":
        """Return f(x + point), recentering the reference point to 0."""
        reps = [
            Polynomial.variable(self.n_vars, i) + Polynomial.constant(self.n_vars, q)
            if q != 0
            else Polynomial.variable(self.n_vars, i)
            for i, q in enumerate(point)
        ]
        return self.substitute(reps)

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "Polynomial":
        return Polynomial(self.n_vars, {e: fn(c) for e, c in self.terms.items()})

    def to_float(self, complex_: bool = False) -> "Polynomial":
        if complex_:
            return self.map_coefficients(lambda c: complex(c))
        return self.map_coefficients(
            lambda c: float(c) if not isinstance(c, complex) else c
        )

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.n_vars}, {format_polynomial(self)!r})"


def variable_names(n_vars: int) -> tuple[str, ...]:
    if n_vars <= 3:
        return _ALIASES[:n_vars]
    return tuple(f"x{i + 1}" for i in range(n_vars))


def _coeff_str(coeff: Scalar) -> str:
    if isinstance(coeff, complex):
        return f"({coeff.real:g}{coeff.imag:+g}j)"
    if isinstance(coeff, float):
        return f"{coeff:g}"
    return str(coeff)


def format_polynomial(poly: Polynomial) -> str:
    """Graded-lexicographic rendering, ascending total degree."""
    if not poly.terms:
        return "0"
    names = variable_names(poly.n_vars)
    keys = sorted(poly.terms, key=lambda e: (sum(e), tuple(-x for x in e)))
    parts: list[str] = []
    for exps in keys:
        coeff = poly.terms[exps]
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        negative = isinstance(coeff, (Fraction, float)) and coeff < 0
        mag = -coeff if negative else coeff
        if mono and mag == 1 and not isinstance(coeff, complex):
            body = mono
        elif mono:
            body = f"{_coeff_str(mag)}*{mono}"
        else:
            body = _coeff_str(mag)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d+|\d+/\d+|\d+)|(?P<var>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_pos = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", bad_pos + 1)
        if match.group("num") is not None:
            tokens.append(("num", match.group("num"), match.start("num") + 1))
        elif match.group("var") is not None:
            tokens.append(("var", match.group("var"), match.start("var") + 1))
        else:
            tokens.append(("op", match.group("op"), match.start("op") + 1))
        pos = match.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    """Recursive-descent parser for the polynomial expression grammar:
    + - * ^ and parentheses over integer/rational/decimal literals and
    variables x1..xn (x, y, z when n <= 3)."""

    def __init__(self, text: str, n_vars: int, field: Field):
        self.tokens = _tokenize(text.replace("−", "-").replace("–", "-"))
        self.index = 0
        self.n_vars = n_vars
        self.field = field

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def parse(self) -> Polynomial:
        poly = self.parse_expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return poly

    def parse_expr(self) -> Polynomial:
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            self.advance()
            negate = value == "-"
        acc = self.parse_term()
        if negate:
            acc = -acc
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                term = self.parse_term()
                acc = acc - term if value == "-" else acc + term
            else:
                return acc

    def parse_term(self) -> Polynomial:
        acc = self.parse_power()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                acc = acc * self.parse_power()
            elif kind == "var" or (kind == "op" and value == "("):
                # juxtaposition, e.g. "2x^2" or "3(x+y)"
                acc = acc * self.parse_power()
            else:
                return acc

    def parse_power(self) -> Polynomial:
        base = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, pos = self.advance()
            if kind != "num" or not value.isdigit():
                raise ParseError("exponent must be a nonnegative integer", pos)
            return base ** int(value)
        return base

    def parse_atom(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == "num":
            return Polynomial.constant(self.n_vars, self._literal(value, pos))
        if kind == "var":
            return Polynomial.variable(
                self.n_vars, self._var_index(value, pos), one=_field_one(self.field)
            )
        if kind == "op" and value == "(":
            poly = self.parse_expr()
            kind, value, pos = self.advance()
            if not (kind == "op" and value == ")"):
                raise ParseError("expected ')'", pos)
            return poly
        if kind == "op" and value == "-":
            return -self.parse_atom()
        if kind == "op" and value == "+":
            return self.parse_atom()
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {value!r}", pos)

    def _literal(self, text: str, pos: int) -> Scalar:
        if "." in text:
            if self.field is Field.RATIONAL:
                raise ParseError(
                    "decimal literal is not allowed under the rational field; "
                    "use p/q",
                    pos,
                )
            value = float(text)
            return complex(value) if self.field is Field.COMPLEX else value
        frac = Fraction(text)
        if self.field is Field.RATIONAL:
            return frac
        return complex(float(frac)) if self.field is Field.COMPLEX else float(frac)

    def _var_index(self, name: str, pos: int) -> int:
        if self.n_vars <= 3 and name in _ALIASES[: self.n_vars]:
            return _ALIASES.index(name)
        if name.startswith("x") and name[1:].isdigit():
            idx = int(name[1:]) - 1
            if 0 <= idx < self.n_vars:
                return idx
        raise ParseError(f"unknown variable {name!r}", pos)


def _field_one(field: Field) -> Scalar:
    if field is Field.RATIONAL:
        return Fraction(1)
    return complex(1.0) if field is Field.COMPLEX else 1.0


def parse_polynomial(text: str, n_vars: int, field: Field = Field.RATIONAL) -> Polynomial:
    """Parse a polynomial expression into its canonical term map."""
    return _Parser(text, n_vars, field).parse()
