"""Truncated cohomology rings of products of projective spaces.

The ring is Z[w1, ..., wr] / (w1^(n1+1), ..., wr^(nr+1)) where wi is the
pullback of the hyperplane class of the i-th factor P^ni.  Classes are
immutable and stored in canonical form: every exponent vector is within the
truncation bounds and no stored coefficient is zero, so equality is
structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "AmbientProduct",
    "CohomologyClass",
    "ClassSyntaxError",
    "integrate",
    "invert_unit",
    "mul",
    "parse_class",
    "total_chern_ambient",
]

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class AmbientProduct:
    """P^n1 x ... x P^nr, given by its factor dimensions."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.factor_dims)
        if not dims:
            raise ValueError("an ambient product needs at least one factor")
        if any(n < 1 for n in dims):
            raise ValueError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def rank(self) -> int:
        return len(self.factor_dims)

    @property
    def dim(self) -> int:
        return sum(self.factor_dims)

    @property
    def top_exponent(self) -> Exponent:
        return self.factor_dims

    def admits(self, exps: Exponent) -> bool:
        return all(0 <= e <= n for e, n in zip(exps, self.factor_dims))

    def monomials(self) -> Iterator[Exponent]:
        """All exponent vectors surviving truncation."""
        return product(*(range(n + 1) for n in self.factor_dims))

    # convenient constructors
    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self, {})

    def one(self) -> "CohomologyClass":
        return self.constant(1)

    def constant(self, c: int) -> "CohomologyClass":
        return CohomologyClass(self, {(0,) * self.rank: c})

    def gen(self, i: int) -> "CohomologyClass":
        """The hyperplane class w_i (1-based, matching the expression syntax)."""
        if not 1 <= i <= self.rank:
            raise IndexError(f"w{i} out of range for {self.rank} factor(s)")
        exps = [0] * self.rank
        exps[i - 1] = 1
        return CohomologyClass(self, {tuple(exps): 1})

    def linear(self, coeffs: Iterable[int]) -> "CohomologyClass":
        """The degree-one class sum_i coeffs[i] * w_{i+1}."""
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.rank:
            raise ValueError(
                f"multidegree {coeffs} has length {len(coeffs)}, ambient has {self.rank} factors"
            )
        terms = {}
        for i, c in enumerate(coeffs):
            exps = [0] * self.rank
            exps[i] = 1
            terms[tuple(exps)] = c
        return CohomologyClass(self, terms)

    def __str__(self):
        return " x ".join(f"P{n}" for n in self.factor_dims)


Scalar = Union[int, "CohomologyClass"]


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    ambient: AmbientProduct
    terms: Mapping[Exponent, int] = field(default_factory=dict)

    def __post_init__(self):
        r = self.ambient.rank
        canon: dict[Exponent, int] = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != r:
                raise ValueError(f"exponent vector {exps} does not have length {r}")
            if not self.ambient.admits(exps):
                continue
            c = int(c)
            if c:
                canon[exps] = canon.get(exps, 0) + c
        canon = {e: c for e, c in sorted(canon.items()) if c}
        object.__setattr__(self, "terms", canon)

    # --- structure -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ambient.constant(other)
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return self.ambient == other.ambient and self.terms == other.terms

    def __hash__(self):
        return hash((self.ambient, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, exps: Exponent) -> int:
        return self.terms.get(tuple(exps), 0)

    @property
    def constant_term(self) -> int:
        return self.coefficient((0,) * self.ambient.rank)

    def homogeneous_part(self, degree: int) -> "CohomologyClass":
        return CohomologyClass(
            self.ambient, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    def multidegree(self) -> tuple[int, ...]:
        """Coefficients of the degree-one part, as a multidegree vector."""
        r = self.ambient.rank
        return tuple(
            self.coefficient(tuple(int(j == i) for j in range(r))) for i in range(r)
        )

    # --- arithmetic ------------------------------------------------------
    def _coerce(self, other: Scalar) -> "CohomologyClass":
        if isinstance(other, CohomologyClass):
            if other.ambient != self.ambient:
                raise ValueError(
                    f"ambient mismatch: {self.ambient} vs {other.ambient}"
                )
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ambient.constant(other)
        raise TypeError(f"cannot combine a cohomology class with {type(other).__name__}")

    def __add__(self, other: Scalar) -> "CohomologyClass":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return CohomologyClass(self.ambient, terms)

    __radd__ = __add__

    def __neg__(self) -> "CohomologyClass":
        return self.scale(-1)

    def __sub__(self, other: Scalar) -> "CohomologyClass":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "CohomologyClass":
        return self._coerce(other) - self

    def scale(self, k: int) -> "CohomologyClass":
        return CohomologyClass(self.ambient, {e: k * c for e, c in self.terms.items()})

    def __mul__(self, other: Scalar) -> "CohomologyClass":
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CohomologyClass":
        if n < 0:
            raise ValueError("negative powers are not defined; use invert_unit")
        result = self.ambient.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"CohomologyClass({self.ambient.factor_dims}, {dict(self.terms)})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                f"w{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


def mul(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    """Product in the truncated ring; monomials past the truncation vanish."""
    b = a._coerce(b)
    amb = a.ambient
    out: dict[Exponent, int] = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if amb.admits(e):
                out[e] = out.get(e, 0) + ca * cb
    return CohomologyClass(amb, out)


def integrate(c: CohomologyClass) -> int:
    """Evaluate against the fundamental class: the top-monomial coefficient."""
    return c.coefficient(c.ambient.top_exponent)


def invert_unit(c: CohomologyClass) -> CohomologyClass:
    """Inverse of a class with constant term 1.

    Writing c = 1 + x with x nilpotent, the inverse is the finite geometric
    series sum_j (-x)^j, which terminates past the ambient dimension.
    """
    if c.constant_term != 1:
        raise ValueError(f"constant term must be 1 to invert, got {c.constant_term}")
    x = c - 1
    result = c.ambient.one()
    power = c.ambient.one()
    for _ in range(c.ambient.dim):
        power = power * (-x)
        if not power:
            break
        result = result + power
    return result


def total_chern_ambient(ambient: AmbientProduct) -> CohomologyClass:
    """c(T(P^n1 x ... x P^nr)) = prod_i (1 + w_i)^(n_i + 1)."""
    r = ambient.rank
    result = ambient.one()
    for i, n in enumerate(ambient.factor_dims):
        factor = {}
        for j in range(n + 1):
            exps = [0] * r
            exps[i] = j
            factor[tuple(exps)] = comb(n + 1, j)
        result = result * CohomologyClass(ambient, factor)
    return result


# --- expression parser ---------------------------------------------------

class ClassSyntaxError(ValueError):
    """Malformed class expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch == "w":
            j = i + 1
            while j < len(text) and text[j].isspace():
                j += 1
            k = j
            while k < len(text) and text[k].isdigit():
                k += 1
            if k == j:
                raise ClassSyntaxError("expected variable index after 'w'", j, text)
            tokens.append(("var", text[j:k], i))
            i = k
        elif ch in "+-*^()":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ClassSyntaxError(f"unexpected character {ch!r}", i, text)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    # expr := term (('+'|'-') term)* ; term := factor ('*' factor)*
    # factor := base ('^' posint)? ; base := integer | 'w' posint | '(' expr ')'

    def __init__(self, text: str, ambient: AmbientProduct):
        self.text = text
        self.ambient = ambient
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ClassSyntaxError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def expr(self) -> CohomologyClass:
        # a leading sign is accepted as a convenience ("-w1 + w2")
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take(self.peek()[0])[0] == "-" else 1
        value = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> CohomologyClass:
        value = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            value = value * self.factor()
        return value

    def factor(self) -> CohomologyClass:
        value = self.base()
        if self.peek()[0] == "^":
            self.take("^")
            tok = self.take("int")
            n = int(tok[1])
            if n < 1:
                raise ClassSyntaxError("exponent must be a positive integer", tok[2], self.text)
            value = value ** n
        return value

    def base(self) -> CohomologyClass:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take("int")
            return self.ambient.constant(int(val))
        if kind == "var":
            self.take("var")
            idx = int(val)
            if not 1 <= idx <= self.ambient.rank:
                raise ClassSyntaxError(
                    f"variable w{idx} out of range (ambient has {self.ambient.rank} factor(s))",
                    pos,
                    self.text,
                )
            return self.ambient.gen(idx)
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        got = "end of input" if kind == "end" else repr(val)
        raise ClassSyntaxError(f"expected integer, variable or '(', found {got}", pos, self.text)


def parse_class(expr: str, ambient: AmbientProduct) -> CohomologyClass:
    """Parse an expression such as ``"(w1 + w2)^4 - 3*w1"`` into a class."""
    parser = _Parser(expr, ambient)
    value = parser.expr()
    parser.take("end")
    return value
