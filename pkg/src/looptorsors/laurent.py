"""Units of R_n = k[t_1^{+-1}, ..., t_n^{+-1}] and finite-support elements of F_n.

Monomials have the text syntax ``5*t1^3*t2^2``, ``-9*t1^-1``, ``3/4*t2`` or
``z^2*t1`` (``z`` generates a proper finite-field extension).  The F_n term
order compares exponent vectors by ``(e_n, e_{n-1}, ..., e_1)``
lexicographically, matching F_n = F_{n-1}((t_n)) with ``t_n`` outermost.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .basefield import SquareClass
from .errors import IndexOutOfRange, NonMonomialEntry, ParseError, ZeroElement, ZeroScalar

_VAR = re.compile(r"t(\d+)(?:\^\(?(-?\d+)\)?)?")
_GEN = re.compile(r"z(?:\^(\d+))?")
_NUM = re.compile(r"\d+(?:/\d+)?")


@dataclass(frozen=True)
class MonomialUnit:
    field: object
    scalar: object
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not self.scalar:
            raise ZeroScalar("a unit needs a nonzero coefficient")
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    @property
    def n(self) -> int:
        return len(self.exponents)

    @classmethod
    def one(cls, field, n: int) -> "MonomialUnit":
        return cls(field, field.one, (0,) * n)

    @classmethod
    def parse(cls, text: str, field, n: int | None = None) -> "MonomialUnit":
        return parse_monomial(text, field, n)

    def __mul__(self, other: "MonomialUnit") -> "MonomialUnit":
        if self.n != other.n:
            raise IndexOutOfRange(f"{self.n} vs {other.n} variables")
        return MonomialUnit(
            self.field,
            self.scalar * other.scalar,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    def square(self) -> "MonomialUnit":
        return self * self

    def with_exponent(self, i: int, e: int) -> "MonomialUnit":
        ex = list(self.exponents)
        ex[i - 1] = e
        return MonomialUnit(self.field, self.scalar, tuple(ex))

    def drop(self, i: int) -> "MonomialUnit":
        """Delete coordinate ``i`` (1-based) after discarding its exponent."""
        ex = self.exponents[: i - 1] + self.exponents[i:]
        return MonomialUnit(self.field, self.scalar, ex)

    def insert(self, i: int, e: int) -> "MonomialUnit":
        """Inverse of :meth:`drop`: new coordinate ``i`` with exponent ``e``."""
        ex = self.exponents[: i - 1] + (e,) + self.exponents[i - 1 :]
        return MonomialUnit(self.field, self.scalar, ex)

    def __str__(self):
        return format_monomial(self)


def _scalar_text(field, c) -> str:
    s = str(c)
    if getattr(field, "kind", "") == "Fq" and "+" in s:
        return f"({s})"
    return s


def format_monomial(u: MonomialUnit) -> str:
    vars_ = []
    for i, e in enumerate(u.exponents, start=1):
        if e == 1:
            vars_.append(f"t{i}")
        elif e:
            vars_.append(f"t{i}^{e}")
    c = u.scalar
    if c == u.field.one:
        return "*".join(vars_) or "1"
    if c == -u.field.one:
        return "-" + "*".join(vars_) if vars_ else "-1"
    return "*".join([_scalar_text(u.field, c)] + vars_)


def parse_monomial(text: str, field, n: int | None = None) -> MonomialUnit:
    """Parse a monomial unit; ``n`` defaults to the largest variable index used."""
    t = text.replace(" ", "")
    if not t:
        raise ParseError("empty monomial")
    sign = 1
    if t[0] in "+-":
        sign = -1 if t[0] == "-" else 1
        t = t[1:]
    if len(_split_terms(t)) > 1:
        raise NonMonomialEntry(f"{text!r} is not a monomial")
    scalar = field.one
    exps: dict[int, int] = {}
    for factor in _split_factors(t):
        if m := _VAR.fullmatch(factor):
            idx = int(m.group(1))
            if idx < 1:
                raise ParseError(f"variable index must be >= 1 in {text!r}")
            exps[idx] = exps.get(idx, 0) + int(m.group(2) or 1)
        elif _GEN.fullmatch(factor) or _NUM.fullmatch(factor):
            scalar = scalar * field.parse(factor)
        elif factor.startswith("(") and factor.endswith(")"):
            scalar = scalar * _parse_poly_scalar(factor[1:-1], field)
        else:
            raise ParseError(f"cannot parse factor {factor!r} in {text!r}")
    if sign < 0:
        scalar = -scalar
    top = max(exps, default=0)
    if n is None:
        n = top
    if top > n:
        raise IndexOutOfRange(f"{text!r} uses t{top} but n = {n}")
    if not scalar:
        raise ZeroScalar(f"{text!r} has zero coefficient")
    return MonomialUnit(field, scalar, tuple(exps.get(i, 0) for i in range(1, n + 1)))


def _split_factors(t: str) -> list[str]:
    """Split at ``*`` outside parentheses."""
    out, cur, depth = [], "", 0
    for ch in t:
        depth += (ch == "(") - (ch == ")")
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _split_terms(t: str) -> list[str]:
    """Split a sum of monomials at top-level signs (not after ``^`` or inside parentheses)."""
    out, cur, depth = [], "", 0
    for pos, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and pos > 0 and t[pos - 1] != "^":
            out.append(cur)
            cur = ""
        cur += ch
    out.append(cur)
    return [p for p in out if p not in ("", "+")]


def _parse_poly_scalar(body: str, field):
    total = field.element(0)
    for term in re.findall(r"[+-]?[^+-]+", body):
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        val = field.one
        for f in term.split("*"):
            val = val * field.parse(f)
        total = total + (val if sign > 0 else -val)
    return total


@dataclass(frozen=True)
class UnitSquareClass:
    k_class: SquareClass
    parity: tuple[int, ...]

    def __mul__(self, other: "UnitSquareClass") -> "UnitSquareClass":
        return UnitSquareClass(
            self.k_class * other.k_class, tuple(a ^ b for a, b in zip(self.parity, other.parity))
        )


def unit_square_class(u: MonomialUnit) -> UnitSquareClass:
    """Class of ``u`` in R_n^x/(R_n^x)^2 = k^x/(k^x)^2 x (Z/2)^n."""
    return UnitSquareClass(u.field.square_class(u.scalar), tuple(e % 2 for e in u.exponents))


def coordinate_residues(u: MonomialUnit, i: int) -> tuple[int, MonomialUnit]:
    """Parity of the t_i-valuation of ``u`` and ``u`` with t_i removed."""
    if not 1 <= i <= u.n:
        raise IndexOutOfRange(f"variable index {i} not in 1..{u.n}")
    return u.exponents[i - 1] % 2, u.drop(i)


def _order_key(exponents: tuple[int, ...]) -> tuple[int, ...]:
    return exponents[::-1]


@dataclass(frozen=True)
class LaurentElement:
    """Finite-support element of F_n; ``terms`` maps exponent vectors to nonzero scalars."""

    field: object
    n: int
    terms: tuple  # sorted tuple of (exponents, scalar)

    @classmethod
    def from_dict(cls, field, n: int, terms: dict) -> "LaurentElement":
        clean = {tuple(e): c for e, c in terms.items() if c}
        for e in clean:
            if len(e) != n:
                raise IndexOutOfRange(f"exponent vector {e} has wrong length for n = {n}")
        return cls(field, n, tuple(sorted(clean.items(), key=lambda kv: _order_key(kv[0]))))

    @classmethod
    def from_unit(cls, u: MonomialUnit) -> "LaurentElement":
        return cls.from_dict(u.field, u.n, {u.exponents: u.scalar})

    @classmethod
    def parse(cls, text: str, field, n: int | None = None) -> "LaurentElement":
        t = text.replace(" ", "")
        pieces = _split_terms(t)
        units = [parse_monomial(p, field, n) for p in pieces]
        if n is None:
            n = max((u.n for u in units), default=0)
            units = [parse_monomial(p, field, n) for p in pieces]
        acc: dict = {}
        for u in units:
            acc[u.exponents] = acc.get(u.exponents, field.element(0)) + u.scalar
        return cls.from_dict(field, n, acc)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc[e] + c if e in acc else c
        return LaurentElement.from_dict(self.field, self.n, acc)

    def __mul__(self, other: "LaurentElement") -> "LaurentElement":
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return LaurentElement.from_dict(self.field, self.n, acc)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = [format_monomial(MonomialUnit(self.field, c, e)) for e, c in self.terms]
        return " + ".join(parts).replace("+ -", "- ")


def leading_unit(f: LaurentElement) -> MonomialUnit:
    """Minimal term of ``f`` in the F_n valuation order.

    ``f = lead * (1 + m)`` with every term of ``m`` of positive valuation, so
    ``f`` and ``lead`` have the same square class in F_n (char != 2).
    """
    if not f.terms:
        raise ZeroElement("zero has no leading term")
    e, c = f.terms[0]
    return MonomialUnit(f.field, c, e)


def as_monomial(f: LaurentElement) -> MonomialUnit:
    """The unit of R_n equal to ``f``; rejects anything that is not a single term."""
    if len(f.terms) != 1:
        raise NonMonomialEntry(f"{f} is not a unit of the Laurent polynomial ring")
    return leading_unit(f)
