"""Base fields and diagonal quadratic forms over them.

Three kinds of base field are supported:

* ``FiniteField(p, e)``: the field with ``p**e`` elements, ``p`` an odd prime.
* ``Rationals()``: the field of rational numbers.
* ``RealClosed()``: a real-closed field whose elements are taken to be
  rationals; only signs matter for square classes.

Scalars of ``Rationals``/``RealClosed`` are :class:`fractions.Fraction`;
scalars of a finite field are :class:`GFElement`.  A diagonal form over ``k``
is kept as a sorted tuple of square classes, which is all the isometry theory
needs.
"""
from __future__ import annotations

import math
from math import gcd, isqrt, lcm
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from . import _kernels
from .errors import FieldMismatch, ParseError, SingularForm, UnsupportedField, ZeroScalar

# Place label for the real embedding of Q in Hilbert-symbol computations.
INFINITE_PLACE = 0


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n > 10**12:
        from sympy import isprime

        return bool(isprime(n))
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=4096)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of ``|n|`` in increasing order."""
    n = abs(n)
    if n > 10**12:
        from sympy import factorint

        return tuple(sorted(factorint(n)))
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def squarefree_part(n: int) -> int:
    """Squarefree integer in the same rational square class as ``n`` (sign kept)."""
    if n == 0:
        raise ZeroScalar("zero has no square class")
    sign = -1 if n < 0 else 1
    m = abs(n)
    out = 1
    for p in prime_factors(m):
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        if k % 2:
            out *= p
    return sign * out


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``e`` over F_p (coefficients low to high)."""
    if e == 1:
        return (0, 1)
    for tail in product(range(p), repeat=e):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        reducible = False
        for deg in range(1, e // 2 + 1):
            for low in product(range(p), repeat=deg):
                if not _poly_mod(f, list(low) + [1], p):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# fields


class GFElement:
    """Element of a finite field, encoded as an integer ``sum c_i p^i``."""

    __slots__ = ("field", "value")

    def __init__(self, field: "FiniteField", value: int):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return GFElement(self.field, self.field._add(self.value, v))

    __radd__ = __add__

    def __neg__(self):
        return GFElement(self.field, self.field._neg(self.value))

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return GFElement(self.field, self.field._add(self.value, self.field._neg(v)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return GFElement(self.field, self.field._mul(self.value, v))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        if self.value == 0:
            raise ZeroScalar("division by zero in finite field")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    def __bool__(self):
        return self.value != 0

    def coefficients(self) -> list[int]:
        p, v, out = self.field.p, self.value, []
        for _ in range(self.field.e):
            out.append(v % p)
            v //= p
        return out

    def __str__(self):
        if self.field.e == 1:
            return str(self.value)
        terms = []
        for i, c in enumerate(self.coefficients()):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"GFElement({self.field.text}, {self})"


@dataclass(frozen=True)
class SquareClass:
    """A class in k^x/(k^x)^2.

    ``label`` is a squarefree integer for Q, the sign for R, and the quadratic
    character (1 or -1, the latter shown as ``nu``) for a finite field.
    """

    field: object
    label: int

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return SquareClass(self.field, self.field._class_mul(self.label, other.label))

    def __neg__(self) -> "SquareClass":
        return self * self.field.minus_one_class

    def __lt__(self, other: "SquareClass") -> bool:
        return self.field._class_key(self.label) < other.field._class_key(other.label)

    def representative(self):
        return self.field._class_rep(self.label)

    def __str__(self):
        return self.field._class_text(self.label)

    def __repr__(self):
        return f"<{self.field.text}:{self}>"


class _Field:
    kind: str

    @property
    def one_class(self) -> SquareClass:
        return SquareClass(self, 1)

    @property
    def minus_one_class(self) -> SquareClass:
        return self.square_class(-self.one)

    def square_class(self, a) -> SquareClass:
        if not a:
            raise ZeroScalar(f"zero has no square class over {self.text}")
        return SquareClass(self, self._label(a))

    def is_square(self, a) -> bool:
        return not a or self._label(a) == 1

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class Rationals(_Field):
    kind = "Q"

    @property
    def text(self) -> str:
        return "Q"

    @property
    def one(self):
        return Fraction(1)

    def element(self, x) -> Fraction:
        return Fraction(x)

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational scalar {text!r}") from exc

    def _label(self, a) -> int:
        a = Fraction(a)
        return squarefree_part(a.numerator * a.denominator)

    def _class_mul(self, x: int, y: int) -> int:
        g = math.gcd(x, y)
        return (x // g) * (y // g)

    def _class_key(self, label: int):
        return (abs(label), label)

    def _class_rep(self, label: int) -> Fraction:
        return Fraction(label)

    def _class_text(self, label: int) -> str:
        return str(label)

    def parse_class(self, text: str) -> SquareClass:
        return self.square_class(self.parse(text))


@dataclass(frozen=True)
class RealClosed(_Field):
    kind = "R"

    @property
    def text(self) -> str:
        return "R"

    @property
    def one(self):
        return Fraction(1)

    def element(self, x) -> Fraction:
        return Fraction(x)

    def parse(self, text: str) -> Fraction:
        return Rationals.parse(self, text)

    def _label(self, a) -> int:
        return 1 if a > 0 else -1

    def _class_mul(self, x: int, y: int) -> int:
        return x * y

    def _class_key(self, label: int):
        return label

    def _class_rep(self, label: int) -> Fraction:
        return Fraction(label)

    def _class_text(self, label: int) -> str:
        return "+1" if label == 1 else "-1"

    def parse_class(self, text: str) -> SquareClass:
        return self.square_class(self.parse(text))

    def square_classes(self) -> list[SquareClass]:
        return [SquareClass(self, -1), SquareClass(self, 1)]


@dataclass(frozen=True)
class FiniteField(_Field):
    p: int
    e: int = 1
    kind = "Fq"

    def __post_init__(self):
        if self.p == 2 or not is_prime(self.p):
            raise UnsupportedField(f"characteristic must be an odd prime, got {self.p}")
        if self.e < 1:
            raise UnsupportedField(f"extension degree must be >= 1, got {self.e}")

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def text(self) -> str:
        return f"Fq:{self.q}"

    @cached_property
    def modulus(self) -> tuple[int, ...]:
        return _find_irreducible(self.p, self.e)

    def _digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    def _encode(self, coeffs: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(coeffs)[: self.e]):
            v = v * self.p + c % self.p
        return v

    def _add(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x + y) % self.p
        return self._encode([a + b for a, b in zip(self._digits(x), self._digits(y))])

    def _neg(self, x: int) -> int:
        if self.e == 1:
            return -x % self.p
        return self._encode([-a for a in self._digits(x)])

    def _mul(self, x: int, y: int) -> int:
        if self.e == 1:
            return x * y % self.p
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * self.e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self._encode(_poly_mod(prod, self.modulus, self.p))

    @property
    def one(self) -> GFElement:
        return GFElement(self, 1)

    @property
    def zero(self) -> GFElement:
        return GFElement(self, 0)

    @property
    def generator(self) -> GFElement:
        """The class of ``z`` in F_p[z]/(modulus); only defined when e > 1."""
        if self.e == 1:
            raise ParseError("symbol 'z' is only defined for proper extensions")
        return GFElement(self, self.p)

    def element(self, x) -> GFElement:
        if isinstance(x, GFElement):
            if x.field != self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroScalar(f"{x} has denominator divisible by {self.p}")
            return GFElement(self, x.numerator % self.p) / GFElement(self, x.denominator % self.p)
        return GFElement(self, int(x) % self.p)

    def elements(self) -> list[GFElement]:
        return [GFElement(self, v) for v in range(self.q)]

    def parse(self, text: str) -> GFElement:
        text = text.strip().replace(" ", "")
        m = re.fullmatch(r"([+-]?)z(?:\^(\d+))?", text)
        if m:
            x = self.generator ** int(m.group(2) or 1)
            return -x if m.group(1) == "-" else x
        try:
            return self.element(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {text!r} for {self.text}") from exc

    def _label(self, a) -> int:
        a = self.element(a)
        return 1 if (a ** ((self.q - 1) // 2)).value == 1 else -1

    @cached_property
    def nonresidue(self) -> GFElement:
        """Fixed quadratic non-residue: the one with the smallest integer encoding."""
        for v in range(2, self.q):
            if self._label(GFElement(self, v)) == -1:
                return GFElement(self, v)
        raise AssertionError("no non-residue")  # unreachable for odd q

    def _class_mul(self, x: int, y: int) -> int:
        return x * y

    def _class_key(self, label: int):
        return 0 if label == 1 else 1

    def _class_rep(self, label: int) -> GFElement:
        return self.one if label == 1 else self.nonresidue

    def _class_text(self, label: int) -> str:
        return "1" if label == 1 else "nu"

    def parse_class(self, text: str) -> SquareClass:
        if text.strip() == "nu":
            return SquareClass(self, -1)
        return self.square_class(self.parse(text))

    def square_classes(self) -> list[SquareClass]:
        return [SquareClass(self, 1), SquareClass(self, -1)]

    @cached_property
    def tables(self) -> tuple[list[list[int]], list[list[int]]]:
        """Addition and multiplication tables on the integer encoding."""
        q = self.q
        add = [[self._add(x, y) for y in range(q)] for x in range(q)]
        mul = [[self._mul(x, y) for y in range(q)] for x in range(q)]
        return add, mul


def parse_field(text: str):
    """Parse the canonical spelling ``"Q"``, ``"R"`` or ``"Fq:<q>"``."""
    t = text.strip()
    if t == "Q":
        return Rationals()
    if t == "R":
        return RealClosed()
    m = re.fullmatch(r"Fq:(\d+)", t)
    if not m:
        raise ParseError(f"unknown field {text!r}; expected Q, R or Fq:<q>")
    q = int(m.group(1))
    ps = prime_factors(q)
    if len(ps) != 1:
        raise UnsupportedField(f"{q} is not a prime power")
    p = ps[0]
    e = round(math.log(q, p))
    while p**e < q:
        e += 1
    while p**e > q:
        e -= 1
    return FiniteField(p, e)


def square_class(k, a) -> SquareClass:
    """Canonical square-class label of the nonzero scalar ``a``."""
    return k.square_class(k.element(a))


# ---------------------------------------------------------------------------
# diagonal forms over k


@dataclass(frozen=True)
class KDiagonalForm:
    field: object
    entries: tuple[SquareClass, ...]

    def __post_init__(self):
        for c in self.entries:
            if c.field != self.field:
                raise FieldMismatch(f"entry over {c.field} in form over {self.field}")
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @classmethod
    def of(cls, field, values: Iterable) -> "KDiagonalForm":
        """Build from scalars, ints, strings or square classes."""
        out = []
        for v in values:
            if isinstance(v, SquareClass):
                out.append(v)
                continue
            if isinstance(v, str):
                v = field.parse(v)
            else:
                v = field.element(v)
            if not v:
                raise SingularForm("diagonal entry is zero")
            out.append(field.square_class(v))
        return cls(field, tuple(out))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def perp(self, other: "KDiagonalForm") -> "KDiagonalForm":
        _same_field(self, other)
        return KDiagonalForm(self.field, self.entries + other.entries)

    def scaled(self, c: SquareClass) -> "KDiagonalForm":
        return KDiagonalForm(self.field, tuple(x * c for x in self.entries))

    def negated(self) -> "KDiagonalForm":
        return self.scaled(self.field.minus_one_class)

    def discriminant(self) -> SquareClass:
        d = self.field.one_class
        for x in self.entries:
            d = d * x
        return d

    def labels(self) -> list[str]:
        return [str(x) for x in self.entries]

    def __str__(self):
        return "<" + ", ".join(self.labels()) + ">"


def _same_field(f: KDiagonalForm, g: KDiagonalForm) -> None:
    if f.field != g.field:
        raise FieldMismatch(f"{f.field} vs {g.field}")


def hyperbolic_plane(field) -> KDiagonalForm:
    return KDiagonalForm(field, (field.one_class, field.minus_one_class))


# ---------------------------------------------------------------------------
# local theory over Q


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _split_p(a: int, p: int) -> tuple[int, int]:
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k, a


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers; ``p = INFINITE_PLACE`` is the real place."""
    if a == 0 or b == 0:
        raise ZeroScalar("Hilbert symbol of zero")
    if p == INFINITE_PLACE:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p != 2:
        s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        if beta % 2:
            s *= _legendre(u, p)
        if alpha % 2:
            s *= _legendre(v, p)
        return s

    def eps(x):
        return 0 if x % 4 == 1 else 1

    def omega(x):
        return 0 if x % 8 in (1, 7) else 1

    e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if e % 2 else 1


def _is_local_square(d: int, p: int) -> bool:
    """Is the squarefree integer ``d`` a square in Q_p?"""
    if p == INFINITE_PLACE:
        return d > 0
    if d % p == 0:
        return False
    if p == 2:
        return d % 8 == 1
    return _legendre(d, p) == 1


def _hasse(labels: Sequence[int], p: int) -> int:
    s = 1
    for a, b in combinations(labels, 2):
        s *= hilbert_symbol(a, b, p)
    return s


def _relevant_primes(labels: Iterable[int]) -> list[int]:
    ps = {2}
    for a in labels:
        ps.update(prime_factors(a))
    return sorted(ps)


def _locally_isotropic(labels: Sequence[int], p: int) -> bool:
    n = len(labels)
    if n <= 1:
        return False
    d = squarefree_part(math.prod(labels))
    if n == 2:
        return _is_local_square(-d, p)
    if p == INFINITE_PLACE:
        return min(labels) < 0 < max(labels)
    if n >= 5:
        return True
    eps = _hasse(labels, p)
    if n == 3:
        return hilbert_symbol(-1, -d, p) == eps
    return not _is_local_square(d, p) or eps == hilbert_symbol(-1, -1, p)


@lru_cache(maxsize=65536)
def _rational_isotropic(labels: tuple[int, ...]) -> bool:
    n = len(labels)
    if n <= 1:
        return False
    if n == 2:
        return squarefree_part(-labels[0] * labels[1]) == 1
    if not min(labels) < 0 < max(labels):
        return False
    if n >= 5:
        return True
    return all(_locally_isotropic(labels, p) for p in _relevant_primes(labels))


# ---------------------------------------------------------------------------
# isotropy, Witt decomposition, isometry


def _check_nonsingular(q: KDiagonalForm) -> None:
    for c in q.entries:
        if not isinstance(c, SquareClass):
            raise SingularForm("entries must be nonzero square classes")


def is_isotropic_k(q: KDiagonalForm) -> bool:
    """Does ``q`` have a nonzero isotropic vector over its base field?"""
    _check_nonsingular(q)
    k, d = q.field, q.dim
    if d <= 1:
        return False
    if isinstance(k, FiniteField):
        if d >= 3:
            return True
        return (-(q.entries[0] * q.entries[1])).label == 1
    if isinstance(k, RealClosed):
        return len({c.label for c in q.entries}) == 2
    return _rational_isotropic(tuple(c.label for c in q.entries))


def exhaustive_isotropic(q: KDiagonalForm) -> bool:
    """Brute-force isotropy over a finite field by enumerating all of k^d."""
    k = q.field
    if not isinstance(k, FiniteField):
        raise UnsupportedField("exhaustive search needs a finite field")
    add, mul = k.tables
    coeffs = [c.representative().value for c in q.entries]
    return _kernels.finite_field_has_zero(coeffs, add, mul)


def _cancel_pairs(classes: list[SquareClass]) -> tuple[list[SquareClass], int]:
    """Greedily remove pairs <a, b> with -ab a square."""
    rest = sorted(classes)
    count = 0
    changed = True
    while changed:
        changed = False
        for i, j in combinations(range(len(rest)), 2):
            if rest[i] == -rest[j]:
                del rest[j], rest[i]
                count += 1
                changed = True
                break
    return rest, count


def _finite_field_kernel(q: KDiagonalForm) -> tuple[KDiagonalForm, int]:
    # Over F_q a form is determined by dimension and discriminant.
    k, d = q.field, q.dim
    disc = q.discriminant()
    minus = k.minus_one_class
    if d % 2:
        c = disc * (minus if (d // 2) % 2 else k.one_class)
        return KDiagonalForm(k, (c,)), d // 2
    hyperbolic_disc = minus if (d // 2) % 2 else k.one_class
    if disc == hyperbolic_disc:
        return KDiagonalForm(k, ()), d // 2
    c = disc * (minus if ((d - 2) // 2) % 2 else k.one_class)
    return KDiagonalForm(k, (k.one_class, c)), (d - 2) // 2


@lru_cache(maxsize=None)
def witt_decompose_k(q: KDiagonalForm) -> tuple[KDiagonalForm, int]:
    """Split ``q`` as anisotropic kernel plus ``witt_index`` hyperbolic planes.

    The kernel is a deterministic function of the multiset of entries; over
    a finite field it is the canonical representative of its isometry class,
    and an anisotropic input over Q or R is returned unchanged.
    """
    _check_nonsingular(q)
    k = q.field
    if isinstance(k, FiniteField):
        return _finite_field_kernel(q)
    rest, index = _cancel_pairs(list(q.entries))
    if isinstance(k, RealClosed) or not is_isotropic_k(KDiagonalForm(k, tuple(rest))):
        return KDiagonalForm(k, tuple(rest)), index
    labels = [c.label for c in rest]
    v = _rational_isotropic_vector(labels)
    complement = _hyperbolic_complement(labels, v)
    kernel, more = witt_decompose_k(KDiagonalForm.of(k, complement))
    return kernel, index + 1 + more


def witt_index(q: KDiagonalForm) -> int:
    return witt_decompose_k(q)[1]


def is_isometric_k(f: KDiagonalForm, g: KDiagonalForm) -> bool:
    """Isometry over k, decided by the classical invariants of each field."""
    _same_field(f, g)
    if f.dim != g.dim:
        return False
    k = f.field
    if isinstance(k, RealClosed):
        return f.entries == g.entries
    if f.discriminant() != g.discriminant():
        return False
    if isinstance(k, FiniteField):
        return True
    a = [c.label for c in f.entries]
    b = [c.label for c in g.entries]
    if sum(x < 0 for x in a) != sum(x < 0 for x in b):
        return False
    return all(_hasse(a, p) == _hasse(b, p) for p in _relevant_primes(a + b))


def is_isometric_by_witt(f: KDiagonalForm, g: KDiagonalForm) -> bool:
    """Isometry via the Witt index of f + (-g); slower, used as a cross-check."""
    _same_field(f, g)
    return f.dim == g.dim and witt_index(f.perp(g.negated())) == f.dim


# ---------------------------------------------------------------------------
# explicit isotropic vectors over Q


def _ternary_normal(a: int, b: int, c: int) -> tuple[tuple[int, int, int], tuple[Fraction, Fraction, Fraction]]:
    """Reduce to squarefree pairwise coprime coefficients.

    Returns the reduced coefficients and scale factors ``s`` such that a zero
    ``v`` of the reduced form gives the zero ``(s_i v_i)`` of the original.
    """
    coeffs = [a, b, c]
    scale = [Fraction(1)] * 3
    for i in range(3):
        sf = squarefree_part(coeffs[i])
        scale[i] /= _isqrt_exact(coeffs[i] // sf)
        coeffs[i] = sf
    changed = True
    while changed:
        changed = False
        for i, j in combinations(range(3), 2):
            g = gcd(coeffs[i], coeffs[j])
            if abs(g) == 1:
                continue
            g = abs(g)
            # g*(a'x^2 + b'y^2 + c z^2): substitute x = X/g, y = Y/g
            k = 3 - i - j
            coeffs[i] //= g
            coeffs[j] //= g
            scale[i] /= g
            scale[j] /= g
            coeffs[k] *= g
            sf = squarefree_part(coeffs[k])
            scale[k] /= _isqrt_exact(coeffs[k] // sf)
            coeffs[k] = sf
            changed = True
    return tuple(coeffs), tuple(scale)


def _isqrt_exact(n: int) -> int:
    r = isqrt(n)
    assert r * r == n
    return r


@lru_cache(maxsize=4096)
def _ternary_zero(a: int, b: int, c: int) -> tuple[int, int, int]:
    from sympy import symbols
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

    (ra, rb, rc), scale = _ternary_normal(a, b, c)
    x, y, z = symbols("x y z", integer=True)
    sol = diop_ternary_quadratic_normal(ra * x**2 + rb * y**2 + rc * z**2)
    if sol[0] is None:
        raise AssertionError(f"<{a},{b},{c}> reported isotropic but no solution found")
    vec = [Fraction(int(v)) * s for v, s in zip(sol, scale)]
    den = lcm(*(v.denominator for v in vec))
    out = tuple(int(v * den) for v in vec)
    g = gcd(*out)
    out = tuple(v // g for v in out)
    assert a * out[0] ** 2 + b * out[1] ** 2 + c * out[2] ** 2 == 0 and any(out)
    return out


def _rational_isotropic_vector(labels: list[int]) -> list[Fraction]:
    """A nonzero isotropic vector of the isotropic diagonal form ``labels``."""
    n = len(labels)
    for i, j in combinations(range(n), 2):
        r = Fraction(-labels[i] * labels[j])
        # -ab = s^2 * ... ; a x^2 + b y^2 = 0 with x = b, y = s when -ab is a square
        s = math.isqrt(abs(r.numerator))
        if r > 0 and s * s == r:
            v = [Fraction(0)] * n
            v[i], v[j] = Fraction(labels[j]), Fraction(s)
            return v
    if n == 3:
        return [Fraction(x) for x in _ternary_zero(*labels)]
    # small coordinate subforms keep the coefficients small
    for size in range(3, n):
        for sub in combinations(range(n), size):
            picked = [labels[i] for i in sub]
            if _rational_isotropic(tuple(sorted(picked))):
                w = _rational_isotropic_vector(picked)
                v = [Fraction(0)] * n
                for i, x in zip(sub, w):
                    v[i] = x
                return v
    head, rest = labels[:2], labels[2:]
    if _rational_isotropic(tuple(sorted(rest))):
        return [Fraction(0)] * 2 + _rational_isotropic_vector(rest)
    # r represented by <a,b> with rest + <r> isotropic, then lift both zeros
    r = _bridging_value(tuple(head), tuple(rest))
    x, y, z = _ternary_zero(head[0], head[1], -r)
    w = _rational_isotropic_vector(rest + [r])
    # z != 0 and w[-1] != 0 because neither <a,b> nor rest is isotropic
    u = w[-1]
    return [Fraction(x, z) * u, Fraction(y, z) * u] + w[:-1]


def _local_class_reps(p: int) -> list[int]:
    """Integers representing every square class of Q_p (p prime)."""
    if p == 2:
        return [u * e for e in (1, 2) for u in (1, 3, 5, 7)]
    nonres = next(c for c in range(2, p) if pow(c, (p - 1) // 2, p) == p - 1)
    return [u * e for e in (1, p) for u in (1, nonres)]


def _bridging_value(head: tuple[int, int], rest: tuple[int, ...]) -> int:
    """Squarefree r with <a,b,-r> and rest + <r> both isotropic over Q.

    Pick r's class at each bad place, then realise it as
    sign * prod p^e * l with l prime in an arithmetic progression; at l both
    forms are isotropic by reciprocity or by having a unit subform of rank 3.
    """
    from sympy.ntheory.modular import crt

    a, b = head

    def good(c: int, place: int) -> bool:
        return _locally_isotropic((a, b, -c), place) and _locally_isotropic(rest + (c,), place)

    sign = next(s for s in (1, -1) if good(s, INFINITE_PLACE))
    wanted = {q: next(c for c in _local_class_reps(q) if good(c, q)) for q in _relevant_primes(head + rest)}
    core = sign * math.prod(q for q, c in wanted.items() if c % q == 0)
    # unit part of core * l must land in the chosen unit class at each q
    residues, moduli = [], []
    for q, c in wanted.items():
        unit_c = c // q if c % q == 0 else c
        other = core // q if core % q == 0 else core
        if q == 2:
            residues.append(unit_c * pow(other, -1, 8) % 8)
            moduli.append(8)
        else:
            target = _legendre(unit_c, q) * _legendre(other, q)
            residues.append(next(t for t in range(1, q) if _legendre(t, q) == target))
            moduli.append(q)
    base, modulus = (int(v) for v in crt(moduli, residues)) if moduli else (1, 1)
    ell = base if base > 1 else base + modulus
    while not is_prime(ell) or ell in wanted:
        ell += modulus
    r = core * ell
    assert _rational_isotropic(tuple(sorted((a, b, -r)))) and _rational_isotropic(tuple(sorted(rest + (r,))))
    return r


def _nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def diagonalize(gram: list[list[Fraction]]) -> list[Fraction]:
    """Diagonal entries of a nondegenerate symmetric matrix after congruence."""
    g = [list(map(Fraction, row)) for row in gram]
    out = []
    while g:
        n = len(g)
        i = next((i for i in range(n) if g[i][i] != 0), None)
        if i is None:
            i, j = next((i, j) for i in range(n) for j in range(n) if g[i][j] != 0)
            # replace basis vector i by e_i + e_j: diagonal becomes 2 g_ij
            for c in range(n):
                g[i][c] += g[j][c]
            for r in range(n):
                g[r][i] += g[r][j]
        piv = g[i][i]
        out.append(piv)
        for r in range(n):
            if r != i and g[r][i] != 0:
                f = g[r][i] / piv
                g[r] = [x - f * y for x, y in zip(g[r], g[i])]
        g = [[g[r][c] for c in range(n) if c != i] for r in range(n) if r != i]
    return out


def _hyperbolic_complement(labels: list[int], v: list[Fraction]) -> list[Fraction]:
    """Diagonal entries of q' with q = H + q', given an isotropic vector ``v``.

    With a = labels[k], v_k != 0, the rest represents -a by w = v / v_k; the
    complement of w in <b_1..b_s> is <b_{j+1} P_j P_{j+1}> for the partial
    sums P_j of b_i w_i^2, entries off the support passing through.
    """
    n = len(labels)
    support = [i for i in range(n) if v[i] != 0]
    k = support[0]
    others = support[1:]
    out = [Fraction(labels[i]) for i in range(n) if v[i] == 0]
    partial = []
    acc = Fraction(0)
    for i in others:
        acc += labels[i] * (v[i] / v[k]) ** 2
        partial.append(acc)
    if any(p == 0 for p in partial):
        return _generic_complement(labels, v)
    for j in range(len(others) - 1):
        out.append(labels[others[j + 1]] * partial[j] * partial[j + 1])
    return out


def _generic_complement(labels: list[int], v: list[Fraction]) -> list[Fraction]:
    n = len(labels)
    k = next(i for i in range(n) if v[i] != 0)
    gv = [a * x for a, x in zip(labels, v)]
    ek = [Fraction(0)] * n
    ek[k] = Fraction(labels[k])
    basis = _nullspace([gv, ek], n)
    gram = [[sum(a * x * y for a, x, y in zip(labels, bi, bj)) for bj in basis] for bi in basis]
    return diagonalize(gram)
