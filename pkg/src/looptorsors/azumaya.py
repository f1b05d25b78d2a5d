"""Toral Azumaya algebras over R_n through their Brauer matrices.

The tensor product ``M_{s0} (x) A(t1,t2)^{s1}_{r1} (x) ... (x) A(t_{2m-1},t_{2m})^{sm}_{rm}``
is recorded by the skew-symmetric matrix over Q/Z with ``r_k/s_k`` at position
(2k-1, 2k).  GL_n(Z) acts on the Laurent variables and hence on these
matrices by congruence ``B -> g B g^T``.  The alternating Smith form of ``B``
(blocks ``q_1, q_2, ...`` with ``ord(q_{k+1}) | ord(q_k)``) gives the orbit
invariants; the product of block orders is the index of the class.

All fractions are kept reduced in [0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _kernels
from .errors import (
    DegreeIncompatible,
    IndexOutOfRange,
    InvalidDescriptor,
    NotUnimodular,
    ParseError,
    SizeMismatch,
)

DEFAULT_BUDGET = 10**5


def _mod1(x) -> Fraction:
    x = Fraction(x)
    return x - math.floor(x)


def parse_fraction(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return _mod1(text)
    try:
        return _mod1(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad fraction {text!r}") from exc


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class SymbolFactor:
    s: int
    r: int
    i: int
    j: int

    def to_json(self) -> dict:
        return {"s": self.s, "r": self.r, "i": self.i, "j": self.j}


@dataclass(frozen=True)
class ToralDescriptor:
    n: int
    d: int
    m: int
    s0: int
    factors: tuple[SymbolFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        self.validate()

    def validate(self) -> None:
        if len(self.factors) != self.m:
            raise InvalidDescriptor(f"m = {self.m} but {len(self.factors)} factors given")
        if not 0 <= 2 * self.m <= self.n:
            raise InvalidDescriptor(f"need 0 <= 2m <= n, got m = {self.m}, n = {self.n}")
        if self.s0 < 1:
            raise InvalidDescriptor(f"need s0 >= 1, got {self.s0}")
        for k, f in enumerate(self.factors, start=1):
            if f.s < 1 or not 1 <= f.r <= f.s:
                raise InvalidDescriptor(f"factor {k}: need 1 <= r <= s, got r = {f.r}, s = {f.s}")
            if math.gcd(f.r, f.s) != 1:
                raise InvalidDescriptor(f"factor {k}: need gcd(r, s) = 1, got r = {f.r}, s = {f.s}")
            if (f.i, f.j) != (2 * k - 1, 2 * k):
                raise InvalidDescriptor(
                    f"factor {k} must sit on variables ({2 * k - 1}, {2 * k}), got ({f.i}, {f.j})"
                )
        prod = self.s0 * math.prod(f.s for f in self.factors)
        if prod != self.d:
            raise InvalidDescriptor(f"need s0*s1*...*sm = d, got {prod} != {self.d}")

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "m": self.m,
            "s0": self.s0,
            "factors": [f.to_json() for f in self.factors],
        }

    @classmethod
    def from_json(cls, obj: dict, d: int | None = None, n: int | None = None) -> "ToralDescriptor":
        """Read a descriptor; missing ``n``, ``d``, ``m``, ``s0`` or factor positions are inferred."""
        raw = obj.get("factors", [])
        factors = []
        for k, f in enumerate(raw, start=1):
            try:
                factors.append(
                    SymbolFactor(int(f["s"]), int(f["r"]), int(f.get("i", 2 * k - 1)), int(f.get("j", 2 * k)))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidDescriptor(f"factor {k} needs integer fields s and r") from exc
        prod = math.prod(f.s for f in factors)
        dd = obj.get("d", d)
        if d is not None and dd != d:
            raise InvalidDescriptor(f"descriptor degree {dd} disagrees with requested degree {d}")
        s0 = obj.get("s0")
        if dd is None:
            dd = (s0 or 1) * prod
        if s0 is None:
            if prod == 0 or dd % prod:
                raise InvalidDescriptor(f"degree {dd} is not a multiple of s1*...*sm = {prod}")
            s0 = dd // prod
        nn = obj.get("n", n)
        if nn is None:
            nn = max([2 * len(factors)] + [max(f.i, f.j) for f in factors])
        return cls(int(nn), int(dd), int(obj.get("m", len(factors))), int(s0), tuple(factors))


def enumerate_toral(d: int, n: int) -> list[ToralDescriptor]:
    """All descriptors of degree ``d`` on ``n`` variables.

    Ordered by ``m`` and then lexicographically on ``(s1, r1, s2, r2, ...)``.
    Symbol factors have degree ``s >= 2``; a degree-1 symbol is the trivial
    algebra and would only re-list a descriptor with smaller ``m``.
    GL_n(Z)-orbits are not merged here.
    """
    if d < 1:
        raise InvalidDescriptor(f"degree must be >= 1, got {d}")
    out = []
    for m in range(n // 2 + 1):
        out.extend(_toral_with_m(d, n, m))
    return out


def _toral_with_m(d: int, n: int, m: int) -> list[ToralDescriptor]:
    out = []

    def rec(k: int, remaining: int, acc: list[SymbolFactor]):
        if k > m:
            out.append(ToralDescriptor(n, d, m, remaining, tuple(acc)))
            return
        for s in range(2, remaining + 1):
            if remaining % s:
                continue
            for r in range(1, s):
                if math.gcd(r, s) == 1:
                    rec(k + 1, remaining // s, acc + [SymbolFactor(s, r, 2 * k - 1, 2 * k)])

    rec(1, d, [])
    return out


# ---------------------------------------------------------------------------
# Brauer matrices


@dataclass(frozen=True)
class BrauerMatrix:
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_mod1(x) for x in row) for row in self.entries)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise SizeMismatch(f"expected a {self.n}x{self.n} matrix")
        for i in range(self.n):
            if rows[i][i] != 0:
                raise InvalidDescriptor(f"diagonal entry ({i + 1},{i + 1}) is not 0 mod 1")
            for j in range(i + 1, self.n):
                if _mod1(rows[i][j] + rows[j][i]) != 0:
                    raise InvalidDescriptor(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zero(cls, n: int) -> "BrauerMatrix":
        return cls(n, tuple((Fraction(0),) * n for _ in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "BrauerMatrix":
        return cls(len(rows), tuple(tuple(parse_fraction(x) for x in row) for row in rows))

    @classmethod
    def from_upper(cls, n: int, values: dict) -> "BrauerMatrix":
        """Build from ``{(i, j): q}`` with 1-based ``i < j``; the lower half is filled by skewness."""
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), q in values.items():
            q = parse_fraction(q)
            rows[i - 1][j - 1] = q
            rows[j - 1][i - 1] = -q
        return cls(n, tuple(tuple(r) for r in rows))

    @classmethod
    def from_integer(cls, m: Sequence[Sequence[int]], modulus: int) -> "BrauerMatrix":
        return cls(len(m), tuple(tuple(Fraction(x, modulus) for x in row) for row in m))

    @property
    def modulus(self) -> int:
        """Least common denominator; also the additive order of the class."""
        return math.lcm(1, *(x.denominator for row in self.entries for x in row))

    def integer_matrix(self, modulus: int | None = None) -> list[list[int]]:
        N = modulus or self.modulus
        return [[int(x * N) % N for x in row] for row in self.entries]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(x) for x in row] for row in self.entries]

    def __str__(self):
        return "\n".join(" ".join(f"{format_fraction(x):>6}" for x in row) for row in self.entries)


def additive_order(b: BrauerMatrix) -> int:
    return b.modulus


def brauer_matrix(t: ToralDescriptor) -> BrauerMatrix:
    t.validate()
    return BrauerMatrix.from_upper(t.n, {(f.i, f.j): Fraction(f.r, f.s) for f in t.factors})


def tensor(a: BrauerMatrix, b: BrauerMatrix) -> BrauerMatrix:
    """Brauer class of the tensor product: entrywise sum mod 1."""
    if a.n != b.n:
        raise SizeMismatch(f"{a.n}x{a.n} vs {b.n}x{b.n}")
    return BrauerMatrix(
        a.n, tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.entries, b.entries))
    )


def ramification_row(b: BrauerMatrix, i: int) -> list[Fraction]:
    """Row ``i`` without its diagonal entry; zero exactly when the class is unramified at t_i."""
    if not 1 <= i <= b.n:
        raise IndexOutOfRange(f"variable index {i} not in 1..{b.n}")
    return [x for j, x in enumerate(b.entries[i - 1], start=1) if j != i]


# ---------------------------------------------------------------------------
# integer matrix helpers


def determinant(g: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in g]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return int(det)


def inverse_unimodular(g: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(g)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise NotUnimodular("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = [[x for x in row[n:]] for row in m]
    if any(x.denominator != 1 for row in out for x in row):
        raise NotUnimodular("inverse is not integral")
    return [[int(x) for x in row] for row in out]


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _check_unimodular(g, n: int) -> list[list[int]]:
    try:
        g = [[int(x) for x in row] for row in g]
    except (TypeError, ValueError) as exc:
        raise NotUnimodular("matrix entries must be integers") from exc
    if len(g) != n or any(len(r) != n for r in g):
        raise SizeMismatch(f"expected a {n}x{n} integer matrix")
    if determinant(g) not in (1, -1):
        raise NotUnimodular(f"determinant {determinant(g)} is not +-1")
    return g


def unimodular_act(g, b: BrauerMatrix) -> BrauerMatrix:
    """``g B g^T`` reduced mod 1, for ``g`` in GL_n(Z)."""
    g = _check_unimodular(g, b.n)
    N = b.modulus
    m = b.integer_matrix(N)
    out = matmul(matmul(g, m), [list(c) for c in zip(*g)])
    return BrauerMatrix.from_integer([[x % N for x in row] for row in out], N)


# ---------------------------------------------------------------------------
# alternating normal form


@dataclass(frozen=True)
class SkewNormalForm:
    n: int
    blocks: tuple[Fraction, ...]

    @property
    def rank_zero(self) -> int:
        return self.n - 2 * len(self.blocks)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(q.denominator for q in self.blocks)

    @property
    def index(self) -> int:
        return math.prod(self.orders)

    def matrix(self) -> BrauerMatrix:
        return BrauerMatrix.from_upper(self.n, {(2 * k + 1, 2 * k + 2): q for k, q in enumerate(self.blocks)})

    def to_json(self) -> dict:
        return {
            "blocks": [format_fraction(q) for q in self.blocks],
            "orders": list(self.orders),
            "rank_zero": self.rank_zero,
            "index": self.index,
        }


class _Reducer:
    """Symmetric row/column operations on a skew matrix over Z/N, tracking the witness U."""

    def __init__(self, m: list[list[int]], modulus: int):
        self.m = m
        self.N = modulus
        self.n = len(m)
        self.u = identity(self.n)

    def add(self, k: int, j: int, c: int) -> None:
        # x_k += c x_j
        if c == 0:
            return
        m, N = self.m, self.N
        m[k] = [(x + c * y) % N for x, y in zip(m[k], m[j])]
        for row in m:
            row[k] = (row[k] + c * row[j]) % N
        self.u[k] = [x + c * y for x, y in zip(self.u[k], self.u[j])]

    def swap(self, a: int, b: int) -> None:
        if a == b:
            return
        m = self.m
        m[a], m[b] = m[b], m[a]
        for row in m:
            row[a], row[b] = row[b], row[a]
        self.u[a], self.u[b] = self.u[b], self.u[a]

    def pair(self, j: int, k: int, a: int, b: int, c: int, d: int) -> None:
        # (x_j, x_k) -> (a x_j + b x_k, c x_j + d x_k), ad - bc = 1
        m, N = self.m, self.N
        rj, rk = m[j], m[k]
        m[j] = [(a * x + b * y) % N for x, y in zip(rj, rk)]
        m[k] = [(c * x + d * y) % N for x, y in zip(rj, rk)]
        for row in m:
            xj, xk = row[j], row[k]
            row[j] = (a * xj + b * xk) % N
            row[k] = (c * xj + d * xk) % N
        uj, uk = self.u[j], self.u[k]
        self.u[j] = [a * x + b * y for x, y in zip(uj, uk)]
        self.u[k] = [c * x + d * y for x, y in zip(uj, uk)]

    def euclid(self, row: int, j: int, k: int) -> None:
        """Replace m[row][j] by gcd(m[row][j], m[row][k]) and zero m[row][k]."""
        a, b = self.m[row][j], self.m[row][k]
        g, x, y = _ext_gcd(a, b)
        self.pair(j, k, x, y, -b // g, a // g)

    def solve(self, a: int, x: int) -> int:
        """c with c*a = x (mod N); requires gcd(a, N) | x."""
        N = self.N
        g = math.gcd(a, N)
        return (x // g) * pow(a // g, -1, N // g) % (N // g) if N // g > 1 else 0


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def skew_normal_form(b: BrauerMatrix) -> tuple[SkewNormalForm, list[list[int]]]:
    """Alternating normal form of ``b`` under GL_n(Z) with a witness ``U``.

    ``unimodular_act(U, b)`` equals ``nf.matrix()``.  Pivot rule: the entry of
    maximal additive order, ties broken by the lowest position (i, j).
    """
    n, N = b.n, b.modulus
    red = _Reducer(b.integer_matrix(N), N)
    m = red.m
    blocks = []
    top = 0
    while top + 1 < n:
        cands = [
            (math.gcd(m[i][j], N), i, j)
            for i in range(top, n)
            for j in range(i + 1, n)
            if m[i][j] % N
        ]
        if not cands:
            break
        _, i, j = min(cands)
        red.swap(i, top)
        red.swap(j, top + 1)
        p, q = top, top + 1
        while True:
            g = math.gcd(m[p][q], N)
            bad = next(
                ((r, k) for k in range(q + 1, n) for r in (p, q) if m[r][k] % g), None
            )
            if bad is not None:
                r, k = bad
                red.euclid(r, q if r == p else p, k)
                continue
            for k in range(q + 1, n):
                red.add(k, q, -red.solve(m[p][q], m[p][k]))
                red.add(k, p, -red.solve(m[q][p], m[q][k]))
            rest = next(
                ((r, s) for r in range(q + 1, n) for s in range(r + 1, n) if m[r][s] % g), None
            )
            if rest is None:
                break
            red.add(p, rest[0], 1)
        blocks.append(Fraction(m[p][q], N))
        top += 2
    return SkewNormalForm(n, tuple(blocks)), red.u


def index_and_split(b: BrauerMatrix, d: int) -> tuple[int, int]:
    """Index of the class and the matrix-algebra factor ``s0 = d / index``."""
    if d < 1:
        raise DegreeIncompatible(f"degree must be >= 1, got {d}")
    nf, _ = skew_normal_form(b)
    index = nf.index
    if d % index:
        raise DegreeIncompatible(f"index {index} does not divide degree {d}")
    return index, d // index


# ---------------------------------------------------------------------------
# orbit equivalence


@dataclass(frozen=True)
class Verdict:
    verdict: str  # "equivalent" | "distinct" | "unknown"
    witness: tuple[tuple[int, ...], ...] | None = None
    invariant: str | None = None
    visited: int = 0
    detail: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "visited": self.visited}
        if self.witness is not None:
            out["witness"] = [list(r) for r in self.witness]
        if self.invariant is not None:
            out["invariant"] = self.invariant
        out.update(self.detail)
        return out


def _move_matrix(n: int, move) -> list[list[int]]:
    kind, i, j = move
    e = identity(n)
    if kind == 0:
        e[i][j] = 1
    elif kind == 1:
        e[i][i] = e[j][j] = 0
        e[i][j] = e[j][i] = 1
    else:
        e[i][i] = -1
    return e


def orbit_equivalent(a: BrauerMatrix, b: BrauerMatrix, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide whether ``b = g a g^T`` for some g in GL_n(Z).

    Invariants are compared first; when they agree a breadth-first search
    over transvections, swaps and sign flips runs between the two normal
    forms, visiting at most ``budget`` matrices.
    """
    if a.n != b.n:
        raise SizeMismatch(f"{a.n}x{a.n} vs {b.n}x{b.n}")
    n = a.n
    na, ua = skew_normal_form(a)
    nb, ub = skew_normal_form(b)
    if sorted(na.orders) != sorted(nb.orders):
        return Verdict(
            "distinct",
            invariant="ord-list",
            detail={"orders": [list(na.orders), list(nb.orders)]},
        )
    if n == 2:
        q, r = a[1, 2], b[1, 2]
        if r == q:
            return _verified(a, b, identity(2), 1)
        if r == _mod1(-q):
            return _verified(a, b, [[0, 1], [1, 0]], 1)
        return Verdict(
            "distinct",
            invariant="block-sign",
            detail={"blocks": [[format_fraction(q), format_fraction(_mod1(-q))], format_fraction(r)]},
        )
    N = max(na.matrix().modulus, nb.matrix().modulus)
    start = [x for row in na.matrix().integer_matrix(N) for x in row]
    target = [x for row in nb.matrix().integer_matrix(N) for x in row]
    path, visited = _kernels.congruence_bfs(start, target, n, N, budget)
    if path is None and visited < budget:
        # the whole finite orbit of a's normal form was listed without b's
        return Verdict("distinct", invariant="orbit-exhausted", visited=visited)
    if path is None:
        return Verdict("unknown", visited=visited, detail={"budget": budget})
    moves = _kernels.generator_moves(n)
    g = identity(n)
    for idx in path:
        g = matmul(_move_matrix(n, moves[idx]), g)
    witness = matmul(matmul(inverse_unimodular(ub), g), ua)
    return _verified(a, b, witness, visited)


def _verified(a: BrauerMatrix, b: BrauerMatrix, g, visited: int) -> Verdict:
    if unimodular_act(g, a) != b:
        raise AssertionError("witness failed exact verification")
    return Verdict("equivalent", witness=tuple(tuple(r) for r in g), visited=visited)


def matrix_from_json(obj) -> BrauerMatrix:
    """Accept a list of rows, ``{"matrix": rows}``, a normal-form payload, or a descriptor."""
    if isinstance(obj, dict):
        if "matrix" in obj:
            return matrix_from_json(obj["matrix"])
        if "factors" in obj or "s0" in obj:
            return brauer_matrix(ToralDescriptor.from_json(obj))
        raise ParseError("object has neither 'matrix' nor descriptor fields")
    if not isinstance(obj, list):
        raise ParseError("matrix must be a list of rows")
    return BrauerMatrix.from_rows(obj)
