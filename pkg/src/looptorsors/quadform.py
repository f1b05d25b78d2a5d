"""Diagonal quadratic forms over R_n and their loop normal forms.

Every entry of an :class:`RDiagonalForm` is a monomial unit ``a * t^e``.  Up to
squares such a unit is ``a * t_I`` with ``I`` the set of odd exponents, so a
diagonal form regroups as ``sum_I <t_I> q_I`` with each ``q_I`` a form over
the base field.  Making every ``q_I`` anisotropic (hyperbolic planes are
collected into one count) gives the loop normal form, which decides isometry
of diagonal forms over R_n.

:func:`witt_decompose_f` reaches the same data by a different road, peeling
off one variable at a time with Springer's decomposition over
F_n = F_{n-1}((t_n)).
"""
from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from .basefield import (
    FiniteField,
    KDiagonalForm,
    RealClosed,
    is_isometric_k,
    parse_field,
    witt_decompose_k,
)
from .errors import FieldMismatch, IndexOutOfRange, SingularForm, UnsupportedField
from .laurent import MonomialUnit, coordinate_residues, parse_monomial, unit_square_class


@dataclass(frozen=True)
class RDiagonalForm:
    field: object
    n: int
    entries: tuple[MonomialUnit, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for u in self.entries:
            if not isinstance(u, MonomialUnit):
                raise SingularForm(f"entry {u!r} is not a monomial unit")
            if u.field != self.field:
                raise FieldMismatch(f"entry over {u.field} in form over {self.field}")
            if u.n != self.n:
                raise IndexOutOfRange(f"entry {u} has {u.n} variables, form has {self.n}")

    @classmethod
    def parse(cls, field, n: int, texts) -> "RDiagonalForm":
        return cls(field, n, tuple(parse_monomial(t, field, n) for t in texts))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def perp(self, other: "RDiagonalForm") -> "RDiagonalForm":
        _check_compatible(self, other)
        return RDiagonalForm(self.field, self.n, self.entries + other.entries)

    def to_json(self) -> dict:
        return {"field": self.field.text, "n": self.n, "entries": [str(u) for u in self.entries]}

    def __str__(self):
        return "<" + ", ".join(str(u) for u in self.entries) + ">"


def _check_compatible(a: RDiagonalForm, b: RDiagonalForm) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.n != b.n:
        raise FieldMismatch(f"forms over R_{a.n} and R_{b.n}")


def _check_index(q: RDiagonalForm, i: int) -> None:
    if not 1 <= i <= q.n:
        raise IndexOutOfRange(f"variable index {i} not in 1..{q.n}")


def _mask(subset: tuple[int, ...]) -> int:
    return sum(1 << (i - 1) for i in subset)


# ---------------------------------------------------------------------------
# Springer decomposition and Witt decomposition over F_n


def springer_decompose(q: RDiagonalForm, i: int) -> tuple[RDiagonalForm, RDiagonalForm]:
    """Split ``q = q_even + <t_i> q_odd`` by the parity of the t_i-exponent.

    Both parts live over n - 1 variables (coordinate ``i`` deleted).
    """
    _check_index(q, i)
    even, odd = [], []
    for u in q.entries:
        parity, stripped = coordinate_residues(u, i)
        (odd if parity else even).append(stripped)
    return RDiagonalForm(q.field, q.n - 1, tuple(even)), RDiagonalForm(q.field, q.n - 1, tuple(odd))


def reassemble(q_even: RDiagonalForm, q_odd: RDiagonalForm, i: int) -> RDiagonalForm:
    """Inverse of :func:`springer_decompose` up to squares: ``q_even + <t_i> q_odd``."""
    _check_compatible(q_even, q_odd)
    if not 1 <= i <= q_even.n + 1:
        raise IndexOutOfRange(f"variable index {i} not in 1..{q_even.n + 1}")
    entries = [u.insert(i, 0) for u in q_even.entries] + [u.insert(i, 1) for u in q_odd.entries]
    return RDiagonalForm(q_even.field, q_even.n + 1, tuple(entries))


@dataclass(frozen=True)
class WittDecompositionF:
    kernel: RDiagonalForm
    witt_index: int

    def to_json(self) -> dict:
        return {"kernel": self.kernel.to_json(), "witt_index": self.witt_index}


def witt_decompose_f(q: RDiagonalForm) -> WittDecompositionF:
    """Anisotropic kernel and Witt index of ``q`` over F_n.

    Recursion on the outermost variable: split at t_n, decompose both halves
    over F_{n-1}, and put the kernels back together.
    """
    k = q.field
    if q.n == 0:
        kernel, index = witt_decompose_k(KDiagonalForm.of(k, [u.scalar for u in q.entries]))
        units = tuple(MonomialUnit(k, c.representative(), ()) for c in kernel)
        return WittDecompositionF(RDiagonalForm(k, 0, units), index)
    even, odd = springer_decompose(q, q.n)
    de, do = witt_decompose_f(even), witt_decompose_f(odd)
    return WittDecompositionF(reassemble(de.kernel, do.kernel, q.n), de.witt_index + do.witt_index)


# ---------------------------------------------------------------------------
# loop normal form


@dataclass(frozen=True)
class LoopNormalForm:
    """``sum_I <t_I> slots[I]`` plus ``hyperbolic_count`` copies of <1, -1>.

    ``slots`` holds only nonempty slots, as ``(subset, KDiagonalForm)`` pairs
    ordered by the bitmask of the subset; each slot form is anisotropic.
    """

    field: object
    n: int
    slots: tuple[tuple[tuple[int, ...], KDiagonalForm], ...]
    hyperbolic_count: int

    def slot(self, subset) -> KDiagonalForm:
        subset = tuple(sorted(subset))
        for s, f in self.slots:
            if s == subset:
                return f
        return KDiagonalForm(self.field, ())

    @property
    def dim(self) -> int:
        return sum(f.dim for _, f in self.slots) + 2 * self.hyperbolic_count

    def to_diagonal(self) -> RDiagonalForm:
        k = self.field
        entries = []
        for subset, form in self.slots:
            exps = tuple(1 if i in subset else 0 for i in range(1, self.n + 1))
            entries += [MonomialUnit(k, c.representative(), exps) for c in form]
        for _ in range(self.hyperbolic_count):
            entries.append(MonomialUnit(k, k.one, (0,) * self.n))
            entries.append(MonomialUnit(k, -k.one, (0,) * self.n))
        return RDiagonalForm(k, self.n, tuple(entries))

    def to_json(self) -> dict:
        return {
            "field": self.field.text,
            "n": self.n,
            "dim": self.dim,
            "hyperbolic_count": self.hyperbolic_count,
            "slots": [{"subset": list(s), "form": f.labels()} for s, f in self.slots],
        }

    def __str__(self):
        parts = []
        for subset, form in self.slots:
            t = "*".join(f"t{i}" for i in subset) or "1"
            parts.append(f"<{t}>{form}")
        if self.hyperbolic_count:
            parts.append(f"{self.hyperbolic_count}H")
        return " + ".join(parts) or "0"


def loop_normal_form(q: RDiagonalForm) -> LoopNormalForm:
    """Canonical loop representative of the diagonal form ``q``."""
    buckets = defaultdict(list)
    for u in q.entries:
        c = unit_square_class(u)
        subset = tuple(i + 1 for i, b in enumerate(c.parity) if b)
        buckets[subset].append(c.k_class)
    hyperbolic = 0
    slots = []
    for subset in sorted(buckets, key=_mask):
        kernel, index = witt_decompose_k(KDiagonalForm(q.field, tuple(buckets[subset])))
        hyperbolic += index
        if kernel.dim:
            slots.append((subset, kernel))
    return LoopNormalForm(q.field, q.n, tuple(slots), hyperbolic)


def is_isometric_r(a: RDiagonalForm, b: RDiagonalForm) -> bool:
    """Isometry of two diagonal forms over R_n (dimension mismatch gives False)."""
    _check_compatible(a, b)
    if a.dim != b.dim:
        return False
    la, lb = loop_normal_form(a), loop_normal_form(b)
    if la.hyperbolic_count != lb.hyperbolic_count:
        return False
    if [s for s, _ in la.slots] != [s for s, _ in lb.slots]:
        return False
    return all(is_isometric_k(fa, fb) for (_, fa), (_, fb) in zip(la.slots, lb.slots))


# ---------------------------------------------------------------------------
# residues


def second_residue(q: RDiagonalForm, i: int) -> tuple[RDiagonalForm, RDiagonalForm]:
    """First and second residue forms of ``q`` at the valuation of t_i."""
    return springer_decompose(q, i)


def is_unramified(q: RDiagonalForm, i: int) -> bool:
    """True when the second residue at t_i is hyperbolic (Witt-trivial)."""
    _, second = second_residue(q, i)
    return witt_decompose_f(second).kernel.dim == 0


# ---------------------------------------------------------------------------
# enumeration of loop classes


def anisotropic_forms(field, dim: int) -> list[KDiagonalForm]:
    """Canonical representatives of the anisotropic forms of dimension ``dim``."""
    if dim == 0:
        return [KDiagonalForm(field, ())]
    if isinstance(field, RealClosed):
        return [KDiagonalForm(field, (c,) * dim) for c in field.square_classes()]
    if isinstance(field, FiniteField):
        if dim == 1:
            return [KDiagonalForm(field, (c,)) for c in field.square_classes()]
        if dim == 2:
            nu = field.square_classes()[1]
            return [witt_decompose_k(KDiagonalForm(field, (field.one_class, -nu)))[0]]
        return []
    raise UnsupportedField(f"anisotropic forms over {field.text} are not finitely classified here")


def _class_count_for(field, n: int, d: int, h: int) -> int:
    """Number of loop normal forms with ``h`` hyperbolic planes and total dimension d."""
    rest = d - 2 * h
    per_slot = [len(anisotropic_forms(field, j)) for j in range(rest + 1)]
    poly = [1] + [0] * rest
    for _ in range(2**n):
        new = [0] * (rest + 1)
        for a, ca in enumerate(poly):
            if ca:
                for j in range(rest + 1 - a):
                    new[a + j] += ca * per_slot[j]
        poly = new
    return poly[rest]


def _check_countable(field) -> None:
    if not isinstance(field, (RealClosed, FiniteField)):
        raise UnsupportedField(f"class counting needs R or a finite field, got {field.text}")


def count_loop_classes(field, n: int, d: int, jobs: int = 1) -> int:
    """Number of loop normal forms of dimension ``d`` over R_n.

    ``jobs > 1`` spreads the hyperbolic-count partition over processes.
    """
    _check_countable(field)
    if n < 0 or d < 0:
        raise IndexOutOfRange("n and d must be nonnegative")
    hs = range(d // 2 + 1)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return sum(pool.map(_class_count_for, *zip(*[(field, n, d, h) for h in hs])))
    return sum(_class_count_for(field, n, d, h) for h in hs)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for tail in _compositions(total - first, parts - 1):
            yield (first,) + tail


def enumerate_loop_classes(field, n: int, d: int):
    """Yield every loop normal form of dimension ``d`` over R_n, one per class."""
    _check_countable(field)
    subsets = sorted(
        (tuple(i + 1 for i in range(n) if mask >> i & 1) for mask in range(2**n)), key=_mask
    )
    for h in range(d // 2 + 1):
        for dims in _compositions(d - 2 * h, len(subsets)):
            choices = [anisotropic_forms(field, j) for j in dims]
            for pick in product(*choices):
                slots = tuple((s, f) for s, f in zip(subsets, pick) if f.dim)
                yield LoopNormalForm(field, n, slots, h)


# ---------------------------------------------------------------------------
# JSON


def form_from_json(obj, field=None, n=None) -> RDiagonalForm:
    """Read a diagonal form from any of the JSON spellings the CLI emits.

    Accepts ``{"field", "n", "entries"}``, a loop normal form
    ``{"field", "n", "slots", "hyperbolic_count"}``, a Witt decomposition
    ``{"kernel": {...}, "witt_index"}``, or a bare list of monomials (then
    ``field`` and ``n`` must be supplied).
    """
    if isinstance(obj, list):
        if field is None:
            raise FieldMismatch("a bare entry list needs an explicit field")
        if n is None:
            n = max((parse_monomial(t, field).n for t in obj), default=0)
        return RDiagonalForm.parse(field, n, obj)
    if "kernel" in obj and "entries" not in obj:
        kernel = form_from_json(obj["kernel"], field, n)
        planes = [MonomialUnit(kernel.field, s * kernel.field.one, (0,) * kernel.n)
                  for _ in range(obj.get("witt_index", 0)) for s in (1, -1)]
        return RDiagonalForm(kernel.field, kernel.n, kernel.entries + tuple(planes))
    k = parse_field(obj["field"]) if "field" in obj else field
    if k is None:
        raise FieldMismatch("form has no field")
    nn = obj.get("n", n)
    if "slots" in obj:
        slots = []
        for s in obj["slots"]:
            subset = tuple(sorted(s["subset"]))
            slots.append((subset, KDiagonalForm(k, tuple(k.parse_class(c) for c in s["form"]))))
        slots.sort(key=lambda p: _mask(p[0]))
        return LoopNormalForm(k, nn, tuple(slots), obj.get("hyperbolic_count", 0)).to_diagonal()
    if nn is None:
        nn = max((parse_monomial(t, k).n for t in obj["entries"]), default=0)
    return RDiagonalForm.parse(k, nn, obj["entries"])
