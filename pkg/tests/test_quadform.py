from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looptorsors.basefield import FiniteField, Rationals, RealClosed
from looptorsors.errors import FieldMismatch, IndexOutOfRange, SingularForm, UnsupportedField
from looptorsors.laurent import MonomialUnit
from looptorsors.quadform import (
    RDiagonalForm,
    count_loop_classes,
    enumerate_loop_classes,
    form_from_json,
    is_isometric_r,
    is_unramified,
    loop_normal_form,
    reassemble,
    second_residue,
    springer_decompose,
    witt_decompose_f,
)

Q, R, F3, F5, F9 = Rationals(), RealClosed(), FiniteField(3), FiniteField(5), FiniteField(3, 2)
SQUAREFREE = [1, -1, 2, -2, 3, -3, 5, -5, 6, -7, 10, -11]


def scalars(k):
    if isinstance(k, FiniteField):
        return st.sampled_from(k.elements()[1:])
    pool = SQUAREFREE if k == Q else [1, -1, 3, -5]
    return st.sampled_from(pool).map(k.element)


@st.composite
def forms(draw, fields=(R, F5, Q), max_n=3, max_dim=8):
    k = draw(st.sampled_from(fields))
    n = draw(st.integers(0, max_n))
    d = draw(st.integers(0, max_dim))
    entries = []
    for _ in range(d):
        c = draw(scalars(k))
        e = tuple(draw(st.integers(-3, 3)) for _ in range(n))
        entries.append(MonomialUnit(k, c, e))
    return RDiagonalForm(k, n, tuple(entries))


def parse(k, n, *texts):
    return RDiagonalForm.parse(k, n, texts)


# --- examples -------------------------------------------------------------


def test_loop_normal_form_example():
    q = parse(Q, 2, "1", "5*t1", "7*t2", "t1*t2", "4", "-1*t1^2")
    lnf = loop_normal_form(q)
    assert str(lnf) == "<1><1> + <t1><5> + <t2><7> + <t1*t2><1> + 1H"
    assert lnf.hyperbolic_count == 1


def test_witt_decompose_f_example():
    wd = witt_decompose_f(parse(Q, 1, "1", "-1", "t1"))
    assert wd.witt_index == 1
    assert wd.kernel == parse(Q, 1, "t1")


def test_class_count_examples():
    assert count_loop_classes(R, 1, 2) == 9
    assert count_loop_classes(R, 0, 2) == 3
    assert count_loop_classes(F3, 1, 1) == 4


def test_count_rejects_rationals():
    with pytest.raises(UnsupportedField):
        count_loop_classes(Q, 1, 2)


# --- class counts against brute-force normalization -----------------------


def brute_class_count(k, n, d):
    reps = [c.representative() for c in k.square_classes()]
    units = [MonomialUnit(k, c, e) for c in reps for e in product((0, 1), repeat=n)]
    seen = set()
    for combo in product(units, repeat=d):
        seen.add(loop_normal_form(RDiagonalForm(k, n, combo)))
    return len(seen)


@pytest.mark.parametrize(
    "k,n,d",
    [(R, 1, 2), (R, 0, 2), (R, 2, 2), (R, 1, 3), (F3, 1, 1), (F3, 1, 2), (F5, 2, 2), (F9, 1, 3), (F3, 0, 4)],
)
def test_count_matches_brute_force(k, n, d):
    assert count_loop_classes(k, n, d) == brute_class_count(k, n, d)


def test_count_nine_forms_enumerated():
    all16 = [
        RDiagonalForm(R, 1, (MonomialUnit(R, s1, (e1,)), MonomialUnit(R, s2, (e2,))))
        for s1, s2, e1, e2 in product((R.one, -R.one), (R.one, -R.one), (0, 1), (0, 1))
    ]
    assert len(all16) == 16
    classes = []
    for f in all16:
        if not any(is_isometric_r(f, g) for g in classes):
            classes.append(f)
    assert len(classes) == 9


@pytest.mark.parametrize("k,n,d", [(R, 2, 3), (F5, 1, 3), (F9, 2, 2), (F3, 3, 2)])
def test_enumeration_matches_count(k, n, d):
    listed = list(enumerate_loop_classes(k, n, d))
    assert len(listed) == count_loop_classes(k, n, d)
    assert len(set(listed)) == len(listed)
    for lnf in listed:
        assert loop_normal_form(lnf.to_diagonal()) == lnf


def test_count_parallel_matches_serial():
    assert count_loop_classes(F5, 2, 4, jobs=2) == count_loop_classes(F5, 2, 4)


# --- invariants -----------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(forms(max_n=3), st.data())
def test_springer_reconstruction(q, data):
    if q.n == 0:
        return
    i = data.draw(st.integers(1, q.n))
    even, odd = springer_decompose(q, i)
    assert even.dim + odd.dim == q.dim
    assert is_isometric_r(reassemble(even, odd, i), q)


@settings(max_examples=200, deadline=None)
@given(forms(), st.randoms(use_true_random=False))
def test_loop_normal_form_canonical(q, rnd):
    lnf = loop_normal_form(q)
    entries = list(q.entries)
    rnd.shuffle(entries)
    scaled = []
    for u in entries:
        c = q.field.element(rnd.choice([1, 2, 3])) if q.field != Q else Fraction(rnd.choice([1, 2, 3]), rnd.choice([1, 5]))
        w = MonomialUnit(q.field, c, tuple(rnd.randint(-2, 2) for _ in range(q.n)))
        scaled.append(u * w.square())
    assert loop_normal_form(RDiagonalForm(q.field, q.n, tuple(scaled))) == lnf
    assert loop_normal_form(lnf.to_diagonal()) == lnf
    assert lnf.dim == q.dim


@settings(max_examples=200, deadline=None)
@given(forms())
def test_witt_over_f_agrees_with_loop_normal_form(q):
    wd = witt_decompose_f(q)
    lnf = loop_normal_form(q)
    assert wd.witt_index == lnf.hyperbolic_count
    assert wd.kernel.dim + 2 * wd.witt_index == q.dim
    assert loop_normal_form(wd.kernel).hyperbolic_count == 0


@settings(max_examples=150, deadline=None)
@given(forms(max_n=3).filter(lambda q: q.n > 0), st.data())
def test_unramified_matches_slots(q, data):
    i = data.draw(st.integers(1, q.n))
    lnf = loop_normal_form(q)
    expected = all(i not in subset for subset, _ in lnf.slots)
    assert is_unramified(q, i) == expected
    first, second = second_residue(q, i)
    assert first.dim + second.dim == q.dim


@settings(max_examples=100, deadline=None)
@given(forms(), forms())
def test_isometry_is_symmetric_and_reflexive(a, b):
    assert is_isometric_r(a, a)
    if a.field == b.field and a.n == b.n:
        assert is_isometric_r(a, b) == is_isometric_r(b, a)


@settings(max_examples=100, deadline=None)
@given(forms())
def test_json_round_trips(q):
    assert form_from_json(q.to_json()) == q
    lnf = loop_normal_form(q)
    assert is_isometric_r(form_from_json(lnf.to_json()), q)
    assert is_isometric_r(form_from_json(witt_decompose_f(q).to_json()), q)


# --- errors ---------------------------------------------------------------


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        is_isometric_r(parse(Q, 1, "1"), parse(R, 1, "1"))
    with pytest.raises(FieldMismatch):
        parse(Q, 1, "1").perp(parse(Q, 2, "1"))


def test_bad_index():
    with pytest.raises(IndexOutOfRange):
        springer_decompose(parse(Q, 1, "t1"), 2)


def test_non_unit_entry():
    with pytest.raises(SingularForm):
        RDiagonalForm(Q, 1, ("t1",))


def test_slots_are_told_apart():
    assert not is_isometric_r(parse(F5, 1, "1", "t1"), parse(F5, 1, "2", "t1"))
    assert is_isometric_r(parse(F5, 1, "1", "4*t1^3"), parse(F5, 1, "t1", "1"))


# --- documented examples ----------------------------------------------------


def test_documented_springer_splits():
    assert springer_decompose(parse(Q, 1, "1", "t1"), 1) == (parse(Q, 0, "1"), parse(Q, 0, "1"))
    even, odd = springer_decompose(parse(Q, 2, "5*t1^3*t2^2", "7*t2"), 2)
    assert even == parse(Q, 1, "5*t1^3") and odd == parse(Q, 1, "7")
    even, odd = springer_decompose(parse(Q, 1, "t1", "t1^3"), 1)
    assert even.dim == 0 and is_isometric_r(odd, parse(Q, 0, "1", "1"))


def test_documented_witt_over_f():
    assert witt_decompose_f(parse(R, 1, "1", "-1", "t1")) == witt_decompose_f(parse(R, 1, "t1", "1", "-1"))
    wd = witt_decompose_f(parse(R, 1, "1", "-1", "t1"))
    assert (wd.kernel, wd.witt_index) == (parse(R, 1, "t1"), 1)
    wd = witt_decompose_f(parse(R, 0, "1", "1"))
    assert (wd.kernel.dim, wd.witt_index) == (2, 0)
    wd = witt_decompose_f(parse(R, 1, "t1", "-1*t1"))
    assert (wd.kernel.dim, wd.witt_index) == (0, 1)


def test_documented_loop_normal_forms():
    lnf = loop_normal_form(parse(Q, 2, "5*t1^3*t2^2", "7*t2", "t1*t2", "1"))
    assert [s for s, _ in lnf.slots] == [(), (1,), (2,), (1, 2)]
    assert [f.labels() for _, f in lnf.slots] == [['1'], ['5'], ['7'], ['1']] and lnf.hyperbolic_count == 0
    lnf = loop_normal_form(parse(R, 0, "1", "-1"))
    assert lnf.slots == () and lnf.hyperbolic_count == 1
    lnf = loop_normal_form(parse(R, 1, "t1", "t1"))
    assert [s for s, _ in lnf.slots] == [(1,)] and lnf.slots[0][1].dim == 2
    assert lnf.to_json()["slots"][0]["subset"] == [1]


def test_documented_isometries():
    assert is_isometric_r(parse(R, 1, "t1", "-1*t1"), parse(R, 1, "1", "-1"))
    assert not is_isometric_r(parse(R, 1, "t1"), parse(R, 1, "-1*t1"))
    assert is_isometric_r(parse(R, 1, "1", "t1"), parse(R, 1, "t1", "1"))


def test_documented_residues():
    first, second = second_residue(parse(Q, 1, "1", "t1"), 1)
    assert (first, second) == (parse(Q, 0, "1"), parse(Q, 0, "1"))
    assert not is_unramified(parse(Q, 1, "1", "t1"), 1)
    first, second = second_residue(parse(Q, 1, "t1", "-1*t1"), 1)
    assert first.dim == 0 and second == parse(Q, 0, "1", "-1")
    assert is_unramified(parse(Q, 1, "t1", "-1*t1"), 1)
    assert is_unramified(parse(Q, 1, "1", "1"), 1)
