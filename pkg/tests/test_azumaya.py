import math
import random
from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looptorsors.azumaya import (
    BrauerMatrix,
    SymbolFactor,
    ToralDescriptor,
    additive_order,
    brauer_matrix,
    determinant,
    enumerate_toral,
    format_fraction,
    identity,
    index_and_split,
    inverse_unimodular,
    matmul,
    matrix_from_json,
    orbit_equivalent,
    parse_fraction,
    ramification_row,
    skew_normal_form,
    tensor,
    unimodular_act,
)
from looptorsors.errors import (
    DegreeIncompatible,
    IndexOutOfRange,
    InvalidDescriptor,
    NotUnimodular,
    SizeMismatch,
)

from oracles import image_group, random_skew, random_unimodular

F = Fraction


def block(n, *qs):
    return BrauerMatrix.from_upper(n, {(2 * k + 1, 2 * k + 2): F(q) for k, q in enumerate(qs)})


@st.composite
def skew_matrices(draw, max_n=4, max_den=12, size=None):
    n = draw(st.integers(0, max_n)) if size is None else size
    vals = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            den = draw(st.integers(1, max_den))
            vals[(i, j)] = F(draw(st.integers(0, den - 1)), den)
    return BrauerMatrix.from_upper(n, vals)


@st.composite
def unimodular(draw, n):
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_unimodular(n, rng, steps=draw(st.integers(0, 12)))


# --- fractions and matrices -----------------------------------------------


def test_fraction_text():
    assert parse_fraction("3/5") == F(3, 5)
    assert parse_fraction("-1/5") == F(4, 5)
    assert parse_fraction("7/5") == F(2, 5)
    assert format_fraction(F(0)) == "0/1"
    assert format_fraction(F(2, 6)) == "1/3"


def test_matrix_is_skew_and_reduced():
    b = block(3, F(6, 5))
    assert b[1, 2] == F(1, 5) and b[2, 1] == F(4, 5)
    assert b[3, 3] == 0
    assert additive_order(b) == 5


@settings(max_examples=100, deadline=None)
@given(skew_matrices())
def test_matrix_json_round_trip(b):
    assert matrix_from_json(b.to_json()) == b
    assert matrix_from_json({"matrix": b.to_json()}) == b


# --- descriptors ----------------------------------------------------------


def test_descriptor_example():
    t = ToralDescriptor(4, 10, 2, 1, (SymbolFactor(5, 2, 1, 2), SymbolFactor(2, 1, 3, 4)))
    b = brauer_matrix(t)
    assert b[1, 2] == F(2, 5) and b[3, 4] == F(1, 2)
    nf, _ = skew_normal_form(b)
    assert [format_fraction(q) for q in nf.blocks] == ["1/10"] and nf.index == 10
    assert index_and_split(b, 10) == (10, 1)


def test_descriptor_inference():
    t = ToralDescriptor.from_json({"d": 12, "factors": [{"s": 3, "r": 1}]})
    assert (t.n, t.m, t.s0) == (2, 1, 4)
    assert ToralDescriptor.from_json(t.to_json()) == t


@pytest.mark.parametrize(
    "args",
    [
        (2, 6, 1, 1, (SymbolFactor(3, 1, 1, 2),)),  # product 3 != 6
        (2, 4, 1, 1, (SymbolFactor(4, 2, 1, 2),)),  # gcd(r, s) != 1
        (1, 2, 1, 1, (SymbolFactor(2, 1, 1, 2),)),  # 2m > n
        (4, 4, 1, 2, (SymbolFactor(2, 1, 3, 4),)),  # wrong position
        (2, 2, 0, 0, ()),  # s0 < 1
    ],
)
def test_invalid_descriptors(args):
    with pytest.raises(InvalidDescriptor):
        ToralDescriptor(*args)


def test_enumeration_counts():
    assert len(enumerate_toral(2, 2)) == 2
    assert len(enumerate_toral(4, 2)) == 4
    assert [t.m for t in enumerate_toral(4, 2)] == [0, 1, 1, 1]


def test_enumeration_by_hand_d4_n2():
    # s0 = 4; (s, r) in {(2,1), (4,1), (4,3)}
    got = [(t.s0, tuple((f.s, f.r) for f in t.factors)) for t in enumerate_toral(4, 2)]
    assert got == [(4, ()), (2, ((2, 1),)), (1, ((4, 1),)), (1, ((4, 3),))]


def test_enumeration_partition_by_m_is_deterministic():
    a = enumerate_toral(12, 4)
    assert a == enumerate_toral(12, 4)
    assert len(set(a)) == len(a)
    assert [t.m for t in a] == sorted(t.m for t in a)


# --- integer helpers ------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: unimodular(n)))
def test_unimodular_inverse(g):
    n = len(g)
    assert abs(determinant(g)) == 1
    assert matmul(g, inverse_unimodular(g)) == identity(n)


def test_not_unimodular():
    with pytest.raises(NotUnimodular):
        unimodular_act([[2, 0], [0, 1]], block(2, F(1, 5)))
    with pytest.raises(SizeMismatch):
        unimodular_act(identity(3), block(2, F(1, 5)))


# --- action and normal form -----------------------------------------------


@settings(max_examples=100, deadline=None)
@given(skew_matrices(max_n=4), st.data())
def test_group_action_law(b, data):
    g = data.draw(unimodular(b.n))
    h = data.draw(unimodular(b.n))
    assert unimodular_act(identity(b.n), b) == b
    assert unimodular_act(matmul(g, h), b) == unimodular_act(g, unimodular_act(h, b))


@settings(max_examples=150, deadline=None)
@given(skew_matrices(max_n=4))
def test_normal_form_witness_and_idempotence(b):
    nf, u = skew_normal_form(b)
    assert abs(determinant(u)) == 1
    assert unimodular_act(u, b) == nf.matrix()
    nf2, u2 = skew_normal_form(nf.matrix())
    assert nf2 == nf and u2 == identity(b.n)
    orders = nf.orders
    assert all(orders[k] % orders[k + 1] == 0 for k in range(len(orders) - 1))
    assert all(o > 1 for o in orders)


@settings(max_examples=80, deadline=None)
@given(skew_matrices(max_n=3, max_den=6) | skew_matrices(max_n=4, max_den=3))
def test_orders_match_image_group(b):
    """|{x : k x = 0}| in the image of x -> Bx is prod gcd(k, ord)^2 for each divisor k."""
    nf, _ = skew_normal_form(b)
    entries = [[b[i, j] for j in range(1, b.n + 1)] for i in range(1, b.n + 1)]
    image = image_group(entries, b.n)
    assert len(image) == nf.index**2
    N = b.modulus
    for k in range(1, N + 1):
        if N % k:
            continue
        killed = sum(1 for y in image if all((k * c) % 1 == 0 for c in y))
        assert killed == math.prod(math.gcd(k, o) ** 2 for o in nf.orders)


@settings(max_examples=100, deadline=None)
@given(skew_matrices(max_n=4), st.data())
def test_ord_list_invariant(b, data):
    g = data.draw(unimodular(b.n))
    nf, _ = skew_normal_form(b)
    nf2, _ = skew_normal_form(unimodular_act(g, b))
    assert sorted(nf.orders) == sorted(nf2.orders)
    assert nf.index == nf2.index


def test_order_versus_index():
    b = block(4, F(1, 2), F(1, 2))
    assert additive_order(b) == 2
    assert skew_normal_form(b)[0].index == 4


def test_three_variable_example():
    b = BrauerMatrix.from_upper(3, {(1, 2): F(1, 6), (1, 3): F(1, 2)})
    nf, u = skew_normal_form(b)
    assert nf.orders == (6,) and nf.rank_zero == 1
    assert unimodular_act(u, b) == nf.matrix()


# --- tensor, ramification, division ---------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4).flatmap(lambda n: st.tuples(skew_matrices(size=n), skew_matrices(size=n))))
def test_tensor_is_group_law(pair):
    a, b = pair
    assert tensor(a, b) == tensor(b, a)
    assert tensor(a, BrauerMatrix.zero(a.n)) == a
    neg = BrauerMatrix.from_rows([[-x for x in row] for row in a.entries])
    assert tensor(a, neg) == BrauerMatrix.zero(a.n)


def test_tensor_size_mismatch():
    with pytest.raises(SizeMismatch):
        tensor(block(2, F(1, 2)), block(4, F(1, 2)))


def test_ramification_rows():
    b = block(4, F(1, 3))
    assert ramification_row(b, 1) == [F(1, 3), 0, 0]
    assert ramification_row(b, 3) == [0, 0, 0]
    with pytest.raises(IndexOutOfRange):
        ramification_row(b, 5)


@pytest.mark.parametrize("d", range(1, 13))
@pytest.mark.parametrize("n", range(0, 5))
def test_division_consistency(d, n):
    for t in enumerate_toral(d, n):
        assert index_and_split(brauer_matrix(t), d) == (d // t.s0, t.s0)


def test_degree_incompatible():
    with pytest.raises(DegreeIncompatible):
        index_and_split(block(2, F(1, 5)), 4)


# --- orbit equivalence ----------------------------------------------------


def test_two_variable_block_sign():
    assert orbit_equivalent(block(2, F(1, 5)), block(2, F(2, 5))).verdict == "distinct"
    v = orbit_equivalent(block(2, F(1, 5)), block(2, F(4, 5)))
    assert v.verdict == "equivalent"
    assert unimodular_act(v.witness, block(2, F(1, 5))) == block(2, F(4, 5))


def test_two_variable_action_by_exhaustion():
    images = set()
    for a, b, c, d in product(range(-3, 4), repeat=4):
        if abs(a * d - b * c) == 1:
            images.add(unimodular_act([[a, b], [c, d]], block(2, F(1, 5)))[1, 2])
    assert images == {F(1, 5), F(4, 5)}


def test_three_variables_merge_numerators():
    v = orbit_equivalent(block(3, F(1, 5)), block(3, F(2, 5)))
    assert v.verdict == "equivalent"
    assert unimodular_act(v.witness, block(3, F(1, 5))) == block(3, F(2, 5))


def test_full_rank_four_variables_separated_by_orbit_exhaustion():
    v = orbit_equivalent(block(4, F(1, 5), F(1, 5)), block(4, F(1, 5), F(2, 5)))
    assert v.verdict == "distinct" and v.invariant == "orbit-exhausted"
    assert orbit_equivalent(block(4, F(1, 5), F(1, 5)), block(4, F(1, 5), F(4, 5))).verdict == "equivalent"


def test_ord_list_distinct():
    v = orbit_equivalent(block(4, F(1, 6)), block(4, F(1, 2), F(1, 3)))
    assert v.verdict == "equivalent"
    v = orbit_equivalent(block(4, F(1, 6)), block(4, F(1, 2), F(1, 2)))
    assert v.verdict == "distinct" and v.invariant == "ord-list"


def test_unknown_when_budget_runs_out():
    v = orbit_equivalent(block(3, F(1, 7)), block(3, F(3, 7)), budget=3)
    assert v.verdict == "unknown"
    assert orbit_equivalent(block(3, F(1, 7)), block(3, F(3, 7))).verdict == "equivalent"


@pytest.mark.parametrize("n", [2, 3])
def test_planted_witnesses(n):
    rng = random.Random(n)
    for _ in range(40):
        b = BrauerMatrix.from_upper(n, random_skew(n, rng, 6))
        g = random_unimodular(n, rng)
        target = unimodular_act(g, b)
        v = orbit_equivalent(b, target)
        assert v.verdict == "equivalent"
        assert unimodular_act(v.witness, b) == target


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        orbit_equivalent(block(2, F(1, 2)), block(3, F(1, 2)))


def test_counter_of_orders_over_enumeration():
    # every descriptor's normal form has index d / s0
    c = Counter(skew_normal_form(brauer_matrix(t))[0].index for t in enumerate_toral(8, 4))
    assert set(c) <= {1, 2, 4, 8}


# --- documented examples ----------------------------------------------------


def test_documented_tensor_examples():
    assert tensor(block(2, F(1, 2)), block(2, F(1, 2))) == BrauerMatrix.zero(2)
    assert tensor(block(2, F(1, 3)), block(2, F(1, 3))) == block(2, F(2, 3))
    assert tensor(block(4, F(1, 5)), BrauerMatrix.zero(4)) == block(4, F(1, 5))


def test_documented_ramification_examples():
    assert ramification_row(BrauerMatrix.zero(3), 2) == [0, 0]
    assert ramification_row(block(2, F(1, 2)), 1) == [F(1, 2)]
    assert ramification_row(block(4, F(1, 2), F(1, 2)), 3) == [0, 0, F(1, 2)]


def test_documented_index_examples():
    assert index_and_split(BrauerMatrix.zero(2), 4) == (1, 4)
    assert index_and_split(block(2, F(1, 2)), 2) == (2, 1)
    assert index_and_split(block(4, F(2, 5), F(1, 2)), 10) == (10, 1)


def test_documented_normal_forms():
    nf, u = skew_normal_form(BrauerMatrix.zero(3))
    assert nf.blocks == () and nf.rank_zero == 3 and u == identity(3)
    nf, u = skew_normal_form(block(2, F(1, 2)))
    assert nf.blocks == (F(1, 2),) and nf.rank_zero == 0


def test_three_variable_example_under_conjugation():
    rng = random.Random(3)
    b = BrauerMatrix.from_upper(3, {(1, 2): F(1, 6), (1, 3): F(1, 2)})
    for _ in range(100):
        nf, u = skew_normal_form(unimodular_act(random_unimodular(3, rng), b))
        assert nf.orders == (6,) and nf.rank_zero == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 12), st.integers(0, 11))
def test_two_by_two_action_is_determinant(seed, den, num):
    g = random_unimodular(2, random.Random(seed), steps=10)
    q = F(num % den, den)
    expected = q if determinant(g) == 1 else (-q) % 1
    assert unimodular_act(g, block(2, q)) == block(2, expected)


def test_swap_negates_block():
    assert unimodular_act([[0, 1], [1, 0]], block(2, F(1, 5))) == block(2, F(4, 5))


@settings(max_examples=150, deadline=None)
@given(skew_matrices())
def test_order_divides_index(b):
    nf, _ = skew_normal_form(b)
    order = additive_order(b)
    assert order == max(nf.orders, default=1)
    assert nf.index % order == 0


def test_trivial_degree_enumeration():
    assert [(t.m, t.s0) for t in enumerate_toral(1, 5)] == [(0, 1)]
