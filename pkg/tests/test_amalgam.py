import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from fusion_amalgam.amalgam import (
    INFINITE,
    AmalgamWord,
    ContextMismatch,
    amalgam_abelianization,
    build_context,
    displayed_rank_formula,
    euler_characteristic,
    euler_characteristic_closed_form,
    free_rank_of_index,
)
from fusion_amalgam.amalgam import oracle
from fusion_amalgam.core import AmalgamParameters, SizeCapExceeded


def test_transversal_sizes(ctx35, ctx37):
    assert (ctx35.transversal_size("A"), ctx35.transversal_size("B")) == (25, 81)
    assert (ctx37.transversal_size("A"), ctx37.transversal_size("B")) == (49, 729)


def test_identification(ctx35):
    d_a = ctx35.c_to_side((1, 1), "A")
    d_b = ctx35.c_to_side((1, 1), "B")
    assert d_a == ctx35.carter["A"].generator
    assert ctx35.factors["A"].element_order(d_a) == 15 == ctx35.factors["B"].element_order(d_b)
    # z -> tau and sigma -> w
    assert ctx35.c_to_side((0, 1), "B") == ctx35.factors["B"].acting_generator
    assert ctx35.c_to_side((1, 0), "B") == ctx35.factors["B"].center_generator


def test_transversal_covers_cosets(ctx35):
    for side in "AB":
        f = ctx35.factors[side]
        reps = ctx35.reps[side]
        assert reps[0] == f.identity
        assert reps == sorted(reps)
        cosets = {
            frozenset(f.mul(c, r) for c in ctx35.carter[side].elements) for r in reps
        }
        assert len(cosets) == len(reps)
        assert sum(len(c) for c in cosets) == f.order


def test_coset_decompose_round_trip(ctx35):
    for side in "AB":
        f = ctx35.factors[side]
        for g in f.element_list:
            c, rep = ctx35.coset_decompose(g, side)
            assert f.mul(ctx35.c_to_side(c, side), rep) == g
        for c in ctx35.carter[side].elements:
            code, rep = ctx35.coset_decompose(c, side)
            assert rep == f.identity and ctx35.c_to_side(code, side) == c
        for rep in ctx35.reps[side]:
            assert ctx35.coset_decompose(rep, side) == ((0, 0), rep)


def test_embed_homomorphism_exhaustive_A(ctx35):
    f = ctx35.factors["A"]
    elems = f.element_list
    words = {g: ctx35.embed(g, "A") for g in elems}
    for a in elems:
        for b in elems:
            assert ctx35.multiply(words[a], words[b]) == words[f.mul(a, b)]


def test_embed_homomorphism_sampled_B(ctx35, ctx37):
    for ctx in (ctx35, ctx37):
        f = ctx.factors["B"]
        rng = random.Random(5)
        for _ in range(3000):
            a, b = rng.choice(f.element_list), rng.choice(f.element_list)
            assert ctx.multiply(ctx.embed(a, "B"), ctx.embed(b, "B")) == ctx.embed(f.mul(a, b), "B")


def test_embed_injective(ctx35):
    for side in "AB":
        f = ctx35.factors[side]
        words = [ctx35.embed(g, side) for g in f.element_list]
        assert len(set(words)) == f.order
        assert all(len(w) <= 1 for w in words)


def test_identity_inverse(ctx35):
    rng = random.Random(2)
    for _ in range(500):
        w = ctx35.random_word(rng.randrange(8), rng)
        assert ctx35.multiply(ctx35.identity, w) == w == ctx35.multiply(w, ctx35.identity)
        assert ctx35.multiply(w, ctx35.inverse(w)) == ctx35.identity
        assert ctx35.inverse(ctx35.inverse(w)) == w


def _random_pair(ctx, seed):
    rng = random.Random(seed)
    return ctx.random_word(rng.randrange(7), rng), ctx.random_word(rng.randrange(7), rng), ctx.random_word(rng.randrange(7), rng)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_multiply_matches_oracle(seed):
    ctx = _ctx35()
    a, b, c = _random_pair(ctx, seed)
    ab = ctx.multiply(a, b)
    assert ab == oracle.oracle_product(ctx, a, b)
    assert oracle.represents(ctx, ab, oracle.expand(ctx, a) + oracle.expand(ctx, b))
    assert ctx.multiply(ab, c) == ctx.multiply(a, ctx.multiply(b, c))
    assert len(ab) <= len(a) + len(b)


_CACHE = {}


def _ctx35():
    if "ctx" not in _CACHE:
        _CACHE["ctx"] = build_context(AmalgamParameters.from_primes(3, 5))
    return _CACHE["ctx"]


def test_oracle_detects_wrong_answers(ctx35):
    a = ctx35.random_word(3, 1)
    b = ctx35.random_word(3, 2)
    wrong = ctx35.multiply(a, ctx35.multiply(b, ctx35.from_c((0, 1))))
    assert not oracle.represents(ctx35, wrong, oracle.expand(ctx35, a) + oracle.expand(ctx35, b))


def test_multiply_37_against_oracle(ctx37):
    rng = random.Random(9)
    for _ in range(500):
        a = ctx37.random_word(rng.randrange(6), rng)
        b = ctx37.random_word(rng.randrange(6), rng)
        assert ctx37.multiply(a, b) == oracle.oracle_product(ctx37, a, b)


def test_cancellation_through_c(ctx35):
    # x * c * x^-1 for a letter x: collapses to a one-letter word or C
    x = ctx35.random_word(1, 4)
    c = ctx35.from_c((0, 2))
    w = ctx35.product(x, c, ctx35.inverse(x))
    assert len(w) <= 1


def test_random_word(ctx35):
    assert len(ctx35.random_word(0, 3)) == 0
    for length in range(1, 9):
        w = ctx35.random_word(length, length)
        assert len(w) == length
        assert all(a.f != b.f for a, b in zip(w.letters, w.letters[1:]))
        assert all(l.r > 0 for l in w.letters)
        assert ctx35.product(*(ctx35.embed(ctx35.letter_element(l), l.f) for l in w.letters)) == AmalgamWord((0, 0), w.letters)
    assert ctx35.random_word(5, 11) == ctx35.random_word(5, 11)
    with pytest.raises(ValueError):
        ctx35.random_word(-1, 0)


def test_cyclic_reduce(ctx35):
    assert ctx35.cyclic_reduce(ctx35.from_c((1, 2))) == (ctx35.from_c((1, 2)), ctx35.identity)
    rng = random.Random(3)
    fa = ctx35.factors["A"]
    for _ in range(200):
        a = rng.choice(fa.element_list)
        x = ctx35.random_word(rng.randrange(1, 6), rng)
        w = ctx35.conjugate(ctx35.embed(a, "A"), x)
        core, conj = ctx35.cyclic_reduce(w)
        assert ctx35.conjugate(core, conj) == w
        assert len(core) <= 1
        side, g = ctx35.to_factor(core)
        assert ctx35.factors[side].element_order(g) == fa.element_order(a)
    w = ctx35.random_word(4, 8)
    core, conj = ctx35.cyclic_reduce(w)
    assert core == w and conj == ctx35.identity
    w5 = ctx35.random_word(5, 8)
    core, conj = ctx35.cyclic_reduce(w5)
    assert ctx35.conjugate(core, conj) == w5
    assert len(core) < 5


def test_element_order(ctx35):
    fa, fb = ctx35.factors["A"], ctx35.factors["B"]
    assert ctx35.element_order(ctx35.embed(fa.center_generator, "A")) == 5
    assert ctx35.element_order(ctx35.from_c((1, 1))) == 15
    assert ctx35.element_order(ctx35.identity) == 1
    u = next(g for g in fa.normal_subgroup_elements() if any(g.h.x))
    v = next(g for g in fb.normal_subgroup_elements() if any(g.h.x))
    assert ctx35.element_order(ctx35.multiply(ctx35.embed(u, "A"), ctx35.embed(v, "B"))) is INFINITE
    assert str(INFINITE) == "infinite"
    rng = random.Random(4)
    for _ in range(200):
        side = rng.choice("AB")
        g = rng.choice(ctx35.factors[side].element_list)
        order = ctx35.element_order(ctx35.embed(g, side))
        assert order == ctx35.factors[side].element_order(g)
        assert ctx35.factors[side].order % order == 0


def test_word_json(ctx35, ctx37):
    w = ctx35.random_word(5, 1)
    data = ctx35.word_to_json(w)
    assert json.loads(json.dumps(data)) == data
    assert set(data) == {"c", "letters", "fingerprint"}
    assert ctx35.word_from_json(data) == w
    with pytest.raises(ContextMismatch):
        ctx37.word_from_json(data)
    # non-alternating input is normalized
    raw = {"c": [0, 0], "letters": [{"f": "A", "r": 3}, {"f": "A", "r": 3}]}
    a3 = ctx35.embed(ctx35.reps["A"][3], "A")
    assert ctx35.word_from_json(raw) == ctx35.multiply(a3, a3)
    with pytest.raises(ValueError):
        ctx35.word_from_json({"c": [0, 0], "letters": [{"f": "A", "r": 999}]})


def test_fingerprint_stable(params35):
    assert build_context(params35, seed=42).fingerprint == build_context(params35, seed=42).fingerprint


def test_pairing_variant(params35):
    ctx = build_context(params35, pairing=(2, 3))
    assert ctx.fingerprint != build_context(params35).fingerprint
    rng = random.Random(0)
    for _ in range(200):
        a, b = ctx.random_word(4, rng), ctx.random_word(4, rng)
        assert ctx.multiply(a, b) == oracle.oracle_product(ctx, a, b)
    assert amalgam_abelianization(ctx) == []


def test_context_size_cap(params37):
    with pytest.raises(SizeCapExceeded):
        build_context(params37, size_cap=5000)


# -- Euler characteristic and ranks ---------------------------------------------

def test_chi_values():
    p35 = AmalgamParameters.from_primes(3, 5)
    assert euler_characteristic(p35) == Fraction(-1919, 30375)
    assert euler_characteristic(AmalgamParameters.from_primes(5, 3)) == Fraction(-1919, 30375)
    # 1/1215 + 1/375 - 1/15 on a common denominator
    assert Fraction(25 + 81 - 2025, 30375) == euler_characteristic(p35)


PRIMES = list(primerange(3, 50))


@pytest.mark.parametrize("p", PRIMES)
def test_chi_negative_and_closed_form(p):
    for q in PRIMES:
        if q == p:
            continue
        params = AmalgamParameters.from_primes(p, q)
        chi = euler_characteristic(params)
        assert chi < 0
        assert chi == euler_characteristic_closed_form(params)


def test_rank_examples(params35):
    res = free_rank_of_index(params35, 30375)
    assert res.rank == 1920
    assert res.displayed_formula == 28786 and not res.agrees
    assert free_rank_of_index(params35, 2 * 30375).rank == 3839
    with pytest.raises(ValueError):
        free_rank_of_index(params35, 15)
    with pytest.raises(ValueError):
        free_rank_of_index(params35, 0)


@given(st.sampled_from(PRIMES[:6]), st.sampled_from(PRIMES[:6]), st.integers(1, 50))
def test_rank_integral_and_above_one(p, q, mult):
    if p == q:
        return
    params = AmalgamParameters.from_primes(p, q)
    index = mult * params.orderP * params.orderQ
    res = free_rank_of_index(params, index)
    assert res.rank > 1
    assert res.rank == 1 - euler_characteristic(params) * index
    assert displayed_rank_formula(params, index) == res.displayed_formula


def test_abelianization_of_amalgam(ctx35, ctx37):
    assert amalgam_abelianization(ctx35) == []
    assert amalgam_abelianization(ctx37) == []
    assert amalgam_abelianization(ctx35, amalgamate=False) == [15]
    assert amalgam_abelianization(ctx37, amalgamate=False) == [21]
