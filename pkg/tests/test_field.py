from __future__ import annotations

import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from uflpmc.field import (
    FieldCtx,
    arith,
    extend_and_embed,
    field_new,
    find_irreducible,
    is_irreducible,
    is_prime,
    next_prime,
)

SMALL_FIELDS = [(p, d) for p in (2, 3, 5, 7) for d in (1, 2, 3) if p**d <= 64] + [(2, 4), (2, 5), (2, 6)]


def test_prime_field_has_no_modulus():
    ctx = field_new(7)
    assert ctx.modulus is None
    assert ctx.order == 7


def test_gf4_modulus_is_the_unique_irreducible_quadratic():
    ctx = field_new(2, 2)
    assert ctx.modulus == (1, 1, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        field_new(2, 2, modulus=[1, 0, 1])


def test_non_prime_characteristic_rejected():
    with pytest.raises(ValueError):
        field_new(6)


def test_find_irreducible_cubic_over_gf2():
    f = find_irreducible(2, 3, rng=0)
    assert f in ([1, 1, 0, 1], [1, 0, 1, 1])


def test_small_arithmetic():
    gf2, gf5, gf4 = field_new(2), field_new(5), field_new(2, 2)
    assert (gf2(1) + gf2(1)).code == 0
    assert (gf5(3) * gf5(4)).code == 2
    x = gf4([0, 1])
    assert (x * x).coeffs == [1, 1]
    assert arith("mul", gf5(3), gf5(4)).code == 2
    assert arith("pow", gf5(2), 4).code == 1


def test_mixing_fields_raises():
    with pytest.raises(ValueError):
        field_new(5)(1) + field_new(7)(1)


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, d):
    ctx = field_new(p, d, rng=1)
    q = ctx.order
    els = range(q)
    for a in els:
        assert ctx.add(a, 0) == a and ctx.mul(a, 1) == a
        assert ctx.add(a, ctx.neg(a)) == 0
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1
    rng = np.random.default_rng(p * 100 + d)
    triples = rng.integers(0, q, size=(300, 3))
    for a, b, c in triples.tolist():
        assert ctx.add(a, b) == ctx.add(b, a)
        assert ctx.mul(a, b) == ctx.mul(b, a)
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c))
    # no zero divisors
    for a, b in itertools.product(range(1, q), repeat=2):
        assert ctx.mul(a, b) != 0


def test_extend_prime_field_keeps_integers():
    base = field_new(5)
    ext, embed = extend_and_embed(base, 2, rng=0)
    assert ext.order == 25
    assert embed(base(3)).coeffs == [3, 0]


def test_extend_by_one_is_identity():
    base = field_new(3, 2)
    ext, embed = extend_and_embed(base, 1)
    assert ext == base
    x = base([1, 2])
    assert embed(x) == x


def test_gf4_into_gf16_root_satisfies_modulus():
    base = field_new(2, 2)
    ext, embed = extend_and_embed(base, 2, rng=3)
    assert ext.order == 16
    r = embed(base([0, 1]))
    assert (r * r + r + 1).code == 0


@pytest.mark.parametrize("p,d,s", [(2, 2, 2), (3, 2, 2), (2, 3, 2), (5, 1, 3), (2, 1, 5)])
def test_embedding_is_a_ring_homomorphism(p, d, s):
    base = field_new(p, d, rng=2)
    ext, embed = extend_and_embed(base, s, rng=4)
    rng = np.random.default_rng(5)
    for a, b in rng.integers(0, base.order, size=(100, 2)).tolist():
        x, y = base.elem(a), base.elem(b)
        assert embed(x + y) == embed(x) + embed(y)
        assert embed(x * y) == embed(x) * embed(y)
    assert embed(base.one()) == ext.one()


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_irreducibility_matches_sympy(p, d):
    x = sympy.Symbol("x")
    for tail in itertools.product(range(p), repeat=d):
        f = list(tail) + [1]
        expected = sympy.Poly(list(reversed(f)), x, modulus=p).is_irreducible
        assert is_irreducible(f, p) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_next_prime_is_smallest_prime_at_least(n):
    q = next_prime(n)
    assert q >= n and is_prime(q)
    assert not any(is_prime(m) for m in range(max(n, 0), q))


def test_large_prime_field_inverse():
    p = (1 << 61) - 1
    ctx = FieldCtx(p)
    a = 123456789123
    assert ctx.mul(a, ctx.inv(a)) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=(1 << 40)), st.integers(min_value=0, max_value=200))
def test_pow_matches_repeated_multiplication_gf8(a, e):
    ctx = field_new(2, 3, rng=0)
    a %= ctx.order
    acc = 1
    for _ in range(e):
        acc = ctx.mul(acc, a)
    assert ctx.pow(a, e) == acc
