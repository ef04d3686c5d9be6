"""Backends: group axioms, independent models, and the text syntax."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from resistkit.errors import NonUnit, ParseError, PreconditionFailed
from resistkit.groups import (
    Affine,
    DirectProduct,
    FiniteCyclic,
    FreeAbelian,
    FreeGroup,
    FreeProductFreeAbelian,
    WreathZZ,
    eval_word,
    finite_elements,
    parse_group,
    power_substitution_N,
    wreath_generators,
)
from resistkit.scalars import QQ, PrimeField, golden_field
from resistkit.words import Alphabet, parse_word

BACKENDS = [
    FreeGroup.on("x", "y"),
    FreeAbelian(2),
    FiniteCyclic(5),
    Affine(QQ, 2),
    Affine(PrimeField(7), 3),
    Affine(golden_field()),
    FreeProductFreeAbelian((1, 2)),
    WreathZZ(),
    DirectProduct((FiniteCyclic(2), FreeAbelian(1))),
]


def random_elem(ctx, rng, length=6):
    gens = ctx.generators()
    out = ctx.identity()
    for _ in range(rng.randint(0, length)):
        g = rng.choice(gens)
        out = ctx.mul(out, g if rng.random() < 0.5 else ctx.inv(g))
    return out


@pytest.mark.parametrize("ctx", BACKENDS, ids=lambda c: c.text())
def test_group_axioms(ctx):
    rng = random.Random(ctx.text())
    e = ctx.identity()
    for _ in range(40):
        a, b, c = (random_elem(ctx, rng) for _ in range(3))
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.mul(a, ctx.inv(a)) == e == ctx.mul(ctx.inv(a), a)
        assert ctx.mul(a, e) == a == ctx.mul(e, a)


@pytest.mark.parametrize("ctx", BACKENDS, ids=lambda c: c.text())
def test_format_parse_round_trip(ctx):
    rng = random.Random(1)
    for _ in range(20):
        a = random_elem(ctx, rng)
        assert ctx.parse_elem(ctx.format_elem(a)) == a
    assert parse_group(ctx.text()) == ctx


def test_eval_word_identity_and_commutator():
    A = Affine(QQ, 2)
    w = parse_word("x*x^-1")
    assert eval_word(A, w, {"x": A.elem(3, 1)}) == A.identity()
    g, h = A.generators()
    hgh = eval_word(A, parse_word("h^-1*g*h", A.alphabet))
    assert hgh == A.elem(1, Fraction(1, 2))  # t -> t + 1/2
    assert A.mul(hgh, hgh) == g


def test_affine_composition_convention():
    A = Affine(QQ, 2)
    a, b = A.elem(2, 3), A.elem(5, -1)
    assert A.mul(a, b) == A.elem(10, 2 * -1 + 3)
    # right factor acts first
    for t in (Fraction(0), Fraction(1, 3), Fraction(-7)):
        assert A.apply(A.mul(a, b), t) == A.apply(a, A.apply(b, t))
    with pytest.raises(NonUnit):
        A.elem(0, 1)


def test_golden_affine_relation():
    A = Affine(golden_field())
    g, h = A.generators()
    hi = A.inv(h)
    assert A.prod([h, h, g, hi, hi]) == A.prod([g, h, g, hi])


def _laurent_mul(p, q):
    out = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, 0) + a * b
    return {k: v for k, v in out.items() if v}


def _matrix(elem):
    """Z wr Z inside 2x2 upper triangular matrices over Z[t, t^-1]."""
    lamps, s = elem
    return ({-s: 1}, dict(lamps))


def _matmul(m1, m2):
    (a1, p1), (a2, p2) = m1, m2
    top = _laurent_mul(a1, p2)
    for k, v in p1.items():
        top[k] = top.get(k, 0) + v
    return (_laurent_mul(a1, a2), {k: v for k, v in top.items() if v})


def test_wreath_matches_matrix_model():
    W = WreathZZ()
    rng = random.Random(5)
    for _ in range(100):
        a, b = random_elem(W, rng), random_elem(W, rng)
        assert _matrix(W.mul(a, b)) == _matmul(_matrix(a), _matrix(b))


def test_wreath_standard_pair():
    W = WreathZZ()
    g, h = wreath_generators()
    hgh = W.conj(g, h)
    assert hgh == W.elem({1: 1}, 0) != g
    assert W.commutes(g, hgh)
    assert W.commutator(g, h) != W.identity()


def test_wreath_conjugates_commute():
    W = WreathZZ()
    g, h = W.generators()
    conj = [W.conj(g, W.power(h, i)) for i in range(-5, 6)]
    assert all(W.commutes(a, b) for a in conj for b in conj)


def _fp_image(ctx, elem, N=1000):
    F = Alphabet(("x", "y"))
    letters = []
    for f, vec in elem:
        k = vec[0] if f == 0 else vec[0] + N * vec[1]
        letters += [(1 if f == 0 else 2) * (1 if k > 0 else -1)] * abs(k)
    return F.word(letters)


def test_free_product_normal_form():
    ctx = FreeProductFreeAbelian((1, 2))
    rng = random.Random(9)
    for _ in range(100):
        a, b = random_elem(ctx, rng), random_elem(ctx, rng)
        ab = ctx.mul(a, b)
        # no two adjacent syllables in one factor, no zero vectors
        assert all(ab[i][0] != ab[i + 1][0] for i in range(len(ab) - 1))
        assert all(any(v) for _, v in ab)
        assert _fp_image(ctx, ab) == _fp_image(ctx, a) * _fp_image(ctx, b)


def _min_N(elems, ctx):
    for N in range(1, 100):
        if len({_fp_image(ctx, e, N) for e in elems}) == len(elems):
            return N


@pytest.mark.parametrize(
    "texts, expected",
    [(["x", "y"], 1), (["y2", "y^2"], 1), (["y2", "y"], 2), (["y2", "y", "y^2"], 3)],
)
def test_power_substitution_examples(texts, expected):
    ctx = FreeProductFreeAbelian((1, 2))
    elems = [ctx.parse_elem(t) for t in texts]
    assert power_substitution_N(elems, ctx) == expected == _min_N(elems, ctx)


def test_power_substitution_rejects_equal_inputs():
    ctx = FreeProductFreeAbelian((1, 2))
    with pytest.raises(PreconditionFailed):
        power_substitution_N([ctx.parse_elem("y*y2"), ctx.parse_elem("y2*y")], ctx)


@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=2, max_size=5, unique=True))
def test_power_substitution_is_minimal(triples):
    ctx = FreeProductFreeAbelian((1, 2))
    x, y, y2 = ctx.generators()
    elems = {ctx.prod([ctx.power(x, a), ctx.power(y, b), ctx.power(y2, c), ctx.power(x, a)]) for a, b, c in triples}
    elems = sorted(elems, key=ctx.sort_key)
    if len(elems) < 2:
        return
    assert power_substitution_N(elems, ctx) == _min_N(elems, ctx)


def test_finite_elements():
    assert len(finite_elements(FiniteCyclic(6))) == 6
    assert len(finite_elements(DirectProduct((FiniteCyclic(2), FiniteCyclic(3))))) == 6
    assert len(finite_elements(Affine(PrimeField(3), 2))) == 6


@pytest.mark.parametrize("bad", ["Q", "free(x", "affine(Q,2,3)", "fp(Q)", "wreathy"])
def test_parse_group_errors(bad):
    with pytest.raises(ParseError):
        parse_group(bad)
