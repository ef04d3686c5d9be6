import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from resistkit.algebra import AlgebraElem, binomial_normalize, enumerate_units, parse_algebra
from resistkit.errors import NotBinomial, ParseError
from resistkit.groups import FiniteCyclic, FreeGroup, WreathZZ
from resistkit.scalars import QQ, PrimeField

F = FreeGroup.on("x", "y")


def el(text, ctx=F, spec=QQ):
    return parse_algebra(text, ctx, spec)


terms = st.dictionaries(
    st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3).map(F.alphabet.word),
    st.integers(-3, 3),
    max_size=4,
)
elements = terms.map(lambda d: AlgebraElem(F, QQ, d))


def test_parse_and_print():
    r = el("3/2*x*y - 1 + x^-1*y")
    assert str(r) == "-1 + 3/2*x*y + x^-1*y"
    assert el(str(r)) == r
    assert el("x - x") .is_zero()
    assert el("2*x + x") == el("3*x")


@pytest.mark.parametrize("bad", ["", "x +", "3/*x", "x * * y"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        el(bad)


def test_two_term_identities():
    G = FreeGroup.on("g")
    assert el("1 - g", G) * el("1 + g + g^2 + g^3", G) == el("1 - g^4", G)
    r = el("x^2 + x + y")
    xx = el("x")
    assert xx * r - r * xx == el("x*y - y*x")
    assert (r * AlgebraElem.zero(F, QQ)).is_zero()


def test_binomial_normalize():
    g, c = binomial_normalize(el("x - 2"))
    assert (F.format_elem(g), c) == ("x", QQ(2))
    g, c = binomial_normalize(el("2*x + 3"))
    assert F.format_elem(g) == "x" and c == QQ(Fraction(-3, 2))
    # multiply back: the unit is the leading coefficient times the first support element
    assert el("2*x + 3") == AlgebraElem.monomial(F, QQ, F.identity(), 2) * (
        AlgebraElem.monomial(F, QQ, g) - AlgebraElem.monomial(F, QQ, F.identity(), c)
    )
    with pytest.raises(NotBinomial):
        binomial_normalize(el("2*x + 3*x"))


def test_binomial_normalize_round_trip_random():
    rng = random.Random(2)
    W = WreathZZ()
    gens = W.generators()
    for _ in range(30):
        s0 = W.prod(rng.choice(gens) for _ in range(rng.randint(0, 4)))
        s1 = W.mul(s0, W.prod(rng.choice(gens) for _ in range(rng.randint(1, 4))))
        if s0 == s1:
            continue
        b = AlgebraElem(W, QQ, {s0: rng.randint(1, 5), s1: -rng.randint(1, 5)})
        g, c = binomial_normalize(b)
        supp = b.support()
        unit = AlgebraElem.monomial(W, QQ, supp[0], b.coefficient(supp[1]))
        assert unit * (AlgebraElem.monomial(W, QQ, g) - AlgebraElem.monomial(W, QQ, W.identity(), c)) == b


@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert a - a == AlgebraElem.zero(F, QQ)


@given(elements, elements)
def test_product_support_and_convolution(a, b):
    prod = a * b
    # direct convolution oracle
    conv = {}
    for g, c in a.items():
        for h, d in b.items():
            k = F.mul(g, h)
            conv[k] = conv.get(k, 0) + c.value * d.value
    conv = {k: v for k, v in conv.items() if v}
    assert {k: v.value for k, v in prod.items()} == conv
    products = {F.mul(g, h) for g in a.support() for h in b.support()}
    assert set(prod.support()) <= products


@given(st.sampled_from(list(F.alphabet.gens())), st.integers(1, 9))
def test_monomials_are_units(w, c):
    m = AlgebraElem.monomial(F, QQ, w, c)
    inv = AlgebraElem.monomial(F, QQ, w.inverse(), Fraction(1, c))
    assert m * inv == AlgebraElem.one(F, QQ) == inv * m


def test_sandwich():
    r = el("1 + x")
    assert r.sandwich(F.gen("y"), F.gen("x"), QQ(2)) == el("2*y*x + 2*y*x^2")


@pytest.mark.parametrize(
    "p, n, count, non_monomial",
    [(2, 2, 2, False), (3, 2, 4, False), (2, 3, 3, False), (2, 4, 8, True), (3, 3, 18, True)],
)
def test_enumerate_units(p, n, count, non_monomial):
    spec, ctx = PrimeField(p), FiniteCyclic(n)
    res = enumerate_units(spec, ctx)
    assert res.checked == p**n
    assert len(res.units) == count
    assert res.has_non_monomial is non_monomial
    one = AlgebraElem.one(ctx, spec)
    found = {u for u, _ in res.units}
    for u, v in res.units:
        assert u * v == one
        assert v in found  # closed under inversion
        g = AlgebraElem.monomial(ctx, spec, ctx.generators()[0], p - 1)
        assert g * u in found  # closed under monomial multiples


def test_enumerate_units_brute_force_oracle():
    # count units of GF(3)[Z/3] by checking every pair of elements
    spec, ctx = PrimeField(3), FiniteCyclic(3)
    import itertools

    elems = [AlgebraElem(ctx, spec, dict(enumerate(c))) for c in itertools.product(range(3), repeat=3)]
    one = AlgebraElem.one(ctx, spec)
    units = {a for a in elems if any(a * b == one for b in elems)}
    assert {u for u, _ in enumerate_units(spec, ctx).units} == units


def test_gf2_z4_example_unit():
    ctx, spec = FiniteCyclic(4), PrimeField(2)
    u = parse_algebra("1 + g + g^2", ctx, spec)
    assert u in {x for x, _ in enumerate_units(spec, ctx).units}
