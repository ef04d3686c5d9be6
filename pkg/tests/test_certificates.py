import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from resistkit.algebra import AlgebraElem, parse_algebra
from resistkit.binomial import ConjRelation, cor23_witness, relation_search
from resistkit.certificates import (
    IdealCertificate,
    NotFound,
    binomial_certificate,
    format_certificate,
    parse_certificate,
    search_certificate,
    solvable_witness,
    trinomial_certificate,
    verify_certificate,
)
from resistkit.errors import (
    BadParameters,
    Commuting,
    NotCommuting,
    NotLastTerm,
    OrderViolation,
    ParseError,
    TrivialF,
)
from resistkit.groups import Affine, FiniteCyclic, FreeAbelian, FreeGroup, WreathZZ, wreath_generators
from resistkit.scalars import QQ, PrimeField, golden_field

GF5 = PrimeField(5)
W = WreathZZ()
G, H = wreath_generators()


def test_hand_example_verifies():
    ctx = FiniteCyclic(2)
    r = parse_algebra("g - 2", ctx, GF5)
    cert = IdealCertificate(r, [(GF5(3), 1, 0), (GF5(1), 0, 0)])
    assert verify_certificate(cert)


def test_empty_certificate_fails():
    r = parse_algebra("g - 2", FiniteCyclic(2), GF5)
    check = verify_certificate(IdealCertificate(r, []))
    assert not check.verified
    assert check.residual == -AlgebraElem.one(r.ctx, GF5)


def test_binomial_cyclic():
    wit = cor23_witness("a", n=2)
    cert = binomial_certificate(wit.relation, GF5(2))
    assert verify_certificate(cert)
    assert cert.r == parse_algebra("g - 2", FiniteCyclic(2), GF5)


def test_binomial_affine():
    A = Affine(QQ, 2)
    g, h = A.generators()
    rel = ConjRelation(A, g, lefts=[h, h], rights=[A.identity()])
    assert verify_certificate(binomial_certificate(rel, QQ(2)))


def test_binomial_rejects_bad_c():
    wit = cor23_witness("a", n=4)
    with pytest.raises(OrderViolation):
        binomial_certificate(wit.relation, GF5(1))
    with pytest.raises(OrderViolation):
        binomial_certificate(wit.relation, GF5(2))  # 2^4 = 1 mod 5
    with pytest.raises(BadParameters):
        binomial_certificate(wit.relation, GF5(0))


def test_binomial_from_signed_relation():
    one = W.identity()
    rel = ConjRelation(W, G, signed=[(one, -1), (H, 1), (H, -1), (one, 1), (one, 1), (one, -1)])
    with pytest.raises(BadParameters):
        binomial_certificate(rel, QQ(2))  # exponent sum 0


WITNESSES = [
    cor23_witness("a", n=3),
    cor23_witness("a", n=5),
    cor23_witness("b", alpha=2),
    cor23_witness("b", alpha=Fraction(-3, 2)),
    cor23_witness("b", alpha=Fraction(2, 5)),
    cor23_witness("golden"),
    cor23_witness("c", ctx=Affine(QQ), h=Affine(QQ).elem(-1, 0), h2=Affine(QQ).elem(-1, 1), n=2),
]


@pytest.mark.parametrize("wit", WITNESSES, ids=lambda w: f"{w.case}{w.n}")
def test_witness_certificates(wit):
    spec = wit.ctx.field if isinstance(wit.ctx, Affine) else PrimeField(11)
    d = wit.relation.exponent_sum
    for c in range(2, 8):
        c = spec(c)
        if c**d == spec(1):
            with pytest.raises(OrderViolation):
                binomial_certificate(wit.relation, c)
        else:
            assert verify_certificate(binomial_certificate(wit.relation, c))


def test_trinomial_standard():
    for spec in (QQ, GF5):
        cert = trinomial_certificate(W, G, H, spec=spec)
        assert len(cert) == 3 and verify_certificate(cert)


def test_trinomial_with_witness():
    cert = trinomial_certificate(W, G, H, [(H, 1), (W.identity(), -1)])
    assert len(cert) > 3 and verify_certificate(cert)


def test_trinomial_errors():
    Z2 = FreeAbelian(2)
    x, y = Z2.generators()
    with pytest.raises(TrivialF):
        trinomial_certificate(Z2, x, y)
    F = FreeGroup.on("x", "y")
    with pytest.raises(NotCommuting):
        trinomial_certificate(F, F.gen("x"), F.gen("y"))
    with pytest.raises(BadParameters):
        trinomial_certificate(W, G, H, [(H, 2)])


def test_solvable_witness():
    assert solvable_witness(G, H, W) == (G, H)
    with pytest.raises(Commuting):
        solvable_witness(G, W.conj(G, H), W)
    F = FreeGroup.on("x", "y")
    with pytest.raises(NotLastTerm):
        solvable_witness(F.gen("x"), F.gen("y"), F)


def test_search_examples():
    r = parse_algebra("g - 2", FiniteCyclic(2), GF5)
    assert isinstance(search_certificate(r, radius=1), IdealCertificate)
    F = FreeGroup.on("x")
    for R in (1, 2):
        assert isinstance(search_certificate(parse_algebra("x - 2", F, QQ), radius=R), NotFound)
    wr = AlgebraElem.one(W, QQ) + AlgebraElem.monomial(W, QQ, H) - AlgebraElem.monomial(W, QQ, W.commutator(G, H))
    cert = search_certificate(wr, radius=4)
    assert isinstance(cert, IdealCertificate) and verify_certificate(cert)


def test_search_monotone_in_radius():
    wr = AlgebraElem.one(W, QQ) + AlgebraElem.monomial(W, QQ, H) - AlgebraElem.monomial(W, QQ, W.commutator(G, H))
    found = [isinstance(search_certificate(wr, radius=R), IdealCertificate) for R in range(1, 6)]
    first = found.index(True)
    assert all(found[first:])


def test_search_threads_deterministic():
    r = parse_algebra("g - 3", FiniteCyclic(4), PrimeField(7))
    a = search_certificate(r, radius=2, threads=1)
    b = search_certificate(r, radius=2, threads=4)
    assert format_certificate(a) == format_certificate(b)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_binomial_agrees_with_search_on_cyclic(n, p):
    ctx, F = FiniteCyclic(n), PrimeField(p)
    wit = cor23_witness("a", n=n)
    for c in range(1, p):
        r = parse_algebra(f"g - {c}", ctx, F)
        found = isinstance(search_certificate(r, radius=(n + 1) // 2), IdealCertificate)
        try:
            built = verify_certificate(binomial_certificate(wit.relation, F(c))).verified
        except OrderViolation:
            built = False
        assert found == built == (pow(c, n, p) != 1)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_certificates_transport_along_monomials(seed):
    rng = random.Random(seed)
    cert = trinomial_certificate(W, G, H)
    gens = W.generators()
    m1 = W.prod(rng.choice(gens + [W.inv(x) for x in gens]) for _ in range(rng.randint(0, 4)))
    m2 = W.prod(rng.choice(gens + [W.inv(x) for x in gens]) for _ in range(rng.randint(0, 4)))
    c1, c2 = QQ(rng.randint(1, 5)), QQ(-rng.randint(1, 5))
    r2 = AlgebraElem.monomial(W, QQ, m1, c1) * cert.r * AlgebraElem.monomial(W, QQ, m2, c2)
    # r = m1^-1 r2 m2^-1 / (c1 c2)
    scale = (c1 * c2).inverse()
    moved = [(c * scale, W.mul(u, W.inv(m1)), W.mul(W.inv(m2), v)) for c, u, v in cert.sandwiches]
    assert verify_certificate(IdealCertificate(r2, moved))


def _round_trip(cert):
    text = format_certificate(cert)
    back = parse_certificate(text)
    assert format_certificate(back) == text
    assert verify_certificate(back)


def test_file_round_trip():
    _round_trip(trinomial_certificate(W, G, H, spec=GF5))
    _round_trip(binomial_certificate(cor23_witness("golden").relation, golden_field()("t")))
    _round_trip(binomial_certificate(cor23_witness("b", alpha=Fraction(2, 5)).relation, QQ(Fraction(1, 2))))
    _round_trip(search_certificate(parse_algebra("g - 2", FiniteCyclic(2), GF5), radius=1))


def test_file_rejects_garbage():
    with pytest.raises(ParseError):
        parse_certificate("field: Q\n")
    with pytest.raises(ParseError):
        parse_certificate("# resistkit-certificate v1\nfield: Q\ngroup: Z/2\nr: g - 2\nsandwich: 1 | g\n")
    with pytest.raises(ParseError):
        parse_certificate("# resistkit-certificate v1\nfield: Q\ngroup: Z/2\n")


def test_search_rejects_monomials():
    with pytest.raises(BadParameters):
        search_certificate(parse_algebra("2*g", FiniteCyclic(3), QQ))


def test_relation_search_feeds_certificate():
    ctx = FiniteCyclic(3)
    v = relation_search(ctx, 1, radius=1, max_terms=3)
    rel = next(r for r in v.relations if r.exponent_sum == v.divisor_found)
    assert verify_certificate(binomial_certificate(rel, PrimeField(7)(3)))
