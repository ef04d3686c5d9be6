import random

import pytest
import sympy
from hypothesis import given, strategies as st

from resistkit.errors import AboveCap, IdentityInput, PreconditionFailed
from resistkit.magnus import Inconclusive, NCSeries, Refutation, lcs_image, magnus_embed, refute_trinomial_config, weight
from resistkit.words import Alphabet, commutator, parse_word

A = Alphabet(("x", "y"))
x, y = A.gens()
words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10).map(A.word)


def w(text):
    return parse_word(text, A)


def sympy_embed(word, D):
    """Oracle: expand the product with noncommutative sympy symbols."""
    X = sympy.symbols("X0 X1", commutative=False)
    expr = sympy.Integer(1)
    for a in word.letters:
        s = X[abs(a) - 1]
        if a > 0:
            f = 1 + s
        else:
            f = sum(((-s) ** k for k in range(D + 1)), sympy.Integer(0))
        expr = sympy.expand(expr * f)
    out = {}
    for term in sympy.Add.make_args(expr):
        coeff, factors = term.args_cnc()
        mono = []
        for f in factors:
            base, exp = f.as_base_exp()
            mono += [X.index(base)] * int(exp)
        if len(mono) <= D:
            c = sympy.Mul(*coeff) if coeff else sympy.Integer(1)
            out[tuple(mono)] = out.get(tuple(mono), 0) + int(c)
    return {k: v for k, v in out.items() if v}


def test_embed_examples():
    assert magnus_embed(A.identity, 4) == NCSeries.one(4)
    assert magnus_embed(w("x*x^-1"), 4) == NCSeries.one(4)
    s = magnus_embed(commutator(x, y), 3)
    assert s.component(1) == {}
    assert s.component(2) == {(0, 1): 1, (1, 0): -1}


@pytest.mark.parametrize("text", ["x", "x^-1", "[x,y]", "x^2*y^-1*x", "[x^-1,y^2]", "y^-3"])
def test_embed_matches_sympy(text):
    v = w(text)
    assert magnus_embed(v, 4).coeffs == sympy_embed(v, 4)


def test_weight_examples():
    assert weight(x) == 1
    assert weight(commutator(x, y)) == 2
    assert weight(commutator(commutator(x, y), y)) == 3
    assert weight(commutator(commutator(commutator(x, y), y), x), D=3) is None
    with pytest.raises(IdentityInput):
        weight(A.identity)


def test_lcs_image_examples():
    assert lcs_image(w("x^2")) == {(0,): 2}
    assert lcs_image(commutator(x, y)) == {(0, 1): 1, (1, 0): -1}
    assert lcs_image(commutator(x, y) ** 3) == {(0, 1): 3, (1, 0): -3}
    with pytest.raises(AboveCap):
        lcs_image(commutator(commutator(x, y), x), D=2)


def test_refutation_examples():
    res = refute_trinomial_config(x, x, y, D=3)
    assert isinstance(res, Refutation) and res.g0 == x and res.i == 1 and res.weight_f == 1
    c = commutator(x, y)
    res = refute_trinomial_config(c**2, c, x, D=4)
    assert isinstance(res, Refutation) and res.i == 2 and (res.a, res.b) == (2, 1)
    assert isinstance(refute_trinomial_config(c, c, x, D=2), Inconclusive)


def test_refutation_preconditions():
    with pytest.raises(PreconditionFailed):
        refute_trinomial_config(A.identity, x, y)
    with pytest.raises(PreconditionFailed):
        refute_trinomial_config(y, x, y)
    with pytest.raises(PreconditionFailed):
        refute_trinomial_config(x, x, x**2)


@given(words, words)
def test_embed_is_homomorphism(u, v):
    assert magnus_embed(u, 5) * magnus_embed(v, 5) == magnus_embed(u * v, 5)


@given(words.filter(lambda v: not v.is_identity()), words.filter(lambda v: not v.is_identity()))
def test_weight_inequalities(u, v):
    D = 6
    wu, wv = weight(u, D), weight(v, D)
    if (u * v).is_identity() or wu is None or wv is None:
        return
    wuv = weight(u * v, D)
    assert wuv is None or wuv >= min(wu, wv)
    c = commutator(u, v)
    if not c.is_identity():
        wc = weight(c, D)
        assert wc is None or wc >= wu + wv


@given(words.filter(lambda v: not v.is_identity()), st.integers(-3, 3).filter(bool))
def test_lcs_image_linear_in_powers(v, k):
    if weight(v, 6) is None:
        return
    base = lcs_image(v, 6)
    assert lcs_image(v**k, 6) == {m: k * c for m, c in base.items()}


def test_random_refutations():
    rng = random.Random(4)
    done = 0
    while done < 30:
        v = A.word([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 6))])
        if v.is_identity() or weight(v, 5) is None:
            continue
        h = A.word([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 3))])
        f, g = v ** rng.choice([1, 2, -2]), v ** rng.choice([1, 3, -1])
        if commutator(g, h).is_identity():
            continue
        res = refute_trinomial_config(f, g, h, D=6)
        assert isinstance(res, Refutation)
        done += 1
