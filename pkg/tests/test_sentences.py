import itertools
import random
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from resistkit.errors import BadParameters, CapExceeded, InfiniteFieldRejected
from resistkit.groups import DirectProduct, FiniteCyclic
from resistkit.scalars import QQ, PrimeField
from resistkit.sentences import (
    And,
    FieldAtom,
    GroupAtom,
    GroupSentence,
    GroupTable,
    Not,
    PartitionSpec,
    Sentence,
    UniversalPair,
    build_sentence,
    compile_sentences,
    emit,
    enumerate_configs,
    evaluate_pair,
    evaluate_sentence,
    field_filter,
    prune,
    set_partitions,
    small_groups,
    split_disjunction,
)

GOLDEN = Path(__file__).parent / "golden" / "sentences_m2_m2_native.txt"


@lru_cache(maxsize=None)
def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell(n):
    return sum(stirling2(n, k) for k in range(n + 1))


def block_sum(n):
    return sum(k * stirling2(n, k) for k in range(n + 1))


def test_counts_two_by_two():
    configs = list(enumerate_configs(2, 2))
    assert len(configs) == 37
    assert len({c.blocks for c in configs}) == 15


def test_bell_six():
    assert len({c.blocks for c in enumerate_configs(2, 3)}) == 203


@pytest.mark.parametrize("m, m2", [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2)])
def test_counts_match_independent_counter(m, m2):
    n = m * m2
    configs = list(enumerate_configs(m, m2))
    assert len(configs) == block_sum(n)
    assert len({c.blocks for c in configs}) == bell(n)
    assert len({(c.blocks, c.distinguished) for c in configs}) == len(configs)


@pytest.mark.parametrize("n", range(0, 9))
def test_set_partitions_count(n):
    rgs = list(set_partitions(n))
    assert len(rgs) == bell(n) and rgs == sorted(rgs)


def test_enumeration_errors():
    with pytest.raises(BadParameters):
        list(enumerate_configs(1, 1))
    with pytest.raises(BadParameters):
        list(enumerate_configs(1, 3))
    with pytest.raises(CapExceeded):
        list(enumerate_configs(3, 4))
    assert sum(1 for _ in enumerate_configs(3, 3)) == block_sum(9)


def test_partition_spec_validation():
    with pytest.raises(BadParameters):
        PartitionSpec(2, 2, (((1, 1), (1, 2)),), 0)
    with pytest.raises(BadParameters):
        PartitionSpec(2, 2, (((1, 1), (1, 2), (2, 1), (2, 2)),), 1)


def _atoms(s: Sentence):
    assert isinstance(s.body, Not) and isinstance(s.body.item, And)
    return list(s.body.item.items)


def test_all_singleton_sentence():
    spec = PartitionSpec(2, 2, (((1, 1),), ((1, 2),), ((2, 1),), ((2, 2),)), 0)
    s = build_sentence(spec)
    assert (s.n_group, s.n_field) == (6, 4)
    atoms = _atoms(s)
    cross = [a for a in atoms if isinstance(a, GroupAtom) and not a.equal and a.rhs != (2,)]
    # pairwise distinctness of the four product classes
    assert len(cross) == 6
    assert GroupAtom((3, 1, 5), (), True) in atoms
    assert FieldAtom(((3, 1),), ((),), True) in atoms
    for zero in [((3, 2),), ((4, 1),), ((4, 2),)]:
        assert FieldAtom(zero, (), True) in atoms
    assert GroupAtom((1,), (2,), False) in atoms
    assert FieldAtom(((1,),), (), False) in atoms and FieldAtom(((2,),), (), False) in atoms


def test_one_block_sentence():
    spec = next(iter(enumerate_configs(2, 2)))
    assert len(spec.blocks) == 1
    atoms = _atoms(build_sentence(spec))
    field_sums = [a for a in atoms if isinstance(a, FieldAtom) and a.equal]
    assert field_sums == [FieldAtom(((3, 1), (4, 1), (3, 2), (4, 2)), ((),), True)]
    # no cross-block inequalities: the only group inequality is g1 != g2
    assert [a for a in atoms if isinstance(a, GroupAtom) and not a.equal] == [GroupAtom((1,), (2,), False)]


def test_atoms_reference_declared_variables():
    for spec in enumerate_configs(2, 3):
        s = build_sentence(spec)
        for a in _atoms(s):
            if isinstance(a, GroupAtom):
                assert all(1 <= v <= s.n_group for v in a.lhs + a.rhs)
            else:
                assert all(1 <= v <= s.n_field for mono in a.lhs + a.rhs for v in mono)


def test_split_examples():
    ga, fa = GroupAtom((1,), (2,)), FieldAtom(((1,),), ((),))
    s = Sentence(2, 1, Not(And((ga, fa))))
    assert split_disjunction(s) == [UniversalPair(2, 1, (ga.negate(),), (fa.negate(),))]
    s = Sentence(2, 0, Not(And((ga,))))
    assert split_disjunction(s) == [UniversalPair(2, 0, (ga.negate(),), ())]
    spec = PartitionSpec(2, 2, (((1, 1),), ((1, 2),), ((2, 1),), ((2, 2),)), 0)
    s = build_sentence(spec)
    (pair,) = split_disjunction(s)
    assert len(pair.group) + len(pair.field) == len(_atoms(s))


def test_field_filter_examples():
    taut = UniversalPair(1, 1, (GroupAtom((1,), ()),), (FieldAtom(((1,),), ((1,),)),))
    assert field_filter([taut], [PrimeField(2), PrimeField(3)]) == []
    prod = UniversalPair(2, 2, (GroupAtom((1,), ()),), (FieldAtom(((1, 2),), ((),)), FieldAtom(((1, 2),), ())))
    assert field_filter([prod], [PrimeField(2)]) == []
    assert field_filter([prod], [PrimeField(3)]) == [GroupSentence(2, prod.group)]
    one = UniversalPair(1, 1, (GroupAtom((1,), ()),), (FieldAtom(((1,),), ((),)),))
    assert field_filter([one], [PrimeField(3)]) == [GroupSentence(1, one.group)]
    with pytest.raises(InfiniteFieldRejected):
        field_filter([one], [QQ])


def test_emit_basics():
    assert emit([]) == "" and emit([], "prover") == ""
    pair = UniversalPair(2, 1, (GroupAtom((1,), (2,), False),), (FieldAtom(((1,),), (), True),))
    assert emit([pair]) == "(or (forall (g1 g2) (or (/= g1 g2))) (forall (c1) (or (= c1 0))))\n"
    assert emit([pair], "prover") == "fof(s1, axiom, (! [G1,G2] : (G1 != G2)) | (! [C1] : (C1 = zero))).\n"
    assert emit([GroupSentence(1, ())]) == "(forall (g1) (or))\n"
    with pytest.raises(BadParameters):
        emit([pair], "latex")


def test_golden_native():
    text = emit(compile_sentences(2, 2), "native")
    assert text.encode() == GOLDEN.read_bytes()
    assert len(text.splitlines()) == 37


def test_prover_output_shape():
    lines = emit(compile_sentences(2, 2), "prover").splitlines()
    assert len(lines) == 37
    assert all(line.startswith(f"fof(s{k}, axiom, ") and line.endswith(").") for k, line in enumerate(lines, 1))
    assert all(line.count("(") == line.count(")") for line in lines)


def test_prune_is_subset():
    pairs = compile_sentences(2, 2)
    kept = prune(pairs, 4)
    assert set(kept) <= set(pairs)
    battery = small_groups(4)
    for p in kept:
        assert any(not evaluate_pair(UniversalPair(p.n_group, 0, p.group, ()), G, PrimeField(2)) for G in battery)


def test_small_groups_orders():
    orders = sorted(G.order for G in small_groups(6))
    assert orders == [1, 2, 3, 4, 4, 5, 6, 6]


@settings(max_examples=15)
@given(st.integers(0, 36), st.sampled_from([2, 3]), st.sampled_from([1, 2, 3, 5]))
def test_split_preserves_models(idx, p, order):
    spec = list(enumerate_configs(2, 2))[idx]
    s = build_sentence(spec)
    pairs = split_disjunction(s)
    G, k = GroupTable(FiniteCyclic(order)), PrimeField(p)
    assert evaluate_sentence(s, G, k) == all(evaluate_pair(q, G, k) for q in pairs)


def test_split_preserves_models_order_six():
    rng = random.Random(0)
    specs = list(enumerate_configs(2, 2))
    S3 = [G for G in small_groups(6) if G.name == "S3"][0]
    for spec in rng.sample(specs, 4):
        s = build_sentence(spec)
        pairs = split_disjunction(s)
        for G in (S3, GroupTable(FiniteCyclic(6))):
            assert evaluate_sentence(s, G, PrimeField(2)) == all(evaluate_pair(q, G, PrimeField(2)) for q in pairs)


def _counterexample_exists(ctx, p):
    """Brute force: r = c1 g1 + c2 g2 (g1 != g2, c nonzero) and two sandwiches summing to 1."""
    T = GroupTable(ctx)
    n, e = T.order, T.identity
    tab = T.table
    for g in itertools.product(range(n), repeat=6):
        if g[0] == g[1]:
            continue
        prods = [tab[tab[g[2 + j], g[i]], g[4 + j]] for i in range(2) for j in range(2)]
        for c in itertools.product(range(p), repeat=4):
            if c[0] == 0 or c[1] == 0:
                continue
            acc = {}
            for (i, j), x in zip(itertools.product(range(2), range(2)), prods):
                acc[x] = (acc.get(x, 0) + c[2 + j] * c[i]) % p
            if acc.get(e, 0) == 1 and all(v == 0 for x, v in acc.items() if x != e):
                return True
    return False


@pytest.mark.parametrize(
    "ctx, p",
    [(FiniteCyclic(2), 5), (FiniteCyclic(2), 3), (FiniteCyclic(3), 2), (FiniteCyclic(1), 2)],
    ids=["Z2-GF5", "Z2-GF3", "Z3-GF2", "Z1-GF2"],
)
def test_sentences_agree_with_brute_force(ctx, p):
    G, k = GroupTable(ctx), PrimeField(p)
    all_hold = all(evaluate_sentence(build_sentence(s), G, k) for s in enumerate_configs(2, 2))
    assert all_hold == (not _counterexample_exists(ctx, p))


def test_sentences_agree_with_certificate_search():
    from resistkit.algebra import AlgebraElem
    from resistkit.certificates import IdealCertificate, NotFound, search_certificate, verify_certificate

    G = FiniteCyclic(2)
    k = PrimeField(5)
    r = AlgebraElem(G, k, {G.identity(): k(1), G.elements()[1]: k(2)})
    cert = search_certificate(r, radius=1)
    assert isinstance(cert, IdealCertificate) and verify_certificate(cert)
    for p in (2, 3):
        k2 = PrimeField(p)
        for a in range(1, p):
            r2 = AlgebraElem(G, k2, {G.identity(): k2(1), G.elements()[1]: k2(a)})
            assert isinstance(search_certificate(r2, radius=1), NotFound)
        assert all(evaluate_sentence(build_sentence(s), GroupTable(G), k2) for s in enumerate_configs(2, 2))
    assert not all(evaluate_sentence(build_sentence(s), GroupTable(G), k) for s in enumerate_configs(2, 2))
