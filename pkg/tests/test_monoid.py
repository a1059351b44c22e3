"""Transformations, words, and kernel partitions."""

import itertools

import pytest
from hypothesis import given, strategies as st

from substal.monoid import (
    NotGenerated,
    Transformation,
    apply_point,
    canonical_word,
    compose,
    enumerate_monoid,
    format_word,
    generators,
    gensym_from_token,
    hat,
    identity,
    monoid_table,
    num_blocks,
    parse_word,
    partitions,
    repl,
    swap,
    word_equiv,
)
from oracles import (
    BELL,
    ref_compose,
    ref_gen_tuple,
    ref_hat,
    ref_monoid_closure,
    rgs_of_point,
)

maps3 = st.tuples(*[st.integers(0, 2)] * 3)


@given(maps3, maps3)
def test_compose_convention(s, t):
    got = compose(Transformation(s), Transformation(t))
    assert got.map == ref_compose(s, t)
    assert all(got(i) == s[t[i]] for i in range(3))


@given(maps3, maps3, maps3)
def test_right_action_law(q, s, t):
    sigma, tau = Transformation(s), Transformation(t)
    assert apply_point(apply_point(q, sigma), tau) == \
        apply_point(q, compose(sigma, tau))


def test_apply_point_examples():
    assert apply_point((0, 1), swap(0, 1).tr(2)) == (1, 0)
    # moved coordinate 0 reads coordinate 1 of the original point
    assert apply_point((0, 1), repl(0, 1).tr(2)) == (1, 1)
    assert apply_point((4, 7, 9), identity(3)) == (4, 7, 9)


def test_generator_transformations():
    assert swap(0, 1).tr(2).map == (1, 0)
    assert repl(0, 1).tr(2).map == (1, 1)
    assert repl(1, 0).tr(3).map == (0, 0, 2)
    assert swap(1, 2).tr(3).map == (0, 2, 1)
    # transpositions normalize their index order
    assert swap(2, 0).token() == "s[0,2]"
    with pytest.raises(ValueError):
        swap(1, 1)
    with pytest.raises(ValueError):
        repl(0, 2).tr(2)


def test_hat_examples():
    assert hat((), 5) == identity(5)
    w = parse_word("s[0,1] s[0|1]", 2, "full")
    assert hat(w, 2).map == (0, 0)
    assert hat(parse_word("s[0,1] s[0,1]", 2, "full"), 2) == identity(2)


@given(st.lists(st.sampled_from([("transposition", 0, 1), ("transposition", 1, 2),
                                 ("replacement", 0, 2), ("replacement", 2, 1)]),
                max_size=8))
def test_hat_matches_reference_fold(triples):
    syms = tuple(
        swap(i, j) if kind == "transposition" else repl(i, j)
        for kind, i, j in triples
    )
    assert hat(syms, 3).map == ref_hat(triples, 3)


@given(st.lists(st.sampled_from([("transposition", 0, 1), ("replacement", 1, 0)]),
                max_size=5),
       st.lists(st.sampled_from([("transposition", 0, 1), ("replacement", 0, 1)]),
                max_size=5))
def test_hat_is_concatenation_homomorphism(a, b):
    mk = lambda ts: tuple(swap(i, j) if k == "transposition" else repl(i, j)
                          for k, i, j in ts)
    u, v = mk(a), mk(b)
    assert hat(u + v, 2) == compose(hat(u, 2), hat(v, 2))


def test_word_parsing_and_tokens():
    assert gensym_from_token("s[1,2]") == swap(1, 2)
    assert gensym_from_token("s[2|0]") == repl(2, 0)
    with pytest.raises(ValueError):
        gensym_from_token("s[1;2]")
    with pytest.raises(ValueError):
        parse_word("s[0,2] s[0|1]", 2, "full")  # index out of range
    with pytest.raises(ValueError):
        parse_word("s[0|1]", 3, "transpositions")  # wrong generator kind
    w = parse_word("s[0,1]  s[1|0]", 2, "full")
    assert format_word(w) == "s[0,1] s[1|0]"


def test_word_equiv_examples():
    n = 2
    double = parse_word("s[0|1] s[0|1]", n, "full")
    single = parse_word("s[0|1]", n, "full")
    assert word_equiv(double, single, n)
    assert not word_equiv(parse_word("s[0,1]", n, "full"), single, n)
    assert word_equiv((), parse_word("s[0,1] s[0,1]", n, "full"), n)


def test_canonical_word_examples():
    assert canonical_word(identity(3), "full") == ()
    assert canonical_word(Transformation((1, 0)), "full") == (swap(0, 1),)
    assert canonical_word(Transformation((1, 1, 2)), "full") == (repl(0, 1),)


def test_canonical_word_round_trip_small():
    for n in (1, 2, 3):
        for tmap in itertools.product(range(n), repeat=n):
            tau = Transformation(tmap)
            assert hat(canonical_word(tau, "full"), n) == tau
    for n in (2, 3, 4):
        for perm in itertools.permutations(range(n)):
            tau = Transformation(perm)
            word = canonical_word(tau, "transpositions")
            assert all(g.kind == "transposition" for g in word)
            assert hat(word, n) == tau
    for tau in enumerate_monoid(3, "replacements"):
        word = canonical_word(tau, "replacements")
        assert all(g.kind == "replacement" for g in word)
        assert hat(word, 3) == tau


def test_canonical_word_rejects_outsiders():
    with pytest.raises(NotGenerated):
        canonical_word(Transformation((1, 1)), "transpositions")
    with pytest.raises(NotGenerated):
        canonical_word(Transformation((1, 0)), "replacements")
    # non-identity permutations are never products of replacements
    with pytest.raises(NotGenerated):
        canonical_word(Transformation((0, 2, 1)), "replacements")


def test_monoid_sizes():
    assert len(enumerate_monoid(2, "full")) == 4
    assert len(enumerate_monoid(3, "full")) == 27
    assert len(enumerate_monoid(3, "transpositions")) == 6
    assert len(enumerate_monoid(4, "transpositions")) == 24
    # replacements generate the identity plus every non-bijection
    assert [len(enumerate_monoid(n, "replacements")) for n in (1, 2, 3, 4)] \
        == [1, 3, 22, 233]


def test_monoid_closure_matches_reference():
    for mode, kinds in [("full", ("transposition", "replacement")),
                        ("replacements", ("replacement",)),
                        ("transpositions", ("transposition",))]:
        gens = []
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                if "replacement" in kinds:
                    gens.append(ref_gen_tuple("replacement", i, j, 3))
                if "transposition" in kinds and i < j:
                    gens.append(ref_gen_tuple("transposition", i, j, 3))
        want = ref_monoid_closure(3, gens)
        got = {t.map for t in enumerate_monoid(3, mode)}
        assert got == want


def test_monoid_table_words_evaluate_home():
    table = monoid_table(3, "full")
    for tau, word in table.items():
        assert hat(word, 3) == tau
    # BFS yields shortest words, so the identity's word is empty
    assert table[identity(3)] == ()


def test_dimension_limit():
    with pytest.raises(ValueError):
        enumerate_monoid(7, "full")


def test_partitions_as_restricted_growth_strings():
    assert partitions(2) == [(0, 0), (0, 1)]
    for n in range(1, 7):
        parts = partitions(n)
        assert len(parts) == BELL[n]
        assert len(set(parts)) == len(parts)
        for p in parts:
            assert p[0] == 0
            for idx in range(1, n):
                assert p[idx] <= max(p[:idx]) + 1
            # the string is its own kernel representative
            assert rgs_of_point(p) == p


def test_num_blocks():
    assert num_blocks((0, 0, 0)) == 1
    assert num_blocks((0, 1, 0, 2)) == 3
    assert num_blocks(()) == 0
