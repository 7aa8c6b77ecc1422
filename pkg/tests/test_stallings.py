import math
import random

import pytest
from hypothesis import given

from strategies import generator_lists, words
from vfbc import stallings as st
from vfbc.errors import GraphFormatError, RankMismatch
from vfbc.oracles import (brute_intersection_witnesses, brute_products, landing_pair,
                          random_subgroup, random_word, reduced_words)
from vfbc.words import parse_word, parse_word_list


def S(text, rank=2):
    return st.subgroup_graph(parse_word_list(text, rank), rank)


def W(text, rank=2):
    return parse_word(text, rank)


def hall_count(rank, n):
    """Number of index-n subgroups of the free group, by Hall's recursion."""
    a = [0]
    for m in range(1, n + 1):
        total = m * math.factorial(m) ** (rank - 1)
        total -= sum(math.factorial(m - k) ** (rank - 1) * a[k] for k in range(1, m))
        a.append(total)
    return a[n]


class TestSubgroupGraph:
    def test_duplicate_generator(self):
        H = S("a,a")
        assert H.graph.num_vertices == 1 and H.rank == 1

    def test_whole_group(self):
        H = S("ab,abb")
        assert H == st.rose(2)
        assert st.contains(H, W("a")) and st.contains(H, W("b"))

    def test_trivial(self):
        H = S("")
        assert H.rank == 0 and H.graph.num_vertices == 1 and H.is_trivial()
        assert H == st.trivial_subgroup(2)

    def test_basepoint_kept_on_hair(self):
        H = S("baB")
        assert H.graph.num_vertices == 2 and H.graph.degree(H.graph.base) == 1

    @given(generator_lists())
    def test_folded_core(self, gens):
        H = st.subgroup_graph(gens, 2)
        g = H.graph
        assert g.is_immersed() and g.is_connected()
        for v in range(g.num_vertices):
            assert v == g.base or g.degree(v) >= 2
        assert H.rank >= 0


class TestQueries:
    def test_rank(self):
        assert st.rank(S("")) == 0
        assert st.rank(S("a,baB")) == 2
        assert st.rank(st.rose(3)) == 3

    def test_contains(self):
        H = S("aa,b")
        assert st.contains(H, W("aab"))
        assert not st.contains(H, W("a"))
        assert st.contains(H, W("1"))
        with pytest.raises(RankMismatch):
            st.contains(H, parse_word("a", 3))

    def test_index(self):
        assert st.index(S("a,bb,baB")) == 2
        assert st.index(S("a")) == st.INFINITE
        assert st.index(st.rose(2)) == 1
        assert st.index(S("")) == st.INFINITE

    def test_basis(self):
        assert st.basis(S("")) == []
        assert [str(w) for w in st.basis(S("a,baB"))] == ["a", "baB"]
        assert [str(w) for w in st.basis(st.rose(2))] == ["a", "b"]

    @given(generator_lists(max_words=3))
    def test_basis_round_trip(self, gens):
        H = st.subgroup_graph(gens, 2)
        B = st.basis(H)
        assert len(B) == H.rank
        assert st.subgroup_graph(B, 2) == H
        assert all(st.contains(H, w) for w in gens)

    def test_select_free_subset(self):
        def sel(text):
            return [str(w) for w in st.select_free_subset(parse_word_list(text, 2), 2)]
        assert sel("a,A") == ["a"]
        assert sel("a,aa,b") == ["a", "b"]
        assert sel("ab,ba,b") == ["ab", "ba"]
        assert sel("1,a") == ["a"]


class TestGraphText:
    def test_round_trip(self):
        g = S("a,baB,bbb").graph
        assert st.graph_from_text(g.to_text(), 2) == g

    def test_numeric_labels(self):
        g = st.graph_from_text("V 1 BASE 0\nE 0 0 1\nE 0 0 2\n")
        assert g.rank == 2 and len(g.edges) == 2

    @pytest.mark.parametrize("text", ["E 0 0 a", "V 1 BASE 0\nE 0 1 a", "V 1 BASE 0\nE 0 0 A",
                                      "V 2 BASE 5", "nonsense"])
    def test_bad_input(self, text):
        with pytest.raises(GraphFormatError):
            st.graph_from_text(text)

    def test_dot(self):
        dot = S("a,baB").graph.to_dot()
        assert dot.startswith("digraph") and 'label="b"' in dot


def test_fold_order_irrelevant():
    rng = random.Random(11)
    for _ in range(100):
        r = rng.randint(1, 3)
        gens = [random_word(rng, r, rng.randint(0, 8)) for _ in range(rng.randint(1, 4))]
        w = st.wedge(gens, r)
        ref = st.canonical(st.prune(st.fold(w)))
        for _ in range(5):
            assert st.canonical(st.prune(st.fold(w, random.Random(rng.random())))) == ref


def test_membership_against_products():
    rng = random.Random(3)
    for _ in range(12):
        H = random_subgroup(rng, 2, max_vertices=8, max_gens=2, max_len=5)
        B = st.basis(H)
        short = brute_products(B, 3)
        for letters in short:
            assert st.contains(H, st.Word(letters, 2))
        # a reduced element of length l is a product of at most l basis words
        products = brute_products(B, 5)
        for w in reduced_words(2, 5):
            assert st.contains(H, w) == (w.letters in products)


class TestFullCovers:
    @pytest.mark.parametrize("rank,n", [(1, 3), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5),
                                        (3, 2), (3, 3), (3, 4)])
    def test_count_matches_hall(self, rank, n):
        covers = list(st.full_covers(rank, n))
        assert len(covers) == hall_count(rank, n)
        assert len(set(covers)) == len(covers)

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_nielsen_schreier(self, rank):
        for n in range(1, 6 if rank < 3 else 5):
            for H in st.full_covers(rank, n):
                assert st.index(H) == n
                assert H.rank == n * (rank - 1) + 1
                chi = H.graph.num_vertices - len(H.graph.edges)
                assert chi == n * (1 - rank)


class TestPullback:
    def test_self(self):
        comps = st.pullback(S("a"), S("a"))
        assert len(comps) == 1 and comps[0].non_contractible
        assert comps[0].intersection == S("a")

    def test_disjoint_labels(self):
        comps = st.pullback(S("a"), S("b"))
        assert len(comps) == 1 and not comps[0].non_contractible

    def test_two_conjugates(self):
        comps = st.pullback(S("a,baB"), S("a"))
        live = [c for c in comps if c.non_contractible]
        assert len(live) == 2
        assert sorted(str(c.conjugator) for c in live) == ["1", "B"]
        for c in live:
            # the component describes H ∩ c^-1 K c
            for w in st.basis(c.intersection):
                assert st.contains(S("a,baB"), w)
                assert st.contains(S("a"), c.conjugator * w * ~c.conjugator)

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            st.pullback(S("a"), S("a", 3))

    def test_intersection(self):
        assert st.intersection(S("a,baB"), S("a,b")) == S("a,baB")
        H, K = S("aa,b"), S("aaa,bab")
        I = st.intersection(H, K)
        for w in reduced_words(2, 8):
            assert st.contains(I, w) == (st.contains(H, w) and st.contains(K, w))
        assert st.intersection(S("a"), S("b")).is_trivial()

    def test_against_brute_force(self):
        rng = random.Random(7)
        for _ in range(15):
            H = random_subgroup(rng, 2, max_vertices=4, max_gens=2, max_len=4)
            K = random_subgroup(rng, 2, max_vertices=4, max_gens=2, max_len=4)
            comps = st.pullback(H, K)
            index = {v: k for k, c in enumerate(comps) for v in c.vertices}
            hit = {index[landing_pair(H, K, g, w)] for g, w in brute_intersection_witnesses(H, K)}
            assert hit == {k for k, c in enumerate(comps) if c.non_contractible}


class TestMalnormal:
    def test_examples(self):
        assert st.is_malnormal(S("ab"))
        assert not st.is_malnormal(S("a,baB"))
        assert st.is_malnormal(S(""))
        assert st.is_malnormal(st.rose(2))
        assert not st.is_malnormal(S("aa"))

    def test_separated(self):
        assert st.conjugates_meet_trivially(S("a"), S("b"))
        assert not st.conjugates_meet_trivially(S("a,baB"), S("a"))
        assert st.conjugates_meet_trivially(S(""), S("a,b"))
        assert not st.conjugates_meet_trivially(S("ab"), S("ab"))
        assert st.conjugates_meet_trivially(S("ab"), S("ab"), exempt_diagonal=True)

    @given(words(max_len=6))
    def test_cyclic_subgroups(self, w):
        # <w> is malnormal iff w is not a proper power (and w != 1)
        from vfbc.words import is_proper_power
        H = st.subgroup_graph([w], 2)
        assert st.is_malnormal(H) == (not w.letters or not is_proper_power(w))
