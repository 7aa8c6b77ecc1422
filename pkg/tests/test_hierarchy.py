import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given

from strategies import hierarchies
from vfbc import hierarchy as hi
from vfbc import stallings as st
from vfbc.errors import (HierarchySyntaxError, InconsistentFlags, InconsistentHierarchy,
                         IndependenceNotAssumed, NegativeRank, ParameterOutOfRange,
                         TooFewGenerators, TrivialGroup, VfbcError)
from vfbc.hierarchy import Amalgam, FreeLeaf, HNN

P = hi.parse_hierarchy


class TestParse:
    def test_examples(self):
        assert P("(free 2)") == FreeLeaf(2)
        assert P("(amal (free 2) (free 2) over 1)") == Amalgam(FreeLeaf(2), FreeLeaf(2), 1)
        assert P("(hnn (free 2) over 7)") == HNN(FreeLeaf(2), 7)

    def test_whitespace_and_comments(self):
        text = """
        ; genus two surface
        (amal
           (free 2)   ; left
           (free 2)
         over 1)
        """
        assert P(text) == Amalgam(FreeLeaf(2), FreeLeaf(2), 1)

    def test_pragma(self):
        h = P("(hnn !no-independence (amal (free 1) (free 1) over 0) over 1)")
        assert h.independent and not h.base.independent

    @pytest.mark.parametrize("text,pos", [("(free", 5), ("(free 2", 7), ("(frees 2)", 1),
                                          ("(free 2) (free 1)", 9), ("(hnn (free 2) 1)", 14),
                                          ("(free x)", 6), ("", 0), ("(free 2))", 8),
                                          ("!no-independence (free 2)", 0), ("(free 2 #)", 8)])
    def test_syntax_errors(self, text, pos):
        with pytest.raises(HierarchySyntaxError) as err:
            P(text)
        assert err.value.position == pos
        assert err.value.name == "SyntaxError"

    def test_negative_rank(self):
        with pytest.raises(NegativeRank):
            P("(free -1)")
        with pytest.raises(NegativeRank):
            P("(hnn (free 2) over -3)")

    @given(hierarchies())
    def test_render_round_trip(self, h):
        assert P(hi.render(h)) == h
        assert hi.render(P(hi.render(h))) == hi.render(h)


class TestEulerChar:
    @pytest.mark.parametrize("text,chi", [("(free 2)", -1), ("(free 0)", 1),
                                          ("(amal (free 2) (free 2) over 1)", -2),
                                          ("(hnn (free 2) over 1)", -1),
                                          ("(hnn (free 1) over 1)", 0),
                                          ("(amal (hnn (free 2) over 1) (free 3) over 2)", -2)])
    def test_examples(self, text, chi):
        assert hi.euler_char(P(text)) == Fraction(chi)

    @given(hierarchies(), hierarchies())
    def test_substitution(self, h, sub):
        # replacing a leaf by a hierarchy with the same chi leaves the root chi unchanged
        chi = hi.euler_char(sub)
        assume(chi.denominator == 1 and chi <= 1)
        leaf = FreeLeaf(int(1 - chi))
        for outer in (HNN(leaf, 2), Amalgam(leaf, h, 1), Amalgam(h, leaf, 0)):
            swapped = _replace_first_leaf(outer, leaf, sub)
            assert hi.euler_char(swapped) == hi.euler_char(outer)


def _replace_first_leaf(h, leaf, new):
    if isinstance(h, HNN):
        return HNN(new if h.base == leaf else h.base, h.edge_rank, h.independent)
    if h.left == leaf:
        return Amalgam(new, h.right, h.edge_rank, h.independent)
    return Amalgam(h.left, new, h.edge_rank, h.independent)


class TestBetti:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_free(self, n):
        rep = hi.betti(FreeLeaf(n))
        assert rep.betti == {0: 0, 1: n - 1, 2: 0}
        assert rep.cd_bound == 1 and rep.assumptions == []

    def test_surface(self):
        rep = hi.betti(P("(amal (free 2) (free 2) over 1)"))
        assert rep.betti == {0: 0, 1: 2, 2: 0} and rep.cd_bound == 2
        assert len(rep.assumptions) == 1 and "left factor" in rep.assumptions[0]

    def test_hnn(self):
        rep = hi.betti(P("(hnn (free 2) over 1)"))
        assert rep.betti[1] == 1 and "base" in rep.assumptions[0]

    def test_assumptions_list_every_node(self):
        rep = hi.betti(P("(amal (hnn (free 2) over 1) (amal (free 2) (free 2) over 1) over 1)"))
        assert [a.split(":")[0] for a in rep.assumptions] == ["root", "root.left", "root.right"]

    def test_errors(self):
        with pytest.raises(TrivialGroup):
            hi.betti(FreeLeaf(0))
        with pytest.raises(TrivialGroup):
            hi.betti(P("(amal (free 0) (free 0) over 0)"))
        with pytest.raises(IndependenceNotAssumed):
            hi.betti(P("!no-independence (hnn (free 2) over 1)"))
        with pytest.raises(IndependenceNotAssumed):
            hi.betti(P("(hnn !no-independence (hnn (free 2) over 1) over 1)"))
        with pytest.raises(InconsistentHierarchy):
            hi.betti(P("(hnn (free 2) over 7)"))
        with pytest.raises(InconsistentHierarchy):
            hi.betti(P("(amal (free 0) (free 2) over 1)"))

    def test_trivial_leaf_inside_is_fine(self):
        rep = hi.betti(P("(amal (free 0) (free 3) over 0)"))
        assert rep.betti[1] == 2

    @given(hierarchies())
    def test_alternating_sum(self, h):
        try:
            rep = hi.betti(h)
        except VfbcError:
            return
        assert rep.alternating_sum() == rep.euler_char == hi.euler_char(h)
        assert rep.betti[1] == -rep.euler_char and rep.betti[1] >= 0
        assert rep.betti[0] == 0 and rep.betti[2] == 0

    def test_json_round_trip(self):
        rep = hi.betti(P("(amal (free 3) (free 3) over 2)"))
        assert hi.BettiReport.from_json(rep.to_json()) == rep

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_multiplicative_in_index(self, n):
        base = hi.betti(FreeLeaf(n))
        for i in range(1, 5):
            for H in st.full_covers(n, i):
                cover = hi.betti(FreeLeaf(H.rank))
                assert cover.euler_char == i * base.euler_char
                assert cover.betti[1] == i * base.betti[1]


class TestClosedForms:
    @pytest.mark.parametrize("a,b,b1", [(1, 0, 0), (2, 1, 1), (1, 1, 1), (3, 4, 4)])
    def test_ascending_hnn(self, a, b, b1):
        rep = hi.ascending_hnn_betti(a, b)
        assert rep.betti == {0: 0, 1: b1, 2: 0} and rep.cd_bound == 2

    def test_ascending_hnn_matches_hierarchy(self):
        for a, b in itertools.product(range(1, 5), range(0, 5)):
            h = HNN(FreeLeaf(a + b), a)
            assert hi.ascending_hnn_betti(a, b).betti == hi.betti(h).betti

    def test_ascending_hnn_bad(self):
        with pytest.raises(ParameterOutOfRange):
            hi.ascending_hnn_betti(0, 2)

    @pytest.mark.parametrize("n,b1", [(2, 0), (4, 2), (7, 5)])
    def test_one_relator(self, n, b1):
        rep = hi.one_relator_betti(n)
        assert rep.betti == {0: 0, 1: b1, 2: 0} and rep.cd_bound == 2

    def test_one_relator_too_few(self):
        for n in (0, 1):
            with pytest.raises(TooFewGenerators):
                hi.one_relator_betti(n)

    @pytest.mark.parametrize("g", range(2, 6))
    def test_surface_two_ways(self, g):
        surface = hi.betti(Amalgam(FreeLeaf(g), FreeLeaf(g), 1))
        assert surface.betti[1] == hi.one_relator_betti(2 * g).betti[1] == 2 * g - 2


class TestDecide:
    def test_examples(self):
        assert hi.decide_vfbc(True, True, True, True, False).value == "Yes"
        v = hi.decide_vfbc(False, False, True, True, False)
        assert v.value == "Inconclusive" and any("BS(1, 2^k)" in r for r in v.reasons)
        assert hi.decide_vfbc(True, True, True, False, False).value == "No"
        assert hi.decide_vfbc(True, True, False, True, True).value == "No"

    def test_inconsistent(self):
        with pytest.raises(InconsistentFlags):
            hi.decide_vfbc(True, True, True, True, True)

    def test_monotone_in_b2(self):
        for h, v, cd, exc in itertools.product([False, True], repeat=4):
            if cd and exc:
                continue
            before = hi.decide_vfbc(h, v, cd, True, exc).value
            after = hi.decide_vfbc(h, v, cd, False, exc).value
            assert after == "No"
            assert not (before == "No" and after == "Yes")

    def test_presets(self):
        for name, preset in hi.PRESETS.items():
            expect = "Inconclusive" if name == "baumslag-solitar-1-2k" else "Yes"
            assert preset.decide().value == expect, name

    def test_bourdon(self):
        assert hi.bourdon_vfbc(5, 2)
        assert not hi.bourdon_vfbc(5, 4)
        assert hi.bourdon_vfbc(5, 3)
        for p, q in ((4, 2), (5, 1), (0, 0)):
            with pytest.raises(ParameterOutOfRange):
                hi.bourdon_vfbc(p, q)
