"""Poset core: axioms, bounds, mails, chainmail tests, JSON format."""

from __future__ import annotations

import itertools

import pytest

from chainmail.errors import FormatError, GuardExceeded
from chainmail.generators import named_fixture
from chainmail.poset import FinitePoset

from conftest import (
    oracle_is_mail_connected,
    oracle_join,
    oracle_meet,
    subsets,
)


@pytest.fixture(scope="module")
def exa_a():
    return named_fixture("exaA")


class TestValidate:
    def test_singleton_identity_ok(self):
        assert FinitePoset(1, (1,)).validate() is None

    def test_antisymmetry_violation(self):
        p = FinitePoset(2, (0b11, 0b11))
        v = p.validate()
        assert v.axiom == "antisymmetry"
        assert v.witness == (0, 1)

    def test_transitivity_violation(self):
        p = FinitePoset(3, (0b011, 0b110, 0b100))
        v = p.validate()
        assert v.axiom == "transitivity"
        assert v.witness == (0, 1, 2)

    def test_reflexivity_violation(self):
        p = FinitePoset(2, (0b01, 0b00))
        assert p.validate().axiom == "reflexivity"


class TestBounds:
    def test_chain_down_and_up(self):
        c = FinitePoset.chain(3)
        assert c.down_set(2) == {0, 1, 2}
        assert c.up_set(2) == {2}
        assert c.up_set(0) == {0, 1, 2}

    def test_exa_a_mid_element_down_set(self, exa_a):
        # the element covering both lower diamonds pulls in everything below
        assert exa_a.down_set(4) == {0, 1, 2, 3, 4}

    def test_out_of_range(self, exa_a):
        with pytest.raises(IndexError):
            exa_a.down_set(7)

    def test_exa_a_joins(self, exa_a):
        assert exa_a.join({1, 2}) == 4
        assert exa_a.join({1, 5}) == 6
        assert exa_a.join({4, 5}) == 6
        assert exa_a.join({2, 3}) is None

    def test_join_of_empty_set_is_bottom(self):
        assert FinitePoset.chain(3).join(()) == 0
        assert FinitePoset.antichain(2).join(()) is None

    def test_meet_examples(self):
        chain = FinitePoset.chain(3)
        assert chain.meet({1, 2}) == 1
        m3 = named_fixture("M3")
        assert m3.meet({1, 2}) == 0
        assert FinitePoset.antichain(2).meet({0, 1}) is None

    def test_join_meet_match_oracle_exhaustively(self, small_poset_corpus):
        for n, posets in small_poset_corpus.items():
            for p in posets:
                for members in subsets(n):
                    assert p.join(members) == oracle_join(p, members)
                    if members:
                        assert p.meet(members) == oracle_meet(p, members)


class TestMails:
    def test_empty_set_is_not_a_mail(self, exa_a):
        assert not exa_a.is_mail(())

    def test_exa_a_pair_with_shared_bottom(self, exa_a):
        assert exa_a.is_mail({1, 2})

    def test_antichain_pair_is_not_a_mail(self):
        assert not FinitePoset.antichain(2).is_mail({0, 1})

    def test_singletons_are_mail_connected_and_tmd(self, exa_a):
        for x in range(exa_a.n):
            assert exa_a.is_mail_connected({x})
            assert exa_a.is_totally_mail_disconnected({x})

    def test_exa_a_side_triple_is_disconnected(self, exa_a):
        # elements 2, 3, 4 in the figure's numbering: 3 and 4 reach no one
        members = {1, 2, 3}
        assert oracle_is_mail_connected(exa_a, members) is False
        assert exa_a.is_mail_connected(members) is False

    def test_antichain_pair_not_connected(self):
        assert not FinitePoset.antichain(2).is_mail_connected({0, 1})

    def test_mail_connectivity_matches_oracle(self, small_poset_corpus):
        for n, posets in small_poset_corpus.items():
            for p in posets:
                for members in subsets(n):
                    if members:
                        assert p.is_mail_connected(members) == oracle_is_mail_connected(p, members)


class TestComponents:
    def test_empty_input(self, exa_a):
        assert exa_a.mail_connected_components(()) == []

    def test_exa_a_full_carrier_is_one_component(self, exa_a):
        assert exa_a.mail_connected_components(range(7)) == [frozenset(range(7))]

    def test_disjoint_chains_split(self):
        p = FinitePoset.from_cover_pairs(4, [(0, 1), (2, 3)])
        assert p.mail_connected_components(range(4)) == [frozenset({0, 1}), frozenset({2, 3})]

    def test_order_components(self, exa_a):
        assert len(FinitePoset.chain(3).order_connected_components()) == 1
        assert len(FinitePoset.antichain(3).order_connected_components()) == 3
        plus = FinitePoset.from_cover_pairs(
            8, [(a + 1, b + 1) for a, b in [(0, 1), (0, 2), (3, 4), (3, 5), (1, 4), (2, 4), (2, 5), (4, 6), (5, 6)]]
        )
        assert len(plus.order_connected_components()) == 2

    def test_order_components_equal_mail_components_on_carrier(self, small_poset_corpus):
        for posets in small_poset_corpus.values():
            for p in posets:
                assert p.order_connected_components() == p.mail_connected_components(range(p.n))


class TestTmd:
    def test_exa_a_examples(self, exa_a):
        assert exa_a.is_totally_mail_disconnected({0, 3})
        assert not exa_a.is_totally_mail_disconnected({1, 2})

    def test_empty_set_accepted(self, exa_a):
        assert exa_a.is_totally_mail_disconnected(())


class TestReducedMails:
    def test_chain_has_none(self):
        assert list(FinitePoset.chain(4).reduced_mails()) == []

    def test_exa_a_exact_list(self, exa_a):
        mails = list(exa_a.reduced_mails())
        assert mails == [frozenset({1, 2}), frozenset({1, 5}), frozenset({4, 5})]

    def test_bottomed_antichain(self):
        p = FinitePoset.from_cover_pairs(3, [(0, 1), (0, 2)])
        assert list(p.reduced_mails()) == [frozenset({1, 2})]

    def test_reduced_mails_are_antichain_mails(self, small_poset_corpus):
        for posets in small_poset_corpus.values():
            for p in posets:
                for mail in p.reduced_mails():
                    assert p.is_mail(mail)
                    assert len(mail) >= 2
                    for a, b in itertools.combinations(sorted(mail), 2):
                        assert not p.leq(a, b) and not p.leq(b, a)


class TestChainmail:
    def test_exa_a_is_chainmail(self, exa_a):
        assert exa_a.is_chainmail()
        assert exa_a.is_chainmail_bruteforce()

    def test_two_minimal_upper_bounds_break_it(self):
        p = FinitePoset.from_cover_pairs(4, [(0, 2), (1, 2), (0, 3), (1, 3)])
        assert not p.is_chainmail()

    def test_every_lattice_is_a_chainmail(self):
        for p in (named_fixture("M3"), named_fixture("N5"), FinitePoset.powerset_lattice(3)):
            assert p.is_chainmail()

    def test_empty_poset_is_chainmail_but_not_lattice(self):
        e = FinitePoset(0, ())
        assert e.is_chainmail()
        assert not e.is_complete_lattice()
        assert e.order_connected_components() == []


class TestCompleteLattice:
    def test_m3(self):
        assert named_fixture("M3").is_complete_lattice()

    def test_exa_a_lacks_bottom(self, exa_a):
        assert not exa_a.is_complete_lattice()

    def test_matches_chainmail_plus_bottom(self, small_poset_corpus):
        for posets in small_poset_corpus.values():
            for p in posets:
                expected = (
                    p.n > 0
                    and p.is_chainmail()
                    and p.bottom() is not None
                    and len(p.order_connected_components()) == 1
                )
                assert p.is_complete_lattice() == expected


class TestDistributive:
    def test_chain_and_powerset(self):
        assert FinitePoset.chain(4).is_distributive()
        assert FinitePoset.powerset_lattice(3).is_distributive()

    def test_m3_and_n5_are_not(self):
        assert not named_fixture("M3").is_distributive()
        assert not named_fixture("N5").is_distributive()

    def test_requires_lattice(self, exa_a):
        from chainmail.errors import PreconditionError

        with pytest.raises(PreconditionError):
            exa_a.is_distributive()


class TestJson:
    def test_round_trip(self, exa_a):
        again = FinitePoset.from_json(exa_a.to_json())
        assert again == exa_a
        assert again.validate() is None

    def test_cover_list_closure_mode(self):
        obj = {"n": 3, "leq": [[0, 1], [1, 2]], "closure": "reflexive-transitive"}
        p = FinitePoset.from_json(obj)
        assert p == FinitePoset.chain(3)

    def test_unclosed_relation_fails_validation(self):
        obj = {"n": 3, "leq": [[0, 1], [1, 2]]}
        p = FinitePoset.from_json(obj)
        v = p.validate()
        assert v is not None and v.axiom == "transitivity"

    def test_bad_shapes(self):
        with pytest.raises(FormatError):
            FinitePoset.from_json([1, 2])
        with pytest.raises(FormatError):
            FinitePoset.from_json({"leq": []})
        with pytest.raises(FormatError):
            FinitePoset.from_json({"n": 2, "leq": [[0, 5]]})

    def test_size_guard(self, monkeypatch):
        monkeypatch.setenv("CHM_MAX_N", "4")
        with pytest.raises(GuardExceeded):
            FinitePoset.from_json({"n": 5, "leq": []})
        monkeypatch.delenv("CHM_MAX_N")
        assert FinitePoset.from_json({"n": 5, "leq": []}).n == 5


class TestInvariants:
    def test_join_ignores_dominated_lower_bound(self, small_poset_corpus):
        # adding a lower bound of a mail to the mail leaves the join alone
        for n, posets in small_poset_corpus.items():
            for p in posets:
                for members in subsets(n):
                    if not p.is_mail(members):
                        continue
                    for b in sorted(p.lower_bounds(members)):
                        assert p.join(members) == p.join(set(members) | {b})

    def test_chainmail_components_have_tops_forming_tmd_set(self, small_poset_corpus):
        for posets in small_poset_corpus.values():
            for p in posets:
                if not p.is_chainmail():
                    continue
                maxima = []
                for comp in p.mail_connected_components(range(p.n)):
                    top = p.join(comp)
                    assert top is not None and top in comp
                    maxima.append(top)
                assert p.is_totally_mail_disconnected(maxima)
                assert set(maxima) <= set(p.maximal_elements())
