"""Isomorph-free generation: counts, catalogs, determinism, pair corpus."""

from __future__ import annotations

import pytest

from chainmail.enumeration import (
    brute_force_poset_count,
    enumerate_complete_lattices,
    enumerate_connected_chainmails,
    enumerate_connectivity_pairs,
    enumerate_posets,
)
from chainmail.errors import GuardExceeded
from chainmail.generators import forest_poset_check
from chainmail.poset import FinitePoset

POSET_COUNTS = {0: 1, 1: 1, 2: 2, 3: 5, 4: 16, 5: 63, 6: 318, 7: 2045}
CHAINMAIL_COUNTS = {0: 1, 1: 1, 2: 1, 3: 2, 4: 5, 5: 16, 6: 62, 7: 303}

# catalog partition by shape, frozen from a first run; the tree column
# matches rooted-tree counts minus the chain, the lattice column matches
# lattice counts minus the chain
SHAPE_PARTITION = {
    0: (1, 0, 0, 0),
    1: (1, 0, 0, 0),
    2: (1, 0, 0, 0),
    3: (1, 1, 0, 0),
    4: (1, 3, 1, 0),
    5: (1, 8, 4, 3),
    6: (1, 19, 14, 28),
    7: (1, 47, 52, 203),
}

LATTICE_COUNTS_BY_SIZE = {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15}


class TestPosetCounts:
    @pytest.mark.parametrize("n", range(5))
    def test_matches_brute_force(self, n):
        assert enumerate_posets(n).count == brute_force_poset_count(n)

    @pytest.mark.parametrize("n,expected", sorted(POSET_COUNTS.items()))
    def test_known_values(self, n, expected):
        assert enumerate_posets(n).count == expected

    def test_cap(self):
        with pytest.raises(GuardExceeded):
            enumerate_posets(10)


class TestChainmailCounts:
    @pytest.mark.parametrize("n,expected", sorted(CHAINMAIL_COUNTS.items()))
    def test_published_table(self, n, expected):
        assert enumerate_connected_chainmails(n).count == expected

    def test_two_elements_only_the_chain(self):
        result = enumerate_connected_chainmails(2, want_catalog=True)
        assert result.count == 1
        assert result.catalog[0] == FinitePoset.chain(2)

    def test_agrees_with_filtering_all_posets(self, poset_corpus):
        for n in range(7):
            filtered = [
                p
                for p in poset_corpus[n]
                if p.is_chainmail() and len(p.mail_connected_components(range(n))) <= 1
            ]
            assert enumerate_connected_chainmails(n).count == len(filtered)

    def test_deep_sizes_are_gated(self):
        with pytest.raises(GuardExceeded):
            enumerate_connected_chainmails(9)
        with pytest.raises(GuardExceeded):
            enumerate_connected_chainmails(11, deep=True)


class TestCatalogs:
    def test_entries_are_canonical_distinct_and_qualify(self):
        result = enumerate_connected_chainmails(6, want_catalog=True)
        assert result.count == len(result.catalog)
        keys = set()
        for p in result.catalog:
            assert p.validate() is None
            assert p.is_chainmail()
            assert len(p.mail_connected_components(range(p.n))) <= 1
            assert p == p.canonical_form()
            keys.add(p.canonical_key())
        assert len(keys) == result.count

    def test_catalog_sorted_by_key(self):
        result = enumerate_connected_chainmails(5, want_catalog=True)
        keys = [p.canonical_key() for p in result.catalog]
        assert keys == sorted(keys)

    @pytest.mark.parametrize("n", range(8))
    def test_shape_partition_golden(self, n):
        result = enumerate_connected_chainmails(n, want_catalog=True)
        chains = trees = lattices = other = 0
        for p in result.catalog:
            is_chain = all(p.leq(a, b) or p.leq(b, a) for a in range(n) for b in range(n))
            if is_chain:
                chains += 1
            elif forest_poset_check(p):
                trees += 1
            elif p.is_complete_lattice():
                lattices += 1
            else:
                other += 1
        assert (chains, trees, lattices, other) == SHAPE_PARTITION[n]


def naive_global_dedupe_posets(n: int) -> set:
    """Second generation oracle: grow by maximal elements with no acceptance
    rule at all, deduplicating globally by canonical key per level."""
    from chainmail.poset import bits_of

    level = {FinitePoset(0, ()).canonical_key(): FinitePoset(0, ())}
    for k in range(n):
        nxt = {}
        for p in level.values():
            downsets = [
                m
                for m in range(1 << p.n)
                if all(p.down[a] & ~m == 0 for a in bits_of(m))
            ]
            for dmask in downsets:
                newbit = 1 << p.n
                rows = tuple(
                    (p.up[a] | newbit) if dmask >> a & 1 else p.up[a] for a in range(p.n)
                ) + (newbit,)
                child = FinitePoset(p.n + 1, rows)
                nxt.setdefault(child.canonical_key(), child)
        level = nxt
    return set(level)


class TestAgainstNaiveGeneration:
    @pytest.mark.parametrize("n", range(6))
    def test_same_classes_as_global_dedupe(self, n):
        expected = naive_global_dedupe_posets(n)
        catalog = enumerate_posets(n, want_catalog=True).catalog
        assert {p.canonical_key() for p in catalog} == expected


class TestDeterminism:
    def test_repeat_runs_identical(self):
        a = enumerate_connected_chainmails(6, want_catalog=True)
        b = enumerate_connected_chainmails(6, want_catalog=True)
        assert [p.up for p in a.catalog] == [p.up for p in b.catalog]

    def test_thread_counts_do_not_change_output(self):
        serial = enumerate_connected_chainmails(6, want_catalog=True, threads=1)
        for threads in (2, 4):
            parallel = enumerate_connected_chainmails(6, want_catalog=True, threads=threads)
            assert parallel.count == serial.count
            assert [p.up for p in parallel.catalog] == [p.up for p in serial.catalog]


class TestLatticeCorpus:
    def test_lattice_counts_by_size(self):
        lattices = enumerate_complete_lattices(6)
        by_size = {}
        for lat in lattices:
            by_size[lat.n] = by_size.get(lat.n, 0) + 1
        assert by_size == LATTICE_COUNTS_BY_SIZE

    def test_size_five_matches_filtering(self, poset_corpus):
        filtered = [p for p in poset_corpus[5] if p.is_complete_lattice()]
        assert len(filtered) == LATTICE_COUNTS_BY_SIZE[5]


class TestPairCorpus:
    def test_size_one(self):
        pairs = [p for p in enumerate_connectivity_pairs(1)]
        assert len(pairs) == 2
        assert {frozenset(p.connected) for p in pairs} == {frozenset(), frozenset({0})}

    def test_size_two(self):
        pairs = [p for p in enumerate_connectivity_pairs(2) if p.lattice.n == 2]
        assert len(pairs) == 4

    def test_total_count(self):
        total = sum(1 for _ in enumerate_connectivity_pairs(6))
        expected = sum(count * (1 << size) for size, count in LATTICE_COUNTS_BY_SIZE.items())
        assert total == expected

    def test_stream_is_deterministic(self):
        first = [(p.lattice.up, tuple(sorted(p.connected))) for p in enumerate_connectivity_pairs(4)]
        second = [(p.lattice.up, tuple(sorted(p.connected))) for p in enumerate_connectivity_pairs(4)]
        assert first == second
