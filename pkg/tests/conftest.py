"""Shared corpus fixtures and independent oracles.

The oracles here recompute predicates from their definitions by direct
subset scans, so the fast bitmask implementations are always checked
against something that cannot share their bugs.
"""

from __future__ import annotations

import pytest

from chainmail.poset import FinitePoset
from chainmail.enumeration import enumerate_posets


def subsets(n):
    for mask in range(1 << n):
        yield [i for i in range(n) if mask >> i & 1]


def oracle_upper_bounds(p: FinitePoset, members) -> set:
    out = set()
    for u in range(p.n):
        if all(p.leq(x, u) for x in members):
            out.add(u)
    return out


def oracle_lower_bounds(p: FinitePoset, members) -> set:
    out = set()
    for u in range(p.n):
        if all(p.leq(u, x) for x in members):
            out.add(u)
    return out


def oracle_join(p: FinitePoset, members):
    ubs = oracle_upper_bounds(p, members)
    least = [u for u in ubs if all(p.leq(u, v) for v in ubs)]
    return least[0] if least else None


def oracle_meet(p: FinitePoset, members):
    lbs = oracle_lower_bounds(p, members)
    greatest = [u for u in lbs if all(p.leq(v, u) for v in lbs)]
    return greatest[0] if greatest else None


def oracle_is_mail(p: FinitePoset, members) -> bool:
    return bool(members) and bool(oracle_lower_bounds(p, members))


def oracle_mail_graph_components(p: FinitePoset, members) -> list:
    """Components of the two-element-mail graph by breadth-first search."""
    members = sorted(members)
    seen = set()
    comps = []
    for start in members:
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in members:
                if y not in comp and oracle_is_mail(p, [x, y]):
                    comp.add(y)
                    frontier.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def oracle_is_mail_connected(p: FinitePoset, members) -> bool:
    return bool(members) and len(oracle_mail_graph_components(p, members)) == 1


def oracle_is_chainmail_all_mails(p: FinitePoset) -> bool:
    for members in subsets(p.n):
        if oracle_is_mail(p, members) and oracle_join(p, members) is None:
            return False
    return True


def oracle_every_mail_connected_set_has_join(p: FinitePoset) -> bool:
    for members in subsets(p.n):
        if oracle_is_mail_connected(p, members) and oracle_join(p, members) is None:
            return False
    return True


def oracle_is_order_connected(p: FinitePoset, members) -> bool:
    members = set(members)
    if not members:
        return False
    start = min(members)
    comp = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for y in members:
            if y not in comp and (p.leq(x, y) or p.leq(y, x)):
                comp.add(y)
                frontier.append(y)
    return comp == members


def oracle_every_connected_set_has_join(p: FinitePoset) -> bool:
    for members in subsets(p.n):
        if oracle_is_order_connected(p, members) and oracle_join(p, members) is None:
            return False
    return True


def oracle_every_upset_complete(p: FinitePoset) -> bool:
    for x in range(p.n):
        upset = sorted(p.up_set(x))
        sub = FinitePoset.induced(p, upset)
        if not sub.is_complete_lattice():
            return False
    return True


def relabel(p: FinitePoset, perm) -> FinitePoset:
    rows = [0] * p.n
    for a in range(p.n):
        for b in range(p.n):
            if p.leq(a, b):
                rows[perm[a]] |= 1 << perm[b]
    return FinitePoset(p.n, tuple(rows))


@pytest.fixture(scope="session")
def poset_corpus():
    """Every poset up to isomorphism, keyed by size, for sizes 0..6."""
    return {n: list(enumerate_posets(n, want_catalog=True).catalog) for n in range(7)}


@pytest.fixture(scope="session")
def small_poset_corpus(poset_corpus):
    """Sizes 0..5, for the heavier exhaustive sweeps."""
    return {n: poset_corpus[n] for n in range(6)}
