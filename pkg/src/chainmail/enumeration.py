"""Isomorph-free exhaustive generation of posets and connected chainmails.

Search shape: a poset on k+1 elements is always a poset on k elements plus
one new maximal element whose strict down-set is a down-closed subset of
the parent.  Walking that tree and keeping exactly one representative per
isomorphism class is done McKay-style: a child is accepted only when its
new element lies in the automorphism orbit of a canonical deletion choice
(the maximal element holding the largest canonical label), and children of
one parent are deduplicated by canonical key.  Accepted children of
distinct parents can never be isomorphic, so no global seen-set is needed
and subtrees can run in parallel.

For chainmail counting the intermediate levels keep every *completable*
poset: one in which no mail has acquired two incomparable minimal upper
bounds.  Order between existing elements never changes and new elements
are maximal, so such a mail can never again have a least upper bound;
conversely a poset without such mails extends to a connected chainmail by
adding one top element.  Deleting a maximal element preserves
completability, which is what makes the pruned tree still contain a
canonical ancestry for every connected chainmail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from . import canon
from .config import (
    DEFAULT_CHAINMAIL_ENUM_CAP,
    DEEP_CHAINMAIL_ENUM_CAP,
    DEFAULT_POSET_ENUM_CAP,
)
from .connectivity import ConnectivityPair
from .errors import GuardExceeded, PreconditionError
from .poset import (
    FinitePoset,
    bits_of,
    component_masks,
    reduced_mail_scan,
    transpose,
)


@dataclass(frozen=True)
class EnumerationResult:
    n: int
    count: int
    catalog: Optional[tuple]  # canonical FinitePoset values, sorted by key
    elapsed: float


# ---------------------------------------------------------------------------
# search primitives
# ---------------------------------------------------------------------------

def _downclosed_masks(n: int, down: Sequence[int]) -> List[int]:
    out = []
    for m in range(1 << n):
        ok = True
        mm = m
        while mm:
            low = mm & -mm
            if down[low.bit_length() - 1] & ~m:
                ok = False
                break
            mm ^= low
        if ok:
            out.append(m)
    return out


def _is_completable(n: int, up: Sequence[int], down: Sequence[int]) -> bool:
    return reduced_mail_scan(n, up, down, allow_unbounded=True) is None


def _is_connected_chainmail(n: int, up: Sequence[int], down: Sequence[int]) -> bool:
    if reduced_mail_scan(n, up, down, allow_unbounded=False) is not None:
        return False
    mates = [0] * n
    for a in range(n):
        da = down[a]
        row = 0
        for b in range(n):
            if da & down[b]:
                row |= 1 << b
        mates[a] = row
    return len(component_masks(n, mates, (1 << n) - 1)) <= 1


def _accepted(k1: int, up1: Tuple[int, ...], down1: Tuple[int, ...]):
    """McKay acceptance for the child that added element k1-1; returns the
    canonicalization when accepted, else None."""
    result = canon.canonicalize(k1, up1, down1)
    pos = [0] * k1
    for i, e in enumerate(result.perm):
        pos[e] = i
    best = None
    for e in range(k1):
        if up1[e] == 1 << e:  # maximal
            if best is None or pos[e] > pos[best]:
                best = e
    if result.same_orbit(best, k1 - 1):
        return result
    return None


def _children(k: int, up: Tuple[int, ...], kind: str, target: int):
    """Accepted, deduplicated children of a parent; yields
    (k+1, up-rows, canon-result)."""
    down = transpose(k, up)
    k1 = k + 1
    newbit = 1 << k
    seen = set()
    for dmask in _downclosed_masks(k, down):
        up1 = tuple((up[a] | newbit) if dmask >> a & 1 else up[a] for a in range(k)) + (newbit,)
        down1 = _down_of_child(k, down, dmask)
        if k1 == target:
            if kind == "chainmails" and not _is_connected_chainmail(k1, up1, down1):
                continue
        else:
            if kind == "chainmails" and not _is_completable(k1, up1, down1):
                continue
        result = _accepted(k1, up1, down1)
        if result is None:
            continue
        if result.key in seen:
            continue
        seen.add(result.key)
        yield k1, up1, result


def _down_of_child(k: int, down: Sequence[int], dmask: int) -> Tuple[int, ...]:
    newbit = 1 << k
    return tuple(down[a] for a in range(k)) + (dmask | newbit,)


def _expand(k: int, up: Tuple[int, ...], kind: str, target: int, want_catalog: bool, sink: list) -> int:
    """Depth-first expansion; returns the number of classes found at the
    target level underneath this node."""
    found = 0
    for k1, up1, result in _children(k, up, kind, target):
        if k1 == target:
            found += 1
            if want_catalog:
                sink.append((result.key, result.relabeled_up))
        else:
            found += _expand(k1, up1, kind, target, want_catalog, sink)
    return found


def _worker(payload):
    kind, target, want_catalog, roots = payload
    sink: list = []
    total = 0
    for k, up in roots:
        total += _expand(k, tuple(up), kind, target, want_catalog, sink)
    return total, sink


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _enumerate(kind: str, n: int, want_catalog: bool, threads: int) -> EnumerationResult:
    t0 = time.perf_counter()
    if n == 0:
        catalog = (FinitePoset(0, ()),) if want_catalog else None
        return EnumerationResult(0, 1, catalog, time.perf_counter() - t0)

    entries: list = []
    root_level = max(0, n - 3) if threads > 1 else 0
    frontier: list = [(0, ())]
    level = 0
    while level < root_level:
        nxt = []
        for k, up in frontier:
            for k1, up1, _result in _children(k, up, kind, n):
                nxt.append((k1, up1))
        frontier = nxt
        level += 1

    if threads > 1 and len(frontier) > 1:
        import multiprocessing as mp

        chunks = [[] for _ in range(min(threads * 4, len(frontier)))]
        for i, root in enumerate(frontier):
            chunks[i % len(chunks)].append(root)
        payloads = [(kind, n, want_catalog, chunk) for chunk in chunks]
        ctx = mp.get_context("fork")
        with ctx.Pool(processes=threads) as pool:
            results = pool.map(_worker, payloads)
        count = sum(c for c, _ in results)
        for _, sink in results:
            entries.extend(sink)
    else:
        count = 0
        for k, up in frontier:
            if k == n:
                # root level reached the target already
                result = canon.canonicalize(k, up, transpose(k, up))
                count += 1
                if want_catalog:
                    entries.append((result.key, result.relabeled_up))
            else:
                count += _expand(k, up, kind, n, want_catalog, entries)

    catalog = None
    if want_catalog:
        entries.sort(key=lambda e: e[0])
        catalog = tuple(FinitePoset(n, rows) for _key, rows in entries)
    return EnumerationResult(n, count, catalog, time.perf_counter() - t0)


def enumerate_posets(n: int, want_catalog: bool = False, threads: int = 1,
                     cap: int = DEFAULT_POSET_ENUM_CAP) -> EnumerationResult:
    """All posets on n elements up to isomorphism."""
    if n < 0:
        raise PreconditionError("n must be non-negative")
    if n > cap:
        raise GuardExceeded(f"poset enumeration capped at n={cap}")
    return _enumerate("posets", n, want_catalog, threads)


def enumerate_connected_chainmails(n: int, want_catalog: bool = False, threads: int = 1,
                                   deep: bool = False) -> EnumerationResult:
    """Isomorphism classes of mail-connected chainmails on n elements.

    The empty poset counts at n = 0.  Sizes 9 and 10 sit behind ``deep``;
    they take considerably longer.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")
    cap = DEEP_CHAINMAIL_ENUM_CAP if deep else DEFAULT_CHAINMAIL_ENUM_CAP
    if n > cap:
        if not deep and n <= DEEP_CHAINMAIL_ENUM_CAP:
            raise GuardExceeded(f"chainmail enumeration beyond n={DEFAULT_CHAINMAIL_ENUM_CAP} needs --deep")
        raise GuardExceeded(f"chainmail enumeration capped at n={cap}")
    return _enumerate("chainmails", n, want_catalog, threads)


def brute_force_poset_count(n: int) -> int:
    """Count posets up to isomorphism by filtering every reflexive relation;
    the independent oracle for the augmentation search (n <= 4 is
    practical)."""
    if n == 0:
        return 1
    if n > 4:
        raise GuardExceeded("the brute-force oracle enumerates 2^(n^2-n) relations")
    keys = set()
    offdiag = [(a, b) for a in range(n) for b in range(n) if a != b]
    for pick in range(1 << len(offdiag)):
        rows = [1 << a for a in range(n)]
        for i, (a, b) in enumerate(offdiag):
            if pick >> i & 1:
                rows[a] |= 1 << b
        p = FinitePoset(n, tuple(rows))
        if p.validate() is None:
            keys.add(p.canonical_key())
    return len(keys)


def enumerate_complete_lattices(max_size: int) -> List[FinitePoset]:
    """Canonical complete lattices with 1..max_size elements, smaller sizes
    first, canonical-key order inside a size."""
    out = []
    for size in range(1, max_size + 1):
        result = enumerate_posets(size, want_catalog=True)
        out.extend(p for p in result.catalog if p.is_complete_lattice())
    return out


def enumerate_connectivity_pairs(max_lattice_size: int) -> Iterator[ConnectivityPair]:
    """Every (complete lattice up to iso, subset) pair, streamed in
    deterministic order."""
    if max_lattice_size > 6:
        raise GuardExceeded("exhaustive pair corpus is capped at lattice size 6")
    for lattice in enumerate_complete_lattices(max_lattice_size):
        for cmask in range(1 << lattice.n):
            yield ConnectivityPair(lattice, frozenset(bits_of(cmask)))
