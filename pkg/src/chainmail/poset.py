"""Finite posets: mails, joins, components, chainmail tests, isomorphism.

Elements are the integers ``0..n-1``.  The order relation is stored as a
tuple ``up`` of ``n`` bitmasks where bit ``b`` of ``up[a]`` means ``a <= b``;
the transposed masks ``down`` are derived once and cached.  All operations
are pure; :class:`FinitePoset` values are immutable and hashable.

Terminology used throughout the package:

* a *mail* is a non-empty set of elements with a common lower bound;
* a set is *mail-connected* when any two of its elements are linked by a
  path of two-element mails inside the set;
* a *chainmail* is a poset in which every mail-connected set has a join
  (equivalently, every mail has a join);
* a set is *totally mail-disconnected* (TMD) when no two distinct members
  share a lower bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import FormatError
from . import canon

ElementSet = frozenset  # subsets of range(n); bitmasks are internal only


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> frozenset:
    return frozenset(bits_of(mask))


@dataclass(frozen=True)
class Violation:
    """A failed poset axiom together with a witness pair or triple."""

    axiom: str
    witness: tuple

    def describe(self) -> str:
        return f"{self.axiom} fails at {self.witness}"


# ---------------------------------------------------------------------------
# low-level core on (n, up, down) bitmask arrays
#
# The enumeration search constructs millions of candidate posets; these
# functions avoid FinitePoset object overhead on that hot path.
# ---------------------------------------------------------------------------

def transpose(n: int, rows: Sequence[int]) -> tuple:
    out = [0] * n
    for a in range(n):
        r = rows[a]
        while r:
            low = r & -r
            out[low.bit_length() - 1] |= 1 << a
            r ^= low
    return tuple(out)


def least_of_upset(mask: int, up: Sequence[int]) -> Optional[int]:
    """Least element of an up-closed set ``mask``, or None.

    An up-closed set has a least element iff it has exactly one minimal
    element, which is then below everything in the set.
    """
    if not mask:
        return None
    for u in bits_of(mask):
        if mask & ~up[u] == 0:
            return u
    return None


def join_mask(n: int, up: Sequence[int], xmask: int) -> Optional[int]:
    ub = (1 << n) - 1
    for x in bits_of(xmask):
        ub &= up[x]
        if not ub:
            return None
    return least_of_upset(ub, up)


def meet_mask(n: int, down: Sequence[int], xmask: int) -> Optional[int]:
    lb = (1 << n) - 1
    for x in bits_of(xmask):
        lb &= down[x]
        if not lb:
            return None
    if not lb:
        return None
    for u in sorted(bits_of(lb), reverse=True):
        if lb & ~down[u] == 0:
            return u
    return None


def reduced_mail_scan(
    n: int,
    up: Sequence[int],
    down: Sequence[int],
    allow_unbounded: bool,
) -> Optional[int]:
    """First (lex order) reduced mail without a join, as a bitmask.

    A reduced mail is an antichain of size >= 2 with a common lower bound.
    With ``allow_unbounded`` a mail whose upper-bound set is empty does not
    count as a violation; that variant is the pruning predicate used by the
    enumerator (a future maximal element can still provide the join).
    Returns None when no violating mail exists.
    """
    full = (1 << n) - 1
    incomp = [full & ~(up[a] | down[a]) for a in range(n)]
    above = [full & ~((1 << (a + 1)) - 1) for a in range(n)]

    def extend(mask: int, lows: int, ubs: int, cand: int) -> Optional[int]:
        for b in bits_of(cand):
            newlow = lows & down[b]
            if not newlow:
                continue
            newmask = mask | (1 << b)
            newub = ubs & up[b]
            if newub:
                if least_of_upset(newub, up) is None:
                    return newmask
            elif not allow_unbounded:
                return newmask
            hit = extend(newmask, newlow, newub, cand & incomp[b] & above[b])
            if hit is not None:
                return hit
        return None

    for a in range(n):
        hit = extend(1 << a, down[a], up[a], incomp[a] & above[a])
        if hit is not None:
            return hit
    return None


def component_masks(n: int, adjacency: Sequence[int], within: int) -> list:
    """Connected components of ``within`` under a bitmask adjacency, sorted
    by least member."""
    out = []
    seen = 0
    todo = within
    while todo:
        start = todo & -todo
        comp = start
        frontier = start
        while frontier:
            grown = 0
            for v in bits_of(frontier):
                grown |= adjacency[v]
            grown &= within & ~comp
            comp |= grown
            frontier = grown
        out.append(comp)
        seen |= comp
        todo = within & ~seen
    return out


# ---------------------------------------------------------------------------
# FinitePoset
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePoset:
    """An immutable finite poset on elements ``0..n-1``."""

    n: int
    up: tuple

    def __post_init__(self):
        if self.n < 0:
            raise FormatError("element count must be non-negative")
        if len(self.up) != self.n:
            raise FormatError("up-set table length does not match n")

    # -- construction -------------------------------------------------

    @staticmethod
    def from_leq_pairs(n: int, pairs: Iterable[tuple], close: bool = False) -> "FinitePoset":
        """Build from (a, b) pairs meaning a <= b.

        Reflexive pairs are implied.  With ``close`` the reflexive-transitive
        closure is taken; otherwise the input must already be transitively
        closed (checked by :meth:`validate`, not here).
        """
        rows = [1 << a for a in range(n)]
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise FormatError(f"pair ({a},{b}) out of range for n={n}")
            rows[a] |= 1 << b
        if close:
            changed = True
            while changed:
                changed = False
                for a in range(n):
                    grown = rows[a]
                    for b in bits_of(rows[a]):
                        grown |= rows[b]
                    if grown != rows[a]:
                        rows[a] = grown
                        changed = True
        return FinitePoset(n, tuple(rows))

    @staticmethod
    def from_cover_pairs(n: int, covers: Iterable[tuple]) -> "FinitePoset":
        """Build from a Hasse-style cover list (a, b) meaning a < b."""
        return FinitePoset.from_leq_pairs(n, covers, close=True)

    @staticmethod
    def chain(n: int) -> "FinitePoset":
        full = (1 << n) - 1
        return FinitePoset(n, tuple(full & ~((1 << a) - 1) for a in range(n)))

    @staticmethod
    def antichain(n: int) -> "FinitePoset":
        return FinitePoset(n, tuple(1 << a for a in range(n)))

    @staticmethod
    def powerset_lattice(k: int) -> "FinitePoset":
        """Subsets of a k-set ordered by inclusion; element i IS the subset
        with bitmask i."""
        n = 1 << k
        rows = []
        for a in range(n):
            row = 0
            for b in range(n):
                if a & ~b == 0:
                    row |= 1 << b
            rows.append(row)
        return FinitePoset(n, tuple(rows))

    @staticmethod
    def induced(base: "FinitePoset", members: Iterable[int]) -> "FinitePoset":
        """Subposet on ``members`` (ascending order keeps indices stable)."""
        elems = sorted(set(members))
        index = {e: i for i, e in enumerate(elems)}
        rows = []
        for e in elems:
            row = 0
            for f in bits_of(base.up[e]):
                if f in index:
                    row |= 1 << index[f]
            rows.append(row)
        return FinitePoset(len(elems), tuple(rows))

    # -- derived tables -----------------------------------------------

    @cached_property
    def down(self) -> tuple:
        return transpose(self.n, self.up)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def mail_mates(self) -> tuple:
        """mail_mates[a] = bitmask of b such that {a, b} is a mail."""
        down = self.down
        return tuple(
            mask_of(b for b in range(self.n) if down[a] & down[b])
            for a in range(self.n)
        )

    @cached_property
    def covers(self) -> tuple:
        """(a, b) pairs where b covers a."""
        out = []
        for a in range(self.n):
            strictly_above = self.up[a] & ~(1 << a)
            for b in bits_of(strictly_above):
                between = self.up[a] & self.down[b] & ~(1 << a) & ~(1 << b)
                if not between:
                    out.append((a, b))
        return tuple(out)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    # -- axioms ---------------------------------------------------------

    def validate(self) -> Optional[Violation]:
        """None when the relation is a partial order, else the first failed
        axiom with a witness."""
        n, up = self.n, self.up
        for a in range(n):
            if not up[a] >> a & 1:
                return Violation("reflexivity", (a,))
        for a in range(n):
            for b in bits_of(up[a] & ~(1 << a)):
                if up[b] >> a & 1:
                    return Violation("antisymmetry", (a, b))
        for a in range(n):
            for b in bits_of(up[a]):
                if up[b] & ~up[a]:
                    c = next(bits_of(up[b] & ~up[a]))
                    return Violation("transitivity", (a, b, c))
        return None

    # -- sets, bounds, joins -------------------------------------------

    def down_set(self, x: int) -> frozenset:
        if not 0 <= x < self.n:
            raise IndexError(f"element {x} out of range")
        return set_of(self.down[x])

    def up_set(self, x: int) -> frozenset:
        if not 0 <= x < self.n:
            raise IndexError(f"element {x} out of range")
        return set_of(self.up[x])

    def lower_bounds(self, members: Iterable[int]) -> frozenset:
        lb = self.full_mask
        for x in members:
            lb &= self.down[x]
        return set_of(lb)

    def upper_bounds(self, members: Iterable[int]) -> frozenset:
        ub = self.full_mask
        for x in members:
            ub &= self.up[x]
        return set_of(ub)

    def join(self, members: Iterable[int]) -> Optional[int]:
        """Least upper bound, or None.  join(()) is the bottom when one
        exists."""
        return join_mask(self.n, self.up, mask_of(members))

    def meet(self, members: Iterable[int]) -> Optional[int]:
        """Greatest lower bound, or None.  meet(()) is the top when one
        exists."""
        if self.n == 0:
            return None
        return meet_mask(self.n, self.down, mask_of(members))

    def bottom(self) -> Optional[int]:
        return join_mask(self.n, self.up, 0)

    def top(self) -> Optional[int]:
        if self.n == 0:
            return None
        for a in range(self.n):
            if self.up[a] == 1 << a and self.down[a] == self.full_mask:
                return a
        return None

    def maximal_elements(self, within: Optional[Iterable[int]] = None) -> frozenset:
        w = self.full_mask if within is None else mask_of(within)
        out = 0
        for a in bits_of(w):
            if self.up[a] & w & ~(1 << a) == 0:
                out |= 1 << a
        return set_of(out)

    # -- mails and connectivity -----------------------------------------

    def is_mail(self, members: Iterable[int]) -> bool:
        m = mask_of(members)
        if not m:
            return False
        lb = self.full_mask
        for x in bits_of(m):
            lb &= self.down[x]
        return lb != 0

    def is_mail_connected(self, members: Iterable[int]) -> bool:
        m = mask_of(members)
        if not m:
            return False
        comps = component_masks(self.n, self.mail_mates, m)
        return len(comps) == 1

    def mail_connected_components(self, members: Iterable[int]) -> list:
        """Partition into maximal mail-connected subsets, by least member."""
        m = mask_of(members)
        return [set_of(c) for c in component_masks(self.n, self.mail_mates, m)]

    def is_totally_mail_disconnected(self, members: Iterable[int]) -> bool:
        """No two distinct members share a lower bound.  The empty set
        counts as TMD (it is the bottom of the exterior)."""
        m = mask_of(members)
        for a in bits_of(m):
            if self.mail_mates[a] & m != 1 << a:
                return False
        return True

    def order_connected_components(self) -> list:
        """Components of the comparability graph, by least member."""
        adjacency = tuple(self.up[a] | self.down[a] for a in range(self.n))
        return [set_of(c) for c in component_masks(self.n, adjacency, self.full_mask)]

    def reduced_mails(self) -> Iterator[frozenset]:
        """All antichains of size >= 2 with a common lower bound, in
        lexicographic order of their sorted member tuples."""
        n, up, down = self.n, self.up, self.down
        full = self.full_mask
        incomp = [full & ~(up[a] | down[a]) for a in range(n)]

        def extend(mask, lows, cand):
            for b in bits_of(cand):
                newlow = lows & down[b]
                if not newlow:
                    continue
                newmask = mask | (1 << b)
                yield set_of(newmask)
                above_b = full & ~((1 << (b + 1)) - 1)
                yield from extend(newmask, newlow, cand & incomp[b] & above_b)

        for a in range(n):
            above_a = full & ~((1 << (a + 1)) - 1)
            yield from extend(1 << a, down[a], incomp[a] & above_a)

    # -- chainmail and lattice predicates --------------------------------

    def is_chainmail(self) -> bool:
        """Every mail has a join.  Checked on reduced mails only; mails of
        size one or with a maximum are trivial, and every other mail has the
        same upper bounds as the antichain of its maximal elements."""
        return reduced_mail_scan(self.n, self.up, self.down, allow_unbounded=False) is None

    def is_chainmail_bruteforce(self) -> bool:
        """Oracle variant: check every non-empty subset that is a mail.
        Exponential; for tests on small posets."""
        for m in range(1, 1 << self.n):
            lb = ub = self.full_mask
            for x in bits_of(m):
                lb &= self.down[x]
                ub &= self.up[x]
            if lb and least_of_upset(ub, self.up) is None:
                return False
        return True

    def is_complete_lattice(self) -> bool:
        """Every subset has a join.  For a finite poset this reduces to a
        bottom element plus binary joins."""
        return _is_complete_lattice(self)

    def is_distributive(self) -> bool:
        """Meet distributes over join; for finite lattices this is the frame
        condition."""
        from .errors import PreconditionError
        if not self.is_complete_lattice():
            raise PreconditionError("distributivity is defined here for complete lattices")
        n = self.n
        jt, mt = _join_meet_tables(self)
        for x in range(n):
            for y in range(n):
                for z in range(y, n):
                    if mt[x][jt[y][z]] != jt[mt[x][y]][mt[x][z]]:
                        return False
        return True

    # -- isomorphism -----------------------------------------------------

    def canonical_key(self) -> bytes:
        """Deterministic fingerprint; equal for two posets iff they are
        order-isomorphic."""
        return _canonical_key(self)

    def canonical_form(self) -> "FinitePoset":
        """The canonically relabeled copy of this poset."""
        result = canon.canonicalize(self.n, self.up, self.down)
        return FinitePoset(self.n, result.relabeled_up)

    def is_isomorphic(self, other: "FinitePoset") -> bool:
        return self.n == other.n and self.canonical_key() == other.canonical_key()

    def automorphism_orbits(self) -> list:
        """Orbits of the automorphism group, each as a frozenset, sorted by
        least member."""
        result = canon.canonicalize(self.n, self.up, self.down)
        groups = {}
        for v in range(self.n):
            groups.setdefault(result.orbit_of(v), []).append(v)
        return [frozenset(g) for g in sorted(groups.values())]

    # -- JSON interchange -------------------------------------------------

    def to_json(self, connectivity: Optional[Iterable[int]] = None) -> dict:
        """The package's poset interchange object.  Reflexive pairs are
        omitted; the relation is emitted transitively closed."""
        pairs = []
        for a in range(self.n):
            for b in bits_of(self.up[a] & ~(1 << a)):
                pairs.append([a, b])
        obj = {"n": self.n, "leq": pairs}
        if connectivity is not None:
            obj["connectivity"] = sorted(connectivity)
        return obj

    def to_json_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)

    @staticmethod
    def from_json(obj: dict) -> "FinitePoset":
        """Parse the interchange object.  ``closure: "reflexive-transitive"``
        permits a cover/Hasse list; otherwise the relation must already be
        transitively closed (validate() reports if it is not)."""
        if not isinstance(obj, dict):
            raise FormatError("poset JSON must be an object")
        try:
            n = int(obj["n"])
        except (KeyError, TypeError, ValueError):
            raise FormatError('poset JSON needs an integer field "n"') from None
        pairs = obj.get("leq", [])
        if not isinstance(pairs, list):
            raise FormatError('"leq" must be a list of [a, b] pairs')
        from .config import max_n
        if n > max_n():
            from .errors import GuardExceeded
            raise GuardExceeded(f"poset size {n} exceeds cap {max_n()} (set CHM_MAX_N to raise)")
        close = obj.get("closure") == "reflexive-transitive"
        cleaned = []
        for p in pairs:
            if not (isinstance(p, (list, tuple)) and len(p) == 2):
                raise FormatError(f"bad leq pair: {p!r}")
            cleaned.append((int(p[0]), int(p[1])))
        return FinitePoset.from_leq_pairs(n, cleaned, close=close)


def connectivity_from_json(obj: dict) -> tuple:
    """(poset, connectivity set) from an interchange object that carries the
    optional "connectivity" field."""
    poset = FinitePoset.from_json(obj)
    raw = obj.get("connectivity")
    if raw is None:
        raise FormatError('missing "connectivity" field')
    members = frozenset(int(x) for x in raw)
    for x in members:
        if not 0 <= x < poset.n:
            raise FormatError(f"connectivity element {x} out of range")
    return poset, members


# ---------------------------------------------------------------------------
# cached helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _is_complete_lattice(p: FinitePoset) -> bool:
    if p.n == 0:
        return False
    if p.bottom() is None:
        return False
    for a in range(p.n):
        for b in range(a + 1, p.n):
            if join_mask(p.n, p.up, (1 << a) | (1 << b)) is None:
                return False
    return True


@lru_cache(maxsize=None)
def _join_meet_tables(p: FinitePoset) -> tuple:
    n = p.n
    jt = [[0] * n for _ in range(n)]
    mt = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            j = join_mask(n, p.up, (1 << a) | (1 << b))
            m = meet_mask(n, p.down, (1 << a) | (1 << b))
            if j is None or m is None:
                raise ValueError("join/meet tables need a lattice")
            jt[a][b] = j
            mt[a][b] = m
    return tuple(map(tuple, jt)), tuple(map(tuple, mt))


@lru_cache(maxsize=1 << 16)
def _canonical_key(p: FinitePoset) -> bytes:
    return canon.canonicalize(p.n, p.up, p.down).key
