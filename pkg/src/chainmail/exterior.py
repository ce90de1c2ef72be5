"""The exterior of a poset: its totally mail-disconnected families.

For a poset G the exterior is the poset of all TMD subsets of G (the empty
set included), ordered componentwise: S1 <= S2 when each member of S1 is
below some member of S2.  The exterior is a complete lattice exactly when
G is a chainmail, and is then order-isomorphic to the poset of down-closed
subchainmails of G.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .config import DEFAULT_MAX_TMD_SETS
from .errors import GuardExceeded, PreconditionError
from .poset import FinitePoset, bits_of, join_mask, mask_of, set_of


@lru_cache(maxsize=None)
def tmd_set_masks(p: FinitePoset, limit: int = DEFAULT_MAX_TMD_SETS) -> tuple:
    """All totally mail-disconnected subsets of p as bitmasks, in
    lexicographic order of sorted member tuples (the empty set first).

    The search only ever extends a TMD set by a larger element that shares
    no lower bound with any member, so no non-TMD set is visited.
    """
    n = p.n
    mates = p.mail_mates
    full = p.full_mask
    out = [0]

    def extend(mask: int, cand: int) -> None:
        for b in bits_of(cand):
            out.append(mask | (1 << b))
            if len(out) > limit:
                raise GuardExceeded(
                    f"TMD family exceeds {limit} sets; raise the limit explicitly"
                )
            above_b = full & ~((1 << (b + 1)) - 1)
            extend(mask | (1 << b), cand & ~mates[b] & above_b)

    extend(0, full)
    out.sort(key=lambda m: tuple(bits_of(m)))
    return tuple(out)


def dominated_mask(p: FinitePoset, members_mask: int) -> int:
    """Union of the down-sets of the members: everything below the set."""
    m = 0
    for a in bits_of(members_mask):
        m |= p.down[a]
    return m


@dataclass(frozen=True)
class TmdFamily:
    """The exterior of ``base``: every TMD set with the componentwise order,
    materialized as a FinitePoset so the whole poset toolkit applies."""

    base: FinitePoset
    sets: tuple          # frozensets, in the deterministic enumeration order
    order: FinitePoset   # order.leq(i, j) iff sets[i] <= sets[j] componentwise

    def index_of(self, members: Iterable[int]) -> int:
        target = frozenset(members)
        for i, s in enumerate(self.sets):
            if s == target:
                return i
        raise KeyError(f"{sorted(target)} is not a TMD set of the base poset")

    def singleton_indices(self) -> frozenset:
        return frozenset(i for i, s in enumerate(self.sets) if len(s) == 1)


def exterior(p: FinitePoset, limit: int = DEFAULT_MAX_TMD_SETS) -> TmdFamily:
    masks = tmd_set_masks(p, limit)
    dom = [dominated_mask(p, m) for m in masks]
    k = len(masks)
    rows = []
    for i in range(k):
        row = 0
        mi = masks[i]
        for j in range(k):
            if mi & ~dom[j] == 0:
                row |= 1 << j
        rows.append(row)
    order = FinitePoset(k, tuple(rows))
    return TmdFamily(base=p, sets=tuple(set_of(m) for m in masks), order=order)


def exterior_is_complete(p: FinitePoset, limit: int = DEFAULT_MAX_TMD_SETS) -> bool:
    """Whether the exterior is a complete lattice.  Coincides with
    ``p.is_chainmail()`` on every poset; the equality is an invariant the
    test suite sweeps, not something this function assumes."""
    return exterior(p, limit).order.is_complete_lattice()


# ---------------------------------------------------------------------------
# down-closed subchainmails and the reconstruction isomorphism
# ---------------------------------------------------------------------------

def _require_chainmail(p: FinitePoset) -> None:
    if not p.is_chainmail():
        raise PreconditionError("operation requires a chainmail")


def _reduced_mail_joins(p: FinitePoset) -> list:
    """(mask, join) for every reduced mail; joins exist in a chainmail."""
    out = []
    for mail in p.reduced_mails():
        m = mask_of(mail)
        j = join_mask(p.n, p.up, m)
        out.append((m, j))
    return out


def downclosed_subchainmails(p: FinitePoset) -> list:
    """All down-closed subsets closed under joins of their mails, as
    frozensets in lexicographic order.

    For a down-closed set the lower bounds of any subset already lie inside
    it, so its mails are exactly the mails of the ambient poset it contains;
    closure therefore reduces to: every ambient reduced mail inside the set
    has its join inside the set.
    """
    _require_chainmail(p)
    if p.n > 20:
        raise GuardExceeded("down-set enumeration is capped at 2^20 subsets")
    rms = _reduced_mail_joins(p)
    out = []
    for x in range(1 << p.n):
        if any(p.down[a] & ~x for a in bits_of(x)):
            continue
        if any(m & ~x == 0 and not x >> j & 1 for m, j in rms):
            continue
        out.append(set_of(x))
    out.sort(key=sorted)
    return out


def tmd_to_downset(p: FinitePoset, members: Iterable[int]) -> frozenset:
    """The down-set of a TMD set; one direction of the exterior
    isomorphism."""
    _require_chainmail(p)
    if not p.is_totally_mail_disconnected(members):
        raise PreconditionError("input set is not totally mail-disconnected")
    return set_of(dominated_mask(p, mask_of(members)))


def downset_to_tmd(p: FinitePoset, members: Iterable[int]) -> frozenset:
    """Joins of the maximal mail-connected subsets of a down-closed
    subchainmail; the inverse direction of the exterior isomorphism."""
    _require_chainmail(p)
    x = mask_of(members)
    joins = []
    for comp in p.mail_connected_components(set_of(x)):
        j = p.join(comp)
        if j is None or not x >> j & 1:
            raise PreconditionError(
                "input is not a down-closed subchainmail: a component join escapes it"
            )
        joins.append(j)
    return frozenset(joins)


def inclusion_poset(sets: Sequence[frozenset]) -> FinitePoset:
    """The subset-inclusion order on a family of sets, in the given order."""
    k = len(sets)
    rows = []
    for i in range(k):
        row = 0
        for j in range(k):
            if sets[i] <= sets[j]:
                row |= 1 << j
        rows.append(row)
    return FinitePoset(k, tuple(rows))


def exterior_as_absolute(p: FinitePoset, limit: int = DEFAULT_MAX_TMD_SETS):
    """The exterior paired with its singleton sets as the connectivity.

    The singletons are exactly the absolutely connected elements of the
    exterior and carry an induced order isomorphic to the base chainmail;
    both facts are swept as invariants in the tests rather than recomputed
    here.
    """
    from .connectivity import ConnectivityPair

    _require_chainmail(p)
    family = exterior(p, limit)
    return ConnectivityPair(family.order, family.singleton_indices())
