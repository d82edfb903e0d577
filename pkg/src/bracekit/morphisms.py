"""Brace homomorphisms, isomorphism search and dedup up to isomorphism.

A brace map is an additive homomorphism that also respects the
multiplication.  Since two brace structures on the same additive group are
isomorphic exactly when some additive automorphism transports one onto the
other, the isomorphism search iterates additive isomorphisms instead of
arbitrary bijections.

For a candidate additive isomorphism phi the multiplicativity test reduces
to a check on a circle-generating set G of the source: the set of elements
where ``lam_{phi(a)} = phi lam_a phi^{-1}`` holds is closed under the
circle operation, hence equals the whole brace as soon as it contains G.
This keeps each candidate O(|G| * n) instead of O(n^2).

Cheap isomorphism invariants (additive type, socle order, multiplication
fingerprint, circle-order profile, ...) pre-filter pairs before any search
and provide the "distinguishing invariant" for reporting.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .braces import Brace
from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded
from .groups import (
    GroupMap,
    aut_group_order,
    enumerate_isomorphisms,
    groups_isomorphic,
    identity_map,
    primary_invariant_multiset,
)

_DEEP_INVARIANT_MAX_ORDER = 512


@dataclass(frozen=True)
class BraceMap:
    """An additive map between braces that is also multiplicative."""

    source: Brace
    target: Brace
    group_map: GroupMap

    def apply(self, i: int) -> int:
        return self.group_map.apply(i)

    def as_permutation(self) -> np.ndarray:
        return self.group_map.as_permutation()

    def is_bijective(self) -> bool:
        return self.group_map.is_bijective()

    def verify(self) -> bool:
        return is_brace_homomorphism(self.group_map, self.source, self.target)


def _value_table(f, source: Brace, target: Brace) -> np.ndarray:
    if isinstance(f, GroupMap):
        if f.domain != source.group or f.codomain != target.group:
            raise ValueError("map endpoints do not match the braces")
        return f.as_permutation()
    vals = np.asarray(f, dtype=np.int64)
    if vals.shape != (source.order,):
        raise ValueError("point map has wrong length")
    return vals


def is_brace_homomorphism(f, source: Brace, target: Brace) -> bool:
    """True iff f is additive and multiplicative on all pairs.

    Accepts a GroupMap (additive by construction) or a raw value table,
    so that explicit non-additive bijections can be tested and rejected.
    """
    vals = _value_table(f, source, target)
    n = source.order
    gs, gt = source.group, target.group
    idx = np.arange(n, dtype=np.int64)
    if not np.array_equal(
        vals[gs.add_vec(idx[:, None], idx[None, :])],
        gt.add_vec(vals[:, None], vals[None, :]),
    ):
        return False
    for a in range(n):
        if not np.array_equal(vals[source.row(a)], target.row(int(vals[a]))[vals]):
            return False
    return True


# ---------------------------------------------------------------------------
# isomorphism invariants


def circle_generating_set(brace: Brace) -> tuple[int, ...]:
    """A small set generating the circle group (canonical generators first)."""
    n = brace.order
    reached = np.zeros(n, dtype=bool)
    reached[0] = True
    gens: list[int] = []
    rows: list[np.ndarray] = []

    def close_with(new_gen):
        gens.append(new_gen)
        rows.append(brace.circle_row(new_gen))
        frontier = [i for i in range(n) if reached[i]]
        while frontier:
            x = frontier.pop()
            for r in rows:
                y = int(r[x])
                if not reached[y]:
                    reached[y] = True
                    frontier.append(y)

    for cand in list(brace.group.generators) + list(range(n)):
        if reached.all():
            break
        if not reached[cand]:
            close_with(int(cand))
    return tuple(gens)


def multiplication_fingerprint(brace: Brace) -> tuple[int, ...]:
    """Sorted multiset of |{(a, b) : a*b = c}| over c; isomorphism invariant."""
    n = brace.order
    counts = np.zeros(n, dtype=np.int64)
    for a in range(n):
        counts += np.bincount(brace.row(a), minlength=n)
    return tuple(int(x) for x in np.sort(counts))


def brace_invariants(brace: Brace) -> dict:
    """Isomorphism invariants, cached on the brace.

    The cheap block is always computed; cycle types of the adjoint
    permutations are added only at small orders.
    """
    cached = brace.meta.get("invariants")
    if cached is not None:
        return cached
    n = brace.order
    g = brace.group
    add_orders = tuple(int(g.element_order(i)) for i in range(n))
    circ_orders = tuple(int(x) for x in brace.circle_order_vector())
    gens = circle_generating_set(brace)
    abelian = all(
        brace.circle(a, b) == brace.circle(b, a) for a in gens for b in gens
    )
    inv = {
        "additive": primary_invariant_multiset(g),
        "socle_order": len(brace.socle_elements()),
        "fingerprint": multiplication_fingerprint(brace),
        "order_profile": tuple(sorted(zip(add_orders, circ_orders))),
        "adjoint_exponent": int(np.lcm.reduce(np.asarray(circ_orders, dtype=np.int64))),
        "adjoint_abelian": abelian,
    }
    if n <= _DEEP_INVARIANT_MAX_ORDER:
        types = []
        for a in range(n):
            lam = brace.lambda_row(a)
            seen = np.zeros(n, dtype=bool)
            lens = []
            for s in range(n):
                if not seen[s]:
                    l, x = 0, s
                    while not seen[x]:
                        seen[x] = True
                        x = int(lam[x])
                        l += 1
                    lens.append(l)
            types.append((add_orders[a], tuple(sorted(lens))))
        inv["lambda_cycle_types"] = tuple(sorted(types))
    brace.meta["invariants"] = inv
    return inv


def distinguishing_invariant(a: Brace, b: Brace) -> str | None:
    """Name of the first shared invariant separating the braces, if any."""
    ia, ib = brace_invariants(a), brace_invariants(b)
    for key in ("additive", "socle_order", "fingerprint", "order_profile",
                "adjoint_exponent", "adjoint_abelian", "lambda_cycle_types"):
        if key in ia and key in ib and ia[key] != ib[key]:
            return key
    return None


# ---------------------------------------------------------------------------
# isomorphism search


def _lambda_condition_holds(target, gens, src_lams, perm) -> bool:
    # lam^B_{phi(g)} . phi == phi . lam^A_g, elementwise over the domain
    for g, lam_g in zip(gens, src_lams):
        tgt = target.lambda_row(int(perm[g]))
        if not np.array_equal(tgt[perm], perm[lam_g]):
            return False
    return True


def find_isomorphism(a: Brace, b: Brace, guards: Guards = DEFAULT_GUARDS):
    """First brace isomorphism a -> b in canonical scan order, or None.

    The identity-shaped candidate is tried first when the presentations
    coincide, so a brace compared against itself reports the identity.
    """
    if a.order != b.order:
        raise ValueError("braces have different orders")
    if not groups_isomorphic(a.group, b.group):
        return None
    if distinguishing_invariant(a, b) is not None:
        return None
    size = aut_group_order(a.group)
    if size > guards.aut_cap:
        raise GuardExceeded(f"|Aut| = {size} exceeds cap {guards.aut_cap}")
    gens = circle_generating_set(a)
    src_lams = [a.lambda_row(g) for g in gens]

    def check(perm) -> bool:
        return _lambda_condition_holds(b, gens, src_lams, perm)

    if a.group == b.group:
        ident = identity_map(a.group)
        if check(ident.as_permutation()):
            return BraceMap(a, b, ident)
    for phi in enumerate_isomorphisms(a.group, b.group):
        if check(phi.as_permutation()):
            return BraceMap(a, b, phi)
    return None


def are_isomorphic(a: Brace, b: Brace, guards: Guards = DEFAULT_GUARDS) -> bool:
    return find_isomorphism(a, b, guards) is not None


def automorphism_group(a: Brace, guards: Guards = DEFAULT_GUARDS) -> list[BraceMap]:
    """All brace automorphisms, by filtering the additive automorphisms."""
    size = aut_group_order(a.group)
    if size > guards.aut_cap:
        raise GuardExceeded(f"|Aut| = {size} exceeds cap {guards.aut_cap}")
    gens = circle_generating_set(a)
    src_lams = [a.lambda_row(g) for g in gens]
    out = []
    for phi in enumerate_isomorphisms(a.group, a.group):
        if _lambda_condition_holds(a, gens, src_lams, phi.as_permutation()):
            out.append(BraceMap(a, a, phi))
    return out


# ---------------------------------------------------------------------------
# dedup


@dataclass(frozen=True)
class IsoClass:
    representative: Brace
    members: tuple[int, ...]  # positions in the input list

    @property
    def size(self) -> int:
        return len(self.members)


def dedupe_up_to_iso(braces, guards: Guards = DEFAULT_GUARDS) -> list[IsoClass]:
    """Group a list of same-order braces into isomorphism classes.

    The first-seen member represents its class; invariant pre-filters keep
    the number of full searches small.
    """
    braces = list(braces)
    if braces:
        n = braces[0].order
        if any(b.order != n for b in braces):
            raise ValueError("braces must all have the same order")
    reps: list[Brace] = []
    members: list[list[int]] = []
    for i, b in enumerate(braces):
        placed = False
        for j, rep in enumerate(reps):
            if find_isomorphism(rep, b, guards) is not None:
                members[j].append(i)
                placed = True
                break
        if not placed:
            reps.append(b)
            members.append([i])
    return [IsoClass(rep, tuple(m)) for rep, m in zip(reps, members)]
