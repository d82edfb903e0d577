"""Finite abelian groups presented as direct sums of cyclic groups.

Conventions used everywhere in this package:

  * A group is an ordered tuple of cyclic moduli ``(n1, ..., nk)`` with
    every ``ni >= 2``; the empty tuple is the trivial group.  The
    presentation is kept as given: ``(2, 2)`` and ``(4,)`` are different
    presentations of different groups, and an equality-up-to-isomorphism
    predicate compares multisets of prime-power factors instead.
  * An element is a residue vector ``(c1, ..., ck)`` with ``ci in [0, ni)``
    and, equivalently, its mixed-radix index with ``coords[0]`` most
    significant.  All tables and file formats use that index order.
  * A homomorphism is stored by its images on the canonical generators
    ``e_i = (0, ..., 1, ..., 0)``; an image assignment is well defined
    exactly when the image order divides the generator order.

Automorphisms and homomorphisms are enumerated exhaustively by
generator-image backtracking with early pruning, behind explicit guards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product as iproduct

import numpy as np

from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded

_ADD_TABLE_MAX_ORDER = 2048


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


class AbelianGroup:
    """Direct sum of cyclic groups Z_{n1} + ... + Z_{nk}."""

    def __init__(self, invariants):
        invariants = tuple(int(n) for n in invariants)
        for n in invariants:
            if n < 2:
                raise ValueError(f"cyclic factor modulus {n} < 2")
        self.invariants = invariants
        self.order = math.prod(invariants)
        # weights[i] = prod(invariants[i+1:]); index = sum(c_i * w_i)
        w = []
        acc = 1
        for n in reversed(invariants):
            w.append(acc)
            acc *= n
        self.weights = tuple(reversed(w))
        self.exponent = math.lcm(*invariants) if invariants else 1
        self._coords = None
        self._add_table = None

    def __repr__(self):
        return f"AbelianGroup({list(self.invariants)})"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.invariants == other.invariants

    def __hash__(self):
        return hash(self.invariants)

    # -- element encoding ------------------------------------------------

    def coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise ValueError(f"element index {index} out of range")
        out = []
        for n, w in zip(self.invariants, self.weights):
            out.append((index // w) % n)
        return tuple(out)

    def index(self, coords) -> int:
        coords = tuple(coords)
        if len(coords) != len(self.invariants):
            raise ValueError("coordinate vector has wrong length")
        for c, n in zip(coords, self.invariants):
            if not 0 <= c < n:
                raise ValueError(f"coordinate {c} out of range for modulus {n}")
        return sum(c * w for c, w in zip(coords, self.weights))

    @property
    def coords_matrix(self) -> np.ndarray:
        """(order, k) array with row i = coords of element i."""
        if self._coords is None:
            idx = np.arange(self.order, dtype=np.int64)
            cols = [
                (idx // w) % n for n, w in zip(self.invariants, self.weights)
            ]
            self._coords = (
                np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64)
            )
        return self._coords

    @property
    def generators(self) -> tuple[int, ...]:
        return self.weights  # index of e_i is its own weight

    # -- scalar element arithmetic ---------------------------------------

    def add(self, i: int, j: int) -> int:
        return self.index(
            tuple((a + b) % n for a, b, n in zip(self.coords(i), self.coords(j), self.invariants))
        )

    def neg(self, i: int) -> int:
        return self.index(tuple((-a) % n for a, n in zip(self.coords(i), self.invariants)))

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def scalar(self, c: int, i: int) -> int:
        return self.index(tuple((c * a) % n for a, n in zip(self.coords(i), self.invariants)))

    def element_order(self, i: int) -> int:
        return math.lcm(
            *(n // math.gcd(n, c) for c, n in zip(self.coords(i), self.invariants))
        ) if self.invariants else 1

    # -- vectorized index arithmetic --------------------------------------

    @property
    def add_table(self) -> np.ndarray | None:
        if self.order > _ADD_TABLE_MAX_ORDER:
            return None
        if self._add_table is None:
            cm = self.coords_matrix
            s = cm[:, None, :] + cm[None, :, :]
            if self.invariants:
                s %= np.asarray(self.invariants, dtype=np.int64)
            self._add_table = self.encode(s)
        return self._add_table

    def encode(self, coords_array: np.ndarray) -> np.ndarray:
        """Map an (..., k) coordinate array to mixed-radix indices."""
        if not self.invariants:
            return np.zeros(coords_array.shape[:-1], dtype=np.int64)
        return coords_array @ np.asarray(self.weights, dtype=np.int64)

    def add_vec(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        t = self.add_table
        if t is not None:
            return t[u, v]
        cm = self.coords_matrix
        s = cm[u] + cm[v]
        s %= np.asarray(self.invariants, dtype=np.int64)
        return self.encode(s)

    def neg_vec(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        cm = self.coords_matrix
        s = (-cm[u]) % np.asarray(self.invariants, dtype=np.int64) if self.invariants else cm[u]
        return self.encode(s)

    def sub_vec(self, u, v) -> np.ndarray:
        return self.add_vec(u, self.neg_vec(v))

    def element(self, index: int) -> "Element":
        return Element(self, int(index))

    @property
    def zero(self) -> "Element":
        return Element(self, 0)


def make_group(invariants) -> AbelianGroup:
    """Build the group with the given cyclic factor moduli (all >= 2)."""
    return AbelianGroup(invariants)


@dataclass(frozen=True)
class Element:
    """A group element carrying both residue coordinates and its index."""

    group: AbelianGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise ValueError(f"element index {self.index} out of range")

    @property
    def coords(self) -> tuple[int, ...]:
        return self.group.coords(self.index)

    def __add__(self, other: "Element") -> "Element":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return Element(self.group, self.group.add(self.index, other.index))

    def __neg__(self) -> "Element":
        return Element(self.group, self.group.neg(self.index))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __rmul__(self, c: int) -> "Element":
        return Element(self.group, self.group.scalar(c, self.index))

    @property
    def order(self) -> int:
        return self.group.element_order(self.index)


# ---------------------------------------------------------------------------
# homomorphisms


class GroupMap:
    """Additive homomorphism given by images of the canonical generators."""

    def __init__(self, domain: AbelianGroup, codomain: AbelianGroup, images):
        images = tuple(int(i) for i in images)
        if len(images) != len(domain.invariants):
            raise ValueError("one image per canonical generator required")
        for n, img in zip(domain.invariants, images):
            if not 0 <= img < codomain.order:
                raise ValueError(f"image index {img} out of range")
            if n % codomain.element_order(img) != 0:
                raise ValueError(
                    f"image of a generator of order {n} has order "
                    f"{codomain.element_order(img)}: map not well defined"
                )
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self._perm = None

    def __repr__(self):
        return f"GroupMap({self.domain!r} -> {self.codomain!r}, images={list(self.images)})"

    def __eq__(self, other):
        return (
            isinstance(other, GroupMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.images))

    def apply(self, i: int) -> int:
        out = 0
        for c, img in zip(self.domain.coords(i), self.images):
            out = self.codomain.add(out, self.codomain.scalar(c, img))
        return out

    def as_permutation(self) -> np.ndarray:
        """Value table over all domain indices (a permutation iff bijective)."""
        if self._perm is None:
            cm = self.domain.coords_matrix
            if self.images:
                img_coords = np.stack(
                    [np.asarray(self.codomain.coords(i), dtype=np.int64) for i in self.images]
                )
                vals = cm @ img_coords
                vals %= np.asarray(self.codomain.invariants, dtype=np.int64)
                self._perm = self.codomain.encode(vals)
            else:
                self._perm = np.zeros(self.domain.order, dtype=np.int64)
        return self._perm

    def apply_vec(self, idx) -> np.ndarray:
        return self.as_permutation()[np.asarray(idx, dtype=np.int64)]

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self after other."""
        if other.codomain != self.domain:
            raise ValueError("maps not composable")
        return GroupMap(other.domain, self.codomain, [self.apply(i) for i in other.images])

    def is_bijective(self) -> bool:
        if self.domain.order != self.codomain.order:
            return False
        perm = self.as_permutation()
        return bool(np.all(np.bincount(perm, minlength=self.domain.order) == 1))

    def inverse(self) -> "GroupMap":
        if not self.is_bijective():
            raise ValueError("map is not bijective")
        perm = self.as_permutation()
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.domain.order, dtype=np.int64)
        return GroupMap(self.codomain, self.domain, [int(inv[g]) for g in self.codomain.generators])


def identity_map(g: AbelianGroup) -> GroupMap:
    return GroupMap(g, g, g.generators)


# ---------------------------------------------------------------------------
# primary decomposition of the presentation


@dataclass(frozen=True)
class PrimaryPart:
    """A p-primary component with its inclusion and projection maps."""

    prime: int
    group: AbelianGroup
    inclusion: GroupMap   # component -> ambient
    projection: GroupMap  # ambient -> component


def primary_component(g: AbelianGroup, p: int) -> PrimaryPart:
    """Split off the subgroup of elements of p-power order (may be trivial).

    ``inclusion . projection`` is the idempotent projector onto the
    component; the projectors over all primes dividing the order are
    orthogonal and sum to the identity.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    part_inv = []
    positions = []  # (coordinate in g, p-power n_p, cofactor m)
    for i, n in enumerate(g.invariants):
        e = factorize(n).get(p, 0)
        if e:
            np_ = p**e
            part_inv.append(np_)
            positions.append((i, np_, n // np_))
    sub = AbelianGroup(part_inv)
    incl_images = []
    for i, np_, m in positions:
        # CRT unit: congruent to 1 mod p^e and to 0 mod the cofactor
        v = m * pow(m, -1, np_) % g.invariants[i]
        coords = [0] * len(g.invariants)
        coords[i] = v
        incl_images.append(g.index(coords))
    proj_images = []
    pos_of_coord = {i: j for j, (i, _, _) in enumerate(positions)}
    for i, n in enumerate(g.invariants):
        coords = [0] * len(part_inv)
        if i in pos_of_coord:
            j = pos_of_coord[i]
            coords[j] = 1 % positions[j][1]
        proj_images.append(sub.index(coords))
    return PrimaryPart(p, sub, GroupMap(sub, g, incl_images), GroupMap(g, sub, proj_images))


def primary_invariant_multiset(g: AbelianGroup) -> tuple[tuple[int, int], ...]:
    """Sorted multiset of (prime, exponent) factors; the isomorphism type."""
    out = []
    for n in g.invariants:
        for p, e in factorize(n).items():
            out.append((p, e))
    return tuple(sorted(out))


def groups_isomorphic(g: AbelianGroup, h: AbelianGroup) -> bool:
    return primary_invariant_multiset(g) == primary_invariant_multiset(h)


@dataclass(frozen=True)
class CanonicalDecomposition:
    group: AbelianGroup
    to_canon: GroupMap
    from_canon: GroupMap


def canonical_decomposition(g: AbelianGroup) -> CanonicalDecomposition:
    """CRT-split every coordinate into prime-power cyclics, sorted by
    (prime asc, exponent desc).  Both directions are explicit isomorphisms."""
    parts = []  # (p, e, source coordinate)
    for i, n in enumerate(g.invariants):
        for p, e in sorted(factorize(n).items()):
            parts.append((p, e, i))
    parts.sort(key=lambda t: (t[0], -t[1], t[2]))
    canon = AbelianGroup([p**e for p, e, _ in parts])
    to_images = []
    for i in range(len(g.invariants)):
        coords = [1 if src == i else 0 for _, _, src in parts]
        to_images.append(canon.index(coords))
    from_images = []
    for p, e, i in parts:
        n = g.invariants[i]
        pe = p**e
        m = n // pe
        v = m * pow(m, -1, pe) % n if m > 1 else 1 % n
        coords = [0] * len(g.invariants)
        coords[i] = v
        from_images.append(g.index(coords))
    return CanonicalDecomposition(
        canon, GroupMap(g, canon, to_images), GroupMap(canon, g, from_images)
    )


# ---------------------------------------------------------------------------
# subgroups


def subgroup_closure(g: AbelianGroup, gens) -> tuple[int, ...]:
    """Sorted index set of the subgroup generated by the given elements."""
    seen = {0}
    frontier = [0]
    gens = [int(x) for x in gens]
    while frontier:
        x = frontier.pop()
        for gen in gens:
            y = g.add(x, gen)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return tuple(sorted(seen))


def all_subgroups(g: AbelianGroup, guards: Guards = DEFAULT_GUARDS) -> list[tuple[int, ...]]:
    """Every subgroup, as a sorted index tuple.  Exhaustive; guarded."""
    if g.order > guards.subgroup_order_cap:
        raise GuardExceeded(f"subgroup lattice of order-{g.order} group")
    found = {(0,)}
    queue = [(0,)]
    while queue:
        s = queue.pop()
        inside = set(s)
        for x in range(1, g.order):
            if x in inside:
                continue
            t = subgroup_closure(g, list(s) + [x])
            if t not in found:
                found.add(t)
                queue.append(t)
    return sorted(found, key=lambda s: (len(s), s))


# ---------------------------------------------------------------------------
# automorphism / homomorphism enumeration


def aut_group_order(g: AbelianGroup) -> int:
    """|Aut(g)| by the classical formula, multiplied over primary parts.

    For a p-group Z_{p^{e_1}} + ... + Z_{p^{e_n}} with e_1 <= ... <= e_n,
    with d_k = max{l : e_l = e_k} and c_k = min{l : e_l = e_k}:

        |Aut| = prod_k (p^{d_k} - p^{k-1})
              * prod_j (p^{e_j})^{n - d_j}
              * prod_i (p^{e_i - 1})^{n - c_i + 1}
    """
    total = 1
    by_prime: dict[int, list[int]] = {}
    for n in g.invariants:
        for p, e in factorize(n).items():
            by_prime.setdefault(p, []).append(e)
    for p, exps in by_prime.items():
        exps.sort()
        n = len(exps)
        d = [max(l + 1 for l in range(n) if exps[l] == exps[k]) for k in range(n)]
        c = [min(l + 1 for l in range(n) if exps[l] == exps[k]) for k in range(n)]
        block = 1
        for k in range(n):
            block *= p ** d[k] - p**k
        for j in range(n):
            block *= (p ** exps[j]) ** (n - d[j])
        for i in range(n):
            block *= (p ** (exps[i] - 1)) ** (n - c[i] + 1)
        total *= block
    return total


def _elements_of_order_dividing(g: AbelianGroup, m: int) -> list[int]:
    return [i for i in range(g.order) if m % g.element_order(i) == 0]


def _block_automorphism_images(block: AbelianGroup):
    """All automorphism image tuples of a single-prime block, by backtracking.

    Images are chosen per generator among the elements of compatible order;
    a partial choice survives only if it is injective on the subgroup the
    first generators span (generated-size pruning).
    """
    k = len(block.invariants)
    if k == 0:
        yield ()
        return
    candidates = [_elements_of_order_dividing(block, n) for n in block.invariants]
    expected = []
    acc = 1
    for n in block.invariants:
        acc *= n
        expected.append(acc)

    def rec(i, chosen):
        if i == k:
            yield tuple(chosen)
            return
        for img in candidates[i]:
            chosen.append(img)
            if len(subgroup_closure(block, chosen)) == expected[i]:
                yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def enumerate_isomorphisms(g: AbelianGroup, h: AbelianGroup):
    """Yield every additive isomorphism g -> h, in a fixed canonical order.

    Works across presentations (e.g. (63,) vs (9, 7)) by routing through the
    canonical prime-power decomposition of both sides.
    """
    if primary_invariant_multiset(g) != primary_invariant_multiset(h):
        return
    cg = canonical_decomposition(g)
    ch = canonical_decomposition(h)
    canon = cg.group
    # prime blocks are contiguous in the canonical ordering
    blocks = []
    i = 0
    parts = [(p, e) for p, e in (sorted(factorize(n).items())[0] for n in canon.invariants)]
    while i < len(parts):
        j = i
        while j < len(parts) and parts[j][0] == parts[i][0]:
            j += 1
        blocks.append((i, j))
        i = j
    block_groups = [AbelianGroup(canon.invariants[a:b]) for a, b in blocks]
    block_choices = [list(_block_automorphism_images(bg)) for bg in block_groups]
    from_h = ch.from_canon
    for combo in iproduct(*block_choices):
        images = []
        for (a, b), bg, imgs in zip(blocks, block_groups, combo):
            for local in imgs:
                coords = [0] * len(canon.invariants)
                lc = bg.coords(local)
                for t in range(b - a):
                    coords[a + t] = lc[t]
                images.append(canon.index(coords))
        sigma = GroupMap(canon, canon, images)
        yield from_h.compose(sigma).compose(cg.to_canon)


def enumerate_automorphisms(g: AbelianGroup, guards: Guards = DEFAULT_GUARDS) -> list[GroupMap]:
    """Complete, duplicate-free list of additive automorphisms of g."""
    size = aut_group_order(g)
    if size > guards.aut_cap:
        raise GuardExceeded(f"|Aut| = {size} exceeds cap {guards.aut_cap}")
    return list(enumerate_isomorphisms(g, g))


def hom_group_order(g: AbelianGroup, h: AbelianGroup) -> int:
    total = 1
    for n in g.invariants:
        total *= len(_elements_of_order_dividing(h, n))
    return total


def enumerate_homomorphisms(
    g: AbelianGroup, h: AbelianGroup, guards: Guards = DEFAULT_GUARDS
) -> list[GroupMap]:
    """All additive homomorphisms g -> h, each exactly once."""
    size = hom_group_order(g, h)
    if size > guards.hom_cap:
        raise GuardExceeded(f"|Hom| = {size} exceeds cap {guards.hom_cap}")
    candidate_lists = [_elements_of_order_dividing(h, n) for n in g.invariants]
    return [GroupMap(g, h, images) for images in iproduct(*candidate_lists)]


# ---------------------------------------------------------------------------
# abelian groups of a given order


def _partitions(n: int):
    """Partitions of n in descending-lex order, each partition descending."""
    if n == 0:
        yield ()
        return

    def rec(remaining, maxpart):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, maxpart), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(n, n)


def abelian_groups_of_order(n: int) -> list[AbelianGroup]:
    """One group per isomorphism class, invariants as prime powers with
    primes ascending and exponents descending within each prime."""
    if n < 1:
        raise ValueError("order must be positive")
    per_prime = []
    for p, e in sorted(factorize(n).items()):
        per_prime.append([[p**part for part in parts] for parts in _partitions(e)])
    out = []
    for combo in iproduct(*per_prime):
        inv = [m for block in combo for m in block]
        out.append(AbelianGroup(inv))
    return out
