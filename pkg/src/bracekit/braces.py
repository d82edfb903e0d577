"""Left braces on finite abelian groups.

A left brace is an abelian group (A, +) with a multiplication satisfying

    (B1)  a(b + c) = ab + ac
    (B2)  (ab + a + b)c = a(bc) + ac + bc
    (B3)  x -> ax + x is bijective for each a

so that a.b = a + b + a*b (the "circle" operation) is a group law on A.
The zero laws a*0 = 0*a = 0 are consequences and are verified, never
assumed.  The bijection lam_a(x) = a*x + x is additive; a -> lam_a is a
homomorphism from the circle group into Aut(A, +), and its kernel is the
socle {a : a*x = 0 for all x}.

A ``Brace`` stores its multiplication either as a dense n x n index table
or as a closed-form row rule tagged with family parameters.  Verification
paths materialize the table (one code path), behind resource guards; the
inspection helpers (rows, lambda permutations, circle arithmetic) work off
single rows so that large closed-form braces never need a full table.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded
from .groups import (
    AbelianGroup,
    GroupMap,
    PrimaryPart,
    factorize,
    primary_component,
)


class Brace:
    """An abelian group plus a brace multiplication on element indices."""

    def __init__(self, group: AbelianGroup, table=None, row_fn=None, rule_spec=None, name=None):
        if (table is None) == (row_fn is None):
            raise ValueError("exactly one of table / row_fn must be given")
        self.group = group
        self.name = name
        self.rule_spec = tuple(rule_spec) if rule_spec is not None else None
        self.meta: dict = {}
        self._row_fn = row_fn
        self._row_cache: dict[int, np.ndarray] = {}
        if table is not None:
            table = np.asarray(table, dtype=np.int64)
            n = group.order
            if table.shape != (n, n):
                raise ValueError(f"table shape {table.shape} != ({n}, {n})")
            if n and (table.min() < 0 or table.max() >= n):
                raise ValueError("table entry out of range")
        self._table = table

    @staticmethod
    def from_table(group, table, name=None, rule_spec=None) -> "Brace":
        return Brace(group, table=table, name=name, rule_spec=rule_spec)

    @staticmethod
    def from_rule(group, row_fn, rule_spec=None, name=None) -> "Brace":
        return Brace(group, row_fn=row_fn, rule_spec=rule_spec, name=name)

    def __repr__(self):
        tag = self.name or ("table" if self._table is not None else "rule")
        return f"Brace(order={self.order}, {tag})"

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def is_table_backed(self) -> bool:
        return self._table is not None

    def with_name(self, name: str) -> "Brace":
        self.name = name
        return self

    # -- multiplication access --------------------------------------------

    _ROW_CACHE_LIMIT = 512

    def row(self, a: int) -> np.ndarray:
        """The vector (a*b for all b), as element indices."""
        if self._table is not None:
            return self._table[a]
        cached = self._row_cache.get(a)
        if cached is None:
            cached = np.asarray(self._row_fn(a), dtype=np.int64)
            if len(self._row_cache) >= self._ROW_CACHE_LIMIT:
                self._row_cache.clear()
            self._row_cache[a] = cached
        return cached

    def mul(self, a: int, b: int) -> int:
        return int(self.row(a)[b])

    def table(self, guards: Guards = DEFAULT_GUARDS) -> np.ndarray:
        """Materialize (and cache) the dense multiplication table."""
        if self._table is None:
            if self.order > guards.rule_order_cap:
                raise GuardExceeded(
                    f"materializing an order-{self.order} closed-form brace"
                )
            self._table = np.stack([self.row(a) for a in range(self.order)])
            self._row_cache.clear()
        return self._table

    # -- derived structure --------------------------------------------------

    def lambda_row(self, a: int) -> np.ndarray:
        """The adjoint permutation lam_a : x -> a*x + x."""
        n = self.order
        return self.group.add_vec(self.row(a), np.arange(n, dtype=np.int64))

    def lambda_table(self) -> np.ndarray:
        return np.stack([self.lambda_row(a) for a in range(self.order)])

    def circle(self, a: int, b: int) -> int:
        return self.group.add(self.group.add(a, b), self.mul(a, b))

    def circle_row(self, a: int) -> np.ndarray:
        """The vector (a.b for all b)."""
        n = self.order
        return self.group.add_vec(np.full(n, a, dtype=np.int64), self.lambda_row(a))

    def circle_inverse(self, a: int) -> int:
        """The unique z with a.z = z.a = 0."""
        hits = np.flatnonzero(self.circle_row(a) == 0)
        if hits.size != 1:
            raise ValueError("circle operation is not a group law at this element")
        return int(hits[0])

    def circle_order(self, a: int) -> int:
        k = 1
        x = a
        while x != 0:
            x = self.circle(a, x)
            k += 1
            if k > self.order:
                raise ValueError("circle operation is not a group law")
        return k

    def circle_order_vector(self) -> np.ndarray:
        """Circle-group orders of all elements at once (iterated action)."""
        n = self.order
        lam = np.stack([self.lambda_row(a) for a in range(n)])
        idx = np.arange(n, dtype=np.int64)
        cur = idx.copy()  # a^(.1)
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        k = 1
        while (orders == 0).any():
            done = (cur == 0) & (orders == 0)
            orders[done] = k
            k += 1
            if k > n + 1:
                raise ValueError("circle operation is not a group law")
            cur = self.group.add_vec(idx, lam[idx, cur])
        return orders

    def socle_elements(self) -> tuple[int, ...]:
        out = [a for a in range(self.order) if not self.row(a).any()]
        return tuple(out)

    def same_multiplication(self, other: "Brace", guards: Guards = DEFAULT_GUARDS) -> bool:
        if self.group != other.group:
            return False
        return all(
            np.array_equal(self.row(a), other.row(a)) for a in range(self.order)
        )


def trivial_brace(g: AbelianGroup) -> Brace:
    """The brace with a*b = 0 everywhere; circle coincides with addition."""
    n = g.order
    zero = np.zeros(n, dtype=np.int64)
    return Brace.from_rule(g, lambda a: zero, rule_spec=("trivial",))


# ---------------------------------------------------------------------------
# axiom verification


@dataclass(frozen=True)
class AxiomReport:
    b1: bool
    b2: bool
    b3: bool
    zero_laws: bool
    counterexamples: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.b1 and self.b2 and self.b3 and self.zero_laws


def check_axioms(brace: Brace, guards: Guards = DEFAULT_GUARDS) -> AxiomReport:
    """Exhaustively check B1, B2, B3 and the zero laws on all tuples.

    The first counterexample per axiom is reported in scan order.
    """
    n = brace.order
    cap = guards.axiom_order_cap if brace.is_table_backed else guards.rule_order_cap
    if n > cap:
        raise GuardExceeded(f"axiom check on order-{n} brace (cap {cap})")
    t = brace.table(guards)
    g = brace.group
    idx = np.arange(n, dtype=np.int64)
    ce: dict = {}

    zero_ok = True
    if n:
        if t[0].any():
            b = int(np.flatnonzero(t[0])[0])
            ce["zero"] = (0, b)
            zero_ok = False
        elif t[:, 0].any():
            a = int(np.flatnonzero(t[:, 0])[0])
            ce["zero"] = (a, 0)
            zero_ok = False

    b1_ok = True
    for a in range(n):
        # a*(b+c) vs a*b + a*c, as n x n blocks over (b, c)
        lhs = t[a][g.add_vec(idx[:, None], idx[None, :])]
        rhs = g.add_vec(t[a][:, None], t[a][None, :])
        if not np.array_equal(lhs, rhs):
            b, c = map(int, np.argwhere(lhs != rhs)[0])
            ce["b1"] = (a, b, c)
            b1_ok = False
            break

    b2_ok = True
    for a in range(n):
        ta = t[a]
        a_then = ta[t]                      # [b, c] = a*(b*c)
        rhs = g.add_vec(g.add_vec(a_then, ta[None, :]), t)
        s = g.add_vec(g.add_vec(ta, a), idx)     # (a*b + a + b) over b
        lhs = t[s]
        if not np.array_equal(lhs, rhs):
            b, c = map(int, np.argwhere(lhs != rhs)[0])
            ce["b2"] = (a, b, c)
            b2_ok = False
            break

    b3_ok = True
    for a in range(n):
        lam = g.add_vec(t[a], idx)
        counts = np.bincount(lam, minlength=n)
        if (counts != 1).any():
            dup = int(np.flatnonzero(counts > 1)[0])
            pair = np.flatnonzero(lam == dup)[:2]
            ce["b3"] = (a, int(pair[0]), int(pair[1]))
            b3_ok = False
            break

    return AxiomReport(b1_ok, b2_ok, b3_ok, zero_ok, ce)


def verify_cocycle(brace: Brace, guards: Guards = DEFAULT_GUARDS) -> bool:
    """Check that the adjoint maps form an action of the circle group.

    Verifies lam_0 = id, every lam_a bijective, and lam_{a.b} = lam_a lam_b
    on all pairs; together these make the identity map a bijective
    1-cocycle for a -> lam_a.  A corrupted multiplication table generically
    fails this even where the pointwise axioms survive.
    """
    n = brace.order
    cap = guards.axiom_order_cap if brace.is_table_backed else guards.rule_order_cap
    if n > cap:
        raise GuardExceeded(f"cocycle check on order-{n} brace (cap {cap})")
    lam = brace.lambda_table()
    idx = np.arange(n, dtype=np.int64)
    if not np.array_equal(lam[0], idx):
        return False
    for a in range(n):
        if not np.array_equal(np.sort(lam[a]), idx):
            return False
    for a in range(n):
        circ = brace.circle_row(a)
        if not np.array_equal(lam[circ], lam[a][lam]):
            return False
    return True


# ---------------------------------------------------------------------------
# ideals and the socle


@dataclass(frozen=True)
class SubgroupWitness:
    """An additively closed element-index set inside a brace."""

    parent: Brace
    elements: tuple[int, ...]

    def __post_init__(self):
        g = self.parent.group
        elems = tuple(sorted(set(int(x) for x in self.elements)))
        object.__setattr__(self, "elements", elems)
        if 0 not in elems:
            raise ValueError("subgroup must contain 0")
        inside = set(elems)
        for x in elems:
            if g.neg(x) not in inside:
                raise ValueError("element set not closed under negation")
            for y in elems:
                if g.add(x, y) not in inside:
                    raise ValueError("element set not closed under addition")


@dataclass(frozen=True)
class IdealReport:
    left_ideal: bool
    right_ideal: bool
    ideal: bool
    trivial_ideal: bool
    normal_in_adjoint: bool


def socle(brace: Brace) -> SubgroupWitness:
    """Soc(A) = {a : a*x = 0 for all x}, the kernel of the adjoint action."""
    return SubgroupWitness(brace, brace.socle_elements())


def ideal_predicates(brace: Brace, witness: SubgroupWitness) -> IdealReport:
    """Left/right/two-sided ideal tests, plus the two formulations of
    triviality: contained in the socle, and normal in the circle group."""
    if witness.parent is not brace and witness.parent.group != brace.group:
        raise ValueError("witness belongs to a different brace")
    s = witness.elements
    inside = np.zeros(brace.order, dtype=bool)
    inside[list(s)] = True
    left = all(inside[brace.row(a)[list(s)]].all() for a in range(brace.order))
    right = all(inside[brace.row(x)].all() for x in s)
    soc = set(brace.socle_elements())
    in_socle = all(x in soc for x in s)
    normal = True
    for a in range(brace.order):
        ainv = brace.circle_inverse(a)
        for x in s:
            if not inside[brace.circle(brace.circle(a, x), ainv)]:
                normal = False
                break
        if not normal:
            break
    ideal = left and right
    return IdealReport(left, right, ideal, ideal and in_socle, normal)


# ---------------------------------------------------------------------------
# primary decomposition and semidirect structure


@dataclass(frozen=True)
class PrimaryBraceComponent:
    prime: int
    brace: Brace
    part: PrimaryPart
    is_right_ideal: bool


def primary_decomposition(brace: Brace) -> list[PrimaryBraceComponent]:
    """Split the brace along the p-primary parts of its additive group.

    Each component is closed under the restricted multiplication and is a
    left ideal; it need not be a right ideal, which is reported as a flag
    rather than treated as an error.
    """
    g = brace.group
    out = []
    for p in sorted(factorize(g.order)):
        part = primary_component(g, p)
        incl = part.inclusion.as_permutation()
        proj = part.projection.as_permutation()
        m = part.group.order
        sub_table = np.empty((m, m), dtype=np.int64)
        mask = np.zeros(g.order, dtype=bool)
        mask[incl] = True
        right = True
        for i in range(m):
            row = brace.row(int(incl[i]))
            if right and not mask[row].all():
                right = False
            picked = row[incl]
            if not mask[picked].all():
                raise ValueError("primary part is not closed under multiplication")
            sub_table[i] = proj[picked]
        name = f"{brace.name}|{p}" if brace.name else None
        out.append(
            PrimaryBraceComponent(p, Brace.from_table(part.group, sub_table, name=name), part, right)
        )
    return out


def check_p2q_shape(order: int, p: int, q: int, relaxed: bool = False) -> None:
    """Validate the order and the coprimality condition on (p, q)."""
    from .groups import is_prime

    if not (is_prime(p) and is_prime(q)):
        raise ValueError(f"p={p}, q={q} must be prime")
    if order != p * p * q:
        raise ValueError(f"order {order} != {p}^2 * {q}")
    if relaxed:
        if p == q or (p - 1) % q == 0 or p % q == 0 or (p + 1) % q == 0:
            raise ValueError(f"q={q} divides one of p-1, p, p+1")
    elif q <= p + 1:
        raise ValueError(f"q={q} must exceed p+1={p + 1}")


def semidirect_decompose(brace: Brace, p: int, q: int, relaxed: bool = False):
    """Split an order p^2*q brace into its p-component brace and the
    induced module action on the q-component.

    The q-component must be a trivial ideal (guaranteed under the stated
    conditions on p and q; violation signals a corrupted brace).  Feeding
    the result to ``constructions.semidirect_product`` reconstructs the
    original multiplication.
    """
    from .constructions import ModuleAction

    check_p2q_shape(brace.order, p, q, relaxed)
    comps = {c.prime: c for c in primary_decomposition(brace)}
    cp, cq = comps[p], comps[q]
    qw = SubgroupWitness(brace, tuple(int(x) for x in cq.part.inclusion.as_permutation()))
    rep = ideal_predicates(brace, qw)
    if not rep.trivial_ideal:
        raise ValueError("q-component is not a trivial ideal; brace is corrupted")
    carrier = cq.part.group
    incl_p = cp.part.inclusion.as_permutation()
    incl_q = cq.part.inclusion.as_permutation()
    proj_q = cq.part.projection.as_permutation()
    psi = []
    for a in range(cp.brace.order):
        amb = int(incl_p[a])
        images = [
            int(proj_q[brace.group.add(brace.mul(amb, int(incl_q[c])), int(incl_q[c]))])
            for c in carrier.generators
        ]
        psi.append(GroupMap(carrier, carrier, images))
    return cp.brace, ModuleAction(cp.brace, carrier, tuple(psi))


# ---------------------------------------------------------------------------
# twisting


def twist(brace: Brace, phi: GroupMap, guards: Guards = DEFAULT_GUARDS) -> Brace:
    """The brace with multiplication a *_phi b = phi^{-1}(phi(a) * phi(b)).

    phi must be an additive automorphism; twisting is a right action of
    Aut(A, +) on the brace structures carried by A.
    """
    if phi.domain != brace.group or phi.codomain != brace.group:
        raise ValueError("phi must be an endomorphism of the additive group")
    if not phi.is_bijective():
        raise ValueError("phi is not bijective")
    perm = phi.as_permutation()
    inv = np.empty_like(perm)
    inv[perm] = np.arange(brace.order, dtype=np.int64)

    if brace.is_table_backed:
        t = brace.table(guards)
        return Brace.from_table(brace.group, inv[t[perm][:, perm]])

    def row_fn(a, _b=brace, _perm=perm, _inv=inv):
        return _inv[_b.row(int(_perm[a]))[_perm]]

    return Brace.from_rule(brace.group, row_fn)
