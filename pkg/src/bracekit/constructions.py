"""Named brace constructions and the order p^2*q classification.

The four braces of order p^2 (two trivial ones and two with one-line
multiplication rules) act on Z_q through homomorphisms from their circle
groups into Z_q^x.  Each such action yields a semidirect-product brace on
A_p (+) Z_q, and for q > p+1 every brace of order p^2*q arises this way,
exactly once per orbit of Hom(A_p circle, Z_q^x) under the brace
automorphisms of A_p.

``classify`` emits the fine representative list for the applicable
congruence class of q mod p^2 and cross-checks its per-family sizes
against the machine-computed orbits, so neither the hand-derived list nor
the orbit search is trusted alone.  All parameters are residues in Z_q^x;
the canonical root of unity of order d is g^((q-1)/d) for the smallest
primitive root g mod q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .braces import Brace, trivial_brace
from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded
from .groups import AbelianGroup, GroupMap, is_prime, make_group
from .morphisms import automorphism_group, circle_generating_set


def binomial_c2(x: int) -> int:
    """C(x, 2) = x(x-1)/2; satisfies C(x+y,2) = C(x,2) + C(y,2) + xy."""
    if x < 0:
        raise ValueError("x must be non-negative")
    return x * (x - 1) // 2


# ---------------------------------------------------------------------------
# the braces of order p^2

P2_KINDS = ("Tpp", "Tp2", "Bpp", "Bp2")


def p_squared_brace(p: int, kind: str) -> Brace:
    """One of the four braces of order p^2, by kind:

    Tpp  trivial on Z_p x Z_p            Tp2  trivial on Z_{p^2}
    Bpp  (x1,y1)*(x2,y2) = (y1*y2, 0)    Bp2  x1*x2 = p*x1*x2
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if kind == "Tpp":
        return trivial_brace(make_group([p, p])).with_name(f"T^{{{p},{p}}}")
    if kind == "Tp2":
        return trivial_brace(make_group([p * p])).with_name(f"T^{{{p * p}}}")
    if kind == "Bpp":
        g = make_group([p, p])
        n = g.order
        t = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            _, y1 = g.coords(a)
            for b in range(n):
                _, y2 = g.coords(b)
                t[a, b] = g.index((y1 * y2 % p, 0))
        return Brace.from_table(g, t, name=f"B^{{{p},{p}}}", rule_spec=("Bpp", p))
    if kind == "Bp2":
        g = make_group([p * p])
        n = g.order
        t = np.fromfunction(lambda a, b: (p * a * b) % n, (n, n), dtype=np.int64)
        return Brace.from_table(g, t, name=f"B^{{{p * p}}}", rule_spec=("Bp2", p))
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# module actions and semidirect products


@dataclass(frozen=True)
class ModuleAction:
    """An action of a brace on an abelian group through its circle group.

    ``psi[a]`` is an automorphism of the carrier for each actor element,
    with psi a homomorphism from the circle group; the induced operation
    dot(a, x) = psi(a)(x) - x satisfies

        (M1)  0.x = 0
        (M2)  a.(x + y) = a.x + a.y
        (M3)  (a + b + a*b).x = a.x + b.x + a.(b.x)
    """

    actor: Brace
    carrier: AbelianGroup
    psi: tuple[GroupMap, ...]

    def dot(self, a: int, x: int) -> int:
        return self.carrier.sub(self.psi[a].apply(x), x)

    def dot_row(self, a: int) -> np.ndarray:
        m = self.carrier.order
        return self.carrier.sub_vec(
            self.psi[a].as_permutation(), np.arange(m, dtype=np.int64)
        )


_ACTION_EXHAUSTIVE_CAP = 2_000_000


def verify_module_action(act: ModuleAction) -> None:
    """Check the circle-homomorphism property and M1-M3; raise on failure."""
    a_brace, c = act.actor, act.carrier
    n, m = a_brace.order, c.order
    if len(act.psi) != n:
        raise ValueError("one carrier automorphism per actor element required")
    ident = tuple(c.generators)
    if act.psi[0].images != ident:
        raise ValueError("psi(0) is not the identity")
    for f in act.psi:
        if f.domain != c or f.codomain != c or not f.is_bijective():
            raise ValueError("psi value is not a carrier automorphism")
    for a in range(n):
        for b in range(n):
            composed = tuple(act.psi[a].apply(i) for i in act.psi[b].images)
            if act.psi[a_brace.circle(a, b)].images != composed:
                raise ValueError(f"psi is not a circle homomorphism at ({a}, {b})")
    if n * m * m <= _ACTION_EXHAUSTIVE_CAP:
        idx = np.arange(m, dtype=np.int64)
        pairs = c.add_vec(idx[:, None], idx[None, :])
        for a in range(n):
            row = act.dot_row(a)
            if not np.array_equal(row[pairs], c.add_vec(row[:, None], row[None, :])):
                raise ValueError(f"M2 fails for actor element {a}")
    if n * n * m <= _ACTION_EXHAUSTIVE_CAP:
        rows = [act.dot_row(a) for a in range(n)]
        for a in range(n):
            for b in range(n):
                s = a_brace.circle(a, b)
                rhs = c.add_vec(c.add_vec(rows[a], rows[b]), rows[a][rows[b]])
                if not np.array_equal(rows[s], rhs):
                    raise ValueError(f"M3 fails at ({a}, {b})")
    if any(act.dot(0, x) != 0 for x in range(m)):
        raise ValueError("M1 fails")


def module_from_hom(actor: Brace, carrier: AbelianGroup, psi) -> ModuleAction:
    """Build and verify the action given psi : actor element -> Aut(carrier)."""
    if callable(psi):
        psi = tuple(psi(a) for a in range(actor.order))
    act = ModuleAction(actor, carrier, tuple(psi))
    verify_module_action(act)
    return act


def semidirect_product(actor: Brace, act: ModuleAction) -> Brace:
    """Brace on actor (+) carrier with (a1,c1)*(a2,c2) = (a1*a2, a1.c2)."""
    if act.actor is not actor and act.actor.group != actor.group:
        raise ValueError("action actor does not match")
    g = make_group(actor.group.invariants + act.carrier.invariants)
    m = act.carrier.order

    def row_fn(idx, _actor=actor, _act=act, _m=m):
        a1 = idx // _m
        row_a = _actor.row(a1)
        dot = _act.dot_row(a1)
        return (row_a[:, None] * _m + dot[None, :]).ravel()

    return Brace.from_rule(g, row_fn)


# ---------------------------------------------------------------------------
# explicit isomorphisms between circle groups and abelian groups


@dataclass(frozen=True)
class AdjointIsomorphism:
    """A bijection from a brace onto an abelian group turning circle into +.

    These maps are not additive for +, so they are stored as explicit
    value tables rather than generator images.
    """

    source: Brace
    target: AbelianGroup
    values: np.ndarray

    def apply(self, i: int) -> int:
        return int(self.values[i])

    def inverse_values(self) -> np.ndarray:
        inv = np.empty_like(self.values)
        inv[self.values] = np.arange(self.source.order, dtype=np.int64)
        return inv

    def verify(self) -> bool:
        """Bijective, and f(a . b) = f(a) + f(b) on all pairs."""
        n = self.source.order
        if not np.array_equal(np.sort(self.values), np.arange(n, dtype=np.int64)):
            return False
        for a in range(n):
            lhs = self.values[self.source.circle_row(a)]
            rhs = self.target.add_vec(
                np.full(n, self.values[a], dtype=np.int64), self.values
            )
            if not np.array_equal(lhs, rhs):
                return False
        return True


def explicit_adjoint_iso(p: int, kind: str) -> AdjointIsomorphism:
    """The closed-form circle-group isomorphisms for the order-p^2 braces.

    gamma : Bp2 -> Z_{p^2},    x      -> x - p*C(x,2)        (p odd)
    delta : Bpp -> Z_p x Z_p,  (x, y) -> (x - C(y,2), y)     (p odd)
    alpha : Bpp -> Z_4 (p=2),  (x, y) -> the binary string xy
    beta  : Bp2 -> Z_2 x Z_2 (p=2), binary string xy -> (x, y)
    """
    if kind == "gamma":
        if p == 2:
            raise ValueError("gamma is not well defined for p = 2")
        src = p_squared_brace(p, "Bp2")
        tgt = make_group([p * p])
        vals = [(x - p * binomial_c2(x)) % (p * p) for x in range(p * p)]
    elif kind == "delta":
        if p == 2:
            raise ValueError("delta is not well defined for p = 2")
        src = p_squared_brace(p, "Bpp")
        tgt = make_group([p, p])
        vals = [
            tgt.index(((x - binomial_c2(y)) % p, y))
            for x, y in (src.group.coords(i) for i in range(p * p))
        ]
    elif kind == "alpha":
        if p != 2:
            raise ValueError("alpha is specific to p = 2")
        src = p_squared_brace(2, "Bpp")
        tgt = make_group([4])
        vals = [2 * x + y for x, y in (src.group.coords(i) for i in range(4))]
    elif kind == "beta":
        if p != 2:
            raise ValueError("beta is specific to p = 2")
        src = p_squared_brace(2, "Bp2")
        tgt = make_group([2, 2])
        vals = [tgt.index((u // 2, u % 2)) for u in range(4)]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return AdjointIsomorphism(src, tgt, np.asarray(vals, dtype=np.int64))


# ---------------------------------------------------------------------------
# arithmetic in Z_q^x


def smallest_primitive_root(q: int) -> int:
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 2:
        return 1
    from .groups import factorize

    phi = q - 1
    prime_factors = list(factorize(phi))
    for g in range(2, q):
        if all(pow(g, phi // ell, q) != 1 for ell in prime_factors):
            return g
    raise RuntimeError("unreachable: every prime has a primitive root")


def unit_roots(q: int, k: int) -> tuple[int, tuple[int, ...]]:
    """Canonical root of unity of order gcd(k, q-1) in Z_q^x, plus all
    elements of order dividing k. Returns omega = 1 when gcd is 1."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    d = math.gcd(k, q - 1)
    g = smallest_primitive_root(q)
    omega = pow(g, (q - 1) // d, q)
    elements = tuple(sorted(x for x in range(1, q) if pow(x, d, q) == 1))
    return omega, elements


def quadratic_nonresidue(p: int) -> int:
    """Smallest non-residue in Z_p^x (p an odd prime)."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"{p} must be an odd prime")
    for eta in range(2, p):
        if pow(eta, (p - 1) // 2, p) == p - 1:
            return eta
    raise RuntimeError("unreachable: non-residues exist for odd p")


# ---------------------------------------------------------------------------
# the coarse families


FAMILIES_ODD = ("Tppq", "Tp2q", "Bppq", "Bp2q")
FAMILIES_TWO = ("Tppq", "Tp2q", "B22q", "B4q")


def _scalar_maps(zq: AbelianGroup, units) -> tuple[GroupMap, ...]:
    return tuple(GroupMap(zq, zq, (u % zq.order,)) for u in units)


def _check_root(q: int, value: int, k: int, label: str) -> None:
    if not 1 <= value < q:
        raise ValueError(f"{label} = {value} is not a unit mod {q}")
    if pow(value, k, q) != 1:
        raise ValueError(f"{label} = {value} is not a {k}-th root of unity mod {q}")


@dataclass(frozen=True)
class ClassificationEntry:
    """A named family member with its parameters and constructed brace."""

    family: str
    p: int
    q: int
    params: tuple[int, ...]
    brace: Brace
    label: str


def coarse_family(p: int, q: int, family: str, params) -> ClassificationEntry:
    """Construct one member of the coarse classification.

    Families for odd p (omega, mu as residues mod q):

      Tppq[w,m]  exponents  w^x1 * m^y1            on Z_p^2 (+) Z_q
      Tp2q[w]    exponent   w^x1                   on Z_{p^2} (+) Z_q
      Bppq[w,m]  exponents  w^(x1 - C(y1,2)) m^y1  on Z_p^2 (+) Z_q
      Bp2q[w]    exponent   w^(x1 - p*C(x1,2))     on Z_{p^2} (+) Z_q

    and for p = 2 (Tppq, Tp2q as above with fourth roots where allowed):

      B22q[w]    exponent   w^(2*x1 + y1)          on Z_2^2 (+) Z_4-action
      B4q[w,m]   exponents  w^(u1 div 2) m^(u1 mod 2), u1 in Z_4

    In every case the action depends only on the left factor, and the
    exponent map is the composition of a power map with the explicit
    circle-group isomorphism of the p-part.
    """
    params = tuple(int(v) for v in params)
    zq = make_group([q])
    if family == "Tppq":
        omega, mu = params
        _check_root(q, omega, p, "omega")
        _check_root(q, mu, p, "mu")
        actor = p_squared_brace(p, "Tpp")
        units = [
            pow(omega, x, q) * pow(mu, y, q) % q
            for x, y in (actor.group.coords(i) for i in range(actor.order))
        ]
        label = f"T^{{{p},{p},{q}}}_{{{omega},{mu}}}"
    elif family == "Tp2q":
        (omega,) = params
        _check_root(q, omega, p * p, "omega")
        actor = p_squared_brace(p, "Tp2")
        units = [pow(omega, x, q) for x in range(actor.order)]
        label = f"T^{{{p * p},{q}}}_{{{omega}}}"
    elif family == "Bppq":
        if p == 2:
            raise ValueError("Bppq requires odd p")
        omega, mu = params
        _check_root(q, omega, p, "omega")
        _check_root(q, mu, p, "mu")
        actor = p_squared_brace(p, "Bpp")
        units = [
            pow(omega, (x - binomial_c2(y)) % p, q) * pow(mu, y, q) % q
            for x, y in (actor.group.coords(i) for i in range(actor.order))
        ]
        label = f"B^{{{p},{p},{q}}}_{{{omega},{mu}}}"
    elif family == "Bp2q":
        if p == 2:
            raise ValueError("Bp2q requires odd p")
        (omega,) = params
        _check_root(q, omega, p * p, "omega")
        actor = p_squared_brace(p, "Bp2")
        units = [pow(omega, (x - p * binomial_c2(x)) % (p * p), q) for x in range(actor.order)]
        label = f"B^{{{p * p},{q}}}_{{{omega}}}"
    elif family == "B22q":
        if p != 2:
            raise ValueError("B22q requires p = 2")
        (omega,) = params
        _check_root(q, omega, 4, "omega")
        actor = p_squared_brace(2, "Bpp")
        units = [
            pow(omega, 2 * x + y, q)
            for x, y in (actor.group.coords(i) for i in range(actor.order))
        ]
        label = f"B^{{2,2,{q}}}_{{{omega}}}"
    elif family == "B4q":
        if p != 2:
            raise ValueError("B4q requires p = 2")
        omega, mu = params
        _check_root(q, omega, 2, "omega")
        _check_root(q, mu, 2, "mu")
        actor = p_squared_brace(2, "Bp2")
        units = [pow(omega, u // 2, q) * pow(mu, u % 2, q) % q for u in range(4)]
        label = f"B^{{4,{q}}}_{{{omega},{mu}}}"
    else:
        raise ValueError(f"unknown family {family!r}")
    act = module_from_hom(actor, zq, _scalar_maps(zq, units))
    brace = semidirect_product(actor, act)
    brace.rule_spec = (family, p, q, *params)
    brace.with_name(label)
    return ClassificationEntry(family, p, q, params, brace, label)


# ---------------------------------------------------------------------------
# orbits of Hom(A_p circle, Z_q^x) under brace automorphisms


def circle_homs_to_units(actor: Brace, q: int) -> list[tuple[int, ...]]:
    """All homomorphisms from the circle group of ``actor`` into Z_q^x.

    Values land in the subgroup of order gcd(|actor|, q-1); each hom is
    returned as its full value tuple over actor elements, sorted.
    """
    n = actor.order
    d = math.gcd(n, q - 1)
    _, roots = unit_roots(q, d)
    gens = circle_generating_set(actor)
    circ_rows = [actor.circle_row(g) for g in gens]
    homs = []
    for images in iproduct(roots, repeat=len(gens)):
        vals = [0] * n
        vals[0] = 1
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for r, img in zip(circ_rows, images):
                y = int(r[x])
                v = img * vals[x] % q
                if vals[y] == 0:
                    vals[y] = v
                    frontier.append(y)
        ok = all(
            vals[actor.circle(a, b)] == vals[a] * vals[b] % q
            for a in range(n)
            for b in range(n)
        )
        if ok:
            homs.append(tuple(vals))
    return sorted(set(homs))


def orbit_classification(
    actor: Brace, q: int, guards: Guards = DEFAULT_GUARDS
) -> list[tuple[int, ...]]:
    """Orbit representatives of Hom(circle group, Z_q^x) under precomposition
    with the brace automorphism group; canonical order, lex-minimal reps."""
    homs = circle_homs_to_units(actor, q)
    aut_perms = [bm.as_permutation() for bm in automorphism_group(actor, guards)]
    seen: set[tuple[int, ...]] = set()
    reps = []
    for f in homs:
        if f in seen:
            continue
        arr = np.asarray(f, dtype=np.int64)
        orbit = {tuple(int(v) for v in arr[perm]) for perm in aut_perms}
        if not orbit <= set(homs):
            raise RuntimeError("orbit left the homomorphism set; search is inconsistent")
        seen |= orbit
        reps.append(min(orbit))
    return reps


def semidirect_from_hom(actor: Brace, q: int, hom_values) -> Brace:
    """The semidirect-product brace for one explicit hom into Z_q^x."""
    zq = make_group([q])
    act = module_from_hom(actor, zq, _scalar_maps(zq, hom_values))
    return semidirect_product(actor, act)


# ---------------------------------------------------------------------------
# counting and the fine classification


def count_formula(p: int, q: int, relaxed: bool = False) -> int:
    """Number of isomorphism classes of braces of order p^2*q."""
    _validate_pq(p, q, relaxed)
    if p == 2:
        return 11 if (q - 1) % 4 == 0 else 9
    if (q - 1) % p != 0:
        return 4
    if (q - 1) % (p * p) != 0:
        return p + 8
    return 2 * p + 8


def _validate_pq(p: int, q: int, relaxed: bool) -> None:
    if not (is_prime(p) and is_prime(q)):
        raise ValueError(f"p={p} and q={q} must be prime")
    if relaxed:
        if (p - 1) % q == 0 or p % q == 0 or (p + 1) % q == 0:
            raise ValueError(f"q={q} divides one of p-1, p, p+1")
    elif q <= p + 1:
        raise ValueError(f"q={q} must exceed p+1={p + 1}")


def classify(
    p: int, q: int, relaxed: bool = False, guards: Guards = DEFAULT_GUARDS
) -> list[ClassificationEntry]:
    """The fine classification of braces of order p^2*q, one entry per
    isomorphism class, in a fixed order.

    The list is assembled from the closed-form representative families for
    the congruence class of q mod p^2 and cross-checked, family by family,
    against the orbit counts computed from scratch; a mismatch raises.
    """
    _validate_pq(p, q, relaxed)
    entries: list[ClassificationEntry] = []
    if p == 2:
        omega2 = q - 1  # the unique element of order 2
        entries.append(coarse_family(2, q, "Tppq", (1, 1)))
        entries.append(coarse_family(2, q, "Tppq", (omega2, 1)))
        entries.append(coarse_family(2, q, "Tp2q", (1,)))
        entries.append(coarse_family(2, q, "Tp2q", (omega2,)))
        entries.append(coarse_family(2, q, "B22q", (1,)))
        entries.append(coarse_family(2, q, "B22q", (omega2,)))
        entries.append(coarse_family(2, q, "B4q", (1, 1)))
        entries.append(coarse_family(2, q, "B4q", (1, omega2)))
        entries.append(coarse_family(2, q, "B4q", (omega2, 1)))
        if (q - 1) % 4 == 0:
            omega4, _ = unit_roots(q, 4)
            entries.append(coarse_family(2, q, "Tp2q", (omega4,)))
            entries.append(coarse_family(2, q, "B22q", (omega4,)))
    else:
        entries.append(coarse_family(p, q, "Tppq", (1, 1)))
        entries.append(coarse_family(p, q, "Tp2q", (1,)))
        entries.append(coarse_family(p, q, "Bppq", (1, 1)))
        entries.append(coarse_family(p, q, "Bp2q", (1,)))
        if (q - 1) % p == 0:
            omega, _ = unit_roots(q, p)
            eta = quadratic_nonresidue(p)
            entries.append(coarse_family(p, q, "Tppq", (omega, 1)))
            entries.append(coarse_family(p, q, "Tp2q", (omega,)))
            entries.append(coarse_family(p, q, "Bppq", (1, omega)))
            entries.append(coarse_family(p, q, "Bppq", (omega, 1)))
            entries.append(coarse_family(p, q, "Bppq", (pow(omega, eta, q), 1)))
            for i in range(1, p):
                entries.append(coarse_family(p, q, "Bp2q", (pow(omega, i, q),)))
        if (q - 1) % (p * p) == 0:
            omega_sq, _ = unit_roots(q, p * p)
            entries.append(coarse_family(p, q, "Tp2q", (omega_sq,)))
            for j in range(1, p):
                entries.append(coarse_family(p, q, "Bp2q", (pow(omega_sq, j, q),)))

    expected = count_formula(p, q, relaxed)
    if len(entries) != expected:
        raise RuntimeError(
            f"fine list has {len(entries)} entries, counting formula says {expected}"
        )
    families = FAMILIES_TWO if p == 2 else FAMILIES_ODD
    for kind, family in zip(P2_KINDS, families):
        orbits = orbit_classification(p_squared_brace(p, kind), q, guards)
        listed = sum(1 for e in entries if e.family == family)
        if len(orbits) != listed:
            raise RuntimeError(
                f"family {family}: fine list has {listed} entries but the "
                f"orbit computation found {len(orbits)} orbits"
            )
    return entries
