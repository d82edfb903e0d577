"""Exhaustive enumeration of all brace structures on a given abelian group.

A brace on (A, +) is the same thing as a total map lam : A -> Aut(A, +)
with lam_0 = id and the closure law

    lam_{a + lam_a(b)} = lam_a . lam_b        for all a, b,

the multiplication being a*b = lam_a(b) - b.  (Equivalently: the graph
{(a, lam_a)} is a regular subgroup of the holomorph A x| Aut(A).)  The
search below backtracks over the value of lam at one unassigned element at
a time, propagating the closure law eagerly and pruning on the first
conflict, so assignments on a circle-generating chain determine the rest.

The raw output contains every brace structure on the group exactly once,
as a function.  Dedup to isomorphism classes happens at the lambda level:
an additive automorphism psi acts by (psi . lam)_a = psi lam_{psi^-1(a)}
psi^-1, and two structures on the same group are isomorphic iff they lie
in one orbit.  Orbits are expanded explicitly, which doubles as a
self-check that the raw search was complete.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .braces import Brace
from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded
from .groups import (
    AbelianGroup,
    GroupMap,
    abelian_groups_of_order,
    aut_group_order,
    enumerate_automorphisms,
)


@dataclass
class LambdaAssignment:
    """A partial lambda map kept by the search; values are automorphism ids."""

    group: AbelianGroup
    values: dict[int, int] = field(default_factory=dict)


class _LambdaSearch:
    def __init__(self, g: AbelianGroup, guards: Guards):
        if g.order > guards.enum_order_cap:
            raise GuardExceeded(
                f"lambda-map search on order {g.order} (cap {guards.enum_order_cap})"
            )
        auts = enumerate_automorphisms(g, guards)
        self.g = g
        self.n = g.order
        self.perms = [[int(v) for v in a.as_permutation()] for a in auts]
        self.images = [a.images for a in auts]
        self.aut_id = {imgs: i for i, imgs in enumerate(self.images)}
        self.identity = self.aut_id[tuple(g.generators)]
        self.add = [[int(g.add(i, j)) for j in range(self.n)] for i in range(self.n)]
        self._comp: dict[tuple[int, int], int] = {}
        order = list(dict.fromkeys(list(g.generators) + list(range(self.n))))
        self.branch_order = order
        self.results: list[tuple[int, ...]] = []

    def compose(self, i: int, j: int) -> int:
        key = (i, j)
        out = self._comp.get(key)
        if out is None:
            pi = self.perms[i]
            out = self.aut_id[tuple(pi[x] for x in self.images[j])]
            self._comp[key] = out
        return out

    def run(self) -> list[tuple[int, ...]]:
        asg = [-1] * self.n
        asg[0] = self.identity
        assigned = [0]
        self._branch(asg, assigned)
        return self.results

    def _propagate(self, asg, assigned, queue) -> tuple[bool, int]:
        """Close under the law; returns (ok, number of new assignments)."""
        added = 0
        qi = 0
        while qi < len(queue):
            a = queue[qi]
            qi += 1
            fa = asg[a]
            pa = self.perms[fa]
            add = self.add
            bi = 0
            while bi < len(assigned):
                b = assigned[bi]
                bi += 1
                fb = asg[b]
                # (a, b)
                c = add[a][pa[b]]
                fc = self.compose(fa, fb)
                old = asg[c]
                if old < 0:
                    asg[c] = fc
                    assigned.append(c)
                    queue.append(c)
                    added += 1
                elif old != fc:
                    return False, added
                # (b, a)
                c = add[b][self.perms[fb][a]]
                fc = self.compose(fb, fa)
                old = asg[c]
                if old < 0:
                    asg[c] = fc
                    assigned.append(c)
                    queue.append(c)
                    added += 1
                elif old != fc:
                    return False, added
        return True, added

    def _branch(self, asg, assigned):
        e = next((x for x in self.branch_order if asg[x] < 0), None)
        if e is None:
            self.results.append(tuple(asg))
            return
        for fid in range(len(self.perms)):
            asg[e] = fid
            assigned.append(e)
            ok, added = self._propagate(asg, assigned, [e])
            if ok:
                self._branch(asg, assigned)
            for _ in range(added + 1):
                asg[assigned.pop()] = -1


def enumerate_lambda_maps(g: AbelianGroup, guards: Guards = DEFAULT_GUARDS):
    """All total closed lambda maps on g, as tuples of automorphism ids,
    together with the search context (automorphism permutations etc.)."""
    search = _LambdaSearch(g, guards)
    return search.run(), search


def _brace_from_signature(g: AbelianGroup, sig, perms_arr: np.ndarray) -> Brace:
    idx = np.arange(g.order, dtype=np.int64)
    sig_arr = np.asarray(sig, dtype=np.int64)

    def row_fn(a, _g=g, _sig=sig_arr, _perms=perms_arr, _idx=idx):
        return _g.sub_vec(_perms[_sig[a]], _idx)

    brace = Brace.from_rule(g, row_fn)
    brace.meta["lambda_signature"] = tuple(int(x) for x in sig)
    return brace


def enumerate_braces_on(g: AbelianGroup, guards: Guards = DEFAULT_GUARDS) -> list[Brace]:
    """Every brace structure on g, each exactly once as a function."""
    sigs, search = enumerate_lambda_maps(g, guards)
    perms_arr = np.asarray(search.perms, dtype=np.int64)
    return [_brace_from_signature(g, sig, perms_arr) for sig in sigs]


def dedupe_lambda_signatures(search: _LambdaSearch, sigs) -> list[tuple[tuple[int, ...], int]]:
    """Orbit representatives (and orbit sizes) of the signatures under the
    conjugation action of Aut(g).  Expanding each orbit inside the full
    signature set is also a completeness check of the raw search."""
    universe = set(sigs)
    n = search.n
    m = len(search.perms)
    inv_id = []
    for i in range(m):
        p = search.perms[i]
        inv = [0] * n
        for x, y in enumerate(p):
            inv[y] = x
        inv_id.append(search.aut_id[tuple(inv[gidx] for gidx in search.g.generators)])
    seen: set[tuple[int, ...]] = set()
    out = []
    for sig in sigs:
        if sig in seen:
            continue
        orbit = set()
        for psi in range(m):
            psi_inv = inv_id[psi]
            pinv = search.perms[psi_inv]
            t = tuple(
                search.compose(psi, search.compose(sig[pinv[a]], psi_inv))
                for a in range(n)
            )
            orbit.add(t)
        if not orbit <= universe:
            raise RuntimeError("twisted structure missing: lambda search incomplete")
        seen |= orbit
        out.append((sig, len(orbit)))
    return out


def enumerate_braces(n: int, guards: Guards = DEFAULT_GUARDS) -> list[Brace]:
    """One representative per isomorphism class of braces of order n,
    over all abelian groups of that order."""
    out = []
    for g in abelian_groups_of_order(n):
        sigs, search = enumerate_lambda_maps(g, guards)
        perms_arr = np.asarray(search.perms, dtype=np.int64)
        for sig, size in dedupe_lambda_signatures(search, sigs):
            brace = _brace_from_signature(g, sig, perms_arr)
            brace.meta["class_size"] = size
            out.append(brace)
    return out


def count_braces(n: int, guards: Guards = DEFAULT_GUARDS) -> int:
    """b(n): the number of isomorphism classes of braces of order n."""
    return len(enumerate_braces(n, guards))


b = count_braces
