"""Resource guards for the exhaustive parts of the package.

Everything here is exact and exhaustive, so every operation that scales
with the group order (or with an automorphism-group order) carries a cap.
``BRACE_GUARD_MAX``, when set, replaces the order-shaped caps with a single
ceiling; the automorphism/homomorphism caps stay at their defaults unless
changed programmatically.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Guards:
    aut_cap: int = 10**6          # max |Aut(G)| for exhaustive generation
    hom_cap: int = 10**6          # max |Hom(G, H)| for exhaustive generation
    axiom_order_cap: int = 10_000  # axiom checks on table-backed braces
    rule_order_cap: int = 3_000    # materializing closed-form multiplications
    enum_order_cap: int = 200      # from-scratch lambda-map search
    ybe_order_cap: int = 256       # all-triples Yang-Baxter verification
    subgroup_order_cap: int = 100  # full subgroup-lattice walks

    @staticmethod
    def from_env() -> "Guards":
        base = Guards()
        raw = os.environ.get("BRACE_GUARD_MAX")
        if not raw:
            return base
        cap = int(raw)
        return replace(
            base,
            axiom_order_cap=cap,
            rule_order_cap=cap,
            enum_order_cap=cap,
            ybe_order_cap=cap,
        )


DEFAULT_GUARDS = Guards.from_env()
