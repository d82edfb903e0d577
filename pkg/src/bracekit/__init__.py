"""Finite left braces: construction, verification, classification of order
p^2*q, from-scratch enumeration, and derived Yang-Baxter solutions."""

from .braces import (
    AxiomReport,
    Brace,
    SubgroupWitness,
    check_axioms,
    ideal_predicates,
    primary_decomposition,
    semidirect_decompose,
    socle,
    trivial_brace,
    twist,
    verify_cocycle,
)
from .config import DEFAULT_GUARDS, Guards
from .constructions import (
    ClassificationEntry,
    ModuleAction,
    binomial_c2,
    classify,
    coarse_family,
    count_formula,
    explicit_adjoint_iso,
    module_from_hom,
    orbit_classification,
    p_squared_brace,
    quadratic_nonresidue,
    semidirect_product,
    unit_roots,
)
from .enumeration import b, count_braces, enumerate_braces, enumerate_braces_on
from .errors import FormatError, GuardExceeded
from .groups import (
    AbelianGroup,
    Element,
    GroupMap,
    enumerate_automorphisms,
    enumerate_homomorphisms,
    make_group,
    primary_component,
)
from .morphisms import (
    BraceMap,
    automorphism_group,
    dedupe_up_to_iso,
    find_isomorphism,
    is_brace_homomorphism,
)
from .ybe import (
    CycleSetTable,
    YbeSolution,
    cycle_set_from_brace,
    verify_yang_baxter,
    ybe_solution_from_brace,
)

__all__ = [name for name in dir() if not name.startswith("_")]
