"""qvar: a finite universal-algebra workbench.

Given finite algebras presented as operation tables, constructs free and
finitely presented algebras in the generated quasivariety and decides (or
bounds) unifiability, exactness, projectivity, clause admissibility, and the
hierarchy of structural/universal completeness properties.
"""

from .caps import Caps, DEFAULT_CAPS, caps_from_env
from .core import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    Signature,
    Term,
    congruence_generated,
    congruence_lattice,
    direct_product,
    eval_term,
    generate_subalgebra,
    in_isp,
    quotient,
    si_status,
    subdirect_decomposition,
    trivial_algebra,
)
from .homs import (
    canonical_form,
    are_isomorphic,
    enumerate_homomorphisms,
    find_embedding,
)
from .free import (
    FreeAlgebra,
    Presentation,
    find_unifier,
    finitely_presented,
    free_algebra,
    is_exact,
    is_projective,
    smallest_free,
    unifiable_set,
    weakly_projective_in,
)
from .clauses import (
    Clause,
    Equation,
    admissible_in,
    blocking_quasiequation,
    classify_activity,
    holds_in,
    is_trivializing,
    parse_clause,
    valid_in_q,
)
from .analyzer import (
    PROPERTIES,
    PropertyVerdict,
    analyze,
    check_property,
    probe_set,
    rsi_catalog,
    verdict_consistency,
)
from .catalog import builtin, catalog_keys
from .lattices import (
    check_semidistributive,
    check_whitman,
    is_flat,
    prime_filter_unifier,
    validate_identity,
)

__version__ = "0.1.0"
