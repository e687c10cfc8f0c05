"""Exact-arithmetic Loday and Courant algebroids over a point or a polynomial base."""
from .algebroid import (
    Algebroid,
    AlgebroidError,
    AutCandidate,
    CheckReport,
    ViolationWitness,
    check_aut,
    check_courant,
    check_loday_axioms,
    derived_lemma_check,
    operator_identity_check,
    verify_lie_identities,
)
from .cohomology import (
    compare_phi,
    is_naive_one_cocycle,
    is_one_coboundary,
    naive_cohomology,
    naive_differential,
    standard_cohomology,
)
from .constructions import (
    LieBialgebraData,
    ThreeFormData,
    abelian,
    aff1_loday,
    catalog,
    direct_sum,
    drinfeld_double,
    exact_courant,
    random_quadratic,
    sl2_split,
)
from .exterior import MetricData, MultiSection, breve_contract, graded_poisson, metric_pair, wedge
from .io import parse_algebroid, serialize
from .modular import gauge_shift_check, modular_class, top_connection
from .scalars import Derivation, Poly, format_poly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "Algebroid",
    "AlgebroidError",
    "AutCandidate",
    "CheckReport",
    "Derivation",
    "LieBialgebraData",
    "MetricData",
    "MultiSection",
    "Poly",
    "ThreeFormData",
    "ViolationWitness",
    "abelian",
    "aff1_loday",
    "breve_contract",
    "catalog",
    "check_aut",
    "check_courant",
    "check_loday_axioms",
    "compare_phi",
    "derived_lemma_check",
    "direct_sum",
    "drinfeld_double",
    "exact_courant",
    "format_poly",
    "gauge_shift_check",
    "graded_poisson",
    "is_naive_one_cocycle",
    "is_one_coboundary",
    "metric_pair",
    "modular_class",
    "naive_cohomology",
    "naive_differential",
    "operator_identity_check",
    "parse_algebroid",
    "parse_poly",
    "random_quadratic",
    "serialize",
    "sl2_split",
    "standard_cohomology",
    "top_connection",
    "verify_lie_identities",
    "wedge",
]
