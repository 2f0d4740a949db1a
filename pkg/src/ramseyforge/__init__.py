"""Total-order reducts and Ramsey-failure witnesses for finite fragments of
classes of rigid relational structures."""

from .classes import ClassFragment, PropertyReport, check_amalgamation, check_hereditary, check_jep, check_rigidity, iso_types
from .core import (
    CanonicalForm,
    Embedding,
    Signature,
    Structure,
    automorphisms,
    canonical,
    embeddings,
    induced,
    isomorphism,
    serialize,
    validate,
)
from .kernels import BACKEND
from .orientation import FailureWitness, Inconclusive, OrderReduct, decide, layered_order, orient_pair
from .ramsey import exhaustive_witness_check, find_monochromatic, verify_failure_witness

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CanonicalForm",
    "ClassFragment",
    "Embedding",
    "FailureWitness",
    "Inconclusive",
    "OrderReduct",
    "PropertyReport",
    "Signature",
    "Structure",
    "automorphisms",
    "canonical",
    "check_amalgamation",
    "check_hereditary",
    "check_jep",
    "check_rigidity",
    "decide",
    "embeddings",
    "exhaustive_witness_check",
    "find_monochromatic",
    "induced",
    "iso_types",
    "isomorphism",
    "layered_order",
    "orient_pair",
    "serialize",
    "validate",
    "verify_failure_witness",
]
