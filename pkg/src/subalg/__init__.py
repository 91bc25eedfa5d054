"""Finite substitution algebras: tables, axioms, generalized substitution, constructions
and bounded representation search."""
from .constructions import (Dilation, FilterSpec, QuotientMap, Representation, dilate, dilate_element,
                            generate_subalgebra, neat_reduct, neat_reduct_of_full, pad_algebra,
                            reduced_product, reduct, representation_literal, representation_via_Z,
                            validate_filter)
from .core import (FiniteSA, FnAlgebra, FnElement, as_finite_sa, assignments, dimension_set, fn_star,
                   full_fsa, one_point_sa, rank, unrank, update_assignment, variable_fn, zero_elements,
                   zero_set)
from .errors import CapacityError, FormatError, IntegrityError, PreconditionError, UsageError
from .io import dumps, io_roundtrip, load, load_sa, parse, save
from .predicates import (AxiomViolation, check_axioms, dimension_reserve, is_dimension_complemented,
                         is_distinguished, is_locally_finite, is_strongly_distinguished)
from .search import (EmbeddingWitness, Representability, find_embedding, find_neat_embedding,
                     is_representable_up_to, verify_embedding)
from .substitution import (LAWS, SubstContext, check_subst_laws, gamma_hom, gamma_hom_image,
                           generalized_subst, is_gamma_homomorphism, subst)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation", "CapacityError", "Dilation", "EmbeddingWitness", "FilterSpec", "FiniteSA",
    "FnAlgebra", "FnElement", "FormatError", "IntegrityError", "LAWS", "PreconditionError",
    "QuotientMap", "Representability", "Representation", "SubstContext", "UsageError",
    "as_finite_sa", "assignments", "check_axioms", "check_subst_laws", "dilate", "dilate_element",
    "dimension_reserve", "dimension_set", "dumps", "find_embedding", "find_neat_embedding", "fn_star",
    "full_fsa", "gamma_hom", "gamma_hom_image", "generalized_subst", "generate_subalgebra",
    "io_roundtrip", "is_dimension_complemented", "is_distinguished", "is_gamma_homomorphism",
    "is_locally_finite", "is_representable_up_to", "is_strongly_distinguished", "load", "load_sa",
    "neat_reduct", "neat_reduct_of_full", "one_point_sa", "pad_algebra", "parse", "rank",
    "reduced_product", "reduct", "representation_literal", "representation_via_Z", "save", "subst",
    "unrank", "update_assignment", "validate_filter", "variable_fn", "verify_embedding",
    "zero_elements", "zero_set",
]
