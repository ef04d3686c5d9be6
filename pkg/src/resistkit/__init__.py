"""Exact tools for ideals generated by a single element of a group algebra.

The main question is when a non-monomial ``r`` in ``kG`` generates the whole
algebra. The package verifies and searches for explicit certificates
``1 = sum c_j u_j r v_j``, analyses two-term elements through conjugate
relations, checks lower-central weights with the Magnus expansion, scans
bounded pieces of ideals in free-group algebras, and compiles the universal
sentences that characterise the property for a fixed field.
"""

from .algebra import AlgebraElem, binomial_normalize, enumerate_units, parse_algebra
from .binomial import ConjRelation, check_relation, cor23_witness, rearrange_relation, relation_search
from .certificates import (
    IdealCertificate,
    NotFound,
    binomial_certificate,
    format_certificate,
    parse_certificate,
    search_certificate,
    trinomial_certificate,
    verify_certificate,
)
from .errors import ResistKitError
from .freiheitssatz import (
    c_reduction,
    find_ab_form,
    freiheit_scan,
    ideal_span,
    small_support_find,
    strongly_reduced_check,
)
from .groups import (
    Affine,
    DirectProduct,
    FiniteCyclic,
    FreeAbelian,
    FreeGroup,
    FreeProductFreeAbelian,
    WreathZZ,
    parse_group,
)
from .magnus import magnus_embed, refute_trinomial_config, weight
from .scalars import QQ, NumberField, PrimeField, Scalar, golden_field, parse_field
from .sentences import build_sentence, compile_sentences, emit, enumerate_configs, split_disjunction
from .words import Alphabet, Word, parse_word

__version__ = "0.1.0"
