"""Template-constrained multiposets, embeddings, arrow relations and amalgams."""
from .amalgam import (
    BinaryDiagram,
    Cone,
    construct_d,
    find_cone_csm,
    generate_diagram_from_cone,
    is_compatible_cone,
    verify_main_theorem_instance,
)
from .canon import canonical_form
from .classes import (
    ClassSpec,
    bar_translate,
    bar_untranslate,
    enumerate_class,
    is_member,
    is_member_csm,
    is_member_k,
    is_member_kbar,
    product_membership,
)
from .errors import BoundExceeded, MultiposetError
from .hom import compose, enumerate_embeddings, hom_store_get, is_embedding
from .order import Relation, Template, TemplateInfo, linear_extension_fixed, validate_template
from .presets import preset_template
from .ramsey import (
    ArrowResult,
    Coloring,
    arrow_check,
    has_hp_upto,
    has_jep_upto,
    has_sap_upto,
    ramsey_witness_search,
    verify_arrow_counterexample,
)
from .structure import Multiposet, chain, induced_substructure, point, reduct

__version__ = "0.1.0"
