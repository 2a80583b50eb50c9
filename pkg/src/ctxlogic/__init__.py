"""Exact contextual quantum logic on finite posets of Boolean subalgebras.

Layers, bottom to top:

- :mod:`ctxlogic.gaussian`, :mod:`ctxlogic.geometry`: exact scalars, rays,
  projectors and spectrally-given operators;
- :mod:`ctxlogic.lattice`: contexts, coarsenings, the context poset and
  its downsets;
- :mod:`ctxlogic.sheaf`: valuations, local/global sections, the dual
  presheaf;
- :mod:`ctxlogic.logic`: formulas, Kripke forcing and the Heyting algebra
  of downsets;
- :mod:`ctxlogic.io`, :mod:`ctxlogic.cli`: file formats and the command line.
"""

from .errors import DimensionMismatch, InvalidDecomposition, InvalidInput, NotInPoset
from .gaussian import GaussianRational
from .geometry import Operator, Projector, Ray, apply_function, are_orthogonal, projector_from_ray, sum_is_identity
from .lattice import (
    Context,
    ContextPoset,
    Downset,
    all_downsets,
    build_poset,
    coarsenings,
    context_from_decomposition,
    intersect,
    is_downset,
    leq,
    principal_downset,
    spectral_algebra,
    to_dot,
)
from .logic import (
    And,
    Atom,
    Implies,
    KripkeModel,
    Not,
    Or,
    border,
    check_heyting_homomorphism,
    eval_formula,
    excluded_middle_witness,
    forces,
    heyting_and,
    heyting_implies,
    heyting_not,
    heyting_or,
    interior,
    parse_formula,
    random_formula,
)
from .sheaf import (
    DualPresheaf,
    LocalSection,
    NaturalTransformationSection,
    Valuation,
    boolean_information,
    build_dual_presheaf,
    enumerate_local_sections,
    extend_section,
    extended_valuation,
    find_global_section,
    is_local_section,
    parity_oracle,
    principal_section,
    restrict_valuation,
    section_to_transformation,
    transformation_to_section,
    value_of,
)
from .io import RaySet, fixture_path, load_model, load_rayset, load_section

__version__ = "0.1.0"
