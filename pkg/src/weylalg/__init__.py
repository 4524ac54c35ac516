"""Exact computations in the Weyl algebra."""

from .core import (
    Context,
    ModuleVector,
    Monomial,
    WeylElement,
    adjoint,
    apply_to_polynomial,
    decompose_bidegree,
    formal_derivative,
    parse_element,
    parse_vector,
)
from .cyclic import Presentation, cyclic_generator, pair_generator, verify_generator
from .errors import (
    CapExceeded,
    ContextMismatch,
    InternalError,
    NotFiniteLength,
    ParseError,
    RankMismatch,
    WeylError,
)
from .groebner import (
    GroebnerBasis,
    LeftSubmodule,
    annihilator,
    buchberger,
    groebner_basis,
    intersect,
    is_groebner,
    lift,
    member,
    modules_equal,
    normal_form,
    syzygies,
)
from .kernels import BACKEND
from .orderings import (
    ModuleOrder,
    MonomialOrder,
    deglex,
    elimination,
    grevlex,
    parse_module_order,
    parse_order,
)
from .stafford import (
    TwoGenerators,
    three_to_two,
    two_generators,
    two_generators_a1,
    verify_same_ideal,
)
from .structure import OrePair, left_ore, right_ore, simplicity_certificate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapExceeded", "Context", "ContextMismatch", "GroebnerBasis", "InternalError",
    "LeftSubmodule", "ModuleOrder", "ModuleVector", "Monomial", "MonomialOrder", "NotFiniteLength",
    "OrePair", "ParseError", "Presentation", "RankMismatch", "TwoGenerators", "WeylElement", "WeylError",
    "adjoint", "annihilator", "apply_to_polynomial", "buchberger", "cyclic_generator",
    "decompose_bidegree", "deglex", "elimination", "formal_derivative", "grevlex", "groebner_basis",
    "intersect", "is_groebner", "left_ore", "lift", "member", "modules_equal", "normal_form",
    "pair_generator", "parse_element", "parse_vector", "parse_module_order", "parse_order", "right_ore",
    "simplicity_certificate", "syzygies", "three_to_two", "two_generators", "two_generators_a1",
    "verify_generator", "verify_same_ideal",
]
