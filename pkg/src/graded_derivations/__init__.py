"""Graded derivations of group algebras over Q(i), read through characters on the
signed conjugacy-action groupoid, with DG-algebra and isomorphism checks."""

from .algebra import AlgebraElement, Grading, validate_grading
from .characters import (
    Character,
    InnerCharacter,
    UnsupportedMorphism,
    bracket,
    char_table,
    character_of_derivation,
    check_additivity,
    derivation_of_character,
    is_trivial_on_loops,
)
from .coefficients import GaussianRational
from .derivations import (
    AdditiveTau,
    CentralDerivation,
    Commutator,
    Derivation,
    InnerDerivation,
    ParityTau,
    TableDerivation,
    TableTau,
    check_graded_leibniz,
    check_ideal_property,
    commutator,
    is_quasi_inner,
    leibniz_extend,
    validate_tau,
)
from .dg import (
    DiagonalScaling,
    GroupTransport,
    WindowMatrix,
    central_dg_criterion,
    check_dg,
    check_iso,
    transport_character,
    validate_automorphism,
)
from .groupoid import ActionGroupoid, Morphism, SignedElement, check_groupoid_axioms, morphism
from .groups import (
    Cyclic,
    DirectProduct,
    FreeAbelian,
    GroupMap,
    Heisenberg,
    Integers,
    Symmetric,
    Window,
    WindowSpec,
    enumerate_window,
    is_central,
    validate_group_map,
)
from .reports import ParseError, PreconditionError, Report

__version__ = "0.1.0"


__all__ = [
    "ActionGroupoid",
    "AdditiveTau",
    "AlgebraElement",
    "CentralDerivation",
    "Character",
    "Commutator",
    "Cyclic",
    "Derivation",
    "DiagonalScaling",
    "DirectProduct",
    "FreeAbelian",
    "GaussianRational",
    "Grading",
    "GroupMap",
    "GroupTransport",
    "Heisenberg",
    "InnerCharacter",
    "InnerDerivation",
    "Integers",
    "Morphism",
    "ParityTau",
    "ParseError",
    "PreconditionError",
    "Report",
    "SignedElement",
    "Symmetric",
    "TableDerivation",
    "TableTau",
    "UnsupportedMorphism",
    "Window",
    "WindowMatrix",
    "WindowSpec",
    "bracket",
    "central_dg_criterion",
    "char_table",
    "character_of_derivation",
    "check_additivity",
    "check_dg",
    "check_graded_leibniz",
    "check_groupoid_axioms",
    "check_ideal_property",
    "check_iso",
    "commutator",
    "derivation_of_character",
    "enumerate_window",
    "is_central",
    "is_quasi_inner",
    "is_trivial_on_loops",
    "leibniz_extend",
    "morphism",
    "transport_character",
    "validate_automorphism",
    "validate_grading",
    "validate_group_map",
    "validate_tau",
]
