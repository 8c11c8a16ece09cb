"""Combinatorics of the dendroidal category Omega.

Trees and their faces, sieves on representables, inner anodyne
certificates, coloured operads with their nerves, and checks on finite
dendroidal sets.
"""

from __future__ import annotations

from .anodyne import Certificate, certify_inner_anodyne, verify_certificate
from .dsets import (
    NerveView,
    RepresentableView,
    TabulatedView,
    hom_from_subobject,
    inner_kan_check,
    normality_check,
    segal_char_check,
    segal_map,
    simplicial_restriction,
)
from .faces import Face, Subtree, compose_faces, face_domain, faces
from .operads import ColouredOperad, load_operad, nerve_evaluate, validate_operad
from .subobjects import (
    Subobject,
    boundary,
    external_boundary,
    full,
    inner_horn,
    segal_core,
)
from .trees import Tree, canonicalize, corolla, enumerate_trees, linear, parse_tree

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ColouredOperad",
    "Face",
    "NerveView",
    "RepresentableView",
    "Subobject",
    "Subtree",
    "TabulatedView",
    "Tree",
    "boundary",
    "canonicalize",
    "certify_inner_anodyne",
    "compose_faces",
    "corolla",
    "enumerate_trees",
    "external_boundary",
    "face_domain",
    "faces",
    "full",
    "hom_from_subobject",
    "inner_horn",
    "inner_kan_check",
    "linear",
    "load_operad",
    "nerve_evaluate",
    "normality_check",
    "parse_tree",
    "segal_char_check",
    "segal_core",
    "segal_map",
    "simplicial_restriction",
    "validate_operad",
    "verify_certificate",
]
