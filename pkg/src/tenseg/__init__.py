"""Rigidity analysis of tensegrity frameworks."""

from .classify import Classification, classify, minimal_analysis
from .model import Tensegrity, parse, read, render, write
from .rigidity import FULL, ISOMETRY, build_operator, variation_space

__all__ = ["Classification", "FULL", "ISOMETRY", "Tensegrity", "build_operator", "classify",
           "minimal_analysis", "parse", "read", "render", "variation_space", "write"]
