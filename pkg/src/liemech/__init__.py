"""Computational Lie theory and geometric mechanics on finite-dimensional groups."""
from . import algebra, builders
from .algebra import LieAlgebra, Ad, bracket, ad_matrix, coad, coAd, group_exp, killing
from .builders import get_algebra

__all__ = [
    "LieAlgebra",
    "Ad",
    "ad_matrix",
    "algebra",
    "bracket",
    "builders",
    "coAd",
    "coad",
    "get_algebra",
    "group_exp",
    "killing",
]
__version__ = "0.1.0"
