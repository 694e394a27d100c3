"""Zeros of polynomials relative to the unit circle.

Root censuses, Mahler measures and four ways (BM, MBM, CAP, exact
discriminant) of computing LC(P), the limiting fraction of nonunimodular
zeros of P(x, x^n) as n grows.
"""
from .config import DEFAULT, MethodConfig
from .errors import (BadSpec, DegenerateLeading, DiscTooCostly, GridTooCoarse, NoConvergence,
                     NonReciprocal, NotSquarefreeGenerically, PoleNearContour,
                     QuadratureNonconvergent, SectorViolation, UnimodularError)
from .exact_lc import ExactLCResult, closed_form, envelopes, f1, lc_exact, sector_census, sector_split
from .families import FamilySpec, make, parse_family, registry, registry_row
from .limit_methods import LimitEstimate, find_jumps, lc_bm, lc_cap, lc_mbm
from .measures import boyd_lawton_trace, c_ratio, mahler_bi, mahler_uni, nu, s_measure
from .polycore import CPoly, IntBiPoly, IntPoly, disc_y, invert, parse_poly, substitute_y_xn
from .rootfinder import Census, RootSet, census, classify, find_roots

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "MethodConfig",
    "BadSpec", "DegenerateLeading", "DiscTooCostly", "GridTooCoarse", "NoConvergence",
    "NonReciprocal", "NotSquarefreeGenerically", "PoleNearContour", "QuadratureNonconvergent",
    "SectorViolation", "UnimodularError",
    "ExactLCResult", "closed_form", "envelopes", "f1", "lc_exact", "sector_census", "sector_split",
    "FamilySpec", "make", "parse_family", "registry", "registry_row",
    "LimitEstimate", "find_jumps", "lc_bm", "lc_cap", "lc_mbm",
    "boyd_lawton_trace", "c_ratio", "mahler_bi", "mahler_uni", "nu", "s_measure",
    "CPoly", "IntBiPoly", "IntPoly", "disc_y", "invert", "parse_poly", "substitute_y_xn",
    "Census", "RootSet", "census", "classify", "find_roots",
]
