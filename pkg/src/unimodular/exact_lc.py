"""Exact LC values from the unimodular roots of the y-discriminant.

For a reciprocal P with real coefficients, nu(e(t)) can only change where the
fiber P(e(t), y) acquires a double root, i.e. at unimodular roots of
disc_y P.  Those roots are located to full precision (Aberth start, then Newton
in extended precision on the exact integer polynomial) and the step function
is integrated exactly.

Also here: the two closed-form constants for P(2,3) and its inverse, and the
trigonometric machinery (f1, envelopes, sector census) behind the closed form
for the inverse.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .config import DEFAULT, MethodConfig
from .errors import DiscTooCostly, NonReciprocal, SectorViolation
from .families import FamilySpec, make
from .limit_methods import interval_values, merge_partition
from .polycore import IntBiPoly, IntPoly, disc_cost, disc_y, invert, is_bi_reciprocal, substitute_y_xn
from .rootfinder import Census, aberth_batch, classify

log = logging.getLogger(__name__)


@dataclass
class ExactLCResult:
    jump_angles: np.ndarray
    lc: float
    discriminant: IntPoly
    unimodular_disc_roots: np.ndarray
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    no_unimodular_roots: bool = False

    def __float__(self):
        return float(self.lc)


def _strip_x(p: IntPoly) -> IntPoly:
    c = p.coeffs
    k = next(i for i, v in enumerate(c) if v)
    return IntPoly(c[k:])


def _polish(p: IntPoly, z0: complex, tol: float) -> complex:
    """Newton on the exact coefficients, with enough digits to survive cancellation."""
    digits = max(len(str(abs(v))) for v in p.coeffs)
    coeffs = list(reversed(p.coeffs))
    with mpmath.workdps(digits + 30):
        z = mpmath.mpc(z0)
        for _ in range(60):
            v, dv = mpmath.polyval(coeffs, z, derivative=True)
            if dv == 0:
                break
            step = v / dv
            z -= step
            if abs(step) <= tol * 1e-6 * max(1, abs(z)):
                break
        return complex(z)


def unimodular_roots(p: IntPoly, cfg: MethodConfig = DEFAULT) -> np.ndarray:
    """Roots of p with ||z| - 1| < cfg.exact_tau, polished against the exact polynomial.

    p is reduced to its squarefree part (with zero roots removed) first, so
    every root is simple and Newton converges quadratically.
    """
    if p.deg < 1:
        return np.zeros(0, complex)
    q = _strip_x(p.squarefree_part())
    if q.deg < 1:
        return np.zeros(0, complex)
    roots, _, _ = aberth_batch(np.array([q.to_cpoly().coeffs]), cfg.root_tol,
                               cfg.max_iter, raise_on_fail=False)
    out = []
    for z in roots[0]:
        if abs(abs(z) - 1) > 1e-3:
            continue
        z = _polish(q, complex(z), cfg.exact_tau)
        if abs(abs(z) - 1) < cfg.exact_tau:
            out.append(z)
    return np.array(out, dtype=complex)


def _angles(roots: np.ndarray, tol: float) -> np.ndarray:
    t = np.sort(np.mod(np.angle(roots) / (2 * np.pi), 1.0))
    t = t[(t > tol) & (t < 1 - tol)]
    if t.size:
        t = t[np.concatenate([[True], np.diff(t) > tol])]
    return t


def lc_exact(P: IntBiPoly, cfg: MethodConfig = DEFAULT) -> ExactLCResult:
    """LC(P) with jump points at the unimodular roots of disc_y P.

    Unimodular roots of the leading coefficient a_g are added as candidate
    breakpoints too (a fiber root escaping to infinity also changes nu);
    candidates across which nu does not change are merged away.
    """
    if P.deg_y < 1:
        raise ValueError("P must have degree >= 1 in y")
    if not is_bi_reciprocal(P):
        raise NonReciprocal("the exact route needs a centrally symmetric coefficient matrix")
    cost = disc_cost(P)
    if cost > cfg.disc_cost_limit:
        raise DiscTooCostly(f"disc_y cost estimate {cost} exceeds {cfg.disc_cost_limit}")
    D = disc_y(P)
    droots = unimodular_roots(D, cfg)
    lroots = unimodular_roots(P.leading_y, cfg)
    cand = _angles(np.concatenate([droots, lroots]), cfg.bisect_tol)
    angles = np.concatenate([[0.0], cand, [1.0]])
    part = merge_partition(angles, interval_values(P, angles, cfg))
    if not droots.size:
        log.info("lc_exact: disc_y has no unimodular roots; nu is constant")
    return ExactLCResult(part.jumps, part.lc(P.deg_y), D, droots, part.values,
                         no_unimodular_roots=not droots.size)


# --------------------------------------------------------------------------
# closed forms for P(2,3)
# --------------------------------------------------------------------------

def closed_form(name: str, form: str = "arccos") -> float:
    """LC(P(2,3)) ('lc_p23') or LC of its inverse ('lc_p23_inv').

    ``form='atan2'`` evaluates the same constants through atan2 instead of
    arccos, as an independent check.
    """
    if form not in ("arccos", "atan2"):
        raise ValueError(f"unknown form {form!r}")
    if name == "lc_p23":
        c = math.sqrt(2) / 2 - 0.5
        ac = math.acos(c) if form == "arccos" else math.atan2(math.sqrt(1 - c * c), c)
        return 1 - 2 / math.pi * ac
    if name == "lc_p23_inv":
        if form == "arccos":
            return math.acos(0.75) / math.pi
        # 2 arccos(3/4) = arctan(3 sqrt 7)
        return math.atan2(3 * math.sqrt(7), 1) / (2 * math.pi)
    raise ValueError(f"unknown closed form {name!r}")


def f1(t, n: int):
    """2cos((2n+1)t) + 2cos((n+1)t) + 2cos(nt) + 1; zero exactly at the unimodular
    roots e^{it} of the inverse of P(2,3) evaluated at y = x^n."""
    t = np.asarray(t, dtype=float)
    return 2 * np.cos((2 * n + 1) * t) + 2 * np.cos((n + 1) * t) + 2 * np.cos(n * t) + 1


def envelopes(t):
    """(E1, E2) = (3 + 4cos(t/2), 3 - 4cos(t/2))."""
    c = 4 * np.cos(np.asarray(t, dtype=float) / 2)
    return 3 + c, 3 - c


SECTOR_EDGES = (2 * math.acos(0.75), 2 * math.acos(-0.75))


@dataclass
class SectorCensus:
    n: int
    outer_low: Census
    middle: Census
    outer_high: Census

    @property
    def total(self) -> Census:
        return self.outer_low + self.middle + self.outer_high


def p23_inv_at(n: int) -> IntPoly:
    return substitute_y_xn(invert(make(FamilySpec("P", (2, 3)))), n)


def sector_split(roots, tau: float) -> dict[str, Census]:
    """Census of ``roots`` in the argument sectors [0, a), [a, b], (b, 2 pi)
    with a, b = 2arccos(3/4), 2arccos(-3/4)."""
    roots = np.asarray(roots, dtype=complex)
    arg = np.mod(np.angle(roots), 2 * np.pi)
    a, b = SECTOR_EDGES
    low, high = arg < a, arg > b
    mid = ~(low | high)
    return {"low": classify(roots[low], tau), "middle": classify(roots[mid], tau),
            "high": classify(roots[high], tau)}


def sector_census(n: int, cfg: MethodConfig = DEFAULT) -> SectorCensus:
    """Sector census of the roots of P(2,3)^x(x, x^n).

    Raises SectorViolation if a nonunimodular root lies in the middle sector.
    """
    if n < 5:
        raise ValueError("sector_census needs n >= 5")
    p = p23_inv_at(n)
    roots, _, _ = aberth_batch(np.array([p.to_cpoly().coeffs]), cfg.root_tol, cfg.max_iter)
    roots = roots[0]
    parts = sector_split(roots, cfg.tau)
    if parts["middle"].I or parts["middle"].O:
        arg = np.mod(np.angle(roots), 2 * np.pi)
        a, b = SECTOR_EDGES
        inmid = (arg >= a) & (arg <= b)
        bad = roots[inmid & (np.abs(np.abs(roots) - 1) > cfg.tau)]
        raise SectorViolation(bad.tolist())
    return SectorCensus(n, parts["low"], parts["middle"], parts["high"])
