"""Simultaneous (Aberth-Ehrlich) root finding and unit-circle censuses.

The iteration runs on whole batches: ``aberth_batch`` takes a stack of
polynomials of equal degree and refines all of their roots at once, which is
how the fiber counts in the limit methods are evaluated at thousands of
sample points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, MethodConfig
from .errors import NoConvergence
from .polycore import CPoly

_EPS = np.finfo(float).eps
# irrational phase of the starting circle; keeps starts off symmetry axes
_PHASE = (math.sqrt(5) - 1) / 2


@dataclass
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray
    deflated: int = 0
    iterations: int = 0

    def __len__(self):
        return len(self.roots)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)


@dataclass(frozen=True)
class Census:
    I: int
    U: int
    O: int
    d: int
    band: float

    def __add__(self, other: Census) -> Census:
        return Census(self.I + other.I, self.U + other.U, self.O + other.O,
                      self.d + other.d, self.band)

    @property
    def C(self) -> float:
        """Fraction of nonunimodular zeros."""
        return (self.I + self.O) / self.d if self.d else 0.0


def _cauchy_radius(c: np.ndarray) -> np.ndarray:
    """Unique positive root of |a_d| r^d = sum_{k<d} |a_k| r^k, per row (index == power)."""
    d = c.shape[1] - 1
    a = np.abs(c)
    with np.errstate(divide="ignore"):
        loga = np.log(a[:, :-1]) - np.log(a[:, -1:])
    k = np.arange(d)
    # h(log r) = logsumexp(loga + (k - d) log r) is decreasing; bisect on it
    lo = np.full(c.shape[0], -50.0)
    hi = np.full(c.shape[0], 50.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        e = loga + (k - d) * mid[:, None]
        m = e.max(axis=1)
        # a row of zeros below the leading term (p = z^d) gives nan, i.e. "not big"
        with np.errstate(invalid="ignore"):
            lse = m + np.log(np.exp(e - m[:, None]).sum(axis=1))
        big = lse > 0
        lo = np.where(big, mid, lo)
        hi = np.where(big, hi, mid)
    return np.exp(hi)


def _newton_terms(c: np.ndarray, z: np.ndarray):
    """Newton ratio p/p', |p| and the rounding scale sum|a_k||z|^k for every root.

    Inside the unit disc Horner runs on p itself; outside it runs on the
    reversed polynomial at 1/z, which keeps everything bounded.
    """
    d = c.shape[1] - 1
    inside = np.abs(z) <= 1
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        w = np.where(inside, z, 1 / np.where(z == 0, 1, z))
    aw = np.abs(w)
    ac = np.abs(c)
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    q = np.zeros_like(z)
    dq = np.zeros_like(z)
    sp = np.zeros(z.shape)
    sq = np.zeros(z.shape)
    for k in range(d, -1, -1):
        dp = dp * w + p
        p = p * w + c[:, k, None]
        sp = sp * aw + ac[:, k, None]
        j = d - k
        dq = dq * w + q
        q = q * w + c[:, j, None]
        sq = sq * aw + ac[:, j, None]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        ratio_in = p / dp
        ratio_out = z * q / (d * q - w * dq)
    ratio = np.where(inside, ratio_in, ratio_out)
    val = np.where(inside, np.abs(p), np.abs(q))
    scale = np.where(inside, sp, sq)
    return ratio, val, scale


def aberth_batch(coeffs, tol: float = 1e-12, max_iter: int = 200, raise_on_fail: bool = True):
    """Roots of every row of ``coeffs`` (shape (B, d+1), index == power, leading term nonzero).

    Returns ``(roots, residuals, iterations)`` with roots of shape (B, d).
    Residuals are |p(z)| / sum|a_k||z|^k, i.e. relative backward errors.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    B, n1 = c.shape
    d = n1 - 1
    if d < 1:
        return np.zeros((B, 0), complex), np.zeros((B, 0)), 0
    c = c / c[:, -1:]
    if d == 1:
        z = -c[:, :1]
        return z, np.zeros((B, 1)), 0

    R = _cauchy_radius(c)
    ang = 2 * np.pi * (np.arange(d) + _PHASE) / d
    z = R[:, None] * np.exp(1j * ang)[None, :]
    active = np.ones((B, d), dtype=bool)
    eye = np.eye(d, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        ratio, val, scale = _newton_terms(c, z)
        diff = z[:, :, None] - z[:, None, :]
        diff[:, eye] = 1.0
        inv = 1.0 / diff
        inv[:, eye] = 0.0
        S = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = ratio / (1 - ratio * S)
        at_noise = val <= 4 * (d + 1) * _EPS * scale
        bad = ~np.isfinite(corr)
        corr = np.where(bad | ~active | at_noise, 0, corr)
        z = z - corr
        small = np.abs(corr) <= tol * np.maximum(np.abs(z), tol)
        active &= ~(small | at_noise) | bad
        if not active.any():
            break

    # one guarded Newton polish
    ratio, val, scale = _newton_terms(c, z)
    cand = z - np.where(np.isfinite(ratio), ratio, 0)
    _, val2, scale2 = _newton_terms(c, cand)
    better = val2 / np.maximum(scale2, 1e-300) < val / np.maximum(scale, 1e-300)
    z = np.where(better, cand, z)
    _, val, scale = _newton_terms(c, z)
    residuals = val / np.maximum(scale, 1e-300)

    if raise_on_fail and active.any():
        raise NoConvergence(int(active.sum()), z)
    return z, residuals, it


def find_roots(p: CPoly, cfg: MethodConfig = DEFAULT) -> RootSet:
    """All roots of ``p`` (zero roots deflated first, listed with multiplicity)."""
    c = np.asarray(p.coeffs, dtype=complex)
    if len(c) < 2:
        raise ValueError("find_roots needs degree >= 1")
    nz = np.nonzero(c)[0]
    k = int(nz[0])
    core = c[k:]
    roots, res, it = aberth_batch(core[None, :], cfg.root_tol, cfg.max_iter)
    roots = np.concatenate([np.zeros(k, complex), roots[0]])
    res = np.concatenate([np.zeros(k), res[0]])
    return RootSet(roots, res, deflated=k, iterations=it)


def classify(rs: RootSet | np.ndarray, tau: float = DEFAULT.tau) -> Census:
    """Count roots inside, on (within ``tau``) and outside the unit circle."""
    if not 0 < tau < 0.5:
        raise ValueError("tau must lie in (0, 0.5)")
    roots = rs.roots if isinstance(rs, RootSet) else np.asarray(rs)
    m = np.abs(roots)
    U = int(np.count_nonzero(np.abs(m - 1) <= tau))
    I = int(np.count_nonzero(m < 1 - tau))
    O = len(m) - U - I
    return Census(I, U, O, len(m), tau)


def census(p: CPoly, cfg: MethodConfig = DEFAULT) -> Census:
    return classify(find_roots(p, cfg), cfg.tau)
