"""Approximations of LC(P), the limit fraction of nonunimodular zeros of P(x, x^n).

* BM:  (2/g) * integral over t of nu(e(t)), midpoint rule.
* MBM: the same integral evaluated exactly on the step partition of nu,
  with jump points located by bisection.
* CAP: (2/g) * Re of the double contour integral of y P_y / P over
  x = r e(t), y = r^n e(s); for fixed t the s-integral counts the fiber roots
  inside |y| < r^n.

Here g is the degree of P in y and e(t) = exp(2 pi i t).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, MethodConfig
from .errors import GridTooCoarse, PoleNearContour, QuadratureNonconvergent
from .measures import nu_many
from .polycore import CPoly, IntBiPoly, IntPoly, is_bi_reciprocal
from .rootfinder import find_roots

log = logging.getLogger(__name__)

# fractional offset of the jump-scan grid; irrational so that grid points
# never land on the low-denominator angles where jumps tend to sit
_SCAN_PHASE = 0.3819660112501051


@dataclass
class LimitEstimate:
    value: float
    method: str
    nonreciprocal: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


@dataclass
class JumpPartition:
    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        v = np.asarray(self.values, dtype=int)
        if a[0] != 0.0 or a[-1] != 1.0 or np.any(np.diff(a) <= 0):
            raise ValueError("angles must increase strictly from 0 to 1")
        if len(v) != len(a) - 1:
            raise ValueError("need one value per interval")
        self.angles, self.values = a, v

    @property
    def jumps(self) -> np.ndarray:
        return self.angles[1:-1]

    def integral(self) -> float:
        """sum of (t_i - t_{i-1}) * nu_i."""
        return float(np.dot(np.diff(self.angles), self.values))

    def lc(self, g: int) -> float:
        return 2.0 / g * self.integral()


def _check(P: IntBiPoly):
    if P.is_zero() or P.deg_y < 1:
        raise ValueError("P must have degree >= 1 in y")


def _leads(P: IntBiPoly, t: np.ndarray) -> np.ndarray:
    return np.abs(P.leading_y(np.exp(2j * np.pi * t)))


def interval_values(P: IntBiPoly, angles: np.ndarray, cfg: MethodConfig = DEFAULT) -> np.ndarray:
    """nu on each open interval of ``angles``.

    nu is constant on each interval, so any interior point will do.  The
    midpoint is avoided: jump sets are symmetric about 1/2, which puts the
    midpoint of the central interval at x = -1, where fibers often have a
    double root on the circle or a vanishing leading coefficient.
    """
    lo, hi = angles[:-1], angles[1:]
    t = lo + _SCAN_PHASE * (hi - lo)
    bad = _leads(P, t) <= cfg.degenerate_floor
    if bad.any():
        t = np.where(bad, lo + (1 - _SCAN_PHASE) * (hi - lo), t)
    return nu_many(P, t, cfg)


def merge_partition(angles, values) -> JumpPartition:
    """Drop breakpoints whose neighbouring values coincide."""
    angles = list(angles)
    values = list(values)
    keep_a = [angles[0]]
    keep_v = [values[0]]
    for a, v in zip(angles[1:-1], values[1:]):
        if v == keep_v[-1]:
            continue
        keep_a.append(a)
        keep_v.append(v)
    keep_a.append(angles[-1])
    return JumpPartition(np.array(keep_a), np.array(keep_v))


# --------------------------------------------------------------------------
# BM
# --------------------------------------------------------------------------

def lc_bm(P: IntBiPoly, cfg: MethodConfig = DEFAULT) -> LimitEstimate:
    """(2/g) times the midpoint-rule average of nu(e(t)) over cfg.quad_points samples.

    Real coefficients make nu(t) = nu(1 - t), so only half of the symmetric
    midpoint grid is evaluated.
    """
    _check(P)
    N = cfg.quad_points
    half = (N + 1) // 2
    t = (np.arange(half) + 0.5) / N
    bad = _leads(P, t) <= cfg.degenerate_floor
    shifted = int(bad.sum())
    if shifted:
        log.info("lc_bm: %d sample(s) hit a degenerate fiber; shifted by half a step", shifted)
        t = np.where(bad, t + 0.5 / N, t)
    v = nu_many(P, t, cfg).astype(float)
    weights = np.full(half, 2.0)
    if N % 2:
        weights[-1] = 1.0
    mean = float(np.dot(weights, v)) / N
    return LimitEstimate(2.0 / P.deg_y * mean, "bm", not is_bi_reciprocal(P),
                         {"samples": N, "shifted_samples": shifted})


# --------------------------------------------------------------------------
# MBM
# --------------------------------------------------------------------------

def _changes(v: np.ndarray) -> np.ndarray:
    """Indices i of cyclic cells (i, i+1) whose endpoint values differ."""
    return np.nonzero(v != np.roll(v, -1))[0]


def find_jumps(P: IntBiPoly, cfg: MethodConfig = DEFAULT) -> JumpPartition:
    """Locate the jump points of t -> nu(e(t)) on [0, 1].

    Scans a grid of cfg.grid_n points (offset by an irrational phase), re-scans
    at double resolution and raises GridTooCoarse if the number of sign-change
    cells differs, then bisects every changing cell of the fine grid down to
    cfg.bisect_tol.
    """
    _check(P)
    n = cfg.grid_n
    fine_t = (np.arange(2 * n) / 2 + _SCAN_PHASE) / n
    fine_v = nu_many(P, fine_t, cfg)
    # the coarse grid is every other fine point
    coarse_v = fine_v[::2]
    c_coarse = _changes(coarse_v)
    c_fine = _changes(fine_v)
    if len(c_coarse) != len(c_fine):
        raise GridTooCoarse(
            f"{len(c_coarse)} jump cell(s) at grid_n={n} but {len(c_fine)} at {2 * n}")

    lo = fine_t[c_fine]
    hi = np.where(c_fine + 1 < 2 * n, fine_t[(c_fine + 1) % (2 * n)], fine_t[0] + 1.0)
    vlo = fine_v[c_fine]
    while lo.size and np.max(hi - lo) > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        vm = nu_many(P, mid % 1.0, cfg)
        same = vm == vlo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    jumps = np.sort((0.5 * (lo + hi)) % 1.0)
    jumps = jumps[(jumps > cfg.bisect_tol) & (jumps < 1 - cfg.bisect_tol)]
    angles = np.concatenate([[0.0], jumps, [1.0]])
    # collapse breakpoints found twice (bisections converging to one point)
    angles = angles[np.concatenate([[True], np.diff(angles) > 0])]
    if angles[-1] != 1.0:
        angles[-1] = 1.0
    values = interval_values(P, angles, cfg)
    return merge_partition(angles, values)


def lc_mbm(P: IntBiPoly, cfg: MethodConfig = DEFAULT, max_doublings: int = 0) -> LimitEstimate:
    """(2/g) * sum (t_i - t_{i-1}) nu_i over the jump partition.

    GridTooCoarse propagates unless ``max_doublings`` > 0, in which case the
    scan grid is doubled up to that many times before giving up.
    """
    for attempt in range(max_doublings + 1):
        try:
            part = find_jumps(P, cfg)
            break
        except GridTooCoarse:
            if attempt == max_doublings:
                raise
            log.info("lc_mbm: grid_n=%d too coarse, doubling", cfg.grid_n)
            cfg = cfg.with_(grid_n=2 * cfg.grid_n)
    return LimitEstimate(part.lc(P.deg_y), "mbm", not is_bi_reciprocal(P),
                         {"jumps": part.jumps.tolist(), "values": part.values.tolist(),
                          "grid_n": cfg.grid_n})


# --------------------------------------------------------------------------
# CAP
# --------------------------------------------------------------------------

@dataclass
class ContourCount:
    value: float
    imag: float
    r: float
    points: int
    zeros_inside: float


def _circle_values(coeffs: np.ndarray, N: int) -> np.ndarray:
    """sum_k coeffs[..., k] e(k j / N) for j < N along the last axis (folding k mod N)."""
    K = coeffs.shape[-1]
    if K > N:
        folded = np.zeros(coeffs.shape[:-1] + (N,), dtype=complex)
        for k in range(K):
            folded[..., k % N] += coeffs[..., k]
        coeffs = folded
    return np.fft.ifft(coeffs, n=N, axis=-1) * N


def _pow2(n: float) -> int:
    return 1 << max(int(math.ceil(math.log2(max(n, 2)))), 1)


def cap_count_uni(p: CPoly | IntPoly, r: float | None = None, cfg: MethodConfig = DEFAULT,
                  normalize: bool = True) -> ContourCount:
    """Argument-principle zero count of ``p`` inside |x| = r.

    With ``normalize`` the count is scaled by 2/d, which is C(p) for a
    reciprocal p when r separates the internal roots from the rest.  When r
    is omitted it is placed between the internal roots and the others.
    """
    if isinstance(p, IntPoly):
        p = p.to_cpoly()
    d = p.deg
    if d < 1:
        raise ValueError("need degree >= 1")
    c = p.coeffs
    m = find_roots(p, cfg).moduli
    if r is None:
        inner = m[m < 1 - cfg.tau]
        outer = m[m >= 1 - cfg.tau]
        hi = outer.min() if outer.size else 2.0
        lo = inner.max() if inner.size else 0.0
        r = math.sqrt(lo * hi) if lo > 0 else 0.5 * hi
    m = m[m > 0]
    # trapezoid error decays like (closest root ratio)^N
    gap = np.abs(np.log(m / r)).min() if m.size else 1.0
    N = _pow2(max(4 * (d + 1), 40.0 / max(gap, 1e-12)))
    N = min(N, 1 << 22)
    scaled = c * r ** np.arange(d + 1)
    vals = _circle_values(scaled, N)
    dvals = _circle_values(scaled * np.arange(d + 1), N)
    scale = np.abs(scaled).sum()
    if np.abs(vals).min() <= 1e-13 * scale:
        raise PoleNearContour(f"|p| nearly vanishes on |x| = {r}")
    z = (dvals / vals).mean()
    factor = 2.0 / d if normalize else 1.0
    return ContourCount(float(z.real * factor), float(z.imag), float(r), N, float(z.real))


def _inner_points(rho: float, g: int, cfg: MethodConfig) -> int:
    if cfg.cap_s_points:
        return cfg.cap_s_points
    # aliasing of a root on |y| = 1 decays like rho^N
    return _pow2(max(4 * (g + 1), 25.0 / -math.log(rho)))


def _cap_integrand(coeff_fn, g: int, cfg: MethodConfig, r: float, n: int):
    """Shared tensor trapezoidal driver.

    ``coeff_fn(x)`` returns the y-coefficients (..., g+1) of P(x, y) at x.
    Returns (mean of integrand, diagnostics).
    """
    rho = r ** n
    Nt = cfg.cap_t_points
    Ns = _inner_points(rho, g, cfg)
    t = (np.arange(Nt) + 0.5) / Nt
    powers = rho ** np.arange(g + 1)
    k = np.arange(g + 1)
    inner = np.empty(Nt, dtype=complex)
    inner_half = np.empty(Nt, dtype=complex)
    min_ratio = np.inf
    chunk = max(1, 4_000_000 // Ns)
    for s0 in range(0, Nt, chunk):
        x = r * np.exp(2j * np.pi * t[s0:s0 + chunk])
        c = coeff_fn(x) * powers
        V = _circle_values(c, Ns)
        W = _circle_values(c * k, Ns)
        scale = np.abs(c).sum(axis=1)
        min_ratio = min(min_ratio, float((np.abs(V).min(axis=1) / scale).min()))
        Q = W / V
        inner[s0:s0 + chunk] = Q.mean(axis=1)
        inner_half[s0:s0 + chunk] = Q[:, ::2].mean(axis=1)
    if min_ratio <= 1e-13:
        raise PoleNearContour(f"integrand denominator nearly vanishes (relative {min_ratio:.1e})")
    total = inner.mean()
    diag = {
        "r": r, "n": n, "rho": rho, "t_points": Nt, "s_points": Ns,
        "imag": float(total.imag),
        "delta_t": float(abs(inner[::2].mean().real - total.real)),
        "delta_s": float(abs(inner_half.mean().real - total.real)),
    }
    return total, diag


def lc_cap(P: IntBiPoly, cfg: MethodConfig = DEFAULT, r: float | None = None,
           n: int | None = None) -> LimitEstimate:
    """(2/g) Re of the double integral of P_y(x, y) y / P(x, y), x = r e(t), y = r^n e(s)."""
    _check(P)
    r = cfg.cap_r if r is None else r
    n = cfg.cap_n if n is None else n
    g = P.deg_y
    total, diag = _cap_integrand(P.y_coeffs_at, g, cfg, r, n)
    value = 2.0 / g * total.real
    diag["delta_t"] *= 2.0 / g
    diag["delta_s"] *= 2.0 / g
    if max(diag["delta_t"], diag["delta_s"]) > cfg.cap_quad_tol:
        raise QuadratureNonconvergent(
            f"CAP refinement deltas {diag['delta_t']:.2e} / {diag['delta_s']:.2e}")
    return LimitEstimate(float(value), "cap", not is_bi_reciprocal(P), diag)


CAP_SCHEDULE = ((0.9999, 150), (0.99999, 300))


def lc_cap_auto(P: IntBiPoly, cfg: MethodConfig = DEFAULT) -> LimitEstimate:
    """CAP at both (r, n) pairs of CAP_SCHEDULE; their difference is the error estimate."""
    runs = [lc_cap(P, cfg, r, n) for r, n in CAP_SCHEDULE]
    est = runs[-1]
    est.diagnostics["schedule"] = [(r, n, e.value) for (r, n), e in zip(CAP_SCHEDULE, runs)]
    est.diagnostics["error_estimate"] = abs(runs[-1].value - runs[0].value)
    return est


def _geom(z, lo, hi):
    """sum_{j=lo}^{hi} z^j in closed form."""
    return (z ** (hi + 1) - z ** lo) / (z - 1)


def _geom_deriv(z, lo, hi):
    """sum_{j=lo}^{hi} j z^(j-1) in closed form."""
    num = (hi + 1) * z ** hi - lo * z ** (lo - 1) if lo else (hi + 1) * z ** hi
    return num / (z - 1) - (z ** (hi + 1) - z ** lo) / (z - 1) ** 2


def lc_cap_family(k: int, m: int, which: str = "direct", cfg: MethodConfig = DEFAULT,
                  r: float | None = None, n: int | None = None) -> LimitEstimate:
    """CAP for P_{k,m} ("direct") or its inversion ("inverted") from the explicit sum formulas.

    direct:   (2/2)        * double integral of Py(k,m; r e(t), rho e(s)) rho e(s) / P(...)
    inverted: (2/(2k+m-3)) * double integral of Px(k,m; rho e(s), r e(t)) rho e(s) / P(...)

    Shares the quadrature grid of lc_cap, so the two agree to rounding.
    """
    if k < 1 or m < 1:
        raise ValueError("k, m must be >= 1")
    if which not in ("direct", "inverted"):
        raise ValueError("which must be 'direct' or 'inverted'")
    r = cfg.cap_r if r is None else r
    n = cfg.cap_n if n is None else n
    rho = r ** n
    a0, a1, a2 = (0, k - 1), (k - 1, k + m - 2), (k + m - 2, 2 * k + m - 3)
    g = 2 if which == "direct" else 2 * k + m - 3
    if g < 1:
        raise ValueError("inverted polynomial is constant in y")
    Nt = cfg.cap_t_points
    Ns = _inner_points(rho, g, cfg)
    t = (np.arange(Nt) + 0.5) / Nt
    s = np.arange(Ns) / Ns
    w_s = rho * np.exp(2j * np.pi * s)
    acc = 0j
    chunk = max(1, 4_000_000 // Ns)
    for s0 in range(0, Nt, chunk):
        u = r * np.exp(2j * np.pi * t[s0:s0 + chunk])[:, None]
        if which == "direct":
            X, Y = u, w_s[None, :]
            num = (_geom(X, *a1) + 2 * Y * _geom(X, *a2)) * Y
        else:
            X, Y = w_s[None, :], u
            num = (_geom_deriv(X, *a0) + Y * _geom_deriv(X, *a1)
                   + Y * Y * _geom_deriv(X, *a2)) * X
        den = _geom(X, *a0) + Y * _geom(X, *a1) + Y * Y * _geom(X, *a2)
        acc += (num / den).mean(axis=1).sum()
    total = acc / Nt
    value = 2.0 / g * total.real
    return LimitEstimate(float(value), "cap-family", False,
                         {"k": k, "m": m, "which": which, "r": r, "n": n,
                          "t_points": Nt, "s_points": Ns, "imag": float(total.imag)})
