"""Mahler measure (one and two variables), S-measure, the ratio C(P) and fiber counts."""
from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT, MethodConfig
from .errors import DegenerateLeading, QuadratureNonconvergent
from .polycore import CPoly, IntBiPoly, IntPoly, invert, specialize_x, substitute_y_xn
from .rootfinder import aberth_batch, classify, find_roots

__all__ = [
    "MethodConfig", "mahler_uni", "mahler_bi", "s_measure", "c_ratio", "nu",
    "nu_many", "boyd_lawton_trace", "torus_values",
]


def _as_cpoly(p) -> CPoly:
    return p.to_cpoly() if isinstance(p, IntPoly) else p


def mahler_uni(p: CPoly | IntPoly, cfg: MethodConfig = DEFAULT) -> float:
    """|a_d| * prod max(1, |root|)."""
    if isinstance(p, IntPoly):
        scale = abs(p.coeffs[-1])
        p = p.to_cpoly()
    else:
        scale = abs(p.coeffs[-1])
    rs = find_roots(p, cfg)
    return float(scale * math.exp(np.log(np.maximum(rs.moduli, 1.0)).sum()))


def torus_values(P: IntBiPoly, N: int) -> np.ndarray:
    """P at the N x N midpoint grid (e((j+1/2)/N), e((k+1/2)/N)) via a 2-D FFT."""
    c = P.matrix
    a = np.arange(c.shape[0])
    b = np.arange(c.shape[1])
    shifted = c * np.exp(1j * np.pi * a / N)[:, None] * np.exp(1j * np.pi * b / N)[None, :]
    F = np.zeros((N, N), dtype=complex)
    np.add.at(F, (a[:, None] % N, b[None, :] % N), shifted)
    return np.fft.ifft2(F) * (N * N)


def _log_mean(P: IntBiPoly, N: int) -> float:
    v = np.abs(torus_values(P, N))
    if not np.all(v > 0):
        raise QuadratureNonconvergent(f"grid point on the zero set at N={N}")
    return float(np.log(v).mean())


def _jensen_mean(P: IntBiPoly, N: int, cfg: MethodConfig) -> float:
    """Midpoint average over t of log M(P(e(t), y)), each fiber measure by Jensen's formula."""
    t = (np.arange(N) + 0.5) / N
    c = P.y_coeffs_at(np.exp(2j * np.pi * t))
    lead = np.abs(c[:, -1])
    if lead.min() <= cfg.degenerate_floor:
        raise QuadratureNonconvergent(f"sample on a zero of the leading coefficient at N={N}")
    acc = np.log(lead)
    if P.deg_y >= 1:
        step = max(1, 2_000_000 // max(P.deg_y ** 2, 1))
        for s in range(0, N, step):
            roots, _, _ = aberth_batch(c[s:s + step], cfg.root_tol, cfg.max_iter)
            acc[s:s + step] += np.log(np.maximum(np.abs(roots), 1.0)).sum(axis=1)
    return float(acc.mean())


def mahler_bi(P: IntBiPoly, cfg: MethodConfig = DEFAULT, method: str = "jensen") -> float:
    """Bivariate Mahler measure, exp of the torus average of log|P|.

    ``jensen`` (default): the inner integral is done exactly from the fiber
    roots, log M(P(x, .)) = log|a_g(x)| + sum log max(1, |y_k(x)|), and the
    outer one by the midpoint rule on cfg.mahler_points samples, fibering
    over whichever variable leaves the lower degree.  ``grid``: plain
    midpoint rule on a cfg.mahler_grid square grid.  Either way the run at half
    resolution must agree to within 10 * cfg.mahler_tol.
    """
    if P.is_zero():
        raise ValueError("zero polynomial")
    if method == "jensen":
        Q = invert(P) if P.deg_x < P.deg_y else P
        N = cfg.mahler_points
        fine = math.exp(_jensen_mean(Q, N, cfg))
        coarse = math.exp(_jensen_mean(Q, max(N // 2, 2), cfg))
    elif method == "grid":
        N = cfg.mahler_grid
        fine = math.exp(_log_mean(P, N))
        coarse = math.exp(_log_mean(P, max(N // 2, 2)))
    else:
        raise ValueError(f"unknown method {method!r}")
    if abs(fine - coarse) > 10 * cfg.mahler_tol:
        raise QuadratureNonconvergent(
            f"Mahler measure refinements differ by {abs(fine - coarse):.2e} ({method}, N={N})")
    return fine


def s_measure(p: CPoly | IntPoly, cfg: MethodConfig = DEFAULT) -> float:
    """Average modulus of the roots."""
    rs = find_roots(_as_cpoly(p), cfg)
    return float(rs.moduli.mean())


def c_ratio(p: CPoly | IntPoly, cfg: MethodConfig = DEFAULT) -> float:
    """(I + O) / d."""
    return classify(find_roots(_as_cpoly(p), cfg), cfg.tau).C


def nu(P: IntBiPoly, x0: complex, cfg: MethodConfig = DEFAULT) -> int:
    """Number of roots y of P(x0, y) with |y| > 1 + tau."""
    q = specialize_x(P, x0, cfg.degenerate_floor)
    if q.deg < 1:
        return 0
    rs = find_roots(q, cfg)
    return int(np.count_nonzero(rs.moduli > 1 + cfg.tau))


def nu_many(P: IntBiPoly, t, cfg: MethodConfig = DEFAULT) -> np.ndarray:
    """nu(e(t)) for an array of angles t (in turns); vectorized over t.

    Raises DegenerateLeading if any sample has a vanishing leading coefficient.
    """
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    x = np.exp(2j * np.pi * flat)
    c = P.y_coeffs_at(x)
    lead = np.abs(c[:, -1])
    if flat.size and lead.min() <= cfg.degenerate_floor:
        i = int(lead.argmin())
        raise DegenerateLeading(x[i], c[i, -1])
    if P.deg_y < 1:
        return np.zeros(t.shape, dtype=int)
    out = np.empty(flat.size, dtype=int)
    # chunk so the pairwise difference tensor stays small
    step = max(1, 2_000_000 // max(P.deg_y ** 2, 1))
    for s in range(0, flat.size, step):
        roots, _, _ = aberth_batch(c[s:s + step], cfg.root_tol, cfg.max_iter)
        out[s:s + step] = np.count_nonzero(np.abs(roots) > 1 + cfg.tau, axis=1)
    return out.reshape(t.shape)


def boyd_lawton_trace(P: IntBiPoly, n_list, cfg: MethodConfig = DEFAULT) -> list[tuple[int, float]]:
    """[(n, M(P(x, x^n))) for n in n_list]."""
    out = []
    for n in n_list:
        if n < 1:
            raise ValueError("n must be >= 1")
        out.append((int(n), mahler_uni(substitute_y_xn(P, int(n)), cfg)))
    return out
