"""Hypothesis and registry-wide invariants."""
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from unimodular.config import DEFAULT
from unimodular.errors import DegenerateLeading, DiscTooCostly
from unimodular.exact_lc import lc_exact
from unimodular.families import registry
from unimodular.limit_methods import lc_bm, lc_mbm
from unimodular.measures import c_ratio, mahler_uni, nu_many
from unimodular.polycore import (
    CPoly, IntBiPoly, IntPoly, disc_y, invert, is_bi_reciprocal, substitute_y_xn,
)
from unimodular.rootfinder import census, classify, find_roots

SETTINGS = settings(deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)

small = st.integers(-5, 5)


def int_poly(max_deg=6, min_deg=0):
    return st.lists(small, min_size=min_deg + 1, max_size=max_deg + 1).map(IntPoly).filter(
        lambda p: p.deg >= min_deg)


@st.composite
def bi_poly(draw, max_dx=4, max_dy=3):
    dx = draw(st.integers(0, max_dx))
    dy = draw(st.integers(1, max_dy))
    rows = draw(st.lists(st.lists(small, min_size=dy + 1, max_size=dy + 1),
                         min_size=dx + 1, max_size=dx + 1))
    P = IntBiPoly(tuple(tuple(r) for r in rows))
    assume(P.deg_y >= 1)
    return P


@st.composite
def separated_roots(draw, max_deg=6):
    """Roots bounded away from the band and from each other, some exactly unimodular."""
    k = draw(st.integers(1, max_deg))
    out = []
    for _ in range(k):
        where = draw(st.sampled_from(["in", "on", "out"]))
        theta = draw(st.floats(0, 2 * math.pi, allow_nan=False))
        if where == "on":
            r = 1.0
        elif where == "in":
            r = draw(st.floats(0.2, 0.9))
        else:
            r = draw(st.floats(1.1, 3.0))
        out.append(r * complex(math.cos(theta), math.sin(theta)))
    return out


def _min_gap(roots):
    z = np.asarray(roots)
    if len(z) < 2:
        return np.inf
    d = np.abs(z[:, None] - z[None, :])
    return d[~np.eye(len(z), dtype=bool)].min()


# ------------------------------------------------------------------ rootfinder

@settings(SETTINGS, max_examples=200)
@given(int_poly(max_deg=12, min_deg=1))
def test_census_partitions_degree(p):
    c = census(p.to_cpoly())
    assert c.I + c.U + c.O == c.d == p.deg


@settings(SETTINGS, max_examples=100)
@given(separated_roots(), separated_roots())
def test_census_additive(ra, rb):
    assume(_min_gap(ra + rb) > 0.05)
    p, q = CPoly.from_roots(ra), CPoly.from_roots(rb)
    pq = CPoly(np.convolve(p.coeffs, q.coeffs))
    assert census(pq) == census(p) + census(q)


@settings(SETTINGS, max_examples=60)
@given(separated_roots(max_deg=5))
def test_reciprocal_census_symmetric(roots):
    # close the root set under z -> 1/conj(z) so the polynomial is self-inversive
    full = roots + [1 / np.conj(z) for z in roots if abs(abs(z) - 1) > 0.5e-2]
    assume(_min_gap(full) > 0.05)
    c = census(CPoly.from_roots(full))
    assert c.I == c.O


@settings(SETTINGS, max_examples=60)
@given(separated_roots(max_deg=8), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_roots_invariant_under_scaling(roots, c):
    assume(_min_gap(roots) > 0.05)
    p = CPoly.from_roots(roots)
    a = np.sort_complex(find_roots(p).roots)
    b = np.sort_complex(find_roots(CPoly(c * p.coeffs)).roots)
    assert np.max(np.abs(a - b)) < 1e-10


# ------------------------------------------------------------------ polycore

@settings(SETTINGS, max_examples=100)
@given(int_poly(3), int_poly(3), int_poly(3))
def test_disc_quadratic_oracle(c0, c1, c2):
    assume(not c2.is_zero())
    P = IntBiPoly.from_rows_in_y([c0.coeffs, c1.coeffs, c2.coeffs])
    assert disc_y(P) == c1 * c1 - IntPoly((4,)) * c2 * c0


@SETTINGS
@given(bi_poly())
def test_invert_involution(P):
    assert invert(invert(P)) == P


def test_invert_involution_registry():
    for row in registry():
        P = row.poly()
        assert invert(invert(P)) == P, row.row_id


@SETTINGS
@given(bi_poly(), st.integers(1, 12))
def test_substitution_degree(P, extra):
    n = P.deg_x + extra
    g = P.deg_y
    assert substitute_y_xn(P, n).deg == P.y_coeff(g).deg + n * g


@SETTINGS
@given(bi_poly(), st.integers(1, 9), st.floats(0, 2 * math.pi), st.floats(0.5, 1.5))
def test_substitution_evaluation(P, n, theta, r):
    x = r * complex(math.cos(theta), math.sin(theta))
    lhs = complex(substitute_y_xn(P, n)(x))
    rhs = complex(P(x, x ** n))
    scale = sum(abs(c) * r ** (j + n * k) for (j, k), c in P.terms().items())
    assert abs(lhs - rhs) <= 1e-10 * max(scale, 1e-300)


def test_reciprocal_members_substitute_to_palindromes():
    for row in registry():
        for inv in (False, True):
            P = row.poly(inv)
            if not is_bi_reciprocal(P):
                continue
            for n in (len(P.coeffs), len(P.coeffs) + 7):
                c = substitute_y_xn(P, n).coeffs
                assert c == c[::-1] or c == tuple(-v for v in c[::-1]), (row.row_id, inv, n)


# ------------------------------------------------------------------ measures

@SETTINGS
@given(int_poly(8, min_deg=1))
def test_mahler_at_least_leading(p):
    assume(p.coeffs[0] != 0)
    assert mahler_uni(p) >= abs(p.coeffs[-1]) * (1 - 1e-12)


@SETTINGS
@given(separated_roots(max_deg=5))
def test_c_ratio_reciprocal(roots):
    full = roots + [1 / np.conj(z) for z in roots if abs(abs(z) - 1) > 0.5e-2]
    assume(_min_gap(full) > 0.05)
    p = CPoly.from_roots(full)
    c = classify(find_roots(p))
    assert 0 <= c_ratio(p) <= 1
    assert c_ratio(p) == pytest.approx(2 * c.O / c.d, abs=1e-15)


@SETTINGS
@given(bi_poly(), st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=8))
def test_nu_range(P, ts):
    try:
        v = nu_many(P, ts)
    except DegenerateLeading:
        assume(False)
    assert np.all((v >= 0) & (v <= P.deg_y))


# ------------------------------------------------------------------ limit methods

def _moderate(P):
    return P.deg_y <= 4 and P.deg_x + P.deg_y <= 20


def test_bm_within_jump_bound():
    # midpoint sampling misplaces each jump by at most half a cell
    N = DEFAULT.quad_points
    checked = 0
    for row in registry():
        for inv in (False, True):
            P = row.poly(inv)
            if not _moderate(P):
                continue
            ref = lc_mbm(P, max_doublings=3)
            total_jump = np.abs(np.diff(ref.diagnostics["values"])).sum()
            bound = total_jump / (P.deg_y * N)
            err = abs(lc_bm(P).value - ref.value)
            assert err <= bound + 1e-12, (row.row_id, inv, err, bound)
            checked += 1
    assert checked > 20


def test_partition_symmetry_exact_route():
    checked = 0
    for row in registry():
        for inv in (False, True):
            try:
                res = lc_exact(row.poly(inv))
            except DiscTooCostly:
                continue
            a = np.sort(res.jump_angles)
            np.testing.assert_allclose(a, np.sort(1 - a), atol=1e-12, err_msg=f"row {row.row_id} {inv}")
            checked += 1
    assert checked >= 80
