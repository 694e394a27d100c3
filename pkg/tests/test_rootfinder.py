import mpmath
import numpy as np
import pytest

from unimodular.config import DEFAULT
from unimodular.errors import NoConvergence
from unimodular.families import FamilySpec, make, registry
from unimodular.polycore import CPoly, IntPoly, invert, substitute_y_xn
from unimodular.rootfinder import Census, aberth_batch, census, classify, find_roots

LEHMER = IntPoly((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))


def sorted_roots(z):
    z = np.asarray(z)
    return z[np.lexsort((np.round(z.imag, 8), np.round(z.real, 8)))]


def test_quadratic():
    rs = find_roots(CPoly(np.array([-4, 0, 1], complex)))
    np.testing.assert_allclose(sorted_roots(rs.roots), [-2, 2], atol=1e-13)


def test_zero_root_deflated():
    rs = find_roots(CPoly(np.array([0, -1, 0, 1], complex)))
    assert rs.deflated == 1
    np.testing.assert_allclose(sorted_roots(rs.roots), [-1, 0, 1], atol=1e-13)


def test_lehmer_against_mpmath():
    rs = find_roots(LEHMER.to_cpoly())
    ref = np.array([complex(r) for r in mpmath.polyroots(list(reversed(LEHMER.coeffs)), extraprec=50)])
    np.testing.assert_allclose(np.sort(np.abs(rs.roots)), np.sort(np.abs(ref)), atol=1e-12)
    out = rs.roots[np.abs(rs.roots) > 1 + 1e-9]
    assert len(out) == 1
    assert abs(out[0] - 1.17628081825991750654) < 1e-12


def test_lehmer_census():
    c = census(LEHMER.to_cpoly())
    assert (c.I, c.U, c.O, c.d) == (1, 8, 1, 10)


def test_classify_band():
    c = classify(np.array([0.5, 2.0]), 1e-9)
    assert (c.I, c.U, c.O) == (1, 0, 1)
    c = classify(np.array([1 + 1e-10, 1 - 1e-3]), 1e-9)
    assert (c.I, c.U, c.O) == (1, 1, 0)
    with pytest.raises(ValueError):
        classify(np.array([1.0]), 0.7)


def test_census_sum_and_ratio():
    a = Census(1, 2, 1, 4, 1e-9)
    b = Census(0, 1, 0, 1, 1e-9)
    assert (a + b) == Census(1, 3, 1, 5, 1e-9)
    assert a.C == 0.5
    assert Census(0, 0, 0, 0, 1e-9).C == 0.0


def test_p23_inverse_at_60():
    p = substitute_y_xn(invert(make(FamilySpec("P", (2, 3)))), 60)
    c = census(p.to_cpoly())
    assert (c.I, c.O, c.d) == (28, 28, 242)


def test_batch_matches_single():
    rng = np.random.default_rng(3)
    c = rng.normal(size=(6, 9)) + 1j * rng.normal(size=(6, 9))
    roots, res, _ = aberth_batch(c)
    for row, z in zip(c, roots):
        p = CPoly(row)
        assert np.max(np.abs(p(z)) / np.sum(np.abs(row))) < 1e-12
    assert res.max() < 1e-13


def test_no_convergence_reported():
    # a single iteration is not enough for degree 30
    c = np.ones((1, 31), complex)
    with pytest.raises(NoConvergence):
        aberth_batch(c, max_iter=1)
    roots, _, _ = aberth_batch(c, max_iter=1, raise_on_fail=False)
    assert roots.shape == (1, 30)


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        find_roots(CPoly(np.array([3.0], complex)))


def test_residual_bound_on_family_substitutions():
    for row in registry()[:20]:
        P = row.poly(True)
        n = max(1, (400 - P.leading_y.deg) // P.deg_y)
        p = substitute_y_xn(P, n)
        rs = find_roots(p.to_cpoly(), DEFAULT)
        assert rs.residuals.max() <= 1e-8 * (1 + max(abs(v) for v in p.coeffs)), row.row_id


def test_scaling_invariance():
    p = CPoly(np.array([2, -1, 0.5, 3, 1], complex))
    q = CPoly(p.coeffs * (0.3 - 2.1j))
    np.testing.assert_allclose(sorted_roots(find_roots(p).roots), sorted_roots(find_roots(q).roots),
                               atol=1e-10)
