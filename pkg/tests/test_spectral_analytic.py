import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.integrate import quad

from shapedspectra.bivariate import BivariatePoly
from shapedspectra.partitions import self_conjugate_from_heights
from shapedspectra.enumeration import count_recurrence, moment_sequence
from shapedspectra.powerseries import (TruncatedSeries, cauchy_to_r,
                                       moments_to_cauchy)
from shapedspectra.spectral_analytic import (
    DegreeGuardError, NonConvergenceError, block_series_system,
    counting_series, density_closed_form, density_root_track, eliminate,
    fat_hook_cubic, fat_hook_density, fat_hook_r_eval, fat_hook_r_series,
    fat_hook_support, stieltjes_density)


def test_block_system_single_block_satisfies_quadratic():
    _, m = block_series_system((1,), 12)
    resid = m * m - m + TruncatedSeries.identity(12)
    assert resid.is_zero()


def test_block_system_matches_tree_counts():
    for heights in [(2, 1), (1, 1), (1, 2, 1)]:
        p = self_conjugate_from_heights(heights)
        counts = count_recurrence(p, 7).counts
        _, m = block_series_system(heights, 8)
        assert tuple(m.coeffs[1:]) == tuple(F(c) for c in counts)
        assert m.coeffs[0] == 0


def test_block_system_individual_equations():
    hs, m = block_series_system((2, 1), 10)
    z = TruncatedSeries.identity(10)
    assert (hs[0] - z - hs[0] * (2 * hs[0] + hs[1])).is_zero()
    assert (hs[1] - z - hs[1] * (2 * hs[0])).is_zero()


def test_eliminate_single_block():
    p, lpoly = eliminate((1,))
    assert p == BivariatePoly({(2, 0): 1, (1, 0): -1, (0, 1): 1})
    assert lpoly == BivariatePoly({(2, 1): 1, (1, 1): -1, (0, 0): 1})


def test_eliminate_frozen_two_block():
    _, lpoly = eliminate((1, 1))
    assert lpoly == BivariatePoly({(3, 2): 8, (2, 2): -8, (1, 1): 4,
                                   (1, 2): 2, (0, 0): 1, (0, 1): -2})


def test_eliminate_matches_fat_hook_cubic():
    rng = np.random.default_rng(7)
    pairs = {(int(a1), int(a2)) for a1, a2 in rng.integers(1, 6, size=(10, 2))}
    for a1, a2 in sorted(pairs):
        _, lpoly = eliminate((a1, a2))
        assert lpoly == fat_hook_cubic(a1, a2), (a1, a2)


def test_fat_hook_cubic_spot_coefficients():
    lpoly = fat_hook_cubic(2, 1)
    assert lpoly.terms[(3, 2)] == 27
    assert lpoly.terms[(0, 0)] == 4 and lpoly.terms[(0, 1)] == -3


@pytest.mark.parametrize("heights", [
    (1,), (3,), (1, 1), (2, 1), (1, 3), (1, 1, 1), (2, 1, 2), (1, 2, 1),
    (1, 1, 1, 1), (2, 1, 1, 2)])
def test_eliminate_degrees_and_residual(heights):
    r = len(heights)
    p, lpoly = eliminate(heights)
    assert p.degree_g() == r + 1 and p.degree_z() == r
    assert lpoly.degree_g() == r + 1 and lpoly.degree_z() <= r
    m = counting_series(heights, 16)
    assert p.eval_series(m, 16).is_zero()


def test_eliminate_guards_block_count():
    with pytest.raises(DegreeGuardError):
        eliminate((1,) * 7)


def _r_equation_residual(lpoly, r_series):
    """Substitute the series variable for G and R + 1/z for z in the
    annihilating polynomial, cleared of inverse powers."""
    n = r_series.order
    zr1 = (r_series.shift_up() + 1).truncate(n + 1)
    deg_z = lpoly.degree_z()
    total = TruncatedSeries.zero(n + 1)
    for (i, j), c in lpoly.terms.items():
        term = TruncatedSeries.from_coeffs([1], n + 1)
        for _ in range(j):
            term = term * zr1
        term = term.shift_up(i + deg_z - j).truncate(n + 1)
        total = total + c * term
    return total


@pytest.mark.parametrize("heights", [(1,), (1, 1), (2, 1), (1, 2, 1)])
def test_r_transform_satisfies_eliminated_equation(heights):
    p = self_conjugate_from_heights(heights)
    _, lpoly = eliminate(heights)
    g = moments_to_cauchy(moment_sequence(p, 16), 16)
    r = cauchy_to_r(g)
    assert _r_equation_residual(lpoly, r).is_zero()


def test_fat_hook_r_series_matches_moments():
    for (a1, a2) in [(1, 1), (2, 1), (1, 3)]:
        p = self_conjugate_from_heights((a1, a2))
        r_mom = cauchy_to_r(moments_to_cauchy(moment_sequence(p, 16), 16))
        r_closed = fat_hook_r_series(a1, a2, 12)
        assert r_mom.truncate(12) == r_closed


def test_fat_hook_r_equal_heights_simplifies():
    # with equal heights the square root factor collapses to one geometric term
    r = fat_hook_r_series(3, 3, 10)
    ell = 6
    geom = TruncatedSeries.from_coeffs([1, -ell], 11).reciprocal()
    part = (geom.sqrt() - 1).shift_down() / 2
    assert r == (3 * geom).truncate(10) + part


def test_fat_hook_r_quadratic_identity():
    # l z (1-l z)^2 R^2 + l (1-l z)(1-(2 a1+l) z) R - a1 (2l - a1 - 2 l^2 z) = 0
    for (a1, a2) in [(1, 1), (2, 1), (1, 3)]:
        ell = a1 + a2
        n = 12
        r = fat_hook_r_series(a1, a2, n)
        az = TruncatedSeries.from_coeffs(
            [0, ell, -2 * ell ** 2, ell ** 3], n)
        bz = TruncatedSeries.from_coeffs(
            [ell, -ell * (2 * a1 + 2 * ell), ell ** 2 * (2 * a1 + ell)], n)
        cz = TruncatedSeries.from_coeffs(
            [-a1 * (2 * ell - a1), 2 * a1 * ell ** 2], n)
        assert (az * r * r + bz * r + cz).is_zero()


def test_fat_hook_r_eval():
    assert fat_hook_r_eval(2, 1, 0) == pytest.approx(8 / 3)
    series = fat_hook_r_series(2, 1, 20)
    z = 0.01
    partial = sum(float(c) * z ** k for k, c in enumerate(series.coeffs))
    assert fat_hook_r_eval(2, 1, z).real == pytest.approx(partial, abs=1e-12)
    with pytest.raises(ZeroDivisionError):
        fat_hook_r_eval(2, 1, 1 / 3)


def test_fat_hook_support_frozen():
    s = fat_hook_support(1, 1)
    assert s.z_minus == pytest.approx(0.0, abs=1e-12)
    assert s.z_plus == pytest.approx(27 / 4)
    assert s.atom_mass == 0
    s = fat_hook_support(1, 2)
    assert s.atom_mass == F(1, 3)
    assert s.z_minus == pytest.approx((71 - 17 * math.sqrt(17)) / 16)
    assert s.z_plus == pytest.approx((71 + 17 * math.sqrt(17)) / 16)
    assert fat_hook_support(4, 1).atom_mass == 0


def test_fat_hook_gap_iff_taller_second_block():
    for a1 in range(1, 5):
        for a2 in range(1, 5):
            s = fat_hook_support(a1, a2)
            assert (s.z_minus > 1e-9) == (a1 < a2)


def test_discriminant_identity_exact():
    # discriminant of the cubic in G equals the closed quadratic-factor form
    for (a1, a2) in [(1, 1), (2, 1), (1, 4), (3, 2)]:
        ell = a1 + a2
        za = BivariatePoly({(0, 2): ell ** 3})
        zb = BivariatePoly({(0, 1): (a1 - a2) * ell ** 2, (0, 2): -2 * ell ** 2})
        zc = BivariatePoly({(0, 1): 2 * a2 * ell, (0, 2): ell})
        zd = BivariatePoly({(0, 0): a1 ** 2, (0, 1): -ell})
        disc = (18 * za * zb * zc * zd - 4 * zb * zb * zb * zd
                + zb * zb * zc * zc - 4 * za * zc * zc * zc
                - 27 * za * za * zd * zd)
        expected = BivariatePoly({(0, 3): 1}) * BivariatePoly({
            (0, 2): 4 * a2,
            (0, 1): a1 ** 2 - 20 * a1 * a2 - 8 * a2 ** 2,
            (0, 0): -4 * (a1 - a2) ** 3,
        }) * (ell ** 6 * a1 ** 2)
        assert disc == expected


@pytest.mark.parametrize("a1,a2", [(1, 1), (4, 1), (1, 4)])
def test_density_routes_agree(a1, a2):
    s = fat_hook_support(a1, a2)
    lo, hi = s.support
    for x in np.linspace(lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo), 25):
        fat_hook_density(a1, a2, float(x), cross_check=True)


def support_integral(fn, lo, hi):
    """Integrate over the support with x = lo + (hi-lo) t^4, which
    flattens the algebraic blow-up the density can have at its lower
    edge (up to x^(-3/4), covering shapes with at most four blocks)."""
    span = hi - lo

    def g(t):
        x = lo + span * t ** 4
        return fn(x) * span * 4 * t ** 3

    return quad(g, 0.0, 1.0, limit=200, epsabs=1e-9, epsrel=1e-9)[0]


@pytest.mark.parametrize("a1,a2", [(1, 1), (4, 1), (1, 4)])
def test_density_mass_and_mean(a1, a2):
    s = fat_hook_support(a1, a2)
    lo, hi = s.support
    mass = support_integral(lambda x: fat_hook_density(a1, a2, x), lo, hi)
    mean = support_integral(lambda x: x * fat_hook_density(a1, a2, x), lo, hi)
    ell = a1 + a2
    assert mass == pytest.approx(1 - float(s.atom_mass), abs=1e-6)
    assert mean == pytest.approx((a1 * a1 + 2 * a1 * a2) / ell, abs=1e-6)


def test_density_vanishes_at_edges_and_outside():
    s = fat_hook_support(2, 3)
    lo, hi = s.support
    width = hi - lo
    assert fat_hook_density(2, 3, lo - 0.1) == 0.0
    assert fat_hook_density(2, 3, hi + 0.1) == 0.0
    assert fat_hook_density(2, 3, 0.0) == 0.0
    # soft edges: the density tends to zero approaching the endpoints
    assert fat_hook_density(2, 3, lo + 1e-9 * width) < 1e-2
    assert fat_hook_density(2, 3, hi - 1e-9 * width) < 1e-2


def test_closed_form_equals_root_route_everywhere_sampled():
    rng = np.random.default_rng(3)
    for a1, a2 in [(2, 2), (3, 1), (2, 5)]:
        s = fat_hook_support(a1, a2)
        lo, hi = s.support
        for u in rng.random(8):
            x = lo + (0.02 + 0.96 * u) * (hi - lo)
            va = density_closed_form(a1, a2, x)
            vb = density_root_track(a1, a2, x)
            assert va == pytest.approx(vb, rel=1e-9, abs=1e-12)


def test_stieltjes_matches_marchenko_pastur():
    for x in np.linspace(0.15, 3.85, 16):
        exact = math.sqrt(x * (4 - x)) / (2 * math.pi * x)
        assert stieltjes_density((1,), float(x)) == pytest.approx(
            exact, abs=1e-4)


def test_stieltjes_matches_fat_hook_closed_form():
    hi = 27 / 4
    for x in np.linspace(0.1, hi - 0.1, 50):
        est = stieltjes_density((1, 1), float(x))
        assert est == pytest.approx(fat_hook_density(1, 1, float(x)),
                                    abs=1e-4)


def test_stieltjes_input_validation():
    with pytest.raises(ValueError):
        stieltjes_density((1, 1), -1.0)
    with pytest.raises(ValueError):
        stieltjes_density((1, 1), 1.0, eps_ladder=(0.0,))
    with pytest.raises(ValueError):
        stieltjes_density((0, 1), 1.0)
