"""Algebraic equations and densities of the limiting spectral measures.

The counting series of the trees in :mod:`shapedspectra.enumeration`
satisfies a small polynomial system with one unknown per block of the
diagram.  Eliminating the unknowns exactly yields a bivariate polynomial
annihilating the Cauchy transform; for two-block shapes everything is
explicit (cubic equation, R-transform, support, atom, density), and for
general shapes the density is recovered numerically by Newton
continuation and Stieltjes inversion.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
import cmath
import math

import numpy as np

from .bivariate import BivariatePoly
from .powerseries import TruncatedSeries

MAX_BLOCKS = 6


class DegreeGuardError(ValueError):
    """Exact elimination refused: too many blocks."""


class NonConvergenceError(RuntimeError):
    """Newton or branch continuation failed; carries the last residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _check_heights(heights):
    a = tuple(int(x) for x in heights)
    if not a or any(x < 1 for x in a):
        raise ValueError("heights must be a nonempty positive integer vector")
    return a


# ---------------------------------------------------------------------------
# the block generating-function system
# ---------------------------------------------------------------------------

def block_series_system(heights, order):
    """Unique power-series solution of the block system, plus its total.

    The j-th unknown satisfies ``H_j = z + H_j * (a_1 H_1 + ... +
    a_{r-j+1} H_{r-j+1})`` and starts as z + O(z^2); the weighted total
    ``sum a_j H_j`` is the generating function of the tree counts with a
    z^{k+1} offset.

    Returns (list of the r block series, total series), all exact.
    """
    a = _check_heights(heights)
    r = len(a)
    h = [[Fraction(0)] * (order + 1) for _ in range(r)]
    for j in range(r):
        if order >= 1:
            h[j][1] = Fraction(1)
    for n in range(2, order + 1):
        # t[j][q] = sum_{i <= r-j} a_i h_i[q], used at q < n only
        for j in range(r):
            acc = Fraction(0)
            for p in range(1, n):
                q = n - p
                t = sum(a[i] * h[i][q] for i in range(r - j))
                acc += h[j][p] * t
            h[j][n] = acc
    series = [TruncatedSeries(row) for row in h]
    total = TruncatedSeries.zero(order)
    for j in range(r):
        total = total + a[j] * series[j]
    return series, total


def counting_series(heights, order):
    """The weighted total alone; coefficient of z^{k+1} is the tree count."""
    return block_series_system(heights, order)[1]


# ---------------------------------------------------------------------------
# exact elimination
# ---------------------------------------------------------------------------

def _normalize_with_scalar(p):
    n = p.normalized()
    lk = n.leading_key()
    return p.terms[lk] / n.terms[lk], n


def _split_factors(poly, registry):
    """Write poly as scalar * product of registered factors.

    New irreducible-so-far remainders are appended to the registry, so
    shared denominators are recognised across elimination steps.
    """
    scalar, p = _normalize_with_scalar(poly)
    factors = []
    progress = True
    while progress and p.degree_g() + p.degree_z() > 0:
        progress = False
        for f in registry:
            q = p.exact_div(f)
            if q is not None and not q.is_zero():
                factors.append(f)
                s, p = _normalize_with_scalar(q)
                scalar *= s
                progress = True
                break
    if p.degree_g() + p.degree_z() > 0:
        registry.append(p)
        factors.append(p)
    else:
        scalar *= p.terms.get((0, 0), Fraction(1))
    return scalar, factors


def _poly_key(p):
    return tuple(sorted(p.terms.items()))


def _prod(polys):
    out = BivariatePoly.constant(1)
    for q in polys:
        out = out * q
    return out


class _RationalFn:
    """num / product(den); den holds normalised non-constant factors."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        self.num = num
        self.den = list(den)

    def reduced(self):
        num, den = self.num, []
        for f in self.den:
            q = num.exact_div(f)
            if q is not None and not num.is_zero():
                num = q
            else:
                den.append(f)
        return _RationalFn(num, den)


def _frac_sum(fracs):
    if not fracs:
        return _RationalFn(BivariatePoly.constant(0), [])
    keyed = {}
    counts = []
    for f in fracs:
        c = Counter()
        for d in f.den:
            k = _poly_key(d)
            keyed[k] = d
            c[k] += 1
        counts.append(c)
    common = Counter()
    for c in counts:
        for k, v in c.items():
            common[k] = max(common[k], v)
    num = BivariatePoly.constant(0)
    for f, c in zip(fracs, counts):
        extra = []
        for k, v in common.items():
            extra.extend([keyed[k]] * (v - c[k]))
        num = num + f.num * _prod(extra)
    den = []
    for k, v in common.items():
        den.extend([keyed[k]] * v)
    return _RationalFn(num, den).reduced()


def eliminate(heights, series_order=32):
    """Eliminate the block unknowns exactly.

    Follows the sequential substitution: the unknowns are solved one at
    a time as rational functions of the total m and the variable z,
    alternating between the lowest and highest remaining index, then the
    defining relation ``m = sum of unknowns`` is cleared of
    denominators.  Denominator factors that do not annihilate the
    counting series are divided back out, the content is removed, and
    the degrees are checked against the expected (r+1, r).

    Returns (P, L): P annihilates the counting series m(z), and L is
    the same relation rewritten for the Cauchy transform G via
    m = length * z * G(1/z) and clearing powers of z.
    """
    a = _check_heights(heights)
    r = len(a)
    if r > MAX_BLOCKS:
        raise DegreeGuardError(
            f"exact elimination supports at most {MAX_BLOCKS} blocks, got {r}")
    ell = sum(a)
    m = BivariatePoly.variable_g()
    z = BivariatePoly.variable_z()
    one = BivariatePoly.constant(1)
    registry = []
    solved = {}

    def solve(index, base, tail):
        """x_index = a_index * z / (base + tail.num/prod(tail.den))."""
        new_poly = base * _prod(tail.den) + tail.num
        scalar, factors = _split_factors(new_poly, registry)
        num = (Fraction(a[index - 1]) / scalar) * (z * _prod(tail.den))
        solved[index] = _RationalFn(num, factors).reduced()

    for i in range(1, (r + 1) // 2 + 1):
        high_tail = _frac_sum([solved[t] for t in range(r - i + 2, r + 1)])
        solve(i, one - m, high_tail)
        hi = r - i + 1
        if hi > i:
            low_sum = _frac_sum([solved[t] for t in range(1, i + 1)])
            solve(hi, one, _RationalFn(-low_sum.num, low_sum.den))

    total = _frac_sum(list(solved.values()))
    p_raw = m * _prod(total.den) - total.num

    m_series = counting_series(a, series_order)
    candidates = registry + total.den
    progress = True
    while progress:
        progress = False
        for f in candidates:
            if f.eval_series(m_series, series_order).is_zero():
                continue  # annihilates the series: a true factor, keep it
            q = p_raw.exact_div(f)
            if q is not None and not q.is_zero():
                p_raw = q
                progress = True
    p = p_raw.normalized()

    residual = p.eval_series(m_series, series_order)
    if not residual.is_zero():
        raise RuntimeError("eliminated polynomial does not annihilate the series")
    if p.degree_g() != r + 1 or p.degree_z() != r:
        raise RuntimeError(
            f"unexpected degrees ({p.degree_g()}, {p.degree_z()}), "
            f"wanted ({r + 1}, {r})")

    s = p.degree_z()
    l_terms = {}
    for (i, j), v in p.terms.items():
        key = (i, s - j)
        l_terms[key] = l_terms.get(key, 0) + v * ell ** i
    lpoly = BivariatePoly(l_terms).normalized()
    return p, lpoly


# ---------------------------------------------------------------------------
# two-block closed forms
# ---------------------------------------------------------------------------

def fat_hook_cubic(a1, a2):
    """The cubic annihilating the Cauchy transform of a two-block shape:

        l^3 z^2 G^3 + (a1 - a2 - 2z) l^2 z G^2 + (2 a2 + z) l z G + (a1^2 - l z)
    """
    a1, a2 = int(a1), int(a2)
    if a1 < 1 or a2 < 1:
        raise ValueError("heights must be positive")
    ell = a1 + a2
    return BivariatePoly({
        (3, 2): ell ** 3,
        (2, 1): (a1 - a2) * ell ** 2,
        (2, 2): -2 * ell ** 2,
        (1, 1): 2 * a2 * ell,
        (1, 2): ell,
        (0, 0): a1 ** 2,
        (0, 1): -ell,
    }).normalized()


def fat_hook_r_series(a1, a2, order):
    """R-transform of the two-block shape, expanded exactly:

        a1/(1 - l z) + (sqrt((1 - (a2-a1)^2 z / l) / (1 - l z)) - 1) / (2 z)

    The apparent 1/(2z) pole cancels, so this is a power series.
    """
    a1, a2 = int(a1), int(a2)
    ell = a1 + a2
    n = order + 1
    geom = TruncatedSeries.from_coeffs([1, -ell], n).reciprocal()
    inner = TruncatedSeries.from_coeffs([1, -Fraction((a2 - a1) ** 2, ell)], n) * geom
    part = (inner.sqrt() - 1).shift_down() / 2
    return (a1 * geom).truncate(order) + part


def fat_hook_r_eval(a1, a2, z):
    """Numeric value of the closed-form R-transform away from its
    singular points z = 1/l and z = l/(a2-a1)^2."""
    a1, a2 = int(a1), int(a2)
    ell = a1 + a2
    z = complex(z)
    if abs(1 - ell * z) < 1e-14:
        raise ZeroDivisionError("R-transform pole at z = 1/length")
    if abs(z) < 1e-12:
        # removable singularity at 0: the value is the mean
        return complex(Fraction(a1 ** 2 + 2 * a1 * a2, ell))
    return a1 / (1 - ell * z) + (cmath.sqrt(
        (1 - (a2 - a1) ** 2 * z / ell) / (1 - ell * z)) - 1) / (2 * z)


@dataclass(frozen=True)
class FatHookSpectrum:
    """Atom, support endpoints, and density of a two-block shape."""

    a1: int
    a2: int
    atom_mass: Fraction
    z_minus: float
    z_plus: float
    quadratic: tuple       # (A, B, C): exact coefficients with roots z+-
    surd: tuple            # (p, q, d, den): z+- = (p +- q sqrt(d)) / den
    support: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "support", (max(self.z_minus, 0.0), self.z_plus))

    def density(self, x):
        return fat_hook_density(self.a1, self.a2, x)


def fat_hook_support(a1, a2):
    """Support endpoints from the quadratic factor of the discriminant
    of the cubic, plus the atom at zero.

    The endpoints are the roots of ``4 a2 z^2 + (a1^2 - 20 a1 a2 -
    8 a2^2) z - 4 (a1 - a2)^3``; the atom mass is max(a2 - a1, 0) over
    the length.
    """
    a1, a2 = int(a1), int(a2)
    if a1 < 1 or a2 < 1:
        raise ValueError("heights must be positive")
    ell = a1 + a2
    qa = 4 * a2
    qb = a1 ** 2 - 20 * a1 * a2 - 8 * a2 ** 2
    qc = -4 * (a1 - a2) ** 3
    disc = qb * qb - 4 * qa * qc
    rt = math.sqrt(disc)
    z_minus = (-qb - rt) / (2 * qa)
    z_plus = (-qb + rt) / (2 * qa)
    atom = Fraction(max(a2 - a1, 0), ell)
    return FatHookSpectrum(a1, a2, atom, z_minus, z_plus,
                           quadratic=(qa, qb, qc), surd=(-qb, 1, disc, 2 * qa))


def _discriminant_value(a1, a2, x):
    """Value of the discriminant of the cubic at real x (exact formula)."""
    ell = a1 + a2
    q = 4 * a2 * x * x + (a1 ** 2 - 20 * a1 * a2 - 8 * a2 ** 2) * x \
        - 4 * (a1 - a2) ** 3
    return x ** 3 * ell ** 6 * a1 ** 2 * q


def density_closed_form(a1, a2, x):
    """Route A: the literal closed-form density.

    Away from the support (where the discriminant is nonnegative) the
    value is 0.  Returns NaN at the measure-zero interior points where
    the cube-root argument vanishes; callers fall back to the root
    route there.
    """
    a1, a2 = int(a1), int(a2)
    x = float(x)
    if x <= 0:
        return 0.0
    ell = a1 + a2
    d = _discriminant_value(a1, a2, x)
    if d >= 0:
        return 0.0
    p_val = ell ** 3 * x * (2 * (a2 - x) ** 3
                            - 6 * a1 * (a2 - x) * (a2 + 2 * x)
                            + 3 * a1 ** 2 * (2 * a2 - 5 * x)
                            - 2 * a1 ** 3) / 3 ** 1.5
    root_arg = p_val + math.sqrt(-d)
    if root_arg == 0.0:
        return float("nan")
    u = abs(root_arg) ** (1.0 / 3.0)
    c2 = 2 ** (2.0 / 3.0) * x ** (2.0 / 3.0) * ell ** 2 \
        * (3 * x * (2 * a2 + x) - (a2 - a1 + 2 * x) ** 2) / 3.0
    return abs(u + c2 / u) / (math.pi * ell ** 2 * 2 ** (4.0 / 3.0)
                              * x ** (4.0 / 3.0))


def _tracked_root(poly_coeffs_at, x, start_imag, eps_floor=0.0):
    """Follow the root nearest to the Cauchy branch from high above the
    real axis down to x + i*eps_floor.

    ``poly_coeffs_at(z)`` returns the polynomial coefficients in G
    (highest first).  Splits steps in half when the root moves too far,
    which guards against branch jumps.
    """
    z = complex(x, start_imag)
    roots = np.roots(poly_coeffs_at(z))
    current = roots[np.argmin(np.abs(roots - 1.0 / z))]
    imag = start_imag
    target = max(eps_floor, 0.0)
    while imag > target + 1e-300:
        step = max(imag * 0.6, target)
        if step <= target:
            step = target
        for _ in range(60):
            z2 = complex(x, step)
            roots = np.roots(poly_coeffs_at(z2))
            nxt = roots[np.argmin(np.abs(roots - current))]
            if abs(nxt - current) <= 0.5 * (1.0 + abs(current)):
                current = nxt
                imag = step
                break
            step = (imag + step) / 2.0  # jump detected: refine the ladder
        else:
            raise NonConvergenceError(
                f"branch tracking failed near x={x}", residual=None)
        if imag == target:
            break
        if step == target:
            imag = target
    return current


def density_root_track(a1, a2, x, cubic=None):
    """Route B: imaginary part of the cubic's Cauchy branch at x.

    The branch is selected by continuation from high in the upper half
    plane (where G behaves like 1/z) and taken to the real axis.
    """
    x = float(x)
    if x <= 0:
        return 0.0
    if cubic is None:
        cubic = fat_hook_cubic(a1, a2)
    spectrum = fat_hook_support(a1, a2)
    start = 4.0 * max(spectrum.z_plus, 1.0)
    root = _tracked_root(lambda z: cubic.g_poly_coeffs(z), x, start)
    return max(-root.imag / math.pi, 0.0)


def fat_hook_density(a1, a2, x, cross_check=False):
    """Density of the continuous part of the two-block spectrum at x.

    Uses the closed form in the interior and root continuation close to
    the support edges (where the closed form loses precision).  With
    ``cross_check`` both routes are evaluated and must agree to 1e-9
    relative.
    """
    spectrum = fat_hook_support(a1, a2)
    lo, hi = spectrum.support
    if not lo < x < hi:
        return 0.0
    width = hi - lo
    margin = min(x - lo, hi - x)
    if margin < 1e-7 * width:
        return density_root_track(a1, a2, x)
    val = density_closed_form(a1, a2, x)
    if math.isnan(val):
        return density_root_track(a1, a2, x)
    if cross_check:
        other = density_root_track(a1, a2, x)
        scale = max(abs(val), abs(other), 1e-30)
        if abs(val - other) > 1e-9 * scale:
            raise RuntimeError(
                f"density routes disagree at x={x}: {val} vs {other}")
    return val


# ---------------------------------------------------------------------------
# numeric Stieltjes inversion for any number of blocks
# ---------------------------------------------------------------------------

DEFAULT_EPS_LADDER = (1e-2, 1e-3, 1e-4)


def _solve_block_system(a, w, seed, tol=1e-12, max_iter=200):
    """Damped Newton on the block system at a fixed complex w.

    The residual tolerance is relative to the working scale (the values
    grow like |w| as z approaches 0, where an absolute 1e-12 would be
    below double precision).
    """
    r = len(a)
    h = np.array(seed, dtype=complex)
    av = np.array(a, dtype=float)
    best = None
    for _ in range(max_iter):
        tails = np.array([np.dot(av[: r - j], h[: r - j]) for j in range(r)])
        f = h - w - h * tails
        res = np.max(np.abs(f))
        scale = max(1.0, abs(w), float(np.max(np.abs(h))))
        if res < tol * scale:
            return h, res
        jac = np.zeros((r, r), dtype=complex)
        for j in range(r):
            jac[j, j] += 1.0 - tails[j]
            jac[j, : r - j] -= h[j] * av[: r - j]
        try:
            delta = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            raise NonConvergenceError("singular Jacobian", residual=res)
        step = 1.0
        for _ in range(30):
            h_try = h - step * delta
            tails_t = np.array([np.dot(av[: r - j], h_try[: r - j])
                                for j in range(r)])
            f_try = h_try - w - h_try * tails_t
            if np.max(np.abs(f_try)) < res:
                h = h_try
                break
            step *= 0.5  # damping
        else:
            # line search stalled: fine if already near machine precision
            if res < 1e-8 * scale:
                return h, res
            raise NonConvergenceError(
                f"Newton stalled at residual {res}", residual=res)
        best = res
    raise NonConvergenceError(
        f"Newton did not reach tol={tol} (relative)", residual=best)


_SEED_CACHE = {}


def _seed_coefficients(a, order):
    """Float coefficient rows of the block series, cached per shape."""
    key = (a, order)
    if key not in _SEED_CACHE:
        series, _ = block_series_system(a, order)
        _SEED_CACHE[key] = np.array(
            [[float(c) for c in s.coeffs] for s in series])
    return _SEED_CACHE[key]


def stieltjes_density(heights, x, eps_ladder=None, richardson=True,
                      series_order=24):
    """Density estimate at x > 0 by Stieltjes inversion of the block
    system's Cauchy transform.

    The system is solved at z = x + i*eps by Newton continuation: the
    solution is seeded high in the upper half plane from the exact
    series, followed down a geometric ladder through the requested eps
    values, and the imaginary part is Richardson-extrapolated from the
    two smallest eps.

    The default ladder is (1e-2, 1e-3, 1e-4) scaled down by x when
    x < 1, since the extrapolation error grows with eps relative to the
    distance from the origin singularity.
    """
    a = _check_heights(heights)
    if x <= 0:
        raise ValueError("density is evaluated at x > 0")
    if eps_ladder is None:
        scale = min(1.0, float(x))
        eps_ladder = tuple(e * scale for e in DEFAULT_EPS_LADDER)
    ladder = tuple(sorted(set(float(e) for e in eps_ladder), reverse=True))
    if not ladder or ladder[-1] <= 0:
        raise ValueError("eps ladder must be positive")
    ell = sum(a)

    y0 = 8.0 * ell  # far above the support bound 4*length
    w0 = 1.0 / complex(x, y0)
    coeff_rows = _seed_coefficients(a, series_order)
    h_prev = np.zeros(len(a), dtype=complex)
    for c in coeff_rows.T[::-1]:
        h_prev = h_prev * w0 + c

    av = np.array(a, dtype=float)
    estimates = {}
    y = y0
    targets = list(ladder)
    while targets:
        target = targets[0]
        y_next = max(y * 0.5, target)
        w = 1.0 / complex(x, y_next)
        h_try, _ = _solve_block_system(a, w, h_prev)
        if np.max(np.abs(h_try - h_prev)) > 0.5 * (1.0 + np.max(np.abs(h_prev))):
            if y / y_next < 1.0001:
                raise NonConvergenceError(
                    f"branch jump persisted near x={x}, eps={y_next}")
            y_mid = math.sqrt(y * y_next)  # refine the ladder
            w_mid = 1.0 / complex(x, y_mid)
            h_prev, _ = _solve_block_system(a, w_mid, h_prev)
            y = y_mid
            continue
        h_prev = h_try
        y = y_next
        if y == target:
            # G(z) = (1/length) * sum a_j H_j(1/z)
            g = np.dot(av, h_prev) / ell
            estimates[target] = -g.imag / math.pi
            targets.pop(0)
    if richardson and len(ladder) >= 2:
        e1, e2 = ladder[-2], ladder[-1]
        f1, f2 = estimates[e1], estimates[e2]
        return f2 + (f2 - f1) * e2 / (e1 - e2)
    return estimates[ladder[-1]]
