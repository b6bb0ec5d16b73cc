"""Truncated formal power series over exact rationals.

Carries the Cauchy transform (as a series in w = 1/z), the R- and
S-transforms, and the free convolution operations.  Everything here is
exact: transform identities are checked as identities, never by
floating-point closeness.  Only the analytic and simulation modules use
floats.
"""

from fractions import Fraction
from math import isqrt

DEFAULT_ORDER = 16


class SeriesError(ValueError):
    pass


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class TruncatedSeries:
    """Coefficients c_0..c_K of a series truncated at order K.

    Binary operations truncate to the smaller order of the operands, so
    precision loss is explicit in the ``order`` attribute.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(_frac(c) for c in coeffs)
        if not self.coeffs:
            raise SeriesError("series needs at least the constant coefficient")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]})"

    @classmethod
    def zero(cls, order):
        return cls((Fraction(0),) * (order + 1))

    @classmethod
    def identity(cls, order):
        """The series z."""
        if order < 1:
            raise SeriesError("identity needs order >= 1")
        return cls((Fraction(0), Fraction(1)) + (Fraction(0),) * (order - 1))

    @classmethod
    def from_coeffs(cls, coeffs, order):
        """Pad or truncate an explicit coefficient list to the order."""
        cs = [_frac(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        return cls(cs)

    def truncate(self, order):
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: order + 1])

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return TruncatedSeries(tuple(self.coeffs[k] + other.coeffs[k]
                                         for k in range(n + 1)))
        return TruncatedSeries((self.coeffs[0] + _frac(other),) + self.coeffs[1:])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-_frac(other))

    def __rsub__(self, other):
        return (-self) + _frac(other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            out = [Fraction(0)] * (n + 1)
            for i, a in enumerate(self.coeffs[: n + 1]):
                if a == 0:
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
            return TruncatedSeries(out)
        c = _frac(other)
        return TruncatedSeries(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        c = _frac(other)
        return TruncatedSeries(tuple(a / c for a in self.coeffs))

    def reciprocal(self):
        if self.coeffs[0] == 0:
            raise SeriesError("division needs a nonzero constant term")
        n = self.order
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [Fraction(0)] * n
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                acc += self.coeffs[i] * out[k - i]
            out[k] = -inv0 * acc
        return TruncatedSeries(out)

    def sqrt(self):
        """Square root with constant term the positive rational root.

        The constant term must be the square of a rational.
        """
        c0 = self.coeffs[0]
        if c0 <= 0:
            raise SeriesError("square root needs a positive constant term")
        rn, rd = isqrt(c0.numerator), isqrt(c0.denominator)
        if rn * rn != c0.numerator or rd * rd != c0.denominator:
            raise SeriesError("constant term is not the square of a rational")
        s0 = Fraction(rn, rd)
        n = self.order
        out = [s0] + [Fraction(0)] * n
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k):
                acc += out[i] * out[k - i]
            out[k] = (self.coeffs[k] - acc) / (2 * s0)
        return TruncatedSeries(out)

    def compose(self, inner):
        """self(inner(z)); the inner series must vanish at 0."""
        if inner.coeffs[0] != 0:
            raise SeriesError("composition needs inner constant term 0")
        n = min(self.order, inner.order)
        result = TruncatedSeries.zero(n)
        inner_n = inner.truncate(n)
        for c in reversed(self.coeffs[: n + 1]):
            result = result * inner_n + c
        return result

    def reversion(self):
        """Compositional inverse g with self(g(z)) = z + O(z^{K+1}).

        Needs c_0 = 0 and c_1 != 0.
        """
        if self.coeffs[0] != 0:
            raise SeriesError("reversion needs constant term 0")
        if len(self.coeffs) < 2 or self.coeffs[1] == 0:
            raise SeriesError("reversion needs a nonzero linear term")
        n = self.order
        out = [Fraction(0), 1 / self.coeffs[1]] + [Fraction(0)] * (n - 1)
        for m in range(2, n + 1):
            g = TruncatedSeries(out[: m + 1])
            val = self.truncate(m).compose(g)
            out[m] = -val.coeffs[m] / self.coeffs[1]
        return TruncatedSeries(out)

    def shift_down(self, n=1):
        """Divide by z^n; the lowest n coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:n]):
            raise SeriesError(f"series is not divisible by z^{n}")
        return TruncatedSeries(self.coeffs[n:])

    def shift_up(self, n=1):
        """Multiply by z^n, keeping all known coefficients."""
        return TruncatedSeries((Fraction(0),) * n + self.coeffs)


def from_rational(num, den, order):
    """Expand num(z)/den(z) from coefficient lists; den(0) must be nonzero."""
    n = TruncatedSeries.from_coeffs(num, order)
    d = TruncatedSeries.from_coeffs(den, order)
    return n / d


def moments_to_cauchy(moms, order=None):
    """Cauchy transform as a series in w = 1/z: sum of m_k w^{k+1}.

    The zeroth moment must be 1 (a probability distribution).
    """
    moms = [_frac(m) for m in moms]
    if not moms or moms[0] != 1:
        raise SeriesError("moment sequence must start with m_0 = 1")
    if order is None:
        order = len(moms)
    return TruncatedSeries.from_coeffs([0] + moms, order)


def cauchy_to_r(g):
    """R-transform series from a Cauchy-transform series g = w + O(w^2).

    Inverts g compositionally and strips the 1/z pole, so the result
    order drops by two.
    """
    if g.order < 3 or g.coeffs[0] != 0 or g.coeffs[1] != 1:
        raise SeriesError("need a normalised transform g = w + O(w^2), order >= 3")
    phi = g.reversion()
    psi = phi.shift_down()                 # phi / z, constant term 1
    return (psi.reciprocal() - 1).shift_down()


def r_to_s(r):
    """S-transform from the R-transform: the series S with S(z) R(z S(z)) = 1.

    Needs a nonzero mean (constant term of R).
    """
    if r.coeffs[0] == 0:
        raise SeriesError("S-transform needs a nonzero mean")
    n = r.order
    s = TruncatedSeries.from_coeffs([1 / r.coeffs[0]], n)
    for _ in range(n + 1):
        zs = (s.shift_up()).truncate(n + 1)
        s = r.compose(zs.truncate(n)).reciprocal()
    check = (s * r.compose(s.shift_up().truncate(n))) - 1
    if not check.is_zero():
        raise RuntimeError("S-transform fixed point failed to converge")
    return s


def s_to_r(s):
    """R-transform from the S-transform, by inverting u = z S(z)."""
    if s.coeffs[0] == 0:
        raise SeriesError("S-transform must have a nonzero constant term")
    u = s.shift_up()                       # z S(z), order + 1
    rev = u.reversion()
    return s.compose(rev.truncate(s.order)).reciprocal()


def free_add(r1, r2):
    """R-transform of the additive free convolution: the sum."""
    return r1 + r2


def free_mul(s1, s2):
    """S-transform of the multiplicative free convolution: the product."""
    return s1 * s2


# ---------------------------------------------------------------------------
# closed-form transforms of the two building-block distributions
# ---------------------------------------------------------------------------

def mp_moments(alpha, beta, kmax):
    """Moments of the Marchenko-Pastur law with shape alpha and scale
    beta: beta^k times the Narayana polynomial of alpha.

    Independent of the transform machinery; used as its oracle.
    """
    from math import comb
    alpha, beta = _frac(alpha), _frac(beta)
    out = [Fraction(1)]
    for k in range(1, kmax + 1):
        nar = sum(Fraction(comb(k, i) * comb(k, i - 1), k) * alpha ** i
                  for i in range(1, k + 1))
        out.append(beta ** k * nar)
    return out


def mp_r_series(alpha, beta, order):
    """alpha*beta / (1 - beta z), expanded."""
    alpha, beta = _frac(alpha), _frac(beta)
    return from_rational([alpha * beta], [1, -beta], order)


def mp_s_series(alpha, beta, order):
    """1 / (beta (alpha + z)), expanded."""
    alpha, beta = _frac(alpha), _frac(beta)
    return from_rational([1], [alpha * beta, beta], order)


def bernoulli_moments(p, kmax):
    p = _frac(p)
    return [Fraction(1)] + [p] * kmax


def bernoulli_r_series(p, order):
    """(z - 1 + sqrt(1 - 2(1-2p) z + z^2)) / (2z), expanded."""
    p = _frac(p)
    inner = TruncatedSeries.from_coeffs([1, -2 * (1 - 2 * p), 1], order + 1)
    num = TruncatedSeries.identity(order + 1) - 1 + inner.sqrt()
    return num.shift_down() / 2


def bernoulli_s_series(p, order):
    """(1 + z) / (p + z), expanded."""
    p = _frac(p)
    return from_rational([1, 1], [p, 1], order)
