"""Exact bivariate polynomials in the unknown g and the variable z.

Plumbing for the elimination machinery: dict-backed polynomials with
rational coefficients, exact division, content normalisation, and
evaluation on truncated series.
"""

from fractions import Fraction
from math import gcd

from .powerseries import TruncatedSeries


class BivariatePoly:
    """Polynomial with terms ``{(deg_g, deg_z): coefficient}``.

    Coefficients are exact rationals during computations; normalised
    form has integer coefficients with content 1 and positive leading
    coefficient in lexicographic (deg_g, deg_z) order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {k: Fraction(v) for k, v in terms.items() if v != 0}

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def variable_g(cls):
        return cls({(1, 0): 1})

    @classmethod
    def variable_z(cls):
        return cls({(0, 1): 1})

    def is_zero(self):
        return not self.terms

    def degree_g(self):
        return max((k[0] for k in self.terms), default=-1)

    def degree_z(self):
        return max((k[1] for k in self.terms), default=-1)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivariatePoly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) - v
        return BivariatePoly(out)

    def __neg__(self):
        return BivariatePoly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, BivariatePoly):
            out = {}
            for (i1, j1), v1 in self.terms.items():
                for (i2, j2), v2 in other.terms.items():
                    k = (i1 + i2, j1 + j2)
                    out[k] = out.get(k, 0) + v1 * v2
            return BivariatePoly(out)
        return BivariatePoly({k: v * Fraction(other) for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __repr__(self):
        items = ", ".join(f"({i},{j}): {v}" for (i, j), v in sorted(self.terms.items()))
        return f"BivariatePoly({{{items}}})"

    def leading_key(self):
        return max(self.terms)  # lex order on (deg_g, deg_z)

    def exact_div(self, divisor):
        """Quotient when the divisor divides exactly, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self.terms)
        lk = divisor.leading_key()
        lc = divisor.terms[lk]
        quot = {}
        while rem:
            key = max(rem)
            dg, dz = key[0] - lk[0], key[1] - lk[1]
            if dg < 0 or dz < 0:
                return None
            c = rem[key] / lc
            quot[(dg, dz)] = c
            for (i, j), v in divisor.terms.items():
                k2 = (i + dg, j + dz)
                nv = rem.get(k2, Fraction(0)) - c * v
                if nv:
                    rem[k2] = nv
                elif k2 in rem:
                    del rem[k2]
        return BivariatePoly(quot)

    def normalized(self):
        """Integer coefficients, content 1, positive leading coefficient."""
        if self.is_zero():
            return BivariatePoly({})
        den = 1
        for v in self.terms.values():
            den = den * v.denominator // gcd(den, v.denominator)
        ints = {k: v.numerator * (den // v.denominator)
                for k, v in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        ints = {k: v // g for k, v in ints.items()}
        if ints[max(ints)] < 0:
            ints = {k: -v for k, v in ints.items()}
        return BivariatePoly(ints)

    def eval_series(self, g_series, order):
        """Substitute a series for g (z stays the series variable)."""
        max_g = self.degree_g()
        rows = {}
        for (i, j), v in self.terms.items():
            rows.setdefault(i, {})[j] = v
        result = TruncatedSeries.zero(order)
        for i in range(max_g, -1, -1):
            row = rows.get(i, {})
            coeffs = [row.get(j, 0) for j in range(max(row, default=0) + 1)]
            result = result * g_series + TruncatedSeries.from_coeffs(coeffs, order)
        return result

    def eval_numeric(self, g, z):
        """Evaluate at numbers (possibly complex)."""
        total = 0.0 + 0.0j if isinstance(g, complex) or isinstance(z, complex) else 0.0
        for (i, j), v in self.terms.items():
            total = total + float(v) * g ** i * z ** j
        return total

    def g_poly_coeffs(self, z):
        """Coefficients in g, highest degree first, at a numeric z."""
        n = self.degree_g()
        coeffs = [0.0 + 0.0j] * (n + 1)
        for (i, j), v in self.terms.items():
            coeffs[n - i] += float(v) * z ** j
        return coeffs
