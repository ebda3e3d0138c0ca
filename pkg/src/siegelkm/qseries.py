"""One-variable exact q-expansions: Eisenstein series, the weight-12 cusp
form, and the modular invariant j.

A QSeries is a finite Laurent expansion sum c_n q^n with integer n and
arbitrary-precision integer coefficients, truncated at an inclusive order
bound.  Unlike the three-variable series, inversion is provided here: it
only ever runs against a series with unit leading coefficient.
"""

from __future__ import annotations

from .errors import NonIntegralResult


class QSeries:
    """coeffs: dict n -> c_n (no zeros stored); order: inclusive bound."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order, _prune=True):
        if _prune:
            coeffs = {n: c for n, c in coeffs.items() if c and n <= order}
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def one(cls, order):
        return cls({0: 1}, order, _prune=False)

    def __getitem__(self, n):
        return self.coeffs.get(n, 0)

    def min_order(self):
        return min(self.coeffs) if self.coeffs else self.order + 1

    def __add__(self, other):
        order = min(self.order, other.order)
        coeffs = dict(self.coeffs)
        for n, c in other.coeffs.items():
            coeffs[n] = coeffs.get(n, 0) + c
        return QSeries(coeffs, order)

    def __neg__(self):
        return QSeries({n: -c for n, c in self.coeffs.items()}, self.order, _prune=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return QSeries({n: c * v for n, v in self.coeffs.items()}, self.order)

    def shift(self, k):
        return QSeries({n + k: c for n, c in self.coeffs.items()}, self.order + k,
                       _prune=False)

    def __mul__(self, other):
        order = min(self.order + other.min_order(), other.order + self.min_order())
        coeffs = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                n = n1 + n2
                if n <= order:
                    coeffs[n] = coeffs.get(n, 0) + c1 * c2
        return QSeries(coeffs, order)

    def __pow__(self, k):
        result = QSeries.one(self.order * max(k, 1))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self, order):
        """Exact reciprocal up to q^order; leading coefficient must be +-1."""
        n0 = self.min_order()
        lead = self.coeffs[n0]
        if lead not in (1, -1):
            raise NonIntegralResult("cannot invert series with leading coefficient %d" % lead)
        inv = {-n0: lead}
        for n in range(-n0 + 1, order + 1):
            s = 0
            for k, c in self.coeffs.items():
                if k > n0 and n - (k - n0) >= -n0:
                    s += c * inv.get(n - k + n0, 0)
            inv[n] = -lead * s
        return QSeries(inv, order)

    def __eq__(self, other):
        order = min(self.order, other.order)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(n, 0) == other.coeffs.get(n, 0)
                   for n in keys if n <= order)

    __hash__ = None

    def __repr__(self):
        return "<QSeries %d terms, order<=%d>" % (len(self.coeffs), self.order)


def _sigma(n, k):
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
        d += 1
    return s


def eisenstein_series(k, order):
    """E4 = 1 + 240 sum sigma_3(n) q^n or E6 = 1 - 504 sum sigma_5(n) q^n."""
    if k == 4:
        coeffs = {n: 240 * _sigma(n, 3) for n in range(1, order + 1)}
    elif k == 6:
        coeffs = {n: -504 * _sigma(n, 5) for n in range(1, order + 1)}
    else:
        raise ValueError("weight must be 4 or 6")
    coeffs[0] = 1
    return QSeries(coeffs, order)


def euler_product(order):
    """prod_{n>=1} (1 - q^n) via the pentagonal-number expansion."""
    coeffs = {0: 1}
    k = 1
    while True:
        for n in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if n <= order:
                coeffs[n] = (-1) ** k
        if k * (3 * k - 1) // 2 > order:
            break
        k += 1
    return QSeries(coeffs, order)


def eta_quotient_power(power, order):
    """prod (1 - q^n)^power, power >= 0 (no q^(power/24) prefactor)."""
    return euler_product(order) ** power


def delta12(order):
    """q prod (1 - q^n)^24."""
    return eta_quotient_power(24, order - 1).shift(1)


def j_invariant(order):
    """E4^3 / Delta12 = q^-1 + 744 + 196884 q + ..."""
    e4 = eisenstein_series(4, order + 1)
    d = delta12(order + 2)
    return (e4 ** 3) * d.invert(order + 1)
