"""Genus-2 theta constants and the two classical routes to the weight-5
cusp form: the product of the ten even theta constants over 64, and the
arithmetic lift assembled from the coefficients of its first Fourier block.
"""

from __future__ import annotations

from math import gcd, isqrt
from typing import NamedTuple

from .errors import NonIntegralResult, OddCharacteristic
from .jacobi import phi_5_half
from .series import FourierSeries3, TruncRegion


class ThetaChar(NamedTuple):
    """Characteristic (a, b) with a, b bit pairs; admissible iff a.b is even."""

    a: tuple
    b: tuple

    def is_even(self):
        return (self.a[0] * self.b[0] + self.a[1] * self.b[1]) % 2 == 0


def even_characteristics():
    chars = [ThetaChar((a1, a2), (b1, b2))
             for a1 in (0, 1) for a2 in (0, 1)
             for b1 in (0, 1) for b2 in (0, 1)]
    return [c for c in chars if c.is_even()]


def theta_constant(char: ThetaChar, region: TruncRegion) -> FourierSeries3:
    """Lattice sum over v in Z^2 + a/2 of (-1)^(b.(v - a/2)) times the
    monomial exp(pi*i*(v1^2 z1 + 2 v1 v2 z2 + v2^2 z3)).

    The result sits on the 1/8 exponent grid (unit 8); region is given in
    unit 8.  Enumeration over v1^2 <= nmax/4, v2^2 <= mmax/4 is complete
    because the monomial exponents in z1 and z3 depend on v1, v2 alone.
    """
    if not char.is_even():
        raise OddCharacteristic("characteristic %s has odd a.b" % (char,))
    a, b = char.a, char.b
    coeffs = {}
    # v_i = k_i + a_i/2; store 2*v_i as integers of fixed parity
    def two_v_range(ai, bound):
        top = isqrt(bound) + 2
        return [w for w in range(-top, top + 1)
                if w % 2 == ai and w * w <= bound]

    for w1 in two_v_range(a[0], region.nmax):
        for w2 in two_v_range(a[1], region.mmax):
            # exponent*8 of exp(pi i Z[v]) is (4 v1^2, 8 v1 v2, 4 v2^2)
            key = (w1 * w1, 2 * w1 * w2, w2 * w2)
            l1 = (w1 - a[0]) // 2
            l2 = (w2 - a[1]) // 2
            sign = -1 if (b[0] * l1 + b[1] * l2) % 2 else 1
            old = coeffs.get(key)
            coeffs[key] = (sign + (old[0] if old else 0), 0)
    return FourierSeries3(coeffs, region, unit=8)


def delta5_theta(nmax4, mmax4) -> FourierSeries3:
    """Product of the ten even theta constants divided by 64 (unit 4).

    Output support: exp(pi*i*(n z1 + l z2 + m z3)) with n, l, m odd,
    n, m > 0, and integer coefficients.
    """
    region8 = TruncRegion(2 * nmax4, 2 * mmax4)
    chars = even_characteristics()
    assert len(chars) == 10
    prod = theta_constant(chars[0], region8)
    for c in chars[1:]:
        prod = prod * theta_constant(c, region8)
    prod = prod.divide_exact(64)
    out = prod.to_unit(4)
    # support must be exp(pi i(n z1 + l z2 + m z3)) with odd n, l, m,
    # i.e. every unit-4 coordinate is 2 mod 4
    for (n, l, m) in out.coeffs:
        if n % 4 != 2 or l % 4 != 2 or m % 4 != 2:
            raise NonIntegralResult("even-support term %s in the theta product"
                                    % ((n, l, m),))
    return out


def maass_lift_delta5(nmax4, mmax4) -> FourierSeries3:
    """Divisor-sum lift of the first Fourier block: the coefficient at odd
    (n, l, m) is sum over d | gcd(n, l, m) of d^4 g(nm/d^2, l/d)."""
    nb = nmax4 // 2
    mb = mmax4 // 2
    phi = phi_5_half(2 * ((nb * mb + 1) // 2) + 1)
    coeffs = {}
    for n in range(1, nb + 1, 2):
        for m in range(1, mb + 1, 2):
            lmax = isqrt(4 * n * m - 1)
            for l in range(-lmax, lmax + 1):
                if l % 2 == 0:
                    continue
                g = gcd(gcd(n, abs(l)), m)
                s = 0
                for d in range(1, g + 1):
                    if g % d == 0:
                        s += d ** 4 * phi.coeff_pi(n * m // (d * d), l // d)
                if s:
                    coeffs[(2 * n, 2 * l, 2 * m)] = (s, 0)
    return FourierSeries3(coeffs, TruncRegion(nmax4, mmax4), unit=4)
