"""Two-variable expansions: the Jacobi theta blocks of the Siegel forms,
the weight-0 index-1 generator, and the Hecke action on index-1 coefficients.

A JacobiSeries stores c(n2, l2) for the monomial q^(n2/2) r^(l2/2) (exact
integers, half-integer exponent grid, q-order truncated, Laurent tails in q
allowed).  Index-1 forms with integer exponents depend on (n, l) only
through 4n - l^2; such forms are handled through their norm tables, which is
what the Hecke operator acts on.
"""

from __future__ import annotations

from .errors import IndexNotOne, InsufficientFRange
from .qseries import QSeries, eta_quotient_power


class JacobiSeries:
    """coeffs: dict (n2, l2) -> int; qmax2: inclusive bound on n2."""

    __slots__ = ("coeffs", "qmax2", "weight", "index")

    def __init__(self, coeffs, qmax2, weight=None, index=None, _prune=True):
        if _prune:
            coeffs = {k: c for k, c in coeffs.items() if c and k[0] <= qmax2}
        self.coeffs = coeffs
        self.qmax2 = qmax2
        self.weight = weight
        self.index = index

    @classmethod
    def one(cls, qmax2):
        return cls({(0, 0): 1}, qmax2, _prune=False)

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), 0)

    def coeff_pi(self, n, l):
        """Coefficient of exp(pi*i*(n*z1 + l*z2))."""
        return self.coeffs.get((n, l), 0)

    def coeff_q(self, n, l):
        """Coefficient of q^n r^l."""
        return self.coeffs.get((2 * n, 2 * l), 0)

    def min_q2(self):
        return min(k[0] for k in self.coeffs) if self.coeffs else self.qmax2 + 1

    def __add__(self, other):
        coeffs = dict(self.coeffs)
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + c
        return JacobiSeries(coeffs, min(self.qmax2, other.qmax2))

    def __neg__(self):
        return JacobiSeries({k: -c for k, c in self.coeffs.items()}, self.qmax2,
                            _prune=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return JacobiSeries({k: c * v for k, v in self.coeffs.items()}, self.qmax2)

    def __mul__(self, other):
        qmax2 = min(self.qmax2 + other.min_q2(), other.qmax2 + self.min_q2())
        coeffs = {}
        for (n1, l1), c1 in self.coeffs.items():
            for (n2, l2), c2 in other.coeffs.items():
                n = n1 + n2
                if n <= qmax2:
                    k = (n, l1 + l2)
                    coeffs[k] = coeffs.get(k, 0) + c1 * c2
        return JacobiSeries(coeffs, qmax2)

    def mul_factor(self, dn2, dl2, sign, exponent):
        """Multiply by (1 + sign*q^(dn2/2)*r^(dl2/2))^exponent, truncated.

        Negative exponents expand geometrically and require dn2 > 0.
        """
        if exponent == 0 or not self.coeffs:
            return self
        if exponent < 0 and dn2 <= 0:
            raise ValueError("geometric factor needs positive q-power")
        depth = self.qmax2 - self.min_q2()
        if dn2 > 0:
            jmax = depth // dn2
            if exponent > 0:
                jmax = min(jmax, exponent)
        else:
            jmax = exponent
        # (1+sx)^e = sum C(e,j) s^j x^j; for e=-k, C(-k,j) = C(k+j-1,j)(-1)^j
        row = [1]
        term = 1
        for j in range(1, jmax + 1):
            if exponent > 0:
                term = term * (exponent - j + 1) // j
                row.append(term * (sign ** (j % 2)))
            else:
                term = term * (-exponent + j - 1) // j
                row.append(term * ((-sign) ** (j % 2)))
        coeffs = {}
        for (n, l), c in self.coeffs.items():
            for j, binom in enumerate(row):
                nn = n + j * dn2
                if nn > self.qmax2:
                    break
                k = (nn, l + j * dl2)
                coeffs[k] = coeffs.get(k, 0) + binom * c
        return JacobiSeries(coeffs, self.qmax2)

    def equal_report(self, other, qmax2):
        keys = {k for k in set(self.coeffs) | set(other.coeffs) if k[0] <= qmax2}
        bad = [(k, self.coeffs.get(k, 0), other.coeffs.get(k, 0))
               for k in keys if self.coeffs.get(k, 0) != other.coeffs.get(k, 0)]
        if not bad:
            return True, None
        return False, min(bad)

    def __repr__(self):
        return "<JacobiSeries %d terms, q2<=%d>" % (len(self.coeffs), self.qmax2)


def _mul_univariate(jac: JacobiSeries, q: QSeries, scale2=2) -> JacobiSeries:
    """Multiply by a one-variable series in q (exponents scaled by scale2/2)."""
    coeffs = {}
    for (n, l), c in jac.coeffs.items():
        for k, ck in q.coeffs.items():
            nn = n + scale2 * k
            if nn <= jac.qmax2:
                key = (nn, l)
                coeffs[key] = coeffs.get(key, 0) + c * ck
    return JacobiSeries(coeffs, jac.qmax2)


def phi_5_half(qmax2) -> JacobiSeries:
    """-q^(1/2) r^(-1/2) prod (1-q^(n-1) r)(1-q^n r^-1)(1-q^n)^10.

    The first Fourier block of the weight-5 cusp form; coefficients g(n, l)
    vanish unless n and l are both odd.
    """
    p = JacobiSeries({(1, -1): -1}, qmax2, weight=5, index=1)
    n = 1
    while 2 * (n - 1) <= qmax2 - 1:
        p = p.mul_factor(2 * (n - 1), 2, -1, 1)
        if 2 * n <= qmax2 - 1:
            p = p.mul_factor(2 * n, -2, -1, 1)
        n += 1
    eta10 = eta_quotient_power(10, (qmax2 - 1) // 2)
    return _mul_univariate(p, eta10)


def eta_power_theta11(eta_pow, z2_scale, qmax2) -> JacobiSeries:
    """eta(z1)^eta_pow * theta11(z1, z2_scale*z2) via the theta sum.

    theta11(t, z) = sum_k (-1)^(k+1) q^((2k-1)^2/8) r^((2k-1)/2); the eta
    power must satisfy eta_pow = 9 mod 12 so the combined q-exponents land
    on the half-integer grid.
    """
    if eta_pow % 12 != 9:
        raise ValueError("eta power must be 9 mod 12")
    base2 = (eta_pow + 3) // 12  # 2*(eta_pow/24 + 1/8)
    qorder = (qmax2 - base2) // 2 + 1
    eta = eta_quotient_power(eta_pow, max(qorder, 0))
    coeffs = {}
    k = 0
    while True:
        done = True
        for j in (2 * k - 1, -2 * k - 1) if k else (-1,):
            n2 = base2 + (j * j - 1) // 4  # 2*(j^2-1)/8
            if n2 <= qmax2:
                done = False
                sign = 1 if (j + 1) // 2 % 2 == 1 else -1
                # (-1)^(k+1) with j = 2k-1
                for d, c in eta.coeffs.items():
                    if n2 + 2 * d <= qmax2:
                        key = (n2 + 2 * d, j * z2_scale)
                        coeffs[key] = coeffs.get(key, 0) + sign * c
        if done and k:
            break
        k += 1
    return JacobiSeries(coeffs, qmax2)


def phi_35_2(qmax2) -> JacobiSeries:
    """eta^69(z1) * theta11(z1, 2 z2): the lowest Fourier block of the
    weight-35 form, supported on integer exponents starting at q^3."""
    return eta_power_theta11(69, 2, qmax2)


def phi_30_3half(qmax2) -> JacobiSeries:
    """q^(5/2) r^(-1/2) prod (1+q^(n-1)r)(1-q^(2n-1)r^2)(1-q^(2n-1)r^-2)
    (1+q^n r^-1)(1-q^n)^60: the lowest Fourier block of the weight-30 form.
    """
    p = JacobiSeries({(5, -1): 1}, qmax2)
    n = 1
    while 2 * (n - 1) <= qmax2 - 5:
        p = p.mul_factor(2 * (n - 1), 2, 1, 1)
        if 2 * (2 * n - 1) <= qmax2 - 5:
            p = p.mul_factor(2 * (2 * n - 1), 4, -1, 1)
            p = p.mul_factor(2 * (2 * n - 1), -4, -1, 1)
        if 2 * n <= qmax2 - 5:
            p = p.mul_factor(2 * n, -2, 1, 1)
        n += 1
    eta60 = eta_quotient_power(60, (qmax2 - 5) // 2)
    return _mul_univariate(p, eta60)


# ------------------------------------------------------- index-1 norm tables


class NormForm:
    """Index-1 Jacobi-type form given by its norm table c(4n - l^2).

    values: dict N -> int (zeros omitted); nmin: all rows n >= nmin exist;
    norm_max: lookups above it raise InsufficientFRange, below the declared
    floor they return 0.
    """

    __slots__ = ("values", "nmin", "norm_max", "floor")

    def __init__(self, values, norm_max, nmin=0, floor=None):
        self.values = {N: c for N, c in values.items() if c}
        self.norm_max = norm_max
        self.nmin = nmin
        self.floor = floor if floor is not None else (
            min(self.values) if self.values else 0)

    def __call__(self, N):
        if N < self.floor:
            return 0
        if N > self.norm_max:
            raise InsufficientFRange("norm %d beyond computed bound %d" % (N, self.norm_max))
        return self.values.get(N, 0)

    def materialize(self, qmax, weight=None) -> JacobiSeries:
        """Rows (n, l) with nmin <= n <= qmax, c(n, l) = value at 4n - l^2."""
        if 4 * qmax > self.norm_max:
            raise InsufficientFRange("materialization needs norms up to %d" % (4 * qmax))
        coeffs = {}
        for n in range(self.nmin, qmax + 1):
            lmax = 1
            while 4 * n - lmax * lmax >= self.floor:
                lmax += 1
            for l in range(-lmax, lmax + 1):
                c = self(4 * n - l * l)
                if c:
                    coeffs[(2 * n, 2 * l)] = c
        return JacobiSeries(coeffs, 2 * qmax, weight=weight, index=1)


def norm_table_of(jac: JacobiSeries) -> NormForm:
    """Extract the norm table of an integer-exponent index-1 form, checking
    that coefficients indeed depend only on 4n - l^2."""
    values = {}
    nmin = 0
    for (n2, l2), c in jac.coeffs.items():
        if n2 % 2 or l2 % 2:
            raise IndexNotOne("form does not sit on the integer exponent grid")
        n, l = n2 // 2, l2 // 2
        nmin = min(nmin, n)
        N = 4 * n - l * l
        if N in values and values[N] != c:
            raise IndexNotOne("coefficients do not factor through 4n - l^2")
        values[N] = c
    # only norms witnessed across the whole q-range are trustworthy
    norm_max = 4 * (jac.qmax2 // 2)
    return NormForm(values, norm_max, nmin=nmin)


def mul_q_norm(q: QSeries, nf: NormForm, norm_max) -> NormForm:
    """Norm table of (one-variable series in q) * (index-1 norm form):
    multiplying by q^k shifts every norm by 4k."""
    values = {}
    for N in range(nf.floor + 4 * q.min_order(), norm_max + 1):
        s = 0
        for k, c in q.coeffs.items():
            s += c * nf(N - 4 * k)   # raises if the input table is too small
        if s:
            values[N] = s
    return NormForm(values, norm_max, nmin=nf.nmin + q.min_order())


def char_mod8(D):
    """The quadratic symbol used in the weight-35 exponent formula:
    1 for D = 1 mod 8, -1 for D = 5 mod 8, 0 for even D.

    D = 3, 7 mod 8 never meets a nonzero companion factor; returns 0 there.
    """
    if D % 2 == 0:
        return 0
    r = D % 8
    if r == 1:
        return 1
    if r == 5:
        return -1
    return 0


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def quad_char(N, p):
    """(-N/p): the mod-8 symbol for p = 2, the Legendre symbol otherwise."""
    if p == 2:
        return char_mod8(-N)
    return legendre(-N, p)


def jacobi_T0(phi, p, weight=0, character=True, norm_max=None):
    """Hecke action on the norm table of an index-1 form.

    weight 0:  N -> p^3 c(p^2 N) + p*chi(N)*c(N) + c(N/p^2)
    weight k:  N -> c(p^2 N) + p^(k-2)*chi(N)*c(N) + p^(2k-3)*c(N/p^2)

    chi(N) = (-N/p); character=False drops it (the uncorrected variant, kept
    for comparison - it fails the independently verified product identities).
    The N/p^2 argument contributes only when integral.
    """
    nf = phi if isinstance(phi, NormForm) else norm_table_of(phi)
    if norm_max is None:
        norm_max = nf.norm_max // (p * p)
    if norm_max * p * p > nf.norm_max:
        raise InsufficientFRange("input norm table too small for T0(%d)" % p)
    values = {}
    for N in range(nf.floor * p * p, norm_max + 1):
        chi = quad_char(N, p) if character else 1
        if weight == 0:
            s = p ** 3 * nf(p * p * N) + p * chi * nf(N)
            if N % (p * p) == 0:
                s += nf(N // (p * p))
        else:
            s = nf(p * p * N) + p ** (weight - 2) * chi * nf(N)
            if N % (p * p) == 0:
                s += p ** (2 * weight - 3) * nf(N // (p * p))
        if s:
            values[N] = s
    floor = min(values) if values else 0
    return NormForm(values, norm_max, nmin=floor // 4, floor=floor)
