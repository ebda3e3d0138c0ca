"""Infinite products with table-driven exponents, and the inverse problem
of recovering an exponent table from a known expansion.

A product is a finite "Weyl" polynomial times factors (1 - q^n r^l s^m)^e
over integer triples from one of three ranges:

    positive_cone:  n >= 0, m >= 0; l arbitrary if n + m > 0, l < 0 otherwise
    b1:             n >= 0, m >= 0, n + m > 0
    thm17:          m >= 0, n + m != 0; n >= 1 when m = 0; for m > 0
                    finitely many n < 0 reach the table's negative keys

The thm17 range is stated in the source material with unconstrained n; taken
literally that diverges (every (1 - q^n r)^(-1) with n < 0 would occur), so
the range implemented here is the set actually produced by the coset
assembly: blocks with m = 0 keep n >= 1, and n < 0 requires
4 n m >= (most negative table key).

Exponent recovery peels factors in increasing total degree n + m.  The
degree-0 block is a polynomial in r^-1 split off by exact division; at each
higher degree the residual (series minus partial product) is divided by the
degree-0 block, which is linear in the unknown factors.  No series division
is ever performed: every step is exact polynomial division by a polynomial
with unit leading coefficient, and the partial product is rebuilt by
multiplication, so the final internal self-check "partial product equals
the input" is literally eval_product applied to the recovered table.
"""

from __future__ import annotations

from math import isqrt

from .errors import DivergentFactor, NonIntegralExponent, NotAProduct
from .series import EISEN, FourierSeries3, GAUSS, REGION_INF, TruncRegion, cmul
from .tables import DISCRIMINANT, PAIR, ExponentTable

POSITIVE_CONE = "positive_cone"
THM17 = "thm17"
B1 = "b1"

_UNITS = {(1, 0): (1, 0), (-1, 0): (-1, 0), (0, 1): (0, -1), (0, -1): (0, 1)}


class ProductSpec:
    """Weyl polynomial + exponent assignment + range rule.

    exponents may be an ExponentTable (with index_rule "disc" mapping
    (n,l,m) -> 4nm - l^2, or "pair" -> (n*m, l)) or any callable
    (n, l, m) -> int with a declared most-negative key neg_floor.
    """

    def __init__(self, weyl: FourierSeries3, exponents, index_rule=DISCRIMINANT,
                 range_rule=POSITIVE_CONE, neg_floor=None):
        self.weyl = weyl
        self.exponents = exponents
        self.index_rule = index_rule
        self.range_rule = range_rule
        if isinstance(exponents, ExponentTable):
            self.neg_floor = exponents.floor
        else:
            if neg_floor is None:
                raise ValueError("callable exponents need an explicit neg_floor")
            self.neg_floor = neg_floor

    def exponent(self, n, l, m):
        if callable(self.exponents):
            return self.exponents(n, l, m)
        if self.index_rule == DISCRIMINANT:
            return self.exponents.lookup(4 * n * m - l * l)
        return self.exponents.lookup((n * m, l))

    def block_exponents(self, n, m):
        """dict l -> nonzero exponent for the (n, m) block."""
        out = {}
        if self.index_rule == PAIR and not callable(self.exponents):
            for l in self.exponents.supported_l(n * m):
                e = self.exponents.lookup((n * m, l))
                if e:
                    out[l] = e
            return out
        lo = 4 * n * m - self.neg_floor
        if lo < 0:
            return out
        lmax = isqrt(lo)
        for l in range(-lmax, lmax + 1):
            e = self.exponent(n, l, m)
            if e:
                out[l] = e
        return out

    def zero_block_ls(self):
        """Negative l with nonzero exponent in the n = m = 0 block."""
        if self.range_rule != POSITIVE_CONE:
            return {}
        out = {}
        l = -1
        while l * l <= -self.neg_floor:
            e = self.exponent(0, l, 0)
            if e:
                out[l] = e
            l -= 1
        return out

    def negative_blocks(self):
        """(n, m) blocks with n < 0 admitted by the range rule."""
        if self.range_rule != THM17:
            return []
        out = []
        m = 1
        while 4 * m <= -self.neg_floor:
            n = -1
            while 4 * n * m >= self.neg_floor:
                if self.block_exponents(n, m):
                    out.append((n, m))
                n -= 1
            m += 1
        return out


def _grade(key):
    return key[0] + key[2]


def _factor_block(n, m, l_exps, jmax, ring=GAUSS):
    """prod_l (1 - q^n r^l s^m)^(e_l) truncated at u-power jmax, as a
    FourierSeries3 on keys (4jn, 4L, 4jm)."""
    if n == 0 and m == 0 and any(e < 0 for e in l_exps.values()):
        raise DivergentFactor("negative exponent on a pure r-power factor")
    acc = {(0, 0): 1}  # (j, L) -> coeff
    for l in sorted(l_exps):
        e = l_exps[l]
        row = [(0, 1)]
        term = 1
        j = 1
        top = e if e > 0 else jmax
        while j <= min(top, jmax):
            if e > 0:
                term = term * (e - j + 1) // j
                row.append((j, term if j % 2 == 0 else -term))
            else:
                term = term * (-e + j - 1) // j
                row.append((j, term))
            j += 1
        new = {}
        for (j1, L1), c1 in acc.items():
            for j2, c2 in row:
                j = j1 + j2
                if j > jmax:
                    break
                k = (j, L1 + j2 * l)
                new[k] = new.get(k, 0) + c1 * c2
        acc = new
    coeffs = {(4 * j * n, 4 * L, 4 * j * m): (c, 0)
              for (j, L), c in acc.items() if c}
    return FourierSeries3(coeffs, TruncRegion(REGION_INF, REGION_INF),
                          unit=4, ring=ring)


def eval_product(spec: ProductSpec, nmax4, mmax4, grade_cap=None) -> FourierSeries3:
    """Expand the product exactly on the region n4 <= nmax4, m4 <= mmax4."""
    region = TruncRegion(nmax4, mmax4)
    P = FourierSeries3(dict(spec.weyl.coeffs), region, unit=spec.weyl.unit,
                       ring=spec.weyl.ring).to_unit(4)
    zero_ls = spec.zero_block_ls()
    if zero_ls:
        P = P.mul(_factor_block(0, 0, zero_ls, max(e for e in zero_ls.values())),
                  grade_cap=grade_cap)
    for (n, m) in spec.negative_blocks():
        base_m = P.min_exponents()[1]
        jmax = (mmax4 - base_m) // (4 * m)
        if jmax > 0:
            P = P.mul(_factor_block(n, m, spec.block_exponents(n, m), jmax),
                      grade_cap=grade_cap)
    base_n, base_m = P.min_exponents()
    nb = (nmax4 - base_n) // 4
    mb = (mmax4 - base_m) // 4
    blocks = []
    for n in range(0, nb + 1):
        for m in range(0, mb + 1):
            if n + m == 0:
                continue
            if spec.range_rule == THM17 and m == 0 and n == 0:
                continue
            blocks.append((n, m))
    blocks.sort(key=lambda nm: (nm[0] + nm[1], nm[0]))
    for (n, m) in blocks:
        l_exps = spec.block_exponents(n, m)
        if not l_exps:
            continue
        jmax = REGION_INF
        if n:
            jmax = nb // n
        if m:
            jmax = min(jmax, mb // m)
        P = P.mul(_factor_block(n, m, l_exps, jmax), grade_cap=grade_cap)
    return P


# ------------------------------------------------------------------ recovery


def _unit_inv(c):
    u = _UNITS.get(c)
    if u is None:
        raise NotAProduct("leading coefficient %s is not a unit" % (c,))
    return u


def _lexmin(d):
    return min(d, key=lambda k: (k[0], k[2], k[1]))


def _divide(slice_coeffs, W, ring=GAUSS):
    """Exact division of a finite slice by a polynomial with unit lex-min
    coefficient; returns the quotient dict or raises NotAProduct."""
    if not slice_coeffs:
        return {}
    wmin = _lexmin(W)
    cinv = _unit_inv(W[wmin])
    work = dict(slice_coeffs)
    quotient = {}
    while work:
        tau = _lexmin(work)
        u = (tau[0] - wmin[0], tau[1] - wmin[1], tau[2] - wmin[2])
        qc = cmul(ring, work[tau], cinv)
        quotient[u] = qc
        for w, cw in W.items():
            k = (w[0] + u[0], w[1] + u[1], w[2] + u[2])
            sub = cmul(ring, cw, qc)
            old = work.get(k, (0, 0))
            val = (old[0] - sub[0], old[1] - sub[1])
            if val == (0, 0):
                work.pop(k, None)
            else:
                work[k] = val
    return quotient


def _div_one_minus_xj(poly, j):
    """Exact quotient poly / (1 - x^j) for a dense-dict polynomial in x."""
    deg = max(poly)
    if deg < j:
        raise NotAProduct("degree-0 block not divisible by (1 - r^-%d)" % j)
    q = {}
    for k in range(deg + 1):
        q[k] = poly.get(k, 0) + q.get(k - j, 0)
    for k in range(deg - j + 1, deg + 1):
        if q.get(k, 0):
            raise NotAProduct("degree-0 block not divisible by (1 - r^-%d)" % j)
    return {k: v for k, v in q.items() if v and k <= deg - j}


def _peel_univariate(B, floor_exp):
    """Split a polynomial in x = r^-1 (keys (0, -4j, 0)) into factors
    (1 - x^j)^(e_j); returns {l: e} with l = -j."""
    poly = {}
    for key, c in B.items():
        if key[0] or key[2] or key[1] > 0 or key[1] % 4:
            raise NotAProduct("degree-0 block has a non-r^(-1) term %s" % (key,))
        if c[1] != 0:
            raise NotAProduct("degree-0 block has an imaginary coefficient")
        poly[-key[1] // 4] = c[0]
    if poly.get(0) != 1:
        raise NotAProduct("degree-0 block is not monic")
    out = {}
    j = 1
    while any(k > 0 and v for k, v in poly.items()):
        if j > max(poly):
            raise NotAProduct("degree-0 block is not a product of (1 - r^-j) factors")
        e = -poly.get(j, 0)
        if e:
            out[-j] = e
            for _ in range(e):
                poly = _div_one_minus_xj(poly, j)
            for _ in range(-e):
                new = {}
                for k, v in poly.items():
                    new[k] = new.get(k, 0) + v
                    new[k + j] = new.get(k + j, 0) - v
                poly = {k: v for k, v in new.items() if v}
        j += 1
    return out


def recover_exponents(series: FourierSeries3, weyl: FourierSeries3,
                      range_rule=POSITIVE_CONE, index_rule=DISCRIMINANT,
                      floor=-1, grade_max=None, name=""):
    """Recover the exponent table of a product-shaped series.

    floor: declared most-negative table key (keys below it are zero).
    grade_max: largest factor degree n + m to peel; defaults to the largest
    readable from the series region.  The recovered table's covered set is
    exactly the keys witnessed by some admissible factor within bounds.
    """
    if range_rule not in (POSITIVE_CONE, B1):
        raise NotAProduct("recovery implemented for the nonnegative ranges only")
    S = series.to_unit(4)
    W = {k: v for k, v in weyl.to_unit(4).coeffs.items()}
    grades = {_grade(k) for k in W}
    if len(grades) != 1:
        raise NotAProduct("weyl polynomial must have a single total degree")
    g0 = grades.pop()
    by_grade = {}
    for k, v in S.coeffs.items():
        by_grade.setdefault(_grade(k), {})[k] = v
    if min(by_grade) != g0:
        raise NotAProduct("series and weyl leading degrees differ")

    # degree-0 block
    zero_ls = {}
    if range_rule == POSITIVE_CONE:
        B = _divide(by_grade[g0], W)
        zero_ls = _peel_univariate(B, floor)
    Wtilde = dict(by_grade[g0])   # weyl * degree-0 block, fixed reference
    region = S.region
    # Bound the factor degree so that every monomial of Wtilde_u for every
    # admissible u of that degree lies inside the region: then each degree
    # slice of (series - partial product) is complete and exact division by
    # Wtilde is sound (patterns of higher-degree factors live in strictly
    # higher degree slices and cannot interfere).
    readable = min((region.nmax - max(k[0] for k in Wtilde)) // 4,
                   (region.mmax - max(k[2] for k in Wtilde)) // 4)
    if grade_max is None:
        grade_max = readable
    elif grade_max > readable:
        raise NotAProduct("grade_max %d not readable from the series region" % grade_max)
    cap = g0 + 4 * grade_max

    P = FourierSeries3(dict(W), TruncRegion(region.nmax, region.mmax), unit=4)
    if zero_ls:
        P = P.mul(_factor_block(0, 0, zero_ls, max(zero_ls.values())), grade_cap=cap)

    entries = {}
    covered = set()

    def key_of(n, l, m):
        return 4 * n * m - l * l if index_rule == DISCRIMINANT else (n * m, l)

    def record(n, l, m, e):
        key = key_of(n, l, m)
        if key in entries and entries[key] != e:
            raise NotAProduct("inconsistent exponents at key %s: %d vs %d"
                              % (key, entries[key], e))
        if index_rule == DISCRIMINANT and key < floor and e:
            raise NotAProduct("nonzero exponent below the declared floor at %s" % key)
        entries[key] = e

    for t in range(1, grade_max + 1):
        g = g0 + 4 * t
        p_slice = {k: v for k, v in P.coeffs.items() if _grade(k) == g}
        s_slice = by_grade.get(g, {})
        resid = dict(s_slice)
        for k, v in p_slice.items():
            old = resid.get(k, (0, 0))
            val = (old[0] - v[0], old[1] - v[1])
            if val == (0, 0):
                resid.pop(k, None)
            else:
                resid[k] = val
        lin = _divide(resid, Wtilde)
        l_by_block = {}
        for u, c in lin.items():
            if u[0] % 4 or u[1] % 4 or u[2] % 4:
                raise NotAProduct("residual term at non-integer factor position %s" % (u,))
            n, l, m = u[0] // 4, u[1] // 4, u[2] // 4
            if n < 0 or m < 0 or n + m != t:
                raise NotAProduct("residual term outside the factor range at %s" % (u,))
            if c[1] != 0:
                raise NonIntegralExponent("imaginary exponent at %s" % (u,))
            e = -c[0]
            record(n, l, m, e)
            l_by_block.setdefault((n, m), {})[l] = e
        # mark every admissible factor position of this degree as witnessed
        for n in range(0, t + 1):
            m = t - n
            lo = 4 * n * m - floor
            lmax = isqrt(lo) if lo >= 0 else -1
            for l in range(-lmax, lmax + 1):
                covered.add(key_of(n, l, m))
                entries.setdefault(key_of(n, l, m), 0)
        for (n, m), l_exps in sorted(l_by_block.items()):
            l_exps = {l: e for l, e in l_exps.items() if e}
            if not l_exps:
                continue
            jmax = grade_max // t
            P = P.mul(_factor_block(n, m, l_exps, jmax), grade_cap=cap)

    # internal self-check: re-evaluated product reproduces the series
    for k, v in S.coeffs.items():
        if _grade(k) <= cap and P.region.contains(k):
            if P.coeffs.get(k, (0, 0)) != v:
                raise NotAProduct("self-check failed at %s" % (k,))
    for k, v in P.coeffs.items():
        if _grade(k) <= cap and S.region.contains(k) and k not in S.coeffs:
            raise NotAProduct("self-check failed at %s" % (k,))

    if range_rule == POSITIVE_CONE:
        for l, e in zero_ls.items():
            record(0, l, 0, e)
            covered.add(key_of(0, l, 0))
    entries = {k: v for k, v in entries.items() if v}
    return ExponentTable(DISCRIMINANT if index_rule == DISCRIMINANT else PAIR,
                         entries, floor=floor, covered=covered, name=name)
