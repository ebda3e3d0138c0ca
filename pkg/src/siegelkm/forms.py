"""Named construction of every form and table the package exposes.

"order" throughout is the truncation extent (in quarter-integer exponent
steps) above a form's leading block, so order 16 means four full q-powers
past the lowest monomial regardless of where that monomial sits.  Builders
memoize per (name, order) within the process; the CLI adds the on-disk
cache on top.
"""

from __future__ import annotations

from fractions import Fraction

from . import hecke, products
from .errors import InsufficientFRange
from .jacobi import NormForm, jacobi_T0, mul_q_norm
from .qseries import delta12, eisenstein_series, eta_quotient_power, j_invariant
from .series import FourierSeries3, TruncRegion
from .tables import (DISCRIMINANT, ExponentTable, f2_table, fp_table,
                     fprime2_table)
from .theta import delta5_theta, maass_lift_delta5

F_GRADE = 20        # recovery degree of the master exponent table

BASES = {
    "delta5.theta": (2, 2), "delta5.maass": (2, 2), "delta5.product": (2, 2),
    "chi75": (24, 24), "delta35.product": (8, 8), "delta35.hecke": (8, 8),
    "delta30.product": (6, 6), "delta30tilde.product": (8, 4),
    "Fp.product(p=3)": (40, 16), "F5.product": (0, 0), "F5.lift": (0, 0),
}

_cache = {}


def _memo(key, build):
    if key not in _cache:
        _cache[key] = build()
    return _cache[key]


def clear_cache():
    _cache.clear()


# ----------------------------------------------------------- building blocks


def delta5(order: int) -> FourierSeries3:
    return _memo(("delta5.theta", order),
                 lambda: delta5_theta(2 + order, 2 + order))


def delta5_maass(order: int) -> FourierSeries3:
    return _memo(("delta5.maass", order),
                 lambda: maass_lift_delta5(2 + order, 2 + order))


def weyl_qrs_half():
    return FourierSeries3.monomial((2, 2, 2), 1)


def f_table(grade: int = F_GRADE) -> ExponentTable:
    def build():
        d5 = delta5(4 * grade)
        t = products.recover_exponents(d5, weyl_qrs_half(), name="table.f")
        assert t.lookup(-1) == 1 and t.lookup(0) == 10
        return t
    return _memo(("table.f", grade), build)


def f_norm_max(grade: int = F_GRADE) -> int:
    """Largest N with every norm key <= N covered by the master table
    (keys = 1, 2 mod 4 are never norms and do not count)."""
    def build():
        covered = f_table(grade).covered
        n = 0
        while (n + 1) % 4 in (1, 2) or (n + 1) in covered:
            n += 1
        return n
    return _memo(("f_norm_max", grade), build)


def f_normform(grade: int = F_GRADE) -> NormForm:
    t = f_table(grade)
    return NormForm(dict(t.entries), f_norm_max(grade), nmin=0, floor=-1)


def delta5_product(order: int) -> FourierSeries3:
    def build():
        spec = products.ProductSpec(weyl_qrs_half(), f_table())
        return products.eval_product(spec, 2 + order, 2 + order)
    return _memo(("delta5.product", order), build)


# ------------------------------------------------------------ derived tables


def _norm_range(lo, hi):
    return range(lo, hi + 1)


def f2(nmax_key: int) -> ExponentTable:
    return _memo(("table.f2", nmax_key),
                 lambda: f2_table(f_table(), _norm_range(-4, nmax_key)))


def f2prime(nmax_key: int) -> ExponentTable:
    return _memo(("table.f2prime", nmax_key),
                 lambda: fprime2_table(f_table(), _norm_range(-4, nmax_key)))


def fp(p: int, nmax_key: int) -> ExponentTable:
    def build():
        # the p^3 f(p^2 N) term may need the master table past its default
        # degree; rebuild deeper only when required
        grade = F_GRADE
        from math import isqrt
        while True:
            try:
                return fp_table(f_table(grade), p, _norm_range(-p * p, nmax_key))
            except InsufficientFRange:
                grade += 4
                if grade > F_GRADE + 8:
                    raise
    return _memo(("table.fp", p, nmax_key), build)


def _fp_key_range(p: int, order: int) -> int:
    """Largest norm key the odd-prime product can meet at this order: the
    negative-key factors push the leading exponent down by their full
    truncated powers, widening the block range accordingly."""
    base_m = 2 * (p * p - 1)
    mb = order // 4
    drop = 0
    m = 1
    while 4 * m <= p * p:
        nmin = -(p * p // (4 * m))
        jmax = (base_m + order) // (4 * m) - 4  # conservative power bound
        drop += -nmin * max(jmax, 0)
        m += 1
    nb = (order + 4 * drop) // 4
    return 4 * nb * mb


def _key_range(order: int) -> int:
    # largest norm key 4nm - l^2 over blocks with n, m <= order/4
    q = order // 4
    return 4 * q * q


# -------------------------------------------------------- product expansions


def weyl_delta35():
    return FourierSeries3.from_terms([((12, 4, 8), 1), ((8, 4, 12), -1)])


def weyl_delta30():
    return FourierSeries3.from_terms([((10, 2, 6), 1), ((6, 2, 10), -1)])


def build_delta35(order: int) -> FourierSeries3:
    def build():
        spec = products.ProductSpec(weyl_delta35(), f2(_key_range(order)))
        return products.eval_product(spec, 8 + order, 8 + order)
    return _memo(("delta35.product", order), build)


def build_delta30(order: int) -> FourierSeries3:
    def build():
        spec = products.ProductSpec(weyl_delta30(), f2prime(_key_range(order)))
        return products.eval_product(spec, 6 + order, 6 + order)
    return _memo(("delta30.product", order), build)


def build_delta30tilde(order: int) -> FourierSeries3:
    """Weyl monomial q^2 s, exponents f2(4nm-l^2) minus, on the even
    sublattice (n, l, m all even), f((4nm-l^2)/4)."""
    def build():
        t2 = f2(_key_range(order))
        f = f_table()

        def expo(n, l, m):
            key = 4 * n * m - l * l
            v = t2.lookup(key)
            if n % 2 == 0 and l % 2 == 0 and m % 2 == 0:
                v -= f.lookup(key // 4)
            return v

        spec = products.ProductSpec(
            FourierSeries3.monomial((8, 0, 4), 1), expo,
            range_rule=products.POSITIVE_CONE, neg_floor=-4)
        return products.eval_product(spec, 8 + order, 4 + order)
    return _memo(("delta30tilde.product", order), build)


def build_Fp(p: int, order: int) -> FourierSeries3:
    """Odd-prime Humbert form: weyl q^(5p(p^2-1)/12) r^(-(p-1)/2)
    s^((p^2-1)/2) (1 + r + ... + r^(p-1)), exponents fp(4nm-l^2)."""
    def build():
        e = 5 * p * (p * p - 1)
        assert e % 12 == 0
        qpow = e // 12
        base_n = 4 * qpow
        base_m = 2 * (p * p - 1)
        terms = [((base_n, 4 * (j - (p - 1) // 2), base_m), 1) for j in range(p)]
        weyl = FourierSeries3.from_terms(terms)
        table = fp(p, _fp_key_range(p, order))
        spec = products.ProductSpec(weyl, table, range_rule=products.THM17)
        return products.eval_product(spec, base_n + order, base_m + order)
    return _memo(("Fp.product", p, order), build)


# --------------------------------------------------------------- hecke route


def chi75(order: int) -> FourierSeries3:
    def build():
        T = 24 + order
        d5 = delta5(hecke.slash_input_order(2, T, T) - 2)
        return hecke.chi75(d5, T, T)
    return _memo(("chi75", order), build)


def delta35_hecke(order: int) -> FourierSeries3:
    """The weight-35 form with exponents measured from the fifteen-factor
    product: recover the combined table, strip eight copies of the
    weight-5 exponents, and re-expand over the weight-35 weyl factor."""
    def build():
        grade = 2 * ((order // 4) + 1)
        c75 = chi75(4 + 4 * grade)
        # normalize the leading coefficient to +1 (it is a unit)
        lead = c75[c75.lex_min_key()]
        inv = {(1, 0): (1, 0), (-1, 0): (-1, 0),
               (0, 1): (0, -1), (0, -1): (0, 1)}[tuple(lead)]
        c75n = c75.scale(inv)
        weyl = FourierSeries3.from_terms(
            [((28, 20, 24), 1), ((24, 20, 28), -1)])
        combined = products.recover_exponents(c75n, weyl, name="table.chi75")
        f = f_table()
        entries = {}
        for key in combined.covered:
            v = combined.lookup(key) - 8 * f.lookup(key)
            if v:
                entries[key] = v
        t = ExponentTable(DISCRIMINANT, entries, floor=-4,
                          covered=set(combined.covered), name="table.f2.hecke")
        spec = products.ProductSpec(weyl_delta35(), t)
        return products.eval_product(spec, 8 + order, 8 + order)
    return _memo(("delta35.hecke", order), build)


def mult_hecke_delta5(p: int, order_abs_n: int, order_abs_m: int):
    """[weight-5 form]_p as (series, scalar) on an absolute region."""
    def build():
        need = hecke.slash_input_order(p, order_abs_n, order_abs_m)
        d5 = delta5(need - 2)
        return hecke.mult_hecke(d5, p, 5, order_abs_n, order_abs_m)
    return _memo(("mult_hecke", p, order_abs_n, order_abs_m), build)


# --------------------------------------------------- weight-0 Jacobi layer


def phi01_norms(norm_max: int) -> NormForm:
    if norm_max > f_norm_max():
        raise InsufficientFRange("phi01 needs norms up to %d" % norm_max)
    return _memo(("phi01", norm_max),
                 lambda: NormForm(dict(f_table().entries), norm_max, floor=-1))


def phi5weak_norms(norm_max: int) -> NormForm:
    """The meromorphic weight-0 index-1 form behind the discriminant-5
    Humbert product: j*phi01 - 10 (phi01|T0(2)) - 660 phi01.

    The two pinned rows force the combination: the q^-1 row is r^-1 + r and
    the constant term is 48.  (The printed constant -680 next to the same
    display is inconsistent with those rows; -660 is the unique value
    matching them, and the product/lift agreement downstream confirms it.)
    """
    def build():
        f_n = f_normform()
        hi = norm_max
        jq = j_invariant(hi // 4 + 2)
        jphi = mul_q_norm(jq, f_n, hi)
        t0 = jacobi_T0(f_n, 2, weight=0, character=True, norm_max=hi)
        values = {}
        for N in range(-5, hi + 1):
            v = jphi(N) - 10 * t0(N) - 660 * f_n(N)
            if v:
                values[N] = v
        return NormForm(values, hi, nmin=-1, floor=-5)
    return _memo(("phi5weak", norm_max), build)


def g5_pair_table(nm_max: int) -> ExponentTable:
    """PAIR table g(nm, l) for the discriminant-5 product."""
    def build():
        from math import isqrt
        norms = phi5weak_norms(4 * nm_max + 8)
        entries = {}
        for nk in range(0, nm_max + 1):
            lmax = isqrt(4 * nk + 5)
            for l in range(-lmax, lmax + 1):
                v = norms(4 * nk - l * l)
                if v:
                    entries[(nk, l)] = v
        return ExponentTable("pair", entries, floor=-1, name="table.g5")
    return _memo(("table.g5", nm_max), build)


def weyl_F5():
    # r^-1 (qr - s)(q - rs) = q^2 - q r s - q r^-1 s + s^2
    return FourierSeries3.from_terms(
        [((8, 0, 0), 1), ((4, 4, 4), -1), ((4, -4, 4), -1), ((0, 0, 8), 1)])


def build_F5_product(order: int) -> FourierSeries3:
    def build():
        nm_max = (order // 4) ** 2
        table = g5_pair_table(nm_max)
        spec = products.ProductSpec(weyl_F5(), table, index_rule="pair",
                                    range_rule=products.B1)
        return products.eval_product(spec, order, order)
    return _memo(("F5.product", order), build)


def build_F5_lift(order: int) -> FourierSeries3:
    def build():
        qmax = order // 4 + 1
        norms = phi5weak_norms(4 * qmax + 8)
        rows = norms.materialize(qmax)
        eta48 = eta_quotient_power(48, order // 4)
        psi = FourierSeries3.from_terms(
            [((8 + 4 * k, 0, 0), c) for k, c in eta48.coeffs.items()])
        return hecke.exp_lift(psi, rows, order, order)
    return _memo(("F5.lift", order), build)


# ----------------------------------------------------------- one-variable


def qseries_form(name: str, order: int):
    qmax = max(order // 4, 1)
    if name == "E4":
        return eisenstein_series(4, qmax)
    if name == "E6":
        return eisenstein_series(6, qmax)
    if name == "Delta12":
        return delta12(qmax)
    if name == "j":
        return j_invariant(qmax)
    raise KeyError(name)
