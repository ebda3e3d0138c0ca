"""Coset representatives for the similitude-p double coset, slash actions on
Fourier expansions, the multiplicative Hecke product (including the literal
fifteen-factor weight-75 form), the normalized additive operator, the
divisor-sum lift, the exponential lift, and the Humbert divisor count.

All coset representatives here are block upper triangular, so the action on
the upper half-plane is affine, Z -> (U Z U^t + B U^t)/p, and the action on
a monomial exp(2 pi i tr(N Z)) is N -> U^t N U / p together with a root of
unity from the shift.  Slash determinant powers are rational scalars: they
are tracked separately as Fractions so the series themselves stay in exact
integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import NonIntegralLiftCoefficient, RegionTooLarge
from .jacobi import JacobiSeries, NormForm, jacobi_T0, norm_table_of
from .qseries import QSeries
from .series import (FourierSeries3, TruncRegion, VariableSubstitution)


@dataclass(frozen=True)
class CosetRep:
    """One left-coset representative (A, B; 0, D) with D = p * A^(-t)."""

    u: tuple                 # 2x2 integer matrix A
    v_shift: tuple           # 2x2 symmetric rational B * A^t / p
    scale: Fraction          # 1/p
    similitude: int          # p
    det_factor: int          # det(D), constant since C = 0
    label: str = ""

    def substitution(self) -> VariableSubstitution:
        (u11, u12), (u21, u22) = self.u
        s = self.scale
        mat = ((u11 * u11 * s, 2 * u11 * u12 * s, u12 * u12 * s),
               (u11 * u21 * s, (u11 * u22 + u12 * u21) * s, u12 * u22 * s),
               (u21 * u21 * s, 2 * u21 * u22 * s, u22 * u22 * s))
        shift = (self.v_shift[0][0], self.v_shift[0][1], self.v_shift[1][1])
        return VariableSubstitution.make(mat, shift)


def coset_reps(p: int):
    """The (p^2+1)(p+1) representatives of the similitude-p double coset,
    with residues taken in {0, ..., p-1}."""
    reps = []
    fr = Fraction(1, p)
    reps.append(CosetRep(((p, 0), (0, p)), ((0, 0), (0, 0)), fr, p, 1, "diag"))
    for a1 in range(p):
        for a2 in range(p):
            for a3 in range(p):
                reps.append(CosetRep(((1, 0), (0, 1)),
                                     ((Fraction(a1, p), Fraction(a2, p)),
                                      (Fraction(a2, p), Fraction(a3, p))),
                                     fr, p, p * p, "X(%d,%d,%d)" % (a1, a2, a3)))
    for a in range(p):
        reps.append(CosetRep(((1, 0), (0, p)),
                             ((Fraction(a, p), 0), (0, 0)),
                             fr, p, p, "a(%d)" % a))
    for b1 in range(p):
        for b2 in range(p):
            reps.append(CosetRep(((p, 0), (-b1, 1)),
                                 ((0, 0), (0, Fraction(b2, p))),
                                 fr, p, p, "b(%d,%d)" % (b1, b2)))
    return reps


def slash_input_order(p: int, out_nmax4: int, out_mmax4: int) -> int:
    """Input region bound (both axes, unit 4) sufficient for every coset
    substitution to cover the target region, for series with hyperbolic
    support (l^2 <= n*m in unit-4 coordinates, n, m >= 0)."""
    return p * max(out_nmax4, out_mmax4) + 4


def slash_series(F: FourierSeries3, rep: CosetRep, out_nmax4, out_mmax4):
    """F(rep<Z>) as a series (unit scalar det_factor^(-k) NOT applied)."""
    need = slash_input_order(rep.similitude, out_nmax4, out_mmax4)
    if F.region.nmax < need or F.region.mmax < need:
        raise RegionTooLarge("slash input needs region %d, have (%d, %d)"
                             % (need, F.region.nmax, F.region.mmax))
    out_unit = 4 if rep.similitude == 2 else 4 * rep.similitude
    return F.substitute(rep.substitution(), out_unit=out_unit,
                        out_region=TruncRegion(out_nmax4 * out_unit // 4,
                                               out_mmax4 * out_unit // 4))


def _restricted_product(factors, out_nmax4, out_mmax4):
    """Product of factor series, each first pruned to the part that can
    still reach the target region once the other factors' minimal
    exponents are accounted for."""
    unit = max(f.unit for f in factors)
    factors = [f.to_unit(unit) for f in factors]
    scale = unit // 4
    mins = [f.min_exponents() for f in factors]
    total_n = sum(m[0] for m in mins)
    total_m = sum(m[1] for m in mins)
    series = None
    for f, (mn, mm) in zip(factors, mins):
        f = f.restrict(TruncRegion(out_nmax4 * scale - (total_n - mn),
                                   out_mmax4 * scale - (total_m - mm)))
        series = f if series is None else series * f
    return series


def mult_hecke(F: FourierSeries3, p: int, weight: int, out_nmax4, out_mmax4):
    """Product of the slash translates over coset_reps(p).

    Returns (series, scalar): the exact product of the unscaled substituted
    series, and the rational scalar prod det_factor^(-weight) it carries.
    """
    factors = []
    scalar = Fraction(1)
    for rep in coset_reps(p):
        factors.append(slash_series(F, rep, out_nmax4, out_mmax4))
        scalar /= Fraction(rep.det_factor) ** weight
    return _restricted_product(factors, out_nmax4, out_mmax4), scalar


CHI75_SUBSTITUTIONS = tuple(
    [VariableSubstitution.make(((Fraction(1, 2), 0, 0), (0, Fraction(1, 2), 0),
                                (0, 0, Fraction(1, 2))),
                               (Fraction(a, 2), Fraction(b, 2), Fraction(c, 2)))
     for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    + [VariableSubstitution.make(((Fraction(1, 2), 0, 0), (0, 1, 0), (0, 0, 2)),
                                 (Fraction(a, 2), 0, 0)) for a in (0, 1)]
    + [VariableSubstitution.make(((2, 0, 0), (0, 1, 0), (0, 0, Fraction(1, 2))),
                                 (0, 0, Fraction(a, 2))) for a in (0, 1)]
    + [VariableSubstitution.make(((2, 0, 0), (0, 2, 0), (0, 0, 2)))]
    + [VariableSubstitution.make(((2, 0, 0), (-1, 1, 0),
                                  (Fraction(1, 2), -1, Fraction(1, 2))),
                                 (0, 0, Fraction(b, 2))) for b in (0, 1)])


def chi75(delta5: FourierSeries3, out_nmax4, out_mmax4):
    """The weight-75 form as the literal product of fifteen rescaled and
    shifted copies of the weight-5 form (no scalar prefactor)."""
    need = slash_input_order(2, out_nmax4, out_mmax4)
    if delta5.region.nmax < need or delta5.region.mmax < need:
        raise RegionTooLarge("chi75 needs the weight-5 input at order %d" % need)
    out_region = TruncRegion(out_nmax4, out_mmax4)
    factors = [delta5.substitute(sub, out_unit=4, out_region=out_region)
               for sub in CHI75_SUBSTITUTIONS]
    return _restricted_product(factors, out_nmax4, out_mmax4)


def additive_Tp(F: FourierSeries3, p: int, weight: int, out_nmax4, out_mmax4):
    """Normalized coset sum: similitude^(2k-3) times the slash action.

    Returns (series, scalar) with the integral series and the overall
    rational scalar (p^-3), so the actual value is scalar * series.
    """
    total = None
    for rep in coset_reps(p):
        term = slash_series(F, rep, out_nmax4, out_mmax4)
        # p^(2k-3) * det_factor^(-k), times the common denominator p^(2k)
        w = p ** (2 * weight)
        w //= rep.det_factor ** weight
        term = term.scale(w)
        total = term if total is None else total + term
    return total, Fraction(1, p ** 3)


# -------------------------------------------------------------- Humbert count


def _quadric_pullback(ell, rep: CosetRep):
    """Pull the quadric e + a z1 + b z2 + c z3 + d(z2^2 - z1 z3) = 0 back
    under Z -> rep<Z> and primitivize; returns the new integer 5-tuple."""
    e, a, b, c, d = ell
    (u11, u12), (u21, u22) = rep.u
    s = rep.scale
    # affine coordinate images
    z1 = {(): rep.v_shift[0][0], (1,): u11 * u11 * s, (2,): 2 * u11 * u12 * s,
          (3,): u12 * u12 * s}
    z2 = {(): rep.v_shift[0][1], (1,): u11 * u21 * s,
          (2,): (u11 * u22 + u12 * u21) * s, (3,): u12 * u22 * s}
    z3 = {(): rep.v_shift[1][1], (1,): u21 * u21 * s, (2,): 2 * u21 * u22 * s,
          (3,): u22 * u22 * s}

    def poly_mul(f, g):
        out = {}
        for kf, vf in f.items():
            for kg, vg in g.items():
                k = tuple(sorted(kf + kg))
                out[k] = out.get(k, 0) + vf * vg
        return out

    def poly_add(f, g, cf=1, cg=1):
        out = {k: cf * v for k, v in f.items()}
        for k, v in g.items():
            out[k] = out.get(k, 0) + cg * v
        return out

    expr = poly_add(poly_mul(z2, z2), poly_mul(z1, z3), d, -d)
    for coeff, zi in ((a, z1), (b, z2), (c, z3)):
        expr = poly_add(expr, zi, 1, coeff)
    expr[()] = expr.get((), 0) + e
    # match against e' + a' z1 + b' z2 + c' z3 + d'(z2^2 - z1 z3)
    for bad in ((1, 1), (3, 3), (1, 2), (2, 3)):
        if expr.get(bad, 0):
            raise ValueError("pullback left the rational-quadric space")
    d2 = expr.get((2, 2), Fraction(0))
    if expr.get((1, 3), Fraction(0)) != -d2:
        raise ValueError("pullback left the rational-quadric space")
    vec = (expr.get((), Fraction(0)), expr.get((1,), Fraction(0)),
           expr.get((2,), Fraction(0)), expr.get((3,), Fraction(0)), d2)
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def divisor_discriminant(ell):
    e, a, b, c, d = ell
    return b * b - 4 * d * e - 4 * a * c


def _inverse_rep(rep: CosetRep) -> CosetRep:
    """The affine inverse of rep's action, in the same (U, V, 1/p) shape:
    Z' = (A Z A^t + B A^t)/p inverts to Z = (p A^-1) Z' (p A^-1)^t / p - A^-1 B."""
    (a11, a12), (a21, a22) = rep.u
    p = rep.similitude
    det = a11 * a22 - a12 * a21
    # p * A^-1 (integral for every representative family)
    u = ((Fraction(p * a22, det), Fraction(-p * a12, det)),
         (Fraction(-p * a21, det), Fraction(p * a11, det)))
    assert all(x.denominator == 1 for row in u for x in row)
    ui = tuple(tuple(int(x) for x in row) for row in u)
    # -A^-1 B = -(p A^-1) (B A^t) (p A^-1)^t / p^2 / ... computed directly
    b11 = rep.v_shift[0][0] * p
    b12 = rep.v_shift[0][1] * p
    b22 = rep.v_shift[1][1] * p
    # v_shift stored as B A^t / p, so B A^t = p * v_shift; A^-1 B = A^-1 (B A^t) A^-t
    m = ((b11, b12), (b12, b22))
    inv = ((Fraction(a22, det), Fraction(-a12, det)),
           (Fraction(-a21, det), Fraction(a11, det)))
    tmp = [[sum(inv[i][k] * m[k][j] for k in range(2)) for j in range(2)]
           for i in range(2)]
    v = [[-sum(tmp[i][k] * inv[j][k] for k in range(2)) for j in range(2)]
         for i in range(2)]
    return CosetRep(ui, ((v[0][0], v[0][1]), (v[1][0], v[1][1])),
                    Fraction(1, p), p, rep.det_factor, rep.label + "^-1")


def humbert_count(p: int):
    """(alpha, beta): how many coset representatives map the diagonal
    divisor (resp. the p*z2 = 1 divisor) onto a discriminant-1 divisor.

    The image M(H) is computed by substituting the inverse affine action
    into the divisor equation.
    """
    h1 = (0, 0, 1, 0, 0)       # z2 = 0
    hp = (-1, 0, p, 0, 0)      # p z2 = 1
    alpha = beta = 0
    for rep in coset_reps(p):
        inv = _inverse_rep(rep)
        if divisor_discriminant(_quadric_pullback(h1, inv)) == 1:
            alpha += 1
        if divisor_discriminant(_quadric_pullback(hp, inv)) == 1:
            beta += 1
    return alpha, beta


# ------------------------------------------------------------- lift operators


def maass_lift(rows, weight: int, nmax4, mmax4) -> FourierSeries3:
    """Divisor-sum lift of an index-1 cusp form given by its rows:
    coefficient(n, l, m) = sum over d | gcd(n, l, m) of
    d^(weight-1) c(n m / d^2, l / d), over n, m >= 1, 4nm - l^2 > 0."""
    c = rows.coeff_q if isinstance(rows, JacobiSeries) else rows
    coeffs = {}
    for n in range(1, nmax4 // 4 + 1):
        for m in range(1, mmax4 // 4 + 1):
            lmax = isqrt(4 * n * m - 1)
            for l in range(-lmax, lmax + 1):
                g = gcd(gcd(n, abs(l)), m)
                s = 0
                for d in range(1, g + 1):
                    if g % d == 0:
                        s += d ** (weight - 1) * c(n * m // (d * d), l // d)
                if s:
                    coeffs[(4 * n, 4 * l, 4 * m)] = (s, 0)
    return FourierSeries3(coeffs, TruncRegion(nmax4, mmax4), unit=4)


def tminus_lift_term(phi: JacobiSeries, weight: int, m: int, nmax4,
                     lift_index=1) -> FourierSeries3:
    """One lift term: for weight k > 0 the coefficient of q^(a n') r^(a l)
    s^(m * index) is a^(2k-3) d^(k-2) c(d n', l) over a*d = m, and for
    weight 0 it is d * c(d n', l) (scalar tracked by the caller as 1/m)."""
    coeffs = {}
    for a in range(1, m + 1):
        if m % a:
            continue
        d = m // a
        w = a ** (2 * weight - 3) * d ** (weight - 2) if weight > 0 else d
        for (n2, l2), c in phi.coeffs.items():
            if n2 % 2 or l2 % 2:
                raise NonIntegralLiftCoefficient("lift input must have integer rows")
            n, l = n2 // 2, l2 // 2
            if n % d:
                continue
            key = (4 * a * (n // d), 4 * a * l, 4 * m * lift_index)
            if key[0] <= nmax4:
                coeffs[key] = coeffs.get(key, (0, 0))
                coeffs[key] = (coeffs[key][0] + w * c, 0)
    return FourierSeries3(coeffs, TruncRegion(nmax4, 4 * m * lift_index), unit=4)


def _frac_mul(f, g, nmax4, mmax4):
    out = {}
    for (n1, l1, m1), c1 in f.items():
        for (n2, l2, m2), c2 in g.items():
            n, m = n1 + n2, m1 + m2
            if n <= nmax4 and m <= mmax4:
                k = (n, l1 + l2, m)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def exp_lift(psi_weyl: FourierSeries3, phi0: JacobiSeries, nmax4, mmax4):
    """psi_weyl * exp(-sum_{m>=1} (phi0 | T_-(m)) / m) for a weight-0 phi0.

    The inner sum has strictly positive s-order, so the exponential is a
    finite computation per s-block; every coefficient of the result must
    come out integral.
    """
    smax = mmax4 // 4
    expo = {}
    for m in range(1, smax + 1):
        for a in range(1, m + 1):
            if m % a:
                continue
            d = m // a
            for (n2, l2), c in phi0.coeffs.items():
                n, l = n2 // 2, l2 // 2
                if n % d:
                    continue
                key = (4 * a * (n // d), 4 * a * l, 4 * m)
                if key[0] <= nmax4:
                    expo[key] = expo.get(key, Fraction(0)) - Fraction(c, a)
    result = {(0, 0, 0): Fraction(1)}
    power = {(0, 0, 0): Fraction(1)}
    fact = 1
    for j in range(1, smax + 1):
        power = _frac_mul(power, expo, nmax4, mmax4)
        if not power:
            break
        fact *= j
        for k, v in power.items():
            result[k] = result.get(k, Fraction(0)) + v / fact
    lift = _frac_mul({k: Fraction(v[0]) for k, v in psi_weyl.to_unit(4).coeffs.items()},
                     result, nmax4, mmax4)
    coeffs = {}
    for k, v in lift.items():
        if v.denominator != 1:
            raise NonIntegralLiftCoefficient("non-integral coefficient %s at %s" % (v, k))
        coeffs[k] = (int(v), 0)
    return FourierSeries3(coeffs, TruncRegion(nmax4, mmax4), unit=4)


# ------------------------------------------------- lift/Hecke commutation


def verify_lift_commutation(f_table_norms: NormForm, order4: int, p: int = 2):
    """Check T_p(Lift(phi)) = Lift(phi | image of T_p) for the weight-12
    index-1 cusp form, built as (weight-12 one-variable cusp form) times the
    weight-0 generator.

    Returns a report dict with the comparison region and first mismatch.
    """
    from .jacobi import mul_q_norm
    from .qseries import delta12
    weight = 12
    in4 = slash_input_order(p, order4, order4)
    norm_hi = 4 * (in4 // 4) ** 2 + 4
    d12 = delta12(norm_hi // 4 + 1)
    c12 = mul_q_norm(d12, f_table_norms, norm_hi)
    lift = maass_lift(lambda n, l: c12(4 * n - l * l), weight, in4, in4)
    lhs, lhs_scalar = additive_Tp(lift, p, weight, order4, order4)

    # phi | J_k(T_p) = (integral T action) + (p^(k-1) + p^(k-2)) phi
    cj = jacobi_T0(c12, p, weight=weight, character=True,
                   norm_max=norm_hi // (p * p))
    wp = p ** (weight - 1) + p ** (weight - 2)
    rhs = maass_lift(lambda n, l: cj(4 * n - l * l) + wp * c12(4 * n - l * l),
                     weight, order4, order4)

    scaled_lhs = lhs.scale(lhs_scalar.numerator)
    scaled_rhs = rhs.scale(lhs_scalar.denominator)
    ok, witness = scaled_lhs.equal_report(scaled_rhs, TruncRegion(order4, order4))
    return {"equal": ok, "order4": order4, "p": p,
            "witness": None if ok else repr(witness)}
