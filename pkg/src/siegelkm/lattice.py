"""The rank-3 hyperbolic lattice behind the denominator identities: its two
index sublattices, reflections, simple-root systems, Weyl vectors, the
bridge between Fourier monomials and lattice vectors, anti-invariance and
denominator-structure checks, root multiplicities, and the verification
suite for the classified generalized Cartan matrices.

Basis (f2, f-2, f3) with Gram matrix ((0,-1,0), (-1,0,0), (0,0,2)); vectors
are coordinate triples of Fractions in that basis.  The three sublattice
tags select which simple-root system and Weyl vector apply:

    M10:  the full lattice
    M1I:  f2-, f3-, f-2-coefficients summing to an even number
    M1II: even f2- and f-2-coefficients
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .errors import DescentFailure, RankNotThree
from .series import FourierSeries3

GRAM = ((0, -1, 0), (-1, 0, 0), (0, 0, 2))

M10, M1I, M1II = "M10", "M1I", "M1II"

SIMPLE_ROOTS = {
    # coordinates in (f2, f-2, f3)
    M10: ((-1, 1, 0), (0, 0, 1), (1, 0, -1)),
    M1I: ((1, 0, 1), (1, 0, -1), (-1, 1, 0)),
    M1II: ((2, 0, -1), (0, 2, -1), (0, 0, 1)),
}

WEYL_VECTORS = {
    M10: (3, 2, Fraction(-1, 2)),
    M1I: (2, 1, 0),                      # solved from (rho, delta) = -1
    M1II: (1, 1, Fraction(-1, 2)),
}


def pairing(x, y):
    return sum(GRAM[i][j] * x[i] * y[j] for i in range(3) for j in range(3))


def norm(x):
    return pairing(x, x)


def reflect(x, delta):
    """s_delta(x) = x - (delta, x) delta, for (delta, delta) = 2."""
    if norm(delta) != 2:
        raise ValueError("reflection vector must have square 2")
    c = pairing(delta, x)
    return tuple(x[i] - c * delta[i] for i in range(3))


def in_sublattice(x, tag):
    """Membership of an integral-coordinate vector in the tagged lattice."""
    a, b, c = x  # f2, f-2, f3 coefficients
    if any(Fraction(t).denominator != 1 for t in x):
        return False
    if tag == M10:
        return True
    if tag == M1I:
        return (int(a) + int(b) + int(c)) % 2 == 0
    return int(a) % 2 == 0 and int(b) % 2 == 0


def monomial_in_M1II(n, l, m):
    """Whether the vector of q^n r^l s^m lies in the even sublattice."""
    return n % 2 == 0 and m % 2 == 0 and l % 2 == 0


def monomial_bridge(key, unit=4):
    """Vector of exp(pi i(N z1 + L z2 + M z3)): N f2 - (L/2) f3 + M f-2.

    key is a stored exponent triple in the given unit.
    """
    n, l, m = key
    half = Fraction(unit, 2)
    return (Fraction(n) / half, Fraction(m) / half, -Fraction(l) / (2 * half))


def bridge_inverse(vec, unit=4):
    a, b, c = vec
    half = Fraction(unit, 2)
    key = (a * half, -2 * c * half, b * half)
    assert all(x.denominator == 1 for x in key)
    return tuple(int(x) for x in key)


def monomial_vector_q(n, l, m):
    """Vector of q^n r^l s^m (full exponents): n f2 - (l/2) f3 + m f-2."""
    return (Fraction(n), Fraction(m), -Fraction(l, 2))


def vector_monomial_q(vec):
    a, b, c = vec
    return (int(a), int(-2 * c), int(b))


def simple_roots(tag):
    return [tuple(Fraction(x) for x in d) for d in SIMPLE_ROOTS[tag]]


def gram_of(vectors):
    return [[pairing(x, y) for y in vectors] for x in vectors]


def weyl_vector_check(tag):
    rho = WEYL_VECTORS[tag]
    return all(pairing(rho, d) == -1 for d in simple_roots(tag))


# -------------------------------------------------- exact linear algebra


def _row_reduce(rows):
    """Fraction Gaussian elimination; returns (rank, reduced rows)."""
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank, rows


def matrix_rank(mat):
    return _row_reduce(mat)[0]


def signature(mat):
    """(positives, negatives, zeros) of a symmetric rational matrix via
    congruence reduction (exact; no floating point)."""
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    pos = neg = 0
    idx = list(range(n))
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i]), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                        if a[i][j]), None)
            if off is None:
                break
            i, j = off
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for r in range(n):
                a[r][k], a[r][piv] = a[r][piv], a[r][k]
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        # congruence by v_i -> v_i - (a_ik/d) v_k: Schur complement
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
            a[k][i] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg


def solve_weyl_vector(mat):
    """Rational x with mat @ x = -1 (all-ones), or None if inconsistent.

    In the realization by simple roots delta_i, rho = sum x_j delta_j has
    (rho, delta_i) = -1 for all i; solvability is basis independent.
    """
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(-1)] for row in mat]
    rank_a = matrix_rank(mat)
    rank_aug, red = _row_reduce(aug)
    if rank_aug != rank_a:
        return None
    # back-substitute from the reduced augmented rows
    x = [Fraction(0)] * n
    for row in red[:rank_aug]:
        lead = next((j for j in range(n) if row[j]), None)
        if lead is None:
            continue
        x[lead] = row[n] - sum(row[j] * x[j] for j in range(lead + 1, n))
    # verify
    for i in range(n):
        if sum(Fraction(mat[i][j]) * x[j] for j in range(n)) != -1:
            return None
    return x


# ----------------------------------------------- symmetry / descent checks


def _support_vectors(series: FourierSeries3):
    out = {}
    for key, (re, im) in series.coeffs.items():
        assert im == 0
        vec = monomial_bridge(key, series.unit)
        # the product expansions pair vectors against -2 pi i(alpha, z):
        # exp(pi i(N z1 + ...)) corresponds to alpha = bridge/2
        out[tuple(x / 2 for x in vec)] = re
    return out


def antiinvariance_check(series: FourierSeries3, tag):
    """coefficient(v) = -coefficient(s_delta(v)) for every simple root and
    every support vector whose mirror stays inside the region."""
    sup = _support_vectors(series)
    region = series.region
    unit = series.unit
    violations = []
    checked = 0
    for delta in simple_roots(tag):
        for vec, coeff in sup.items():
            mirror = reflect(vec, delta)
            key = bridge_inverse(tuple(2 * x for x in mirror), unit)
            if not region.contains(key):
                continue
            checked += 1
            if sup.get(mirror, 0) != -coeff:
                violations.append((vec, delta, coeff, sup.get(mirror, 0)))
    return {"checked": checked, "violations": violations}


def denominator_structure(series: FourierSeries3, tag, max_steps=10000):
    """Fold the support into the fundamental chamber and read off the
    correction multiplicities.

    Every support vector must be w(rho + a) with a in the dual lattice
    intersected with the closed chamber cone; the coefficient must be
    det(w) times the coefficient at rho + a; the coefficient at rho is a
    unit and the table entry at a = 0 is -1.
    """
    sup = _support_vectors(series)
    rho = tuple(Fraction(x) for x in WEYL_VECTORS[tag])
    roots = simple_roots(tag)
    c_rho = sup.get(rho)
    report = {"unit_at_rho": c_rho in (1, -1), "violations": [],
              "descent_failures": 0}
    if c_rho not in (1, -1):
        return report, {}
    table = {}
    for vec, coeff in sup.items():
        v = vec
        det = 1
        for _ in range(max_steps):
            delta = next((d for d in roots if pairing(v, d) > 0), None)
            if delta is None:
                break
            v = reflect(v, delta)
            det = -det
        else:
            report["descent_failures"] += 1
            continue
        a = tuple(v[i] - rho[i] for i in range(3))
        if any(pairing(a, d) > 0 for d in roots):
            report["violations"].append(("chamber", vec))
            continue
        m_a = -det * coeff * c_rho   # c_rho in {1,-1}: its own inverse
        prev = table.get(a)
        if prev is not None and prev != m_a:
            report["violations"].append(("orbit", vec, prev, m_a))
        table[a] = m_a
    if table.get((Fraction(0),) * 3) != -1:
        report["violations"].append(("m(0)", table.get((Fraction(0),) * 3)))
    report["m0"] = table.get((Fraction(0),) * 3)
    report["entries"] = len(table)
    return report, table


def imaginary_root_representatives(tag, norm_bound):
    """One forward-cone lattice vector per realizable (norm, sublattice
    class) with -norm_bound <= (a,a) <= 0.

    Imaginary roots fill the closed forward cone, so the set at a fixed
    norm is infinite; multiplicities depend only on the norm (and, for the
    middle lattice, on membership in the even sublattice), so one
    representative per class suffices.
    """
    box = norm_bound + 4
    found = {}
    for a in range(0, box + 1):
        for b in range(0, a + 1):
            for c2 in range(0, 2 * box + 1):
                vec = (Fraction(a), Fraction(b), Fraction(c2, 2))
                if vec == (0, 0, 0):
                    continue
                if tag == M1II and (a % 2 or b % 2 or c2 % 2):
                    continue
                nn = norm(vec)
                if nn > 0 or -nn > norm_bound:
                    continue
                cls = M1II if in_sublattice(vec, M1II) else "other"
                key = (nn, cls if tag == M1I else "")
                if key not in found:
                    found[key] = vec
    return sorted(((vec, nn) for (nn, _), vec in found.items()),
                  key=lambda t: (-t[1], t[0]))


def mult_table(tag, f_lookup, f2_lookup, norm_bound):
    """(representative, (a,a), multiplicity) rows for the tagged algebra.

    M1II: mult = f(-(a,a)/2);  M10: mult = f2(-2(a,a));
    M1I:  mult = f2(-2(a,a)) - [a in the even sublattice] f(-(a,a)/2).
    Real roots (square 2) are listed with multiplicity 1.
    """
    rows = [(simple_roots(tag)[0], Fraction(2), 1)]
    for vec, nn in imaginary_root_representatives(tag, norm_bound):
        if tag == M1II:
            mult = f_lookup(_half(-nn))
        elif tag == M10:
            mult = f2_lookup(_int(-2 * nn))
        else:
            mult = f2_lookup(_int(-2 * nn))
            if in_sublattice(vec, M1II):
                mult -= f_lookup(_half(-nn))
        rows.append((vec, nn, mult))
    return rows


def _int(x):
    x = Fraction(x)
    assert x.denominator == 1
    return int(x)


def _half(x):
    return _int(Fraction(x) / 2)


# ---------------------------------------------------------- Cartan suite


def load_cartan_matrices():
    data = json.loads(resources.files("siegelkm.data")
                      .joinpath("cartan_matrices.json").read_text())
    return data["matrices"]


def cartan_checks(entry):
    """The six per-matrix checks: symmetric, diagonal 2, off-diagonal <= 0,
    rank 3, signature (2,1) of the rank-3 form, lattice Weyl vector exists."""
    mat = entry["gram"]
    n = len(mat)
    sym = all(mat[i][j] == mat[j][i] for i in range(n) for j in range(n))
    diag = all(mat[i][i] == 2 for i in range(n))
    off = all(mat[i][j] <= 0 for i in range(n) for j in range(n) if i != j)
    rank3 = matrix_rank(mat) == 3
    pos, neg, _ = signature(mat)
    sig = (pos, neg) == (2, 1)
    weyl = solve_weyl_vector(mat) is not None
    return {"name": entry["name"], "symmetric": sym, "diagonal_2": diag,
            "offdiag_nonpositive": off, "rank_3": rank3,
            "signature_2_1": sig, "weyl_vector": weyl,
            "pass": sym and diag and off and rank3 and sig and weyl}


def cartan_suite():
    results = [cartan_checks(e) for e in load_cartan_matrices()]
    # the rank-3 lattice of the parabolic classification endpoint
    u16 = [[0, -16, 0], [-16, 0, 0], [0, 0, 2]]
    pos, neg, zero = signature(u16)
    results.append({"name": "M_{4,0} = U(16)+<2>",
                    "signature_2_1": (pos, neg, zero) == (2, 1, 0),
                    "pass": (pos, neg, zero) == (2, 1, 0)})
    return results
