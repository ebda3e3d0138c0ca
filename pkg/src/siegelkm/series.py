"""Exact sparse arithmetic on truncated three-variable Fourier expansions.

A monomial is exp(2*pi*i*(e1*z1 + e2*z2 + e3*z3)) with exponents e_j in
(1/unit)*Z; it is stored as the integer triple (n, l, m) = unit*(e1, e2, e3).
The canonical unit is 4 (quarter-integer exponents); theta constants need 8
internally and the odd-prime Hecke products need 12, so the unit is carried
per series and lifted to a common multiple on demand.

Coefficients are exact pairs (re, im) of arbitrary-precision integers over
one of two rings:

    ring "i":  re + im*i        (Gaussian integers)
    ring "w":  re + im*w        with w = exp(pi*i/3), so w^2 = w - 1

All final modular forms are real; the imaginary parts only appear in
intermediate factors carrying roots of unity from shifted substitutions.

Truncation: a region bounds n and m from above (l is either unbounded or
explicitly capped); every series built here has finite l-support per (n, m)
block.  Multiplication prunes to the sound region bound
min(a.nmax + min_n(b), b.nmax + min_n(a)) (and likewise in m), which reduces
to the plain intersection when both supports start at 0 but stays correct
for series whose support is offset by a leading monomial.

Multiplication is the hot loop.  Rows with a common (n, m) are convolved in
l as dense arrays; a per-output-block certificate (sum/max of L1 coefficient
norms) decides whether the int64 kernel (numba or numpy backend) is provably
overflow-free, otherwise that block falls back to arbitrary-precision Python
integers.  Results are bit-identical across backends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Optional

import numpy as np

from ._backend import get_accumulator
from .errors import InadmissibleSubstitution, NonIntegralResult, RegionTooLarge

REGION_INF = 10 ** 9

GAUSS = "i"
EISEN = "w"

# i^k and w^k as (re, im) pairs
_I_POW = ((1, 0), (0, 1), (-1, 0), (0, -1))
_W_POW = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

_INT64_MAX = 2 ** 63 - 1
_SAFE_SUM = 2 ** 62


class GaussInt(NamedTuple):
    """Exact ring coefficient: re + im*i (or re + im*w in ring "w")."""

    re: int
    im: int


def cmul(ring, a, b):
    ar, ai = a
    br, bi = b
    if ring == GAUSS:
        return (ar * br - ai * bi, ar * bi + ai * br)
    return (ar * br - ai * bi, ar * bi + ai * br + ai * bi)


def croot(ring, k):
    """Unit root: i^k in ring "i", w^k in ring "w"."""
    if ring == GAUSS:
        return _I_POW[k % 4]
    return _W_POW[k % 6]


@dataclass(frozen=True)
class TruncRegion:
    """Inclusive upper bounds on the n- and m-exponents (in the owner's
    unit); lmax=None means all l admissible."""

    nmax: int
    mmax: int
    lmax: Optional[int] = None

    def contains(self, key):
        n, l, m = key
        if n > self.nmax or m > self.mmax:
            return False
        return self.lmax is None or abs(l) <= self.lmax

    def scaled(self, k: int) -> "TruncRegion":
        return TruncRegion(self.nmax * k, self.mmax * k,
                           None if self.lmax is None else self.lmax * k)

    def intersect(self, other: "TruncRegion") -> "TruncRegion":
        if self.lmax is None:
            lmax = other.lmax
        elif other.lmax is None:
            lmax = self.lmax
        else:
            lmax = min(self.lmax, other.lmax)
        return TruncRegion(min(self.nmax, other.nmax), min(self.mmax, other.mmax), lmax)

    def covers(self, other: "TruncRegion") -> bool:
        if self.nmax < other.nmax or self.mmax < other.mmax:
            return False
        if self.lmax is None:
            return True
        return other.lmax is not None and self.lmax >= other.lmax


def _lift_key(key, k):
    return (key[0] * k, key[1] * k, key[2] * k)


class FourierSeries3:
    """Finite map {(n, l, m) -> (re, im)} plus region, unit and ring.

    Instances are immutable by convention: no method mutates self, and the
    coefficient dict must not be modified after construction.
    """

    __slots__ = ("coeffs", "region", "unit", "ring")

    def __init__(self, coeffs, region, unit=4, ring=GAUSS, _prune=True):
        if _prune:
            coeffs = {k: v for k, v in coeffs.items()
                      if (v[0] or v[1]) and region.contains(k)}
        self.coeffs = coeffs
        self.region = region
        self.unit = unit
        self.ring = ring

    # ------------------------------------------------------------------ basics

    @classmethod
    def zero(cls, region=None, unit=4, ring=GAUSS):
        region = region or TruncRegion(REGION_INF, REGION_INF)
        return cls({}, region, unit, ring, _prune=False)

    @classmethod
    def one(cls, region=None, unit=4, ring=GAUSS):
        region = region or TruncRegion(REGION_INF, REGION_INF)
        return cls({(0, 0, 0): (1, 0)}, region, unit, ring)

    @classmethod
    def monomial(cls, key, coeff=(1, 0), region=None, unit=4, ring=GAUSS):
        if isinstance(coeff, int):
            coeff = (coeff, 0)
        region = region or TruncRegion(REGION_INF, REGION_INF)
        return cls({tuple(key): tuple(coeff)}, region, unit, ring)

    @classmethod
    def from_terms(cls, terms: Iterable, region=None, unit=4, ring=GAUSS):
        """terms: iterable of (key, coeff) with coeff an int or (re, im)."""
        coeffs = {}
        for key, c in terms:
            if isinstance(c, int):
                c = (c, 0)
            key = tuple(key)
            if key in coeffs:
                old = coeffs[key]
                c = (old[0] + c[0], old[1] + c[1])
            coeffs[key] = c
        region = region or TruncRegion(REGION_INF, REGION_INF)
        return cls(coeffs, region, unit, ring)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, key):
        return GaussInt(*self.coeffs.get(tuple(key), (0, 0)))

    def is_zero(self):
        return not self.coeffs

    def is_real(self):
        return all(v[1] == 0 for v in self.coeffs.values())

    def min_exponents(self):
        """(min n, min m) over the support; (INF, INF) if empty."""
        if not self.coeffs:
            return (REGION_INF, REGION_INF)
        return (min(k[0] for k in self.coeffs), min(k[2] for k in self.coeffs))

    def lex_min_key(self):
        """Smallest support triple in the canonical (n, m, l) order."""
        if not self.coeffs:
            return None
        return min(self.coeffs, key=lambda k: (k[0], k[2], k[1]))

    def content_unit(self):
        """Largest d dividing every stored exponent (diagnostic; 0 if empty)."""
        g = 0
        for n, l, m in self.coeffs:
            g = gcd(g, gcd(n, gcd(l, m)))
        return g

    def support(self):
        return sorted(self.coeffs, key=lambda k: (k[0], k[2], k[1]))

    # ------------------------------------------------------------ unit / ring

    def to_unit(self, unit: int) -> "FourierSeries3":
        if unit == self.unit:
            return self
        if unit % self.unit == 0:
            k = unit // self.unit
            coeffs = {_lift_key(key, k): v for key, v in self.coeffs.items()}
            return FourierSeries3(coeffs, self.region.scaled(k), unit, self.ring,
                                  _prune=False)
        if self.unit % unit == 0:
            k = self.unit // unit
            coeffs = {}
            for key, v in self.coeffs.items():
                if key[0] % k or key[1] % k or key[2] % k:
                    raise NonIntegralResult(
                        "exponent %s not representable in unit %d" % (key, unit))
                coeffs[(key[0] // k, key[1] // k, key[2] // k)] = v
            region = TruncRegion(self.region.nmax // k, self.region.mmax // k,
                                 None if self.region.lmax is None
                                 else self.region.lmax // k)
            return FourierSeries3(coeffs, region, unit, self.ring, _prune=False)
        raise NonIntegralResult("incompatible units %d -> %d" % (self.unit, unit))

    def _coerce(self, other):
        unit = self.unit * other.unit // gcd(self.unit, other.unit)
        a, b = self.to_unit(unit), other.to_unit(unit)
        if a.ring == b.ring:
            return a, b, a.ring
        if b.is_real():
            return a, b, a.ring
        if a.is_real():
            return a, b, b.ring
        raise NonIntegralResult("cannot mix rings %r and %r" % (a.ring, b.ring))

    # ------------------------------------------------------------- add / neg

    def __add__(self, other):
        a, b, ring = self._coerce(other)
        region = a.region.intersect(b.region)
        coeffs = dict(a.coeffs)
        for key, v in b.coeffs.items():
            old = coeffs.get(key)
            if old is None:
                coeffs[key] = v
            else:
                coeffs[key] = (old[0] + v[0], old[1] + v[1])
        return FourierSeries3(coeffs, region, a.unit, ring)

    def __neg__(self):
        coeffs = {k: (-r, -i) for k, (r, i) in self.coeffs.items()}
        return FourierSeries3(coeffs, self.region, self.unit, self.ring, _prune=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff) -> "FourierSeries3":
        """Multiply every coefficient by an int or (re, im) scalar."""
        if isinstance(coeff, int):
            coeffs = {k: (r * coeff, i * coeff) for k, (r, i) in self.coeffs.items()}
        else:
            coeffs = {k: cmul(self.ring, v, coeff) for k, v in self.coeffs.items()}
        return FourierSeries3(coeffs, self.region, self.unit, self.ring)

    def divide_exact(self, d: int) -> "FourierSeries3":
        for k, (r, i) in self.coeffs.items():
            if r % d or i % d:
                raise NonIntegralResult("coefficient at %s not divisible by %d" % (k, d))
        coeffs = {k: (r // d, i // d) for k, (r, i) in self.coeffs.items()}
        return FourierSeries3(coeffs, self.region, self.unit, self.ring, _prune=False)

    def shift(self, key, coeff=(1, 0)) -> "FourierSeries3":
        """Multiply by a single monomial; the region shifts along."""
        if isinstance(coeff, int):
            coeff = (coeff, 0)
        dn, dl, dm = key
        coeffs = {}
        for (n, l, m), v in self.coeffs.items():
            coeffs[(n + dn, l + dl, m + dm)] = cmul(self.ring, v, coeff)
        region = TruncRegion(min(self.region.nmax + dn, REGION_INF),
                             min(self.region.mmax + dm, REGION_INF), None)
        return FourierSeries3(coeffs, region, self.unit, self.ring)

    def restrict(self, region: TruncRegion) -> "FourierSeries3":
        if not self.region.covers(region):
            raise RegionTooLarge("restriction region exceeds the series region")
        coeffs = {k: v for k, v in self.coeffs.items() if region.contains(k)}
        return FourierSeries3(coeffs, region, self.unit, self.ring, _prune=False)

    # ------------------------------------------------------------------- mul

    def __mul__(self, other):
        return self.mul(other)

    def mul(self, other, grade_cap=None) -> "FourierSeries3":
        """Truncated product.  grade_cap, if given, additionally prunes
        output blocks with n + m > grade_cap (same unit as the operands)."""
        a, b, ring = self._coerce(other)
        amin_n, amin_m = a.min_exponents()
        bmin_n, bmin_m = b.min_exponents()
        nmax = min(a.region.nmax + bmin_n, b.region.nmax + amin_n, REGION_INF)
        mmax = min(a.region.mmax + bmin_m, b.region.mmax + amin_m, REGION_INF)
        region = TruncRegion(nmax, mmax, None)
        if a.is_zero() or b.is_zero():
            return FourierSeries3.zero(region, a.unit, ring)
        coeffs = _convolve(a, b, nmax, mmax, grade_cap, ring)
        return FourierSeries3(coeffs, region, a.unit, ring, _prune=False)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative series power")
        result = FourierSeries3.one(unit=self.unit, ring=self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---------------------------------------------------------- substitution

    def substitute(self, sub: "VariableSubstitution", out_unit=None,
                   out_region=None) -> "FourierSeries3":
        """Apply z -> L z + t monomial-by-monomial.

        Each monomial exp(2 pi i e.z) maps to (unit root)^k exp(2 pi i (L^T e).z).
        For a diagonal L with positive entries the output region is the exact
        image of the input region and out_region may be omitted; for mixing L
        the caller must pass out_region and owns the guarantee that monomials
        beyond the input region cannot land inside it.
        """
        out_unit = out_unit or self.unit
        rows = sub.mat
        t = sub.shift
        diagonal = all(rows[i][j] == 0 for i in range(3) for j in range(3) if i != j)
        if out_region is None:
            if not (diagonal and all(rows[i][i] > 0 for i in range(3))):
                raise InadmissibleSubstitution(
                    "mixing substitution requires an explicit output region")
            out_region = TruncRegion(
                min(_floor_frac(self.region.nmax * Fraction(out_unit, self.unit) * rows[0][0]), REGION_INF),
                min(_floor_frac(self.region.mmax * Fraction(out_unit, self.unit) * rows[2][2]), REGION_INF),
                None)
        ring = self.ring
        coeffs = {}
        for (n, l, m), v in self.coeffs.items():
            e = (Fraction(n, self.unit), Fraction(l, self.unit), Fraction(m, self.unit))
            new_e = tuple(e[0] * rows[0][j] + e[1] * rows[1][j] + e[2] * rows[2][j]
                          for j in range(3))
            key = []
            for x in new_e:
                xi = x * out_unit
                if xi.denominator != 1:
                    raise InadmissibleSubstitution(
                        "image exponent %s leaves the 1/%d grid" % (x, out_unit))
                key.append(int(xi))
            key = tuple(key)
            if not out_region.contains(key):
                continue
            phase = e[0] * t[0] + e[1] * t[1] + e[2] * t[2]
            if phase.denominator == 1:
                tw = (1, 0)
            else:
                den = phase.denominator
                if den in (2, 4):
                    root = croot(GAUSS, phase.numerator * (4 // den))
                    if ring == EISEN and root[1] != 0:
                        raise InadmissibleSubstitution("i-twist on a w-ring series")
                    tw = root if ring == GAUSS or root[1] == 0 else None
                elif den in (3, 6):
                    if ring == GAUSS and not self.is_real():
                        raise InadmissibleSubstitution("w-twist on an i-ring series")
                    ring = EISEN
                    tw = croot(EISEN, phase.numerator * (6 // den))
                else:
                    raise InadmissibleSubstitution(
                        "twist exp(2 pi i %s) is not a supported unit root" % phase)
            c = cmul(ring, v, tw)
            old = coeffs.get(key)
            coeffs[key] = c if old is None else (old[0] + c[0], old[1] + c[1])
        return FourierSeries3(coeffs, out_region, out_unit, ring)

    # ------------------------------------------------------------ comparison

    def equal_report(self, other, region: TruncRegion, region_unit=4):
        """Exact comparison on a region (given in region_unit).

        Returns (True, None) or (False, (key, self_coeff, other_coeff)) with
        the lex-smallest differing triple in the canonical (n, m, l) order,
        reported in the common unit of the operands.
        """
        a, b, _ = self._coerce(other)
        k = a.unit // region_unit if a.unit % region_unit == 0 else None
        if k is None:
            a = a.to_unit(a.unit * region_unit // gcd(a.unit, region_unit))
            b = b.to_unit(a.unit)
            k = a.unit // region_unit
        reg = region.scaled(k)
        if not (a.region.covers(reg) and b.region.covers(reg)):
            raise RegionTooLarge("comparison region exceeds an operand region")
        bad = []
        for key in set(a.coeffs) | set(b.coeffs):
            if not reg.contains(key):
                continue
            va = a.coeffs.get(key, (0, 0))
            vb = b.coeffs.get(key, (0, 0))
            if va != vb:
                bad.append((key, va, vb))
        if not bad:
            return True, None
        key, va, vb = min(bad, key=lambda t: (t[0][0], t[0][2], t[0][1]))
        return False, (key, GaussInt(*va), GaussInt(*vb))

    def __eq__(self, other):
        if not isinstance(other, FourierSeries3):
            return NotImplemented
        a, b, _ = self._coerce(other)
        region = a.region.intersect(b.region)
        for key in set(a.coeffs) | set(b.coeffs):
            if region.contains(key):
                if a.coeffs.get(key, (0, 0)) != b.coeffs.get(key, (0, 0)):
                    return False
        return True

    __hash__ = None

    def __repr__(self):
        return "<FourierSeries3 %d terms, unit=%d, ring=%s, region=(%s,%s)>" % (
            len(self.coeffs), self.unit, self.ring,
            self.region.nmax, self.region.mmax)

    # ---------------------------------------------------------- serialization

    def serialize(self, form_name: str) -> bytes:
        """Canonical interchange bytes; equal series give identical output."""
        rows = [[n, l, m, str(r), str(i)]
                for (n, l, m), (r, i) in sorted(
                    self.coeffs.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1]))]
        region = {"nmax4": self.region.nmax, "mmax4": self.region.mmax}
        if self.region.lmax is not None:
            region["lmax4"] = self.region.lmax
        obj = {"form": form_name, "unit": self.unit, "ring": self.ring,
               "region": region, "coeffs": rows}
        return json.dumps(obj, separators=(",", ":")).encode()

    @classmethod
    def deserialize(cls, data: bytes):
        obj = json.loads(data)
        region = TruncRegion(obj["region"]["nmax4"], obj["region"]["mmax4"],
                             obj["region"].get("lmax4"))
        coeffs = {(n, l, m): (int(r), int(i)) for n, l, m, r, i in obj["coeffs"]}
        series = cls(coeffs, region, obj["unit"], obj.get("ring", GAUSS), _prune=False)
        return obj["form"], series


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


# ----------------------------------------------------------------- mul engine


class _Block:
    __slots__ = ("lmin", "lmax", "row", "arr_re", "arr_im", "arrayable",
                 "sum1", "max1")

    def __init__(self, row):
        # row: dict l -> (re, im)
        self.row = row
        self.lmin = min(row)
        self.lmax = max(row)
        s = m = 0
        small = True
        for r, i in row.values():
            w = abs(r) + abs(i)
            s += w
            if w > m:
                m = w
            if abs(r) > _INT64_MAX or abs(i) > _INT64_MAX:
                small = False
        self.sum1 = s
        self.max1 = m
        self.arrayable = small
        self.arr_re = None
        self.arr_im = None

    def arrays(self):
        if self.arr_re is None:
            width = self.lmax - self.lmin + 1
            re = np.zeros(width, dtype=np.int64)
            im = np.zeros(width, dtype=np.int64)
            for l, (r, i) in self.row.items():
                re[l - self.lmin] = r
                im[l - self.lmin] = i
            self.arr_re = re
            self.arr_im = im
        return self.arr_re, self.arr_im


def _block_view(series):
    blocks = {}
    for (n, l, m), v in series.coeffs.items():
        blocks.setdefault((n, m), {})[l] = v
    return {nm: _Block(row) for nm, row in blocks.items()}


def _convolve(a, b, nmax, mmax, grade_cap, ring):
    kern = get_accumulator()
    eisen = ring == EISEN
    ablocks = _block_view(a)
    bblocks = _block_view(b)
    out_pairs = {}
    for (na, ma), blk_a in ablocks.items():
        for (nb, mb), blk_b in bblocks.items():
            n, m = na + nb, ma + mb
            if n > nmax or m > mmax:
                continue
            if grade_cap is not None and n + m > grade_cap:
                continue
            out_pairs.setdefault((n, m), []).append((blk_a, blk_b))
    coeffs = {}
    for nm in sorted(out_pairs):
        pairs = out_pairs[nm]
        lmin = min(pa.lmin + pb.lmin for pa, pb in pairs)
        lmax = max(pa.lmax + pb.lmax for pa, pb in pairs)
        fast = kern is not None
        if fast:
            bound = 0
            for pa, pb in pairs:
                if not (pa.arrayable and pb.arrayable):
                    fast = False
                    break
                bound += min(pa.sum1 * pb.max1, pa.max1 * pb.sum1)
                if bound >= _SAFE_SUM:
                    fast = False
                    break
        n, m = nm
        if fast:
            width = lmax - lmin + 1
            out_re = np.zeros(width, dtype=np.int64)
            out_im = np.zeros(width, dtype=np.int64)
            for pa, pb in pairs:
                a_re, a_im = pa.arrays()
                b_re, b_im = pb.arrays()
                kern(out_re, out_im, a_re, a_im, b_re, b_im,
                     pa.lmin + pb.lmin - lmin, eisen)
            for idx in np.nonzero(out_re | out_im)[0]:
                coeffs[(n, lmin + int(idx), m)] = (int(out_re[idx]), int(out_im[idx]))
        else:
            acc = {}
            for pa, pb in pairs:
                for la, (ra, ia) in pa.row.items():
                    for lb, (rb, ib) in pb.row.items():
                        re = ra * rb - ia * ib
                        im = ra * ib + ia * rb
                        if eisen:
                            im += ia * ib
                        l = la + lb
                        old = acc.get(l)
                        acc[l] = (re, im) if old is None else (old[0] + re, old[1] + im)
            for l, v in acc.items():
                if v[0] or v[1]:
                    coeffs[(n, l, m)] = v
    return coeffs


# ---------------------------------------------------------------- substitution


@dataclass(frozen=True)
class VariableSubstitution:
    """Affine change of variables (z1,z2,z3) -> mat.(z1,z2,z3) + shift.

    mat is a 3x3 tuple-of-tuples of Fractions (rows index the new variable
    expressions), shift a 3-tuple of Fractions.  All denominators must keep
    image exponents on a representable grid and all twists must be unit
    roots of the coefficient ring; violations raise InadmissibleSubstitution.
    """

    mat: tuple
    shift: tuple

    @classmethod
    def make(cls, mat, shift=(0, 0, 0)):
        rows = tuple(tuple(Fraction(x) for x in row) for row in mat)
        return cls(rows, tuple(Fraction(x) for x in shift))

    @classmethod
    def scaling(cls, c1, c2, c3):
        return cls.make(((c1, 0, 0), (0, c2, 0), (0, 0, c3)))


def series_add(a, b):
    return a + b


def series_mul(a, b, grade_cap=None):
    return a.mul(b, grade_cap=grade_cap)


def series_pow(a, k):
    return a ** k


def series_equal(a, b, region, region_unit=4):
    return a.equal_report(b, region, region_unit)


def substitute(a, sub, out_unit=None, out_region=None):
    return a.substitute(sub, out_unit=out_unit, out_region=out_region)
